use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::real::Real;
use crate::error::{Error, Result};

/// Exact rational read from `"0.23"`, `"23/100"`, `"-1/5"` or `"2744"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty()) || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let r = BigRational::new(num, BigInt::from(10u32).pow(frac.len() as u32));
    Ok(if neg { -r } else { r })
}

/// Shortest exact rendering: decimal when the denominator is `2^a 5^b`.
pub fn format_rational(r: &BigRational) -> String {
    let mut den = r.denom().clone();
    let mut scale = 0u32;
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    for p in [&two, &five] {
        while (&den % p).is_zero() {
            den /= p;
        }
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    while !(r * BigRational::from_integer(BigInt::from(10u32).pow(scale))).is_integer() {
        scale += 1;
    }
    let int = (r * BigRational::from_integer(BigInt::from(10u32).pow(scale))).to_integer();
    if scale == 0 {
        return int.to_string();
    }
    let digits = int.abs().to_string();
    let digits = format!("{}{}", "0".repeat((scale as usize + 1).saturating_sub(digits.len())), digits);
    let (a, b) = digits.split_at(digits.len() - scale as usize);
    format!("{}{a}.{b}", if int.is_negative() { "-" } else { "" })
}

/// An exact constant that prints as in the configuration file.
#[derive(Clone, PartialEq, Eq)]
pub struct Exact(pub BigRational);

impl Exact {
    pub fn parse(s: &str) -> Result<Self> {
        parse_rational(s).map(Exact)
    }

    pub fn real(&self) -> Real {
        Real::from_rational(&self.0)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn ex(s: &str) -> Exact {
    Exact::parse(s).expect("literal")
}

/// The named constants of the argument. `gamma` and `c1` are powers of two
/// and are stored through their exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaperConstants {
    pub q: u64,
    pub big_k: Exact,
    pub kappa: Exact,
    pub t: u64,
    pub gamma_log2: Exact,
    pub c1_log2: Exact,
    pub c2: Exact,
    pub b: Exact,
    pub epsilon: Exact,
    pub n0: u64,
    pub beta_cap: Exact,
    pub f_cap: Exact,
    pub exponent: Exact,
}

impl Default for PaperConstants {
    fn default() -> Self {
        PaperConstants {
            q: 2744,
            big_k: ex("0.1"),
            kappa: ex("0.07"),
            t: 14,
            gamma_log2: ex("-1/5"),
            c1_log2: ex("6/5"),
            c2: ex("4.3"),
            b: ex("0.23"),
            epsilon: ex("0.004"),
            n0: 2744,
            beta_cap: ex("0.152"),
            f_cap: ex("0.24"),
            exponent: ex("3/5"),
        }
    }
}

impl PaperConstants {
    pub const KEYS: [&'static str; 13] = [
        "q", "K", "kappa", "t", "gamma_log2", "c1_log2", "c2", "b", "epsilon", "n0", "beta_cap", "f_cap",
        "exponent",
    ];

    pub fn gamma(&self) -> Real {
        self.gamma_log2.real().exp2().expect("small exponent")
    }

    pub fn c1(&self) -> Real {
        self.c1_log2.real().exp2().expect("small exponent")
    }

    /// Overrides one field by name (see [`PaperConstants::KEYS`]).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let int = |v: &str| {
            v.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("{key} must be a positive integer, got {v:?}")))
        };
        match key {
            "q" => self.q = int(value)?,
            "t" => self.t = int(value)?,
            "n0" => self.n0 = int(value)?,
            "K" => self.big_k = Exact::parse(value)?,
            "kappa" => self.kappa = Exact::parse(value)?,
            "gamma_log2" => self.gamma_log2 = Exact::parse(value)?,
            "c1_log2" => self.c1_log2 = Exact::parse(value)?,
            "c2" => self.c2 = Exact::parse(value)?,
            "b" => self.b = Exact::parse(value)?,
            "epsilon" => self.epsilon = Exact::parse(value)?,
            "beta_cap" => self.beta_cap = Exact::parse(value)?,
            "f_cap" => self.f_cap = Exact::parse(value)?,
            "exponent" => self.exponent = Exact::parse(value)?,
            _ => return Err(Error::Parse(format!("unknown constant {key:?}"))),
        }
        Ok(())
    }

    /// `(name, value)` pairs in [`PaperConstants::KEYS`] order.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        let v = [
            self.q.to_string(),
            self.big_k.to_string(),
            self.kappa.to_string(),
            self.t.to_string(),
            self.gamma_log2.to_string(),
            self.c1_log2.to_string(),
            self.c2.to_string(),
            self.b.to_string(),
            self.epsilon.to_string(),
            self.n0.to_string(),
            self.beta_cap.to_string(),
            self.f_cap.to_string(),
            self.exponent.to_string(),
        ];
        Self::KEYS.into_iter().zip(v).collect()
    }

    pub fn is_default(&self) -> bool {
        *self == Self::default()
    }

    /// `gamma < 1`, `0 < kappa < K < 1/4`, and positivity of the rest.
    pub fn validate(&self) -> Result<()> {
        let zero = BigRational::zero();
        let quarter = BigRational::new(1.into(), 4.into());
        let mut errs = Vec::new();
        if self.gamma_log2.0 >= zero {
            errs.push("gamma must be below 1 (gamma_log2 < 0)".to_string());
        }
        if !(zero < self.kappa.0 && self.kappa.0 < self.big_k.0 && self.big_k.0 < quarter) {
            errs.push("need 0 < kappa < K < 1/4".to_string());
        }
        if self.t == 0 || self.q < 3 || self.n0 < 2 {
            errs.push("need t >= 1, q >= 3, n0 >= 2".to_string());
        }
        for (name, v) in [("c2", &self.c2), ("b", &self.b), ("epsilon", &self.epsilon)] {
            if v.0 <= zero {
                errs.push(format!("{name} must be positive"));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid(errs.join("; ")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("0.23").unwrap(), q(23, 100));
        assert_eq!(parse_rational("23/100").unwrap(), q(23, 100));
        assert_eq!(parse_rational("-1/5").unwrap(), q(-1, 5));
        assert_eq!(parse_rational("-.5").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("2744").unwrap(), q(2744, 1));
        for bad in ["", "abc", "1/0", "1.2.3", "1e5", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert_eq!(format_rational(&q(23, 100)), "0.23");
        assert_eq!(format_rational(&q(-1, 5)), "-0.2");
        assert_eq!(format_rational(&q(1, 3)), "1/3");
        assert_eq!(format_rational(&q(7, 1)), "7");
        assert_eq!(format_rational(&q(1, 250)), "0.004");
    }

    #[test]
    fn defaults_are_valid() {
        let c = PaperConstants::default();
        c.validate().unwrap();
        assert!(c.gamma() < Real::one());
        assert!((c.gamma().to_f64() - 2f64.powf(-0.2)).abs() < 1e-15);
        assert!((c.c1().to_f64() - 2f64.powf(1.2)).abs() < 1e-15);
        assert_eq!(c.q, 14u64.pow(3));
        assert_eq!(c.fields()[1], ("K", "0.1".to_string()));
    }

    #[test]
    fn overrides() {
        let mut c = PaperConstants::default();
        c.set("b", "0.2").unwrap();
        assert_eq!(c.b.0, q(1, 5));
        assert!(!c.is_default());
        c.set("gamma_log2", "1/5").unwrap();
        assert!(c.validate().is_err());
        assert!(c.set("nope", "1").is_err());
        assert!(c.set("t", "x").is_err());
        let mut c = PaperConstants::default();
        c.set("kappa", "0.2").unwrap();
        assert!(c.validate().is_err());
    }
}
