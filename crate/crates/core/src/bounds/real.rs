//! Software binary floating point with a 192-bit mantissa, used for the
//! analytic (non-combinatorial) quantities: entropies, logarithms and
//! fractional powers.
//!
//! Value is `mant * 2^exp` with `|mant|` normalized to exactly [`PREC`]
//! bits (or zero). Elementary functions are evaluated by series to full
//! precision; a handful of ulps of error remain, i.e. about `2^-185`
//! relative.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const PREC: u64 = 192;

#[derive(Clone)]
pub struct Real {
    mant: BigInt,
    exp: i64,
}

fn shift_round(m: &BigInt, k: u64) -> BigInt {
    // round-half-up on the magnitude
    let sign = m.sign();
    let mag = m.abs();
    let half = BigInt::one() << (k - 1);
    let r = (mag + half) >> k;
    if sign == Sign::Minus {
        -r
    } else {
        r
    }
}

impl Real {
    fn from_parts(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Real { mant, exp: 0 };
        }
        let bits = mant.bits();
        let (mant, exp) = match bits.cmp(&PREC) {
            Ordering::Greater => {
                let k = bits - PREC;
                (shift_round(&mant, k), exp + k as i64)
            }
            Ordering::Less => {
                let k = PREC - bits;
                (mant << k, exp - k as i64)
            }
            Ordering::Equal => (mant, exp),
        };
        // rounding may carry into one extra bit
        if mant.bits() > PREC {
            return Real { mant: mant >> 1u32, exp: exp + 1 };
        }
        Real { mant, exp }
    }

    pub fn zero() -> Self {
        Real { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_parts(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Self::from_parts(v.clone(), 0)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let shift = (PREC + 2 + den.bits()).saturating_sub(num.bits()) as i64;
        let q = (num << shift as u64) / den;
        Self::from_parts(q, -shift)
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::from_ratio(r.numer(), r.denom())
    }

    /// Exact conversion (every finite `f64` is dyadic).
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return Self::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | 1 << 52, raw_exp - 1075)
        };
        Self::from_parts(BigInt::from(m) * sign, e)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Real {
        Real { mant: self.mant.abs(), exp: self.exp }
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.exp + PREC as i64 - 1)
    }

    pub fn mul_pow2(&self, k: i64) -> Real {
        if self.is_zero() {
            return self.clone();
        }
        Real { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let top = (&self.mant >> (PREC - 64) as u32).to_i128().expect("64-bit head") as f64;
        let e = self.exp + (PREC as i64 - 64);
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0 * top.signum();
        }
        // split the scaling to avoid intermediate overflow
        let half = (e / 2) as i32;
        top * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    /// Exact rational value of this approximation.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Decimal rendering rounded to `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scaled = self.to_rational() * BigRational::from_integer(BigInt::from(10u32).pow(digits as u32));
        let int = scaled.round().to_integer();
        let neg = int.is_negative();
        let s = int.abs().to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (whole, frac) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{whole}")
        } else {
            format!("{sign}{whole}.{frac}")
        }
    }

    pub fn powi(&self, mut k: u64) -> Real {
        let mut base = self.clone();
        let mut acc = Real::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn sqrt(&self) -> Result<Real> {
        if self.is_negative() {
            return Err(Error::invalid("square root of a negative number"));
        }
        if self.is_zero() {
            return Ok(Real::zero());
        }
        // make the exponent even and leave 2*PREC bits under the root
        let mut m = self.mant.clone() << (PREC as u32 + 2);
        let mut e = self.exp - PREC as i64 - 2;
        if e % 2 != 0 {
            m <<= 1u32;
            e -= 1;
        }
        Ok(Real::from_parts(m.sqrt(), e / 2))
    }

    pub fn ln(&self) -> Result<Real> {
        if !self.is_positive() {
            return Err(Error::invalid("logarithm of a non-positive number"));
        }
        // x = m * 2^k with m in [1/sqrt2, sqrt2)
        let mut k = self.exp + PREC as i64 - 1;
        let mut m = Real { mant: self.mant.clone(), exp: -(PREC as i64 - 1) };
        if &m > Real::sqrt2() {
            m = m.mul_pow2(-1);
            k += 1;
        }
        let z = &(&m - &Real::one()) / &(&m + &Real::one());
        Ok(&(&Real::from_int(k) * Real::ln2()) + &atanh_series(&z).mul_pow2(1))
    }

    pub fn log2(&self) -> Result<Real> {
        Ok(&self.ln()? / Real::ln2())
    }

    pub fn exp(&self) -> Result<Real> {
        if self.is_zero() {
            return Ok(Real::one());
        }
        if self.exponent().unwrap_or(0) > 40 {
            return Err(Error::invalid("exponent argument out of range"));
        }
        let ln2 = Real::ln2();
        let k = (self / ln2).round_to_i64();
        let r = self - &(&Real::from_int(k) * ln2);
        // Taylor series, |r| <= ln2/2
        let mut term = Real::one();
        let mut sum = Real::one();
        for i in 1.. {
            term = &(&term * &r) / &Real::from_int(i);
            if term.is_zero() || term.exponent().unwrap() < -(PREC as i64) - 8 {
                break;
            }
            sum = &sum + &term;
        }
        Ok(sum.mul_pow2(k))
    }

    pub fn exp2(&self) -> Result<Real> {
        (self * Real::ln2()).exp()
    }

    /// `self^y` for `self > 0`; `0^y = 0` for `y > 0`.
    pub fn pow(&self, y: &Real) -> Result<Real> {
        if self.is_zero() && y.is_positive() {
            return Ok(Real::zero());
        }
        (&self.ln()? * y).exp()
    }

    fn round_to_i64(&self) -> i64 {
        self.to_rational().round().to_integer().to_i64().expect("small integer")
    }

    pub fn ln2() -> &'static Real {
        static LN2: OnceLock<Real> = OnceLock::new();
        LN2.get_or_init(|| atanh_series(&Real::from_ratio(&1.into(), &3.into())).mul_pow2(1))
    }

    fn sqrt2() -> &'static Real {
        static SQRT2: OnceLock<Real> = OnceLock::new();
        SQRT2.get_or_init(|| Real::from_int(2).sqrt().expect("positive"))
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Real) -> Real {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// `atanh z = z + z^3/3 + z^5/5 + ...` for `|z| < 1/2`.
fn atanh_series(z: &Real) -> Real {
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = z.clone();
    for k in 1u64.. {
        power = &power * &z2;
        let term = &power / &Real::from_int(2 * k as i64 + 1);
        if term.is_zero() || term.exponent().unwrap() < -(PREC as i64) - 8 {
            break;
        }
        sum = &sum + &term;
    }
    sum
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Real {}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self - other;
        match d.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl<'a> Add<&'a Real> for &'a Real {
    type Output = Real;
    fn add(self, rhs: &'a Real) -> Real {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (hi, lo) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let gap = (hi.exp - lo.exp) as u64;
        if gap > 2 * PREC + 8 {
            return hi.clone();
        }
        Real::from_parts((&hi.mant << gap) + &lo.mant, lo.exp)
    }
}

impl<'a> Sub<&'a Real> for &'a Real {
    type Output = Real;
    fn sub(self, rhs: &'a Real) -> Real {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Real> for &'a Real {
    type Output = Real;
    fn mul(self, rhs: &'a Real) -> Real {
        Real::from_parts(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl<'a> Div<&'a Real> for &'a Real {
    type Output = Real;
    fn div(self, rhs: &'a Real) -> Real {
        assert!(!rhs.is_zero(), "division by zero");
        let shift = PREC + 4;
        Real::from_parts((&self.mant << shift) / &rhs.mant, self.exp - rhs.exp - shift as i64)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -&self.mant, exp: self.exp }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &'a Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Real> for &'a Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

impl From<i64> for Real {
    fn from(v: i64) -> Self {
        Real::from_int(v)
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({:e})", self.to_f64())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => f.write_str(&self.to_decimal(p)),
            None => write!(f, "{}", self.to_f64()),
        }
    }
}
