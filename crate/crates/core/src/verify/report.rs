use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    VerifiedExact,
    VerifiedNumeric,
    Violated,
    InformativeOnly,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::VerifiedExact => "verified-exact",
            Status::VerifiedNumeric => "verified-numeric",
            Status::Violated => "violated",
            Status::InformativeOnly => "informative-only",
        })
    }
}

/// Outcome of one audit. `runtime` is wall-clock and therefore left out of
/// serialized reports.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub lemma_id: String,
    pub parameters: BTreeMap<String, String>,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
    /// Number of individual comparisons performed.
    pub checks: u64,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip)]
    pub runtime: f64,
}

impl LemmaReport {
    pub(crate) fn new(id: &str) -> Self {
        LemmaReport {
            lemma_id: id.to_string(),
            parameters: BTreeMap::new(),
            status: Status::VerifiedExact,
            lhs: String::new(),
            rhs: String::new(),
            checks: 0,
            notes: Vec::new(),
            counterexample: None,
            runtime: 0.0,
        }
    }

    pub(crate) fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub(crate) fn status(mut self, s: Status) -> Self {
        self.status = s;
        self
    }

    pub(crate) fn sides(mut self, lhs: impl ToString, rhs: impl ToString) -> Self {
        self.lhs = lhs.to_string();
        self.rhs = rhs.to_string();
        self
    }

    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Marks the report violated, keeping the first counterexample.
    pub(crate) fn violate(&mut self, counterexample: impl Into<String>) {
        self.status = Status::Violated;
        if self.counterexample.is_none() {
            self.counterexample = Some(counterexample.into());
        }
    }

    pub fn is_violated(&self) -> bool {
        self.status == Status::Violated
    }

    pub(crate) fn timed(mut self, start: Instant) -> Self {
        self.runtime = start.elapsed().as_secs_f64();
        self
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{:<18} {:<17} [{}]", self.lemma_id, self.status.to_string(), params.join(" "))?;
        if !self.lhs.is_empty() {
            write!(f, "  lhs={} rhs={}", self.lhs, self.rhs)?;
        }
        if let Some(c) = &self.counterexample {
            write!(f, "  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Wilson score interval for `k` successes in `n` trials at normal quantile `z`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.5758293035489;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // k=0: upper edge z^2/(n+z^2)
        let (lo, hi) = wilson_interval(0, 100, Z_99);
        assert_eq!(lo, 0.0);
        assert!((hi - Z_99 * Z_99 / (100.0 + Z_99 * Z_99)).abs() < 1e-12);
        // symmetric around 1/2 for k = n/2
        let (lo, hi) = wilson_interval(50, 100, Z_99);
        assert!((lo + hi - 1.0).abs() < 1e-12);
        // the edges solve (p - k/n)^2 = z^2 p (1 - p) / n
        for (k, n) in [(3u64, 40u64), (17, 90), (999, 10_000)] {
            let (lo, hi) = wilson_interval(k, n, Z_99);
            let ph = k as f64 / n as f64;
            let zz = Z_99 * Z_99 / n as f64;
            for e in [lo, hi] {
                assert!(((e - ph).powi(2) - zz * e * (1.0 - e)).abs() < 1e-12);
            }
        }
        assert_eq!(wilson_interval(0, 0, Z_99), (0.0, 1.0));
    }

    #[test]
    fn violation_keeps_first() {
        let mut r = LemmaReport::new("x");
        r.violate("a");
        r.violate("b");
        assert!(r.is_violated());
        assert_eq!(r.counterexample.as_deref(), Some("a"));
        let json = serde_json::to_string(&r).unwrap();
        assert!(!json.contains("runtime"));
        assert!(json.contains("\"violated\""));
    }
}
