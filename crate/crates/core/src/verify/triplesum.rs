use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::cx::DcSweep;
use super::report::{wilson_interval, LemmaReport, Status, Z_99};
use super::experiment::trial_seed;
use crate::codes::{class_cn, odd_prime_power, DoubleCirculantCode};
use crate::error::{Error, Result};
use crate::spectrum::{min_distance_capped, weight_distribution, WeightDistribution, DEFAULT_DIM_LIMIT};

/// Monte Carlo comparisons are made only where the bound is below this.
pub const MC_BOUND_CEILING: f64 = 0.9;
pub const DEFAULT_MC_SAMPLES: u64 = 10_000;

/// Spectra of the classes at lengths `n, n/p, ..., p`.
pub struct TripleSum {
    p: usize,
    m: u32,
    levels: Vec<(usize, Vec<WeightDistribution>)>,
}

impl TripleSum {
    pub fn new(p: usize, m: u32) -> Result<Self> {
        let n = p.checked_pow(m).ok_or_else(|| Error::invalid("length overflows"))?;
        if odd_prime_power(n)?.0 != p {
            return Err(Error::invalid(format!("{p} is not the prime of {n}")));
        }
        let mut levels = Vec::new();
        for s in 0..m {
            let len = p.pow(m - s);
            let spectra = class_cn(len)?
                .iter()
                .map(|c| weight_distribution(c, DEFAULT_DIM_LIMIT))
                .collect::<Result<Vec<_>>>()?;
            levels.push((len, spectra));
        }
        Ok(TripleSum { p, m, levels })
    }

    pub fn n(&self) -> usize {
        self.p.pow(self.m)
    }

    /// `sum_{s<m} sum_{C in class(n/p^s)} sum_{i+j <= w/p^s} A_i A_j / (|C| n/p^s)`.
    pub fn bound(&self, w: u64) -> BigRational {
        let mut acc = BigRational::zero();
        for (s, (len, spectra)) in self.levels.iter().enumerate() {
            let ws = (w / (self.p as u64).pow(s as u32)) as usize;
            for wd in spectra {
                let mut pairs = BigUint::zero();
                for (i, a) in wd.counts().iter().enumerate().take(ws + 1) {
                    pairs += a * wd.cumulative(ws - i);
                }
                let den = BigInt::from(wd.total()) * BigInt::from(*len);
                acc += BigRational::new(BigInt::from(pairs), den);
            }
        }
        acc
    }
}

/// One radius of the triple-sum audit.
#[derive(Clone, Debug)]
pub struct TripleSumOutcome {
    pub w: u64,
    pub bound: BigRational,
    /// Exact `Pr[X(w) > 0]` when the length allows a full sweep.
    pub exact: Option<BigRational>,
    /// `(hits, samples, wilson_low, wilson_high)` from sampled codes.
    pub monte_carlo: Option<(u64, u64, f64, f64)>,
}

impl TripleSumOutcome {
    pub fn report(&self, p: usize, m: u32) -> LemmaReport {
        let bound_f = self.bound.to_f64().unwrap_or(f64::INFINITY);
        let mut r = LemmaReport::new("triplesum")
            .param("p", p)
            .param("m", m)
            .param("w", self.w);
        r.checks = 1;
        if let Some(exact) = &self.exact {
            r = r.sides(exact, format!("{:.6}", bound_f));
            if *exact > self.bound {
                r.violate(format!("Pr[X({})>0] = {exact} exceeds {}", self.w, self.bound));
            }
        } else if let Some((hits, samples, lo, hi)) = self.monte_carlo {
            r = r
                .status(Status::InformativeOnly)
                .sides(format!("{hits}/{samples} (99% upper {hi:.6})"), format!("{bound_f:.6}"));
            if lo > bound_f {
                r.violate(format!("99% Wilson interval [{lo:.6}, {hi:.6}] lies above the bound"));
            } else if hi >= bound_f {
                r.note("Wilson upper edge not below the bound");
            }
        } else {
            r = r.status(Status::InformativeOnly).sides("-", format!("{bound_f:.6}"));
            r.note(format!("bound >= {MC_BOUND_CEILING}; not sampled"));
        }
        r
    }
}

/// Evaluates the bound at each radius and compares it with the exact
/// probability (`n <= 14`) or with `samples` random codes.
pub fn triplesum_outcomes(p: usize, m: u32, ws: &[u64], samples: u64, seed: u64) -> Result<Vec<TripleSumOutcome>> {
    let ts = TripleSum::new(p, m)?;
    let n = ts.n();
    let bounds: Vec<BigRational> = ws.iter().map(|&w| ts.bound(w)).collect();
    if n <= 14 {
        let sweep = DcSweep::new(n)?;
        return Ok(ws
            .iter()
            .zip(bounds)
            .map(|(&w, bound)| TripleSumOutcome {
                w,
                bound,
                exact: Some(sweep.prob_positive(w as usize)),
                monte_carlo: None,
            })
            .collect());
    }
    let sampled: Vec<bool> = bounds.iter().map(|b| b.to_f64().is_some_and(|v| v < MC_BOUND_CEILING)).collect();
    let cap = ws.iter().zip(&sampled).filter(|(_, s)| **s).map(|(w, _)| *w as usize).max();
    let distances: Vec<Option<usize>> = match cap {
        None => Vec::new(),
        Some(cap) => (0..samples)
            .into_par_iter()
            .map(|i| {
                let code = DoubleCirculantCode::sample(n, trial_seed(seed, i)).expect("n >= 1");
                min_distance_capped(&code, cap).expect("n <= 64").map(|r| r.value)
            })
            .collect(),
    };
    Ok(ws
        .iter()
        .zip(bounds)
        .zip(sampled)
        .map(|((&w, bound), s)| {
            let monte_carlo = s.then(|| {
                let hits = distances.iter().filter(|d| d.is_some_and(|d| d as u64 <= w)).count() as u64;
                let (lo, hi) = wilson_interval(hits, samples, Z_99);
                (hits, samples, lo, hi)
            });
            TripleSumOutcome { w, bound, exact: None, monte_carlo }
        })
        .collect())
}

pub fn verify_triplesum(p: usize, m: u32, w: u64, samples: u64, seed: u64) -> Result<LemmaReport> {
    let start = Instant::now();
    let out = triplesum_outcomes(p, m, &[w], samples, seed)?;
    Ok(out[0].report(p, m).timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn single_level_is_two_term_sum() {
        // n = 3: the class holds the full space and the even-weight code
        let ts = TripleSum::new(3, 1).unwrap();
        for w in 0..=6u64 {
            let full = [1u64, 3, 3, 1];
            let even = [1u64, 0, 3, 0];
            let pairs = |a: &[u64]| -> u64 {
                (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|(i, j)| i + j <= w as usize).map(|(i, j)| a[i] * a[j]).sum()
            };
            let expect = BigRational::new(pairs(&full).into(), 24.into()) + BigRational::new(pairs(&even).into(), 12.into());
            assert_eq!(ts.bound(w), expect);
        }
    }

    #[test]
    fn exact_at_nine() {
        let ws: Vec<u64> = (0..=18).collect();
        for o in triplesum_outcomes(3, 2, &ws, 0, 0).unwrap() {
            let r = o.report(3, 2);
            assert_eq!(r.status, Status::VerifiedExact, "{r}");
        }
        let r = verify_triplesum(3, 2, 3, 0, 0).unwrap();
        assert_eq!(r.status, Status::VerifiedExact);
    }

    #[test]
    fn monte_carlo_at_25() {
        let outs = triplesum_outcomes(5, 2, &[4, 6], 500, 3).unwrap();
        for o in &outs {
            assert!(o.exact.is_none());
            if o.bound < BigRational::one() * BigRational::new(9.into(), 10.into()) {
                let (_, n, _, hi) = o.monte_carlo.unwrap();
                assert_eq!(n, 500);
                assert!(hi < o.bound.to_f64().unwrap());
            }
        }
    }
}
