use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use std::time::Instant;

use super::cx::DcSweep;
use super::report::{wilson_interval, LemmaReport, Z_99};
use crate::bounds::{format_rational, gv_guarantee, main_threshold_exact, simple_prob_bound, simple_threshold};
use crate::codes::DoubleCirculantCode;
use crate::error::{Error, Result};
use crate::gf2poly::BitVec;
use crate::spectrum::{low_weight_search_best, min_distance_exact_with_limit, DEFAULT_EXHAUSTIVE_LIMIT};

/// Seed of trial `index` under `master`: the first output of the ChaCha8
/// stream `index` keyed by `master`. Independent of scheduling.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Exhaustive enumeration: `d_found` is the true distance.
    Exact,
    /// Information-set search with this many information sets: `d_found`
    /// is an upper bound.
    Search { effort: usize },
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    /// Run every `a` in `{0,1}^n` (index = integer value of `a`) instead of sampling.
    pub exhaustive: bool,
    /// `b` of the main threshold, used when `n` is not a prime with 2 primitive.
    pub b: BigRational,
    /// Stop after this many trials and flag the run as truncated.
    pub max_trials: Option<u64>,
    /// Count codes with `d <= w` instead of the default threshold.
    pub w: Option<u64>,
}

impl ExperimentSpec {
    pub fn new(n: usize, trials: u64, seed: u64) -> Self {
        ExperimentSpec {
            n,
            trials,
            seed,
            mode: Mode::Exact,
            exhaustive: false,
            b: BigRational::new(23.into(), 100.into()),
            max_trials: None,
            w: None,
        }
    }
}

/// One sampled code. CSV columns follow the field order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub trial: u64,
    pub n: usize,
    pub seed: u64,
    pub a: String,
    pub d_found: usize,
    pub exact: bool,
    pub gv: u64,
    pub threshold_kind: String,
    pub threshold: u64,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub n: usize,
    pub mode: Mode,
    pub exhaustive: bool,
    pub seed: u64,
    pub trials_requested: u64,
    pub trials_run: u64,
    pub truncated: bool,
    pub vacuous: bool,
    pub gv_guarantee: u64,
    pub threshold_kind: String,
    pub threshold: u64,
    /// Codes with `d_found <= threshold`.
    pub at_or_below_threshold: u64,
    pub empirical_probability: String,
    pub wilson_99: (f64, f64),
    /// `2 |B_2p(w)| / (p 2^p)` at the counted radius, in the prime case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simple_bound: Option<String>,
    /// Exhaustive prime case: the exact probability respects the bound.
    /// Sampled prime case: the Wilson upper edge does not exceed it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_respected: Option<bool>,
    pub histogram: BTreeMap<usize, u64>,
    pub min_d: Option<usize>,
    pub median_d: Option<usize>,
    pub max_d: Option<usize>,
}

/// Threshold used to judge a length: the simple one when `n` is a prime
/// with 2 primitive, the main one otherwise.
pub fn threshold_for(n: usize, b: &BigRational) -> Result<(String, u64)> {
    match simple_threshold(n as u64) {
        Ok(w) => Ok(("simple".to_string(), w)),
        Err(_) => Ok(("main".to_string(), main_threshold_exact(n as u64, b)?)),
    }
}

/// Samples (or enumerates) double circulant codes of length `2n` and
/// records their distance. Trials run in parallel; records come back in
/// trial order and depend only on the spec.
pub fn experiment_distance(spec: &ExperimentSpec) -> Result<(Vec<ExperimentRecord>, ExperimentSummary)> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    if spec.mode == Mode::Exact && n > DEFAULT_EXHAUSTIVE_LIMIT {
        return Err(Error::budget(format!(
            "exact mode limited to n <= {DEFAULT_EXHAUSTIVE_LIMIT}; use search mode"
        )));
    }
    if spec.exhaustive && n > 24 {
        return Err(Error::budget("exhaustive sweeps limited to n <= 24"));
    }
    let requested = if spec.exhaustive { 1u64 << n } else { spec.trials };
    let run = spec.max_trials.map_or(requested, |m| m.min(requested));
    let gv = gv_guarantee(n as u64);
    let (kind, threshold) = match spec.w {
        Some(w) => ("override".to_string(), w),
        None => threshold_for(n, &spec.b)?,
    };
    let records: Vec<ExperimentRecord> = (0..run)
        .into_par_iter()
        .map(|trial| -> Result<ExperimentRecord> {
            let (seed, code) = if spec.exhaustive {
                (0, DoubleCirculantCode::new(BitVec::from_u64(trial, n)?)?)
            } else {
                let s = trial_seed(spec.seed, trial);
                (s, DoubleCirculantCode::sample(n, s)?)
            };
            let res = match spec.mode {
                Mode::Exact => min_distance_exact_with_limit(&code, DEFAULT_EXHAUSTIVE_LIMIT)?,
                Mode::Search { effort } => low_weight_search_best(&code, effort, seed ^ trial)
                    .ok_or_else(|| Error::invalid("search returned no codeword"))?,
            };
            Ok(ExperimentRecord {
                trial,
                n,
                seed,
                a: code.a().to_hex(),
                d_found: res.value,
                exact: res.exact,
                gv,
                threshold_kind: kind.clone(),
                threshold,
                witness: res.witness.to_hex(),
            })
        })
        .collect::<Result<_>>()?;
    let summary = summarize(spec, &records, requested, gv, &kind, threshold);
    Ok((records, summary))
}

fn summarize(
    spec: &ExperimentSpec,
    records: &[ExperimentRecord],
    requested: u64,
    gv: u64,
    kind: &str,
    threshold: u64,
) -> ExperimentSummary {
    let mut histogram = BTreeMap::new();
    for r in records {
        *histogram.entry(r.d_found).or_insert(0u64) += 1;
    }
    let total = records.len() as u64;
    let below = records.iter().filter(|r| r.d_found as u64 <= threshold).count() as u64;
    let mut ds: Vec<usize> = records.iter().map(|r| r.d_found).collect();
    ds.sort_unstable();
    let wilson = wilson_interval(below, total, Z_99);
    let exact_prob = (total > 0).then(|| BigRational::new(BigInt::from(below), BigInt::from(total)));
    let (simple_bound, bound_respected) = if simple_threshold(spec.n as u64).is_ok() {
        let b = simple_prob_bound(spec.n as u64, threshold);
        let respected = exact_prob.as_ref().map(|p| {
            if spec.exhaustive && spec.mode == Mode::Exact && total == requested {
                *p <= b
            } else {
                wilson.1 <= b.to_f64().unwrap_or(f64::INFINITY)
            }
        });
        (Some(format_rational(&b)), respected)
    } else {
        (None, None)
    };
    ExperimentSummary {
        n: spec.n,
        mode: spec.mode,
        exhaustive: spec.exhaustive,
        seed: spec.seed,
        trials_requested: requested,
        trials_run: total,
        truncated: total < requested,
        vacuous: total == 0,
        gv_guarantee: gv,
        threshold_kind: kind.to_string(),
        threshold,
        at_or_below_threshold: below,
        empirical_probability: exact_prob.map_or_else(|| "0/0".to_string(), |p| format!("{below}/{total} = {p}")),
        wilson_99: wilson,
        simple_bound,
        bound_respected,
        histogram,
        min_d: ds.first().copied(),
        median_d: ds.get(ds.len().saturating_sub(1) / 2).copied(),
        max_d: ds.last().copied(),
    }
}

/// Exhaustive check of the simple theorem at a small prime: every code is
/// swept with the exact distance, the distances are cross-checked against
/// full spectra, and the exact `Pr[d <= w*]` is compared with the bound.
pub fn verify_simple_theorem(p: usize) -> Result<LemmaReport> {
    let start = Instant::now();
    if p > 14 {
        return Err(Error::budget("simple theorem sweep limited to p <= 14"));
    }
    let w = simple_threshold(p as u64)?;
    let mut spec = ExperimentSpec::new(p, 0, 0);
    spec.exhaustive = true;
    let (records, summary) = experiment_distance(&spec)?;
    let sweep = DcSweep::new(p)?;
    let bound = simple_prob_bound(p as u64, w);
    let below = BigRational::new(BigInt::from(summary.at_or_below_threshold), BigInt::from(summary.trials_run));
    let mut r = LemmaReport::new("simple")
        .param("p", p)
        .param("w", w)
        .sides(format_rational(&below), format_rational(&bound));
    r.checks = records.len() as u64 + 2;
    for rec in &records {
        if sweep.distance(rec.trial) != rec.d_found {
            r.violate(format!("a={}: search gave {}, spectrum gives {}", rec.a, rec.d_found, sweep.distance(rec.trial)));
        }
    }
    if sweep.prob_positive(w as usize) != below {
        r.violate(format!("sweep probability {} differs from {}", sweep.prob_positive(w as usize), below));
    }
    if below > bound {
        r.violate(format!("Pr[d <= {w}] = {below} exceeds {bound}"));
    }
    match summary.max_d {
        Some(d) if d as u64 > w => r.note(format!("max distance {d}; {} codes have d > {w}", summary.trials_run - summary.at_or_below_threshold)),
        _ => r.violate(format!("no code with d > {w}")),
    }
    Ok(r.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(trial_seed(1, 5), trial_seed(1, 5));
        assert_ne!(trial_seed(1, 5), trial_seed(1, 6));
        assert_ne!(trial_seed(1, 5), trial_seed(2, 5));
    }

    #[test]
    fn empty_run_is_vacuous() {
        let (recs, s) = experiment_distance(&ExperimentSpec::new(13, 0, 1)).unwrap();
        assert!(recs.is_empty());
        assert!(s.vacuous);
        assert_eq!(s.median_d, None);
    }

    #[test]
    fn runs_are_reproducible_across_pools() {
        let spec = ExperimentSpec::new(15, 64, 9);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| experiment_distance(&spec).unwrap());
        let b = four.install(|| experiment_distance(&spec).unwrap());
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn exhaustive_small_prime() {
        let mut spec = ExperimentSpec::new(5, 0, 0);
        spec.exhaustive = true;
        let (recs, s) = experiment_distance(&spec).unwrap();
        assert_eq!(recs.len(), 32);
        assert_eq!(s.threshold_kind, "simple");
        assert_eq!(s.bound_respected, Some(true));
        assert_eq!(recs[0].d_found, 1); // a = 0
    }

    #[test]
    fn truncation_and_limits() {
        let mut spec = ExperimentSpec::new(11, 50, 2);
        spec.max_trials = Some(10);
        let (recs, s) = experiment_distance(&spec).unwrap();
        assert_eq!(recs.len(), 10);
        assert!(s.truncated);
        assert!(experiment_distance(&ExperimentSpec::new(40, 1, 0)).unwrap_err().is_budget());
        let mut search = ExperimentSpec::new(40, 3, 0);
        search.mode = Mode::Search { effort: 20 };
        let (recs, s) = experiment_distance(&search).unwrap();
        assert!(recs.iter().all(|r| !r.exact));
        assert_eq!(s.threshold_kind, "main");
    }
}
