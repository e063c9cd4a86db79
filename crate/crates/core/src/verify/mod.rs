//! Executable audits. Every check returns a [`LemmaReport`]; a `violated`
//! status always carries a counterexample.

mod cx;
mod experiment;
mod numerics;
mod repetition;
mod report;
mod triplesum;

pub use cx::{
    expected_count_bruteforce, expected_count_exact, prob_positive_bruteforce, representative_expectation,
    verify_expected_counts, verify_lemma_cx, verify_orbit_bound, DcSweep, LatticeData, OrbitTable,
};
pub use experiment::{
    experiment_distance, threshold_for, trial_seed, verify_simple_theorem, ExperimentRecord, ExperimentSpec,
    ExperimentSummary, Mode,
};
pub use numerics::{
    default_omega_grid, kappa_conclusion_small, verify_c2_and_series, verify_enumeration, verify_kappa_numerics,
    NUMERIC_TOLERANCE, PRIME_COUNT,
};
pub use repetition::{distrib_check, verify_distrib_inequality, verify_repetition};
pub use report::{wilson_interval, LemmaReport, Status, Z_99};
pub use triplesum::{
    triplesum_outcomes, verify_triplesum, TripleSum, TripleSumOutcome, DEFAULT_MC_SAMPLES, MC_BOUND_CEILING,
};

use crate::bounds::PaperConstants;
use crate::error::{Error, Result};

pub const SUITES: [&str; 11] = [
    "all", "cx", "orbit", "expected", "simple", "triplesum", "repetition", "distrib", "kappa", "enumeration", "c2series",
];

/// Knobs for the sampled parts of the suite.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub mc_samples: u64,
    pub distrib_samples: usize,
    /// Include the slower checks (exhaustive p=13 sweep, n=25/27 sampling).
    pub full: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 1, mc_samples: DEFAULT_MC_SAMPLES, distrib_samples: 20, full: true }
    }
}

/// Runs one named suite (or `all`) and returns its reports in a fixed order.
pub fn run_suite(name: &str, consts: &PaperConstants, opts: &SuiteOptions) -> Result<Vec<LemmaReport>> {
    let all = name == "all";
    if !SUITES.contains(&name) {
        return Err(Error::invalid(format!("unknown suite {name:?}; expected one of {}", SUITES.join("|"))));
    }
    let want = |s: &str| all || name == s;
    let mut out = Vec::new();
    if want("cx") {
        for n in [1, 3, 5, 7, 9] {
            out.push(verify_lemma_cx(n)?);
        }
    }
    if want("orbit") {
        for n in [9, 13] {
            for w in 0..=2 * n {
                out.push(verify_orbit_bound(n, w)?);
            }
        }
    }
    if want("expected") {
        for n in [3, 5, 7, 9] {
            out.push(verify_expected_counts(n)?);
        }
    }
    if want("simple") && opts.full {
        out.push(verify_simple_theorem(13)?);
    }
    if want("triplesum") {
        let mut cases: Vec<(usize, u32)> = vec![(3, 2), (13, 1)];
        if opts.full {
            cases.extend([(5, 2), (3, 3)]);
        }
        for (p, m) in cases {
            let n = p.pow(m) as u64;
            let ws: Vec<u64> = (0..=2 * n).collect();
            for o in triplesum_outcomes(p, m, &ws, opts.mc_samples, opts.seed)? {
                out.push(o.report(p, m));
            }
        }
    }
    if want("repetition") {
        out.push(verify_repetition(18)?);
    }
    if want("distrib") {
        out.push(verify_distrib_inequality(opts.distrib_samples, opts.seed)?);
    }
    if want("kappa") {
        out.push(verify_kappa_numerics(consts)?);
        for n in [9, 25, 27] {
            out.push(kappa_conclusion_small(n, consts)?);
        }
    }
    if want("enumeration") {
        out.push(verify_enumeration(2744, &default_omega_grid(), consts)?);
    }
    if want("c2series") {
        out.push(verify_c2_and_series(consts)?);
    }
    Ok(out)
}
