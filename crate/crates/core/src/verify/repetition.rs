use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::LemmaReport;
use crate::bounds::{binomial, repetition_bound, repetition_bound_cmp, Real};
use crate::error::{Error, Result};

/// XOR of the `t` consecutive length-`r` blocks of `x`.
fn block_syndrome(x: u64, r: usize, t: usize) -> u64 {
    let mask = (1u64 << r) - 1;
    (0..t).fold(0, |acc, b| acc ^ (x >> (b * r)) & mask)
}

/// Every `(r, t)` with `tr <= max_tr`: bins all `2^(tr)` vectors by weight
/// and syndrome and compares each bin with the repetition bound, exactly.
pub fn verify_repetition(max_tr: usize) -> Result<LemmaReport> {
    if max_tr == 0 || max_tr > 24 {
        return Err(Error::invalid("max_tr must lie in 1..=24"));
    }
    let start = Instant::now();
    let mut rep = LemmaReport::new("repetition").param("max_tr", max_tr);
    let mut tightest = (0.0f64, String::new());
    let mut equality = Vec::new();
    for tr in 1..=max_tr {
        for r in (1..=tr).filter(|r| tr % r == 0) {
            let t = tr / r;
            let mut bins = vec![vec![0u64; 1 << r]; tr + 1];
            for x in 0u64..1 << tr {
                bins[x.count_ones() as usize][block_syndrome(x, r, t) as usize] += 1;
            }
            for (w, row) in bins.iter().enumerate() {
                let worst = *row.iter().max().expect("nonempty");
                rep.checks += row.len() as u64;
                // every syndrome in the row shares the bound, so the max decides
                let cmp = repetition_bound_cmp(r as u64, t as u64, w as u64, &BigUint::from(worst))?;
                if cmp == Ordering::Greater {
                    rep.violate(format!("r={r} t={t} w={w}: count {worst} exceeds the bound"));
                    continue;
                }
                if worst > 0 {
                    let bound = repetition_bound(r as u64, t as u64, w as u64)?;
                    let ratio = (Real::from_int(worst as i64) / bound).to_f64();
                    if ratio > tightest.0 {
                        tightest = (ratio, format!("r={r} t={t} w={w}"));
                    }
                    if cmp == Ordering::Equal {
                        equality.push(format!("r={r},t={t},w={w}"));
                    }
                }
            }
        }
    }
    rep = rep.sides("max_s N_w(s)", "sqrt(2rt)((1+|1-2w/tr|^t)/2)^r C(tr,w)");
    rep.note(format!("largest count/bound ratio {:.6} at {}", tightest.0, tightest.1));
    if !equality.is_empty() {
        rep.note(format!("equality at {}", equality.join("; ")));
    }
    Ok(rep.timed(start))
}

/// One instance of the partition inequality: the code
/// `{x = (x1, x2) : x1 B^T + sigma_tr(x2) = 0}` of length `extra + tr`,
/// where `b_cols[k]` is column `k` of the `r x extra` matrix `B`. Returns
/// the weights `i >= tr` that violate it, plus the number of comparisons.
pub fn distrib_check(r: usize, t: usize, b_cols: &[u64]) -> Result<(Vec<usize>, u64)> {
    let extra = b_cols.len();
    let tr = t * r;
    let n = extra + tr;
    if r == 0 || t == 0 || n > 30 {
        return Err(Error::invalid("need r, t >= 1 and n <= 30"));
    }
    // codewords: choose x1 and the first t-1 blocks; the last block is forced
    let mut a = vec![0u64; n + 1];
    for x1 in 0u64..1 << extra {
        let s = (0..extra).filter(|k| x1 >> k & 1 == 1).fold(0u64, |acc, k| acc ^ b_cols[k]);
        let free = (t - 1) * r;
        for head in 0u64..1 << free {
            let last = s ^ block_syndrome(head, r, t - 1);
            let w = x1.count_ones() + head.count_ones() + last.count_ones();
            a[w as usize] += 1;
        }
    }
    let tt = tr as u64;
    let big = |x: u64| BigUint::from(x);
    let mut bad = Vec::new();
    let mut checks = 0;
    for i in tr..=n {
        // S = sum_j (T^t + |T-2j|^t)^r C(T,j) C(n-T, i-j); claim A_i^2 4^r T^(2T) <= 2T S^2
        let mut sum = BigUint::default();
        for j in 0..=tr.min(i) {
            if i - j > extra {
                continue;
            }
            let inner = big(tt).pow(t as u32) + big(tt.abs_diff(2 * j as u64)).pow(t as u32);
            sum += inner.pow(r as u32) * binomial(tt, j as u64) * binomial(extra as u64, (i - j) as u64);
        }
        let lhs = big(a[i]) * big(a[i]) * (big(1) << (2 * r)) * big(tt).pow(2 * tr as u32);
        let rhs = big(2 * tt) * &sum * &sum;
        checks += 1;
        if lhs > rhs {
            bad.push(i);
        }
    }
    Ok((bad, checks))
}

/// Random instances with `r, t <= 4` and `n - tr <= 8`, plus `B = 0`.
pub fn verify_distrib_inequality(samples: usize, seed: u64) -> Result<LemmaReport> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = LemmaReport::new("distrib")
        .param("samples", samples)
        .param("seed", seed)
        .sides("A_i(C)", "sqrt(2tr) sum_j ((1+|1-2j/tr|^t)/2)^r C(tr,j) C(n-tr,i-j)");
    let mut instances: Vec<(usize, usize, Vec<u64>)> = vec![(2, 2, vec![0; 6]), (3, 2, vec![0; 4])];
    for _ in 0..samples {
        let r = rng.gen_range(1..=4);
        let t = rng.gen_range(1..=4);
        let extra = rng.gen_range(0..=8);
        let cols = (0..extra).map(|_| rng.gen_range(0..1u64 << r)).collect();
        instances.push((r, t, cols));
    }
    for (r, t, cols) in instances {
        let (bad, checks) = distrib_check(r, t, &cols)?;
        rep.checks += checks;
        if let Some(i) = bad.first() {
            rep.violate(format!("r={r} t={t} B columns {cols:?}: i={i}"));
        }
    }
    Ok(rep.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Status;

    #[test]
    fn syndrome_is_block_xor() {
        assert_eq!(block_syndrome(0b10_01, 2, 2), 0b11);
        assert_eq!(block_syndrome(0b111_111_111, 3, 3), 0b111);
    }

    #[test]
    fn repetition_up_to_12() {
        let r = verify_repetition(12).unwrap();
        assert_eq!(r.status, Status::VerifiedExact, "{r}");
        assert!(r.notes.iter().any(|n| n.contains("r=1,t=2,w=1")), "{:?}", r.notes);
    }

    #[test]
    fn distrib_instances() {
        // r=2, t=2, n=10 with 20 random matrices B
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let cols: Vec<u64> = (0..6).map(|_| rng.gen_range(0..4)).collect();
            assert!(distrib_check(2, 2, &cols).unwrap().0.is_empty());
        }
        let r = verify_distrib_inequality(30, 1).unwrap();
        assert_eq!(r.status, Status::VerifiedExact, "{r}");
    }

    #[test]
    fn distrib_b_zero_splits() {
        // B = 0: A_i = sum_j N_j(0) C(extra, i-j) with N_j(0) the weight-j vectors of zero syndrome
        let (r, t, extra) = (2usize, 2usize, 3usize);
        let (bad, _) = distrib_check(r, t, &vec![0; extra]).unwrap();
        assert!(bad.is_empty());
    }
}
