use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codes::DoubleCirculantCode;
use crate::error::{Error, Result};
use crate::gf2poly::{word, BitVec};

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 28;

/// A nonzero codeword of weight `value`. `exact` is set only when an
/// exhaustive search proved no lighter codeword exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceResult {
    pub value: usize,
    pub witness: BitVec,
    pub exact: bool,
}

fn codeword(left: u64, right: u64, n: usize) -> BitVec {
    BitVec::from_u64(left, n).expect("fits").concat(&BitVec::from_u64(right, n).expect("fits"))
}

/// Largest-integer rotation of `m` (any rotation bringing a set bit to
/// position `n-1` is a candidate, so only `wt(m)` rotations are tried).
fn is_orbit_rep(m: u64, n: usize) -> bool {
    let mut rest = m;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if word::rotr(m, n - 1 - i, n) > m {
            return false;
        }
    }
    true
}

/// Calls `f` on every `k`-subset of `0..n` containing `n-1`, as a bit mask.
/// Stops early when `f` returns false.
fn for_each_with_top(n: usize, k: usize, mut f: impl FnMut(u64) -> bool) {
    let top = 1u64 << (n - 1);
    if k == 1 {
        f(top);
        return;
    }
    let free = n - 1;
    let r = k - 1;
    if r > free {
        return;
    }
    let limit = 1u64 << free;
    let mut s = (1u64 << r) - 1;
    while s < limit {
        if !f(s | top) {
            return;
        }
        // Gosper's hack
        let c = s & s.wrapping_neg();
        let t = s + c;
        s = (((t ^ s) >> 2) / c) | t;
    }
}

/// Exact minimum distance with the default size limit.
pub fn min_distance_exact(code: &DoubleCirculantCode) -> Result<DistanceResult> {
    min_distance_exact_with_limit(code, DEFAULT_EXHAUSTIVE_LIMIT)
}

/// Exact minimum distance by enumerating messages `m` (codeword `(m a, m)`)
/// in order of increasing weight, restricted to one representative per
/// rotation orbit. When `a` is invertible the left half is enumerated the
/// same way, so every codeword of weight `d` is reached once the weight
/// budget passes `d / 2`.
pub fn min_distance_exact_with_limit(code: &DoubleCirculantCode, limit: usize) -> Result<DistanceResult> {
    Ok(exact_search(code, limit, None)?.expect("uncapped search always finds a codeword"))
}

/// Exact test for a nonzero codeword of weight `<= cap`: the lightest
/// codeword if the distance is at most `cap`, otherwise `None`.
pub fn min_distance_capped(code: &DoubleCirculantCode, cap: usize) -> Result<Option<DistanceResult>> {
    exact_search(code, 64, Some(cap))
}

fn exact_search(code: &DoubleCirculantCode, limit: usize, cap: Option<usize>) -> Result<Option<DistanceResult>> {
    let n = code.n();
    if n > limit.min(64) {
        return Err(Error::budget(format!(
            "exhaustive distance limited to n <= {}; use low_weight_search for n = {n}",
            limit.min(64)
        )));
    }
    let a = code.a_word().expect("n <= 64");
    let a_inv = code.a_inverse().map(|p| p.coeffs().as_u64().expect("n <= 64"));
    // The message m = Z^0 always gives a codeword of weight wt(a) + 1.
    let mut best = (a.count_ones() as usize + 1, a, 1u64);
    if let Some(c) = cap {
        if best.0 > c {
            best = (c + 1, 0, 0);
        }
    }
    for k in 1..=n {
        let covered = if a_inv.is_some() { 2 * k } else { k };
        if covered >= best.0 {
            break;
        }
        let mut visit = |m: u64, mult: u64, right_is_message: bool| {
            if is_orbit_rep(m, n) {
                let other = word::mul_mod(m, mult, n);
                let w = k + other.count_ones() as usize;
                if w < best.0 {
                    best = if right_is_message { (w, other, m) } else { (w, m, other) };
                }
            }
            true
        };
        for_each_with_top(n, k, |m| visit(m, a, true));
        if let Some(inv) = a_inv {
            for_each_with_top(n, k, |m| visit(m, inv, false));
        }
    }
    if best.1 == 0 && best.2 == 0 {
        return Ok(None);
    }
    Ok(Some(DistanceResult { value: best.0, witness: codeword(best.1, best.2, n), exact: true }))
}

/// Distance by looking at all `2^n - 1` messages. Test oracle, `n <= 24`.
pub fn min_distance_bruteforce(code: &DoubleCirculantCode) -> Result<DistanceResult> {
    let n = code.n();
    if n > 24 {
        return Err(Error::budget("brute-force distance limited to n <= 24"));
    }
    let a = code.a_word().expect("n <= 24");
    let (w, m) = (1u64..1 << n)
        .map(|m| ((m.count_ones() + word::mul_mod(m, a, n).count_ones()) as usize, m))
        .min()
        .expect("n >= 1");
    Ok(DistanceResult { value: w, witness: codeword(word::mul_mod(m, a, n), m, n), exact: true })
}

/// Weight distribution `A_0..A_2n` of a double circulant code, `n <= 32`.
pub fn dc_weight_distribution(code: &DoubleCirculantCode) -> Result<Vec<u64>> {
    let n = code.n();
    if n > 32 {
        return Err(Error::budget("double circulant spectrum limited to n <= 32"));
    }
    let a = code.a_word().expect("n <= 32");
    let rows: Vec<u64> = (0..n).map(|i| word::rotr(a, i, n) | 1u64 << (n + i)).collect();
    Ok(super::weights::gray_weights(&rows, 2 * n, |w: u64| w.count_ones() as usize))
}

/// Generator rows `(Z^i a | Z^i)`, as packed words of length `2n`.
fn generator_rows(code: &DoubleCirculantCode) -> Vec<Vec<u64>> {
    let n = code.n();
    let a = code.a();
    (0..n)
        .map(|i| {
            let mut e = BitVec::zeros(n);
            e.set(i, true);
            a.rotate_right(i).concat(&e).words().to_vec()
        })
        .collect()
}

fn get(row: &[u64], j: usize) -> bool {
    row[j / 64] >> (j % 64) & 1 == 1
}

fn weight(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

/// Information-set search (Lee-Brickell, combinations of one and two rows
/// of each systematic form). The first information set is the right half,
/// so the rows `(Z^i a | Z^i)` are always inspected. Deterministic in
/// `seed`. Returns the first codeword found of weight `<= w`.
pub fn low_weight_search(code: &DoubleCirculantCode, w: usize, effort: usize, seed: u64) -> Option<DistanceResult> {
    isd(code, effort, seed, Some(w)).filter(|r| r.value <= w)
}

/// Lightest codeword seen over `effort` information sets.
pub fn low_weight_search_best(code: &DoubleCirculantCode, effort: usize, seed: u64) -> Option<DistanceResult> {
    isd(code, effort, seed, None)
}

fn isd(code: &DoubleCirculantCode, effort: usize, seed: u64, stop_at: Option<usize>) -> Option<DistanceResult> {
    let n = code.n();
    let len = 2 * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = generator_rows(code);
    let mut best: Option<(usize, Vec<u64>)> = None;
    let mut cols: Vec<usize> = (n..len).chain(0..n).collect();
    let mut pair = vec![0u64; base[0].len()];
    for iter in 0..effort.max(1) {
        let mut rows = base.clone();
        if iter > 0 {
            cols.shuffle(&mut rng);
            // Gaussian elimination along the permuted column order.
            let mut rank = 0;
            for &c in &cols {
                if rank == n {
                    break;
                }
                let Some(p) = (rank..n).find(|&r| get(&rows[r], c)) else { continue };
                rows.swap(rank, p);
                let pivot = rows[rank].clone();
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && get(row, c) {
                        row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
                    }
                }
                rank += 1;
            }
            debug_assert_eq!(rank, n, "generator matrix has full rank");
        }
        let mut consider = |row: &[u64]| {
            let wt = weight(row);
            if wt > 0 && best.as_ref().is_none_or(|(b, _)| wt < *b) {
                best = Some((wt, row.to_vec()));
            }
        };
        for i in 0..n {
            consider(&rows[i]);
            for j in i + 1..n {
                pair.iter_mut().zip(rows[i].iter().zip(&rows[j])).for_each(|(p, (x, y))| *p = x ^ y);
                consider(&pair);
            }
        }
        if let (Some(limit), Some((b, _))) = (stop_at, &best) {
            if *b <= limit {
                break;
            }
        }
    }
    best.map(|(value, words)| DistanceResult {
        value,
        witness: BitVec::from_words(words, len),
        exact: false,
    })
}
