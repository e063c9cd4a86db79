use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::codes::CyclicCode;
use crate::error::{Error, Result};
use crate::gf2poly::BitVec;

pub const DEFAULT_DIM_LIMIT: usize = 26;

/// Exact weight distribution `A_0..A_n` of a length-`n` code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    n: usize,
    counts: Vec<BigUint>,
}

impl WeightDistribution {
    /// Checks `len = n + 1`, `A_0 = 1` and that the total is a power of two.
    pub fn new(counts: Vec<BigUint>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::invalid("empty weight distribution"));
        }
        if !counts[0].is_one() {
            return Err(Error::invalid("A_0 must be 1 for a linear code"));
        }
        let total: BigUint = counts.iter().sum();
        if total.count_ones() != 1 {
            return Err(Error::invalid(format!("total {total} is not a power of two")));
        }
        Ok(WeightDistribution { n: counts.len() - 1, counts })
    }

    pub fn from_u64(counts: &[u64]) -> Result<Self> {
        Self::new(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn get(&self, i: usize) -> BigUint {
        self.counts.get(i).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// `log2` of the code size.
    pub fn dim(&self) -> usize {
        (self.total().bits() - 1) as usize
    }

    /// Least nonzero weight, `None` for the zero code.
    pub fn min_distance(&self) -> Option<usize> {
        (1..=self.n).find(|&i| !self.counts[i].is_zero())
    }

    /// `sum_{i <= w} A_i`.
    pub fn cumulative(&self, w: usize) -> BigUint {
        self.counts.iter().take(w.saturating_add(1)).sum()
    }

    /// `i,A_i` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,A_i\n");
        for (i, c) in self.counts.iter().enumerate() {
            s.push_str(&format!("{i},{c}\n"));
        }
        s
    }
}

/// Weight distribution of a cyclic code, enumerating whichever of the code
/// and its dual is smaller (dual results go through MacWilliams). Fails
/// when both dimensions exceed `dim_limit`.
pub fn weight_distribution(code: &CyclicCode, dim_limit: usize) -> Result<WeightDistribution> {
    let dim = code.dim();
    let codim = code.n() - dim;
    if dim <= dim_limit && (dim <= codim || codim > dim_limit) {
        return weight_distribution_direct(code);
    }
    if codim <= dim_limit {
        let dual = code.dual();
        return macwilliams_transform(&weight_distribution_direct(&dual)?, codim);
    }
    Err(Error::budget(format!(
        "code of length {} has dim {dim} and codim {codim}, both above the limit {dim_limit}",
        code.n()
    )))
}

/// Enumerates all `2^dim` codewords. No size check, callers decide.
pub fn weight_distribution_direct(code: &CyclicCode) -> Result<WeightDistribution> {
    let rows = code.generator_rows();
    let counts = span_weights(&rows, code.n());
    WeightDistribution::new(counts.into_iter().map(BigUint::from).collect())
}

/// Counts of codeword weights over the span of `rows` (assumed independent).
pub(crate) fn span_weights(rows: &[BitVec], n: usize) -> Vec<u64> {
    if n <= 128 {
        let rows: Vec<u128> = rows.iter().map(to_u128).collect();
        gray_weights(&rows, n, |w| w.count_ones() as usize)
    } else {
        let rows: Vec<Vec<u64>> = rows.iter().map(|r| r.words().to_vec()).collect();
        gray_weights_wide(&rows, n)
    }
}

fn to_u128(v: &BitVec) -> u128 {
    v.words()
        .iter()
        .enumerate()
        .fold(0u128, |acc, (i, &w)| acc | (w as u128) << (64 * i))
}

/// Bits of the message index handled by a single task.
const CHUNK_BITS: usize = 16;

/// Gray-code enumeration of the span, split into independent chunks by the
/// top message bits. Counts are summed, so the result does not depend on
/// the thread count.
pub(crate) fn gray_weights<W, F>(rows: &[W], n: usize, weight: F) -> Vec<u64>
where
    W: Copy + Send + Sync + Default + std::ops::BitXor<Output = W>,
    F: Fn(W) -> usize + Sync,
{
    let k = rows.len();
    let low = k.min(CHUNK_BITS);
    let (low_rows, high_rows) = rows.split_at(low);
    let chunk = |c: u64| {
        let mut cur = W::default();
        for (i, &r) in high_rows.iter().enumerate() {
            if c >> i & 1 == 1 {
                cur = cur ^ r;
            }
        }
        let mut counts = vec![0u64; n + 1];
        counts[weight(cur)] += 1;
        for i in 1u64..1 << low {
            cur = cur ^ low_rows[i.trailing_zeros() as usize];
            counts[weight(cur)] += 1;
        }
        counts
    };
    (0..1u64 << (k - low))
        .into_par_iter()
        .map(chunk)
        .reduce(|| vec![0u64; n + 1], |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        })
}

fn gray_weights_wide(rows: &[Vec<u64>], n: usize) -> Vec<u64> {
    let words = n.div_ceil(64);
    let mut cur = vec![0u64; words];
    let mut counts = vec![0u64; n + 1];
    counts[0] = 1;
    for i in 1u64..1 << rows.len() {
        let r = &rows[i.trailing_zeros() as usize];
        cur.iter_mut().zip(r).for_each(|(c, x)| *c ^= x);
        counts[cur.iter().map(|w| w.count_ones() as usize).sum::<usize>()] += 1;
    }
    counts
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// Krawtchouk polynomial `K_j(i) = sum_s (-1)^s C(i,s) C(n-i,j-s)`.
fn krawtchouk(n: usize, j: usize, i: usize, binom: &[Vec<BigInt>]) -> BigInt {
    let mut acc = BigInt::zero();
    for s in 0..=j.min(i) {
        if j - s > n - i {
            continue;
        }
        let term = &binom[i][s] * &binom[n - i][j - s];
        if s % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Distribution of the dual `[n, n - dim]` code:
/// `B_j = 2^(-dim) sum_i A_i K_j(i)`.
pub fn macwilliams_transform(wd: &WeightDistribution, dim: usize) -> Result<WeightDistribution> {
    let total = wd.total();
    if total != BigUint::one() << dim {
        return Err(Error::invalid(format!("distribution sums to {total}, expected 2^{dim}")));
    }
    let n = wd.n;
    let binom: Vec<Vec<BigInt>> = (0..=n).map(binomial_row).collect();
    let scale = BigInt::one() << dim;
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut acc = BigInt::zero();
        for (i, a) in wd.counts.iter().enumerate() {
            if !a.is_zero() {
                acc += BigInt::from(a.clone()) * krawtchouk(n, j, i, &binom);
            }
        }
        let (q, r) = acc.div_rem(&scale);
        if !r.is_zero() || q.is_negative() {
            return Err(Error::invalid("input is not the distribution of a linear code"));
        }
        out.push(q.to_biguint().expect("non-negative"));
    }
    WeightDistribution::new(out)
}
