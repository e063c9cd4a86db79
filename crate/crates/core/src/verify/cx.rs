use std::collections::HashMap;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::report::{LemmaReport, Status};
use crate::codes::{canonical_rep, cyclic_from_vector, cyclic_lattice, membership_probability, CyclicCode};
use crate::error::{Error, Result};
use crate::gf2poly::{word, BitVec, Gf2Poly};
use crate::spectrum::{census_all, dc_weight_distribution, weight_distribution, DEFAULT_DIM_LIMIT};
use crate::codes::DoubleCirculantCode;

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// For every `x = (x_L, x_R)` of length `2n`, compares the fraction of
/// defining vectors `a` with `x` in the code against
/// [`membership_probability`], and checks that `x_R a` is uniform on
/// `C(x_R)`. `n <= 10`.
pub fn verify_lemma_cx(n: usize) -> Result<LemmaReport> {
    if n == 0 || n > 10 {
        return Err(Error::invalid("membership audit needs 1 <= n <= 10"));
    }
    let start = Instant::now();
    let size = 1u64 << n;
    let problems: Vec<String> = (0..size)
        .into_par_iter()
        .filter_map(|xr| {
            // hits[s] = #{a : x_R a = s}
            let mut hits = vec![0u64; size as usize];
            for a in 0..size {
                hits[word::mul_mod(xr, a, n) as usize] += 1;
            }
            let right = BitVec::from_u64(xr, n).expect("fits");
            let code = cyclic_from_vector(&right).expect("n >= 1");
            let per_word = size >> code.dim();
            for xl in 0..size {
                let left = BitVec::from_u64(xl, n).expect("fits");
                let x = left.concat(&right);
                let p = membership_probability(&x).expect("length 2n");
                let observed = ratio(hits[xl as usize], size);
                if p != observed {
                    return Some(format!("x={} formula={p} enumeration={observed}", x.to_bitstring()));
                }
                let inside = code.contains(&left).expect("length n");
                let expect = if inside { per_word } else { 0 };
                if hits[xl as usize] != expect {
                    return Some(format!(
                        "x_R={} s={} hit {} times, uniform share is {expect}",
                        right.to_bitstring(),
                        left.to_bitstring(),
                        hits[xl as usize]
                    ));
                }
            }
            None
        })
        .collect();
    let mut r = LemmaReport::new("cx")
        .param("n", n)
        .sides("#{a : x in C(a)} / 2^n", "membership_probability(x)");
    r.checks = size * size;
    if let Some(first) = problems.into_iter().next() {
        r.violate(first);
    } else {
        r.note(format!("all {} vectors x, {} codes each; x_R a uniform on C(x_R)", size * size, size));
    }
    Ok(r.timed(start))
}

/// Per-code weight distributions of every double circulant code of length
/// `2n`, indexed by the integer value of `a`. `n <= 14`.
pub struct DcSweep {
    n: usize,
    spectra: Vec<Vec<u64>>,
}

impl DcSweep {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 14 {
            return Err(Error::budget("full double circulant sweep limited to 1 <= n <= 14"));
        }
        let spectra = (0..1u64 << n)
            .into_par_iter()
            .map(|a| {
                let code = DoubleCirculantCode::new(BitVec::from_u64(a, n).expect("fits")).expect("n >= 1");
                dc_weight_distribution(&code).expect("n <= 14")
            })
            .collect();
        Ok(DcSweep { n, spectra })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spectrum(&self, a: u64) -> &[u64] {
        &self.spectra[a as usize]
    }

    /// Minimum distance of the code with defining vector `a`.
    pub fn distance(&self, a: u64) -> usize {
        (1..).find(|&i| self.spectra[a as usize][i] > 0).expect("n >= 1 codewords")
    }

    /// `E[X(w)]`: mean number of nonzero codewords of weight `<= w`.
    pub fn expected_count(&self, w: usize) -> BigRational {
        let total: u64 = self
            .spectra
            .iter()
            .map(|s| s.iter().take(w + 1).skip(1).sum::<u64>())
            .sum();
        ratio(total, 1u64 << self.n)
    }

    /// `Pr[X(w) > 0]`.
    pub fn prob_positive(&self, w: usize) -> BigRational {
        let hits = (0..self.spectra.len() as u64).filter(|&a| self.distance(a) <= w).count();
        ratio(hits as u64, 1u64 << self.n)
    }
}

pub fn expected_count_bruteforce(n: usize, w: usize) -> Result<BigRational> {
    Ok(DcSweep::new(n)?.expected_count(w))
}

pub fn prob_positive_bruteforce(n: usize, w: usize) -> Result<BigRational> {
    Ok(DcSweep::new(n)?.prob_positive(w))
}

/// Everything needed for lattice-side expectations at length `n`.
pub struct LatticeData {
    pub n: usize,
    pub codes: Vec<CyclicCode>,
    pub spectra: Vec<crate::spectrum::WeightDistribution>,
    /// `census[D][j]` = #{u of weight j : C(u) = D}.
    pub census: Vec<Vec<BigUint>>,
}

impl LatticeData {
    pub fn new(n: usize) -> Result<Self> {
        let codes = cyclic_lattice(n)?;
        let spectra = codes
            .iter()
            .map(|c| weight_distribution(c, DEFAULT_DIM_LIMIT))
            .collect::<Result<Vec<_>>>()?;
        let census = census_all(&codes, &spectra);
        Ok(LatticeData { n, codes, spectra, census })
    }

    /// `E[X(w)] = sum_D sum_j G_j(D) (sum_{i <= w-j} A_i(D)) / |D|`, minus
    /// the zero vector.
    pub fn expected_count(&self, w: usize) -> BigRational {
        let mut acc = BigRational::zero();
        for ((g, a), code) in self.census.iter().zip(&self.spectra).zip(&self.codes) {
            let size = BigInt::one() << code.dim();
            for (j, gj) in g.iter().enumerate() {
                if j > w || gj.is_zero() {
                    continue;
                }
                let within = a.cumulative(w - j);
                acc += BigRational::new(BigInt::from(gj * within), size.clone());
            }
        }
        acc - BigRational::one()
    }
}

pub fn expected_count_exact(n: usize, w: usize) -> Result<BigRational> {
    Ok(LatticeData::new(n)?.expected_count(w))
}

/// Right halves grouped by `(C(x_R), weight, period)` and, per code, its
/// codewords grouped by `(weight, period)`: enough to evaluate any sum of
/// `E[X_x] / l(x)` over weight-bounded balls.
pub struct OrbitTable {
    n: usize,
    dims: Vec<usize>,
    /// (code index, weight, period) -> number of x_R
    right: Vec<((usize, usize, usize), u64)>,
    /// per code: (weight, period) -> number of codewords
    left: Vec<Vec<((usize, usize), u64)>>,
}

impl OrbitTable {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::budget("orbit table limited to 1 <= n <= 16"));
        }
        let codes = cyclic_lattice(n)?;
        let index: HashMap<Gf2Poly, usize> =
            codes.iter().enumerate().map(|(i, c)| (c.generator().clone(), i)).collect();
        let mut right: HashMap<(usize, usize, usize), u64> = HashMap::new();
        for xr in 0..1u64 << n {
            let code = cyclic_from_vector(&BitVec::from_u64(xr, n)?)?;
            let key = (index[code.generator()], xr.count_ones() as usize, word::period(xr, n));
            *right.entry(key).or_default() += 1;
        }
        let left = codes
            .iter()
            .map(|c| {
                let rows: Vec<u64> = c.generator_rows().iter().map(|r| r.as_u64().expect("n <= 16")).collect();
                let mut m: HashMap<(usize, usize), u64> = HashMap::new();
                let mut cur = 0u64;
                *m.entry((0, 1)).or_default() += 1;
                for i in 1u64..1 << rows.len() {
                    cur ^= rows[i.trailing_zeros() as usize];
                    *m.entry((cur.count_ones() as usize, word::period(cur, n))).or_default() += 1;
                }
                let mut v: Vec<_> = m.into_iter().collect();
                v.sort();
                v
            })
            .collect();
        let mut right: Vec<_> = right.into_iter().collect();
        right.sort();
        Ok(OrbitTable { n, dims: codes.iter().map(|c| c.dim()).collect(), right, left })
    }

    /// `sum_{0 < wt(x) <= w} E[X_x] / l(x)`, with `l(x) = lcm` of the
    /// periods of the two halves. Grouped by orbit length, this is the
    /// double sum over divisors `d | n`.
    pub fn orbit_sum(&self, w: usize) -> BigRational {
        let mut acc = BigRational::zero();
        for &((code, wr, pr), cr) in &self.right {
            if wr > w {
                continue;
            }
            let size = BigInt::one() << self.dims[code];
            for &((wl, pl), cl) in &self.left[code] {
                if wl + wr > w || wl + wr == 0 {
                    continue;
                }
                let l = pr.lcm(&pl);
                acc += BigRational::new(BigInt::from(cr * cl), &size * BigInt::from(l));
            }
        }
        acc
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `sum E[X_x]` over canonical orbit representatives of the nonzero
/// vectors of weight `<= w`: the expectation of `X'(w)`. Enumerates all
/// `2^(2n)` vectors, `n <= 10`.
pub fn representative_expectation(n: usize, w: usize) -> Result<BigRational> {
    if n == 0 || n > 10 {
        return Err(Error::budget("representative sum limited to 1 <= n <= 10"));
    }
    let terms: Vec<BigRational> = (1u64..1 << (2 * n))
        .into_par_iter()
        .filter(|x| x.count_ones() as usize <= w)
        .filter_map(|x| {
            let v = BitVec::from_u64(x, 2 * n).expect("fits");
            (canonical_rep(&v).expect("even length") == v).then(|| membership_probability(&v).expect("even length"))
        })
        .collect();
    Ok(terms.into_iter().fold(BigRational::zero(), |a, b| a + b))
}

/// `Pr[X(w) > 0] <= sum_{d | n} sum_{wt x <= w, l(x) = d} E[X_x] / d`,
/// both sides exact. `n <= 14`.
pub fn verify_orbit_bound(n: usize, w: usize) -> Result<LemmaReport> {
    let sweep = DcSweep::new(n)?;
    let table = OrbitTable::new(n)?;
    Ok(orbit_report(&sweep, &table, w))
}

pub(crate) fn orbit_report(sweep: &DcSweep, table: &OrbitTable, w: usize) -> LemmaReport {
    let start = Instant::now();
    let lhs = sweep.prob_positive(w);
    let rhs = table.orbit_sum(w);
    let mut r = LemmaReport::new("orbit")
        .param("n", sweep.n())
        .param("w", w)
        .sides(&lhs, &rhs);
    r.checks = 1;
    if lhs > rhs {
        r.violate(format!("Pr[X({w})>0] = {lhs} exceeds {rhs}"));
    }
    r.timed(start)
}

/// Oracle comparisons of the expectation formulas at one length: lattice
/// formula against brute force for every `w <= 2n`, Markov's inequality,
/// and (for `n <= 9`) the orbit-representative form.
pub fn verify_expected_counts(n: usize) -> Result<LemmaReport> {
    let start = Instant::now();
    let sweep = DcSweep::new(n)?;
    let lattice = LatticeData::new(n)?;
    let table = OrbitTable::new(n)?;
    let mut r = LemmaReport::new("expected")
        .param("n", n)
        .sides("lattice E[X(w)]", "brute-force E[X(w)]");
    for w in 0..=2 * n {
        let exact = lattice.expected_count(w);
        let brute = sweep.expected_count(w);
        if exact != brute {
            r.violate(format!("w={w}: lattice {exact} != brute force {brute}"));
        }
        let prob = sweep.prob_positive(w);
        if prob > exact {
            r.violate(format!("w={w}: Pr[X>0] = {prob} > E[X] = {exact}"));
        }
        r.checks += 2;
        if n <= 9 {
            let reps = representative_expectation(n, w)?;
            if reps != table.orbit_sum(w) {
                r.violate(format!("w={w}: representative sum {reps} != orbit-weighted sum"));
            }
            r.checks += 1;
        }
    }
    if r.status != Status::Violated {
        r.note(format!("w = 0..={}", 2 * n));
    }
    Ok(r.timed(start))
}
