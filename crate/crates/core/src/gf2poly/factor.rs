use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gf2poly::{Gf2Poly, Poly};
use crate::numbertheory;

pub const DEFAULT_FACTOR_LIMIT: usize = 4096;

/// Largest number of divisors [`divisors_of_z_n_plus_one`] will enumerate.
pub const DIVISOR_LIMIT: usize = 1 << 20;

/// Complete factorization of `Z^n + 1` over GF(2) for odd `n`.
///
/// Factors are stored with their exact degree (not reduced modulo
/// `Z^n + 1`), sorted by degree and then by coefficient pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    n: usize,
    factors: Vec<Gf2Poly>,
}

impl Factorization {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[Gf2Poly] {
        &self.factors
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.degree().unwrap_or(0)).collect()
    }

    pub fn product(&self) -> Gf2Poly {
        self.factors.iter().fold(Gf2Poly::one(), |acc, f| acc.mul(f))
    }

    fn canonical(n: usize, mut factors: Vec<Gf2Poly>) -> Self {
        factors.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.limbs().cmp(b.limbs())));
        Factorization { n, factors }
    }

    /// Multiplies the factors back together and checks the degree pattern
    /// against the cyclotomic cosets.
    pub fn self_check(&self) -> Result<()> {
        if self.product() != Gf2Poly::z_n_plus_one(self.n) {
            return Err(Error::SelfCheck(format!("factors of Z^{}+1 do not multiply back", self.n)));
        }
        let mut expected: Vec<usize> = cyclotomic_cosets(self.n)?.iter().map(Vec::len).collect();
        let mut got = self.degrees();
        expected.sort_unstable();
        got.sort_unstable();
        if expected != got {
            return Err(Error::SelfCheck(format!(
                "factor degrees {got:?} differ from coset sizes {expected:?} for n={}",
                self.n
            )));
        }
        Ok(())
    }
}

/// Orbits of `j -> 2j mod n` on `{0..n-1}`, each sorted ascending, listed
/// by minimal element.
pub fn cyclotomic_cosets(n: usize) -> Result<Vec<Vec<usize>>> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    if n.is_multiple_of(2) {
        return Err(Error::Unsupported(format!(
            "even n={n}: Z^n+1 is not squarefree"
        )));
    }
    let mut seen = vec![false; n];
    let mut cosets = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut coset = Vec::new();
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            coset.push(j);
            j = (2 * j) % n;
        }
        coset.sort_unstable();
        cosets.push(coset);
    }
    Ok(cosets)
}

pub fn factorize(n: usize) -> Result<Factorization> {
    factorize_with_limit(n, DEFAULT_FACTOR_LIMIT)
}

/// Berlekamp splitting of `Z^n + 1`.
///
/// For odd `n`, squaring permutes exponents within cyclotomic cosets, so
/// the coset indicator polynomials `e_C = sum_{j in C} Z^j` are idempotent
/// and form a basis of the Berlekamp subalgebra. Splitting every factor by
/// `gcd(f, e_C)` over all cosets therefore separates all irreducible
/// factors.
pub fn factorize_with_limit(n: usize, limit: usize) -> Result<Factorization> {
    if n > limit {
        return Err(Error::budget(format!("n={n} exceeds factorization limit {limit}")));
    }
    let cosets = cyclotomic_cosets(n)?;
    let target = cosets.len();
    let mut factors = vec![Gf2Poly::z_n_plus_one(n)];
    for coset in &cosets {
        if factors.len() == target {
            break;
        }
        if coset.len() == 1 && coset[0] == 0 {
            continue;
        }
        let idem = Gf2Poly::from_exponents(coset);
        let mut next = Vec::with_capacity(factors.len() * 2);
        for f in factors {
            let fd = f.degree().unwrap_or(0);
            if fd <= 1 {
                next.push(f);
                continue;
            }
            let r = idem.rem(&f)?;
            let g = if r.is_zero() { f.clone() } else { f.gcd(&r)? };
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < fd {
                let (q, rem) = f.div_rem(&g)?;
                debug_assert!(rem.is_zero());
                next.push(g);
                next.push(q);
            } else {
                next.push(f);
            }
        }
        factors = next;
    }
    let fact = Factorization::canonical(n, factors);
    fact.self_check()?;
    Ok(fact)
}

/// The explicit factor family for `n = p^m` with `p` a Kasami prime:
/// `1 + Z` together with `1 + Q + ... + Q^(p-1)` for `Q = Z^(p^i)`, `i < m`.
/// Cross-checked against [`factorize`].
pub fn kasami_factors(p: u64, m: u32) -> Result<Factorization> {
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    let report = numbertheory::kasami_check(p)?;
    if !report.kasami {
        return Err(Error::invalid(format!("{p} is not a Kasami prime")));
    }
    let n = (p as usize)
        .checked_pow(m)
        .filter(|&n| n <= DEFAULT_FACTOR_LIMIT)
        .ok_or_else(|| Error::budget(format!("{p}^{m} exceeds factorization limit {DEFAULT_FACTOR_LIMIT}")))?;
    let p = p as usize;
    let mut factors = vec![Gf2Poly::from_exponents(&[0, 1])];
    let mut q = 1usize;
    for _ in 0..m {
        let exps: Vec<usize> = (0..p).map(|k| k * q).collect();
        factors.push(Gf2Poly::from_exponents(&exps));
        q *= p;
    }
    let fact = Factorization::canonical(n, factors);
    let generic = factorize(n)?;
    if generic != fact {
        return Err(Error::SelfCheck(format!("Kasami family disagrees with generic factorization at n={n}")));
    }
    Ok(fact)
}

/// `P_n(Z) = 1 + Z^(n/p) + ... + Z^((p-1)n/p)` as a ring element.
pub fn repetition_poly(n: usize, p: usize) -> Result<Poly> {
    if p == 0 || n == 0 || !n.is_multiple_of(p) {
        return Err(Error::invalid(format!("{p} does not divide {n}")));
    }
    let step = n / p;
    let exps: Vec<usize> = (0..p).map(|k| k * step).collect();
    Ok(Poly::from_exponents(n, &exps))
}

/// Every monic divisor of `Z^n + 1`, for any `n >= 1`.
///
/// Writing `n = 2^e * n'` with `n'` odd, `Z^n + 1 = (Z^n' + 1)^(2^e)`, so
/// divisors are products of the irreducible factors of `Z^n' + 1` with
/// multiplicities in `0..=2^e`. Sorted by degree, then coefficients.
pub fn divisors_of_z_n_plus_one(n: usize) -> Result<Vec<Gf2Poly>> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let e = n.trailing_zeros();
    let odd = n >> e;
    let mult = 1usize << e;
    let base = factorize(odd)?;
    let count = (mult + 1)
        .checked_pow(base.factors().len() as u32)
        .filter(|&c| c <= DIVISOR_LIMIT)
        .ok_or_else(|| Error::budget(format!("Z^{n}+1 has too many divisors to enumerate")))?;
    // powers[i][k] = f_i^k
    let powers: Vec<Vec<Gf2Poly>> = base
        .factors()
        .iter()
        .map(|f| {
            let mut v = vec![Gf2Poly::one()];
            for k in 1..=mult {
                let next = v[k - 1].mul(f);
                v.push(next);
            }
            v
        })
        .collect();
    let mut out = Vec::with_capacity(count);
    let mut exps = vec![0usize; powers.len()];
    loop {
        let d = exps
            .iter()
            .zip(&powers)
            .fold(Gf2Poly::one(), |acc, (&k, pw)| acc.mul(&pw[k]));
        out.push(d);
        // odometer increment
        let mut i = 0;
        loop {
            if i == exps.len() {
                out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.limbs().cmp(b.limbs())));
                return Ok(out);
            }
            exps[i] += 1;
            if exps[i] <= mult {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Multiset of coset sizes, keyed by size.
pub fn coset_size_profile(n: usize) -> Result<BTreeMap<usize, usize>> {
    let mut out = BTreeMap::new();
    for c in cyclotomic_cosets(n)? {
        *out.entry(c.len()).or_insert(0) += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Irreducibility by trial division with every polynomial of degree up
    /// to half the degree. Only usable for small degrees.
    fn irreducible_by_trial_division(f: &Gf2Poly) -> bool {
        let d = f.degree().unwrap();
        if d == 0 {
            return false;
        }
        for deg in 1..=d / 2 {
            for low in 0u64..(1 << deg) {
                let cand = Gf2Poly::from_limbs(vec![low | 1 << deg]);
                if cand.divides(f) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn cosets_mod_9() {
        let c = cyclotomic_cosets(9).unwrap();
        assert_eq!(c, vec![vec![0], vec![1, 2, 4, 5, 7, 8], vec![3, 6]]);
        assert_eq!(cyclotomic_cosets(1).unwrap(), vec![vec![0]]);
        let c13 = cyclotomic_cosets(13).unwrap();
        assert_eq!(c13.len(), 2);
        assert_eq!(c13[1].len(), 12);
        assert!(matches!(cyclotomic_cosets(10), Err(Error::Unsupported(_))));
    }

    #[test]
    fn factor_z9() {
        let f = factorize(9).unwrap();
        assert_eq!(
            f.factors(),
            &[
                Gf2Poly::from_exponents(&[0, 1]),
                Gf2Poly::from_exponents(&[0, 1, 2]),
                Gf2Poly::from_exponents(&[0, 3, 6]),
            ]
        );
        assert_eq!(factorize(1).unwrap().factors(), &[Gf2Poly::from_exponents(&[0, 1])]);
    }

    #[test]
    fn factor_z25_with_irreducibility_oracle() {
        let f = factorize(25).unwrap();
        assert_eq!(
            f.factors(),
            &[
                Gf2Poly::from_exponents(&[0, 1]),
                Gf2Poly::from_exponents(&[0, 1, 2, 3, 4]),
                Gf2Poly::from_exponents(&[0, 5, 10, 15, 20]),
            ]
        );
        for g in f.factors() {
            assert!(irreducible_by_trial_division(g), "{g} reducible");
        }
    }

    #[test]
    fn small_factorizations_are_irreducible() {
        for n in (1..=31).step_by(2) {
            for g in factorize(n).unwrap().factors() {
                assert!(irreducible_by_trial_division(g), "n={n}: {g}");
            }
        }
    }

    #[test]
    fn all_odd_n_up_to_512_multiply_back() {
        for n in (1..=512).step_by(2) {
            let f = factorize(n).unwrap();
            assert_eq!(f.product(), Gf2Poly::z_n_plus_one(n), "n={n}");
            let mut degs = f.degrees();
            degs.sort_unstable();
            let mut sizes: Vec<usize> = cyclotomic_cosets(n).unwrap().iter().map(Vec::len).collect();
            sizes.sort_unstable();
            assert_eq!(degs, sizes, "n={n}");
        }
    }

    #[test]
    fn factorize_limits() {
        assert!(matches!(factorize(8), Err(Error::Unsupported(_))));
        assert!(factorize(4097).unwrap_err().is_budget());
    }

    #[test]
    fn kasami_family() {
        let f = kasami_factors(3, 2).unwrap();
        assert_eq!(f.degrees(), vec![1, 2, 6]);
        let f = kasami_factors(3, 1).unwrap();
        assert_eq!(
            f.factors(),
            &[Gf2Poly::from_exponents(&[0, 1]), Gf2Poly::from_exponents(&[0, 1, 2])]
        );
        let f = kasami_factors(5, 2).unwrap();
        assert_eq!(f.degrees(), vec![1, 4, 20]);
        assert_eq!(f, factorize(25).unwrap());
        assert!(kasami_factors(7, 1).is_err());
    }

    #[test]
    fn repetition_polynomials() {
        assert_eq!(repetition_poly(9, 3).unwrap(), Poly::from_exponents(9, &[0, 3, 6]));
        assert_eq!(repetition_poly(7, 7).unwrap().coeffs().weight(), 7);
        assert_eq!(
            repetition_poly(25, 5).unwrap(),
            Poly::from_exponents(25, &[0, 5, 10, 15, 20])
        );
        assert!(repetition_poly(10, 3).is_err());
    }

    #[test]
    fn divisor_counts() {
        assert_eq!(divisors_of_z_n_plus_one(9).unwrap().len(), 8);
        // Z^4+1 = (1+Z)^4
        assert_eq!(divisors_of_z_n_plus_one(4).unwrap().len(), 5);
        // Z^6+1 = (1+Z)^2 (1+Z+Z^2)^2
        let d6 = divisors_of_z_n_plus_one(6).unwrap();
        assert_eq!(d6.len(), 9);
        let z6 = Gf2Poly::z_n_plus_one(6);
        assert!(d6.iter().all(|d| d.divides(&z6)));
    }
}
