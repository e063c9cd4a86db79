use std::fmt;

use crate::error::{check_len, Error, Result};
use crate::gf2poly::{divisors_of_z_n_plus_one, repetition_poly, BitVec, Gf2Poly};
use crate::numbertheory;

/// Cyclic code of length `n` given by its canonical (monic) generator
/// `g | Z^n + 1`. The zero code has `g = Z^n + 1`; the full space has `g = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclicCode {
    n: usize,
    g: Gf2Poly,
}

impl CyclicCode {
    pub fn new(n: usize, g: Gf2Poly) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        if !g.divides(&Gf2Poly::z_n_plus_one(n)) {
            return Err(Error::invalid(format!("{g} does not divide Z^{n}+1")));
        }
        Ok(CyclicCode { n, g })
    }

    pub fn full(n: usize) -> Self {
        CyclicCode { n, g: Gf2Poly::one() }
    }

    pub fn zero(n: usize) -> Self {
        CyclicCode { n, g: Gf2Poly::z_n_plus_one(n) }
    }

    pub fn even_weight(n: usize) -> Self {
        CyclicCode { n, g: Gf2Poly::from_exponents(&[0, 1]) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generator(&self) -> &Gf2Poly {
        &self.g
    }

    pub fn redundancy(&self) -> usize {
        self.g.degree().expect("generator is nonzero")
    }

    pub fn dim(&self) -> usize {
        self.n - self.redundancy()
    }

    /// `Z^n + 1 = g h`.
    pub fn check_poly(&self) -> Gf2Poly {
        Gf2Poly::z_n_plus_one(self.n).div_rem(&self.g).expect("g nonzero").0
    }

    pub fn contains(&self, v: &BitVec) -> Result<bool> {
        check_len(self.n, v.len())?;
        Ok(Gf2Poly::from_bitvec(v).rem(&self.g)?.is_zero())
    }

    /// `self` is a subcode of `other`.
    pub fn is_subcode_of(&self, other: &CyclicCode) -> bool {
        self.n == other.n && other.g.divides(&self.g)
    }

    /// The dual code, generated by the reciprocal of the check polynomial.
    pub fn dual(&self) -> CyclicCode {
        CyclicCode { n: self.n, g: self.check_poly().reciprocal() }
    }

    /// Basis `g, Z g, ..., Z^(dim-1) g` as length-`n` vectors.
    pub fn generator_rows(&self) -> Vec<BitVec> {
        (0..self.dim())
            .map(|i| self.g.shl(i).to_bitvec(self.n).expect("degree < n"))
            .collect()
    }

    /// `n=<int>;g=<hex>` (generator coefficients, bit `i` = `Z^i`, width `n+1`).
    pub fn serialize(&self) -> String {
        let v = self.g.to_bitvec(self.n + 1).expect("deg g <= n");
        format!("n={};g={}", self.n, v.to_hex())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let fields = crate::parse_fields(s)?;
        let n: usize = crate::field(&fields, "n")?
            .parse()
            .map_err(|e| Error::Parse(format!("bad n in {s:?}: {e}")))?;
        let g = BitVec::from_hex(crate::field(&fields, "g")?, n + 1)?;
        Self::new(n, Gf2Poly::from_bitvec(&g))
    }
}

impl fmt::Debug for CyclicCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicCode(n={}, g={}, dim={})", self.n, self.g, self.dim())
    }
}

/// `C(u)`: the cyclic code generated by `u(Z)`, with canonical generator
/// `gcd(u(Z), Z^n + 1)`.
pub fn cyclic_from_vector(u: &BitVec) -> Result<CyclicCode> {
    let n = u.len();
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let g = Gf2Poly::from_bitvec(u).gcd(&Gf2Poly::z_n_plus_one(n))?;
    Ok(CyclicCode { n, g })
}

pub fn cyclic_contains(code: &CyclicCode, v: &BitVec) -> Result<bool> {
    code.contains(v)
}

/// Every cyclic code of length `n`, ordered by increasing redundancy.
pub fn cyclic_lattice(n: usize) -> Result<Vec<CyclicCode>> {
    Ok(divisors_of_z_n_plus_one(n)?
        .into_iter()
        .map(|g| CyclicCode { n, g })
        .collect())
}

/// The class of cyclic codes of length `n = p^m` whose generator is not a
/// multiple of `P_n(Z) = 1 + Z^(n/p) + ... + Z^((p-1)n/p)`.
pub fn class_cn(n: usize) -> Result<Vec<CyclicCode>> {
    let (p, _) = odd_prime_power(n)?;
    let pn = repetition_poly(n, p)?.to_gf2poly();
    Ok(cyclic_lattice(n)?
        .into_iter()
        .filter(|c| !pn.divides(c.generator()))
        .collect())
}

/// `(p, m)` with `n = p^m`, `p` an odd prime, `m >= 1`.
pub fn odd_prime_power(n: usize) -> Result<(usize, u32)> {
    let err = || Error::invalid(format!("{n} is not a power of an odd prime"));
    if n < 3 {
        return Err(err());
    }
    let p = (3..=n).find(|d| n.is_multiple_of(*d)).ok_or_else(err)?;
    if !numbertheory::is_prime(p as u64) {
        return Err(err());
    }
    let (mut rest, mut m) = (n, 0u32);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    if rest != 1 {
        return Err(err());
    }
    Ok((p, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitVec {
        BitVec::from_bitstring(s).unwrap()
    }

    #[test]
    fn generated_codes() {
        let c = cyclic_from_vector(&bits("111")).unwrap();
        assert_eq!(c.generator(), &Gf2Poly::from_exponents(&[0, 1, 2]));
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&bits("111")).unwrap());
        assert!(!c.contains(&bits("110")).unwrap());
        let z = cyclic_from_vector(&BitVec::zeros(5)).unwrap();
        assert_eq!(z, CyclicCode::zero(5));
        assert_eq!(z.dim(), 0);
    }

    #[test]
    fn odd_weight_vectors_generate_no_even_subcode_n13() {
        // an odd-weight u has u(1) = 1, so 1+Z cannot divide the generator
        for v in 1u64..(1 << 13) {
            let u = BitVec::from_u64(v, 13).unwrap();
            let c = cyclic_from_vector(&u).unwrap();
            if u.weight() % 2 == 1 {
                assert!(!Gf2Poly::from_exponents(&[0, 1]).divides(c.generator()));
                assert!(c == CyclicCode::full(13) || c.dim() == 1, "v={v:#x}");
            }
        }
    }

    #[test]
    fn containment() {
        let even = CyclicCode::even_weight(3);
        assert!(even.contains(&BitVec::zeros(3)).unwrap());
        assert!(even.contains(&bits("110")).unwrap());
        assert!(!even.contains(&bits("100")).unwrap());
        let zero = CyclicCode::zero(3);
        assert!(zero.contains(&BitVec::zeros(3)).unwrap());
        assert!(!zero.contains(&bits("111")).unwrap());
        assert!(matches!(even.contains(&BitVec::zeros(4)), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn class_cn_examples() {
        let c9 = class_cn(9).unwrap();
        assert_eq!(c9.len(), 4);
        let dims: Vec<usize> = c9.iter().map(CyclicCode::dim).collect();
        assert_eq!(dims, vec![9, 8, 7, 6]);
        let c13 = class_cn(13).unwrap();
        assert_eq!(c13, vec![CyclicCode::full(13), CyclicCode::even_weight(13)]);
        for n in [9, 13, 25, 27] {
            assert!(!class_cn(n).unwrap().contains(&CyclicCode::zero(n)));
        }
        assert!(class_cn(15).is_err());
        assert!(class_cn(16).is_err());
    }

    #[test]
    fn dual_and_rows() {
        let even = CyclicCode::even_weight(3);
        let rep = even.dual();
        assert_eq!(rep.generator(), &Gf2Poly::from_exponents(&[0, 1, 2]));
        assert_eq!(rep.dual(), even);
        assert_eq!(CyclicCode::zero(4).dual(), CyclicCode::full(4));
        assert_eq!(even.generator_rows(), vec![bits("110"), bits("011")]);
    }

    #[test]
    fn lattice_sizes_and_serialization() {
        assert_eq!(cyclic_lattice(9).unwrap().len(), 8);
        assert_eq!(cyclic_lattice(15).unwrap().len(), 32);
        let c = CyclicCode::new(9, Gf2Poly::from_exponents(&[0, 3, 6])).unwrap();
        assert_eq!(c.serialize(), "n=9;g=0x49");
        assert_eq!(CyclicCode::parse("n=9;g=0x49").unwrap(), c);
        assert!(CyclicCode::new(9, Gf2Poly::from_exponents(&[0, 2])).is_err());
        assert_eq!(odd_prime_power(27).unwrap(), (3, 3));
    }
}
