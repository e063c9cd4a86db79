use std::fmt;

use crate::error::{check_len, Error, Result};
use crate::gf2poly::BitVec;

/// Polynomial over GF(2) of arbitrary degree, lowest coefficient first.
///
/// The limb vector never has trailing zero limbs, so derived equality is
/// equality of polynomials.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf2Poly {
    limbs: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Gf2Poly { limbs: vec![1] }
    }

    pub fn monomial(k: usize) -> Self {
        let mut p = Self::zero();
        p.set_coeff(k, true);
        p
    }

    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exps {
            p.flip_coeff(e);
        }
        p
    }

    /// `Z^n + 1`.
    pub fn z_n_plus_one(n: usize) -> Self {
        Self::from_exponents(&[0, n])
    }

    pub fn from_limbs(mut limbs: Vec<u64>) -> Self {
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        Gf2Poly { limbs }
    }

    pub fn from_bitvec(v: &BitVec) -> Self {
        Self::from_limbs(v.words().to_vec())
    }

    /// Coefficient vector of length `len`. Errors if the degree does not fit.
    pub fn to_bitvec(&self, len: usize) -> Result<BitVec> {
        match self.degree() {
            Some(d) if d >= len => Err(Error::invalid(format!(
                "degree {d} polynomial does not fit in length {len}"
            ))),
            _ => Ok(BitVec::from_words(self.limbs.clone(), len)),
        }
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.limbs.get(k / 64).is_some_and(|w| w >> (k % 64) & 1 == 1)
    }

    pub fn set_coeff(&mut self, k: usize, value: bool) {
        if self.coeff(k) != value {
            self.flip_coeff(k);
        }
    }

    pub fn flip_coeff(&mut self, k: usize) {
        if self.limbs.len() <= k / 64 {
            self.limbs.resize(k / 64 + 1, 0);
        }
        self.limbs[k / 64] ^= 1u64 << (k % 64);
        self.normalize();
    }

    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.limbs.iter().enumerate() {
            let mut rest = w;
            while rest != 0 {
                out.push(wi * 64 + rest.trailing_zeros() as usize);
                rest &= rest - 1;
            }
        }
        out
    }

    /// Value at `Z = 1`, i.e. weight parity.
    pub fn eval_at_one(&self) -> bool {
        self.weight() % 2 == 1
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let (long, short) = if self.limbs.len() >= other.limbs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut limbs = long.limbs.clone();
        for (a, b) in limbs.iter_mut().zip(&short.limbs) {
            *a ^= b;
        }
        Self::from_limbs(limbs)
    }

    /// Multiplication by `Z^k`.
    pub fn shl(&self, k: usize) -> Gf2Poly {
        if self.is_zero() {
            return Self::zero();
        }
        let (ws, bs) = (k / 64, k % 64);
        let mut limbs = vec![0u64; self.limbs.len() + ws + 1];
        for (i, &w) in self.limbs.iter().enumerate() {
            limbs[i + ws] ^= w << bs;
            if bs > 0 {
                limbs[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        Self::from_limbs(limbs)
    }

    fn xor_shifted_into(acc: &mut Vec<u64>, src: &[u64], k: usize) {
        let (ws, bs) = (k / 64, k % 64);
        let need = src.len() + ws + 1;
        if acc.len() < need {
            acc.resize(need, 0);
        }
        for (i, &w) in src.iter().enumerate() {
            acc[i + ws] ^= w << bs;
            if bs > 0 {
                acc[i + ws + 1] ^= w >> (64 - bs);
            }
        }
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        let (sparse, dense) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Vec::new();
        for e in sparse.exponents() {
            Self::xor_shifted_into(&mut acc, &dense.limbs, e);
        }
        Self::from_limbs(acc)
    }

    /// Quotient and remainder. Errors on division by zero.
    pub fn div_rem(&self, divisor: &Gf2Poly) -> Result<(Gf2Poly, Gf2Poly)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::invalid("polynomial division by zero"))?;
        let mut rem = self.limbs.clone();
        let mut quot = Gf2Poly::zero();
        loop {
            let r = Gf2Poly::from_limbs(std::mem::take(&mut rem));
            match r.degree() {
                Some(rd) if rd >= dd => {
                    let shift = rd - dd;
                    quot.flip_coeff(shift);
                    rem = r.limbs;
                    Self::xor_shifted_into(&mut rem, &divisor.limbs, shift);
                }
                _ => return Ok((quot, r)),
            }
        }
    }

    pub fn rem(&self, divisor: &Gf2Poly) -> Result<Gf2Poly> {
        Ok(self.div_rem(divisor)?.1)
    }

    pub fn divides(&self, other: &Gf2Poly) -> bool {
        !self.is_zero() && other.rem(self).is_ok_and(|r| r.is_zero())
    }

    /// Monic gcd. Over GF(2) every nonzero polynomial is monic. Errors when
    /// both inputs are zero.
    pub fn gcd(&self, other: &Gf2Poly) -> Result<Gf2Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::invalid("gcd(0, 0) is undefined"));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// Extended Euclid: `(g, s, t)` with `s*self + t*other = g`.
    pub fn ext_gcd(&self, other: &Gf2Poly) -> Result<(Gf2Poly, Gf2Poly, Gf2Poly)> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::invalid("gcd(0, 0) is undefined"));
        }
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Gf2Poly::one(), Gf2Poly::zero());
        let (mut t0, mut t1) = (Gf2Poly::zero(), Gf2Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = s0.add(&q.mul(&s1));
            let t = t0.add(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        Ok((r0, s0, t0))
    }

    /// `Z^deg * p(1/Z)`.
    pub fn reciprocal(&self) -> Gf2Poly {
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        let exps: Vec<usize> = self.exponents().into_iter().map(|e| d - e).collect();
        Self::from_exponents(&exps)
    }

    /// Reduction modulo `Z^n + 1` by folding exponents.
    pub fn reduce_cyclic(&self, n: usize) -> BitVec {
        assert!(n > 0);
        let mut out = BitVec::zeros(n);
        for e in self.exponents() {
            out.flip(e % n);
        }
        out
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "Z".to_string(),
                _ => format!("Z^{e}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

/// Element of `F2[Z]/(Z^n + 1)` in canonical residue form (exactly `n`
/// coefficients, lowest degree first).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: BitVec,
}

impl Poly {
    pub fn new(coeffs: BitVec) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("ring length must be positive"));
        }
        Ok(Poly { coeffs })
    }

    pub fn zero(n: usize) -> Self {
        Poly { coeffs: BitVec::zeros(n) }
    }

    pub fn one(n: usize) -> Self {
        let mut c = BitVec::zeros(n);
        c.set(0, true);
        Poly { coeffs: c }
    }

    pub fn from_exponents(n: usize, exps: &[usize]) -> Self {
        let mut c = BitVec::zeros(n);
        for &e in exps {
            c.flip(e % n);
        }
        Poly { coeffs: c }
    }

    /// Reduces an arbitrary polynomial into the ring of length `n`.
    pub fn from_gf2poly(p: &Gf2Poly, n: usize) -> Self {
        Poly { coeffs: p.reduce_cyclic(n) }
    }

    pub fn ring_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &BitVec {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> BitVec {
        self.coeffs
    }

    pub fn to_gf2poly(&self) -> Gf2Poly {
        Gf2Poly::from_bitvec(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        Ok(Poly { coeffs: self.coeffs.xor(&other.coeffs)? })
    }

    pub fn mul_mod(&self, other: &Poly) -> Result<Poly> {
        poly_mul_mod(self, other)
    }

    /// `n=<len>;coeffs=<hex>`.
    pub fn serialize(&self) -> String {
        format!("n={};coeffs={}", self.ring_len(), self.coeffs.to_hex())
    }

    pub fn parse(s: &str) -> Result<Poly> {
        let fields = crate::parse_fields(s)?;
        let n: usize = crate::field(&fields, "n")?
            .parse()
            .map_err(|e| Error::Parse(format!("bad length in {s:?}: {e}")))?;
        let coeffs = BitVec::from_hex(crate::field(&fields, "coeffs")?, n)?;
        Poly::new(coeffs)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly(n={}; {})", self.ring_len(), self.to_gf2poly())
    }
}

/// `u * v mod (Z^n + 1)`.
pub fn poly_mul_mod(u: &Poly, v: &Poly) -> Result<Poly> {
    check_len(u.ring_len(), v.ring_len())?;
    let n = u.ring_len();
    let mut acc = BitVec::zeros(n);
    let (sparse, dense) = if u.coeffs.weight() <= v.coeffs.weight() {
        (u, v)
    } else {
        (v, u)
    };
    for e in sparse.coeffs.iter_ones() {
        acc.xor_assign(&dense.coeffs.rotate_right(e))?;
    }
    Ok(Poly { coeffs: acc })
}

/// Monic gcd in `F2[Z]`. Ring elements are lifted to their canonical
/// representatives first.
pub fn poly_gcd(u: &Gf2Poly, v: &Gf2Poly) -> Result<Gf2Poly> {
    u.gcd(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: usize, e: &[usize]) -> Poly {
        Poly::from_exponents(n, e)
    }

    #[test]
    fn annihilating_pair_mod_z3() {
        let prod = poly_mul_mod(&p(3, &[0, 1]), &p(3, &[0, 1, 2])).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn multiplicative_identity() {
        let u = p(8, &[0, 2, 5, 7]);
        assert_eq!(poly_mul_mod(&u, &Poly::one(8)).unwrap(), u);
    }

    #[test]
    fn square_of_one_plus_z_mod_z5() {
        // (1+Z)^2 = 1 + 2Z + Z^2 = 1 + Z^2 over GF(2)
        let sq = poly_mul_mod(&p(5, &[0, 1]), &p(5, &[0, 1])).unwrap();
        assert_eq!(sq, p(5, &[0, 2]));
    }

    #[test]
    fn mul_rejects_mismatched_rings() {
        assert!(matches!(
            poly_mul_mod(&Poly::one(3), &Poly::one(4)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn gcd_examples() {
        let z9 = Gf2Poly::z_n_plus_one(9);
        let f6 = Gf2Poly::from_exponents(&[0, 3, 6]);
        assert_eq!(poly_gcd(&z9, &f6).unwrap(), f6);
        let u = Gf2Poly::from_exponents(&[0, 2, 3]);
        assert_eq!(poly_gcd(&u, &Gf2Poly::zero()).unwrap(), u);
        let one = poly_gcd(&Gf2Poly::from_exponents(&[0, 1]), &Gf2Poly::from_exponents(&[0, 1, 2])).unwrap();
        assert!(one.is_one());
        assert!(poly_gcd(&Gf2Poly::zero(), &Gf2Poly::zero()).is_err());
    }

    #[test]
    fn ext_gcd_bezout_for_coprime_factors() {
        // extended Euclid oracle for gcd(1+Z, 1+Z+Z^2) = 1
        let a = Gf2Poly::from_exponents(&[0, 1]);
        let b = Gf2Poly::from_exponents(&[0, 1, 2]);
        let (g, s, t) = a.ext_gcd(&b).unwrap();
        assert!(g.is_one());
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn serialization_format() {
        let r = p(9, &[0, 3, 6]);
        assert_eq!(r.serialize(), "n=9;coeffs=0x49");
        assert_eq!(Poly::parse("n=9;coeffs=0x49").unwrap(), r);
    }

    #[test]
    fn division_and_reciprocal() {
        let z9 = Gf2Poly::z_n_plus_one(9);
        let f = Gf2Poly::from_exponents(&[0, 1, 2]);
        let (q, r) = z9.div_rem(&f).unwrap();
        assert!(r.is_zero());
        assert_eq!(q.mul(&f), z9);
        assert_eq!(Gf2Poly::from_exponents(&[0, 1, 3]).reciprocal(), Gf2Poly::from_exponents(&[0, 2, 3]));
    }

    fn ring(n: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(any::<bool>(), n).prop_map(|b| Poly::new(BitVec::from_bools(&b)).unwrap())
    }

    fn raw() -> impl Strategy<Value = Gf2Poly> {
        prop::collection::vec(any::<u64>(), 0..3).prop_map(Gf2Poly::from_limbs)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1200))]

        #[test]
        fn ring_laws((a, b, c) in (1usize..90).prop_flat_map(|n| (ring(n), ring(n), ring(n)))) {
            let ab = a.mul_mod(&b).unwrap();
            prop_assert_eq!(&ab, &b.mul_mod(&a).unwrap());
            prop_assert_eq!(ab.mul_mod(&c).unwrap(), a.mul_mod(&b.mul_mod(&c).unwrap()).unwrap());
            let lhs = a.mul_mod(&b.add(&c).unwrap()).unwrap();
            let rhs = ab.add(&a.mul_mod(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn ring_mul_matches_raw_product(a in raw(), b in raw(), n in 1usize..200) {
            let ra = Poly::from_gf2poly(&a, n);
            let rb = Poly::from_gf2poly(&b, n);
            prop_assert_eq!(ra.mul_mod(&rb).unwrap(), Poly::from_gf2poly(&a.mul(&b), n));
        }

        #[test]
        fn gcd_divides_both(a in raw(), b in raw()) {
            prop_assume!(!(a.is_zero() && b.is_zero()));
            let g = a.gcd(&b).unwrap();
            prop_assert!(a.rem(&g).unwrap().is_zero());
            prop_assert!(b.rem(&g).unwrap().is_zero());
        }

        #[test]
        fn division_identity(a in raw(), b in raw()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.degree() < b.degree());
        }
    }
}
