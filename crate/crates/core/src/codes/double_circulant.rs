use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Error, Result};
use crate::gf2poly::{BitVec, Gf2Poly, Poly};

/// `[2n, n]` binary code with parity-check matrix `H = [I_n | A]`, where
/// `A` is the circulant with first column `a`: `A[i][j] = a[(i - j) mod n]`.
///
/// A vector `x = (x_L, x_R)` (left half = positions `0..n`) is a codeword
/// iff `x_L(Z) = x_R(Z) a(Z) mod Z^n + 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DoubleCirculantCode {
    a: BitVec,
}

/// Left and right syndromes of a length-`2n` vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromePair {
    /// `sigma_L(x) = x_L`.
    pub left: BitVec,
    /// `sigma_R(x)`: coefficients of `x_R(Z) a(Z)`.
    pub right: BitVec,
}

impl SyndromePair {
    pub fn total(&self) -> BitVec {
        self.left.xor(&self.right).expect("halves share a length")
    }

    pub fn is_zero(&self) -> bool {
        self.left == self.right
    }
}

impl DoubleCirculantCode {
    pub fn new(a: BitVec) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::invalid("n must be positive"));
        }
        Ok(DoubleCirculantCode { a })
    }

    /// Draws `a` uniformly from `{0,1}^n` with a ChaCha8 stream seeded by `seed`.
    pub fn sample(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::sample_with(n, &mut rng)
    }

    pub fn sample_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        Self::new(BitVec::from_bools(&bits))
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn length(&self) -> usize {
        2 * self.n()
    }

    pub fn dim(&self) -> usize {
        self.n()
    }

    pub fn a(&self) -> &BitVec {
        &self.a
    }

    pub fn a_poly(&self) -> Poly {
        Poly::new(self.a.clone()).expect("n >= 1")
    }

    /// `a` packed in one word when `n <= 64`.
    pub fn a_word(&self) -> Option<u64> {
        self.a.as_u64()
    }

    /// Inverse of `a(Z)` in the ring, when it exists.
    pub fn a_inverse(&self) -> Option<Poly> {
        let n = self.n();
        let (g, s, _) = Gf2Poly::from_bitvec(&self.a)
            .ext_gcd(&Gf2Poly::z_n_plus_one(n))
            .ok()?;
        g.is_one().then(|| Poly::from_gf2poly(&s, n))
    }

    pub fn syndrome(&self, x: &BitVec) -> Result<SyndromePair> {
        check_len(self.length(), x.len())?;
        let (left, right) = x.split_at(self.n());
        let right = Poly::new(right)?.mul_mod(&self.a_poly())?.into_coeffs();
        Ok(SyndromePair { left, right })
    }

    pub fn contains(&self, x: &BitVec) -> Result<bool> {
        Ok(self.syndrome(x)?.is_zero())
    }

    /// The codeword `(m a, m)` carrying message `m` in its right half.
    pub fn encode(&self, m: &BitVec) -> Result<BitVec> {
        check_len(self.n(), m.len())?;
        let left = Poly::new(m.clone())?.mul_mod(&self.a_poly())?.into_coeffs();
        Ok(left.concat(m))
    }

    /// Explicit `n x 2n` parity-check matrix, rows as bit vectors.
    pub fn parity_check_matrix(&self) -> Vec<BitVec> {
        let n = self.n();
        (0..n)
            .map(|i| {
                let mut row = BitVec::zeros(2 * n);
                row.set(i, true);
                for j in 0..n {
                    if self.a.get((i + n - j) % n) {
                        row.set(n + j, true);
                    }
                }
                row
            })
            .collect()
    }

    /// Fast membership for `n <= 64` with both halves packed in words.
    #[cfg(test)]
    pub(crate) fn contains_words(a: u64, n: usize, left: u64, right: u64) -> bool {
        crate::gf2poly::word::mul_mod(right, a, n) == left
    }

    /// `n=<int>;a=<hex>`.
    pub fn serialize(&self) -> String {
        format!("n={};a={}", self.n(), self.a.to_hex())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let fields = crate::parse_fields(s)?;
        let n: usize = crate::field(&fields, "n")?
            .parse()
            .map_err(|e| Error::Parse(format!("bad n in {s:?}: {e}")))?;
        Self::new(parse_defining_vector(crate::field(&fields, "a")?, n)?)
    }
}

/// Accepts `0x`-prefixed hex, a `0`/`1` string of exactly `n` characters
/// (position 0 first), or bare hex.
pub fn parse_defining_vector(s: &str, n: usize) -> Result<BitVec> {
    let s = s.trim();
    if s.starts_with("0x") || s.starts_with("0X") {
        return BitVec::from_hex(s, n);
    }
    if s.len() == n && s.chars().all(|c| c == '0' || c == '1') {
        return BitVec::from_bitstring(s);
    }
    BitVec::from_hex(s, n)
}

impl fmt::Debug for DoubleCirculantCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleCirculantCode({})", self.serialize())
    }
}

/// Free-function form of [`DoubleCirculantCode::contains`].
pub fn dc_contains(code: &DoubleCirculantCode, x: &BitVec) -> Result<bool> {
    code.contains(x)
}

pub fn dc_sample(n: usize, seed: u64) -> Result<DoubleCirculantCode> {
    DoubleCirculantCode::sample(n, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> BitVec {
        BitVec::from_bitstring(s).unwrap()
    }

    fn code(a: &str) -> DoubleCirculantCode {
        DoubleCirculantCode::new(bits(a)).unwrap()
    }

    /// H x^T computed from the explicit matrix.
    fn matrix_syndrome(c: &DoubleCirculantCode, x: &BitVec) -> BitVec {
        let rows = c.parity_check_matrix();
        let mut s = BitVec::zeros(c.n());
        for (i, row) in rows.iter().enumerate() {
            s.set(i, row.and(x).unwrap().weight() % 2 == 1);
        }
        s
    }

    #[test]
    fn membership_examples() {
        let c = code("110");
        assert!(!c.contains(&bits("101100")).unwrap());
        assert!(c.contains(&bits("110100")).unwrap());
        assert!(c.contains(&BitVec::zeros(6)).unwrap());
        assert!(matches!(c.contains(&BitVec::zeros(5)), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn matrix_row_zero_matches_displayed_layout() {
        // row 0 of A is (a0, a_{n-1}, ..., a1)
        let c = code("1101");
        let row0 = &c.parity_check_matrix()[0];
        assert_eq!(row0.to_bitstring(), "1000".to_string() + "1101");
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = DoubleCirculantCode::sample(40, 7).unwrap();
        let b = DoubleCirculantCode::sample(40, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_bits_are_balanced() {
        let n = 16;
        let mut counts = vec![0u32; n];
        for seed in 0..10_000 {
            let c = DoubleCirculantCode::sample(n, seed).unwrap();
            for i in c.a().iter_ones() {
                counts[i] += 1;
            }
        }
        for &k in &counts {
            let freq = k as f64 / 10_000.0;
            assert!((0.47..=0.53).contains(&freq), "frequency {freq}");
        }
    }

    #[test]
    fn distinct_seeds_give_distinct_codes() {
        let differ = (0..100u64)
            .filter(|&s| DoubleCirculantCode::sample(32, 2 * s).unwrap() != DoubleCirculantCode::sample(32, 2 * s + 1).unwrap())
            .count();
        assert_eq!(differ, 100);
    }

    #[test]
    fn inverse_when_coprime() {
        let c = code("110"); // 1+Z shares the factor 1+Z with Z^3+1
        assert!(c.a_inverse().is_none());
        let c = code("100");
        assert_eq!(c.a_inverse().unwrap(), Poly::one(3));
        let c = code("1110000");
        let inv = c.a_inverse().unwrap();
        assert_eq!(inv.mul_mod(&c.a_poly()).unwrap(), Poly::one(7));
    }

    #[test]
    fn parse_forms() {
        let c = DoubleCirculantCode::parse("n=3;a=110").unwrap();
        assert_eq!(c, code("110"));
        assert_eq!(DoubleCirculantCode::parse(&c.serialize()).unwrap(), c);
        assert_eq!(c.serialize(), "n=3;a=0x3");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn polynomial_membership_agrees_with_matrix(
            (a, x) in (1usize..=64).prop_flat_map(|n| (
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(any::<bool>(), 2 * n),
            ))
        ) {
            let c = DoubleCirculantCode::new(BitVec::from_bools(&a)).unwrap();
            let x = BitVec::from_bools(&x);
            let s = c.syndrome(&x).unwrap().total();
            prop_assert_eq!(&s, &matrix_syndrome(&c, &x));
            prop_assert_eq!(c.contains(&x).unwrap(), s.is_zero());
        }

        #[test]
        fn encoded_messages_are_codewords(
            (a, m) in (1usize..=40).prop_flat_map(|n| (
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(any::<bool>(), n),
            ))
        ) {
            let c = DoubleCirculantCode::new(BitVec::from_bools(&a)).unwrap();
            let x = c.encode(&BitVec::from_bools(&m)).unwrap();
            prop_assert!(c.contains(&x).unwrap());
            if let (Some(aw), Some(xw)) = (c.a_word(), x.split_at(c.n()).0.as_u64()) {
                let r = x.split_at(c.n()).1.as_u64().unwrap();
                prop_assert!(DoubleCirculantCode::contains_words(aw, c.n(), xw, r));
            }
        }
    }
}
