//! The action of `Z/nZ` on `{0,1}^(2n)` by simultaneous cyclic shift of
//! both halves.

use crate::error::{Error, Result};
use crate::gf2poly::BitVec;

fn halves(x: &BitVec) -> Result<(BitVec, BitVec)> {
    if x.is_empty() || !x.len().is_multiple_of(2) {
        return Err(Error::invalid(format!("vector length {} is not 2n with n >= 1", x.len())));
    }
    Ok(x.split_at(x.len() / 2))
}

/// `j . x`: both halves shifted right by `j` (`1 . x = (x_n, x_1 .. x_{n-1}, x_2n, x_{n+1} ..)`).
pub fn shift_action(j: usize, x: &BitVec) -> Result<BitVec> {
    let (l, r) = halves(x)?;
    Ok(l.rotate_right(j).concat(&r.rotate_right(j)))
}

/// Size of the orbit of `x`; always a divisor of `n`.
pub fn orbit_length(x: &BitVec) -> Result<usize> {
    let (l, r) = halves(x)?;
    let n = l.len();
    Ok((1..=n)
        .filter(|d| n % d == 0)
        .find(|&d| l.rotate_right(d) == l && r.rotate_right(d) == r)
        .unwrap_or(n))
}

/// Lexicographically smallest element of the orbit of `x` (positions read
/// from 0, `0 < 1`).
pub fn canonical_rep(x: &BitVec) -> Result<BitVec> {
    let (l, r) = halves(x)?;
    let n = l.len();
    let mut best = x.clone();
    for j in 1..n {
        let cand = l.rotate_right(j).concat(&r.rotate_right(j));
        if cand.lex_cmp(&best).is_lt() {
            best = cand;
        }
    }
    Ok(best)
}

/// One row of an orbit table: a representative, its orbit size and weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRow {
    pub representative: BitVec,
    pub length: usize,
    pub weight: usize,
}

/// All orbits of `{0,1}^(2n)` with weight at most `max_weight`, ordered by
/// the packed value of their representative. Intended for `n <= 12`.
pub fn orbit_table(n: usize, max_weight: usize) -> Result<Vec<OrbitRow>> {
    if n == 0 || n > 12 {
        return Err(Error::budget(format!("orbit table requires 1 <= n <= 12, got {n}")));
    }
    let mut rows = Vec::new();
    for v in 0u64..(1u64 << (2 * n)) {
        if v.count_ones() as usize > max_weight {
            continue;
        }
        let x = BitVec::from_u64(v, 2 * n)?;
        if canonical_rep(&x)? == x {
            rows.push(OrbitRow {
                length: orbit_length(&x)?,
                weight: x.weight(),
                representative: x,
            });
        }
    }
    Ok(rows)
}

/// CSV with header `representative,length,weight`; representatives as bit strings.
pub fn orbit_table_csv(rows: &[OrbitRow]) -> String {
    let mut out = String::from("representative,length,weight\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.representative, r.length, r.weight));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::DoubleCirculantCode;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits(s: &str) -> BitVec {
        BitVec::from_bitstring(s).unwrap()
    }

    #[test]
    fn shift_examples() {
        let x = bits("100010");
        assert_eq!(shift_action(0, &x).unwrap(), x);
        assert_eq!(shift_action(1, &x).unwrap(), bits("010001"));
        assert_eq!(shift_action(3, &x).unwrap(), x);
    }

    #[test]
    fn orbit_length_examples() {
        assert_eq!(orbit_length(&BitVec::zeros(18)).unwrap(), 1);
        let rep = bits("100100100100100100");
        assert_eq!(orbit_length(&rep).unwrap(), 3);
        let mut x = BitVec::zeros(26);
        x.set(0, true);
        x.set(15, true);
        assert_eq!(orbit_length(&x).unwrap(), 13);
    }

    #[test]
    fn orbits_partition_small_spaces() {
        for n in [3usize, 5] {
            let rows = orbit_table(n, 2 * n).unwrap();
            let total: usize = rows.iter().map(|r| r.length).sum();
            assert_eq!(total, 1 << (2 * n));
            assert!(rows.iter().all(|r| n % r.length == 0));
        }
    }

    #[test]
    fn rep_is_shift_invariant_n13() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let x = BitVec::from_bools(&(0..26).map(|_| rng.gen()).collect::<Vec<bool>>());
            let y = shift_action(5, &x).unwrap();
            assert_eq!(canonical_rep(&x).unwrap(), canonical_rep(&y).unwrap());
        }
    }

    #[test]
    fn table_csv_has_header() {
        let csv = orbit_table_csv(&orbit_table(2, 1).unwrap());
        assert_eq!(csv, "representative,length,weight\n0000,1,0\n0100,2,1\n0001,2,1\n");
    }

    proptest! {
        #[test]
        fn action_is_a_group_action(bits in (1usize..20).prop_flat_map(|n| prop::collection::vec(any::<bool>(), 2 * n)), j in 0usize..50, k in 0usize..50) {
            let x = BitVec::from_bools(&bits);
            let lhs = shift_action(j + k, &x).unwrap();
            let rhs = shift_action(j, &shift_action(k, &x).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let n = bits.len() / 2;
            prop_assert_eq!(shift_action(n, &x).unwrap(), x.clone());
            let rep = canonical_rep(&x).unwrap();
            prop_assert_eq!(canonical_rep(&rep).unwrap(), rep);
            prop_assert_eq!(n % orbit_length(&x).unwrap(), 0);
        }

        #[test]
        fn codes_are_shift_invariant(
            (a, m) in (1usize..30).prop_flat_map(|n| (
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(any::<bool>(), n),
            )),
            j in 0usize..60,
        ) {
            let c = DoubleCirculantCode::new(BitVec::from_bools(&a)).unwrap();
            let x = c.encode(&BitVec::from_bools(&m)).unwrap();
            prop_assert!(c.contains(&shift_action(j, &x).unwrap()).unwrap());
        }
    }
}
