use num_bigint::BigUint;
use proptest::prelude::*;

use super::*;
use crate::codes::{cyclic_lattice, dc_contains, CyclicCode, DoubleCirculantCode};
use crate::gf2poly::{BitVec, Gf2Poly};

fn counts(wd: &WeightDistribution) -> Vec<u64> {
    wd.counts().iter().map(|c| c.try_into().unwrap()).collect()
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn dc(bits: &str) -> DoubleCirculantCode {
    DoubleCirculantCode::new(BitVec::from_bitstring(bits).unwrap()).unwrap()
}

#[test]
fn small_distributions() {
    let even = CyclicCode::even_weight(3);
    assert_eq!(counts(&weight_distribution(&even, 26).unwrap()), [1, 0, 3, 0]);
    assert_eq!(counts(&weight_distribution(&CyclicCode::full(3), 26).unwrap()), [1, 3, 3, 1]);
    assert_eq!(counts(&weight_distribution(&CyclicCode::zero(5), 26).unwrap()), [1, 0, 0, 0, 0, 0]);
}

#[test]
fn dual_route_at_n9() {
    let c = CyclicCode::new(9, Gf2Poly::from_exponents(&[0, 1, 2])).unwrap();
    assert_eq!(c.dim(), 7);
    let direct = weight_distribution_direct(&c).unwrap();
    let via_dual = weight_distribution(&c, 26).unwrap();
    assert_eq!(direct, via_dual);
    assert_eq!(direct.total(), BigUint::from(128u32));
    assert!(weight_distribution(&c, 1).unwrap_err().is_budget());
}

#[test]
fn macwilliams_examples() {
    let full = WeightDistribution::from_u64(&[1, 3, 3, 1]).unwrap();
    assert_eq!(counts(&macwilliams_transform(&full, 3).unwrap()), [1, 0, 0, 0]);
    let even = WeightDistribution::from_u64(&[1, 0, 3, 0]).unwrap();
    assert_eq!(counts(&macwilliams_transform(&even, 2).unwrap()), [1, 0, 0, 1]);
    assert!(macwilliams_transform(&even, 3).is_err());
    // sums to 4 but is not a linear code's distribution
    let bogus = WeightDistribution::from_u64(&[1, 3, 0, 0]).unwrap();
    assert!(macwilliams_transform(&bogus, 2).is_err());
}

#[test]
fn every_cyclic_code_up_to_15() {
    for n in 1..=15 {
        for c in cyclic_lattice(n).unwrap() {
            let direct = weight_distribution_direct(&c).unwrap();
            let dual = weight_distribution_direct(&c.dual()).unwrap();
            assert_eq!(macwilliams_transform(&dual, n - c.dim()).unwrap(), direct, "{c:?}");
            let back = macwilliams_transform(&macwilliams_transform(&direct, c.dim()).unwrap(), n - c.dim());
            assert_eq!(back.unwrap(), direct);
            for (i, a) in counts(&direct).into_iter().enumerate() {
                assert!(a <= binom(n as u64, i as u64));
            }
        }
    }
}

#[test]
fn chunked_enumeration_matches_plain() {
    // dim 20 > chunk size, so several tasks run
    let c = CyclicCode::new(21, Gf2Poly::from_exponents(&[0, 1])).unwrap();
    let wd = weight_distribution_direct(&c).unwrap();
    for (i, a) in counts(&wd).into_iter().enumerate() {
        assert_eq!(a, if i % 2 == 0 { binom(21, i as u64) } else { 0 });
    }
}

#[test]
fn distance_examples() {
    let r = min_distance_exact(&dc("110")).unwrap();
    assert_eq!(r.value, 3);
    assert!(r.exact);
    assert!(dc_contains(&dc("110"), &r.witness).unwrap());
    assert_eq!(min_distance_exact(&dc("1")).unwrap().value, 2);
    assert!(low_weight_search(&dc("110"), 2, 50, 7).is_none());
    let big = DoubleCirculantCode::sample(40, 1).unwrap();
    assert!(min_distance_exact(&big).unwrap_err().is_budget());
    assert!(min_distance_exact_with_limit(&big, 40).is_ok());
}

/// Minimum weight over every vector accepted by the parity checks.
fn distance_from_all_vectors(code: &DoubleCirculantCode) -> usize {
    let n = code.n();
    (1u64..1 << (2 * n))
        .map(|x| BitVec::from_u64(x, 2 * n).unwrap())
        .filter(|x| code.contains(x).unwrap())
        .map(|x| x.weight())
        .min()
        .unwrap()
}

#[test]
fn exact_distance_agrees_with_oracles() {
    for n in 1..=12 {
        for seed in 0..20 {
            let code = DoubleCirculantCode::sample(n, seed).unwrap();
            let exact = min_distance_exact(&code).unwrap();
            assert_eq!(exact.value, min_distance_bruteforce(&code).unwrap().value, "n={n} seed={seed}");
            assert_eq!(exact.witness.weight(), exact.value);
            assert!(dc_contains(&code, &exact.witness).unwrap());
            if n <= 7 {
                assert_eq!(exact.value, distance_from_all_vectors(&code));
            }
            let wd = dc_weight_distribution(&code).unwrap();
            assert_eq!(wd.iter().sum::<u64>(), 1 << n);
            assert_eq!((1..).find(|&i| wd[i] > 0).unwrap(), exact.value);
        }
    }
    // non-invertible a: one-sided enumeration only
    let code = dc("1111000000000000000");
    assert_eq!(min_distance_exact(&code).unwrap().value, min_distance_bruteforce(&code).unwrap().value);
}

#[test]
fn search_agrees_with_exact_at_13() {
    for seed in 0..50 {
        let code = DoubleCirculantCode::sample(13, seed).unwrap();
        let exact = min_distance_exact(&code).unwrap();
        let found = low_weight_search_best(&code, 400, seed).unwrap();
        assert!(!found.exact);
        assert_eq!(found.value, exact.value, "seed {seed}");
        assert!(low_weight_search(&code, exact.value - 1, 50, seed).is_none());
    }
}

#[test]
fn search_witnesses_are_codewords() {
    for trial in 0..1000 {
        let code = DoubleCirculantCode::sample(24, 10_000 + trial).unwrap();
        let w = 12;
        if let Some(r) = low_weight_search(&code, w, 3, trial) {
            assert!(r.value <= w && r.value >= 1);
            assert_eq!(r.witness.weight(), r.value);
            assert!(dc_contains(&code, &r.witness).unwrap());
        }
    }
}

#[test]
fn trivial_information_set_is_tried_first() {
    let code = dc("1011000000");
    let r = low_weight_search(&code, 4, 1, 99).unwrap();
    assert!(r.value <= 4);
}

#[test]
fn census_examples() {
    let lattice = cyclic_lattice(3).unwrap();
    let full = generator_weight_census(&CyclicCode::full(3), &lattice, 26).unwrap();
    assert_eq!(full[1], BigUint::from(3u32));
    let zero = generator_weight_census(&CyclicCode::zero(3), &lattice, 26).unwrap();
    assert_eq!(zero[0], BigUint::from(1u32));
    assert!(zero[1..].iter().all(|g| *g == BigUint::default()));
    assert!(generator_weight_census(&CyclicCode::full(3), &lattice[1..], 26).is_err());
}

#[test]
fn census_partitions_all_vectors() {
    for n in [9usize, 12, 15] {
        let lattice = cyclic_lattice(n).unwrap();
        let spectra: Vec<_> = lattice.iter().map(|c| weight_distribution(c, 26).unwrap()).collect();
        let census = census_all(&lattice, &spectra);
        for j in 0..=n {
            let total: BigUint = census.iter().map(|g| g[j].clone()).sum();
            assert_eq!(total, BigUint::from(binom(n as u64, j as u64)), "n={n} j={j}");
        }
        // direct count of u with C(u) = D
        if n == 9 {
            for (d, g) in lattice.iter().zip(&census) {
                let mut direct = vec![0u64; n + 1];
                for u in 0u64..1 << n {
                    let v = BitVec::from_u64(u, n).unwrap();
                    if crate::codes::cyclic_from_vector(&v).unwrap() == *d {
                        direct[v.weight()] += 1;
                    }
                }
                let g: Vec<u64> = g.iter().map(|x| x.try_into().unwrap()).collect();
                assert_eq!(g, direct);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn shifted_witness_has_same_weight(n in 2usize..14, seed in any::<u64>(), j in 0usize..14) {
        let code = DoubleCirculantCode::sample(n, seed).unwrap();
        let r = min_distance_exact(&code).unwrap();
        let moved = crate::codes::shift_action(j % n, &r.witness).unwrap();
        prop_assert!(code.contains(&moved).unwrap());
        prop_assert_eq!(moved.weight(), r.value);
    }
}

#[test]
fn capped_search_agrees() {
    for n in [5usize, 9, 13, 16] {
        for seed in 0..30 {
            let code = DoubleCirculantCode::sample(n, seed).unwrap();
            let d = min_distance_exact(&code).unwrap().value;
            for cap in 0..=2 * n {
                let r = min_distance_capped(&code, cap).unwrap();
                assert_eq!(r.as_ref().map(|r| r.value), (d <= cap).then_some(d), "n={n} seed={seed} cap={cap}");
                if let Some(r) = r {
                    assert!(dc_contains(&code, &r.witness).unwrap());
                }
            }
        }
    }
}
