//! Primality, multiplicative order, and the Kasami conditions on `p`.

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default number of candidates [`next_kasami_prime`] examines.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

/// Kasami conditions for a candidate `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KasamiReport {
    pub p: u64,
    pub is_prime: bool,
    /// Multiplicative order of 2 mod `p`; 0 when `p` is even.
    pub order_of_2: u64,
    pub primitive: bool,
    /// `2^(p-1) mod p^2 != 1`.
    pub wieferich_ok: bool,
    pub kasami: bool,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are a proven
/// witness set for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Least `k >= 1` with `a^k = 1 (mod n)`.
pub fn mult_order(a: u64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::invalid(format!("modulus {n} must be at least 2")));
    }
    if a.gcd(&n) != 1 {
        return Err(Error::invalid(format!("gcd({a}, {n}) != 1")));
    }
    // order divides phi(n); strip prime factors of phi(n) while the power stays 1
    let phi = euler_phi(n);
    let mut order = phi;
    for q in distinct_prime_factors(phi) {
        while order.is_multiple_of(q) && pow_mod(a, order / q, n) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

fn euler_phi(n: u64) -> u64 {
    distinct_prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

pub fn kasami_check(p: u64) -> Result<KasamiReport> {
    if p < 3 {
        return Err(Error::invalid(format!("p={p} must be at least 3")));
    }
    let is_prime = is_prime(p);
    let order_of_2 = if p % 2 == 1 { mult_order(2, p)? } else { 0 };
    let primitive = is_prime && order_of_2 == p - 1;
    let pb = BigUint::from(p);
    let wieferich_ok = BigUint::from(2u32).modpow(&(&pb - 1u32), &(&pb * &pb)) != BigUint::from(1u32);
    Ok(KasamiReport {
        p,
        is_prime,
        order_of_2,
        primitive,
        wieferich_ok,
        kasami: is_prime && primitive && wieferich_ok,
    })
}

pub fn next_kasami_prime(from: u64) -> Result<u64> {
    next_kasami_prime_with_budget(from, DEFAULT_SEARCH_BUDGET)
}

/// Smallest Kasami prime `>= from`, examining at most `budget` candidates.
pub fn next_kasami_prime_with_budget(from: u64, budget: u64) -> Result<u64> {
    if from < 3 {
        return Err(Error::invalid(format!("search start {from} must be at least 3")));
    }
    let mut p = from;
    for _ in 0..budget {
        if kasami_check(p)?.kasami {
            return Ok(p);
        }
        p = p
            .checked_add(1)
            .ok_or_else(|| Error::budget("search ran past 2^64"))?;
    }
    Err(Error::budget(format!(
        "no Kasami prime in [{from}, {from}+{budget})"
    )))
}

/// The first `count` primes `>= from`.
pub fn primes_from(from: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = from.max(2);
    while out.len() < count {
        if is_prime(p) {
            out.push(p);
        }
        p += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_order(a: u64, n: u64) -> u64 {
        let mut x = a % n;
        let mut k = 1;
        while x != 1 {
            x = x * a % n;
            k += 1;
        }
        k
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order(2, 13).unwrap(), 12);
        assert_eq!(mult_order(2, 7).unwrap(), 3);
        assert_eq!(mult_order(1, 10).unwrap(), 1);
        assert!(mult_order(2, 8).is_err());
        for n in (3..500).step_by(2) {
            assert_eq!(mult_order(2, n).unwrap(), naive_order(2, n), "n={n}");
        }
    }

    #[test]
    fn primality_against_sieve() {
        let limit = 20_000usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                for j in (i * i..limit).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (n, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime(n as u64), p, "n={n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn kasami_examples() {
        let r3 = kasami_check(3).unwrap();
        assert_eq!((r3.order_of_2, r3.kasami), (2, true));
        let r7 = kasami_check(7).unwrap();
        assert_eq!((r7.order_of_2, r7.primitive, r7.kasami), (3, false, false));
        let w = kasami_check(1093).unwrap();
        assert!(w.is_prime && !w.wieferich_ok && !w.kasami);
        assert!(kasami_check(2).is_err());
    }

    #[test]
    fn next_kasami_examples() {
        assert_eq!(next_kasami_prime(3).unwrap(), 3);
        assert_eq!(next_kasami_prime(4).unwrap(), 5);
        assert_eq!(next_kasami_prime(2744).unwrap(), 2789);
        assert!(next_kasami_prime_with_budget(2744, 10).unwrap_err().is_budget());
    }

    #[test]
    fn kasami_primes_reverified_by_naive_oracle() {
        let mut p = 3;
        while p <= 10_000 {
            let found = next_kasami_prime(p).unwrap();
            if found > 10_000 {
                break;
            }
            assert_eq!(naive_order(2, found), found - 1);
            // square-and-multiply mod p^2 with plain u64 (p^2 < 2^32 here)
            let m = found * found;
            let (mut acc, mut base, mut e) = (1u64, 2u64, found - 1);
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % m;
                }
                base = base * base % m;
                e >>= 1;
            }
            assert_ne!(acc, 1, "p={found}");
            p = found + 1;
        }
    }

    #[test]
    fn search_is_monotone() {
        let mut prev = 0;
        for from in 3..400 {
            let r = next_kasami_prime(from).unwrap();
            assert!(r >= prev && r >= from);
            prev = r;
        }
    }
}
