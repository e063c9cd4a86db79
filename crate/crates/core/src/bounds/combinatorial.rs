use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numbertheory;

/// `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Row `C(n, 0..=n)`.
pub fn binomial_row(n: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * (n - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

/// `V(n, d) = sum_{i <= d} C(n, i)`.
pub fn volume(n: u64, d: u64) -> Result<BigUint> {
    if d > n {
        return Err(Error::invalid(format!("radius {d} exceeds length {n}")));
    }
    Ok(binomial_row(n).into_iter().take(d as usize + 1).sum())
}

/// Nonzero vectors of length `two_n` and weight at most `w`, radius clamped
/// to the length.
pub fn ball_nonzero_floor(two_n: u64, w: u64) -> BigUint {
    volume(two_n, w.min(two_n)).expect("clamped") - 1u32
}

/// `|B_{2n}(w)|` for a real radius: `V(2n, floor w) - 1`.
pub fn ball_nonzero(two_n: u64, w: f64) -> Result<BigUint> {
    if !(w >= 0.0) {
        return Err(Error::invalid(format!("radius must be non-negative, got {w}")));
    }
    let w = if w >= two_n as f64 { two_n } else { w.floor() as u64 };
    Ok(ball_nonzero_floor(two_n, w))
}

/// Cumulative ball sizes `|B_len(0)|, ..., |B_len(len)|`.
pub fn ball_table(len: u64) -> Vec<BigUint> {
    let mut acc = BigUint::zero();
    let mut out = Vec::with_capacity(len as usize + 1);
    for (i, c) in binomial_row(len).into_iter().enumerate() {
        if i > 0 {
            acc += c;
        }
        out.push(acc.clone());
    }
    out
}

/// Which inequality between ball size and `2^n` defines the guaranteed distance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GvConvention {
    /// Least `d` with `|B_2n(d)| >= 2^n`: some `[2n, n]` code has distance
    /// at least this value.
    #[default]
    Ball,
    /// Least `d` with `|B_2n(d - 1)| >= 2^n`, one larger than [`GvConvention::Ball`].
    BallMinusOne,
}

pub fn gv_guarantee(n: u64) -> u64 {
    gv_guarantee_with(n, GvConvention::Ball)
}

pub fn gv_guarantee_with(n: u64, convention: GvConvention) -> u64 {
    let target = BigUint::one() << n;
    let balls = ball_table(2 * n);
    let d = (0..=2 * n)
        .find(|&d| balls[d as usize] >= target)
        .expect("the full ball has 2^(2n) - 1 >= 2^n elements");
    match convention {
        GvConvention::Ball => d,
        GvConvention::BallMinusOne => d + 1,
    }
}

fn primitive_two(p: u64) -> Result<()> {
    if !numbertheory::is_prime(p) || p < 3 || numbertheory::mult_order(2, p)? != p - 1 {
        return Err(Error::invalid(format!("2 is not primitive modulo the prime {p}")));
    }
    Ok(())
}

/// Largest `w` with `2 |B_2p(w)| < p 2^p`; some `[2p, p]` double circulant
/// code then has distance above `w`.
pub fn simple_threshold(p: u64) -> Result<u64> {
    primitive_two(p)?;
    let rhs = BigUint::from(p) << p;
    let balls = ball_table(2 * p);
    Ok((0..=2 * p)
        .take_while(|&w| balls[w as usize].clone() * 2u32 < rhs)
        .last()
        .expect("w = 0 always qualifies"))
}

/// Largest `w` with `|B_2n(w)| <= b n 2^n`, for exact `0 < b < 1`.
pub fn main_threshold_exact(n: u64, b: &BigRational) -> Result<u64> {
    if n == 0 || *b <= BigRational::zero() || *b >= BigRational::one() {
        return Err(Error::invalid("need n >= 1 and 0 < b < 1"));
    }
    // |B| * den <= num * n * 2^n
    let num = b.numer().to_biguint().expect("positive");
    let den = b.denom().to_biguint().expect("positive");
    let rhs = (num * n) << n;
    let balls = ball_table(2 * n);
    Ok((0..=2 * n)
        .take_while(|&w| &balls[w as usize] * &den <= rhs)
        .last()
        .expect("w = 0 always qualifies"))
}

/// [`main_threshold_exact`] with `b` taken as the exact value of the `f64`.
pub fn main_threshold(n: u64, b: f64) -> Result<u64> {
    let b = BigRational::from_float(b).ok_or_else(|| Error::invalid("b must be finite"))?;
    main_threshold_exact(n, &b)
}

/// `2 |B_2n(w)| / (n 2^n)`.
pub fn simple_prob_bound(n: u64, w: u64) -> BigRational {
    let num = BigInt::from(ball_nonzero_floor(2 * n, w)) * 2;
    BigRational::new(num, BigInt::from(n) << n)
}

/// Exact form of `2^(n h(w/n)) / sqrt(8 n (w/n)(1 - w/n)) <= C(n, w)`,
/// squared and cleared of denominators:
/// `n^(2n) n <= C^2 8 w (n-w) w^(2w) (n-w)^(2(n-w))`.
pub fn stirling_holds_exact(n: u64, w: u64) -> Result<bool> {
    if w == 0 || w >= n {
        return Err(Error::invalid("need 0 < w < n"));
    }
    let big = |x: u64| BigUint::from(x);
    let c = binomial(n, w);
    let lhs = big(n).pow(2 * n as u32) * n;
    let rhs = &c * &c * 8u32 * w * (n - w) * big(w).pow(2 * w as u32) * big(n - w).pow(2 * (n - w) as u32);
    Ok(lhs <= rhs)
}

/// Exact test of `count <= sqrt(2rt) ((1 + |1-2w/T|^t)/2)^r C(T, w)`, `T = tr`.
pub fn repetition_bound_holds_exact(r: u64, t: u64, w: u64, count: &BigUint) -> Result<bool> {
    Ok(repetition_bound_cmp(r, t, w, count)? != Ordering::Greater)
}

/// Compares `count` with the repetition bound by comparing
/// `count^2 4^r T^(2T)` with `2rt (T^t + |T-2w|^t)^(2r) C(T,w)^2`.
pub fn repetition_bound_cmp(r: u64, t: u64, w: u64, count: &BigUint) -> Result<Ordering> {
    let tt = t * r;
    if w > tt || r == 0 || t == 0 {
        return Err(Error::invalid("need r, t >= 1 and w <= tr"));
    }
    let big = |x: u64| BigUint::from(x);
    let lhs = count * count * (big(1) << (2 * r)) * big(tt).pow(2 * tt as u32);
    let inner = big(tt).pow(t as u32) + big(tt.abs_diff(2 * w)).pow(t as u32);
    let c = binomial(tt, w);
    let rhs = big(2 * r * t) * inner.pow(2 * r as u32) * &c * &c;
    Ok(lhs.cmp(&rhs))
}
