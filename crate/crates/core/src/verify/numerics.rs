use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::report::{LemmaReport, Status};
use crate::bounds::{
    ball_table, beta_bound, binomial_row, c2_bound, enumeration_margin, f_func, final_chain, format_rational,
    series_bound, PaperConstants, Real,
};
use crate::codes::class_cn;
use crate::error::Result;
use crate::numbertheory::primes_from;
use crate::spectrum::{weight_distribution, DEFAULT_DIM_LIMIT};

/// Margin demanded of every floating comparison, well above the error of
/// the 192-bit evaluation.
pub const NUMERIC_TOLERANCE: f64 = 1e-12;

/// Number of primes from `q` on that the numeric audits cover.
pub const PRIME_COUNT: usize = 10;

fn tol() -> Real {
    Real::from_f64(NUMERIC_TOLERANCE)
}

fn dec(x: &Real) -> String {
    x.to_decimal(9)
}

/// `value + tolerance <= cap`.
fn below(value: &Real, cap: &Real) -> bool {
    value + &tol() <= *cap
}

/// The numeric ingredients of the weight-distribution lemma: `beta < cap`
/// for the first primes from `q`, `f(kappa, t) <= f_cap` with a resolved
/// maximum, `beta_cap + f_cap <= 2/5`, `t^3 <= p`, and the resulting
/// exponent.
pub fn verify_kappa_numerics(c: &PaperConstants) -> Result<LemmaReport> {
    let start = Instant::now();
    let mut r = LemmaReport::new("kappa")
        .param("q", c.q)
        .param("t", c.t)
        .param("kappa", &c.kappa)
        .status(Status::VerifiedNumeric);
    let primes = primes_from(c.q, PRIME_COUNT);
    let beta_cap = c.beta_cap.real();
    let mut worst = Real::zero();
    for &p in &primes {
        let b = beta_bound(p)?;
        r.checks += 1;
        if !below(&b, &beta_cap) {
            r.violate(format!("beta_bound({p}) = {} >= {}", dec(&b), c.beta_cap));
        }
        worst = worst.max(b);
        // t <= p^(1/3)
        r.checks += 1;
        if c.t.pow(3) > p {
            r.violate(format!("t = {} exceeds p^(1/3) at p = {p}", c.t));
        }
    }
    r.note(format!(
        "primes {}..{}: max beta_bound = {}",
        primes[0],
        primes[primes.len() - 1],
        dec(&worst)
    ));
    if c.t.pow(3) == c.q {
        r.note(format!("t^3 = q = {} exactly; strict for every prime above", c.q));
    }
    let f = f_func(&c.kappa.real(), c.t)?;
    r.checks += 2;
    if !below(&f.value, &c.f_cap.real()) || !f.value.is_positive() {
        r.violate(format!("f({}, {}) = {} not in (0, {}]", c.kappa, c.t, dec(&f.value), c.f_cap));
    }
    if !f.rigorous() {
        r.violate(format!("f maximization unresolved: grid/refined gap {:e}", f.gap));
    }
    r.note(format!(
        "f({}, {}) = {} at alpha = {}, grid gap {:.3e}",
        c.kappa,
        c.t,
        dec(&f.value),
        f.argmax.to_decimal(6),
        f.gap
    ));
    // f decreasing beyond kappa, sampled
    let mut prev = f.value.clone();
    for k in 1..=20u32 {
        let iota = c.kappa.real() + (Real::one().mul_pow2(-1) - c.kappa.real()) * Real::from_ratio(&k.into(), &20.into());
        let v = f_func(&iota, c.t)?.value;
        r.checks += 1;
        if v > prev {
            r.violate(format!("f not decreasing near iota = {}", iota.to_decimal(4)));
        }
        prev = v;
    }
    let sum = &c.beta_cap.0 + &c.f_cap.0;
    let two_fifths = BigRational::new(2.into(), 5.into());
    r.checks += 2;
    if sum > two_fifths {
        r.violate(format!("beta_cap + f_cap = {} > 2/5", format_rational(&sum)));
    }
    let exponent = BigRational::one() - &sum;
    if exponent < c.exponent.0 {
        r.violate(format!("1 - beta_cap - f_cap = {} < exponent {}", format_rational(&exponent), c.exponent));
    }
    let r = r.sides(
        format!("max beta = {}, f = {}", dec(&worst), dec(&f.value)),
        format!("beta_cap = {}, f_cap = {}", c.beta_cap, c.f_cap),
    );
    let mut r = r;
    r.note(format!("A_i <= 2^(-{} r) C(n,i), exponent {}", format_rational(&exponent), c.exponent));
    Ok(r.timed(start))
}

/// The weight bound `A_i(C) <= 2^(-exponent r) C(n, i)` for `kappa n <= i <= n/2`
/// and `C` in the class with redundancy `r > 1`, at a small length where it
/// is not claimed. Informative only.
pub fn kappa_conclusion_small(n: usize, c: &PaperConstants) -> Result<LemmaReport> {
    let start = Instant::now();
    let mut held = 0u64;
    let mut failed = Vec::new();
    let row = binomial_row(n as u64);
    let expo = c.exponent.real();
    for code in class_cn(n)? {
        let red = code.redundancy();
        if red <= 1 {
            continue;
        }
        let wd = weight_distribution(&code, DEFAULT_DIM_LIMIT)?;
        let scale = (-(&expo * &Real::from_int(red as i64))).exp2()?;
        for i in 0..=n / 2 {
            if BigRational::from_integer(BigInt::from(i)) < &c.kappa.0 * BigRational::from_integer(BigInt::from(n)) {
                continue;
            }
            let lhs = Real::from_bigint(&BigInt::from(wd.get(i)));
            let rhs = &scale * &Real::from_bigint(&BigInt::from(row[i].clone()));
            if lhs <= rhs {
                held += 1;
            } else {
                failed.push(format!("r={red},i={i}"));
            }
        }
    }
    let mut r = LemmaReport::new("kappa-conclusion")
        .param("n", n)
        .status(Status::InformativeOnly)
        .sides("A_i(C)", format!("2^(-{} r) C(n,i)", c.exponent));
    r.checks = held + failed.len() as u64;
    r.note(format!("{held} of {} (code, i) pairs satisfy the bound", r.checks));
    if !failed.is_empty() {
        r.note(format!("fails at {} (not claimed at this length)", failed.join(", ")));
    }
    Ok(r.timed(start))
}

/// Default grid of relative radii, `0.100, 0.101, ..., 0.124`.
pub fn default_omega_grid() -> Vec<BigRational> {
    (100..=124).map(|k| BigRational::new(k.into(), 1000.into())).collect()
}

/// The enumeration lemma at length `n`: for each `omega` with `w = floor(2 omega n)`,
/// `2 sum_{i + j <= w, i < kappa n} C(n,i) C(n,j) 2^ceil(eps n) <= |B_2n(w)|`,
/// in integers, plus the margin `2h(K) - h(kappa) - h(2K - kappa) - (5/2)log2(n0)/n0 >= eps`.
pub fn verify_enumeration(n: u64, omegas: &[BigRational], c: &PaperConstants) -> Result<LemmaReport> {
    let start = Instant::now();
    let row = binomial_row(n);
    let mut cumulative = Vec::with_capacity(row.len());
    let mut acc = BigUint::default();
    for x in &row {
        acc += x;
        cumulative.push(acc.clone());
    }
    let balls = ball_table(2 * n);
    let nn = BigRational::from_integer(BigInt::from(n));
    let eps_n = (&c.epsilon.0 * &nn).ceil().to_integer().to_u64().expect("small");
    // i < kappa n
    let kappa_n = &c.kappa.0 * &nn;
    let i_max = if kappa_n.is_integer() {
        kappa_n.to_integer().to_u64().expect("small") - 1
    } else {
        kappa_n.floor().to_integer().to_u64().expect("small")
    };
    let mut r = LemmaReport::new("enumeration")
        .param("n", n)
        .param("kappa", &c.kappa)
        .param("epsilon", &c.epsilon)
        .sides(
            format!("2 sum_(i+j<=w, i<={i_max}) C(n,i)C(n,j) * 2^{eps_n}"),
            "|B_2n(w)|",
        );
    let mut tightest: Option<(f64, String)> = None;
    for omega in omegas {
        let w = (omega * &nn * BigRational::from_integer(2.into())).floor().to_integer().to_u64().expect("small");
        let mut lhs = BigUint::default();
        for i in 0..=i_max.min(w) {
            lhs += &row[i as usize] * &cumulative[(w - i).min(n) as usize];
        }
        lhs = (lhs * 2u32) << eps_n;
        let ball = &balls[w.min(2 * n) as usize];
        r.checks += 1;
        if lhs > *ball {
            r.violate(format!("omega={} w={w}: lhs exceeds |B_2n(w)|", format_rational(omega)));
        } else {
            let log_gap = ball.bits() as f64 - lhs.bits() as f64;
            if tightest.as_ref().is_none_or(|t| log_gap < t.0) {
                tightest = Some((log_gap, format!("omega={} w={w}", format_rational(omega))));
            }
        }
    }
    if let Some((gap, at)) = tightest {
        r.note(format!("smallest slack about 2^{gap:.0} at {at}"));
    }
    r.note(format!("kappa n = {}, so i runs over 0..={i_max}; eps n rounded up to {eps_n}", format_rational(&kappa_n)));
    let margin = enumeration_margin(c.n0, &c.big_k.real(), &c.kappa.real())?;
    r.checks += 1;
    if !(c.epsilon.real() + tol() <= margin) {
        r.violate(format!("margin {} below epsilon {}", dec(&margin), c.epsilon));
    }
    r.note(format!("margin(n0={}, K={}, kappa={}) = {}", c.n0, c.big_k, c.kappa, dec(&margin)));
    Ok(r.timed(start))
}

/// `c2_bound <= c2` and `series_bound(p, m) <= 2/p` for the first primes
/// from `q` and `m = 2..=6`, the final chain `b c2 + 2 c2 / p < 1`, and the
/// size of the `gamma^(p-1)` term.
pub fn verify_c2_and_series(c: &PaperConstants) -> Result<LemmaReport> {
    let start = Instant::now();
    let mut r = LemmaReport::new("c2series")
        .param("q", c.q)
        .param("c2", &c.c2)
        .param("b", &c.b)
        .status(Status::VerifiedNumeric);
    let gamma = c.gamma();
    let c1 = c.c1();
    let cap = c.c2.real();
    let at_q = c2_bound(c.q, &gamma, &c1)?;
    r.checks += 1;
    if !below(&at_q, &cap) {
        r.violate(format!("c2_bound({}) = {} > {}", c.q, dec(&at_q), c.c2));
    }
    let mut worst_series = Real::zero();
    let mut worst_chain = BigRational::default();
    for p in primes_from(c.q, PRIME_COUNT) {
        let v = c2_bound(p, &gamma, &c1)?;
        r.checks += 1;
        if !below(&v, &cap) {
            r.violate(format!("c2_bound({p}) = {} > {}", dec(&v), c.c2));
        }
        let two_over_p = Real::from_ratio(&2.into(), &BigInt::from(p));
        for m in 2..=6 {
            let s = series_bound(p, m)?;
            r.checks += 1;
            if !below(&s, &two_over_p) {
                r.violate(format!("series_bound({p}, {m}) = {} > 2/p", dec(&s)));
            }
            worst_series = worst_series.max(s * Real::from_int(p as i64));
        }
        let chain = final_chain(&c.b.0, &c.c2.0, p);
        r.checks += 1;
        if chain >= BigRational::one() {
            r.violate(format!("b c2 + 2 c2 / {p} = {} >= 1", format_rational(&chain)));
        }
        worst_chain = worst_chain.max(chain);
        // gamma^(p-1) < 1e-100  <=>  (p-1) log2 gamma < -100 log2 10
        let log2_term = c.gamma_log2.real() * Real::from_int(p as i64 - 1);
        let limit = -(Real::from_int(100) * Real::from_int(10).log2()?);
        r.checks += 1;
        if log2_term >= limit {
            r.violate(format!("gamma^(p-1) not below 1e-100 at p = {p}"));
        }
    }
    r.note(format!("c2_bound({}) = {}", c.q, dec(&at_q)));
    r.note(format!("max p * series_bound = {} (must stay <= 2)", dec(&worst_series)));
    r.note(format!(
        "max b c2 + 2 c2/p = {} ~ {:.6}",
        format_rational(&worst_chain),
        worst_chain.to_f64().unwrap_or(f64::NAN)
    ));
    let r = r.sides(format!("c2_bound = {}", dec(&at_q)), format!("c2 = {}", c.c2));
    Ok(r.timed(start))
}
