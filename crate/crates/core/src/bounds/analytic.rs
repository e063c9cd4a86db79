use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use super::combinatorial::{ball_nonzero_floor, binomial};
use super::constants::PaperConstants;
use super::real::Real;
use crate::error::{Error, Result};

fn unit_interval(x: &Real, name: &str) -> Result<()> {
    if x.is_negative() || *x > Real::one() {
        return Err(Error::invalid(format!("{name} must lie in [0, 1], got {}", x.to_f64())));
    }
    Ok(())
}

/// `x log2 x` with `0 log 0 = 0`.
fn xlog2x(x: &Real) -> Result<Real> {
    if x.is_zero() {
        Ok(Real::zero())
    } else {
        Ok(x * &x.log2()?)
    }
}

/// Binary entropy `h(x) = -x log2 x - (1-x) log2(1-x)`.
pub fn entropy(x: &Real) -> Result<Real> {
    unit_interval(x, "x")?;
    Ok(-(xlog2x(x)? + xlog2x(&(Real::one() - x))?))
}

/// `D(x || y) = x log2(x/y) + (1-x) log2((1-x)/(1-y))`, `0 < y < 1`.
pub fn kl(x: &Real, y: &Real) -> Result<Real> {
    unit_interval(x, "x")?;
    if !y.is_positive() || *y >= Real::one() {
        return Err(Error::invalid(format!("y must lie in (0, 1), got {}", y.to_f64())));
    }
    let one = Real::one();
    let xb = &one - x;
    let yb = &one - y;
    let term = |a: &Real, b: &Real| -> Result<Real> {
        if a.is_zero() {
            Ok(Real::zero())
        } else {
            Ok(a * &(a / b).log2()?)
        }
    };
    Ok(term(x, y)? + term(&xb, &yb)?)
}

/// `2^(n h(w/n)) / sqrt(8 n (w/n)(1 - w/n))`, a lower bound on `C(n, w)`.
pub fn stirling_lower(n: u64, w: u64) -> Result<Real> {
    if w == 0 || w >= n {
        return Err(Error::invalid("need 0 < w < n"));
    }
    let nn = Real::from_int(n as i64);
    let om = Real::from_ratio(&BigInt::from(w), &BigInt::from(n));
    let num = (&nn * &entropy(&om)?).exp2()?;
    let den = (Real::from_int(8) * &nn * &om * (Real::one() - &om)).sqrt()?;
    Ok(num / den)
}

/// `sqrt(2rt) ((1 + |1-2w/(tr)|^t)/2)^r C(tr, w)`.
pub fn repetition_bound(r: u64, t: u64, w: u64) -> Result<Real> {
    let tt = t * r;
    if r == 0 || t == 0 || w > tt {
        return Err(Error::invalid("need r, t >= 1 and w <= tr"));
    }
    let dev = Real::from_ratio(&BigInt::from(tt.abs_diff(2 * w)), &BigInt::from(tt));
    let inner = (Real::one() + dev.powi(t)).mul_pow2(-1);
    let c = Real::from_bigint(&BigInt::from(binomial(tt, w)));
    Ok(Real::from_int(2 * (r * t) as i64).sqrt()? * inner.powi(r) * c)
}

fn check_alpha_iota(alpha: &Real, iota: &Real, t: u64) -> Result<()> {
    let half = Real::one().mul_pow2(-1);
    if alpha.is_negative() || alpha > iota || !iota.is_positive() || *iota > half || t == 0 {
        return Err(Error::invalid("need 0 <= alpha <= iota <= 1/2, iota > 0, t >= 1"));
    }
    Ok(())
}

/// `g(alpha, iota) = log2(1 + |1-2 alpha|^t) - t D(alpha || iota)`.
pub fn g_func(alpha: &Real, iota: &Real, t: u64) -> Result<Real> {
    check_alpha_iota(alpha, iota, t)?;
    g_unchecked(alpha, iota, t)
}

fn g_unchecked(alpha: &Real, iota: &Real, t: u64) -> Result<Real> {
    let dev = (Real::one() - alpha.mul_pow2(1)).abs().powi(t);
    if *iota == Real::one().mul_pow2(-1) && *alpha == *iota {
        return (Real::one() + dev).log2();
    }
    let d = if alpha == iota { Real::zero() } else { kl(alpha, iota)? };
    Ok((Real::one() + dev).log2()? - Real::from_int(t as i64) * d)
}

fn g_f64(alpha: f64, iota: f64, t: u64) -> f64 {
    let xl = |a: f64, b: f64| if a == 0.0 { 0.0 } else { a * (a / b).log2() };
    let d = xl(alpha, iota) + xl(1.0 - alpha, 1.0 - iota);
    (1.0 + (1.0 - 2.0 * alpha).abs().powi(t as i32)).log2() - t as f64 * d
}

pub const F_GRID_POINTS: usize = 10_000;

/// Maximum of `g(., iota)` over `[0, iota]`.
#[derive(Clone, Debug)]
pub struct FMax {
    pub value: Real,
    pub argmax: Real,
    /// Best value on the uniform grid, evaluated in full precision.
    pub grid_value: Real,
    /// `value - grid_value`; small when the grid already resolves the peak.
    pub gap: f64,
}

impl FMax {
    /// The refinement moved the maximum by less than `1e-7`.
    pub fn rigorous(&self) -> bool {
        self.gap < 1e-7
    }
}

/// `f(iota) = max_{0 <= alpha <= iota} g(alpha, iota)`: a dense grid of
/// [`F_GRID_POINTS`] intervals, then ternary search around the best grid
/// point down to a bracket of `1e-12`.
pub fn f_func(iota: &Real, t: u64) -> Result<FMax> {
    check_alpha_iota(&Real::zero(), iota, t)?;
    let io = iota.to_f64();
    let step = io / F_GRID_POINTS as f64;
    let best = (0..=F_GRID_POINTS)
        .map(|k| (k, g_f64((k as f64 * step).min(io), io, t)))
        .fold((0, f64::NEG_INFINITY), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
    let k = best.0;
    let at = |k: usize| -> Real {
        if k >= F_GRID_POINTS {
            iota.clone()
        } else {
            Real::from_ratio(&BigInt::from(k), &BigInt::from(F_GRID_POINTS)) * iota
        }
    };
    let grid_arg = at(k);
    let grid_value = g_unchecked(&grid_arg, iota, t)?;
    let mut lo = at(k.saturating_sub(1));
    let mut hi = at((k + 1).min(F_GRID_POINTS));
    let eps = Real::from_f64(1e-12);
    let third = Real::from_ratio(&1.into(), &3.into());
    while &hi - &lo > eps {
        let d = (&hi - &lo) * &third;
        let m1 = &lo + &d;
        let m2 = &hi - &d;
        if g_unchecked(&m1, iota, t)? < g_unchecked(&m2, iota, t)? {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let mid = (&lo + &hi).mul_pow2(-1);
    let refined = g_unchecked(&mid, iota, t)?;
    let (value, argmax) = if refined > grid_value { (refined, mid) } else { (grid_value.clone(), grid_arg) };
    let gap = (&value - &grid_value).to_f64();
    Ok(FMax { value, argmax, grid_value, gap })
}

fn r(v: u64) -> Real {
    Real::from_int(v as i64)
}

/// `(1/r) log2 sqrt(2tr) + (1/r) log2(tr + 1) + 2 t^2 r / n`.
pub fn beta_exact(t: u64, rr: u64, n: u64) -> Result<Real> {
    if t == 0 || rr == 0 || n == 0 {
        return Err(Error::invalid("t, r, n must be positive"));
    }
    let tr = r(t * rr);
    let first = (r(2) * &tr).log2()?.mul_pow2(-1);
    let second = (&tr + &Real::one()).log2()?;
    let third = Real::from_ratio(&BigInt::from(2 * t * t * rr), &BigInt::from(n));
    Ok((first + second) / r(rr) + third)
}

/// `3/(2(p-1)) + 2 log2(p)/(p-1) + 2/p^(1/3)`.
pub fn beta_bound(p: u64) -> Result<Real> {
    if p < 3 {
        return Err(Error::invalid("need p >= 3"));
    }
    let pm1 = r(p - 1);
    let cube_root = (r(p).ln()? / r(3)).exp()?;
    Ok(r(3) / (r(2) * &pm1) + r(2) * r(p).log2()? / &pm1 + r(2) / cube_root)
}

/// `c1 (1 + gamma + 2 gamma^(p-1) + (2/(p-1))^2 gamma/(1-gamma)^2)`.
pub fn c2_bound(p: u64, gamma: &Real, c1: &Real) -> Result<Real> {
    if !gamma.is_positive() || *gamma >= Real::one() {
        return Err(Error::invalid("need 0 < gamma < 1"));
    }
    if p < 3 {
        return Err(Error::invalid("need p >= 3"));
    }
    let one = Real::one();
    let tail = (r(2) / r(p - 1)).powi(2) * gamma / (&one - gamma).powi(2);
    Ok(c1 * &(&one + gamma + r(2) * gamma.powi(p - 1) + tail))
}

/// `sum_{s=1}^{m-1} (p^s / n) n^(1/p^s)` with `n = p^m`.
pub fn series_bound(p: u64, m: u32) -> Result<Real> {
    if p < 3 {
        return Err(Error::invalid("need p >= 3"));
    }
    let ln_n = r(p).ln()? * r(m as u64);
    let mut acc = Real::zero();
    for s in 1..m {
        let ps = BigInt::from(p).pow(s);
        let ratio = Real::from_ratio(&1.into(), &BigInt::from(p).pow(m - s));
        let root = (&ln_n / &Real::from_bigint(&ps)).exp()?;
        acc = acc + ratio * root;
    }
    Ok(acc)
}

/// `2 h(K) - h(kappa) - h(2K - kappa) - (5/2) log2(n0) / n0`.
pub fn enumeration_margin(n0: u64, big_k: &Real, kappa: &Real) -> Result<Real> {
    let quarter = Real::one().mul_pow2(-2);
    if n0 < 2 || !kappa.is_positive() || kappa >= big_k || *big_k >= quarter {
        return Err(Error::invalid("need n0 >= 2 and 0 < kappa < K < 1/4"));
    }
    let penalty = Real::from_ratio(&5.into(), &2.into()) * r(n0).log2()? / r(n0);
    let k2 = big_k.mul_pow2(1) - kappa;
    Ok(entropy(big_k)?.mul_pow2(1) - entropy(kappa)? - entropy(&k2)? - penalty)
}

/// `c1 |B_2n(w)| gamma^codim / 2^n`.
pub fn prop_k_rhs(n: u64, w: u64, codim: u64, consts: &PaperConstants) -> Result<Real> {
    if codim > n {
        return Err(Error::invalid("codim must not exceed n"));
    }
    let ball = Real::from_bigint(&BigInt::from(ball_nonzero_floor(2 * n, w)));
    Ok((consts.c1() * ball * consts.gamma().powi(codim)).mul_pow2(-(n as i64)))
}

/// `b c2 + 2 c2 / p`, exactly.
pub fn final_chain(b: &BigRational, c2: &BigRational, p: u64) -> BigRational {
    b * c2 + c2 * BigRational::new(BigInt::from(2), BigInt::from(p))
}

/// `|B|` as a `Real`, for large balls.
pub fn real_of(v: &BigUint) -> Real {
    Real::from_bigint(&BigInt::from(v.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(v: f64) -> Real {
        Real::from_f64(v)
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&x(0.5)).unwrap(), Real::one());
        assert!(entropy(&x(0.0)).unwrap().is_zero());
        assert!(entropy(&x(1.0)).unwrap().is_zero());
        let h = entropy(&Real::from_ratio(&1.into(), &10.into())).unwrap();
        // series oracle: h(x) = log2(e) * sum over the Taylor expansion of -x ln x - (1-x) ln(1-x)
        let xs = 0.1f64;
        let ln1mx: f64 = -(1..200).map(|k| xs.powi(k) / k as f64).sum::<f64>();
        let oracle = -(xs * xs.ln() + (1.0 - xs) * ln1mx) / std::f64::consts::LN_2;
        assert!((h.to_f64() - oracle).abs() < 1e-14);
        assert!((h.to_f64() - 0.468996).abs() < 1e-6);
        assert!(entropy(&x(1.5)).is_err());
    }

    #[test]
    fn kl_properties() {
        for v in [0.01, 0.2, 0.5, 0.77] {
            assert!(kl(&x(v), &x(v)).unwrap().is_zero() || kl(&x(v), &x(v)).unwrap().abs().to_f64() < 1e-50);
            for y in [0.05, 0.3, 0.9] {
                assert!(!kl(&x(v), &x(y)).unwrap().is_negative());
            }
        }
        assert!(kl(&x(0.1), &x(0.0)).is_err());
        assert!(kl(&x(0.1), &x(1.0)).is_err());
        assert!((kl(&x(0.0), &x(0.5)).unwrap().to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stirling_examples() {
        let c = 10_400_600f64;
        let ratio = stirling_lower(26, 13).unwrap().to_f64() / c;
        assert!(ratio > 0.5 && ratio < 1.0, "{ratio}");
        let c = real_of(&binomial(2744, 274));
        let ratio = stirling_lower(2744, 274).unwrap() / c;
        assert!(ratio.to_f64() > 0.1 && ratio.to_f64() <= 1.0);
        assert!(stirling_lower(4, 0).is_err());
    }

    #[test]
    fn repetition_examples() {
        assert_eq!(repetition_bound(1, 2, 1).unwrap().to_decimal(30), "2.".to_string() + &"0".repeat(30));
        assert!(repetition_bound(3, 3, 0).unwrap() >= Real::one());
        assert!(repetition_bound(1, 2, 3).is_err());
    }

    #[test]
    fn g_and_f() {
        let iota = x(0.07);
        let g = g_func(&iota, &iota, 14).unwrap();
        assert!((g.to_f64() - (1.0 + 0.86f64.powi(14)).log2()).abs() < 1e-14);
        assert!(g_func(&x(0.1), &iota, 14).is_err());
        let f = f_func(&iota, 14).unwrap();
        assert!(f.value.to_f64() > 0.0 && f.value <= Real::from_ratio(&24.into(), &100.into()));
        assert!(f.rigorous());
        assert!((f.value.to_f64() - 0.23140).abs() < 1e-5);
        for t in 2..=6 {
            let f = f_func(&x(0.5), t).unwrap();
            assert!(f.value.abs().to_f64() < 1e-40, "t={t}");
        }
        // t = 1: the peak sits strictly inside the interval
        assert!(f_func(&x(0.5), 1).unwrap().value.to_f64() > 0.3);
    }

    #[test]
    fn f_decreasing() {
        for t in [2u64, 5, 9, 14, 20] {
            let mut prev: Option<Real> = None;
            for k in 1..=100u64 {
                let iota = Real::from_ratio(&BigInt::from(k), &BigInt::from(200));
                let v = f_func(&iota, t).unwrap().value;
                if let Some(p) = prev {
                    assert!(v <= p, "t={t} k={k}");
                }
                prev = Some(v);
            }
        }
    }

    #[test]
    fn kappa_numbers() {
        let cap = Real::from_ratio(&152.into(), &1000.into());
        assert!(beta_bound(2744).unwrap() < cap);
        assert!((beta_bound(2744).unwrap().to_f64() - 0.151732).abs() < 1e-6);
        let b = beta_exact(14, 2788, 2789 * 2789).unwrap();
        assert!(b <= beta_bound(2789).unwrap());
        assert!((b.to_f64() - 0.14889).abs() < 1e-5);
        let mut prev = beta_bound(2749).unwrap();
        for p in crate::numbertheory::primes_from(2750, 40) {
            let v = beta_bound(p).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn c2_and_series() {
        let c = PaperConstants::default();
        let v = c2_bound(2744, &c.gamma(), &c.c1()).unwrap();
        assert!(v <= Real::from_ratio(&43.into(), &10.into()));
        assert!((v.to_f64() - 4.29746).abs() < 1e-5);
        assert!(c2_bound(2749, &c.gamma(), &c.c1()).unwrap() < v);
        let tiny = c2_bound(2744, &Real::from_f64(1e-30), &c.c1()).unwrap();
        assert!((tiny - c.c1()).abs().to_f64() < 1e-29);
        assert!(c2_bound(2744, &Real::one(), &c.c1()).is_err());

        let s = series_bound(2789, 2).unwrap() * r(2789);
        assert!((s.to_f64() - 1.0057053).abs() < 1e-7);
        assert!(series_bound(2789, 5).unwrap() * r(2789) <= r(2));
        assert!(series_bound(2789, 1).unwrap().is_zero());
    }

    #[test]
    fn margin() {
        let k = Real::from_ratio(&1.into(), &10.into());
        let kappa = Real::from_ratio(&7.into(), &100.into());
        let m = enumeration_margin(2744, &k, &kappa).unwrap();
        assert!(m >= Real::from_ratio(&4.into(), &1000.into()));
        assert!((m.to_f64() - 0.004223).abs() < 1e-6);
        assert!(enumeration_margin(10_000, &k, &kappa).unwrap() > m);
        let near = enumeration_margin(2744, &k, &Real::from_f64(0.0999999999)).unwrap();
        assert!(near.is_negative());
        assert!(enumeration_margin(2744, &kappa, &k).is_err());
    }

    #[test]
    fn prop_k_two_orders() {
        let c = PaperConstants::default();
        let a = prop_k_rhs(9, 4, 3, &c).unwrap();
        // c1 gamma^3 = 2^(6/5 - 3/5)
        let ball = real_of(&ball_nonzero_floor(18, 4));
        let exponent = c.c1_log2.real() + c.gamma_log2.real() * r(3) - r(9);
        let b = ball * exponent.exp2().unwrap();
        assert!(((&a - &b) / &b).abs().to_f64() < 1e-12);
        assert!(prop_k_rhs(9, 4, 4, &c).unwrap() < a);
        assert!(prop_k_rhs(9, 4, 10, &c).is_err());
    }

    #[test]
    fn chain() {
        let c = PaperConstants::default();
        let v = final_chain(&c.b.0, &c.c2.0, 2789);
        assert!(v < BigRational::from_integer(1.into()));
    }
}
