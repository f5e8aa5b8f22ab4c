//! Norm engines on step functions.
//!
//! * Lorentz: integral of the decreasing rearrangement against `d phi`,
//!   an exact finite Stieltjes sum for step functions.
//! * Marcinkiewicz: `sup_t (1/theta(t)) int_0^t x*`, maximized segment by
//!   segment. The running integral is piecewise linear, so on each segment
//!   the objective has an explicit derivative; critical points come from a
//!   closed form when theta is a pure power and from a sign-scan plus
//!   bisection otherwise.
//! * Quasinorm: `max x*(t) psi(t)`, exact at block right-endpoints.
//! * Orlicz (Luxemburg): bisection on the scale of a convex modular.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::ExactScalar;
use crate::gfun::{GFun, PositiveFun};
use crate::stepfn::{StepFunction, Time};
use crate::trend::{vanishing_limit, TrendConfig, Verdict};

/// `int_0^1 x*(s) d phi(s)` as the exact sum of block values times
/// phi-increments; phi(0) counts as 0.
pub fn lorentz_norm(x: &StepFunction, phi: &GFun) -> f64 {
    let xs = x.rearrange();
    let mut sum = ExactScalar::ZERO;
    let mut phi_prev = ExactScalar::ZERO;
    for (_, hi, v) in xs.blocks() {
        let phi_hi = phi.eval_time(hi);
        if !v.is_zero() {
            sum = sum + v * (phi_hi - phi_prev);
        }
        phi_prev = phi_hi;
    }
    sum.to_f64()
}

/// Supremum value together with where and how hard we looked for it.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SupPoint {
    pub value: f64,
    /// log2 of the maximizing argument.
    pub at_log2: f64,
    /// Probes per segment used for critical-point isolation.
    pub refinement: u32,
}

/// `sup_{0<t<=1} A(t)/theta(t)` with `A(t) = int_0^t x*`.
pub fn marcinkiewicz_norm(x: &StepFunction, theta: &PositiveFun) -> f64 {
    marcinkiewicz_sup(x, theta, 64).value
}

pub fn marcinkiewicz_sup(x: &StepFunction, theta: &PositiveFun, refine: u32) -> SupPoint {
    marcinkiewicz_sup_sorted(&x.rearrange(), theta, refine)
}

/// Same supremum assuming `xs` is already the decreasing rearrangement.
pub(crate) fn marcinkiewicz_sup_sorted(
    xs: &StepFunction,
    theta: &PositiveFun,
    refine: u32,
) -> SupPoint {
    let power = theta.power_form();
    let mut best = f64::MIN;
    let mut best_l = 0.0f64;
    let mut consider = |value: f64, l: f64| {
        if value > best {
            best = value;
            best_l = l;
        }
    };
    let mut a0 = ExactScalar::ZERO; // A at the segment's left endpoint
    let mut t_prev = Time::zero();
    for (_, hi, v) in xs.blocks() {
        let t0x = t_prev.to_exact();
        let t1x = hi.to_exact();
        let seg_a = move |t: ExactScalar| a0 + v * (t - t0x);
        let a1 = seg_a(t1x);

        // right endpoint, exact
        consider((a1 / theta.eval_time(hi)).to_f64(), hi.log2());

        match power {
            Some((c, alpha)) => {
                // objective (v t + beta) t^-alpha / c peaks at
                // t = alpha beta / (v (1 - alpha))
                if v.is_positive() && alpha > 0.0 && alpha < 1.0 {
                    let beta = a0 - v * t0x;
                    if beta.is_positive() {
                        let tc = ExactScalar::from_f64(alpha / (1.0 - alpha)) * beta / v;
                        if tc > t0x && tc < t1x {
                            let l = tc.log2();
                            let th = ExactScalar::from_f64(c) * ExactScalar::exp2(alpha * l);
                            consider((seg_a(tc) / th).to_f64(), l);
                        }
                    }
                }
            }
            None => {
                // scan the sign of d/dt [A/theta] ~ v theta - A theta' and
                // bisect each sign change; narrow segments need few probes
                let l1 = t1x.log2();
                let l0 = if t_prev.is_zero() { l1 - 60.0 } else { t0x.log2() };
                if l1 > l0 {
                    let probes = (((l1 - l0) * 16.0).ceil() as u32).clamp(4, refine);
                    let sign_at = |l: f64| -> i8 {
                        let t = ExactScalar::exp2(l);
                        let n = v * theta.eval_log2(l) - seg_a(t) * theta.deriv_log2(l);
                        if n.is_positive() {
                            1
                        } else if n.is_zero() {
                            0
                        } else {
                            -1
                        }
                    };
                    let value_at = |l: f64| -> f64 {
                        (seg_a(ExactScalar::exp2(l)) / theta.eval_log2(l)).to_f64()
                    };
                    let mut prev_l = l0;
                    let mut prev_s = sign_at(l0);
                    for i in 1..=probes {
                        let l = l0 + (l1 - l0) * i as f64 / probes as f64;
                        consider(value_at(l), l);
                        let s = sign_at(l);
                        if s != prev_s && prev_s == 1 {
                            // descending crossing: local max inside
                            let (mut la, mut lb) = (prev_l, l);
                            for _ in 0..50 {
                                let lm = 0.5 * (la + lb);
                                if sign_at(lm) == 1 {
                                    la = lm;
                                } else {
                                    lb = lm;
                                }
                            }
                            let lm = 0.5 * (la + lb);
                            consider(value_at(lm), lm);
                        }
                        prev_l = l;
                        prev_s = s;
                    }
                }
            }
        }
        a0 = a1;
        t_prev = hi.clone();
    }
    SupPoint { value: best.max(0.0), at_log2: best_l, refinement: refine }
}

/// `max_t x*(t) psi(t)`, attained at block right-endpoints since psi
/// increases.
pub fn quasi_norm(x: &StepFunction, psi: &GFun) -> f64 {
    quasi_norm_sorted(&x.rearrange(), psi)
}

pub(crate) fn quasi_norm_sorted(xs: &StepFunction, psi: &GFun) -> f64 {
    let mut best = ExactScalar::ZERO;
    for (_, hi, v) in xs.blocks() {
        if !v.is_zero() {
            best = best.max(v * psi.eval_time(hi));
        }
    }
    best.to_f64()
}

/// Increasing convex function with N(0) = 0, the modular of an Orlicz norm.
#[derive(Clone, Debug)]
pub enum OrliczFunction {
    /// t^p with p >= 1.
    Power { p: f64 },
    /// Piecewise-linear through convex samples starting at (0,0), extended
    /// linearly with the last slope.
    TableConvex { pts: Vec<(f64, f64)> },
}

impl OrliczFunction {
    pub fn power(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::NonConvex(format!("t^{p} is not convex from 0")));
        }
        Ok(OrliczFunction::Power { p })
    }

    pub fn table_convex(pts: Vec<(f64, f64)>) -> Result<Self> {
        if pts.len() < 2 || pts[0] != (0.0, 0.0) {
            return Err(Error::NonConvex("table must start at (0,0)".into()));
        }
        let mut prev = (f64::MIN, f64::MIN);
        for &(t, y) in &pts {
            if !(t.is_finite() && y.is_finite()) || t <= prev.0 || (y <= prev.1 && t > 0.0) {
                return Err(Error::NonConvex("samples must increase strictly".into()));
            }
            prev = (t, y);
        }
        let slopes: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
        if !slopes.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)) {
            return Err(Error::NonConvex("second differences go negative".into()));
        }
        Ok(OrliczFunction::TableConvex { pts })
    }

    pub fn eval(&self, y: f64) -> f64 {
        debug_assert!(y >= 0.0);
        match self {
            OrliczFunction::Power { p } => y.powf(*p),
            OrliczFunction::TableConvex { pts } => {
                let (tl, yl) = *pts.last().unwrap();
                if y >= tl {
                    let n = pts.len();
                    let slope = (yl - pts[n - 2].1) / (tl - pts[n - 2].0);
                    return yl + slope * (y - tl);
                }
                let i = pts.partition_point(|p| p.0 < y).max(1);
                let (ta, ya) = pts[i - 1];
                let (tb, yb) = pts[i];
                ya + (yb - ya) * (y - ta) / (tb - ta)
            }
        }
    }

    /// Inverse by bisection with geometric bracket expansion.
    pub fn inverse(&self, target: f64) -> Result<f64> {
        if !(target.is_finite() && target >= 0.0) {
            return Err(Error::Range(format!("inverse of {target}")));
        }
        if target == 0.0 {
            return Ok(0.0);
        }
        let mut hi = 1.0f64;
        let mut n = 0;
        while self.eval(hi) < target {
            hi *= 2.0;
            n += 1;
            if n > 2100 {
                return Err(Error::Range(format!("{target} exceeds the function's range")));
            }
        }
        let mut lo = 0.0f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }
}

/// Luxemburg norm: the infimum of scales u with
/// `sum N(|v_i|/u) len_i <= 1`, located by bisection.
pub fn orlicz_norm(x: &StepFunction, n: &OrliczFunction) -> f64 {
    let blocks: Vec<(f64, f64)> = x
        .blocks()
        .filter(|(_, _, v)| !v.is_zero())
        .map(|(lo, hi, v)| {
            let len = hi.to_exact() - lo.to_exact();
            (v.abs().to_f64(), len.to_f64())
        })
        .collect();
    if blocks.is_empty() {
        return 0.0;
    }
    assert!(
        blocks.iter().all(|&(v, _)| v.is_finite()),
        "orlicz_norm needs f64-range values"
    );
    let modular = |u: f64| -> f64 { blocks.iter().map(|&(v, len)| n.eval(v / u) * len).sum() };
    let mut hi = blocks.iter().map(|&(v, _)| v).fold(f64::MIN, f64::max);
    let mut guard = 0;
    while modular(hi) > 1.0 {
        hi *= 2.0;
        guard += 1;
        assert!(guard < 1100, "modular never falls below 1");
    }
    let mut lo = hi;
    while modular(lo) <= 1.0 && lo > f64::MIN_POSITIVE {
        lo *= 0.5;
    }
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Norm of an indicator of measure t in the Orlicz space: 1 / N^-1(1/t).
pub fn orlicz_fundamental(n: &OrliczFunction, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(format!("{t} outside (0,1]")));
    }
    let inv = 1.0 / t;
    if !inv.is_finite() {
        return Err(Error::Range(format!("1/{t} overflows")));
    }
    Ok(1.0 / n.inverse(inv)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioLimit {
    Zero,
    Nonzero,
    Inconclusive,
}

/// Trend verdict on `m(2^j)/n(2^j)` as j grows: does m/n tend to zero at
/// infinity?
pub fn orlicz_ratio_limit(n: &OrliczFunction, m: &OrliczFunction, depth: usize) -> (RatioLimit, Vec<f64>) {
    let r: Vec<f64> = (0..=depth)
        .map(|j| {
            let t = 2f64.powi(j as i32);
            m.eval(t) / n.eval(t)
        })
        .collect();
    let cfg = TrendConfig { depth, ..TrendConfig::default() };
    let trend = vanishing_limit(&r, &cfg);
    let verdict = match trend.verdict {
        Verdict::Holds => RatioLimit::Zero,
        Verdict::Fails => RatioLimit::Nonzero,
        Verdict::Inconclusive => RatioLimit::Inconclusive,
    };
    (verdict, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepfn::disjoint_sum;

    fn pow(a: f64) -> GFun {
        GFun::pow(a).unwrap()
    }

    fn chi(p: u64, q: u64) -> StepFunction {
        StepFunction::indicator(Time::rational(p, q).unwrap()).unwrap()
    }

    #[test]
    fn lorentz_fundamental_identity() {
        for (p, q) in [(1u64, 4u64), (1, 3), (2, 3), (1, 1)] {
            let a = p as f64 / q as f64;
            let phi = pow(0.5);
            assert!((lorentz_norm(&chi(p, q), &phi) - a.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn lorentz_with_identity_weight_is_l1() {
        let x = crate::testutil::random_step(17, 8);
        assert!((lorentz_norm(&x, &pow(1.0)) - x.lp_norm(1.0)).abs() < 1e-12);
    }

    #[test]
    fn lorentz_two_term_stieltjes_sum() {
        // 2 on (0,1/4], 1 on (1/4,1/2]: sum is 2*(1/2) + (2^-1/2 - 2^-1)
        let x = StepFunction::new(
            vec![Time::dyadic(2), Time::dyadic(1), Time::one()],
            vec![2.0, 1.0, 0.0],
        )
        .unwrap();
        let want = 2.0 * 0.5 + (2f64.powf(-0.5) - 0.5);
        assert!((lorentz_norm(&x, &pow(0.5)) - want).abs() < 1e-14);
    }

    #[test]
    fn marcinkiewicz_fundamental_identity() {
        let theta = PositiveFun::tilde_of(GFun::pow_log(0.5, 0.5).unwrap());
        for (p, q) in [(1u64, 4u64), (3, 7), (1, 1)] {
            let a = p as f64 / q as f64;
            let x = chi(p, q);
            let want = a / theta.eval(a);
            let got = marcinkiewicz_norm(&x, &theta);
            assert!((got - want).abs() < 1e-10 * want.max(1.0), "a={a} got {got} want {want}");
        }
    }

    #[test]
    fn marcinkiewicz_constant_weight_is_l1() {
        let x = crate::testutil::random_step(5, 9);
        let got = marcinkiewicz_norm(&x, &PositiveFun::constant(1.0).unwrap());
        assert!((got - x.lp_norm(1.0)).abs() < 1e-12);
    }

    #[test]
    fn marcinkiewicz_power_closed_form() {
        // sup min(t,1/4)/sqrt(t) = (1/4)/sqrt(1/4) = 1/2
        let got = marcinkiewicz_norm(&chi(1, 4), &PositiveFun::Fun(pow(0.5)));
        assert!((got - 0.5).abs() < 1e-14);
    }

    #[test]
    fn quasi_norm_of_indicator_is_psi() {
        let psi = GFun::pow_log(0.5, 0.5).unwrap();
        let a = 0.25f64;
        assert!((quasi_norm(&chi(1, 4), &psi) - psi.eval(a)).abs() < 1e-14);
    }

    #[test]
    fn quasi_below_marcinkiewicz_with_companion_weight() {
        let psi = GFun::pow_log(0.5, 0.5).unwrap();
        let theta = PositiveFun::tilde_of(psi.clone());
        for seed in 0..40u64 {
            let x = crate::testutil::random_step(seed, 10);
            let q = quasi_norm(&x, &psi);
            let m = marcinkiewicz_norm(&x, &theta);
            assert!(q <= m * (1.0 + 1e-12), "seed {seed}: quasi {q} > marc {m}");
        }
    }

    #[test]
    fn orlicz_power_is_lp() {
        for seed in [3u64, 11, 19] {
            let x = crate::testutil::random_step(seed, 8);
            for p in [1.0, 2.0, 3.0] {
                let n = OrliczFunction::power(p).unwrap();
                assert!(
                    (orlicz_norm(&x, &n) - x.lp_norm(p)).abs() < 1e-8 * x.lp_norm(p).max(1.0),
                    "seed {seed} p {p}"
                );
            }
        }
        assert_eq!(orlicz_norm(&StepFunction::zero(), &OrliczFunction::power(2.0).unwrap()), 0.0);
    }

    #[test]
    fn orlicz_fundamental_identity() {
        let n = OrliczFunction::power(2.0).unwrap();
        assert!((orlicz_fundamental(&n, 0.25).unwrap() - 0.5).abs() < 1e-10);
        let x = chi(1, 4);
        assert!((orlicz_norm(&x, &n) - 0.5).abs() < 1e-8);
        // tabulated square on [0,4] with the vertex grid hitting 2 exactly
        let pts: Vec<(f64, f64)> = (0..=16).map(|i| {
            let t = i as f64 * 0.25;
            (t, t * t)
        }).collect();
        let tn = OrliczFunction::table_convex(pts).unwrap();
        assert!((orlicz_fundamental(&tn, 0.25).unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn ratio_limits() {
        let n3 = OrliczFunction::power(3.0).unwrap();
        let n2 = OrliczFunction::power(2.0).unwrap();
        assert_eq!(orlicz_ratio_limit(&n3, &n2, 40).0, RatioLimit::Zero);
        assert_eq!(orlicz_ratio_limit(&n2, &n2, 40).0, RatioLimit::Nonzero);
        // t^2 log2(1+t) against t^2: ratio 1/log2(1+t) tends to zero slowly
        let pts: Vec<(f64, f64)> = std::iter::once((0.0, 0.0))
            .chain((0..=45).map(|j| {
                let t = 2f64.powi(j);
                (t, t * t * (1.0 + t).log2())
            }))
            .collect();
        let nlog = OrliczFunction::table_convex(pts).unwrap();
        assert_eq!(orlicz_ratio_limit(&nlog, &n2, 40).0, RatioLimit::Zero);
    }

    #[test]
    fn norms_are_rearrangement_invariant_and_monotone() {
        let psi = GFun::pow_log(0.5, 0.5).unwrap();
        let theta = PositiveFun::tilde_of(psi.clone());
        let n2 = OrliczFunction::power(2.0).unwrap();
        for seed in 0..25u64 {
            let y = crate::testutil::random_step(seed, 8);
            let x = crate::testutil::dominated_by(&y, seed ^ 0xabcd);
            let shuffled = crate::testutil::shuffle_blocks(&y, seed ^ 0x77);
            let pairs: Vec<(f64, f64, f64)> = vec![
                (lorentz_norm(&x, &psi), lorentz_norm(&y, &psi), lorentz_norm(&shuffled, &psi)),
                (
                    marcinkiewicz_norm(&x, &theta),
                    marcinkiewicz_norm(&y, &theta),
                    marcinkiewicz_norm(&shuffled, &theta),
                ),
                (quasi_norm(&x, &psi), quasi_norm(&y, &psi), quasi_norm(&shuffled, &psi)),
                (orlicz_norm(&x, &n2), orlicz_norm(&y, &n2), orlicz_norm(&shuffled, &n2)),
            ];
            for (i, (nx, ny, nsh)) in pairs.iter().enumerate() {
                assert!(nx <= &(ny * (1.0 + 1e-9)), "engine {i} seed {seed}: {nx} > {ny}");
                assert!((nsh - ny).abs() <= 1e-9 * ny.max(1.0), "engine {i} seed {seed}");
            }
        }
    }

    #[test]
    fn triangle_inequality_on_random_pairs() {
        let psi = GFun::pow_log(0.5, 0.5).unwrap();
        let theta = PositiveFun::tilde_of(psi.clone());
        let n2 = OrliczFunction::power(2.0).unwrap();
        for seed in 0..20u64 {
            // disjointly supported halves so the sum is a step function we can build
            let a = crate::testutil::random_step_on_half(seed, true);
            let b = crate::testutil::random_step_on_half(seed ^ 0x5555, false);
            let s = disjoint_sum(&[1.0, 1.0], &[a.clone(), b.clone()]).unwrap();
            let checks = [
                (lorentz_norm(&s, &psi), lorentz_norm(&a, &psi) + lorentz_norm(&b, &psi)),
                (
                    marcinkiewicz_norm(&s, &theta),
                    marcinkiewicz_norm(&a, &theta) + marcinkiewicz_norm(&b, &theta),
                ),
                (orlicz_norm(&s, &n2), orlicz_norm(&a, &n2) + orlicz_norm(&b, &n2)),
            ];
            for (i, (ns, sum)) in checks.iter().enumerate() {
                assert!(ns <= &(sum * (1.0 + 1e-9)), "engine {i} seed {seed}");
            }
        }
    }
}
