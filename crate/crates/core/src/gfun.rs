//! Weight functions on (0, 1]: positive, increasing, quasiconcave.
//!
//! [`GFun`] is the catalog of admissible weights (pure powers, powers with a
//! base-2 logarithmic factor, tabulated piecewise-linear functions, and
//! positive rescalings). Constructors validate positivity, monotonicity and
//! quasiconcavity on a dyadic probe grid, and tables are additionally checked
//! for exact concavity through second differences.
//!
//! On top of the catalog sit the dilation profile with its two index
//! estimates, the two ratio conditions used by the embedding tests, and the
//! least concave majorant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::ExactScalar;
use crate::stepfn::Time;
use crate::trend::{least_squares_slope, vanishing_limit, violates_domination, Trend, TrendConfig, Verdict};

const LN_2: f64 = std::f64::consts::LN_2;

/// Positive increasing quasiconcave weight on (0, 1].
#[derive(Clone, Debug, PartialEq)]
pub enum GFun {
    /// t^a with a in (0, 1].
    Pow { a: f64 },
    /// t^a * (log2(4/t))^b.
    PowLog { a: f64, b: f64 },
    /// Piecewise-linear through `(t, y)` vertices; extended linearly through
    /// the origin below the first vertex and constant above the last.
    Table { pts: Vec<(f64, f64)> },
    /// c * inner(t).
    Scaled { c: f64, inner: Box<GFun> },
}

impl GFun {
    pub fn pow(a: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return Err(Error::Domain(format!("pow exponent {a} not in (0,1]")));
        }
        let f = GFun::Pow { a };
        f.validate()?;
        Ok(f)
    }

    pub fn pow_log(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Domain("non-finite powlog parameters".into()));
        }
        let f = GFun::PowLog { a, b };
        f.validate()?;
        Ok(f)
    }

    pub fn table(pts: Vec<(f64, f64)>) -> Result<Self> {
        if pts.len() < 2 {
            return Err(Error::Domain("table needs at least two vertices".into()));
        }
        let mut prev_t = -1.0f64;
        for &(t, y) in &pts {
            if !(t.is_finite() && y.is_finite()) || t > 1.0 {
                return Err(Error::Domain("table vertex outside [0,1]".into()));
            }
            if t <= prev_t {
                return Err(Error::Domain("table abscissae must increase strictly".into()));
            }
            if y < 0.0 || (y == 0.0 && t > 0.0) {
                return Err(Error::Domain("table values must be positive on (0,1]".into()));
            }
            prev_t = t;
        }
        // nondecreasing values
        if !pts.windows(2).all(|w| w[1].1 >= w[0].1) {
            return Err(Error::Domain("table values must be nondecreasing".into()));
        }
        // concavity: chord slopes nonincreasing (second differences <= 0)
        let slopes: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
        if !slopes.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-300) {
            return Err(Error::Domain("table is not concave".into()));
        }
        // quasiconcavity through the implied origin extension
        let ratios: Vec<f64> = pts.iter().filter(|p| p.0 > 0.0).map(|p| p.1 / p.0).collect();
        if !ratios.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)) {
            return Err(Error::Domain("table violates y/t nonincreasing".into()));
        }
        let f = GFun::Table { pts };
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn table_unchecked(pts: Vec<(f64, f64)>) -> Self {
        GFun::Table { pts }
    }

    pub fn scaled(c: f64, inner: GFun) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("scale factor {c} must be positive")));
        }
        Ok(GFun::Scaled { c, inner: Box::new(inner) })
    }

    /// Probe-grid validation: f > 0, f nondecreasing, f(t)/t nonincreasing,
    /// all on t = 2^-j for j = 0..=50.
    fn validate(&self) -> Result<()> {
        let mut prev = f64::INFINITY;
        for j in 0..=50u32 {
            let t = 2f64.powi(-(j as i32));
            let y = self.eval_raw(t);
            if !(y > 0.0 && y.is_finite()) {
                return Err(Error::Domain(format!("not positive at t=2^-{j}")));
            }
            if j > 0 {
                // increasing: f(2^-j) <= f(2^-(j-1));  f/t nonincreasing: f(2^-j) >= f(2^-(j-1))/2
                if y > prev * (1.0 + 1e-12) {
                    return Err(Error::Domain(format!("not increasing near t=2^-{j}")));
                }
                if y < prev / 2.0 * (1.0 - 1e-12) {
                    return Err(Error::Domain(format!("f(t)/t increases near t=2^-{j}")));
                }
            }
            prev = y;
        }
        Ok(())
    }

    fn eval_raw(&self, t: f64) -> f64 {
        match self {
            GFun::Pow { a } => t.powf(*a),
            GFun::PowLog { a, b } => t.powf(*a) * (2.0 - t.log2()).powf(*b),
            GFun::Table { pts } => table_eval(pts, t),
            GFun::Scaled { c, inner } => c * inner.eval_raw(t),
        }
    }

    /// Evaluate at t in (0, 1].
    pub fn eval(&self, t: f64) -> f64 {
        assert!(t > 0.0 && t <= 1.0, "eval outside (0,1]");
        self.eval_raw(t)
    }

    pub fn eval_checked(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::Domain(format!("{t} outside (0,1]")));
        }
        Ok(self.eval_raw(t))
    }

    /// Evaluate at t = 2^l for l <= 0, in extended range.
    pub fn eval_log2(&self, l: f64) -> ExactScalar {
        debug_assert!(l <= 1e-9);
        match self {
            GFun::Pow { a } => ExactScalar::exp2(a * l),
            GFun::PowLog { a, b } => {
                ExactScalar::exp2(a * l) * ExactScalar::from_f64((2.0 - l).powf(*b))
            }
            GFun::Table { pts } => table_eval_log2(pts, l),
            GFun::Scaled { c, inner } => ExactScalar::from_f64(*c) * inner.eval_log2(l),
        }
    }

    /// Evaluate at an exact point. Dyadic points take closed-form paths; the
    /// square-root weight t^(1/2) log2^(1/2)(4/t) at t = 2^-k is computed as
    /// sqrt((k+2) 2^-k) in one rounding.
    pub fn eval_time(&self, t: &Time) -> ExactScalar {
        debug_assert!(!t.is_zero());
        if let Some(k) = t.dyadic_exponent() {
            let k = k as i64;
            return match self {
                GFun::Pow { a } => ExactScalar::exp2(-a * k as f64),
                GFun::PowLog { a, b } if *a == 0.5 && *b == 0.5 => {
                    ExactScalar::from_int(k + 2).shift(-k).sqrt()
                }
                GFun::PowLog { a, b } => {
                    ExactScalar::exp2(-a * k as f64)
                        * ExactScalar::from_f64(((k + 2) as f64).powf(*b))
                }
                GFun::Table { pts } => table_eval_log2(pts, -(k as f64)),
                GFun::Scaled { c, inner } => ExactScalar::from_f64(*c) * inner.eval_time(t),
            };
        }
        self.eval_log2(t.log2())
    }

    /// Derivative at t in (0, 1]; tables use the segment slope.
    pub fn deriv(&self, t: f64) -> f64 {
        assert!(t > 0.0 && t <= 1.0);
        match self {
            GFun::Pow { a } => a * t.powf(a - 1.0),
            GFun::PowLog { a, b } => {
                let big_l = 2.0 - t.log2();
                t.powf(a - 1.0) * big_l.powf(b - 1.0) * (a * big_l - b / LN_2)
            }
            GFun::Table { pts } => table_slope(pts, t),
            GFun::Scaled { c, inner } => c * inner.deriv(t),
        }
    }

    /// Derivative at t = 2^l, extended range.
    pub fn deriv_log2(&self, l: f64) -> ExactScalar {
        match self {
            GFun::Pow { a } => ExactScalar::from_f64(*a) * ExactScalar::exp2((a - 1.0) * l),
            GFun::PowLog { a, b } => {
                let big_l = 2.0 - l;
                ExactScalar::exp2((a - 1.0) * l)
                    * ExactScalar::from_f64(big_l.powf(b - 1.0) * (a * big_l - b / LN_2))
            }
            GFun::Table { pts } => table_slope_log2(pts, l),
            GFun::Scaled { c, inner } => ExactScalar::from_f64(*c) * inner.deriv_log2(l),
        }
    }

    /// c, a such that f(t) = c t^a, when the form is a pure power.
    pub fn power_form(&self) -> Option<(f64, f64)> {
        match self {
            GFun::Pow { a } => Some((1.0, *a)),
            GFun::PowLog { .. } | GFun::Table { .. } => None,
            GFun::Scaled { c, inner } => inner.power_form().map(|(ci, a)| (c * ci, a)),
        }
    }
}

fn table_eval(pts: &[(f64, f64)], t: f64) -> f64 {
    let (t0, y0) = pts[0];
    if t <= t0 {
        // extend linearly through the origin
        return if t0 == 0.0 { y0 } else { y0 * t / t0 };
    }
    let (tl, yl) = *pts.last().unwrap();
    if t >= tl {
        return yl;
    }
    let i = pts.partition_point(|p| p.0 < t);
    let (ta, ya) = pts[i - 1];
    let (tb, yb) = pts[i];
    ya + (yb - ya) * (t - ta) / (tb - ta)
}

fn table_eval_log2(pts: &[(f64, f64)], l: f64) -> ExactScalar {
    let (t0, y0) = pts[0];
    if t0 > 0.0 && l < t0.log2() {
        return ExactScalar::from_f64(y0 / t0) * ExactScalar::exp2(l);
    }
    ExactScalar::from_f64(table_eval(pts, l.exp2()))
}

fn table_slope(pts: &[(f64, f64)], t: f64) -> f64 {
    let (t0, y0) = pts[0];
    if t <= t0 {
        return if t0 == 0.0 {
            (pts[1].1 - y0) / (pts[1].0 - t0)
        } else {
            y0 / t0
        };
    }
    if t >= pts.last().unwrap().0 {
        return 0.0;
    }
    let i = pts.partition_point(|p| p.0 < t);
    let (ta, ya) = pts[i - 1];
    let (tb, yb) = pts[i];
    (yb - ya) / (tb - ta)
}

fn table_slope_log2(pts: &[(f64, f64)], l: f64) -> ExactScalar {
    let (t0, y0) = pts[0];
    if t0 > 0.0 && l < t0.log2() {
        return ExactScalar::from_f64(y0 / t0);
    }
    ExactScalar::from_f64(table_slope(pts, l.exp2()))
}

/// Positive eval-only function on (0, 1]: a weight, a ratio of weights, the
/// companion t/f(t) of a weight, or a constant.
#[derive(Clone, Debug)]
pub enum PositiveFun {
    Fun(GFun),
    /// t / f(t); increasing whenever f is quasiconcave.
    Tilde(GFun),
    Ratio(Box<PositiveFun>, Box<PositiveFun>),
    Const(f64),
}

impl PositiveFun {
    pub fn ratio(num: GFun, den: GFun) -> Self {
        PositiveFun::Ratio(Box::new(PositiveFun::Fun(num)), Box::new(PositiveFun::Fun(den)))
    }

    /// The function t -> t / f(t).
    pub fn tilde_of(f: GFun) -> Self {
        PositiveFun::Tilde(f)
    }

    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("constant {c} must be positive")));
        }
        Ok(PositiveFun::Const(c))
    }

    pub fn eval_log2(&self, l: f64) -> ExactScalar {
        match self {
            PositiveFun::Fun(f) => f.eval_log2(l),
            PositiveFun::Tilde(f) => ExactScalar::exp2(l) / f.eval_log2(l),
            PositiveFun::Ratio(n, d) => n.eval_log2(l) / d.eval_log2(l),
            PositiveFun::Const(c) => ExactScalar::from_f64(*c),
        }
    }

    pub fn eval_time(&self, t: &Time) -> ExactScalar {
        match self {
            PositiveFun::Fun(f) => f.eval_time(t),
            PositiveFun::Tilde(f) => t.to_exact() / f.eval_time(t),
            PositiveFun::Ratio(n, d) => n.eval_time(t) / d.eval_time(t),
            PositiveFun::Const(c) => ExactScalar::from_f64(*c),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        assert!(t > 0.0 && t <= 1.0);
        self.eval_log2(t.log2()).to_f64()
    }

    /// Derivative at t = 2^l, extended range.
    pub fn deriv_log2(&self, l: f64) -> ExactScalar {
        match self {
            PositiveFun::Fun(f) => f.deriv_log2(l),
            PositiveFun::Tilde(f) => {
                // (t/f)' = (f - t f') / f^2
                let fv = f.eval_log2(l);
                let fd = f.deriv_log2(l);
                (fv - ExactScalar::exp2(l) * fd) / (fv * fv)
            }
            PositiveFun::Ratio(n, d) => {
                let nv = n.eval_log2(l);
                let nd = n.deriv_log2(l);
                let dv = d.eval_log2(l);
                let dd = d.deriv_log2(l);
                (nd * dv - nv * dd) / (dv * dv)
            }
            PositiveFun::Const(_) => ExactScalar::ZERO,
        }
    }

    /// c, a such that the function is exactly c t^a.
    pub fn power_form(&self) -> Option<(f64, f64)> {
        match self {
            PositiveFun::Fun(f) => f.power_form(),
            PositiveFun::Tilde(f) => f.power_form().map(|(c, a)| (1.0 / c, 1.0 - a)),
            PositiveFun::Ratio(n, d) => match (n.power_form(), d.power_form()) {
                (Some((cn, an)), Some((cd, ad))) => Some((cn / cd, an - ad)),
                _ => None,
            },
            PositiveFun::Const(c) => Some((*c, 0.0)),
        }
    }
}

impl From<GFun> for PositiveFun {
    fn from(f: GFun) -> Self {
        PositiveFun::Fun(f)
    }
}

/// Window and tolerances for dilation-index estimation.
#[derive(Clone, Debug)]
pub struct IndexConfig {
    /// Largest dilation exponent sampled: arguments 2^-j_max .. 2^j_max.
    pub j_max: usize,
    /// Probe depth; the supremum grid never evaluates below 2^-k_depth.
    pub k_depth: usize,
    /// Lower-index threshold for the positive-index condition.
    pub threshold: f64,
    /// Maximum slope drift across nested fit windows before the fit is
    /// declared unstable.
    pub fit_tol: f64,
}

impl Default for IndexConfig {
    fn default() -> Self {
        IndexConfig { j_max: 60, k_depth: 120, threshold: 0.02, fit_tol: 0.05 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexSample {
    /// Dilation argument is 2^pow.
    pub pow: i32,
    pub value: f64,
}

/// Sampled dilation function with fitted lower/upper indices.
#[derive(Clone, Debug, Serialize)]
pub struct DilationProfile {
    pub samples: Vec<IndexSample>,
    pub gamma_est: f64,
    pub delta_est: f64,
    /// Fit window in |pow|.
    pub window: (usize, usize),
    pub stable: bool,
    /// Largest slope drift observed across the nested windows.
    pub fit_spread: f64,
}

/// Sample M_f(2^j) for j in [-j_max, j_max] over a dyadic probe grid and fit
/// the two indices on the deepest half of each side.
pub fn dilation_profile(f: &PositiveFun, cfg: &IndexConfig) -> Result<DilationProfile> {
    if cfg.j_max < 4 {
        return Err(Error::PreconditionFailed("index window needs j_max >= 4".into()));
    }
    if cfg.k_depth < 2 * cfg.j_max {
        return Err(Error::PreconditionFailed("probe depth must be at least 2*j_max".into()));
    }
    let jm = cfg.j_max as i64;
    let kd = cfg.k_depth as i64;
    // cache f(2^-i) for i = 0..=k_depth
    let fv: Vec<ExactScalar> = (0..=kd).map(|i| f.eval_log2(-(i as f64))).collect();
    let mut samples = Vec::with_capacity(2 * cfg.j_max + 1);
    for j in -jm..=jm {
        let m = if j <= 0 {
            // contraction: sup over s = 2^-i, 0 <= i <= k_depth + j
            let jj = -j;
            (0..=(kd - jj))
                .map(|i| (fv[(i + jj) as usize] / fv[i as usize]).to_f64())
                .fold(f64::MIN, f64::max)
        } else {
            // expansion: s <= 2^-j, so s = 2^-i with j <= i <= k_depth
            (j..=kd)
                .map(|i| (fv[(i - j) as usize] / fv[i as usize]).to_f64())
                .fold(f64::MIN, f64::max)
        };
        samples.push(IndexSample { pow: j as i32, value: m });
    }
    let slope_over = |side: i64, lo: i64, hi: i64| -> f64 {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for j in lo..=hi {
            let s = &samples[(side * j + jm) as usize];
            xs.push(side as f64 * j as f64 * LN_2);
            ys.push(s.value.ln());
        }
        least_squares_slope(&xs, &ys)
    };
    let half = jm / 2;
    let three_q = 3 * jm / 4;
    // gamma: t -> 0 side (pow = -j); delta: t -> infinity side
    let gamma_est = slope_over(-1, half, jm);
    let delta_est = slope_over(1, half, jm);
    let spread_g = (slope_over(-1, half, three_q) - slope_over(-1, three_q, jm)).abs();
    let spread_d = (slope_over(1, half, three_q) - slope_over(1, three_q, jm)).abs();
    let fit_spread = spread_g.max(spread_d);
    Ok(DilationProfile {
        samples,
        gamma_est,
        delta_est,
        window: (half as usize, cfg.j_max),
        stable: fit_spread <= cfg.fit_tol,
        fit_spread,
    })
}

/// Index estimates, failing when the log-log fit drifts across windows.
pub fn dilation_indices(f: &PositiveFun, cfg: &IndexConfig) -> Result<(f64, f64)> {
    let p = dilation_profile(f, cfg)?;
    if !p.stable {
        return Err(Error::FitUnstable(format!(
            "slope drift {:.4} exceeds tolerance {:.4}",
            p.fit_spread, cfg.fit_tol
        )));
    }
    Ok((p.gamma_est, p.delta_est))
}

/// Outcome of one ratio condition, with its trace.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    /// psi(2^-j)/phi(2^-j) for j = 0..=depth (vanishing test) or the fitted
    /// sample trace (index test).
    pub trace: Vec<f64>,
    /// Lower dilation index of the ratio, when estimated.
    pub gamma: Option<f64>,
    pub trend: Option<Trend>,
}

/// Does psi/phi tend to zero at 0? Requires psi to be dominated by phi on the
/// grid; trend analysis on the dyadic trace decides the verdict.
pub fn vanishing_ratio(phi: &GFun, psi: &GFun, cfg: &TrendConfig) -> Result<ConditionReport> {
    let r: Vec<f64> = (0..=cfg.depth)
        .map(|j| {
            let t = Time::dyadic(j as u32);
            (psi.eval_time(&t) / phi.eval_time(&t)).to_f64()
        })
        .collect();
    if violates_domination(&r, cfg) {
        return Err(Error::EmbedOrder(format!(
            "psi/phi grows to {:.3e} by depth {}",
            r[cfg.depth], cfg.depth
        )));
    }
    let trend = vanishing_limit(&r, cfg);
    Ok(ConditionReport { verdict: trend.verdict, trace: r, gamma: None, trend: Some(trend) })
}

/// Is the lower dilation index of psi/phi positive? An unstable fit is
/// reported as inconclusive rather than an error.
pub fn positive_ratio_index(phi: &GFun, psi: &GFun, cfg: &IndexConfig) -> Result<ConditionReport> {
    let ratio = PositiveFun::ratio(psi.clone(), phi.clone());
    let profile = dilation_profile(&ratio, cfg)?;
    let trace: Vec<f64> = profile.samples.iter().map(|s| s.value).collect();
    let verdict = if !profile.stable {
        Verdict::Inconclusive
    } else if profile.gamma_est > cfg.threshold {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(ConditionReport { verdict, trace, gamma: Some(profile.gamma_est), trend: None })
}

/// Least concave nondecreasing majorant of a positive point set, as the upper
/// hull of the vertices anchored at the origin.
pub fn concave_majorant(points: &[(f64, f64)]) -> GFun {
    assert!(!points.is_empty(), "majorant of empty point set");
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(points.len() + 1);
    if points[0].0 > 0.0 {
        pts.push((0.0, 0.0));
    }
    pts.extend_from_slice(points);
    let mut prev = -1.0f64;
    for &(t, y) in &pts {
        assert!(t > prev, "abscissae must increase strictly");
        assert!(y >= 0.0 && (y > 0.0 || t == 0.0), "ordinates must be positive on (0,1]");
        prev = t;
    }

    // upper hull, monotone chain
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    // flatten any decreasing tail so the majorant is nondecreasing
    let peak = hull
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let peak_y = hull[peak].1;
    for v in hull.iter_mut().skip(peak + 1) {
        v.1 = peak_y;
    }

    GFun::table_unchecked(hull)
}

/// Parse the shared weight-function mini-language:
/// `pow:a`, `powlog:a:b`, `table:<path>`, `scaled:c:<spec>`.
pub fn parse_gfun(spec: &str) -> Result<GFun> {
    let (head, rest) = split_spec(spec);
    match head {
        "pow" => GFun::pow(parse_num(rest, "pow exponent")?),
        "powlog" => {
            let (a, b) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("powlog needs two parameters: {spec}")))?;
            GFun::pow_log(parse_num(a, "powlog exponent")?, parse_num(b, "powlog log power")?)
        }
        "table" => GFun::table(load_table(rest)?),
        "scaled" => {
            let (c, inner) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("scaled needs a factor and a spec: {spec}")))?;
            GFun::scaled(parse_num(c, "scale factor")?, parse_gfun(inner)?)
        }
        _ => Err(Error::Parse(format!("unknown function spec '{spec}'"))),
    }
}

/// Positive functions add `tilde:<spec>` (t/f) and `const:c` to the
/// mini-language.
pub fn parse_positive(spec: &str) -> Result<PositiveFun> {
    let (head, rest) = split_spec(spec);
    match head {
        "tilde" => Ok(PositiveFun::tilde_of(parse_gfun(rest)?)),
        "const" => PositiveFun::constant(parse_num(rest, "constant")?),
        _ => Ok(PositiveFun::Fun(parse_gfun(spec)?)),
    }
}

fn split_spec(spec: &str) -> (&str, &str) {
    match spec.split_once(':') {
        Some((h, r)) => (h, r),
        None => (spec, ""),
    }
}

fn parse_num(s: &str, what: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad {what} '{s}'")))
}

fn load_table(path: &str) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("table file {path}: {e}")))?;
    serde_json::from_str::<Vec<(f64, f64)>>(&text)
        .map_err(|e| Error::Parse(format!("table file {path}: {e}")))
}
