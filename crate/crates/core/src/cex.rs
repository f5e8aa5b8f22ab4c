//! A family of disjointly supported step functions on which two different
//! norms are equivalent even though the fundamental-function ratio of their
//! spaces vanishes.
//!
//! The weight is `psi(t) = t^(1/2) log2^(1/2)(4/t)`. Coefficients
//! `b_k = (k+2)^(-1/2) 2^(k/2)` are chosen so that `b_k psi(2^-k) = 1`; block
//! index windows pack reciprocal sums up to 1; `w_m` is the decreasing
//! envelope of the scaled indicators in window m, and `v_m` its restriction
//! to the window's own dyadic range, so the `v_m` are disjoint. The space F
//! is defined by pairing the decreasing rearrangement against normalized
//! `w_m` and against `b^(-1/2) chi_(0,b]`; the E-norm is the Marcinkiewicz
//! supremum for the companion weight `t/psi(t)`.
//!
//! [`CexFamily::verify`] re-derives every quantitative bound of the
//! construction with certified arithmetic and samples random coefficient
//! vectors to exhibit the two-sided norm equivalence on the family's span.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::ExactScalar;
use crate::gfun::{positive_ratio_index, vanishing_ratio, GFun, IndexConfig, PositiveFun};
use crate::norms::{marcinkiewicz_sup_sorted, quasi_norm_sorted, SupPoint};
use crate::quad::{decreasing_bracket, Bracket};
use crate::stepfn::{disjoint_sum, ratio_to_exact, StepFunction, Time};
use crate::trend::{TrendConfig, Verdict};

/// Default sampling seed.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Frozen cap on the spread (max/min) of the E/F norm ratio over sampled
/// coefficient vectors. Calibrated once by a dense grid sweep at depth 3;
/// the observed spread is below 6, the per-direction bounds allow at most
/// 8 / (1/4 / sqrt(6)) ~ 20, and the cap keeps a safety factor beyond that.
pub const RATIO_SPREAD_CAP: f64 = 32.0;

/// Largest supported family depth.
pub const MAX_DEPTH: usize = 6;

/// One verified bound: `computed <kind> bound`.
#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub claim_id: String,
    pub kind: ClaimKind,
    pub computed: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimKind {
    Le,
    Ge,
    Gt,
    Abs,
}

fn claim(id: impl Into<String>, kind: ClaimKind, computed: f64, bound: f64) -> Claim {
    let pass = match kind {
        ClaimKind::Le => computed <= bound,
        ClaimKind::Ge => computed >= bound,
        ClaimKind::Gt => computed > bound,
        ClaimKind::Abs => computed.abs() <= bound,
    };
    Claim { claim_id: id.into(), kind, computed, bound, pass }
}

/// F-norm value with its truncation certificate.
#[derive(Clone, Debug, Serialize)]
pub struct FNorm {
    pub value: f64,
    /// Supremum over the indicator test family.
    pub chi: SupPoint,
    /// Pairings against normalized w_m for m = 0..=m_used.
    pub pairings: Vec<f64>,
    pub m_used: usize,
    /// Upper bound on every pairing beyond m_used.
    pub tail_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleRecord {
    pub index: u64,
    pub max_coeff: f64,
    pub quasi: f64,
    pub marc: f64,
    pub f: f64,
    /// marc / f, the E-to-F norm ratio.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CexReport {
    pub m_max: usize,
    pub samples: u64,
    pub seed: u64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub spread: f64,
    pub claims: Vec<Claim>,
    pub pass: bool,
}

/// The built family: index windows, coefficients, envelopes and restrictions.
#[derive(Clone, Debug)]
pub struct CexFamily {
    psi: GFun,
    theta: PositiveFun,
    m_max: usize,
    /// Window starts n_0 .. n_{m_max+1}.
    n: Vec<usize>,
    /// b_k for k < n_{m_max+1}.
    b: Vec<ExactScalar>,
    w: Vec<StepFunction>,
    v: Vec<StepFunction>,
    w_l2: Vec<f64>,
}

/// `b_k = (k+2)^(-1/2) 2^(k/2)`, as the reciprocal square root of
/// `(k+2) 2^-k` so that the pairing with the weight cancels to rounding.
fn b_coeff(k: usize) -> ExactScalar {
    ExactScalar::from_int(k as i64 + 2).shift(-(k as i64)).sqrt().recip()
}

/// `2^(-k/2) (k+2)^(-1/2) = b_k 2^-k`, one term of the mass tail.
fn b_mass(k: usize) -> ExactScalar {
    ExactScalar::from_int(k as i64 + 2).shift(k as i64).sqrt().recip()
}

/// Upper bound for `sum_{k>=n} b_k 2^-k`: consecutive ratios are at most
/// 2^(-1/2), so the geometric extension of the first term dominates.
fn mass_tail_upper(n: usize) -> ExactScalar {
    b_mass(n) * ExactScalar::from_f64(1.0 / (1.0 - 2f64.powf(-0.5)))
}

/// Certified closed form: `int_0^{2^-k} dt/psi(t) <= 2 * 2^(-k/2) (k+2)^(-1/2)`,
/// from bounding the log factor by its value at the right endpoint.
fn inv_psi_integral_tail(k: usize) -> ExactScalar {
    ExactScalar::from_int(2) * b_mass(k)
}

/// Level k with `2^-(k+1) < t <= 2^-k`, capped at `deepest`.
fn dyadic_level(t: &Time, deepest: u32) -> u32 {
    let mut k = (-t.log2()).floor() as i64;
    if k < 0 {
        k = 0;
    }
    if k as u32 >= deepest {
        // verify the cap; the float log is only a candidate
        if Time::dyadic(deepest) >= *t {
            return deepest;
        }
        k = deepest as i64 - 1;
    }
    while k > 0 && Time::dyadic(k as u32) < *t {
        k -= 1;
    }
    while (k as u32) < deepest && *t <= Time::dyadic(k as u32 + 1) {
        k += 1;
    }
    k as u32
}

impl CexFamily {
    pub fn build(m_max: usize) -> Result<Self> {
        if m_max > MAX_DEPTH {
            return Err(Error::Depth(format!("family depth {m_max} exceeds {MAX_DEPTH}")));
        }
        let psi = GFun::pow_log(0.5, 0.5).expect("square-root log weight is admissible");
        let mut n = vec![1usize];
        for _ in 0..=m_max {
            let start = *n.last().unwrap();
            let mut k = start;
            let mut sum = 0.0f64;
            let mut comp = 0.0f64; // compensated summation; windows end >= 1e-4 from 1
            loop {
                let term = 1.0 / (k as f64 + 2.0);
                let y = term - comp;
                let t = sum + y;
                if t > 1.0 {
                    break;
                }
                comp = (t - sum) - y;
                sum = t;
                k += 1;
            }
            n.push(k);
        }
        let b: Vec<ExactScalar> = (0..n[m_max + 1]).map(b_coeff).collect();
        let mut w = Vec::with_capacity(m_max + 1);
        let mut v = Vec::with_capacity(m_max + 1);
        let mut w_l2 = Vec::with_capacity(m_max + 1);
        for m in 0..=m_max {
            let (lo, hi) = (n[m], n[m + 1]);
            let last = hi - 1;
            // w_m: b_k on (2^-k-1, 2^-k] for lo <= k < last, b_last on (0, 2^-last]
            let mut cuts = Vec::with_capacity(last - lo + 2);
            let mut vals = Vec::with_capacity(last - lo + 2);
            for k in (lo..=last).rev() {
                cuts.push(Time::dyadic(k as u32));
                vals.push(b[k]);
            }
            cuts.push(Time::one());
            vals.push(ExactScalar::ZERO);
            let wm = StepFunction::from_exact_parts(cuts, vals)?;
            // v_m: w_m restricted to (2^-hi, 2^-lo]
            let mut cuts = Vec::with_capacity(last - lo + 3);
            let mut vals = Vec::with_capacity(last - lo + 3);
            cuts.push(Time::dyadic(hi as u32));
            vals.push(ExactScalar::ZERO);
            for k in (lo..=last).rev() {
                cuts.push(Time::dyadic(k as u32));
                vals.push(b[k]);
            }
            cuts.push(Time::one());
            vals.push(ExactScalar::ZERO);
            let vm = StepFunction::from_exact_parts(cuts, vals)?;
            w_l2.push(wm.lp_norm(2.0));
            w.push(wm);
            v.push(vm);
        }
        let theta = PositiveFun::tilde_of(psi.clone());
        Ok(CexFamily { psi, theta, m_max, n, b, w, v, w_l2 })
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn psi(&self) -> &GFun {
        &self.psi
    }

    /// The E-norm weight companion t/psi(t).
    pub fn theta(&self) -> &PositiveFun {
        &self.theta
    }

    pub fn window_starts(&self) -> &[usize] {
        &self.n
    }

    pub fn coefficient(&self, k: usize) -> ExactScalar {
        self.b[k]
    }

    pub fn envelope(&self, m: usize) -> &StepFunction {
        &self.w[m]
    }

    pub fn part(&self, m: usize) -> &StepFunction {
        &self.v[m]
    }

    pub fn parts(&self) -> &[StepFunction] {
        &self.v
    }

    pub fn envelope_l2(&self, m: usize) -> f64 {
        self.w_l2[m]
    }

    /// Combine coefficients against the disjoint parts.
    pub fn combine(&self, coeffs: &[f64]) -> Result<StepFunction> {
        disjoint_sum(coeffs, &self.v)
    }

    /// Norm of the intersection space F: the larger of the indicator-family
    /// supremum and the pairings against normalized envelopes, with a
    /// certified bound on the pairings not computed.
    pub fn f_norm(&self, x: &StepFunction, eps: f64) -> FNorm {
        self.f_norm_sorted(&x.rearrange(), eps)
    }

    pub(crate) fn f_norm_sorted(&self, xs: &StepFunction, eps: f64) -> FNorm {
        let chi = marcinkiewicz_sup_sorted(
            xs,
            &PositiveFun::Fun(GFun::Pow { a: 0.5 }),
            64,
        );
        let x_top = xs.max_abs();
        let mut best = chi.value;
        // one merged sweep for all envelope pairings; the loop below only
        // decides how many of them the certificate needs
        let raw = self.envelope_pairings(xs);
        let mut pairings = Vec::with_capacity(self.m_max + 1);
        let mut m_used = 0;
        let mut tail_bound = f64::INFINITY;
        for m in 0..=self.m_max {
            let p = (raw[m] / ExactScalar::from_f64(self.w_l2[m])).to_f64();
            pairings.push(p);
            best = best.max(p);
            m_used = m;
            // every deeper pairing is at most x*(0+) sum b_k 2^-k / ||w||_2,
            // and every envelope L2 norm is at least 1/2
            let t = (x_top * mass_tail_upper(self.n[m + 1]) * ExactScalar::from_int(2)).to_f64();
            tail_bound = t;
            if t < eps * best {
                break;
            }
        }
        FNorm { value: best, chi, pairings, m_used, tail_bound }
    }

    /// Envelope value on the dyadic level `(2^-k-1, 2^-k]`, closed form.
    fn envelope_value(&self, m: usize, k: usize) -> ExactScalar {
        let (lo, hi) = (self.n[m], self.n[m + 1]);
        if k < lo {
            ExactScalar::ZERO
        } else if k < hi {
            self.b[k]
        } else {
            self.b[hi - 1]
        }
    }

    /// `int x* w_m` for every m in one sweep. Splits each block of `xs` along
    /// the dyadic ladder and reads envelope values from the closed form,
    /// avoiding comparisons against the envelopes' own cut lists. Below
    /// 2^-deepest every envelope is constant, so the ladder stops there.
    fn envelope_pairings(&self, xs: &StepFunction) -> Vec<ExactScalar> {
        let deepest = (self.n[self.m_max + 1] - 1) as u32;
        let mut sums = vec![ExactScalar::ZERO; self.m_max + 1];
        let add = |sums: &mut Vec<ExactScalar>, level: u32, va: ExactScalar, len: ExactScalar| {
            for m in 0..=self.m_max {
                let wv = self.envelope_value(m, level as usize);
                if !wv.is_zero() {
                    sums[m] = sums[m] + va * wv * len;
                }
            }
        };
        for (lo, hi, va) in xs.blocks() {
            if va.is_zero() {
                continue;
            }
            let mut seg_hi = hi.clone();
            let mut k = dyadic_level(hi, deepest);
            loop {
                if k >= deepest {
                    // constant zone: finish the block in one piece
                    let len = ratio_to_exact(&seg_hi.sub_fast(&lo));
                    add(&mut sums, deepest, va, len);
                    break;
                }
                let cut = Time::dyadic(k + 1);
                if cut <= lo {
                    let len = ratio_to_exact(&seg_hi.sub_fast(&lo));
                    add(&mut sums, k, va, len);
                    break;
                }
                let len = ratio_to_exact(&seg_hi.sub_fast(&cut));
                add(&mut sums, k, va, len);
                seg_hi = cut;
                k += 1;
            }
        }
        sums
    }

    /// Certified bracket for `b^(-1/2) int_0^b dt/psi` at `b = 2^-j`.
    pub fn chi_pairing_bracket(&self, j: u32, blocks: u32, pieces: u32) -> Bracket {
        let inv = |t: &Time| self.psi.eval_time(t).recip();
        let mut acc = Bracket::ZERO;
        for i in j..j + blocks {
            acc = acc.add(decreasing_bracket(&inv, &Time::dyadic(i + 1), &Time::dyadic(i), pieces));
        }
        let tail = inv_psi_integral_tail((j + blocks) as usize);
        let with_tail = Bracket { lo: acc.lo, hi: acc.hi + tail };
        with_tail.scale(ExactScalar::exp2(j as f64 / 2.0))
    }

    /// Certified bracket for `int_0^1 w_m(t) dt/psi(t)`.
    pub fn w_pairing_bracket(&self, m: usize, pieces: u32) -> Bracket {
        let inv = |t: &Time| self.psi.eval_time(t).recip();
        let (lo, hi) = (self.n[m], self.n[m + 1]);
        let last = hi - 1;
        let mut acc = Bracket::ZERO;
        for k in lo..last {
            let blk = decreasing_bracket(&inv, &Time::dyadic(k as u32 + 1), &Time::dyadic(k as u32), pieces);
            acc = acc.add(blk.scale(self.b[k]));
        }
        // final block (0, 2^-last] at height b_last: a few more dyadic blocks
        // numerically, then the closed-form tail
        let extra = 40u32;
        let mut fin = Bracket::ZERO;
        for k in last as u32..last as u32 + extra {
            fin = fin.add(decreasing_bracket(&inv, &Time::dyadic(k + 1), &Time::dyadic(k), pieces));
        }
        fin.hi = fin.hi + inv_psi_integral_tail(last + extra as usize);
        acc.add(fin.scale(self.b[last]))
    }

    /// Upper step discretization of min(1/psi, 1/psi(2^-depth)) on the dyadic
    /// grid.
    pub fn clamped_inv_psi(&self, depth: u32) -> StepFunction {
        let mut cuts = Vec::with_capacity(depth as usize + 1);
        let mut vals = Vec::with_capacity(depth as usize + 1);
        cuts.push(Time::dyadic(depth));
        vals.push(self.psi.eval_time(&Time::dyadic(depth)).recip());
        for j in (0..depth).rev() {
            // sup of 1/psi on (2^-j-1, 2^-j] sits at the left endpoint
            cuts.push(Time::dyadic(j));
            vals.push(self.psi.eval_time(&Time::dyadic(j + 1)).recip());
        }
        StepFunction::from_exact_parts(cuts, vals).expect("dyadic grid is valid")
    }

    fn sample_at(&self, index: u64, seed: u64) -> SampleRecord {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index + 1);
        let parts = self.m_max + 1;
        let coeffs: Vec<f64> = if index % 4 == 3 {
            // sparse one-hot draw
            let hot = rng.gen_range(0..parts);
            let val: f64 = rng.gen();
            (0..parts).map(|m| if m == hot { val } else { 0.0 }).collect()
        } else {
            (0..parts).map(|_| rng.gen()).collect()
        };
        let max_coeff = coeffs.iter().cloned().fold(0.0, f64::max);
        let x = self.combine(&coeffs).expect("family parts are disjoint");
        let xs = x.rearrange();
        let quasi = quasi_norm_sorted(&xs, &self.psi);
        let marc = marcinkiewicz_sup_sorted(&xs, &self.theta, 24).value;
        let f = self.f_norm_sorted(&xs, 1e-9).value;
        SampleRecord { index, max_coeff, quasi, marc, f, ratio: marc / f }
    }

    /// Deterministic per-index sample records, in index order.
    #[cfg(feature = "parallel")]
    pub fn run_samples(&self, count: u64, seed: u64) -> Vec<SampleRecord> {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(|i| self.sample_at(i, seed)).collect()
    }

    #[cfg(not(feature = "parallel"))]
    pub fn run_samples(&self, count: u64, seed: u64) -> Vec<SampleRecord> {
        self.run_samples_seq(count, seed)
    }

    /// Sequential reference path for the sample loop.
    pub fn run_samples_seq(&self, count: u64, seed: u64) -> Vec<SampleRecord> {
        (0..count).map(|i| self.sample_at(i, seed)).collect()
    }

    /// Re-derive every quantitative bound of the construction and sample the
    /// span. `pass` is true only if every claim holds.
    pub fn verify(&self, samples: u64, seed: u64) -> CexReport {
        let mut claims = self.structure_claims();
        claims.extend(self.condition_claims());

        let records = self.run_samples(samples, seed);
        let (mut ratio_min, mut ratio_max) = (f64::MAX, f64::MIN);
        let mut quasi_excess = f64::MIN;
        let mut f_lower = f64::MAX;
        for r in &records {
            ratio_min = ratio_min.min(r.ratio);
            ratio_max = ratio_max.max(r.ratio);
            quasi_excess = quasi_excess.max(r.quasi / r.max_coeff - 1.0);
            f_lower = f_lower.min(r.f / (0.25 * r.max_coeff));
        }
        let spread = ratio_max / ratio_min;
        claims.push(claim("sample_quasi_le_max_coeff", ClaimKind::Le, quasi_excess, 1e-12));
        claims.push(claim("sample_f_ge_quarter_max_coeff", ClaimKind::Ge, f_lower, 1.0 - 1e-12));
        claims.push(claim("sample_ratio_spread", ClaimKind::Le, spread, RATIO_SPREAD_CAP));

        let pass = claims.iter().all(|c| c.pass);
        CexReport { m_max: self.m_max, samples, seed, ratio_min, ratio_max, spread, claims, pass }
    }

    /// Claims about the built objects themselves.
    pub fn structure_claims(&self) -> Vec<Claim> {
        let mut claims = Vec::new();

        // the defining pairing b_k psi(2^-k) = 1, in ulps of 1
        let max_ulp = (0..self.n[self.m_max + 1])
            .map(|k| {
                let p = (self.b[k] * self.psi.eval_time(&Time::dyadic(k as u32))).to_f64();
                (p - 1.0).abs() / f64::EPSILON
            })
            .fold(f64::MIN, f64::max);
        claims.push(claim("pairing_identity_max_ulp", ClaimKind::Le, max_ulp, 2.0));

        // window maximality: reciprocal sums fit below 1, next term overflows
        for m in 0..=self.m_max {
            let sum: f64 = (self.n[m]..self.n[m + 1]).map(|k| 1.0 / (k as f64 + 2.0)).sum();
            claims.push(claim(format!("window_sum_le_one[m={m}]"), ClaimKind::Le, sum, 1.0));
            claims.push(claim(
                format!("window_sum_maximal[m={m}]"),
                ClaimKind::Gt,
                sum + 1.0 / (self.n[m + 1] as f64 + 2.0),
                1.0,
            ));
        }

        // envelope L2 bounds and the simplified-form mass identities
        for m in 0..=self.m_max {
            claims.push(claim(format!("w_l2_ge_half[m={m}]"), ClaimKind::Ge, self.w_l2[m], 0.5));
            claims.push(claim(format!("w_l2_le_one[m={m}]"), ClaimKind::Le, self.w_l2[m], 1.0));
            // integral of v_m^2: each term b_k^2 2^-k-1 simplifies to 1/(2(k+2))
            let vsq = {
                let n = self.v[m].lp_norm(2.0);
                n * n
            };
            let simplified: f64 = (self.n[m]..self.n[m + 1]).map(|k| 0.5 / (k as f64 + 2.0)).sum();
            claims.push(claim(
                format!("v_mass_identity[m={m}]"),
                ClaimKind::Abs,
                vsq - simplified,
                1e-12,
            ));
        }

        // indicator pairings stay below 2 on a 64-point dyadic grid
        let chi_max = (0..64u32)
            .map(|j| self.chi_pairing_bracket(j, 48, 24).hi.to_f64())
            .fold(f64::MIN, f64::max);
        claims.push(claim("chi_pairing_max_le_two", ClaimKind::Le, chi_max, 2.0));

        // envelope pairings stay below 2
        for m in 0..=self.m_max {
            let hi = self.w_pairing_bracket(m, 24).hi.to_f64();
            claims.push(claim(format!("w_pairing_le_two[m={m}]"), ClaimKind::Le, hi, 2.0));
        }

        // the reciprocal weight lies in F with norm at most 4
        let depth = (self.n[self.m_max + 1] - 1) as u32;
        let recip = self.clamped_inv_psi(depth);
        let recip_f = self.f_norm(&recip, 1e-9);
        claims.push(claim("inv_psi_f_norm_le_four", ClaimKind::Le, recip_f.value, 4.0));

        // each part keeps F-norm at least 1/4 through its self-pairing
        for m in 0..=self.m_max {
            let f = self.f_norm(&self.v[m], 1e-9);
            claims.push(claim(format!("v_f_norm_ge_quarter[m={m}]"), ClaimKind::Ge, f.value, 0.25));
        }

        claims
    }

    /// The fundamental-function gap: the ratio vanishes, yet its lower
    /// dilation index is zero (with a positive-gap control pair).
    pub fn condition_claims(&self) -> Vec<Claim> {
        let half = GFun::pow(0.5).unwrap();
        let vr = vanishing_ratio(&self.psi, &half, &TrendConfig::default())
            .expect("the weight dominates t^(1/2)");
        let mut claims = vec![Claim {
            claim_id: "fundamental_ratio_vanishes".into(),
            kind: ClaimKind::Le,
            computed: vr.trace.last().copied().unwrap_or(f64::NAN),
            bound: 1.0,
            pass: vr.verdict == Verdict::Holds,
        }];
        let idx = positive_ratio_index(&self.psi, &half, &IndexConfig::default())
            .expect("index fit runs on the ratio");
        claims.push(Claim {
            claim_id: "fundamental_ratio_index_zero".into(),
            kind: ClaimKind::Le,
            computed: idx.gamma.unwrap_or(f64::NAN),
            bound: IndexConfig::default().threshold,
            pass: idx.verdict == Verdict::Fails,
        });
        let control = positive_ratio_index(
            &GFun::pow(0.25).unwrap(),
            &half,
            &IndexConfig::default(),
        )
        .expect("index fit runs on the control pair");
        claims.push(Claim {
            claim_id: "ratio_index_control_positive".into(),
            kind: ClaimKind::Ge,
            computed: control.gamma.unwrap_or(f64::NAN),
            bound: IndexConfig::default().threshold,
            pass: control.verdict == Verdict::Holds,
        });
        claims
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_sequence_starts_5_16() {
        let fam = CexFamily::build(2).unwrap();
        assert_eq!(&fam.window_starts()[..4], &[1, 5, 16, 46]);
    }

    #[test]
    fn pairing_identity_within_two_ulps() {
        let fam = CexFamily::build(3).unwrap();
        for k in 0..fam.window_starts()[4] {
            let p = (fam.coefficient(k) * fam.psi().eval_time(&Time::dyadic(k as u32))).to_f64();
            assert!((p - 1.0).abs() <= 2.0 * f64::EPSILON, "k={k}: {p}");
        }
        // k = 0 instance: b_0 = 2^(-1/2), psi(1) = sqrt(2)
        assert!((fam.coefficient(0).to_f64() - 2f64.powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn first_envelope_mass_matches_the_term_sum() {
        let fam = CexFamily::build(0).unwrap();
        let w0 = fam.envelope(0);
        // blocks at b_1..b_3 plus b_4 on (0, 2^-4]
        let sq = w0.lp_norm(2.0).powi(2);
        let want = 1.0 / 6.0 + 1.0 / 8.0 + 1.0 / 10.0 + 1.0 / 6.0;
        assert!((sq - want).abs() < 1e-12);
        assert!((w0.lp_norm(2.0) - 0.74722).abs() < 1e-5);
        // direct integral agrees with the blockwise closed form
        let integral = w0.integral().to_f64();
        let b = |k: usize| ((k + 2) as f64).powf(-0.5) * 2f64.powf(k as f64 / 2.0);
        let want_int = b(1) / 4.0 + b(2) / 8.0 + b(3) / 16.0 + b(4) / 16.0;
        assert!((integral - want_int).abs() < 1e-12);
    }

    #[test]
    fn parts_are_disjoint_and_below_envelopes() {
        let fam = CexFamily::build(3).unwrap();
        let ones = vec![1.0; 4];
        assert!(fam.combine(&ones).is_ok());
        for m in 0..=3usize {
            // v <= w pointwise: check at every block right endpoint
            for (_, hi, val) in fam.part(m).blocks() {
                assert!(val <= fam.envelope(m).value_at(hi));
            }
        }
    }

    #[test]
    fn combining_scales_each_window_by_its_coefficient() {
        let fam = CexFamily::build(1).unwrap();
        let x = fam.combine(&[2.0, 3.0]).unwrap();
        for m in 0..=1usize {
            let c = ExactScalar::from_f64(if m == 0 { 2.0 } else { 3.0 });
            for (_, hi, v) in fam.part(m).blocks() {
                if !v.is_zero() {
                    assert_eq!(x.value_at(hi), c * v);
                }
            }
        }
    }

    #[test]
    fn indicator_f_norm_is_sqrt_of_measure() {
        let fam = CexFamily::build(2).unwrap();
        for (p, q) in [(1u64, 4u64), (1, 2), (1, 1), (3, 8)] {
            let x = StepFunction::indicator(Time::rational(p, q).unwrap()).unwrap();
            let f = fam.f_norm(&x, 1e-9);
            let want = (p as f64 / q as f64).sqrt();
            assert!((f.value - want).abs() < 1e-9, "{p}/{q}: {} vs {want}", f.value);
        }
    }

    #[test]
    fn normalized_envelope_self_pairing_reaches_its_l2_norm() {
        let fam = CexFamily::build(2).unwrap();
        for m in 0..=2usize {
            let wbar = fam.envelope(m).scale(
                ExactScalar::from_f64(fam.envelope_l2(m)).recip(),
            );
            let f = fam.f_norm(&wbar, 1e-9);
            assert!(f.value >= fam.envelope_l2(m) - 1e-12, "m={m}");
        }
    }

    #[test]
    fn zero_coefficient_vector_gives_zero_norms() {
        let fam = CexFamily::build(1).unwrap();
        let v = fam.combine(&[0.0, 0.0]).unwrap();
        assert_eq!(v, StepFunction::zero());
        assert_eq!(fam.f_norm(&v, 1e-9).value, 0.0);
    }

    #[test]
    fn depth_budget_is_enforced() {
        assert!(matches!(CexFamily::build(12), Err(Error::Depth(_))));
    }

    #[test]
    fn small_verification_passes() {
        let fam = CexFamily::build(2).unwrap();
        let report = fam.verify(40, DEFAULT_SEED);
        for c in &report.claims {
            assert!(c.pass, "claim {} failed: {} vs {}", c.claim_id, c.computed, c.bound);
        }
        assert!(report.pass);
        assert!(report.spread <= RATIO_SPREAD_CAP);
    }

    #[test]
    fn envelope_pairing_sweep_matches_generic_inner_products() {
        let fam = CexFamily::build(2).unwrap();
        for seed in [1u64, 2, 9] {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let coeffs: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
            let xs = fam.combine(&coeffs).unwrap().rearrange();
            let fast = fam.envelope_pairings(&xs);
            let refs: Vec<&StepFunction> = fam.w.iter().collect();
            let slow = xs.inner_products(&refs);
            for (a, b) in fast.iter().zip(&slow) {
                let (a, b) = (a.to_f64(), b.to_f64());
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-30), "{a} vs {b}");
            }
        }
        // indicators crossing ladder boundaries exactly
        for j in [0u32, 1, 4, 15, 16, 40] {
            let x = StepFunction::indicator(Time::dyadic(j)).unwrap();
            let xs = x.rearrange();
            let fast = fam.envelope_pairings(&xs);
            let refs: Vec<&StepFunction> = fam.w.iter().collect();
            let slow = xs.inner_products(&refs);
            for (a, b) in fast.iter().zip(&slow) {
                let (a, b) = (a.to_f64(), b.to_f64());
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-30), "j={j}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn samples_are_order_independent_and_seeded() {
        let fam = CexFamily::build(1).unwrap();
        let a = fam.run_samples(16, 7);
        let b = fam.run_samples_seq(16, 7);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.index, y.index);
            assert_eq!(x.quasi, y.quasi);
            assert_eq!(x.marc, y.marc);
            assert_eq!(x.f, y.f);
        }
        let c = fam.run_samples(16, 8);
        assert!(a.iter().zip(&c).any(|(x, y)| x.quasi != y.quasi));
    }
}
