//! Exact calculus for finitely-valued functions on (0, 1].
//!
//! A [`StepFunction`] holds strictly increasing breakpoints
//! `0 = t_0 < t_1 < ... < t_K = 1` as exact rationals and the value taken on
//! each half-open block `(t_{i-1}, t_i]`. Distribution functions,
//! rearrangements and integrals are computed with rational interval
//! arithmetic, so equimeasurability and mass-preservation hold exactly, not
//! just to rounding.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExactScalar;

/// A point of [0, 1], exact.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Time(BigRational);

impl Time {
    pub fn zero() -> Self {
        Time(BigRational::zero())
    }

    pub fn one() -> Self {
        Time(BigRational::one())
    }

    /// 2^-e.
    pub fn dyadic(e: u32) -> Self {
        Time(BigRational::new(BigInt::one(), BigInt::one() << e as usize))
    }

    pub fn rational(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        if p > q {
            return Err(Error::Domain(format!("{p}/{q} lies outside [0,1]")));
        }
        Ok(Time(BigRational::new(BigInt::from(p), BigInt::from(q))))
    }

    /// Exact conversion; every finite f64 is a dyadic rational.
    pub fn from_f64(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("{t} lies outside [0,1]")));
        }
        BigRational::from_float(t)
            .map(Time)
            .ok_or_else(|| Error::Domain("non-finite breakpoint".into()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Some(e) when the point is exactly 2^-e.
    pub fn dyadic_exponent(&self) -> Option<u32> {
        if !self.0.numer().is_one() {
            return None;
        }
        self.den_pow2().map(|e| e as u32)
    }

    /// Some(e) when the denominator is exactly 2^e (numerator arbitrary).
    pub fn den_pow2(&self) -> Option<u64> {
        let d = self.0.denom();
        let bits = d.bits();
        match d.trailing_zeros() {
            Some(tz) if tz + 1 == bits => Some(tz),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn from_rational(r: BigRational) -> Self {
        Time(r)
    }

    /// Nearest extended-range scalar; relative error below 2^-52.
    pub fn to_exact(&self) -> ExactScalar {
        ratio_to_exact(&self.0)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_exact().to_f64()
    }

    pub fn log2(&self) -> f64 {
        self.to_exact().log2()
    }

    pub fn sub(&self, o: &Time) -> Time {
        Time(&self.0 - &o.0)
    }

    pub fn add(&self, o: &Time) -> Time {
        Time(&self.0 + &o.0)
    }

    /// `self - o` with a shift-only path when both denominators are powers of
    /// two; the generic rational subtraction pays two big gcds.
    pub fn sub_fast(&self, o: &Time) -> BigRational {
        match (self.den_pow2(), o.den_pow2()) {
            (Some(a), Some(b)) => {
                let d = a.max(b);
                let num = (self.0.numer() << (d - a)) - (o.0.numer() << (d - b));
                debug_assert!(!num.is_negative());
                dyadic_rational(num, d)
            }
            _ => &self.0 - &o.0,
        }
    }
}

/// Top-64-bit conversion of a nonnegative rational to an `ExactScalar`.
pub(crate) fn ratio_to_exact(r: &BigRational) -> ExactScalar {
    if r.is_zero() {
        return ExactScalar::ZERO;
    }
    let neg = r.is_negative();
    let p = r.numer().abs();
    let q = r.denom().clone();
    let (ph, pe) = top_bits(&p);
    let (qh, qe) = top_bits(&q);
    let v = ExactScalar::from_f64(ph as f64 / qh as f64).shift(pe - qe);
    if neg {
        -v
    } else {
        v
    }
}

fn top_bits(x: &BigInt) -> (u64, i64) {
    let bits = x.bits() as i64;
    if bits <= 63 {
        (x.to_u64().unwrap(), 0)
    } else {
        let sh = bits - 63;
        ((x >> (sh as u64)).to_u64().unwrap(), sh)
    }
}

/// `num / 2^exp` in reduced form, using shifts instead of a general gcd.
fn dyadic_rational(num: BigInt, exp: u64) -> BigRational {
    if num.is_zero() {
        return BigRational::zero();
    }
    let tz = num.trailing_zeros().unwrap_or(0).min(exp);
    BigRational::new_raw(num >> tz, BigInt::one() << (exp - tz))
}

/// On-disk form of a single breakpoint.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BreakpointRepr {
    Dyadic { dyadic: u32 },
    Rational { rational: (u64, u64) },
    Real(f64),
}

#[derive(Serialize, Deserialize)]
struct StepFnRepr {
    breakpoints: Vec<BreakpointRepr>,
    values: Vec<f64>,
}

/// Finitely-valued function on (0, 1]: value `vals[i]` on `(cuts[i-1], cuts[i]]`
/// with an implicit leading cut at 0 and `cuts.last() == 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    cuts: Vec<Time>,
    vals: Vec<ExactScalar>,
}

impl StepFunction {
    pub fn new(cuts: Vec<Time>, vals: Vec<f64>) -> Result<Self> {
        for v in &vals {
            if !v.is_finite() {
                return Err(Error::Domain("non-finite value".into()));
            }
        }
        Self::from_exact_parts(cuts, vals.into_iter().map(ExactScalar::from_f64).collect())
    }

    pub fn from_exact_parts(cuts: Vec<Time>, vals: Vec<ExactScalar>) -> Result<Self> {
        if cuts.is_empty() || cuts.len() != vals.len() {
            return Err(Error::Domain("breakpoint/value length mismatch".into()));
        }
        if cuts.last().unwrap() != &Time::one() {
            return Err(Error::Domain("last breakpoint must be 1".into()));
        }
        let mut prev = Time::zero();
        for c in &cuts {
            if c <= &prev {
                return Err(Error::Domain("breakpoints must increase strictly from 0".into()));
            }
            prev = c.clone();
        }
        Ok(Self::canonical(cuts, vals))
    }

    fn canonical(cuts: Vec<Time>, vals: Vec<ExactScalar>) -> Self {
        let mut cc: Vec<Time> = Vec::with_capacity(cuts.len());
        let mut vv: Vec<ExactScalar> = Vec::with_capacity(vals.len());
        for (c, v) in cuts.into_iter().zip(vals) {
            if let Some(last) = vv.last() {
                if *last == v {
                    *cc.last_mut().unwrap() = c;
                    continue;
                }
            }
            cc.push(c);
            vv.push(v);
        }
        StepFunction { cuts: cc, vals: vv }
    }

    /// The zero function.
    pub fn zero() -> Self {
        StepFunction { cuts: vec![Time::one()], vals: vec![ExactScalar::ZERO] }
    }

    /// Indicator of (0, a].
    pub fn indicator(a: Time) -> Result<Self> {
        Self::scaled_indicator(ExactScalar::ONE, a)
    }

    /// c on (0, a], zero after.
    pub fn scaled_indicator(c: ExactScalar, a: Time) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Domain("indicator of empty interval".into()));
        }
        if a == Time::one() {
            Self::from_exact_parts(vec![Time::one()], vec![c])
        } else {
            Self::from_exact_parts(vec![a, Time::one()], vec![c, ExactScalar::ZERO])
        }
    }

    pub fn constant(c: f64) -> Self {
        StepFunction { cuts: vec![Time::one()], vals: vec![ExactScalar::from_f64(c)] }
    }

    pub fn block_count(&self) -> usize {
        self.vals.len()
    }

    /// Blocks as `(lo, hi, value)` with `lo` exclusive and `hi` inclusive.
    pub fn blocks(&self) -> impl Iterator<Item = (Time, &Time, ExactScalar)> + '_ {
        let lows = std::iter::once(Time::zero()).chain(self.cuts.iter().cloned());
        lows.zip(self.cuts.iter()).zip(self.vals.iter()).map(|((lo, hi), &v)| (lo, hi, v))
    }

    pub fn value_at(&self, t: &Time) -> ExactScalar {
        assert!(!t.is_zero() && t <= &Time::one(), "value_at outside (0,1]");
        let idx = self.cuts.partition_point(|c| c < t);
        self.vals[idx]
    }

    pub fn max_abs(&self) -> ExactScalar {
        self.vals.iter().map(|v| v.abs()).max().unwrap_or(ExactScalar::ZERO)
    }

    pub fn abs(&self) -> Self {
        Self::canonical(self.cuts.clone(), self.vals.iter().map(|v| v.abs()).collect())
    }

    pub fn scale(&self, c: ExactScalar) -> Self {
        Self::canonical(self.cuts.clone(), self.vals.iter().map(|&v| v * c).collect())
    }

    /// Lebesgue measure of `{t : |x(t)| > tau}`, exact.
    pub fn distribution(&self, tau: f64) -> BigRational {
        assert!(tau > 0.0, "distribution threshold must be positive");
        let cut = ExactScalar::from_f64(tau);
        let mut total = BigRational::zero();
        for (lo, hi, v) in self.blocks() {
            if v.abs() > cut {
                total += hi.sub_fast(&lo);
            }
        }
        total
    }

    /// Decreasing rearrangement of |x|: sort blocks by |value| and pack them
    /// against 0. Equimeasurable with |x| by construction.
    pub fn rearrange(&self) -> StepFunction {
        let mut groups: BTreeMap<ExactScalar, BigRational> = BTreeMap::new();
        for (lo, hi, v) in self.blocks() {
            *groups.entry(v.abs()).or_insert_with(BigRational::zero) += hi.sub_fast(&lo);
        }
        let mut cuts = Vec::with_capacity(groups.len());
        let mut vals = Vec::with_capacity(groups.len());
        // when every length is dyadic, accumulate integer numerators over a
        // common power-of-two denominator; a general rational cumsum pays a
        // gcd per step
        let common: Option<u64> = groups
            .values()
            .map(|l| {
                let bits = l.denom().bits();
                (l.denom().trailing_zeros() == Some(bits - 1)).then_some(bits - 1)
            })
            .try_fold(0u64, |m, e| e.map(|e| m.max(e)));
        match common {
            Some(d) => {
                let mut acc = BigInt::zero();
                for (v, len) in groups.into_iter().rev() {
                    let dl = d - (len.denom().bits() - 1);
                    acc += len.numer() << dl;
                    cuts.push(Time(dyadic_rational(acc.clone(), d)));
                    vals.push(v);
                }
            }
            None => {
                let mut acc = BigRational::zero();
                for (v, len) in groups.into_iter().rev() {
                    acc += len;
                    cuts.push(Time(acc.clone()));
                    vals.push(v);
                }
            }
        }
        debug_assert_eq!(cuts.last(), Some(&Time::one()));
        StepFunction { cuts, vals }
    }

    /// Exact integral over (a, b]. Terms are grouped by value and summed in
    /// descending value order, so equal multisets of blocks integrate to
    /// bitwise-identical results.
    pub fn integrate(&self, a: &Time, b: &Time) -> ExactScalar {
        assert!(a <= b, "integrate with a > b");
        let mut groups: BTreeMap<ExactScalar, BigRational> = BTreeMap::new();
        for (lo, hi, v) in self.blocks() {
            if v.is_zero() {
                continue;
            }
            let lo_r = lo.as_rational().clone().max(a.as_rational().clone());
            let hi_r = hi.as_rational().clone().min(b.as_rational().clone());
            if hi_r > lo_r {
                *groups.entry(v).or_insert_with(BigRational::zero) += hi_r - lo_r;
            }
        }
        let mut sum = ExactScalar::ZERO;
        for (v, len) in groups.into_iter().rev() {
            sum = sum + v * ratio_to_exact(&len);
        }
        sum
    }

    pub fn integral(&self) -> ExactScalar {
        self.integrate(&Time::zero(), &Time::one())
    }

    /// (sum |v|^p len)^(1/p); `p = f64::INFINITY` gives the sup norm.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p == f64::INFINITY {
            return self.max_abs().to_f64();
        }
        assert!(p >= 1.0, "lp_norm needs p >= 1");
        let mut groups: BTreeMap<ExactScalar, BigRational> = BTreeMap::new();
        for (lo, hi, v) in self.blocks() {
            if v.is_zero() {
                continue;
            }
            *groups.entry(v.abs()).or_insert_with(BigRational::zero) += hi.sub_fast(&lo);
        }
        let mut sum = ExactScalar::ZERO;
        for (v, len) in groups.into_iter().rev() {
            let term = if p == 1.0 { v } else { v.powf(p) };
            sum = sum + term * ratio_to_exact(&len);
        }
        if p == 1.0 {
            sum.to_f64()
        } else if p == 2.0 {
            sum.sqrt().to_f64()
        } else {
            sum.powf(1.0 / p).to_f64()
        }
    }

    /// Integral of the pointwise product of two step functions, exact blockwise.
    pub fn inner_product(&self, other: &StepFunction) -> ExactScalar {
        self.inner_products(&[other])[0]
    }

    /// Integrals of the pointwise product against several functions in one
    /// merged sweep, sharing the exact segment lengths.
    pub fn inner_products(&self, others: &[&StepFunction]) -> Vec<ExactScalar> {
        // merge the others' cut lists first (usually coarse), then sweep them
        // against our own sorted cuts two-way
        let mut other_cuts: Vec<&Time> = others.iter().flat_map(|o| o.cuts.iter()).collect();
        other_cuts.sort_unstable();
        other_cuts.dedup();
        let mut sums = vec![ExactScalar::ZERO; others.len()];
        let mut prev: Option<&Time> = None;
        let mut ia = 0usize;
        let mut io = 0usize;
        let mut ib = vec![0usize; others.len()];
        // both cut lists end at 1, so the two-way merge consumes them together
        loop {
            let c: &Time = match (self.cuts.get(ia), other_cuts.get(io)) {
                (None, None) => break,
                (Some(a), None) => a,
                (None, Some(&o)) => o,
                (Some(a), Some(&o)) => {
                    if a <= o {
                        a
                    } else {
                        o
                    }
                }
            };
            let va = self.vals[ia];
            if !va.is_zero() {
                let mut len = ExactScalar::ZERO;
                let mut have_len = false;
                for (k, o) in others.iter().enumerate() {
                    while o.cuts[ib[k]] < *c {
                        ib[k] += 1;
                    }
                    let vb = o.vals[ib[k]];
                    if !vb.is_zero() {
                        if !have_len {
                            len = match prev {
                                Some(p) => ratio_to_exact(&c.sub_fast(p)),
                                None => c.to_exact(),
                            };
                            have_len = true;
                        }
                        sums[k] = sums[k] + va * vb * len;
                    }
                }
            }
            prev = Some(c);
            if ia < self.cuts.len() && self.cuts[ia] == *c {
                ia += 1;
            }
            if io < other_cuts.len() && *other_cuts[io] == *c {
                io += 1;
            }
        }
        sums
    }

    /// Measure of `{t : x(t) != 0}`, exact.
    pub fn support_measure(&self) -> BigRational {
        let mut total = BigRational::zero();
        for (lo, hi, v) in self.blocks() {
            if !v.is_zero() {
                total += hi.sub_fast(&lo);
            }
        }
        total
    }

    pub fn to_json_string(&self) -> String {
        let repr = StepFnRepr {
            breakpoints: self
                .cuts
                .iter()
                .map(|c| match c.dyadic_exponent() {
                    Some(e) => BreakpointRepr::Dyadic { dyadic: e },
                    None => match (c.as_rational().numer().to_u64(), c.as_rational().denom().to_u64()) {
                        (Some(p), Some(q)) => BreakpointRepr::Rational { rational: (p, q) },
                        _ => BreakpointRepr::Real(c.to_f64()),
                    },
                })
                .collect(),
            values: self.vals.iter().map(|v| v.to_f64()).collect(),
        };
        serde_json::to_string_pretty(&repr).expect("step function serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let repr: StepFnRepr =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("step function file: {e}")))?;
        let cuts = repr
            .breakpoints
            .into_iter()
            .map(|b| match b {
                BreakpointRepr::Dyadic { dyadic } => Ok(Time::dyadic(dyadic)),
                BreakpointRepr::Rational { rational: (p, q) } => Time::rational(p, q),
                BreakpointRepr::Real(t) => Time::from_f64(t),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(cuts, repr.values)
    }
}

/// Pointwise sum of `coeffs[i] * parts[i]` for parts with pairwise disjoint
/// supports; rejects any overlap of positive measure.
pub fn disjoint_sum(coeffs: &[f64], parts: &[StepFunction]) -> Result<StepFunction> {
    if coeffs.len() != parts.len() {
        return Err(Error::Domain("coefficient/part length mismatch".into()));
    }
    if parts.is_empty() {
        return Ok(StepFunction::zero());
    }
    let coeffs: Vec<ExactScalar> = coeffs.iter().map(|&c| ExactScalar::from_f64(c)).collect();
    let mut cuts: BTreeSet<Time> = BTreeSet::new();
    for p in parts {
        cuts.extend(p.cuts.iter().cloned());
    }
    let mut idx = vec![0usize; parts.len()];
    let mut out_cuts = Vec::with_capacity(cuts.len());
    let mut out_vals = Vec::with_capacity(cuts.len());
    for c in cuts {
        let mut val = ExactScalar::ZERO;
        let mut holders = 0usize;
        for (pi, p) in parts.iter().enumerate() {
            while p.cuts[idx[pi]] < c {
                idx[pi] += 1;
            }
            let v = p.vals[idx[pi]];
            if !v.is_zero() {
                holders += 1;
                if holders > 1 {
                    return Err(Error::Overlap(format!(
                        "two parts are nonzero on a block ending at {}",
                        c.to_f64()
                    )));
                }
                val = coeffs[pi] * v;
            }
        }
        out_cuts.push(c);
        out_vals.push(val);
    }
    StepFunction::from_exact_parts(out_cuts, out_vals)
}
