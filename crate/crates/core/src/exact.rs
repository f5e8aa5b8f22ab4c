//! Extended-range scalars `m * 2^e` with an explicit integer exponent.
//!
//! Block widths like 2^-2500 paired with values like 2^1200 appear as soon as
//! the dyadic families here get deep, and their products are ordinary-sized
//! numbers. `ExactScalar` keeps the mantissa normalized to [1, 2) and carries
//! the binary exponent separately, so those products and quotients never
//! overflow or underflow and comparisons stay exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `m * 2^e` with `|m|` in [1, 2), or exactly zero (`m == 0`, `e == 0`).
#[derive(Clone, Copy, Debug)]
pub struct ExactScalar {
    m: f64,
    e: i64,
}

const EXP_MASK: u64 = 0x7ff0_0000_0000_0000;
const MANT_SIGN_MASK: u64 = 0x800f_ffff_ffff_ffff;

/// 2^i as f64, exact; `i` must lie in [-1022, 1023].
fn pow2(i: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&i));
    f64::from_bits(((i + 1023) as u64) << 52)
}

impl ExactScalar {
    pub const ZERO: ExactScalar = ExactScalar { m: 0.0, e: 0 };
    pub const ONE: ExactScalar = ExactScalar { m: 1.0, e: 0 };

    fn normalize(m: f64, e: i64) -> Self {
        if m == 0.0 {
            return Self::ZERO;
        }
        assert!(m.is_finite(), "non-finite mantissa");
        let bits = m.to_bits();
        let raw = ((bits & EXP_MASK) >> 52) as i64;
        if raw == 0 {
            // subnormal mantissa: rescale and retry
            return Self::normalize(m * pow2(200), e - 200);
        }
        let mm = f64::from_bits((bits & MANT_SIGN_MASK) | (1023u64 << 52));
        ExactScalar { m: mm, e: e + raw - 1023 }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::normalize(x, 0)
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_f64(k as f64)
    }

    /// `m * 2^e` from raw parts.
    pub fn from_parts(m: f64, e: i64) -> Self {
        Self::normalize(m, e)
    }

    /// 2^x with the fractional part applied to the mantissa only.
    pub fn exp2(x: f64) -> Self {
        let i = x.floor();
        Self::normalize((x - i).exp2(), i as i64)
    }

    pub fn is_zero(self) -> bool {
        self.m == 0.0
    }

    pub fn is_positive(self) -> bool {
        self.m > 0.0
    }

    pub fn mantissa(self) -> f64 {
        self.m
    }

    pub fn exponent(self) -> i64 {
        self.e
    }

    pub fn abs(self) -> Self {
        ExactScalar { m: self.m.abs(), e: self.e }
    }

    /// Multiply by 2^k, exact.
    pub fn shift(self, k: i64) -> Self {
        if self.is_zero() {
            self
        } else {
            ExactScalar { m: self.m, e: self.e + k }
        }
    }

    pub fn to_f64(self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if self.e > 1023 {
            return f64::INFINITY.copysign(self.m);
        }
        if self.e >= -1022 {
            return self.m * pow2(self.e as i32);
        }
        if self.e >= -1080 {
            // lands in the subnormal range; scale in two exact steps
            return (self.m * pow2(-1000)) * pow2((self.e + 1000) as i32);
        }
        0.0f64.copysign(self.m)
    }

    /// log2 of a positive value, as f64.
    pub fn log2(self) -> f64 {
        assert!(self.m > 0.0, "log2 of non-positive value");
        self.e as f64 + self.m.log2()
    }

    pub fn recip(self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::normalize(1.0 / self.m, -self.e)
    }

    pub fn sqrt(self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        assert!(self.m > 0.0, "sqrt of negative value");
        let (m, e) = if self.e.rem_euclid(2) == 0 {
            (self.m, self.e)
        } else {
            (self.m * 2.0, self.e - 1)
        };
        // m in [1,4), e even: sqrt(m) in [1,2) needs no renormalization
        ExactScalar { m: m.sqrt(), e: e.div_euclid(2) }
    }

    /// Real power of a positive value.
    pub fn powf(self, p: f64) -> Self {
        if self.is_zero() {
            assert!(p > 0.0, "0^p with p <= 0");
            return Self::ZERO;
        }
        if p == 1.0 {
            return self;
        }
        if p == 2.0 {
            return self * self;
        }
        assert!(self.m > 0.0, "powf of negative value");
        let ep = self.e as f64 * p;
        let ei = ep.floor();
        Self::normalize(self.m.powf(p) * (ep - ei).exp2(), ei as i64)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: ExactScalar) -> ExactScalar {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = hi.e - lo.e;
        if d > 120 {
            return hi;
        }
        // scaling by 2^-d is exact for d <= 120 since |lo.m| >= 1
        ExactScalar::normalize(hi.m + lo.m * pow2(-(d as i32)), hi.e)
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: ExactScalar) -> ExactScalar {
        self + (-o)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { m: -self.m, e: self.e }
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: ExactScalar) -> ExactScalar {
        if self.is_zero() || o.is_zero() {
            return ExactScalar::ZERO;
        }
        ExactScalar::normalize(self.m * o.m, self.e + o.e)
    }
}

impl Div for ExactScalar {
    type Output = ExactScalar;
    fn div(self, o: ExactScalar) -> ExactScalar {
        assert!(!o.is_zero(), "division by zero");
        if self.is_zero() {
            return ExactScalar::ZERO;
        }
        ExactScalar::normalize(self.m / o.m, self.e - o.e)
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, o: &Self) -> bool {
        self.m == o.m && (self.e == o.e || self.m == 0.0)
    }
}

impl Eq for ExactScalar {}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, o: &Self) -> Ordering {
        let sa = sign_class(self.m);
        let sb = sign_class(o.m);
        if sa != sb {
            return sa.cmp(&sb);
        }
        match sa {
            0 => Ordering::Equal,
            1 => (self.e, self.m).partial_cmp(&(o.e, o.m)).unwrap(),
            _ => (o.e, o.m).partial_cmp(&(self.e, self.m)).unwrap(),
        }
    }
}

fn sign_class(m: f64) -> i8 {
    if m > 0.0 {
        1
    } else if m < 0.0 {
        -1
    } else {
        0
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if (-900..=900).contains(&self.e) {
            write!(f, "{}", self.to_f64())
        } else {
            write!(f, "{}*2^{}", self.m, self.e)
        }
    }
}

impl From<f64> for ExactScalar {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_preserves_ordinary_values() {
        for &v in &[1.0, -1.0, 0.5, 3.75, 1e300, 1e-300, -2.5e-17] {
            assert_eq!(ExactScalar::from_f64(v).to_f64(), v);
        }
        assert_eq!(ExactScalar::from_f64(0.0).to_f64(), 0.0);
    }

    #[test]
    fn mantissa_is_normalized() {
        for &v in &[1.0, 2.0, 0.25, 100.0, 0.001, -7.0] {
            let s = ExactScalar::from_f64(v);
            assert!((1.0..2.0).contains(&s.mantissa().abs()), "m = {}", s.mantissa());
        }
    }

    #[test]
    fn deep_products_stay_representable() {
        // 2^-2500 * 2^1200 = 2^-1300, then squared back into range
        let tiny = ExactScalar::ONE.shift(-2500);
        let big = ExactScalar::from_f64(1.5).shift(1200);
        let p = tiny * big;
        assert_eq!(p.exponent(), -1300 + 0);
        let q = p * p * ExactScalar::ONE.shift(2600);
        assert!((q.to_f64() - 2.25).abs() < 1e-15);
    }

    #[test]
    fn add_aligns_exponents() {
        let a = ExactScalar::from_f64(3.0);
        let b = ExactScalar::from_f64(0.125);
        assert_eq!((a + b).to_f64(), 3.125);
        // within the 53-bit window the small summand survives exactly
        let c = ExactScalar::ONE.shift(-30);
        assert_eq!((a + c - a), c);
        // far below the window it is absorbed
        let d = ExactScalar::ONE.shift(-300);
        assert_eq!(a + d, a);
    }

    #[test]
    fn cancellation_yields_exact_zero() {
        let a = ExactScalar::from_f64(1.75).shift(-700);
        assert!((a - a).is_zero());
    }

    #[test]
    fn sqrt_handles_odd_exponents() {
        let x = ExactScalar::from_parts(1.0, -7); // 2^-7
        let r = x.sqrt();
        assert!((r.log2() - (-3.5)).abs() < 1e-15);
        let y = ExactScalar::from_f64(9.0);
        assert_eq!(y.sqrt().to_f64(), 3.0);
    }

    #[test]
    fn powf_matches_f64_in_range() {
        let x = ExactScalar::from_f64(0.3);
        assert!((x.powf(0.7).to_f64() - 0.3f64.powf(0.7)).abs() < 1e-16);
    }

    #[test]
    fn ordering_is_total_on_mixed_magnitudes() {
        let mut v = vec![
            ExactScalar::from_f64(-2.0),
            ExactScalar::ZERO,
            ExactScalar::ONE.shift(-900),
            ExactScalar::from_f64(1.5),
            ExactScalar::from_f64(1.5).shift(800),
        ];
        v.sort();
        let f: Vec<f64> = v.iter().map(|s| s.log2x()).collect();
        assert!(f.windows(2).all(|w| w[0] <= w[1]));
    }

    impl ExactScalar {
        // signed log-scale key for the ordering test only
        fn log2x(self) -> f64 {
            if self.is_zero() {
                0.0
            } else if self.m > 0.0 {
                1e6 + self.log2()
            } else {
                -1e6 - self.abs().log2()
            }
        }
    }
}
