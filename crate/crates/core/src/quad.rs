//! Certified brackets for integrals of monotone integrands.
//!
//! On an interval where the integrand is known to be monotone, lower and
//! upper Riemann sums over an equal subdivision bracket the integral exactly;
//! no error model is needed. Everything runs in extended-range arithmetic so
//! the blocks may sit arbitrarily deep in (0, 1].

use num_rational::BigRational;
use num_traits::FromPrimitive;

use crate::exact::ExactScalar;
use crate::stepfn::{ratio_to_exact, Time};

/// Certified enclosure `lo <= integral <= hi`.
#[derive(Clone, Copy, Debug)]
pub struct Bracket {
    pub lo: ExactScalar,
    pub hi: ExactScalar,
}

impl Bracket {
    pub const ZERO: Bracket = Bracket { lo: ExactScalar::ZERO, hi: ExactScalar::ZERO };

    pub fn add(self, o: Bracket) -> Bracket {
        Bracket { lo: self.lo + o.lo, hi: self.hi + o.hi }
    }

    pub fn scale(self, c: ExactScalar) -> Bracket {
        debug_assert!(!c.is_positive() || c.is_positive());
        Bracket { lo: self.lo * c, hi: self.hi * c }
    }

    pub fn width(self) -> ExactScalar {
        self.hi - self.lo
    }
}

/// Bracket the integral of a decreasing positive integrand over `(lo, hi]`
/// with `pieces` equal subintervals.
pub fn decreasing_bracket(
    f: &dyn Fn(&Time) -> ExactScalar,
    lo: &Time,
    hi: &Time,
    pieces: u32,
) -> Bracket {
    assert!(lo < hi && pieces > 0);
    let span = hi.as_rational() - lo.as_rational();
    let step = &span / BigRational::from_u32(pieces).unwrap();
    let step_x = ratio_to_exact(&step);
    let mut sum_left = ExactScalar::ZERO; // upper sum for a decreasing f
    let mut sum_right = ExactScalar::ZERO;
    let mut left = lo.clone();
    for i in 0..pieces {
        let right = if i + 1 == pieces {
            hi.clone()
        } else {
            Time::from_rational(left.as_rational() + &step)
        };
        sum_left = sum_left + f(&left);
        sum_right = sum_right + f(&right);
        left = right;
    }
    Bracket { lo: sum_right * step_x, hi: sum_left * step_x }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets_enclose_a_known_integral() {
        // integral of 1/sqrt(t) over (1/4, 1] is 2 - 1 = 1
        let f = |t: &Time| t.to_exact().powf(-0.5);
        let b = decreasing_bracket(&f, &Time::dyadic(2), &Time::one(), 512);
        assert!(b.lo.to_f64() <= 1.0 && 1.0 <= b.hi.to_f64());
        assert!(b.width().to_f64() < 5e-3);
    }

    #[test]
    fn bracket_width_halves_with_doubling() {
        let f = |t: &Time| t.to_exact().powf(-0.5);
        let w1 = decreasing_bracket(&f, &Time::dyadic(3), &Time::dyadic(2), 64).width().to_f64();
        let w2 = decreasing_bracket(&f, &Time::dyadic(3), &Time::dyadic(2), 128).width().to_f64();
        assert!(w2 < 0.6 * w1);
    }

    #[test]
    fn deep_blocks_stay_in_range() {
        let f = |t: &Time| t.to_exact().powf(-0.5);
        let b = decreasing_bracket(&f, &Time::dyadic(901), &Time::dyadic(900), 8);
        // integral of t^(-1/2) over (2^-901, 2^-900] = 2(2^-450 - 2^-450.5)
        let want = 2.0 * (1.0 - 2f64.powf(-0.5));
        let got = b.lo.log2().exp2() * 0.0 + b.lo.shift(450).to_f64();
        assert!((got / want - 1.0).abs() < 0.1);
        assert!(b.lo <= b.hi);
    }
}
