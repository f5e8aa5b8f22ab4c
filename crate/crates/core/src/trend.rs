//! Finite-depth decision procedure for "does this positive sequence tend to
//! zero". Asymptotic conditions are decided from a trace on a dyadic grid
//! with a three-valued verdict; the full trace is always returned so callers
//! can report what was actually observed.

use serde::Serialize;

/// Outcome of a finite-depth limit or index test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// Tolerances for the vanishing-limit decision.
#[derive(Clone, Debug)]
pub struct TrendConfig {
    /// Deepest grid exponent probed.
    pub depth: usize,
    /// `holds` outright once the last ratio falls below `eps * max`.
    pub eps: f64,
    /// A halving of scale must shrink the ratio by at least this factor for
    /// the decay certificate.
    pub decay_ratio: f64,
    /// Same, for the wider confirmation window.
    pub decay_ratio_wide: f64,
    /// At or above this tail-to-midpoint ratio the trace is flat: `fails`.
    pub flat_ratio: f64,
    /// Growth beyond this multiple of max(r_0, 1) means the numerator is not
    /// dominated at all.
    pub domination_cap: f64,
}

impl Default for TrendConfig {
    fn default() -> Self {
        TrendConfig {
            depth: 60,
            eps: 1e-3,
            decay_ratio: 0.9,
            decay_ratio_wide: 0.95,
            flat_ratio: 0.98,
            domination_cap: 1e3,
        }
    }
}

/// Trace analysis of one positive sequence.
#[derive(Clone, Debug, Serialize)]
pub struct Trend {
    pub verdict: Verdict,
    pub r_first: f64,
    pub r_last: f64,
    pub r_max: f64,
    /// r[last] / r[last/2]
    pub decay_half: f64,
    /// r[last/2] / r[last/4]
    pub decay_quarter: f64,
    pub tail_nonincreasing: bool,
}

/// Decide whether `r` (positive, indexed by grid depth) tends to zero.
pub fn vanishing_limit(r: &[f64], cfg: &TrendConfig) -> Trend {
    assert!(r.len() >= 8, "trace too short to analyze");
    assert!(r.iter().all(|&v| v > 0.0 && v.is_finite()), "trace must be positive and finite");
    let d = r.len() - 1;
    let r_max = r.iter().cloned().fold(f64::MIN, f64::max);
    let decay_half = r[d] / r[d / 2];
    let decay_quarter = r[d / 2] / r[d / 4];
    let tail_nonincreasing = r[d / 2..].windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9));

    let verdict = if tail_nonincreasing
        && (r[d] < cfg.eps * r_max
            || (decay_half <= cfg.decay_ratio && decay_quarter <= cfg.decay_ratio_wide))
    {
        Verdict::Holds
    } else if r[d] >= cfg.eps * r_max && decay_half >= cfg.flat_ratio {
        // flat or growing tail: bounded away from zero on this grid
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };

    Trend {
        verdict,
        r_first: r[0],
        r_last: r[d],
        r_max,
        decay_half,
        decay_quarter,
        tail_nonincreasing,
    }
}

/// True when the trace outgrows every admissible domination constant.
pub fn violates_domination(r: &[f64], cfg: &TrendConfig) -> bool {
    let d = r.len() - 1;
    r[d] > cfg.domination_cap * r[0].max(1.0) && r[d] > r[d / 2]
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}
