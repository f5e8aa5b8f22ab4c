//! One-off calibration sweeps behind the frozen test constants.
//!
//! Run with `cargo run --release -p symspace --example calibrate`. Prints the
//! dense-grid spread of the E/F norm ratio on the span (backing the frozen
//! cap in `cex`), and the dense maximization of the Marcinkiewicz-to-
//! quasinorm ratio for the square-root log weight (backing the factor-2
//! bound asserted by the property suites).

use std::time::Instant;

use symspace::cex::CexFamily;
use symspace::gfun::{GFun, PositiveFun};
use symspace::norms::{marcinkiewicz_sup, quasi_norm};
use symspace::stepfn::{StepFunction, Time};

fn main() {
    dense_ratio_grid();
    marc_over_quasi();
    sample_timing();
}

/// Every coefficient vector on a coarse grid for the depth-3 family.
fn dense_ratio_grid() {
    let fam = CexFamily::build(3).unwrap();
    let levels = [0.0, 0.1, 0.35, 0.7, 1.0];
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    let mut count = 0u64;
    let start = Instant::now();
    let mut idx = vec![0usize; 4];
    loop {
        let coeffs: Vec<f64> = idx.iter().map(|&i| levels[i]).collect();
        if coeffs.iter().any(|&c| c > 0.0) {
            let x = fam.combine(&coeffs).unwrap();
            let e = marcinkiewicz_sup(&x, fam.theta(), 24).value;
            let f = fam.f_norm(&x, 1e-9).value;
            let r = e / f;
            lo = lo.min(r);
            hi = hi.max(r);
            count += 1;
        }
        let mut c = 0;
        loop {
            idx[c] += 1;
            if idx[c] < levels.len() {
                break;
            }
            idx[c] = 0;
            c += 1;
            if c == idx.len() {
                println!(
                    "dense grid (depth 3, {count} vectors, {:?}): ratio in [{lo:.4}, {hi:.4}], spread {:.4}",
                    start.elapsed(),
                    hi / lo
                );
                return;
            }
        }
    }
}

/// Maximize marcinkiewicz / quasi over a large pile of random step functions
/// and adversarial indicators.
fn marc_over_quasi() {
    let psi = GFun::pow_log(0.5, 0.5).unwrap();
    let theta = PositiveFun::tilde_of(psi.clone());
    let mut worst = 0.0f64;
    for j in 0..60u32 {
        let x = StepFunction::indicator(Time::dyadic(j)).unwrap();
        let r = marcinkiewicz_sup(&x, &theta, 128).value / quasi_norm(&x, &psi);
        worst = worst.max(r);
    }
    // decreasing staircases tracking 1/psi are the hard case
    for depth in [20u32, 40, 60] {
        for thin in 1..=3u32 {
            let mut cuts = Vec::new();
            let mut vals = Vec::new();
            for j in (0..=depth).rev().step_by(thin as usize) {
                cuts.push(Time::dyadic(j));
                let t = 2f64.powi(-(j as i32));
                vals.push(1.0 / (t.sqrt() * (2.0 - t.log2()).sqrt()));
            }
            if *cuts.last().unwrap() != Time::one() {
                cuts.push(Time::one());
                vals.push(0.0);
            }
            let x = StepFunction::new(cuts, vals).unwrap();
            let r = marcinkiewicz_sup(&x, &theta, 128).value / quasi_norm(&x, &psi);
            worst = worst.max(r);
        }
    }
    println!("max marcinkiewicz/quasi for the sqrt-log weight: {worst:.6} (bound 2)");
}

fn sample_timing() {
    let fam = CexFamily::build(5).unwrap();
    let start = Instant::now();
    let recs = fam.run_samples(64, 0x5EED);
    let dt = start.elapsed();
    let (mut lo, mut hi) = (f64::MAX, f64::MIN);
    for r in &recs {
        lo = lo.min(r.ratio);
        hi = hi.max(r.ratio);
    }
    println!(
        "depth-5 family: 64 samples in {dt:?} ({:?}/sample), ratio in [{lo:.4}, {hi:.4}]",
        dt / 64
    );
}
