//! Shared generators for the integration suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symspace::exact::ExactScalar;
use symspace::stepfn::{StepFunction, Time};

/// Random step function with at most `max_blocks` blocks over dyadic and
/// small-rational breakpoints.
pub fn random_step(seed: u64, max_blocks: usize) -> StepFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5741);
    let n = rng.gen_range(1..=max_blocks);
    let mut cuts: Vec<Time> = (0..n - 1)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Time::dyadic(rng.gen_range(1..=16))
            } else {
                let q = rng.gen_range(2u64..=48);
                let p = rng.gen_range(1..q);
                Time::rational(p, q).unwrap()
            }
        })
        .collect();
    cuts.push(Time::one());
    cuts.sort();
    cuts.dedup();
    let vals: Vec<f64> = (0..cuts.len())
        .map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(-3.0..3.0) })
        .collect();
    StepFunction::new(cuts, vals).unwrap()
}

/// Same breakpoints, every value shrunk toward zero: |out| <= |of| pointwise.
pub fn dominated_by(of: &StepFunction, seed: u64) -> StepFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cuts: Vec<Time> = of.blocks().map(|(_, hi, _)| hi.clone()).collect();
    let vals: Vec<f64> =
        of.blocks().map(|(_, _, v)| v.to_f64() * rng.gen_range(0.0..0.999)).collect();
    StepFunction::new(cuts, vals).unwrap()
}

/// Measure-preserving shuffle of the blocks: an equimeasurable function.
pub fn shuffle_blocks(x: &StepFunction, seed: u64) -> StepFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks: Vec<(num_rational::BigRational, ExactScalar)> =
        x.blocks().map(|(lo, hi, v)| (hi.sub_fast(&lo), v)).collect();
    for i in (1..blocks.len()).rev() {
        let j = rng.gen_range(0..=i);
        blocks.swap(i, j);
    }
    let mut acc = num_rational::BigRational::new(0.into(), 1.into());
    let mut cuts = Vec::with_capacity(blocks.len());
    let mut vals = Vec::with_capacity(blocks.len());
    for (len, v) in blocks {
        acc += len;
        cuts.push(Time::from_rational(acc.clone()));
        vals.push(v);
    }
    StepFunction::from_exact_parts(cuts, vals).unwrap()
}

/// A random point of (0, 1] with a modest denominator.
pub fn random_measure(rng: &mut ChaCha8Rng) -> Time {
    let q = rng.gen_range(5u64..=200);
    let p = rng.gen_range(1..=q);
    Time::rational(p, q).unwrap()
}
