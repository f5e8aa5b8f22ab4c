//! Engine benchmarks, including the sequential/parallel sample-loop
//! comparison. Run with `cargo bench -p symspace`; disable the rayon path
//! with `--no-default-features` to bench the sequential engines alone.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use symspace::cex::{CexFamily, DEFAULT_SEED};
use symspace::gfun::{GFun, PositiveFun};
use symspace::norms::{marcinkiewicz_sup, quasi_norm};

fn bench_norm_engines(c: &mut Criterion) {
    let fam = CexFamily::build(3).unwrap();
    let x = fam.combine(&[0.9, 0.4, 0.7, 0.2]).unwrap();
    let psi = GFun::pow_log(0.5, 0.5).unwrap();
    let theta = PositiveFun::tilde_of(psi.clone());

    c.bench_function("rearrange_depth3", |b| b.iter(|| black_box(&x).rearrange()));
    c.bench_function("quasi_norm_depth3", |b| b.iter(|| quasi_norm(black_box(&x), &psi)));
    c.bench_function("marcinkiewicz_depth3", |b| {
        b.iter(|| marcinkiewicz_sup(black_box(&x), &theta, 24))
    });
    c.bench_function("f_norm_depth3", |b| b.iter(|| fam.f_norm(black_box(&x), 1e-9)));
}

fn bench_sample_loop(c: &mut Criterion) {
    let fam = CexFamily::build(3).unwrap();
    let mut group = c.benchmark_group("sample_loop");
    group.sample_size(10);
    for count in [16u64, 64] {
        group.bench_with_input(BenchmarkId::new("sequential", count), &count, |b, &n| {
            b.iter(|| fam.run_samples_seq(n, DEFAULT_SEED))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", count), &count, |b, &n| {
            b.iter(|| fam.run_samples(n, DEFAULT_SEED))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_norm_engines, bench_sample_loop);
criterion_main!(benches);
