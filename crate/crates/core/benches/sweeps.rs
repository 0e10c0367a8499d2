//! Parallel against single-threaded runs of the main sweeps.
//!
//! With the default `parallel` feature each workload runs on rayon's global
//! pool and on a one-thread pool. Build with `--no-default-features` to time
//! the sequential fallback instead.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kmnil::cartan::CartanMatrix;
use kmnil::construct::{build, BuildOptions};
use kmnil::grading::{degree_order, Bound};
use kmnil::liealg::{scalar_residual, DegreeComplex, GradedAlgebra};
use kmnil::par;
use kmnil::spectrum::l1_report;

fn scalarity_sweep(alg: &GradedAlgebra, cm: &CartanMatrix, bound: &Bound) -> f64 {
    let degrees = degree_order(cm.rank(), bound, usize::MAX).unwrap().degrees;
    par::map(&degrees, |k| {
        let e = cm.energy(k).unwrap() as f64;
        let cx = DegreeComplex::new(alg, k).unwrap();
        (0..=cx.qmax()).map(|q| scalar_residual(&cx.laplacian(q), e)).fold(0.0, f64::max)
    })
    .into_iter()
    .fold(0.0, f64::max)
}

fn modes() -> Vec<(&'static str, Option<rayon::ThreadPool>)> {
    if par::is_parallel() {
        vec![
            ("rayon", None),
            ("one-thread", Some(rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap())),
        ]
    } else {
        vec![("sequential", None)]
    }
}

fn run<R>(pool: &Option<rayon::ThreadPool>, f: impl FnOnce() -> R + Send) -> R
where
    R: Send,
{
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

fn bench_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    g.sample_size(10);
    let cases = [
        ("g2", CartanMatrix::g2(), Bound::total(10)),
        ("cyclic3", CartanMatrix::cyclic(3), Bound::total(11)),
        ("a22", CartanMatrix::a22(), Bound::total(16)),
    ];
    for (mode, pool) in modes() {
        for (name, cm, bound) in &cases {
            g.bench_with_input(BenchmarkId::new(mode, name), &(cm, bound), |b, (cm, bound)| {
                b.iter(|| run(&pool, || black_box(build(cm, bound, &BuildOptions::default()).unwrap())))
            });
        }
    }
    g.finish();
}

fn bench_scalarity(c: &mut Criterion) {
    let mut g = c.benchmark_group("scalarity");
    g.sample_size(10);
    let cm = CartanMatrix::a22();
    let bound = Bound::total(16);
    let alg = build(&cm, &bound, &BuildOptions::default()).unwrap().algebra;
    for (mode, pool) in modes() {
        g.bench_function(BenchmarkId::new(mode, "a22/16"), |b| {
            b.iter(|| run(&pool, || black_box(scalarity_sweep(&alg, &cm, &bound))))
        });
    }
    g.finish();
}

fn bench_spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectrum_l1");
    g.sample_size(10);
    for (mode, pool) in modes() {
        g.bench_function(BenchmarkId::new(mode, 24), |b| {
            b.iter(|| run(&pool, || black_box(l1_report(24, 5000, 1e-6).unwrap())))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_build, bench_scalarity, bench_spectrum);
criterion_main!(benches);
