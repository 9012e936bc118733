//! Parallel against sequential execution of the data-parallel kernels.
//!
//! With the default `parallel` feature every kernel runs twice: inside a
//! one-thread rayon pool and on the global pool. Building with
//! `--no-default-features` benches the plain sequential loops instead.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use overlapdim_core::empirical::{
    geometric_radii, interval_mass, local_dimension_estimate, phi_oracle, EstimateConfig,
};
use overlapdim_core::ifs::sample_measure;
use overlapdim_core::separation::check_forward_separation;
use overlapdim_core::{IfsParams, Interval, ProbVector};

#[cfg(feature = "parallel")]
type Pool = rayon::ThreadPool;
#[cfg(not(feature = "parallel"))]
type Pool = ();

/// `(label, pool)`; `None` runs on the global pool or sequentially.
fn modes() -> Vec<(&'static str, Option<Pool>)> {
    #[cfg(feature = "parallel")]
    {
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .expect("thread pool");
        vec![("rayon-1", Some(one)), ("rayon-all", None)]
    }
    #[cfg(not(feature = "parallel"))]
    {
        vec![("sequential", None)]
    }
}

#[cfg(feature = "parallel")]
fn run<T: Send>(pool: &Option<Pool>, f: impl FnOnce() -> T + Send) -> T {
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run<T: Send>(_pool: &Option<Pool>, f: impl FnOnce() -> T + Send) -> T {
    f()
}

fn kernels(c: &mut Criterion) {
    let p = IfsParams::new(0.03, 0.05, 0.07).unwrap();
    let pr = ProbVector::uniform();
    let radii = geometric_radii(1e-2, 1e-4, 5).unwrap();
    let cfg = EstimateConfig {
        probes: 50,
        samples: 50_000,
        radii,
        depth: 24,
        seed: 42,
    };
    let target = Interval::new(0.0015, 0.0466).unwrap();

    let mut g = c.benchmark_group("kernels");
    g.sample_size(10);
    for (label, pool) in modes() {
        g.bench_function(BenchmarkId::new("sample_measure", label), |b| {
            b.iter(|| run(&pool, || sample_measure(&p, &pr, 24, 200_000, 7).unwrap()))
        });
        g.bench_function(BenchmarkId::new("phi_oracle", label), |b| {
            b.iter(|| run(&pool, || phi_oracle(&pr, 200_000, 7).unwrap()))
        });
        g.bench_function(BenchmarkId::new("local_dimension_estimate", label), |b| {
            b.iter(|| run(&pool, || local_dimension_estimate(&p, &pr, &cfg).unwrap()))
        });
        g.bench_function(BenchmarkId::new("interval_mass", label), |b| {
            b.iter(|| run(&pool, || interval_mass(&p, &pr, &target, 10).unwrap()))
        });
        g.bench_function(BenchmarkId::new("check_forward_separation", label), |b| {
            b.iter(|| run(&pool, || check_forward_separation(&p, 8, 40).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
