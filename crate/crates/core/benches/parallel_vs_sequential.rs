//! The same kernels on a one-thread pool and on the default pool.
//!
//! Build with `--no-default-features` to time the plain sequential loops.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qfa_core::gf::{Fp, Subspace};
use qfa_core::harmonic::{dft, u3_norm};
use qfa_core::inverse_lab::{planted_phase, quadratic_witness_search, InverseOptions};
use qfa_core::par::with_threads;
use qfa_core::random::{random_bounded_function, random_poly, random_tuple_with_min_rank, rng_from_seed};

const POOLS: [(&str, usize); 2] = [("sequential", 1), ("parallel", 0)];

fn bench_dft(c: &mut Criterion) {
    let fp = Fp::new(3).unwrap();
    let f = random_bounded_function(&mut rng_from_seed(0, 0), Subspace::full(fp, 8));
    let mut g = c.benchmark_group("dft_f3^8");
    for (name, threads) in POOLS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| with_threads(threads, || dft(&f).unwrap()))
        });
    }
    g.finish();
}

fn bench_u3(c: &mut Criterion) {
    let fp = Fp::new(3).unwrap();
    let f = random_bounded_function(&mut rng_from_seed(0, 1), Subspace::full(fp, 4));
    let mut g = c.benchmark_group("u3_f3^4");
    g.sample_size(10);
    for (name, threads) in POOLS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| with_threads(threads, || u3_norm(&f, u128::MAX).unwrap()))
        });
    }
    g.finish();
}

fn bench_witness_search(c: &mut Criterion) {
    let fp = Fp::new(3).unwrap();
    let mut rng = rng_from_seed(0, 2);
    let q = random_tuple_with_min_rank(&mut rng, Subspace::full(fp, 3), 1, 3, false, 10_000).unwrap();
    let phase = random_poly(&mut rng, fp, 3, false);
    let f = planted_phase(&q, &phase).unwrap();
    let opts = InverseOptions::default();
    let mut g = c.benchmark_group("witness_search_f3^3");
    g.sample_size(10);
    for (name, threads) in POOLS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| with_threads(threads, || quadratic_witness_search(&f, &q, &opts).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_dft, bench_u3, bench_witness_search);
criterion_main!(benches);
