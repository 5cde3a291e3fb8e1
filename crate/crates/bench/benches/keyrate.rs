use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use coherent_keyrate::entanglement::max_keyrate_over_bases;
use coherent_keyrate::finegrained::{bb84_opt_keyrate, solve_problem1};
use coherent_keyrate::keyrate::{bb84_keyrate, keyrate_symmetric, sixstate_keyrate};
use coherent_keyrate::qecsim::{classical_ec_run, virtual_qec_run};
use coherent_keyrate::random::{random_state, seeded_rng};
use coherent_keyrate::sweep::{sweep_alpha, sweep_mismatch};
use coherent_keyrate::{BasisSearchConfig, FineGrainedStats, HashingMatrix, SweepRange};

fn closed_forms(c: &mut Criterion) {
    c.bench_function("bb84_keyrate", |b| {
        b.iter(|| bb84_keyrate(black_box(0.03), black_box(0.03)).unwrap())
    });
    c.bench_function("sixstate_keyrate", |b| {
        b.iter(|| sixstate_keyrate(black_box(0.03), black_box(0.03), black_box(0.03)).unwrap())
    });
    let rho = random_state(&mut seeded_rng(1));
    c.bench_function("keyrate_symmetric/random_state", |b| {
        b.iter(|| keyrate_symmetric(black_box(&rho)).unwrap())
    });
}

fn fine_grained(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_problem1");
    let closed = FineGrainedStats::unbalanced(0.6, 0.03).unwrap();
    let numeric = FineGrainedStats::new([0.5, 0.02, 0.05, 0.43], 0.04).unwrap();
    group.bench_function("closed_form", |b| {
        b.iter(|| solve_problem1(black_box(&closed)).unwrap())
    });
    group.bench_function("numeric", |b| {
        b.iter(|| solve_problem1(black_box(&numeric)).unwrap())
    });
    group.finish();
    c.bench_function("bb84_opt_keyrate", |b| {
        b.iter(|| bb84_opt_keyrate(black_box(&numeric)).unwrap())
    });
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweeps");
    let alpha = SweepRange::new(0.38, 0.62, 25).unwrap();
    let x = SweepRange::new(0.01, 0.5, 50).unwrap();
    for jobs in [1, 4] {
        group.bench_with_input(BenchmarkId::new("alpha", jobs), &jobs, |b, &jobs| {
            b.iter(|| sweep_alpha(0.03, &alpha, jobs).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("mismatch", jobs), &jobs, |b, &jobs| {
            b.iter(|| sweep_mismatch(0.05, 0.05, &x, jobs).unwrap())
        });
    }
    group.finish();
}

fn basis_search(c: &mut Criterion) {
    let rho = random_state(&mut seeded_rng(2));
    let mut group = c.benchmark_group("max_keyrate_over_bases");
    group.sample_size(10);
    for restarts in [1, 8, 32] {
        let cfg = BasisSearchConfig {
            restarts,
            ..Default::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(restarts), &cfg, |b, cfg| {
            b.iter(|| max_keyrate_over_bases(black_box(&rho), cfg).unwrap())
        });
    }
    group.finish();
}

fn error_correction(c: &mut Criterion) {
    let rho = random_state(&mut seeded_rng(3));
    let h = HashingMatrix::default_2x3();
    let mut group = c.benchmark_group("qecsim_n3");
    group.sample_size(10);
    group.bench_function("classical", |b| {
        b.iter(|| classical_ec_run(black_box(&rho), 3, &h).unwrap())
    });
    group.bench_function("virtual", |b| {
        b.iter(|| virtual_qec_run(black_box(&rho), 3, &h).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    closed_forms,
    fine_grained,
    sweeps,
    basis_search,
    error_correction
);
criterion_main!(benches);
