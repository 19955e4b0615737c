//! Criterion benches comparing the solver families on their home turf, plus
//! the batch harness's serial and worker-pool dispatch paths.
//!
//! Sizes are kept at desk scale so `cargo bench` completes in minutes; the
//! orderings these report (branch-and-bound far ahead on ellipse profits,
//! step-offs far ahead on offset profits) are the point, not the absolute
//! numbers.

use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ukp::bb::{solve_mtu1, solve_mtu2};
use ukp::bench::{run_matrix, BenchConfig, BenchInstance};
use ukp::dp::{solve_gfdp, solve_naive, solve_oso, solve_tso};
use ukp::generators::{breq, strong_corr, subset_sum};
use ukp::instance::Instance;

fn ellipse_profits(c: &mut Criterion) {
    let instance = breq(1 << 11, 7).unwrap();
    let mut group = c.benchmark_group("ellipse-profits-n2048");
    group.sample_size(10);
    group.bench_function("oso", |b| b.iter(|| solve_oso(&instance, None).unwrap()));
    group.bench_function("tso", |b| b.iter(|| solve_tso(&instance, None).unwrap()));
    group.bench_function("gfdp", |b| b.iter(|| solve_gfdp(&instance, None).unwrap()));
    group.bench_function("mtu1", |b| b.iter(|| solve_mtu1(&instance, None).unwrap()));
    group.bench_function("mtu2", |b| b.iter(|| solve_mtu2(&instance, None).unwrap()));
    group.finish();
}

fn offset_profits(c: &mut Criterion) {
    // Consecutive weights starting at w_min: the narrow band that makes
    // branch-and-bound struggle while the step-offs terminate early.
    let instance = strong_corr(2_000, -5, 5_000, 6_999, 400_057, 400_057, 7).unwrap();
    let mut group = c.benchmark_group("offset-profits-n2000");
    group.sample_size(10);
    group.bench_function("oso", |b| b.iter(|| solve_oso(&instance, None).unwrap()));
    group.bench_function("tso", |b| b.iter(|| solve_tso(&instance, None).unwrap()));
    group.bench_function("mtu1", |b| {
        b.iter(|| solve_mtu1(&instance, Some(Duration::from_millis(250))).unwrap())
    });
    group.finish();
}

fn equal_profit_ties(c: &mut Criterion) {
    let instance = subset_sum(1_000, 10, 3_010, 25_000, 25_000, 7).unwrap();
    let mut group = c.benchmark_group("profit-equals-weight-n1000");
    group.sample_size(10);
    group.bench_function("naive", |b| b.iter(|| solve_naive(&instance, None).unwrap()));
    group.bench_function("oso", |b| b.iter(|| solve_oso(&instance, None).unwrap()));
    group.bench_function("tso", |b| b.iter(|| solve_tso(&instance, None).unwrap()));
    group.finish();
}

fn batch_dispatch(c: &mut Criterion) {
    let instances: Vec<BenchInstance> = (0..6u64)
        .map(|seed| BenchInstance {
            id: format!("ellipse-{seed}"),
            dataset: "bench".to_string(),
            instance: breq(1 << 10, seed).unwrap(),
        })
        .collect();
    let algorithms = vec!["oso".to_string(), "mtu1".to_string()];
    let mut group = c.benchmark_group("batch-dispatch");
    group.sample_size(10);
    for (name, workers) in [("serial", None), ("two-workers", Some(2))] {
        let config = BenchConfig {
            algorithms: algorithms.clone(),
            reps: 1,
            timeout: Some(Duration::from_secs(5)),
            parallel: workers,
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &config, |b, config| {
            b.iter(|| run_matrix(&instances, config))
        });
    }
    group.finish();
}

fn naive_versus_sparse_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("dense-vs-sparse");
    group.sample_size(10);
    for n in [256usize, 1024] {
        let instance: Instance = breq(n, 3).unwrap();
        group.bench_with_input(BenchmarkId::new("naive", n), &instance, |b, instance| {
            b.iter(|| solve_naive(instance, None).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("oso", n), &instance, |b, instance| {
            b.iter(|| solve_oso(instance, None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    ellipse_profits,
    offset_profits,
    equal_profit_ties,
    batch_dispatch,
    naive_versus_sparse_scaling
);
criterion_main!(benches);
