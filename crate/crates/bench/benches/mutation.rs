use std::hint::black_box;

use clusterkit::colimit::mutate_positions;
use clusterkit::morphism::check_cm3;
use clusterkit::seed::enumerate_cluster_variables;
use clusterkit::triangulation::flip_closure;
use clusterkit::FiniteTriangulation;
use clusterkit_bench::{example_map, path_seed, sweep};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn mutation(c: &mut Criterion) {
    let mut group = c.benchmark_group("mutate_positions");
    for n in [3, 5, 8] {
        let s = path_seed(n);
        let seq = sweep(n, 2 * n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| mutate_positions(&s, black_box(&seq)).unwrap())
        });
    }
    group.finish();
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    for n in [3, 4] {
        let s = path_seed(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| enumerate_cluster_variables(black_box(&s), 6, 100_000).unwrap())
        });
    }
    group.finish();
}

fn cm3(c: &mut Criterion) {
    let m = example_map();
    c.bench_function("check_cm3/example/depth4", |b| {
        b.iter(|| check_cm3(black_box(&m), 4, 100_000).unwrap())
    });
}

fn flips(c: &mut Criterion) {
    let mut group = c.benchmark_group("flip_closure");
    group.sample_size(10);
    for n in [6, 8] {
        let t = FiniteTriangulation::fan(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| flip_closure(black_box(&t)))
        });
    }
    group.finish();
}

criterion_group!(benches, mutation, census, cm3, flips);
criterion_main!(benches);
