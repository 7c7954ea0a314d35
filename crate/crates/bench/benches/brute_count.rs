use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use stacky_core::binary_forms::WeightVector;
use stacky_core::finite_field::FieldSpec;
use stacky_core::stack_count::{brute_weighted_count, DEFAULT_BUDGET};

fn bench_brute_counts(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_weighted_count");
    for &(q, lambdas, n) in &[(3u64, &[2u64, 4][..], 1u64), (5, &[1, 2], 1), (7, &[1, 1], 2)] {
        let spec = FieldSpec::from_q(q).unwrap();
        let w = WeightVector::new(lambdas.to_vec()).unwrap();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("q{q}_l{lambdas:?}_n{n}")),
            &(spec, w, n),
            |b, (spec, w, n)| {
                b.iter(|| brute_weighted_count(spec, w, *n, 1, DEFAULT_BUDGET).unwrap())
            },
        );
    }
    group.finish();
}

fn bench_workers(c: &mut Criterion) {
    let mut group = c.benchmark_group("workers");
    group.sample_size(10);
    let spec = FieldSpec::from_q(5).unwrap();
    let w = WeightVector::new(vec![2, 4]).unwrap();
    for workers in [1u64, 2, 4] {
        group.bench_with_input(
            BenchmarkId::from_parameter(workers),
            &workers,
            |b, &workers| {
                b.iter(|| brute_weighted_count(&spec, &w, 1, workers, DEFAULT_BUDGET).unwrap())
            },
        );
    }
    group.finish();
}

criterion_group!(benches, bench_brute_counts, bench_workers);
criterion_main!(benches);
