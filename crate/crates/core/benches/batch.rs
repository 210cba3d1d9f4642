use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use giep::batch::{solve_batch, Execution};
use giep::instance::{random_instance, Instance};
use giep::solver::{Mode, SolveConfig};

fn instances(count: u64, n: usize) -> Vec<Instance> {
    (0..count)
        .map(|seed| random_instance(n, n / 4, 0.4, seed, false).expect("valid sizes"))
        .collect()
}

fn batch_solve(c: &mut Criterion) {
    let cfg = SolveConfig::default();
    let mut group = c.benchmark_group("batch_solve");
    group.sample_size(10);
    for &n in &[6usize, 10] {
        let batch = instances(32, n);
        group.bench_with_input(BenchmarkId::new("sequential", n), &batch, |b, batch| {
            b.iter(|| solve_batch(black_box(batch), Mode::Generic, &cfg, Execution::Sequential))
        });
        group.bench_with_input(BenchmarkId::new("parallel", n), &batch, |b, batch| {
            b.iter(|| solve_batch(black_box(batch), Mode::Generic, &cfg, Execution::Parallel))
        });
    }
    group.finish();
}

criterion_group!(benches, batch_solve);
criterion_main!(benches);
