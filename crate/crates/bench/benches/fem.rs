use criterion::{criterion_group, criterion_main, Criterion};

use div_core::fem::{assemble, dirichlet_spectrum};
use div_core::fixtures;

fn bench_fem(c: &mut Criterion) {
    let left = fixtures::gww_left(fixtures::scalene_tile());
    let mut group = c.benchmark_group("fem");
    group.sample_size(10);
    group.bench_function("assemble_r3", |b| b.iter(|| assemble(&left, 3).unwrap()));
    let (_gm, op) = assemble(&left, 3).unwrap();
    group.bench_function("spectrum_r3_k6", |b| {
        b.iter(|| dirichlet_spectrum(&op, 6).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_fem);
criterion_main!(benches);
