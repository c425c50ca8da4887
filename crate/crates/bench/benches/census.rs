use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use div_core::fixtures;
use div_core::search::{classify, enumerate_divs};

fn bench_enumeration(c: &mut Criterion) {
    let tile = fixtures::equilateral_tile();
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(20);
    for n in [4usize, 5, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| enumerate_divs(&tile, n).unwrap())
        });
    }
    group.finish();

    let divs = enumerate_divs(&tile, 5).unwrap();
    let mut group = c.benchmark_group("classify");
    group.sample_size(20);
    group.bench_function("n5", |b| b.iter(|| classify(&divs).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_enumeration);
criterion_main!(benches);
