use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DMatrix;

use div_core::algebra::auxiliary;
use div_core::fixtures;
use div_core::spectral::sym_eigen;

fn random_symmetric(n: usize) -> DMatrix<f64> {
    // deterministic fill; symmetry by construction
    let mut state: u64 = 0x9e37_79b9;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let raw = DMatrix::from_fn(n, n, |_, _| next());
    (&raw + raw.transpose()) / 2.0
}

fn bench_sym_eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("sym_eigen");
    for n in [32usize, 64, 128] {
        let m = random_symmetric(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| sym_eigen(m).unwrap())
        });
    }
    group.finish();

    let x = auxiliary(&fixtures::gww_left(fixtures::equilateral_tile()))
        .0
        .to_dense();
    c.bench_function("sym_eigen/auxiliary_7x7", |b| {
        b.iter(|| sym_eigen(&x).unwrap())
    });
}

criterion_group!(benches, bench_sym_eigen);
criterion_main!(benches);
