//! Generalized symmetric eigensolver for `K v = λ B v`.
//!
//! Below [`DENSE_LIMIT`] free nodes the problem is reduced with a Cholesky
//! factor of `B` and handed to the dense Jacobi solver; above it a block
//! inverse iteration with conjugate-gradient solves and Rayleigh–Ritz
//! extraction finds the lowest eigenpairs. The contract in both paths is
//! the residual bound `‖Kv − λBv‖ ≤ 1e-8·‖Kv‖`, not the algorithm.

use nalgebra::{DMatrix, DVector};

use crate::error::FemError;
use crate::spectral::sym_eigen_full;

use super::csr::Csr;
use super::global::DiscreteOperator;

pub const DENSE_LIMIT: usize = 1500;

/// Relative residual required of every returned eigenpair.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// The `k` lowest Dirichlet eigenvalues and `B`-orthonormal eigenvectors.
pub fn dirichlet_spectrum(
    op: &DiscreteOperator,
    k: usize,
) -> Result<(Vec<f64>, Vec<DVector<f64>>), FemError> {
    dirichlet_spectrum_with(op, k, DENSE_LIMIT)
}

/// As [`dirichlet_spectrum`] with an explicit dense/iterative threshold.
pub fn dirichlet_spectrum_with(
    op: &DiscreteOperator,
    k: usize,
    dense_limit: usize,
) -> Result<(Vec<f64>, Vec<DVector<f64>>), FemError> {
    let n = op.stiffness.n();
    if k > n {
        return Err(FemError::TooManyEigenpairs(k, n));
    }
    if k == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let (values, vectors) = if n <= dense_limit {
        dense_path(op, k)?
    } else {
        iterative_path(op, k)?
    };
    // enforce the residual contract
    for (lambda, v) in values.iter().zip(&vectors) {
        let kv = op.stiffness.matvec(v);
        let bv = op.mass.matvec(v);
        let res = (&kv - &bv * *lambda).norm();
        if res > RESIDUAL_TOL * kv.norm().max(f64::MIN_POSITIVE) {
            return Err(FemError::ConvergenceFailure {
                iterations: 0,
                residual: res / kv.norm(),
            });
        }
    }
    Ok((values, vectors))
}

/// Cholesky reduction to a standard symmetric problem.
fn dense_path(op: &DiscreteOperator, k: usize) -> Result<(Vec<f64>, Vec<DVector<f64>>), FemError> {
    let kd = op.stiffness.to_dense();
    let bd = op.mass.to_dense();
    let chol = nalgebra::Cholesky::new(bd).ok_or(FemError::ConvergenceFailure {
        iterations: 0,
        residual: f64::NAN,
    })?;
    let l = chol.l();
    // S = L⁻¹ K L⁻ᵀ
    let mut s = l
        .solve_lower_triangular(&kd)
        .expect("Cholesky factor is nonsingular");
    s.transpose_mut();
    let mut s = l
        .solve_lower_triangular(&s)
        .expect("Cholesky factor is nonsingular");
    // symmetrize away factorization roundoff
    let st = s.transpose();
    s += st;
    s *= 0.5;
    let (spec, vecs) = sym_eigen_full(&s)?;
    let lt = l.transpose();
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    for t in 0..k {
        values.push(spec.values()[t]);
        let y = vecs.column(t).clone_owned();
        let x = lt
            .solve_upper_triangular(&y)
            .expect("Cholesky factor is nonsingular");
        vectors.push(normalize_b(&op.mass, x));
    }
    Ok((values, vectors))
}

fn normalize_b(b: &Csr, v: DVector<f64>) -> DVector<f64> {
    let nb = v.dot(&b.matvec(&v)).sqrt();
    v / nb
}

/// Deterministic pseudo-random fill for the starting block.
fn splitmix(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
}

/// Jacobi-preconditioned conjugate gradients for `K x = rhs`.
fn cg(k: &Csr, rhs: &DVector<f64>, x0: DVector<f64>, tol: f64) -> (DVector<f64>, usize) {
    let n = k.n();
    let diag = k.diagonal();
    let precond = |r: &DVector<f64>| -> DVector<f64> {
        DVector::from_fn(n, |i, _| r[i] / diag[i].max(f64::MIN_POSITIVE))
    };
    let mut x = x0;
    let mut r = rhs - k.matvec(&x);
    let target = tol * rhs.norm().max(f64::MIN_POSITIVE);
    let mut z = precond(&r);
    let mut p = z.clone();
    let mut rz = r.dot(&z);
    let max_it = 20 * n;
    for it in 0..max_it {
        if r.norm() <= target {
            return (x, it);
        }
        let kp = k.matvec(&p);
        let alpha = rz / p.dot(&kp);
        x += &p * alpha;
        r -= &kp * alpha;
        z = precond(&r);
        let rz_new = r.dot(&z);
        p = &z + &p * (rz_new / rz);
        rz = rz_new;
    }
    (x, max_it)
}

/// Block inverse iteration with Rayleigh–Ritz extraction and deflation of
/// converged pairs through the Ritz rotation.
fn iterative_path(
    op: &DiscreteOperator,
    k: usize,
) -> Result<(Vec<f64>, Vec<DVector<f64>>), FemError> {
    let n = op.stiffness.n();
    let block = (k + (k / 2).max(6)).min(n);
    let mut state: u64 = 0x5eed_1234_abcd;
    let mut xs: Vec<DVector<f64>> = (0..block)
        .map(|_| DVector::from_fn(n, |_, _| splitmix(&mut state)))
        .collect();
    b_orthonormalize(&op.mass, &mut xs);
    let mut last_res = f64::MAX;
    const MAX_OUTER: usize = 300;
    for outer in 0..MAX_OUTER {
        // Y = K⁻¹ B X
        let ys: Vec<DVector<f64>> = xs
            .iter()
            .map(|x| {
                let rhs = op.mass.matvec(x);
                cg(&op.stiffness, &rhs, x.clone(), 1e-13).0
            })
            .collect();
        // Rayleigh–Ritz on span(Y)
        let mut ys = ys;
        b_orthonormalize(&op.mass, &mut ys);
        let m = ys.len();
        let mut a_r = DMatrix::zeros(m, m);
        for i in 0..m {
            let kyi = op.stiffness.matvec(&ys[i]);
            for j in 0..m {
                a_r[(i, j)] = ys[j].dot(&kyi);
            }
        }
        let a_r = (&a_r + a_r.transpose()) * 0.5;
        let (spec, vecs) = sym_eigen_full(&a_r)?;
        let mut new_xs: Vec<DVector<f64>> = Vec::with_capacity(m);
        for t in 0..m {
            let mut v = DVector::zeros(n);
            for j in 0..m {
                v += &ys[j] * vecs[(j, t)];
            }
            new_xs.push(v);
        }
        xs = new_xs;
        // convergence of the k lowest
        let mut worst: f64 = 0.0;
        for t in 0..k {
            let kv = op.stiffness.matvec(&xs[t]);
            let bv = op.mass.matvec(&xs[t]);
            let lambda = spec.values()[t];
            worst = worst.max((&kv - &bv * lambda).norm() / kv.norm().max(f64::MIN_POSITIVE));
        }
        if worst <= 0.1 * RESIDUAL_TOL {
            let values = spec.values()[..k].to_vec();
            let vectors: Vec<DVector<f64>> = xs
                .into_iter()
                .take(k)
                .map(|v| normalize_b(&op.mass, v))
                .collect();
            return Ok((values, vectors));
        }
        if outer > 20 && worst > 0.99 * last_res {
            return Err(FemError::ConvergenceFailure {
                iterations: outer,
                residual: worst,
            });
        }
        last_res = worst;
    }
    Err(FemError::ConvergenceFailure {
        iterations: MAX_OUTER,
        residual: last_res,
    })
}

/// Modified Gram–Schmidt in the B inner product, with re-orthogonalization.
fn b_orthonormalize(b: &Csr, vs: &mut Vec<DVector<f64>>) {
    let mut kept: Vec<DVector<f64>> = Vec::with_capacity(vs.len());
    for v in vs.drain(..) {
        let mut v = v;
        for _ in 0..2 {
            for u in &kept {
                let proj = u.dot(&b.matvec(&v));
                v -= u * proj;
            }
        }
        let norm = v.dot(&b.matvec(&v)).sqrt();
        if norm > 1e-12 {
            kept.push(v / norm);
        }
    }
    *vs = kept;
}
