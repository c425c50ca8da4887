//! Dense symmetric eigencomputation and the cospectrality decision.
//!
//! The solver is a cyclic Jacobi sweep: rotations annihilate off-diagonal
//! entries until the off-norm is at machine level. It is slower than a
//! tridiagonalization for big matrices but foolproof for the symmetric
//! matrices at the scale this crate handles, and it delivers residuals far
//! inside the contract `‖Mv − λv‖ ≤ 1e-10·‖M‖`.

mod transplant;

pub use transplant::{
    compute_m, compute_m_with, recover_u, verify_fixed_point, verify_w_transport,
    InverseStrategy, TransplantationPair, WTransport,
};

use nalgebra::DMatrix;

use crate::error::SpectralError;

/// Dense size guard.
pub const DENSE_GUARD: usize = 5000;

/// Symmetry tolerance (relative to the Frobenius norm).
pub const SYM_TOL: f64 = 1e-12;

/// Ascending eigenvalues of a symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut values: Vec<f64>) -> Spectrum {
        values.sort_by(|x, y| x.partial_cmp(y).unwrap());
        Spectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Numerical rank: eigenvalues above `tol` in absolute value.
    pub fn rank(&self, tol: f64) -> usize {
        self.values.iter().filter(|v| v.abs() > tol).count()
    }

    /// CSV export, one value per line, 12 significant digits.
    pub fn to_csv(&self) -> String {
        self.values
            .iter()
            .map(|v| format!("{v:.12e}\n"))
            .collect()
    }
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<(), SpectralError> {
    if m.nrows() != m.ncols() {
        return Err(SpectralError::DimensionMismatch(m.nrows(), m.ncols()));
    }
    if m.nrows() > DENSE_GUARD {
        return Err(SpectralError::SizeGuard(m.nrows(), DENSE_GUARD));
    }
    let scale = m.norm().max(1.0);
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..i {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if worst > SYM_TOL * scale {
        return Err(SpectralError::NotSymmetric(worst));
    }
    Ok(())
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigen(m: &DMatrix<f64>) -> Result<Spectrum, SpectralError> {
    Ok(sym_eigen_full(m)?.0)
}

/// Eigenvalues (ascending) and the matrix of matching eigenvector columns.
pub fn sym_eigen_full(m: &DMatrix<f64>) -> Result<(Spectrum, DMatrix<f64>), SpectralError> {
    check_symmetric(m)?;
    let (values, vectors) = jacobi_eigen(m.clone())?;
    // sort ascending, carrying eigenvector columns along
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
    let sorted_vals: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let mut sorted_vecs = DMatrix::zeros(m.nrows(), m.ncols());
    for (k, &i) in order.iter().enumerate() {
        sorted_vecs.set_column(k, &vectors.column(i));
    }
    Ok((Spectrum { values: sorted_vals }, sorted_vecs))
}

/// Cyclic Jacobi with threshold skipping. Returns unsorted eigenvalues and
/// the accumulated rotation matrix (columns are eigenvectors).
fn jacobi_eigen(mut a: DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>), SpectralError> {
    let n = a.nrows();
    let mut v = DMatrix::<f64>::identity(n, n);
    if n <= 1 {
        return Ok((a.diagonal().iter().cloned().collect(), v));
    }
    let off_norm = |a: &DMatrix<f64>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..i {
                s += a[(i, j)] * a[(i, j)];
            }
        }
        (2.0 * s).sqrt()
    };
    let scale = a.norm().max(f64::MIN_POSITIVE);
    const MAX_SWEEPS: usize = 64;
    for sweep in 0..MAX_SWEEPS {
        let off = off_norm(&a);
        if off <= 1e-14 * scale {
            return Ok((a.diagonal().iter().cloned().collect(), v));
        }
        // rotate only entries that still matter this sweep
        let threshold = if sweep < 3 { 0.1 * off / (n * n) as f64 } else { 0.0 };
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= threshold || apq == 0.0 {
                    continue;
                }
                // tiny relative to its diagonal: set to zero, skip rotation
                if apq.abs() < 1e-300
                    || apq.abs() <= f64::EPSILON * 1e-3 * (a[(p, p)].abs() + a[(q, q)].abs())
                {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp - s * (akq + tau * akp);
                        a[(k, q)] = akq + s * (akp - tau * akq);
                        a[(p, k)] = a[(k, p)];
                        a[(q, k)] = a[(k, q)];
                    }
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp - s * (vkq + tau * vkp);
                    v[(k, q)] = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }
    Err(SpectralError::NoConvergence(MAX_SWEEPS, off_norm(&a)))
}

/// Default cospectrality tolerance for an auxiliary-type matrix.
pub fn cospectral_tol(x: &DMatrix<f64>) -> f64 {
    1e-8 * x.norm().max(1.0)
}

/// True when the two symmetric matrices have entrywise-equal sorted spectra
/// within `tol`. For symmetric matrices this is exactly similarity.
pub fn cospectral(
    x1: &crate::algebra::AuxiliaryMatrix,
    x2: &crate::algebra::AuxiliaryMatrix,
    tol: Option<f64>,
) -> Result<bool, SpectralError> {
    let d1 = x1.0.to_dense();
    let d2 = x2.0.to_dense();
    if d1.nrows() != d2.nrows() {
        return Err(SpectralError::DimensionMismatch(d1.nrows(), d2.nrows()));
    }
    let tol = tol.unwrap_or_else(|| cospectral_tol(&d1));
    let s1 = sym_eigen(&d1)?;
    let s2 = sym_eigen(&d2)?;
    Ok(s1
        .values()
        .iter()
        .zip(s2.values())
        .all(|(a, b)| (a - b).abs() <= tol))
}

#[cfg(test)]
mod tests;
