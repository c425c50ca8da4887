//! Transplantation algebra: building the copy-mixing matrix from a
//! side-data map and verifying its identities.
//!
//! With structural matrices `Q₁`, `Q₂` and a side-data map `U`, the
//! transplantation matrix is `M = Q₂ U (Q₁ᵀQ₁)⁻¹ Q₁ᵀ`. Any such `M` is a
//! fixed point of `M = P₂ M P₁` (with `Pᵢ` the projector onto `col(Qᵢ)`),
//! and `U` can be recovered as `(Q₂ᵀQ₂)⁻¹ Q₂ᵀ M Q₁`.
//!
//! Because `Qᵀw = 0` holds exactly for the orientation coloring `w`, every
//! matrix of this form annihilates the colorings: `M w₁ = 0` and
//! `Mᵀ w₂ = 0`. The transport law "`Mᵀ` maps `w₂` into the span of `w₁`"
//! is therefore satisfied degenerately, and [`verify_w_transport`] accepts
//! either the zero image or a genuinely parallel one.

use nalgebra::DMatrix;

use crate::algebra::{StructuralMatrix, TwoColoring};
use crate::error::SpectralError;

use super::sym_eigen_full;

/// Reciprocal-condition threshold below which a Gram matrix counts as
/// rank deficient.
pub const RCOND_MIN: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InverseStrategy {
    /// Error out when `QᵀQ` is rank deficient (default).
    Strict,
    /// Fall back to the eigenvalue-truncated pseudo-inverse.
    PseudoInverse,
}

/// Inverse (or pseudo-inverse) of a symmetric PSD matrix via its
/// eigendecomposition, together with the reciprocal condition number.
fn sym_inverse(
    g: &DMatrix<f64>,
    strategy: InverseStrategy,
) -> Result<DMatrix<f64>, SpectralError> {
    let (spec, vecs) = sym_eigen_full(g)?;
    let max = spec.values().last().copied().unwrap_or(0.0).abs();
    let min = spec.min().abs();
    let rcond = if max > 0.0 { min / max } else { 0.0 };
    if rcond < RCOND_MIN && strategy == InverseStrategy::Strict {
        return Err(SpectralError::RankDeficient(rcond));
    }
    let cut = RCOND_MIN * max.max(f64::MIN_POSITIVE);
    let n = g.nrows();
    let mut inv = DMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = spec.values()[k];
        if lambda.abs() <= cut {
            continue; // pseudo-inverse truncation
        }
        let col = vecs.column(k);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] += col[i] * col[j] / lambda;
            }
        }
    }
    Ok(inv)
}

fn shape_check(q: &StructuralMatrix, u: &DMatrix<f64>) -> Result<(), SpectralError> {
    if u.nrows() != q.matrix.cols() || u.ncols() != q.matrix.cols() {
        return Err(SpectralError::ShapeMismatch {
            expected: format!("{} x {} side map", q.matrix.cols(), q.matrix.cols()),
            got: format!("{} x {}", u.nrows(), u.ncols()),
        });
    }
    Ok(())
}

/// `M = Q₂ U (Q₁ᵀQ₁)⁻¹ Q₁ᵀ`, the linear map carrying vector forms over the
/// first volume to vector forms over the second.
pub fn compute_m(
    q1: &StructuralMatrix,
    q2: &StructuralMatrix,
    u: &DMatrix<f64>,
) -> Result<DMatrix<f64>, SpectralError> {
    compute_m_with(q1, q2, u, InverseStrategy::Strict)
}

pub fn compute_m_with(
    q1: &StructuralMatrix,
    q2: &StructuralMatrix,
    u: &DMatrix<f64>,
    strategy: InverseStrategy,
) -> Result<DMatrix<f64>, SpectralError> {
    shape_check(q1, u)?;
    if q2.matrix.cols() != q1.matrix.cols() {
        return Err(SpectralError::DimensionMismatch(
            q2.matrix.cols(),
            q1.matrix.cols(),
        ));
    }
    let d1 = q1.matrix.to_dense();
    let d2 = q2.matrix.to_dense();
    let gram_inv = sym_inverse(&(d1.transpose() * &d1), strategy)?;
    Ok(d2 * u * gram_inv * d1.transpose())
}

/// Frobenius residual of the fixed-point identity
/// `M = Q₂(Q₂ᵀQ₂)⁻¹Q₂ᵀ · M · Q₁(Q₁ᵀQ₁)⁻¹Q₁ᵀ`.
pub fn verify_fixed_point(
    m: &DMatrix<f64>,
    q1: &StructuralMatrix,
    q2: &StructuralMatrix,
) -> Result<f64, SpectralError> {
    let d1 = q1.matrix.to_dense();
    let d2 = q2.matrix.to_dense();
    if m.ncols() != d1.nrows() || m.nrows() != d2.nrows() {
        return Err(SpectralError::ShapeMismatch {
            expected: format!("{} x {}", d2.nrows(), d1.nrows()),
            got: format!("{} x {}", m.nrows(), m.ncols()),
        });
    }
    let p1 = &d1 * sym_inverse(&(d1.transpose() * &d1), InverseStrategy::Strict)? * d1.transpose();
    let p2 = &d2 * sym_inverse(&(d2.transpose() * &d2), InverseStrategy::Strict)? * d2.transpose();
    Ok((m - p2 * m * p1).norm())
}

/// Recovers the side-data map: `U = (Q₂ᵀQ₂)⁻¹ Q₂ᵀ M Q₁`.
pub fn recover_u(
    m: &DMatrix<f64>,
    q1: &StructuralMatrix,
    q2: &StructuralMatrix,
) -> Result<DMatrix<f64>, SpectralError> {
    let d1 = q1.matrix.to_dense();
    let d2 = q2.matrix.to_dense();
    let gram_inv = sym_inverse(&(d2.transpose() * &d2), InverseStrategy::Strict)?;
    Ok(gram_inv * d2.transpose() * m * d1)
}

/// Outcome of the `w`-transport check.
#[derive(Clone, Copy, Debug)]
pub struct WTransport {
    /// `‖Mᵀw₂‖ / (‖M‖·‖w₂‖)`; zero means the coloring is annihilated.
    pub relative_norm: f64,
    /// `|cos ∠(Mᵀw₂, w₁)|` when the image is nonzero.
    pub cosine: Option<f64>,
    pub parallel: bool,
}

/// Checks that `Mᵀ` maps `w₂` into the span of `w₁`. A numerically zero
/// image passes (it lies in every span); a nonzero image must be parallel
/// to `w₁` with `|cos| ≥ 1 − 1e-10`.
pub fn verify_w_transport(m: &DMatrix<f64>, w1: &TwoColoring, w2: &TwoColoring) -> WTransport {
    let w1v = DMatrix::from_fn(w1.0.len(), 1, |i, _| w1.0[i] as f64);
    let w2v = DMatrix::from_fn(w2.0.len(), 1, |i, _| w2.0[i] as f64);
    let img = m.transpose() * &w2v;
    let scale = m.norm().max(f64::MIN_POSITIVE) * w2v.norm().max(f64::MIN_POSITIVE);
    let relative_norm = img.norm() / scale;
    if relative_norm <= 1e-10 {
        return WTransport {
            relative_norm,
            cosine: None,
            parallel: true,
        };
    }
    let cosine = (img.transpose() * &w1v)[(0, 0)].abs() / (img.norm() * w1v.norm());
    WTransport {
        relative_norm,
        cosine: Some(cosine),
        parallel: cosine >= 1.0 - 1e-10,
    }
}

/// A verified transplantation: both structural matrices, the side-data map
/// `U` (orthogonal up to scale), and the copy-mixing matrix `M`.
#[derive(Clone, Debug)]
pub struct TransplantationPair {
    pub q1: StructuralMatrix,
    pub q2: StructuralMatrix,
    pub u: DMatrix<f64>,
    pub m: DMatrix<f64>,
}

impl TransplantationPair {
    /// Builds the pair and checks its two defining invariants:
    /// `UᵀU = I` to 1e-10 (after normalizing by the mean column norm, the
    /// scale is reported via `u` itself) and the New-8 style fixed point
    /// residual ≤ 1e-10.
    pub fn new(
        q1: StructuralMatrix,
        q2: StructuralMatrix,
        u: DMatrix<f64>,
    ) -> Result<TransplantationPair, SpectralError> {
        shape_check(&q1, &u)?;
        let k = u.nrows();
        let gram = u.transpose() * &u;
        let scale = gram.trace() / k as f64;
        let dev = (&gram - DMatrix::<f64>::identity(k, k) * scale).norm();
        if dev > 1e-10 * scale.max(1.0) {
            return Err(SpectralError::ShapeMismatch {
                expected: "orthogonal side map (UᵀU ∝ I)".into(),
                got: format!("deviation {dev:.3e}"),
            });
        }
        let m = compute_m(&q1, &q2, &u)?;
        let residual = verify_fixed_point(&m, &q1, &q2)?;
        if residual > 1e-10 {
            return Err(SpectralError::ShapeMismatch {
                expected: "fixed-point residual ≤ 1e-10".into(),
                got: format!("{residual:.3e}"),
            });
        }
        Ok(TransplantationPair { q1, q2, u, m })
    }
}
