//! Deriving the side-data map of a transplantation from discrete data.
//!
//! Given two volumes with equal side counts, the map `U` (if one exists) is
//! pinned down by linear constraints on the transplanted eigenvectors of
//! the first volume: continuity across the second volume's internal sides,
//! zero trace on its external sides, and the eigen-equation rows at
//! side-interior nodes. The least-eigenvalue direction of the normal
//! matrix of that system is the fitted map.

use nalgebra::DMatrix;

use crate::algebra::structural;
use crate::error::{FemError, SpectralError};
use crate::spectral::sym_eigen_full;
use crate::tiling::{Div, SideLabel, Word};

use super::eigen::dirichlet_spectrum;
use super::global::{assemble, assemble_unconstrained, GlobalMesh};
use super::refmesh::RefMesh;
use super::vform::{expand_free, to_vector_form};

/// Result of a side-map fit.
#[derive(Clone, Debug)]
pub struct SideMapFit {
    pub u: DMatrix<f64>,
    /// Square root of the smallest normal-matrix eigenvalue relative to the
    /// largest: near zero means the constraints admit an exact map.
    pub fit_residual: f64,
    /// Deviation of `UᵀU` from the identity after scale normalization.
    pub orthogonality_gap: f64,
    pub modes_used: usize,
}

/// Fits a side-data map for transplanting `left` solutions onto `right`.
pub fn fit_side_map(left: &Div, right: &Div, level: usize) -> Result<SideMapFit, FemError> {
    let ql = structural(left);
    let qr = structural(right);
    let k = ql.matrix.cols();
    if qr.matrix.cols() != k {
        return Err(FemError::ShapeMismatch {
            expected: format!("{k} internal sides"),
            got: format!("{}", qr.matrix.cols()),
        });
    }
    let (gml, opl) = assemble(left, level)?;
    let gmr = GlobalMesh::build(right, level)?;

    // local (single-tile, unconstrained) operators for the eigen rows
    let tile_div = Div::build(left.tile().clone(), &[Word::empty()])?;
    let (tile_gm, tile_op) = assemble(&tile_div, level)?;
    let (k_loc, b_loc) = assemble_unconstrained(&tile_div, &tile_gm);
    let tile_vals = dirichlet_spectrum(&tile_op, tile_op.stiffness.n().min(30))?.0;

    let want = (2 * k + 4).min(opl.stiffness.n());
    let (vals, vecs) = dirichlet_spectrum(&opl, want)?;

    // P₁ = (Q₁ᵀQ₁)⁻¹Q₁ᵀ
    let d1 = ql.matrix.to_dense();
    let gram = d1.transpose() * &d1;
    let (gspec, gvecs) = sym_eigen_full(&gram)?;
    let gmax = gspec.values().last().copied().unwrap_or(0.0).max(1.0);
    if gspec.min() <= 1e-10 * gmax {
        return Err(FemError::Spectral(SpectralError::RankDeficient(
            gspec.min() / gmax,
        )));
    }
    let mut gram_inv = DMatrix::<f64>::zeros(k, k);
    for t in 0..k {
        let col = gvecs.column(t);
        for i in 0..k {
            for j in 0..k {
                gram_inv[(i, j)] += col[i] * col[j] / gspec.values()[t];
            }
        }
    }
    let p1 = gram_inv * d1.transpose();
    let q2 = qr.matrix.to_dense();

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut modes_used = 0;
    for (lambda, vec) in vals.iter().zip(&vecs) {
        if tile_vals.iter().any(|t| (t - lambda).abs() <= 1e-6 * lambda) {
            continue; // degenerate mode: annihilated by any valid map
        }
        modes_used += 1;
        let full = expand_free(&gml, vec);
        let vf = to_vector_form(&gml, &full);
        // side-data decomposition g = P₁·F, one K-vector per local node
        let l = gml.ref_mesh().node_count();
        let mut g = DMatrix::<f64>::zeros(k, l);
        for t in 0..l {
            for s in 0..k {
                let mut acc = 0.0;
                for c in 0..left.n() {
                    acc += p1[(s, c)] * vf.block(c)[t];
                }
                g[(s, t)] = acc;
            }
        }
        constraint_rows(&gmr, right, &q2, &g, *lambda, &k_loc, &b_loc, &mut rows);
        if modes_used >= 2 * k {
            break;
        }
    }
    if rows.is_empty() {
        return Err(FemError::ConvergenceFailure {
            iterations: 0,
            residual: f64::NAN,
        });
    }

    // normal matrix of the constraint system; its least eigenvector is U
    let unknowns = k * k;
    let mut normal = DMatrix::<f64>::zeros(unknowns, unknowns);
    for row in &rows {
        for i in 0..unknowns {
            if row[i] == 0.0 {
                continue;
            }
            for j in i..unknowns {
                normal[(i, j)] += row[i] * row[j];
            }
        }
    }
    for i in 0..unknowns {
        for j in 0..i {
            normal[(i, j)] = normal[(j, i)];
        }
    }
    let (nspec, nvecs) = sym_eigen_full(&normal)?;
    let scale = nspec.values().last().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
    let fit_residual = (nspec.values()[0].max(0.0) / scale).sqrt();
    let mut u = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            u[(i, j)] = nvecs[(i * k + j, 0)];
        }
    }
    // normalize so UᵀU ≈ I
    let ugram = u.transpose() * &u;
    let s = (ugram.trace() / k as f64).sqrt();
    u /= s.max(f64::MIN_POSITIVE);
    let gap = (u.transpose() * &u - DMatrix::<f64>::identity(k, k)).norm();
    Ok(SideMapFit {
        u,
        fit_residual,
        orthogonality_gap: gap,
        modes_used,
    })
}

/// Appends the linear constraints in the `K²` unknowns of `U` contributed
/// by one mode. The transplanted value of copy `c` at local node `t` is
/// `Σ_{s,m} q2[c,s]·U[s,m]·g[m,t]`, linear in `U`.
#[allow(clippy::too_many_arguments)]
fn constraint_rows(
    gmr: &GlobalMesh,
    right: &Div,
    q2: &DMatrix<f64>,
    g: &DMatrix<f64>,
    lambda: f64,
    k_loc: &super::csr::Csr,
    b_loc: &super::csr::Csr,
    rows: &mut Vec<Vec<f64>>,
) {
    let k = q2.ncols();
    let tile = right.tile();
    let rm: &RefMesh = gmr.ref_mesh();
    let coeff = |c: usize, t: usize, row: &mut [f64], sign: f64| {
        for s in 0..k {
            if q2[(c, s)] == 0.0 {
                continue;
            }
            for m in 0..k {
                row[s * k + m] += sign * q2[(c, s)] * g[(m, t)];
            }
        }
    };
    // value continuity across internal sides; eigen rows at side-interior
    // nodes (global rows there touch exactly the two adjacent copies)
    let eps = 64.0 * tile.eps();
    for side in right.internal_sides() {
        let (ci, cj) = side.copies;
        let s = tile.side_of(side.label);
        let (a, _) = tile.side_endpoints(s);
        let pi = &right.placements()[ci].iso;
        let pj = &right.placements()[cj].iso;
        let reversed = (pi.apply(a) - pj.apply(a)).norm() > eps;
        for &t in &rm.side_nodes(s) {
            let t2 = rm.side_partner(t, s, reversed);
            let mut row = vec![0.0; k * k];
            coeff(ci, t, &mut row, 1.0);
            coeff(cj, t2, &mut row, -1.0);
            rows.push(row);
            if rm.side_membership(t).iter().filter(|&&b| b).count() == 1 {
                let mut erow = vec![0.0; k * k];
                local_operator_row(k_loc, b_loc, ci, t, lambda, q2, g, &mut erow);
                local_operator_row(k_loc, b_loc, cj, t2, lambda, q2, g, &mut erow);
                rows.push(erow);
            }
        }
    }
    // zero trace on external sides
    let internal: std::collections::HashSet<(usize, SideLabel)> = right
        .internal_sides()
        .iter()
        .flat_map(|s| [(s.copies.0, s.label), (s.copies.1, s.label)])
        .collect();
    for copy in 0..right.n() {
        for label in SideLabel::ALL {
            if internal.contains(&(copy, label)) {
                continue;
            }
            let s = tile.side_of(label);
            for &t in &rm.side_nodes(s) {
                let mut row = vec![0.0; k * k];
                coeff(copy, t, &mut row, 1.0);
                rows.push(row);
            }
        }
    }
}

/// Adds copy `c`'s share of the `(K − λB)` row at its local node `t`,
/// expressed in the unknowns of `U`. Uses the single-tile operators, whose
/// node order is the reference-mesh order.
#[allow(clippy::too_many_arguments)]
fn local_operator_row(
    k_loc: &super::csr::Csr,
    b_loc: &super::csr::Csr,
    c: usize,
    t: usize,
    lambda: f64,
    q2: &DMatrix<f64>,
    g: &DMatrix<f64>,
    row: &mut [f64],
) {
    let k = q2.ncols();
    let mut weights: std::collections::HashMap<usize, f64> = std::collections::HashMap::new();
    for (col, v) in k_loc.row_entries(t) {
        *weights.entry(col).or_insert(0.0) += v;
    }
    for (col, v) in b_loc.row_entries(t) {
        *weights.entry(col).or_insert(0.0) -= lambda * v;
    }
    for (t2, w) in weights {
        if w == 0.0 {
            continue;
        }
        for s in 0..k {
            if q2[(c, s)] == 0.0 {
                continue;
            }
            for m in 0..k {
                row[s * k + m] += w * q2[(c, s)] * g[(m, t2)];
            }
        }
    }
}
