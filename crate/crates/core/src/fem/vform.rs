//! Vector forms: per-copy nodal blocks of a global function.
//!
//! Blocks are indexed by the canonical reference-mesh node order, so they
//! are comparable across copies and across volumes sharing a tile and a
//! refinement level. Transplantation mixes blocks with an `N×N` matrix and
//! *checks* continuity of the result instead of assuming it.

use nalgebra::{DMatrix, DVector};

use crate::error::FemError;
use crate::tiling::Div;

use super::eigen::dirichlet_spectrum;
use super::global::{assemble, GlobalMesh};

/// Per-copy nodal value blocks `(f₁, …, f_N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorForm {
    copies: usize,
    nodes_per_copy: usize,
    /// Block-major: value of copy `i` at local node `t` is `data[i][t]`.
    data: Vec<Vec<f64>>,
}

impl VectorForm {
    /// Builds from explicit per-copy blocks; all blocks must have the same
    /// length.
    pub fn from_blocks(blocks: Vec<Vec<f64>>) -> VectorForm {
        let nodes = blocks.first().map_or(0, |b| b.len());
        assert!(blocks.iter().all(|b| b.len() == nodes), "ragged blocks");
        VectorForm {
            copies: blocks.len(),
            nodes_per_copy: nodes,
            data: blocks,
        }
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn nodes_per_copy(&self) -> usize {
        self.nodes_per_copy
    }

    pub fn block(&self, copy: usize) -> &[f64] {
        &self.data[copy]
    }

    /// Per-copy CSV export: one line per copy, nodes in canonical order.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for block in &self.data {
            let row: Vec<String> = block.iter().map(|v| format!("{v:.12e}")).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Zero-extends a free-node vector to all global nodes.
pub fn expand_free(gm: &GlobalMesh, free: &DVector<f64>) -> Vec<f64> {
    let mut full = vec![0.0; gm.n_global()];
    for (t, &g) in gm.free_nodes().iter().enumerate() {
        full[g] = free[t];
    }
    full
}

/// Splits a full global vector into per-copy blocks.
pub fn to_vector_form(gm: &GlobalMesh, full: &[f64]) -> VectorForm {
    let l = gm.ref_mesh().node_count();
    let data: Vec<Vec<f64>> = (0..gm.n_copies())
        .map(|copy| (0..l).map(|t| full[gm.global_id(copy, t)]).collect())
        .collect();
    VectorForm {
        copies: gm.n_copies(),
        nodes_per_copy: l,
        data,
    }
}

/// Reassembles a global vector, requiring adjacent blocks to agree on
/// shared nodes within `tol` (absolute, relative to the max block value).
pub fn from_vector_form(gm: &GlobalMesh, vf: &VectorForm, tol: f64) -> Result<Vec<f64>, FemError> {
    if vf.copies != gm.n_copies() || vf.nodes_per_copy != gm.ref_mesh().node_count() {
        return Err(FemError::ShapeMismatch {
            expected: format!("{} copies × {} nodes", gm.n_copies(), gm.ref_mesh().node_count()),
            got: format!("{} copies × {} nodes", vf.copies, vf.nodes_per_copy),
        });
    }
    let scale = vf
        .data
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let mut full = vec![f64::NAN; gm.n_global()];
    let mut worst: f64 = 0.0;
    for copy in 0..vf.copies {
        for t in 0..vf.nodes_per_copy {
            let g = gm.global_id(copy, t);
            let v = vf.data[copy][t];
            if full[g].is_nan() {
                full[g] = v;
            } else {
                worst = worst.max((full[g] - v).abs());
            }
        }
    }
    if worst > tol * scale {
        return Err(FemError::ContinuityViolation(worst / scale));
    }
    Ok(full)
}

/// Continuity diagnostics of a transplant.
#[derive(Clone, Copy, Debug)]
pub struct TransplantCheck {
    /// Largest disagreement on an identified (internal-side) node.
    pub max_internal_mismatch: f64,
    /// Largest magnitude on a Dirichlet (external-side) node.
    pub max_external_abs: f64,
}

/// Applies the copy-mixing matrix: block `i` of the output is
/// `Σ_j m[i][j] · block j` of the input. Continuity on the target volume
/// is measured, not assumed.
pub fn transplant(
    vf: &VectorForm,
    m: &DMatrix<f64>,
    target: &GlobalMesh,
) -> Result<(VectorForm, TransplantCheck), FemError> {
    if m.nrows() != target.n_copies() || m.ncols() != vf.copies {
        return Err(FemError::ShapeMismatch {
            expected: format!("{} × {} mixing matrix", target.n_copies(), vf.copies),
            got: format!("{} × {}", m.nrows(), m.ncols()),
        });
    }
    if vf.nodes_per_copy != target.ref_mesh().node_count() {
        return Err(FemError::ShapeMismatch {
            expected: format!("{} nodes per copy", target.ref_mesh().node_count()),
            got: format!("{}", vf.nodes_per_copy),
        });
    }
    let l = vf.nodes_per_copy;
    let data: Vec<Vec<f64>> = (0..m.nrows())
        .map(|i| {
            (0..l)
                .map(|t| (0..vf.copies).map(|j| m[(i, j)] * vf.data[j][t]).sum())
                .collect()
        })
        .collect();
    let out = VectorForm {
        copies: m.nrows(),
        nodes_per_copy: l,
        data,
    };
    // continuity + boundary diagnostics on the target gluing
    let mut by_global: Vec<Option<f64>> = vec![None; target.n_global()];
    let mut max_internal: f64 = 0.0;
    let mut max_external: f64 = 0.0;
    for copy in 0..out.copies {
        for t in 0..l {
            let g = target.global_id(copy, t);
            let v = out.data[copy][t];
            if target.is_dirichlet(g) {
                max_external = max_external.max(v.abs());
            }
            match by_global[g] {
                None => by_global[g] = Some(v),
                Some(prev) => max_internal = max_internal.max((prev - v).abs()),
            }
        }
    }
    Ok((
        out,
        TransplantCheck {
            max_internal_mismatch: max_internal,
            max_external_abs: max_external,
        },
    ))
}

/// Report of the degenerate-mode construction: the tile eigenfunction
/// extended with alternating signs.
#[derive(Clone, Debug)]
pub struct HerschReport {
    pub tile_lambda: f64,
    /// `‖Ku − λBu‖ / ‖Ku‖` of the signed extension on the volume.
    pub relative_residual: f64,
    /// Largest magnitude of the extension on internal-side nodes.
    pub max_internal_abs: f64,
    /// Whether λ appears in the volume's own spectrum (within 1e-6·λ).
    pub lambda_in_spectrum: bool,
    pub nearest_lambda_gap: f64,
}

/// Builds the orientation-signed extension of the tile's ground state and
/// measures how exactly it solves the eigenproblem on the volume. On every
/// internal side the extension vanishes identically (adjacent copies carry
/// opposite signs and the tile state is zero on the tile boundary).
pub fn hersch_check(div: &Div, level: usize) -> Result<HerschReport, FemError> {
    let tile_div = Div::build(div.tile().clone(), &[crate::tiling::Word::empty()])?;
    let (tile_gm, tile_op) = assemble(&tile_div, level)?;
    let (tile_vals, tile_vecs) = dirichlet_spectrum(&tile_op, 1)?;
    let lambda = tile_vals[0];
    let phi = expand_free(&tile_gm, &tile_vecs[0]);

    let (gm, op) = assemble(div, level)?;
    let w = crate::algebra::orientation_coloring(div).0;
    let l = gm.ref_mesh().node_count();
    // tile_gm of a single copy keeps reference-mesh node order
    let mut full = vec![0.0; gm.n_global()];
    for copy in 0..div.n() {
        for t in 0..l {
            full[gm.global_id(copy, t)] = w[copy] as f64 * phi[tile_gm.global_id(0, t)];
        }
    }
    let mut max_internal: f64 = 0.0;
    for g in 0..gm.n_global() {
        if gm.is_internal_side_node(g) {
            max_internal = max_internal.max(full[g].abs());
        }
    }
    let free = DVector::from_iterator(
        gm.free_count(),
        gm.free_nodes().iter().map(|&g| full[g]),
    );
    let ku = op.stiffness.matvec(&free);
    let bu = op.mass.matvec(&free);
    let residual = (&ku - &bu * lambda).norm() / ku.norm().max(f64::MIN_POSITIVE);

    let k = gm.free_count().min(4 * div.n() + 8);
    let (div_vals, _) = dirichlet_spectrum(&op, k)?;
    let gap = div_vals
        .iter()
        .map(|v| (v - lambda).abs())
        .fold(f64::MAX, f64::min);
    Ok(HerschReport {
        tile_lambda: lambda,
        relative_residual: residual,
        max_internal_abs: max_internal,
        lambda_in_spectrum: gap <= 1e-6 * lambda,
        nearest_lambda_gap: gap,
    })
}

/// Residual of a full global vector as an eigenvector candidate.
pub fn eigen_residual(
    gm: &GlobalMesh,
    op: &super::global::DiscreteOperator,
    full: &[f64],
    lambda: f64,
) -> f64 {
    let free = DVector::from_iterator(
        gm.free_count(),
        gm.free_nodes().iter().map(|&g| full[g]),
    );
    let ku = op.stiffness.matvec(&free);
    let bu = op.mass.matvec(&free);
    (&ku - &bu * lambda).norm() / ku.norm().max(f64::MIN_POSITIVE)
}

/// Clusters eigenvalues that agree within `1e-6·λ`; returns index ranges.
pub fn eigen_clusters(values: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        let split = i == values.len()
            || (values[i] - values[i - 1]).abs() > 1e-6 * values[i].abs().max(1e-300);
        if split {
            out.push(start..i);
            start = i;
        }
    }
    out
}

