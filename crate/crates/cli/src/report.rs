//! The transplantation certification pipeline behind `div transplant`.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use div_core::algebra::{auxiliary, orientation_coloring, structural};
use div_core::fem::{
    assemble, dirichlet_spectrum, eigen_residual, expand_free, fit_side_map, from_vector_form,
    to_vector_form, transplant, DiscreteOperator, GlobalMesh,
};
use div_core::nalgebra::DMatrix;
use div_core::spectral::{compute_m, cospectral, recover_u, verify_fixed_point, verify_w_transport};
use div_core::tiling::{Div, Word};

#[derive(Debug, Serialize, Deserialize)]
pub struct SpectraSection {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub max_rel_gap: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SideMapSection {
    pub source: String,
    pub fit_residual: Option<f64>,
    pub orthogonality_gap: Option<f64>,
    pub u: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ModeReport {
    pub index: usize,
    pub lambda: f64,
    pub kind: String,
    pub continuity_mismatch: f64,
    pub boundary_trace: f64,
    pub eigen_residual: Option<f64>,
    pub transplanted_norm: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TransplantReport {
    pub format_version: u32,
    pub refine: usize,
    pub k: usize,
    pub free_nodes: (usize, usize),
    pub auxiliary_cospectral: bool,
    pub spectra: SpectraSection,
    pub side_map: SideMapSection,
    pub fixed_point_residual: f64,
    pub recovery_gap: f64,
    pub w_transport_in_span: bool,
    pub modes: Vec<ModeReport>,
    pub pass: bool,
}

/// Tolerances of the per-mode checks.
const SPECTRA_TOL: f64 = 1e-8;
const CONTINUITY_TOL: f64 = 1e-8;
const RESIDUAL_TOL: f64 = 1e-6;

pub fn run_transplant(
    left: &Div,
    right: &Div,
    refine: usize,
    k: usize,
    frozen_u: Option<DMatrix<f64>>,
    jobs: usize,
) -> Result<TransplantReport> {
    let solve = |div: &Div| -> Result<(GlobalMesh, DiscreteOperator, Vec<f64>, Vec<div_core::nalgebra::DVector<f64>>)> {
        let (gm, op) = assemble(div, refine)?;
        let want = k.min(op.stiffness.n());
        let (vals, vecs) = dirichlet_spectrum(&op, want)?;
        Ok((gm, op, vals, vecs))
    };
    let ((gl, _opl, vl, vecl), (gr, opr, vr, _vecr)) = if jobs >= 2 {
        std::thread::scope(|scope| {
            let hl = scope.spawn(|| solve(left));
            let hr = scope.spawn(|| solve(right));
            let l = hl.join().expect("left solver thread");
            let r = hr.join().expect("right solver thread");
            Ok::<_, anyhow::Error>((l?, r?))
        })?
    } else {
        (solve(left)?, solve(right)?)
    };

    let max_rel_gap = vl
        .iter()
        .zip(&vr)
        .map(|(a, b)| (a - b).abs() / b.abs().max(1e-300))
        .fold(0.0f64, f64::max);

    let aux_cospectral = cospectral(&auxiliary(left), &auxiliary(right), None)?;

    let ql = structural(left);
    let qr = structural(right);
    let (u, side_map) = match frozen_u {
        Some(u) => (
            u.clone(),
            SideMapSection {
                source: "builtin".into(),
                fit_residual: None,
                orthogonality_gap: None,
                u: matrix_rows(&u),
            },
        ),
        None => {
            let fit = fit_side_map(left, right, refine.min(3))?;
            let section = SideMapSection {
                source: "fitted".into(),
                fit_residual: Some(fit.fit_residual),
                orthogonality_gap: Some(fit.orthogonality_gap),
                u: matrix_rows(&fit.u),
            };
            (fit.u, section)
        }
    };
    let m = compute_m(&ql, &qr, &u)?;
    let fixed_point_residual = verify_fixed_point(&m, &ql, &qr)?;
    let recovery_gap = (recover_u(&m, &ql, &qr)? - &u).norm();
    let wt = verify_w_transport(&m, &orientation_coloring(left), &orientation_coloring(right));

    // tile spectrum splits the modes into regular and tile-degenerate
    let tile_div = Div::build(left.tile().clone(), &[Word::empty()])?;
    let (_tgm, top) = assemble(&tile_div, refine)?;
    let tile_vals = dirichlet_spectrum(&top, top.stiffness.n().min(k + 10))?.0;

    let mut modes = Vec::new();
    let mut pass = aux_cospectral && max_rel_gap <= SPECTRA_TOL && fixed_point_residual <= 1e-10;
    for (i, (lambda, vec)) in vl.iter().zip(&vecl).enumerate() {
        let full = expand_free(&gl, vec);
        let vf = to_vector_form(&gl, &full);
        let (out, check) = transplant(&vf, &m, &gr)?;
        let norm: f64 = (0..out.copies())
            .flat_map(|c| out.block(c).iter())
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        let degenerate = tile_vals.iter().any(|t| (t - lambda).abs() <= 1e-6 * lambda);
        if degenerate {
            // tile modes are annihilated; their eigenvalue must still be
            // present on the right volume for the spectra check above
            modes.push(ModeReport {
                index: i,
                lambda: *lambda,
                kind: "tile_degenerate".into(),
                continuity_mismatch: check.max_internal_mismatch,
                boundary_trace: check.max_external_abs,
                eigen_residual: None,
                transplanted_norm: norm,
            });
            if norm > CONTINUITY_TOL {
                pass = false;
            }
            continue;
        }
        let residual = match from_vector_form(&gr, &out, CONTINUITY_TOL) {
            Ok(out_full) => Some(eigen_residual(&gr, &opr, &out_full, *lambda)),
            Err(_) => None,
        };
        let ok = check.max_internal_mismatch <= CONTINUITY_TOL
            && check.max_external_abs <= CONTINUITY_TOL
            && residual.is_some_and(|r| r <= RESIDUAL_TOL);
        if !ok {
            pass = false;
        }
        modes.push(ModeReport {
            index: i,
            lambda: *lambda,
            kind: "regular".into(),
            continuity_mismatch: check.max_internal_mismatch,
            boundary_trace: check.max_external_abs,
            eigen_residual: residual,
            transplanted_norm: norm,
        });
    }
    if !wt.parallel {
        pass = false;
    }
    if modes.is_empty() {
        bail!("no modes computed; increase --refine");
    }
    Ok(TransplantReport {
        format_version: 1,
        refine,
        k,
        free_nodes: (gl.free_count(), gr.free_count()),
        auxiliary_cospectral: aux_cospectral,
        spectra: SpectraSection {
            left: vl,
            right: vr,
            max_rel_gap,
        },
        side_map,
        fixed_point_residual,
        recovery_gap,
        w_transport_in_span: wt.parallel,
        modes,
        pass,
    })
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}
