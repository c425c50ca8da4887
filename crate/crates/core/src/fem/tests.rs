use super::*;
use crate::algebra::{orientation_coloring, structural};
use crate::fixtures;
use crate::spectral::compute_m;
use crate::tiling::{Div, Word};

use nalgebra::{DMatrix, DVector};

fn wv(strs: &[&str]) -> Vec<Word> {
    strs.iter().map(|s| s.parse().unwrap()).collect()
}

fn tile_div() -> Div {
    Div::build(fixtures::equilateral_tile(), &wv(&["e"])).unwrap()
}

fn rhombus() -> Div {
    Div::build(fixtures::equilateral_tile(), &wv(&["e", "a"])).unwrap()
}

#[test]
fn mass_sums_to_area_and_stiffness_rows_vanish() {
    for div in [tile_div(), rhombus()] {
        for level in 0..=4 {
            let gm = GlobalMesh::build(&div, level).unwrap();
            let (k, b) = assemble_unconstrained(&div, &gm);
            let area = div.n() as f64 * div.tile().area();
            assert!((b.sum() - area).abs() <= 1e-12, "mass sum at r={level}");
            for r in 0..k.n() {
                assert!(k.row_sum(r).abs() <= 1e-12, "stiffness row {r} at r={level}");
            }
        }
    }
}

#[test]
fn node_identification_counts() {
    // 2 copies sharing one side: shared nodes counted once
    let div = rhombus();
    let gm = GlobalMesh::build(&div, 3).unwrap();
    let per_copy = gm.ref_mesh().node_count(); // 45
    let shared = 9; // 2^3 + 1
    assert_eq!(gm.n_global(), 2 * per_copy - shared);
    // identification is independent of which copy enumerates it
    for &t in &gm.ref_mesh().side_nodes(0) {
        assert_eq!(gm.global_id(0, t), gm.global_id(1, t));
    }
}

#[test]
fn equilateral_ground_state_converges_quadratically() {
    // Dirichlet ground state of the unit-side regular triangle: 16π²/3
    let exact = 16.0 * std::f64::consts::PI * std::f64::consts::PI / 3.0;
    let mut errors = Vec::new();
    for level in [3, 4, 5] {
        let (_gm, op) = assemble(&tile_div(), level).unwrap();
        let (vals, _) = dirichlet_spectrum(&op, 1).unwrap();
        errors.push((vals[0] - exact).abs() / exact);
    }
    assert!(errors[2] < 0.02, "within 2% at r=5, got {}", errors[2]);
    // O(h²): each refinement divides the error by ~4
    assert!(errors[0] / errors[1] > 3.0);
    assert!(errors[1] / errors[2] > 3.0);
}

#[test]
fn domain_monotonicity_and_perron_mode() {
    let (_g1, op1) = assemble(&tile_div(), 4).unwrap();
    let (_g2, op2) = assemble(&rhombus(), 4).unwrap();
    let (l1, v1) = dirichlet_spectrum(&op1, 1).unwrap();
    let (l2, _) = dirichlet_spectrum(&op2, 1).unwrap();
    assert!(l2[0] < l1[0], "bigger domain, smaller ground eigenvalue");
    assert!(l1[0] > 0.0);
    // ground state has one sign
    let signs: Vec<f64> = v1[0].iter().map(|x| x.signum()).collect();
    assert!(signs.iter().all(|&s| s == signs[0]));
}

#[test]
fn rayleigh_monotonicity_under_refinement() {
    let div = rhombus();
    let mut previous: Option<Vec<f64>> = None;
    for level in [2, 3, 4] {
        let (_gm, op) = assemble(&div, level).unwrap();
        let (vals, _) = dirichlet_spectrum(&op, 5).unwrap();
        if let Some(prev) = previous {
            for (fine, coarse) in vals.iter().zip(&prev) {
                assert!(fine <= coarse, "conforming refinement lowers eigenvalues");
            }
        }
        previous = Some(vals);
    }
}

#[test]
fn vector_form_round_trips() {
    let div = rhombus();
    let gm = GlobalMesh::build(&div, 2).unwrap();
    // a deterministic "continuous" vector: value = global id
    let full: Vec<f64> = (0..gm.n_global()).map(|g| g as f64 * 0.25 - 1.0).collect();
    let vf = to_vector_form(&gm, &full);
    assert_eq!(vf.copies(), 2);
    let back = from_vector_form(&gm, &vf, 1e-14).unwrap();
    assert_eq!(back, full);
    // constant vector has identical blocks
    let ones = vec![1.0; gm.n_global()];
    let vf1 = to_vector_form(&gm, &ones);
    assert_eq!(vf1.block(0), vf1.block(1));
    // single copy: block = global vector
    let tgm = GlobalMesh::build(&tile_div(), 2).unwrap();
    let tv: Vec<f64> = (0..tgm.n_global()).map(|g| g as f64).collect();
    let tvf = to_vector_form(&tgm, &tv);
    assert_eq!(tvf.block(0), &tv[..]);
}

#[test]
fn discontinuous_vector_form_is_rejected() {
    let div = rhombus();
    let gm = GlobalMesh::build(&div, 2).unwrap();
    let full: Vec<f64> = vec![1.0; gm.n_global()];
    let vf = to_vector_form(&gm, &full);
    // break one shared node in copy 1's block
    let shared_local = gm.ref_mesh().side_nodes(0)[1];
    let mut data: Vec<Vec<f64>> = (0..2).map(|c| vf.block(c).to_vec()).collect();
    data[1][shared_local] += 0.5;
    let broken = VectorForm::from_blocks(data);
    assert!(matches!(
        from_vector_form(&gm, &broken, 1e-9),
        Err(crate::error::FemError::ContinuityViolation(_))
    ));
}

#[test]
fn identity_transplant_is_identity() {
    let div = rhombus();
    let gm = GlobalMesh::build(&div, 3).unwrap();
    let full: Vec<f64> = (0..gm.n_global()).map(|g| (g as f64).sin()).collect();
    let vf = to_vector_form(&gm, &full);
    let m = DMatrix::<f64>::identity(2, 2);
    let (out, check) = transplant(&vf, &m, &gm).unwrap();
    assert_eq!(out, vf);
    assert_eq!(check.max_internal_mismatch, 0.0);
}

#[test]
fn gww_pair_discrete_spectra_agree_exactly() {
    let tile = fixtures::scalene_tile();
    let left = fixtures::gww_left(tile.clone());
    let right = fixtures::gww_right(tile.clone());
    let (_gl, opl) = assemble(&left, 3).unwrap();
    let (_gr, opr) = assemble(&right, 3).unwrap();
    let (vl, _) = dirichlet_spectrum(&opl, 10).unwrap();
    let (vr, _) = dirichlet_spectrum(&opr, 10).unwrap();
    for (a, b) in vl.iter().zip(&vr) {
        assert!((a - b).abs() <= 1e-8 * b, "{a} vs {b}");
    }
}

#[test]
fn gww_transplant_end_to_end() {
    let tile = fixtures::scalene_tile();
    let left = fixtures::gww_left(tile.clone());
    let right = fixtures::gww_right(tile.clone());
    let level = 3;
    let (gl, opl) = assemble(&left, level).unwrap();
    let (gr, opr) = assemble(&right, level).unwrap();
    let m = compute_m(&structural(&left), &structural(&right), &fixtures::transplant_u()).unwrap();
    let (vals, vecs) = dirichlet_spectrum(&opl, 8).unwrap();
    // tile spectrum for the degenerate-mode split
    let (_tgm, top) = assemble(&Div::build(tile.clone(), &wv(&["e"])).unwrap(), level).unwrap();
    let (tvals, _) = dirichlet_spectrum(&top, 10).unwrap();
    let mut checked_regular = 0;
    let mut checked_degenerate = 0;
    for (lambda, vec) in vals.iter().zip(&vecs) {
        let full = expand_free(&gl, vec);
        let vf = to_vector_form(&gl, &full);
        let (out, check) = transplant(&vf, &m, &gr).unwrap();
        let degenerate = tvals.iter().any(|t| (t - lambda).abs() <= 1e-6 * lambda);
        if degenerate {
            // tile-degenerate modes are annihilated by the pure-form map
            let norm: f64 = (0..out.copies())
                .flat_map(|c| out.block(c).iter())
                .map(|v| v * v)
                .sum::<f64>()
                .sqrt();
            assert!(norm <= 1e-8);
            checked_degenerate += 1;
            continue;
        }
        assert!(check.max_internal_mismatch <= 1e-8, "continuity");
        assert!(check.max_external_abs <= 1e-8, "boundary trace");
        let out_full = from_vector_form(&gr, &out, 1e-8).unwrap();
        let res = eigen_residual(&gr, &opr, &out_full, *lambda);
        assert!(res <= 1e-6, "eigen residual {res}");
        checked_regular += 1;
    }
    assert!(checked_regular >= 6);
    assert!(checked_degenerate >= 1, "the window should contain a tile mode");
}

#[test]
fn perturbed_map_breaks_continuity() {
    let tile = fixtures::scalene_tile();
    let left = fixtures::gww_left(tile.clone());
    let right = fixtures::gww_right(tile);
    let level = 2;
    let (gl, opl) = assemble(&left, level).unwrap();
    let gr = GlobalMesh::build(&right, level).unwrap();
    let mut m =
        compute_m(&structural(&left), &structural(&right), &fixtures::transplant_u()).unwrap();
    m[(0, 0)] += 0.05; // now mᵀ no longer maps w_r into ⟨w_l⟩
    let (_, vecs) = dirichlet_spectrum(&opl, 1).unwrap();
    let full = expand_free(&gl, &vecs[0]);
    let vf = to_vector_form(&gl, &full);
    let (_, check) = transplant(&vf, &m, &gr).unwrap();
    assert!(check.max_internal_mismatch > 1e-4);
}

#[test]
fn hersch_rhombus_extension_is_exact() {
    let report = hersch_check(&rhombus(), 4).unwrap();
    assert_eq!(report.max_internal_abs, 0.0);
    assert!(report.relative_residual <= 1e-8);
    assert!(report.lambda_in_spectrum);
}

#[test]
fn hersch_single_copy_degenerates_to_tile() {
    let report = hersch_check(&tile_div(), 3).unwrap();
    assert!(report.relative_residual <= 1e-10);
    assert!(report.lambda_in_spectrum);
    assert!(report.nearest_lambda_gap <= 1e-10 * report.tile_lambda);
}

#[test]
fn iterative_path_matches_dense() {
    let (_gm, op) = assemble(&rhombus(), 4).unwrap();
    let (dense_vals, _) = dirichlet_spectrum_with(&op, 6, DENSE_LIMIT).unwrap();
    let (iter_vals, iter_vecs) = dirichlet_spectrum_with(&op, 6, 0).unwrap();
    for (a, b) in dense_vals.iter().zip(&iter_vals) {
        assert!((a - b).abs() <= 1e-8 * b.max(1.0), "{a} vs {b}");
    }
    // iterative vectors meet the residual contract too
    for (lambda, v) in iter_vals.iter().zip(&iter_vecs) {
        let kv = op.stiffness.matvec(v);
        let bv = op.mass.matvec(v);
        assert!((&kv - &bv * *lambda).norm() <= RESIDUAL_TOL * kv.norm());
    }
}

#[test]
fn fitted_side_map_recovers_fixture() {
    let tile = fixtures::scalene_tile();
    let left = fixtures::gww_left(tile.clone());
    let right = fixtures::gww_right(tile);
    let fit = fit_side_map(&left, &right, 3).unwrap();
    assert!(fit.fit_residual < 1e-6, "fit residual {}", fit.fit_residual);
    assert!(fit.orthogonality_gap < 1e-6);
    // the fitted map agrees with the frozen one up to global sign
    let u0 = fixtures::transplant_u();
    let d_plus = (&fit.u - &u0).norm();
    let d_minus = (&fit.u + &u0).norm();
    assert!(d_plus.min(d_minus) < 1e-6, "{d_plus} / {d_minus}");
}

#[test]
fn eigen_cluster_windows() {
    let clusters = eigen_clusters(&[1.0, 1.0 + 1e-9, 2.0, 3.0, 3.0, 3.0 + 2e-7]);
    assert_eq!(clusters, vec![0..2, 2..3, 3..6]);
}

#[test]
fn too_many_eigenpairs_rejected() {
    let (_gm, op) = assemble(&tile_div(), 1).unwrap();
    // r=1 single tile has no interior nodes at all
    assert_eq!(op.stiffness.n(), 0);
    assert!(matches!(
        dirichlet_spectrum(&op, 1),
        Err(crate::error::FemError::TooManyEigenpairs(1, 0))
    ));
}

#[test]
fn global_vector_csv_blocks() {
    let div = rhombus();
    let gm = GlobalMesh::build(&div, 1).unwrap();
    let full: Vec<f64> = (0..gm.n_global()).map(|g| g as f64).collect();
    let vf = to_vector_form(&gm, &full);
    let csv = vf.to_csv();
    assert_eq!(csv.lines().count(), 2);
    assert_eq!(csv.lines().next().unwrap().split(',').count(), 6);
}
