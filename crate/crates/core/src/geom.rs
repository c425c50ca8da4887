//! Plane isometries and triangle predicates.
//!
//! Everything here works on concrete coordinates; tolerances are always
//! relative to a caller-supplied scale (usually the tile diameter).

use nalgebra::{Matrix2, Vector2};

use crate::error::TilingError;

pub type Point = Vector2<f64>;

/// Orthogonality tolerance for the linear part of an isometry.
pub const ORTHO_TOL: f64 = 1e-12;

/// A rigid motion of the plane, `x ↦ L x + t` with `L` orthogonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    linear: Matrix2<f64>,
    translation: Vector2<f64>,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry {
            linear: Matrix2::identity(),
            translation: Vector2::zeros(),
        }
    }

    /// Builds an isometry from parts, checking `LᵀL = I` to [`ORTHO_TOL`].
    pub fn new(linear: Matrix2<f64>, translation: Vector2<f64>) -> Result<Self, TilingError> {
        let dev = (linear.transpose() * linear - Matrix2::identity()).norm();
        if dev > ORTHO_TOL {
            return Err(TilingError::NotOrthogonal(dev));
        }
        Ok(Isometry { linear, translation })
    }

    /// Reflection across the line through `p` and `q`.
    pub fn reflection(p: Point, q: Point) -> Self {
        let d = (q - p).normalize();
        let linear = Matrix2::new(
            2.0 * d.x * d.x - 1.0,
            2.0 * d.x * d.y,
            2.0 * d.x * d.y,
            2.0 * d.y * d.y - 1.0,
        );
        Isometry {
            linear,
            translation: p - linear * p,
        }
    }

    /// Rotation by `angle` about `center`.
    pub fn rotation(center: Point, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let linear = Matrix2::new(c, -s, s, c);
        Isometry {
            linear,
            translation: center - linear * center,
        }
    }

    pub fn apply(&self, x: Point) -> Point {
        self.linear * x + self.translation
    }

    /// Composition: `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            linear: self.linear * other.linear,
            translation: self.linear * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Isometry {
        let li = self.linear.transpose();
        Isometry {
            linear: li,
            translation: -(li * self.translation),
        }
    }

    /// +1 for orientation-preserving motions, −1 for reflections.
    pub fn orientation(&self) -> i32 {
        if self.linear.determinant() > 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn linear(&self) -> &Matrix2<f64> {
        &self.linear
    }

    pub fn translation(&self) -> &Vector2<f64> {
        &self.translation
    }

    /// Entrywise comparison of the 6 defining scalars.
    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        (self.linear - other.linear).abs().max() <= tol
            && (self.translation - other.translation).abs().max() <= tol
    }
}

/// How two triangles sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriRelation {
    /// Same labeled triangle: vertices match index by index.
    Coincide,
    /// Interiors are disjoint (shared boundary pieces allowed).
    Disjoint,
    /// Interiors intersect without the triangles being identical.
    Overlap,
}

pub fn signed_area(t: &[Point; 3]) -> f64 {
    0.5 * ((t[1] - t[0]).x * (t[2] - t[0]).y - (t[2] - t[0]).x * (t[1] - t[0]).y)
}

/// Separating-axis test on eps-shrunken triangles, so configurations that
/// merely share an edge or vertex count as disjoint.
pub fn classify_triangles(t1: &[Point; 3], t2: &[Point; 3], eps: f64) -> TriRelation {
    if (0..3).all(|k| (t1[k] - t2[k]).abs().max() <= eps) {
        return TriRelation::Coincide;
    }
    let shrink = |t: &[Point; 3]| -> [Point; 3] {
        let c = (t[0] + t[1] + t[2]) / 3.0;
        // shrink by a sliver proportional to eps so touching edges separate
        let f = 1.0 - 16.0 * eps / ((t[0] - c).norm() + (t[1] - c).norm() + (t[2] - c).norm());
        [c + (t[0] - c) * f, c + (t[1] - c) * f, c + (t[2] - c) * f]
    };
    let s1 = shrink(t1);
    let s2 = shrink(t2);
    let mut pair = [&s1, &s2];
    for _ in 0..2 {
        let (a, b) = (pair[0], pair[1]);
        for k in 0..3 {
            let e = a[(k + 1) % 3] - a[k];
            let axis = Vector2::new(-e.y, e.x);
            let pa: Vec<f64> = a.iter().map(|v| axis.dot(v)).collect();
            let pb: Vec<f64> = b.iter().map(|v| axis.dot(v)).collect();
            let (amin, amax) = (pa.iter().cloned().fold(f64::MAX, f64::min), pa.iter().cloned().fold(f64::MIN, f64::max));
            let (bmin, bmax) = (pb.iter().cloned().fold(f64::MAX, f64::min), pb.iter().cloned().fold(f64::MIN, f64::max));
            if amax < bmin || bmax < amin {
                return TriRelation::Disjoint;
            }
        }
        pair.swap(0, 1);
    }
    TriRelation::Overlap
}
