//! Built-in reference volumes and matrices.
//!
//! The headline fixture is the classical Gordon–Webb–Wolpert pair: two
//! seven-copy volumes that are cospectral but not equivalent. Word lists,
//! generator actions, auxiliary matrices and the side-data rotation are all
//! cross-checked against each other in the test suite.

use nalgebra::DMatrix;

use crate::geom::Point;
use crate::tiling::{Div, Tile, Word};

/// Unit-side equilateral tile.
pub fn equilateral_tile() -> Tile {
    Tile::new([
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(0.5, 3f64.sqrt() / 2.0),
    ])
    .unwrap()
}

/// An acute scalene tile. With this tile the two built-in seven-copy
/// volumes are genuinely non-congruent, so the pair exercises the full
/// cospectral-but-not-equivalent scenario.
pub fn scalene_tile() -> Tile {
    Tile::new([
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(0.35, 0.75),
    ])
    .unwrap()
}

/// An acute isosceles tile with sides `a` and `c` of equal length
/// (apex at vertex B).
pub fn isosceles_tile() -> Tile {
    Tile::new([
        Point::new(0.0, 0.0),
        Point::new(0.5, 0.9),
        Point::new(1.0, 0.0),
    ])
    .unwrap()
}

fn words(strings: &[&str]) -> Vec<Word> {
    strings.iter().map(|s| s.parse().unwrap()).collect()
}

/// Gluing words of the left volume of the seven-triangle pair. Copy order
/// matches the generator cycles `a=(4,6)(5,7)`, `b=(3,5)(2,4)`, `c=(1,2)(5,6)`
/// (1-based).
pub fn gww_left_words() -> Vec<Word> {
    words(&["e", "c", "bcabc", "bc", "cabc", "abc", "acabc"])
}

/// Gluing words of the right volume; generators `a=(3,7)(2,6)`,
/// `b=(3,5)(2,4)`, `c=(1,2)(5,6)` (1-based).
pub fn gww_right_words() -> Vec<Word> {
    words(&["e", "c", "bcac", "bc", "cac", "ac", "abcac"])
}

/// Words of the four-copy chain volume whose generator action is
/// `a=(1,2)`, `b=(2,3)`, `c=(3,4)` (1-based).
pub fn chain4_words() -> Vec<Word> {
    words(&["e", "a", "ba", "cba"])
}

pub fn gww_left(tile: Tile) -> Div {
    Div::build(tile, &gww_left_words()).expect("left fixture is realizable")
}

pub fn gww_right(tile: Tile) -> Div {
    Div::build(tile, &gww_right_words()).expect("right fixture is realizable")
}

/// Auxiliary matrix of the left volume, as published.
pub const X_LEFT: [[i64; 7]; 7] = [
    [1, 1, 0, 0, 0, 0, 0],
    [1, 2, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 1, 0, 0],
    [0, 1, 0, 2, 0, 1, 0],
    [0, 0, 1, 0, 3, 1, 1],
    [0, 0, 0, 1, 1, 2, 0],
    [0, 0, 0, 0, 1, 0, 1],
];

/// Auxiliary matrix of the right volume, as published.
pub const X_RIGHT: [[i64; 7]; 7] = [
    [1, 1, 0, 0, 0, 0, 0],
    [1, 3, 0, 1, 0, 1, 0],
    [0, 0, 2, 0, 1, 0, 1],
    [0, 1, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 2, 1, 0],
    [0, 1, 0, 0, 1, 2, 0],
    [0, 0, 1, 0, 0, 0, 1],
];

/// Published spectrum shared by [`X_LEFT`] and [`X_RIGHT`].
pub const X_SPECTRUM: [f64; 7] = [0.0, 0.225377, 1.0, 1.0, 2.18589, 3.36041, 4.22833];

/// Published orientation two-colorings (copy order as above).
pub const W_LEFT: [i64; 7] = [1, -1, -1, 1, 1, -1, -1];
pub const W_RIGHT: [i64; 7] = [1, -1, 1, 1, -1, 1, -1];

/// Structural matrices as published. Note: the two printings are swapped
/// relative to the volumes they belong to, and `Q_PRINTED_LEFT` is missing
/// one entry (its fifth column has a single 1). The tests pin both facts;
/// the derived matrices from [`crate::algebra::structural`] are the ground
/// truth here.
pub const Q_PRINTED_LEFT: [[i64; 6]; 7] = [
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 1, 1],
    [1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0],
    [0, 1, 1, 0, 0, 0],
    [0, 0, 1, 1, 0, 0],
    [1, 0, 0, 0, 0, 0],
];

pub const Q_PRINTED_RIGHT: [[i64; 6]; 7] = [
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 1],
    [1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 1, 0],
    [1, 1, 1, 0, 0, 0],
    [0, 0, 1, 1, 0, 0],
    [0, 1, 0, 0, 0, 0],
];

/// Side-data rotation for transplanting left-volume solutions to the right
/// volume, relative to the derived structural matrices' column order
/// (sorted by smaller copy index, then label). Scaled by `1/√2` this is
/// orthogonal. Matches the published rotation up to transposition and
/// column bookkeeping.
pub const U_SIGNS: [[i64; 6]; 6] = [
    [1, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 1, 0],
    [0, 1, 1, 0, 0, 0],
    [0, 0, 0, -1, 1, 0],
    [0, -1, 1, 0, 0, 0],
    [-1, 0, 0, 0, 0, 1],
];

/// Orthonormal side-data map `U` (left → right) as a dense matrix.
pub fn transplant_u() -> DMatrix<f64> {
    let s = 1.0 / 2f64.sqrt();
    DMatrix::from_fn(6, 6, |i, j| U_SIGNS[i][j] as f64 * s)
}

/// The published two-parameter transplantation family, evaluated at `(a, b)`.
/// Our computed left→right matrix equals the transpose of the member at
/// `(3/7, 4/7)` scaled by `1/√2`.
pub fn m_family(a: f64, b: f64) -> DMatrix<f64> {
    let pat: [[(i64, i64); 7]; 7] = [
        [(1, 0), (0, 1), (1, 0), (0, -1), (-1, 0), (0, -1), (-1, 0)],
        [(0, 1), (1, 0), (-1, 0), (0, 1), (0, -1), (-1, 0), (1, 0)],
        [(-1, 0), (1, 0), (0, 1), (0, 1), (1, 0), (-1, 0), (0, -1)],
        [(0, -1), (0, 1), (0, -1), (1, 0), (-1, 0), (1, 0), (-1, 0)],
        [(1, 0), (0, 1), (1, 0), (1, 0), (0, 1), (1, 0), (0, 1)],
        [(0, 1), (1, 0), (-1, 0), (-1, 0), (1, 0), (0, 1), (0, -1)],
        [(-1, 0), (1, 0), (0, 1), (-1, 0), (0, -1), (0, 1), (1, 0)],
    ];
    DMatrix::from_fn(7, 7, |i, j| {
        let (ca, cb) = pat[i][j];
        ca as f64 * a + cb as f64 * b
    })
}
