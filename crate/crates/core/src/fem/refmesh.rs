//! Uniform midpoint refinement of the tile in barycentric index space.
//!
//! Nodes are integer barycentric triples `(i, j, k)` with `i + j + k = 2^r`,
//! so side membership and the side reflections are exact; no floating-point
//! node matching happens anywhere.

use std::collections::HashMap;

use crate::error::FemError;
use crate::geom::Point;
use crate::tiling::Tile;

/// Refinement guard.
pub const REFINE_GUARD: usize = 7;

#[derive(Clone, Debug)]
pub struct RefMesh {
    level: usize,
    m: u32,
    /// Barycentric numerators, lexicographically sorted.
    nodes: Vec<[u32; 3]>,
    index: HashMap<[u32; 3], usize>,
    elements: Vec<[usize; 3]>,
}

impl RefMesh {
    /// Builds the level-`r` refinement: `4^r` elements,
    /// `(2^r+1)(2^r+2)/2` nodes.
    pub fn new(level: usize) -> Result<RefMesh, FemError> {
        if level > REFINE_GUARD {
            return Err(FemError::SizeGuard(level, REFINE_GUARD));
        }
        let m = 1u32 << level;
        let mut nodes = Vec::new();
        for i in 0..=m {
            for j in 0..=(m - i) {
                nodes.push([i, j, m - i - j]);
            }
        }
        nodes.sort();
        let index: HashMap<[u32; 3], usize> =
            nodes.iter().enumerate().map(|(t, &n)| (n, t)).collect();
        let mut elements = Vec::new();
        // upward cells
        for i in 0..m {
            for j in 0..(m - i) {
                let k = m - 1 - i - j;
                elements.push([
                    index[&[i + 1, j, k]],
                    index[&[i, j + 1, k]],
                    index[&[i, j, k + 1]],
                ]);
            }
        }
        // downward cells
        if m >= 2 {
            for i in 0..m - 1 {
                for j in 0..(m - 1 - i) {
                    let k = m - 2 - i - j;
                    elements.push([
                        index[&[i, j + 1, k + 1]],
                        index[&[i + 1, j, k + 1]],
                        index[&[i + 1, j + 1, k]],
                    ]);
                }
            }
        }
        Ok(RefMesh {
            level,
            m,
            nodes,
            index,
            elements,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[[u32; 3]] {
        &self.nodes
    }

    pub fn elements(&self) -> &[[usize; 3]] {
        &self.elements
    }

    pub fn index_of(&self, node: [u32; 3]) -> usize {
        self.index[&node]
    }

    /// Which tile sides the node lies on (side `s` ⇔ coordinate `s` is 0).
    pub fn side_membership(&self, node: usize) -> [bool; 3] {
        let n = self.nodes[node];
        [n[0] == 0, n[1] == 0, n[2] == 0]
    }

    /// Indices of all nodes on side `s`, including the two endpoints.
    pub fn side_nodes(&self, s: usize) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&t| self.nodes[t][s] == 0)
            .collect()
    }

    /// The node matched to `node` across side `s`: either itself (aligned
    /// endpoints) or with the two non-`s` coordinates swapped (reversed).
    pub fn side_partner(&self, node: usize, s: usize, reversed: bool) -> usize {
        let n = self.nodes[node];
        debug_assert_eq!(n[s], 0);
        if !reversed {
            return node;
        }
        let mut sw = n;
        let others: Vec<usize> = (0..3).filter(|&t| t != s).collect();
        sw.swap(others[0], others[1]);
        self.index[&sw]
    }

    /// Physical coordinates of every node under the tile's vertices.
    pub fn local_coords(&self, tile: &Tile) -> Vec<Point> {
        let v = tile.vertices();
        let m = self.m as f64;
        self.nodes
            .iter()
            .map(|n| (v[0] * n[0] as f64 + v[1] * n[1] as f64 + v[2] * n[2] as f64) / m)
            .collect()
    }
}

/// P1 element stiffness and mass on a triangle with the given vertices.
pub fn element_matrices(pts: [Point; 3]) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let area2 = (pts[1].x - pts[0].x) * (pts[2].y - pts[0].y)
        - (pts[2].x - pts[0].x) * (pts[1].y - pts[0].y);
    let area = area2.abs() / 2.0;
    let mut grad = [[0.0f64; 2]; 3];
    for a in 0..3 {
        let e = pts[(a + 2) % 3] - pts[(a + 1) % 3];
        grad[a] = [-e.y / area2, e.x / area2];
    }
    let mut k = [[0.0; 3]; 3];
    let mut b = [[0.0; 3]; 3];
    for a in 0..3 {
        for c in 0..3 {
            k[a][c] = area * (grad[a][0] * grad[c][0] + grad[a][1] * grad[c][1]);
            b[a][c] = area / 12.0 * if a == c { 2.0 } else { 1.0 };
        }
    }
    (k, b)
}
