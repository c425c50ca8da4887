//! Colored-graph isomorphism by backtracking, and the cheap invariant
//! signature used to pre-filter candidates.

use crate::error::AlgebraError;
use crate::tiling::SideLabel;

use super::ColoredGraph;

/// Vertex limit for the backtracking search.
pub const ISO_GUARD: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoMode {
    /// Edge colors must match exactly.
    ExactColors,
    /// Colors may be permuted globally (all 6 permutations of a, b, c tried).
    UpToColorPermutation,
}

/// Invariant tuple: equal signatures are necessary for isomorphism.
///
/// Holds the sorted degree sequence, per-color edge counts (sorted, so it is
/// color-permutation invariant), and the sorted multiset of pairwise path
/// lengths (unreachable pairs recorded as `usize::MAX`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphSignature {
    pub degrees: Vec<usize>,
    pub color_counts: [usize; 3],
    pub path_lengths: Vec<usize>,
}

pub fn graph_signature(g: &ColoredGraph) -> GraphSignature {
    let n = g.n();
    let mut degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    degrees.sort();
    let mut color_counts = [0usize; 3];
    for &(_, _, c) in g.edges() {
        color_counts[c.index()] += 1;
    }
    color_counts.sort();
    // BFS all-pairs distances
    let mut adj = vec![Vec::new(); n];
    for &(i, j, _) in g.edges() {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut path_lengths = Vec::new();
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        for t in s + 1..n {
            path_lengths.push(dist[t]);
        }
    }
    path_lengths.sort();
    GraphSignature {
        degrees,
        color_counts,
        path_lengths,
    }
}

/// Searches for an isomorphism `g1 → g2`. Returns the vertex bijection and
/// the color map that realizes it (identity in exact mode).
pub fn colored_iso(
    g1: &ColoredGraph,
    g2: &ColoredGraph,
    mode: IsoMode,
) -> Result<Option<(Vec<usize>, [SideLabel; 3])>, AlgebraError> {
    let n = g1.n();
    if n > ISO_GUARD || g2.n() > ISO_GUARD {
        return Err(AlgebraError::SizeGuard(n.max(g2.n()), ISO_GUARD));
    }
    if n != g2.n() || g1.edges().len() != g2.edges().len() {
        return Ok(None);
    }
    if graph_signature(g1) != graph_signature(g2) {
        return Ok(None);
    }
    let identity = [SideLabel::A, SideLabel::B, SideLabel::C];
    let color_maps: Vec<[SideLabel; 3]> = match mode {
        IsoMode::ExactColors => vec![identity],
        IsoMode::UpToColorPermutation => {
            let l = SideLabel::ALL;
            let mut maps = Vec::new();
            for &x in &l {
                for &y in &l {
                    if y == x {
                        continue;
                    }
                    let z = *l.iter().find(|&&z| z != x && z != y).unwrap();
                    maps.push([x, y, z]);
                }
            }
            maps
        }
    };
    for map in color_maps {
        if let Some(bijection) = search(g1, g2, &map) {
            return Ok(Some((bijection, map)));
        }
    }
    Ok(None)
}

/// Per-vertex refinement key: degree plus which colors are present.
fn vertex_key(g: &ColoredGraph, v: usize, map: &[SideLabel; 3]) -> (usize, [bool; 3]) {
    let mut colors = [false; 3];
    for &(i, j, c) in g.edges() {
        if i == v || j == v {
            colors[map[c.index()].index()] = true;
        }
    }
    (g.degree(v), colors)
}

fn search(g1: &ColoredGraph, g2: &ColoredGraph, map: &[SideLabel; 3]) -> Option<Vec<usize>> {
    let n = g1.n();
    let id = [SideLabel::A, SideLabel::B, SideLabel::C];
    let keys1: Vec<_> = (0..n).map(|v| vertex_key(g1, v, map)).collect();
    let keys2: Vec<_> = (0..n).map(|v| vertex_key(g2, v, &id)).collect();
    {
        let mut s1 = keys1.clone();
        let mut s2 = keys2.clone();
        s1.sort();
        s2.sort();
        if s1 != s2 {
            return None;
        }
    }
    // order g1's vertices to keep the frontier connected where possible
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g1.degree(v)));
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn consistent(
        g1: &ColoredGraph,
        g2: &ColoredGraph,
        map: &[SideLabel; 3],
        assign: &[usize],
        v: usize,
        w: usize,
    ) -> bool {
        for &(i, j, c) in g1.edges() {
            let other = if i == v {
                j
            } else if j == v {
                i
            } else {
                continue;
            };
            if assign[other] != usize::MAX {
                // edge (v, other, c) must map to (w, assign[other], map[c])
                match g2.neighbor(w, map[c.index()]) {
                    Some(t) if t == assign[other] => {}
                    _ => return false,
                }
            }
        }
        true
    }
    fn backtrack(
        g1: &ColoredGraph,
        g2: &ColoredGraph,
        map: &[SideLabel; 3],
        order: &[usize],
        keys1: &[(usize, [bool; 3])],
        keys2: &[(usize, [bool; 3])],
        pos: usize,
        assign: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        for w in 0..g2.n() {
            if used[w] || keys1[v] != keys2[w] {
                continue;
            }
            if !consistent(g1, g2, map, assign, v, w) {
                continue;
            }
            assign[v] = w;
            used[w] = true;
            if backtrack(g1, g2, map, order, keys1, keys2, pos + 1, assign, used) {
                return true;
            }
            assign[v] = usize::MAX;
            used[w] = false;
        }
        false
    }
    if backtrack(
        g1, g2, map, &order, &keys1, &keys2, 0, &mut assign, &mut used,
    ) {
        Some(assign)
    } else {
        None
    }
}
