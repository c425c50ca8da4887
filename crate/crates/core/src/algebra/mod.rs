//! Combinatorial descriptors of a glued volume.
//!
//! Everything in this module is exact integer arithmetic: the colored graph,
//! the involution generators with the order of the group they generate, and
//! the adjacency / auxiliary / structural matrices. The identity
//! `X = Q Qᵀ` is asserted entrywise, not numerically.

mod iso;

pub use iso::{colored_iso, graph_signature, GraphSignature, IsoMode};

use std::collections::HashSet;
use std::fmt;

use crate::error::AlgebraError;
use crate::tiling::{Div, SideLabel};

/// Vertex limit for the group-order closure.
pub const GROUP_ORDER_GUARD: usize = 10;

/// Edge-colored graph: vertices are copies, one edge per internal side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    edges: Vec<(usize, usize, SideLabel)>,
}

impl ColoredGraph {
    /// Edges are stored with `i < j` and at most one edge per
    /// `(vertex, label)` pair; violations panic.
    pub fn new(n: usize, mut edges: Vec<(usize, usize, SideLabel)>) -> ColoredGraph {
        let mut seen = HashSet::new();
        for e in &mut edges {
            assert!(e.0 != e.1, "self-loop");
            if e.0 > e.1 {
                *e = (e.1, e.0, e.2);
            }
            assert!(e.0 < n && e.1 < n, "vertex out of range");
            assert!(
                seen.insert((e.0, e.2)) && seen.insert((e.1, e.2)),
                "duplicate label at a vertex"
            );
        }
        edges.sort();
        ColoredGraph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, SideLabel)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == v || e.1 == v).count()
    }

    /// The neighbor of `v` through an edge labeled `l`, if any.
    pub fn neighbor(&self, v: usize, l: SideLabel) -> Option<usize> {
        self.edges.iter().find_map(|&(i, j, c)| {
            if c != l {
                None
            } else if i == v {
                Some(j)
            } else if j == v {
                Some(i)
            } else {
                None
            }
        })
    }

    /// DOT export with a `color` attribute per edge.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph div {\n");
        for v in 0..self.n {
            s.push_str(&format!("  {};\n", v + 1));
        }
        for &(i, j, c) in &self.edges {
            s.push_str(&format!("  {} -- {} [color=\"{}\"];\n", i + 1, j + 1, c));
        }
        s.push_str("}\n");
        s
    }
}

/// A permutation of `{0..n-1}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    pub fn new(map: Vec<usize>) -> Perm {
        let n = map.len();
        let mut seen = vec![false; n];
        for &x in &map {
            assert!(x < n && !seen[x], "not a permutation");
            seen[x] = true;
        }
        Perm(map)
    }

    /// Builds from disjoint 1-based transposition pairs, e.g. `&[(1,2),(5,6)]`.
    pub fn from_transpositions(n: usize, pairs: &[(usize, usize)]) -> Perm {
        let mut map: Vec<usize> = (0..n).collect();
        for &(a, b) in pairs {
            map[a - 1] = b - 1;
            map[b - 1] = a - 1;
        }
        Perm::new(map)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm((0..self.0.len()).map(|i| self.0[other.0[i]]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn is_involution(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| self.0[x] == i)
    }

    pub fn one_line(&self) -> &[usize] {
        &self.0
    }

    /// Cycle notation, 1-based; identity prints as `()`.
    pub fn cycles(&self) -> String {
        let mut out = String::new();
        let mut seen = vec![false; self.0.len()];
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            out.push('(');
            let mut x = start;
            loop {
                seen[x] = true;
                out.push_str(&(x + 1).to_string());
                x = self.0[x];
                if x == start {
                    break;
                }
                out.push(',');
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

/// The three involutions induced by the side labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGenerators {
    pub a: Perm,
    pub b: Perm,
    pub c: Perm,
}

impl PermGenerators {
    pub fn new(a: Perm, b: Perm, c: Perm) -> Result<PermGenerators, AlgebraError> {
        if a.n() != b.n() || b.n() != c.n() {
            return Err(AlgebraError::DegreeMismatch(a.n(), b.n().max(c.n())));
        }
        for (p, name) in [(&a, 'a'), (&b, 'b'), (&c, 'c')] {
            if !p.is_involution() {
                return Err(AlgebraError::NotInvolution(name));
            }
        }
        Ok(PermGenerators { a, b, c })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn get(&self, l: SideLabel) -> &Perm {
        match l {
            SideLabel::A => &self.a,
            SideLabel::B => &self.b,
            SideLabel::C => &self.c,
        }
    }

    pub fn as_array(&self) -> [&Perm; 3] {
        [&self.a, &self.b, &self.c]
    }

    /// True when `⟨a,b,c⟩` acts transitively on the points.
    pub fn transitive(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for g in self.as_array() {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows_in: &[&[i64]]) -> IntMatrix {
        let rows = rows_in.len();
        let cols = rows_in.first().map_or(0, |r| r.len());
        let mut m = IntMatrix::zeros(rows, cols);
        for (i, r) in rows_in.iter().enumerate() {
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn trace(&self) -> i64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// `self · selfᵀ`, exact.
    pub fn gram(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in 0..self.rows {
                let mut s = 0;
                for k in 0..self.cols {
                    s += self.get(i, k) * self.get(j, k);
                }
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Integer matrix–vector product.
    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) as f64)
    }

    /// Row-major CSV, one row per line.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<i64> = (0..self.cols).map(|j| self.get(i, j)).collect();
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// 0/1 adjacency matrix of the copy graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix(pub IntMatrix);

/// `X = D + A` where `D` counts internal sides per copy. Symmetric and
/// positive semidefinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxiliaryMatrix(pub IntMatrix);

/// Copy-by-internal-side incidence; each column has exactly two ones.
/// Columns are keyed by `(smaller copy, label)` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralMatrix {
    pub matrix: IntMatrix,
    pub column_keys: Vec<(usize, usize, SideLabel)>,
}

/// ±1 orientation vector spanning the kernel of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoColoring(pub Vec<i64>);

/// The colored graph of a volume: one vertex per copy, one edge per
/// internal side, colored by its label.
pub fn graph_of(div: &Div) -> ColoredGraph {
    ColoredGraph::new(
        div.n(),
        div.internal_sides()
            .iter()
            .map(|s| (s.copies.0, s.copies.1, s.label))
            .collect(),
    )
}

/// The involution generators: label `l` transposes the copies sharing each
/// internal `l`-side and fixes copies whose `l`-side is external.
pub fn generators_of(div: &Div) -> PermGenerators {
    let n = div.n();
    let mut maps = [
        (0..n).collect::<Vec<_>>(),
        (0..n).collect::<Vec<_>>(),
        (0..n).collect::<Vec<_>>(),
    ];
    for s in div.internal_sides() {
        let m = &mut maps[s.label.index()];
        m[s.copies.0] = s.copies.1;
        m[s.copies.1] = s.copies.0;
    }
    let [a, b, c] = maps;
    PermGenerators::new(Perm::new(a), Perm::new(b), Perm::new(c))
        .expect("side transpositions are involutions")
}

/// Order of `⟨a,b,c⟩` by breadth-first closure under composition.
pub fn group_order(gens: &PermGenerators) -> Result<u64, AlgebraError> {
    let n = gens.n();
    if n > GROUP_ORDER_GUARD {
        return Err(AlgebraError::SizeGuard(n, GROUP_ORDER_GUARD));
    }
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut frontier = vec![Perm::identity(n)];
    seen.insert(frontier[0].clone());
    while let Some(p) = frontier.pop() {
        for g in gens.as_array() {
            let q = g.compose(&p);
            if !seen.contains(&q) {
                seen.insert(q.clone());
                frontier.push(q);
            }
        }
    }
    Ok(seen.len() as u64)
}

pub fn adjacency(div: &Div) -> AdjacencyMatrix {
    let mut m = IntMatrix::zeros(div.n(), div.n());
    for s in div.internal_sides() {
        m.set(s.copies.0, s.copies.1, 1);
        m.set(s.copies.1, s.copies.0, 1);
    }
    AdjacencyMatrix(m)
}

pub fn auxiliary(div: &Div) -> AuxiliaryMatrix {
    let mut m = adjacency(div).0;
    for s in div.internal_sides() {
        m.set(s.copies.0, s.copies.0, m.get(s.copies.0, s.copies.0) + 1);
        m.set(s.copies.1, s.copies.1, m.get(s.copies.1, s.copies.1) + 1);
    }
    AuxiliaryMatrix(m)
}

/// The copy-by-side incidence matrix `Q` with `Q Qᵀ = X` exactly.
pub fn structural(div: &Div) -> StructuralMatrix {
    let mut keys: Vec<(usize, usize, SideLabel)> = div
        .internal_sides()
        .iter()
        .map(|s| (s.copies.0, s.copies.1, s.label))
        .collect();
    keys.sort_by_key(|&(i, _, l)| (i, l.index()));
    let mut m = IntMatrix::zeros(div.n(), keys.len());
    for (k, &(i, j, _)) in keys.iter().enumerate() {
        m.set(i, k, 1);
        m.set(j, k, 1);
    }
    StructuralMatrix {
        matrix: m,
        column_keys: keys,
    }
}

/// `w[i] = (−1)^{|word of copy i|}`; satisfies `X·w = 0` exactly.
pub fn orientation_coloring(div: &Div) -> TwoColoring {
    let w: Vec<i64> = div
        .placements()
        .iter()
        .map(|p| if p.word.len() % 2 == 0 { 1 } else { -1 })
        .collect();
    debug_assert!(auxiliary(div).0.mul_vec(&w).iter().all(|&x| x == 0));
    TwoColoring(w)
}
