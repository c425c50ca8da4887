//! Gluing copies of a labeled triangle by reflections.
//!
//! A volume is built from a list of gluing words. Each word names a chain of
//! side reflections; the resulting placements are deduplicated when a chain
//! closes onto an existing copy, and adjacency (internal sides) is derived
//! from geometric side coincidence rather than from the word tree, so cyclic
//! gluings around a vertex are handled.

mod io;

pub use io::{div_from_json, div_to_json, div_to_svg, DivFile, FORMAT_VERSION};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::TilingError;
use crate::geom::{classify_triangles, signed_area, Isometry, Point, TriRelation};

/// Relative geometric tolerance; scaled by the tile diameter everywhere.
pub const GEOM_EPS: f64 = 1e-9;

/// Side label. Side `i` of a tile is opposite vertex `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SideLabel {
    A,
    B,
    C,
}

impl SideLabel {
    pub const ALL: [SideLabel; 3] = [SideLabel::A, SideLabel::B, SideLabel::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> SideLabel {
        Self::ALL[i]
    }

    pub fn as_char(self) -> char {
        match self {
            SideLabel::A => 'a',
            SideLabel::B => 'b',
            SideLabel::C => 'c',
        }
    }

    pub fn from_char(c: char) -> Option<SideLabel> {
        match c {
            'a' => Some(SideLabel::A),
            'b' => Some(SideLabel::B),
            'c' => Some(SideLabel::C),
            _ => None,
        }
    }
}

impl fmt::Display for SideLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A gluing word, stored in application order (first reflection first).
///
/// The display form follows operator convention: `"cba"` means reflect
/// across `a` first, then `b`, then `c`, so the string reads right to left.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<SideLabel>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[SideLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word extended by one more gluing.
    pub fn extended(&self, s: SideLabel) -> Word {
        let mut w = self.0.clone();
        w.push(s);
        Word(w)
    }

    /// True when `self` is `parent` plus exactly one trailing letter.
    pub fn extends(&self, parent: &Word) -> bool {
        self.0.len() == parent.0.len() + 1 && self.0[..parent.0.len()] == parent.0[..]
    }

    /// Swaps two letters throughout the word.
    pub fn relabeled(&self, x: SideLabel, y: SideLabel) -> Word {
        Word(
            self.0
                .iter()
                .map(|&l| {
                    if l == x {
                        y
                    } else if l == y {
                        x
                    } else {
                        l
                    }
                })
                .collect(),
        )
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for l in self.0.iter().rev() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = TilingError;

    fn from_str(s: &str) -> Result<Word, TilingError> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars().rev() {
            letters.push(SideLabel::from_char(c).ok_or_else(|| TilingError::Word(s.to_string()))?);
        }
        Ok(Word(letters))
    }
}

/// Shape class of a tile, up to congruence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangleClass {
    Scalene,
    /// The two named sides have equal length.
    Isosceles(SideLabel, SideLabel),
    Equilateral,
}

/// The base triangle. Vertex `i` is opposite side `i`; `labels[i]` is the
/// label carried by side `i` (a permutation of A, B, C chosen by the caller).
#[derive(Clone, Debug, PartialEq)]
pub struct Tile {
    vertices: [Point; 3],
    labels: [SideLabel; 3],
}

impl Tile {
    pub fn new(vertices: [Point; 3]) -> Result<Tile, TilingError> {
        Tile::with_labels(vertices, [SideLabel::A, SideLabel::B, SideLabel::C])
    }

    pub fn with_labels(vertices: [Point; 3], labels: [SideLabel; 3]) -> Result<Tile, TilingError> {
        let area = signed_area(&vertices);
        let diam = Tile::diameter_of(&vertices);
        if area.abs() < GEOM_EPS * diam * diam {
            return Err(TilingError::DegenerateTile(area));
        }
        let mut seen = [false; 3];
        for l in labels {
            seen[l.index()] = true;
        }
        if seen != [true; 3] {
            return Err(TilingError::BadLabels);
        }
        Ok(Tile { vertices, labels })
    }

    fn diameter_of(v: &[Point; 3]) -> f64 {
        (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .map(|(i, j)| (v[i] - v[j]).norm())
            .fold(0.0, f64::max)
    }

    pub fn vertices(&self) -> &[Point; 3] {
        &self.vertices
    }

    pub fn labels(&self) -> &[SideLabel; 3] {
        &self.labels
    }

    pub fn diameter(&self) -> f64 {
        Tile::diameter_of(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices).abs()
    }

    /// Absolute tolerance used by all coincidence tests on this tile.
    pub fn eps(&self) -> f64 {
        GEOM_EPS * self.diameter()
    }

    /// Index of the side carrying `label`.
    pub fn side_of(&self, label: SideLabel) -> usize {
        self.labels.iter().position(|&l| l == label).unwrap()
    }

    /// Endpoints of side `i` in the canonical order `(vertex i+1, vertex i+2)`.
    pub fn side_endpoints(&self, side: usize) -> (Point, Point) {
        (self.vertices[(side + 1) % 3], self.vertices[(side + 2) % 3])
    }

    pub fn side_length(&self, label: SideLabel) -> f64 {
        let (p, q) = self.side_endpoints(self.side_of(label));
        (q - p).norm()
    }

    /// Reflection across the line containing the side labeled `label`.
    pub fn reflection(&self, label: SideLabel) -> Isometry {
        let (p, q) = self.side_endpoints(self.side_of(label));
        Isometry::reflection(p, q)
    }

    pub fn classification(&self) -> TriangleClass {
        let eps = self.eps();
        let eq = |x: SideLabel, y: SideLabel| (self.side_length(x) - self.side_length(y)).abs() <= eps;
        let ab = eq(SideLabel::A, SideLabel::B);
        let bc = eq(SideLabel::B, SideLabel::C);
        let ac = eq(SideLabel::A, SideLabel::C);
        match (ab, bc, ac) {
            (true, true, _) | (true, _, true) | (_, true, true) => TriangleClass::Equilateral,
            (true, _, _) => TriangleClass::Isosceles(SideLabel::A, SideLabel::B),
            (_, true, _) => TriangleClass::Isosceles(SideLabel::B, SideLabel::C),
            (_, _, true) => TriangleClass::Isosceles(SideLabel::A, SideLabel::C),
            _ => TriangleClass::Scalene,
        }
    }

    /// Label-preserving congruence `self → other`, if one exists. The map
    /// sends the vertex opposite each label to the vertex opposite the same
    /// label and may be orientation-reversing.
    pub fn congruence_to(&self, other: &Tile) -> Option<Isometry> {
        self.congruence_to_relabeled(other, [SideLabel::A, SideLabel::B, SideLabel::C])
    }

    /// Congruence `self → other` matching label `l` of `self` to `map[l]`
    /// of `other`.
    pub fn congruence_to_relabeled(&self, other: &Tile, map: [SideLabel; 3]) -> Option<Isometry> {
        let eps = self.eps().max(other.eps());
        for l in SideLabel::ALL {
            let m = map[l.index()];
            if (self.side_length(l) - other.side_length(m)).abs() > eps {
                return None;
            }
        }
        // source vertices ordered by label, target vertices by mapped label
        let src: Vec<Point> = SideLabel::ALL
            .iter()
            .map(|&l| self.vertices[self.side_of(l)])
            .collect();
        let dst: Vec<Point> = SideLabel::ALL
            .iter()
            .map(|&l| other.vertices[other.side_of(map[l.index()])])
            .collect();
        isometry_from_triples(&src, &dst, eps)
    }
}

/// Solves for the isometry mapping three non-collinear points to three
/// targets, if the correspondence is rigid.
fn isometry_from_triples(src: &[Point], dst: &[Point], eps: f64) -> Option<Isometry> {
    let e1 = src[1] - src[0];
    let e2 = src[2] - src[0];
    let f1 = dst[1] - dst[0];
    let f2 = dst[2] - dst[0];
    let det = e1.x * e2.y - e2.x * e1.y;
    if det.abs() < 1e-300 {
        return None;
    }
    // linear part L with L e1 = f1, L e2 = f2
    let inv = nalgebra::Matrix2::new(e2.y / det, -e2.x / det, -e1.y / det, e1.x / det);
    let basis = nalgebra::Matrix2::from_columns(&[f1, f2]);
    let linear = basis * inv;
    let iso = Isometry::new(linear, dst[0] - linear * src[0]).ok()?;
    for k in 0..3 {
        if (iso.apply(src[k]) - dst[k]).abs().max() > 16.0 * eps {
            return None;
        }
    }
    Some(iso)
}

/// One placed copy of the tile.
#[derive(Clone, Debug)]
pub struct Placement {
    pub copy: usize,
    pub word: Word,
    pub iso: Isometry,
}

impl Placement {
    pub fn orientation(&self) -> i32 {
        self.iso.orientation()
    }

    /// Images of the three labeled vertices.
    pub fn triangle(&self, tile: &Tile) -> [Point; 3] {
        let v = tile.vertices();
        [self.iso.apply(v[0]), self.iso.apply(v[1]), self.iso.apply(v[2])]
    }
}

/// An internal side shared by two copies; `copies.0 < copies.1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InternalSide {
    pub copies: (usize, usize),
    pub label: SideLabel,
}

/// A tile side lying on the outer boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExternalSide {
    pub copy: usize,
    pub label: SideLabel,
}

/// A glued volume: placements plus the derived side partition.
#[derive(Clone, Debug)]
pub struct Div {
    tile: Tile,
    placements: Vec<Placement>,
    internal: Vec<InternalSide>,
    external: Vec<ExternalSide>,
}

/// Result entry of [`Div::check_realizable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealizabilityIssue {
    /// Interiors intersect without being the same copy: a genuine violation.
    Overlap(usize, usize),
    /// Two placements have identical images. Allowed by the gluing rules
    /// (listed for information; `build` deduplicates these).
    Coincidence(usize, usize),
}

/// Reflects placement `p` across the global line through the image of its
/// side `s`. The word grows by one letter and orientation flips.
pub fn reflect_across_side(tile: &Tile, p: &Placement, s: SideLabel) -> Placement {
    Placement {
        copy: p.copy,
        word: p.word.extended(s),
        iso: p.iso.compose(&tile.reflection(s)),
    }
}

impl Div {
    /// Glues one copy per word. Words must form a tree rooted at the empty
    /// word; chains that close onto an existing copy are deduplicated.
    pub fn build(tile: Tile, words: &[Word]) -> Result<Div, TilingError> {
        if words.is_empty() || !words[0].is_empty() {
            return Err(TilingError::Word(
                words.first().map(|w| w.to_string()).unwrap_or_default(),
            ));
        }
        let eps = tile.eps();
        let mut placements: Vec<Placement> = vec![Placement {
            copy: 0,
            word: Word::empty(),
            iso: Isometry::identity(),
        }];
        for w in words.iter().skip(1) {
            // the word list is a tree as a set: every word's one-shorter
            // prefix must be present (copy numbering need not follow
            // construction order)
            if !words.iter().any(|parent| w.extends(parent)) {
                return Err(TilingError::Word(w.to_string()));
            }
            // the direct parent may have been deduplicated away; recompose
            // the full chain in that case
            let iso = match placements.iter().find(|p| w.extends(&p.word)) {
                Some(p) => p.iso.compose(&tile.reflection(*w.letters().last().unwrap())),
                None => w
                    .letters()
                    .iter()
                    .fold(Isometry::identity(), |iso, &l| iso.compose(&tile.reflection(l))),
            };
            let cand = Placement {
                copy: placements.len(),
                word: w.clone(),
                iso,
            };
            let tri = cand.triangle(&tile);
            let mut coincides = false;
            for p in &placements {
                match classify_triangles(&p.triangle(&tile), &tri, eps) {
                    TriRelation::Coincide => {
                        coincides = true;
                        break;
                    }
                    TriRelation::Overlap => return Err(TilingError::Overlap(p.copy, cand.copy)),
                    TriRelation::Disjoint => {}
                }
            }
            if !coincides {
                placements.push(cand);
            }
        }
        let (internal, external) = derive_sides(&tile, &placements);
        Ok(Div {
            tile,
            placements,
            internal,
            external,
        })
    }

    /// Builds directly from placements, deriving the side partition. Used by
    /// the brute-force enumeration oracle; no overlap checking is done here.
    pub fn from_placements(tile: Tile, placements: Vec<Placement>) -> Div {
        let (internal, external) = derive_sides(&tile, &placements);
        Div {
            tile,
            placements,
            internal,
            external,
        }
    }

    pub fn tile(&self) -> &Tile {
        &self.tile
    }

    pub fn n(&self) -> usize {
        self.placements.len()
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn internal_sides(&self) -> &[InternalSide] {
        &self.internal
    }

    pub fn external_sides(&self) -> &[ExternalSide] {
        &self.external
    }

    pub fn words(&self) -> Vec<Word> {
        self.placements.iter().map(|p| p.word.clone()).collect()
    }

    /// Counts of external sides by label, `[a, b, c]`.
    pub fn external_counts(&self) -> [usize; 3] {
        let mut c = [0usize; 3];
        for e in &self.external {
            c[e.label.index()] += 1;
        }
        c
    }

    /// Reports pairs of placements violating (or exercising) the
    /// disjoint-or-coincide rule. `build` output never reports anything.
    pub fn check_realizable(&self, eps: f64) -> Vec<RealizabilityIssue> {
        let mut out = Vec::new();
        for i in 0..self.placements.len() {
            let ti = self.placements[i].triangle(&self.tile);
            for j in i + 1..self.placements.len() {
                let tj = self.placements[j].triangle(&self.tile);
                match classify_triangles(&ti, &tj, eps) {
                    TriRelation::Overlap => out.push(RealizabilityIssue::Overlap(i, j)),
                    TriRelation::Coincide => out.push(RealizabilityIssue::Coincidence(i, j)),
                    TriRelation::Disjoint => {}
                }
            }
        }
        out
    }

    pub fn is_realizable(&self) -> bool {
        self.check_realizable(self.tile.eps())
            .iter()
            .all(|v| matches!(v, RealizabilityIssue::Coincidence(_, _)))
    }

    /// Rebuilds the volume with labels `x` and `y` exchanged in every word.
    pub fn relabel_swap(&self, x: SideLabel, y: SideLabel) -> Result<Div, TilingError> {
        let words: Vec<Word> = self.words().iter().map(|w| w.relabeled(x, y)).collect();
        Div::build(self.tile.clone(), &words)
    }

    /// Tile-local coordinates of a global point lying in `copy`.
    pub fn to_local(&self, copy: usize, x: Point) -> Result<Point, TilingError> {
        let p = self
            .placements
            .get(copy)
            .ok_or(TilingError::CopyIndex(copy, self.n()))?;
        let xi = p.iso.inverse().apply(x);
        // barycentric containment check
        let v = self.tile.vertices();
        let det = signed_area(v) * 2.0;
        let l0 = ((v[1].x - xi.x) * (v[2].y - xi.y) - (v[2].x - xi.x) * (v[1].y - xi.y)) / det;
        let l1 = ((v[2].x - xi.x) * (v[0].y - xi.y) - (v[0].x - xi.x) * (v[2].y - xi.y)) / det;
        let l2 = 1.0 - l0 - l1;
        let worst = l0.min(l1).min(l2);
        if worst < -GEOM_EPS * 16.0 {
            return Err(TilingError::OutOfCopy { copy, coord: worst });
        }
        Ok(xi)
    }

    /// Global coordinates of a tile-local point under `copy`'s placement.
    pub fn to_global(&self, copy: usize, xi: Point) -> Result<Point, TilingError> {
        let p = self
            .placements
            .get(copy)
            .ok_or(TilingError::CopyIndex(copy, self.n()))?;
        Ok(p.iso.apply(xi))
    }
}

/// Derives internal/external sides from geometric side coincidence.
///
/// A side is internal when another copy's side of the same label occupies
/// the same segment. Coincident sides with different labels (possible only
/// for symmetric tiles in exotic hand-built inputs) are left external.
fn derive_sides(tile: &Tile, placements: &[Placement]) -> (Vec<InternalSide>, Vec<ExternalSide>) {
    let eps = tile.eps();
    let quantum = eps.max(tile.diameter() * 1e-12);
    let mut seen: std::collections::HashMap<[i64; 4], Vec<(usize, SideLabel)>> =
        std::collections::HashMap::new();
    for p in placements {
        for label in SideLabel::ALL {
            let side = tile.side_of(label);
            let (a, b) = tile.side_endpoints(side);
            let (ga, gb) = (p.iso.apply(a), p.iso.apply(b));
            let q = |x: f64| (x / (64.0 * quantum)).round() as i64;
            let mut key = [[q(ga.x), q(ga.y)], [q(gb.x), q(gb.y)]];
            key.sort();
            seen.entry([key[0][0], key[0][1], key[1][0], key[1][1]])
                .or_default()
                .push((p.copy, label));
        }
    }
    let mut internal = Vec::new();
    let mut matched: std::collections::HashSet<(usize, SideLabel)> = std::collections::HashSet::new();
    for group in seen.values() {
        if group.len() == 2 && group[0].1 == group[1].1 && group[0].0 != group[1].0 {
            let (i, j) = (group[0].0.min(group[1].0), group[0].0.max(group[1].0));
            internal.push(InternalSide {
                copies: (i, j),
                label: group[0].1,
            });
            matched.insert(group[0]);
            matched.insert(group[1]);
        }
    }
    internal.sort_by_key(|s| (s.copies.0, s.label.index(), s.copies.1));
    let mut external = Vec::new();
    for p in placements {
        for label in SideLabel::ALL {
            if !matched.contains(&(p.copy, label)) {
                external.push(ExternalSide { copy: p.copy, label });
            }
        }
    }
    external.sort_by_key(|e| (e.copy, e.label.index()));
    (internal, external)
}

/// Searches for a label-preserving plane isometry `g` with `g·v1 = v2`.
///
/// Returns `TileMismatch` when the tiles are not congruent as labeled
/// triangles. Reflections are included in the search automatically: each
/// candidate maps copy 0 of `v1` onto some copy of `v2` vertex by vertex.
pub fn div_equivalent(v1: &Div, v2: &Div) -> Result<Option<Isometry>, TilingError> {
    div_equivalent_relabeled(v1, v2, [SideLabel::A, SideLabel::B, SideLabel::C])
}

/// Equivalence search through a fixed relabeling: `g` must map each copy's
/// side labeled `l` onto a side labeled `map[l]`.
pub fn div_equivalent_relabeled(
    v1: &Div,
    v2: &Div,
    map: [SideLabel; 3],
) -> Result<Option<Isometry>, TilingError> {
    let kappa = v1
        .tile
        .congruence_to_relabeled(&v2.tile, map)
        .ok_or(TilingError::TileMismatch)?;
    if v1.n() != v2.n() {
        return Ok(None);
    }
    let eps = 64.0 * v1.tile.eps().max(v2.tile.eps());
    let base = v1.placements[0].iso;
    for target in &v2.placements {
        // candidate g: copy 0 of v1 -> this copy of v2, labels through `map`
        let g = target.iso.compose(&kappa).compose(&base.inverse());
        if matches(v1, v2, &g, &kappa, eps) {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

fn matches(v1: &Div, v2: &Div, g: &Isometry, kappa: &Isometry, eps: f64) -> bool {
    let mut used = vec![false; v2.n()];
    for p in &v1.placements {
        let img: Vec<Point> = v1
            .tile
            .vertices()
            .iter()
            .map(|&v| g.apply(p.iso.apply(v)))
            .collect();
        let mut found = false;
        for (j, q) in v2.placements.iter().enumerate() {
            if used[j] {
                continue;
            }
            // q's vertices, with v1's vertex k corresponding to kappa(vertex k)
            let tgt: Vec<Point> = v1
                .tile
                .vertices()
                .iter()
                .map(|&v| q.iso.apply(kappa.apply(v)))
                .collect();
            if (0..3).all(|k| (img[k] - tgt[k]).abs().max() <= eps) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if !found {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests;
