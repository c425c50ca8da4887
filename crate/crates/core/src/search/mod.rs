//! Exhaustive enumeration of volumes and their classification.
//!
//! Volumes are grown one copy at a time: every placement of the current set
//! is reflected across each of its sides, coincident images are skipped,
//! overlapping extensions pruned, and the level is deduplicated by a
//! canonical geometric key, so two runs always produce the same census in
//! the same order.

mod census;
mod files;
pub mod oracle;
mod triples;

pub use census::{classify, find_pairs, Census, CensusClass, PairReport};
pub use files::{census_from_json, census_to_json, CensusFile, PairsFile};
pub use triples::{involution_triples, triple_key};

use crate::error::SearchError;
use crate::geom::{classify_triangles, TriRelation};
use crate::tiling::{reflect_across_side, Div, Placement, SideLabel, Tile, Word};

/// Enumeration guard.
pub const ENUM_GUARD: usize = 10;

/// Canonical key of a placement set: the lexicographically least serialized
/// geometry over all repositionings that send one copy to the base pose.
/// Two volumes get the same key iff they are equivalent (label-preserving).
fn canonical_key(tile: &Tile, placements: &[Placement]) -> Vec<i64> {
    let quantum = tile.diameter() * 1e-6;
    let mut best: Option<Vec<i64>> = None;
    for anchor in placements {
        let g = anchor.iso.inverse();
        let mut rows: Vec<[i64; 6]> = placements
            .iter()
            .map(|p| {
                let tri = Placement {
                    copy: p.copy,
                    word: Word::empty(),
                    iso: g.compose(&p.iso),
                }
                .triangle(tile);
                let q = |x: f64| {
                    let cell = x / quantum;
                    let fract = cell - cell.floor();
                    debug_assert!(
                        (fract - 0.5).abs() > 1e-3,
                        "coordinate sits on a quantization boundary"
                    );
                    cell.round() as i64
                };
                [
                    q(tri[0].x),
                    q(tri[0].y),
                    q(tri[1].x),
                    q(tri[1].y),
                    q(tri[2].x),
                    q(tri[2].y),
                ]
            })
            .collect();
        rows.sort();
        let flat: Vec<i64> = rows.into_iter().flatten().collect();
        if best.as_ref().is_none_or(|b| flat < *b) {
            best = Some(flat);
        }
    }
    best.unwrap_or_default()
}

/// All volumes of `n` copies of `tile`, up to label-preserving equivalence,
/// sorted by canonical key.
pub fn enumerate_divs(tile: &Tile, n: usize) -> Result<Vec<Div>, SearchError> {
    if n == 0 || n > ENUM_GUARD {
        return Err(SearchError::SizeGuard(n, ENUM_GUARD));
    }
    let root = Placement {
        copy: 0,
        word: Word::empty(),
        iso: crate::geom::Isometry::identity(),
    };
    let mut level: std::collections::BTreeMap<Vec<i64>, Vec<Placement>> =
        std::collections::BTreeMap::new();
    level.insert(canonical_key(tile, &[root.clone()]), vec![root]);
    let eps = tile.eps();
    for _size in 2..=n {
        let mut next: std::collections::BTreeMap<Vec<i64>, Vec<Placement>> =
            std::collections::BTreeMap::new();
        for placements in level.values() {
            for p in placements {
                'extension: for s in SideLabel::ALL {
                    let mut cand = reflect_across_side(tile, p, s);
                    let tri = cand.triangle(tile);
                    for q in placements {
                        match classify_triangles(&q.triangle(tile), &tri, eps) {
                            TriRelation::Coincide => continue 'extension,
                            TriRelation::Overlap => continue 'extension, // prune
                            TriRelation::Disjoint => {}
                        }
                    }
                    cand.copy = placements.len();
                    let mut grown = placements.clone();
                    grown.push(cand);
                    let key = canonical_key(tile, &grown);
                    next.entry(key).or_insert(grown);
                }
            }
        }
        level = next;
    }
    Ok(level
        .into_values()
        .map(|placements| Div::from_placements(tile.clone(), renumber(placements)))
        .collect())
}

/// Copies are renumbered 0..n in the stored order; words stay the gluing
/// chains that created them.
fn renumber(mut placements: Vec<Placement>) -> Vec<Placement> {
    for (i, p) in placements.iter_mut().enumerate() {
        p.copy = i;
    }
    placements
}

/// Canonical key of a built volume (exposed for dedup in callers and the
/// oracle comparison).
pub fn div_canonical_key(div: &Div) -> Vec<i64> {
    canonical_key(div.tile(), div.placements())
}

/// Canonical key up to relabeling: the least key over all side-label
/// permutations realizable as congruences of the tile. For a scalene tile
/// this is `div_canonical_key`; for the regular triangle it quotients by
/// all six relabelings, which is exactly geometric (label-blind)
/// equivalence.
pub fn div_canonical_key_up_to_colors(div: &Div) -> Vec<i64> {
    let tile = div.tile();
    let mut best: Option<Vec<i64>> = None;
    for map in color_permutations() {
        let Some(kappa) = tile.congruence_to_relabeled(tile, map) else {
            continue;
        };
        // apply the relabeling: replace each placement by p∘kappa⁻¹ on the
        // relabeled tile, which is the same figure with permuted labels
        let relabeled: Vec<Placement> = div
            .placements()
            .iter()
            .map(|p| Placement {
                copy: p.copy,
                word: Word::empty(),
                iso: p.iso.compose(&kappa.inverse()),
            })
            .collect();
        let key = canonical_key(tile, &relabeled);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.unwrap_or_else(|| div_canonical_key(div))
}

pub(crate) fn color_permutations() -> [[SideLabel; 3]; 6] {
    use SideLabel::{A, B, C};
    [
        [A, B, C],
        [A, C, B],
        [B, A, C],
        [B, C, A],
        [C, A, B],
        [C, B, A],
    ]
}
