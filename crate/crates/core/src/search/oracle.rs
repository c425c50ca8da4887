//! Brute-force reference enumeration for small `n`.
//!
//! Independent of the word-tree growth in the parent module: this one
//! enumerates *placement sets* directly (all subsets of the reachable
//! placement universe containing the base copy), filters geometrically, and
//! deduplicates with pairwise equivalence tests. Used to validate the fast
//! enumeration at `n ≤ 3`.

use crate::error::SearchError;
use crate::geom::{classify_triangles, Isometry, TriRelation};
use crate::tiling::{div_equivalent, Div, Placement, SideLabel, Tile, Word};

/// Guard: subset enumeration over the universe is exponential.
pub const ORACLE_GUARD: usize = 3;

/// All volumes of `n ≤ 3` copies up to equivalence, by subset enumeration.
pub fn enumerate_divs_oracle(tile: &Tile, n: usize) -> Result<Vec<Div>, SearchError> {
    if n == 0 || n > ORACLE_GUARD {
        return Err(SearchError::SizeGuard(n, ORACLE_GUARD));
    }
    let eps = tile.eps();
    // universe: distinct placements reachable by at most n-1 reflections
    let mut universe: Vec<Placement> = vec![Placement {
        copy: 0,
        word: Word::empty(),
        iso: Isometry::identity(),
    }];
    let mut frontier = universe.clone();
    for _ in 1..n {
        let mut next = Vec::new();
        for p in &frontier {
            for s in SideLabel::ALL {
                let cand = crate::tiling::reflect_across_side(tile, p, s);
                if !universe
                    .iter()
                    .chain(next.iter())
                    .any(|q: &Placement| q.iso.approx_eq(&cand.iso, eps))
                {
                    next.push(cand);
                }
            }
        }
        universe.extend(next.iter().cloned());
        frontier = next;
    }
    // subsets of size n containing the base placement
    let others: Vec<&Placement> = universe[1..].iter().collect();
    let mut picks = SubsetIter::new(others.len(), n - 1);
    let mut results: Vec<Div> = Vec::new();
    while let Some(idx) = picks.next() {
        let mut placements = vec![universe[0].clone()];
        placements.extend(idx.iter().map(|&i| others[i].clone()));
        for (i, p) in placements.iter_mut().enumerate() {
            p.copy = i;
        }
        // pairwise disjoint interiors
        let ok = (0..placements.len()).all(|i| {
            (i + 1..placements.len()).all(|j| {
                classify_triangles(
                    &placements[i].triangle(tile),
                    &placements[j].triangle(tile),
                    eps,
                ) == TriRelation::Disjoint
            })
        });
        if !ok {
            continue;
        }
        let div = Div::from_placements(tile.clone(), placements);
        // every copy needs an internal side, and the volume must be connected
        if !connected_by_sides(&div) {
            continue;
        }
        if results
            .iter()
            .all(|r| div_equivalent(r, &div).map(|o| o.is_none()).unwrap_or(true))
        {
            results.push(div);
        }
    }
    Ok(results)
}

fn connected_by_sides(div: &Div) -> bool {
    let n = div.n();
    if n == 1 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for s in div.internal_sides() {
        adj[s.copies.0].push(s.copies.1);
        adj[s.copies.1].push(s.copies.0);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

/// Iterates k-element index subsets of 0..n in lexicographic order.
struct SubsetIter {
    n: usize,
    k: usize,
    state: Option<Vec<usize>>,
}

impl SubsetIter {
    fn new(n: usize, k: usize) -> SubsetIter {
        let state = if k <= n { Some((0..k).collect()) } else { None };
        SubsetIter { n, k, state }
    }

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.state.clone()?;
        // advance
        let mut next = current.clone();
        let mut i = self.k;
        loop {
            if i == 0 {
                self.state = None;
                break;
            }
            i -= 1;
            if next[i] + 1 <= self.n - (self.k - i) {
                next[i] += 1;
                for j in i + 1..self.k {
                    next[j] = next[j - 1] + 1;
                }
                self.state = Some(next);
                break;
            }
        }
        Some(current)
    }
}
