//! The abstract search space: transitive involution triples.
//!
//! Every volume of `n` copies induces a triple of involutions of `S_n`
//! generating a transitive group; this module enumerates all such triples
//! up to simultaneous conjugation (point relabeling). Geometric volumes are
//! the realizable subset, which depends on the tile.

use std::collections::HashSet;

use crate::algebra::{Perm, PermGenerators};
use crate::error::SearchError;

/// Triple enumeration guard.
pub const TRIPLES_GUARD: usize = 8;

/// All involutions of `S_n`, identity included.
fn involutions(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut map: Vec<usize> = (0..n).collect();
    fn rec(remaining: &[usize], map: &mut Vec<usize>, out: &mut Vec<Perm>) {
        match remaining.split_first() {
            None => out.push(Perm::new(map.clone())),
            Some((&x, rest)) => {
                // x fixed
                rec(rest, map, out);
                // x swapped with each later point
                for (k, &y) in rest.iter().enumerate() {
                    map[x] = y;
                    map[y] = x;
                    let mut rest2: Vec<usize> = rest.to_vec();
                    rest2.remove(k);
                    rec(&rest2, map, out);
                    map[x] = x;
                    map[y] = y;
                }
            }
        }
    }
    rec(&(0..n).collect::<Vec<_>>(), &mut map, &mut out);
    out.sort();
    out.dedup();
    out
}

/// One involution per conjugacy class: k transpositions on the first 2k points.
fn involution_class_reps(n: usize) -> Vec<Perm> {
    (0..=n / 2)
        .map(|k| {
            let mut map: Vec<usize> = (0..n).collect();
            for t in 0..k {
                map[2 * t] = 2 * t + 1;
                map[2 * t + 1] = 2 * t;
            }
            Perm::new(map)
        })
        .collect()
}

/// Canonical labeling of a transitive triple: BFS relabeling from every
/// root, taking the least encoded table. Exact for deterministic
/// edge-colored graphs (each point has one image per generator).
fn schreier_canonical(gens: [&Perm; 3], n: usize) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for root in 0..n {
        let mut label = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        label[root] = 0;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for g in gens {
                let y = g.apply(x);
                if label[y] == usize::MAX {
                    label[y] = order.len();
                    order.push(y);
                }
            }
        }
        let mut enc = Vec::with_capacity(3 * n);
        for g in gens {
            for &x in &order {
                enc.push(label[g.apply(x)]);
            }
        }
        if best.as_ref().is_none_or(|b| enc < *b) {
            best = Some(enc);
        }
    }
    best.unwrap_or_default()
}

/// All triples `(a, b, c)` of involutions in `S_n` whose joint action is
/// transitive, up to simultaneous conjugation. Deterministic order.
pub fn involution_triples(n: usize) -> Result<Vec<PermGenerators>, SearchError> {
    if n == 0 || n > TRIPLES_GUARD {
        return Err(SearchError::SizeGuard(n, TRIPLES_GUARD));
    }
    let all = involutions(n);
    let reps = involution_class_reps(n);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out: Vec<(Vec<usize>, PermGenerators)> = Vec::new();
    for a in &reps {
        for b in &all {
            for c in &all {
                let gens = PermGenerators::new(a.clone(), b.clone(), c.clone())
                    .expect("involutions by construction");
                if !gens.transitive() {
                    continue;
                }
                let key = schreier_canonical([a, b, c], n);
                if seen.insert(key.clone()) {
                    out.push((key, gens));
                }
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out.into_iter().map(|(_, g)| g).collect())
}

/// Canonical key of a triple, for conjugacy comparisons against the census.
pub fn triple_key(gens: &PermGenerators) -> Vec<usize> {
    schreier_canonical([&gens.a, &gens.b, &gens.c], gens.n())
}
