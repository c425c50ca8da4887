//! Classification of enumerated volumes and the cospectral-pair search.

use serde::{Deserialize, Serialize};

use crate::algebra::{
    auxiliary, colored_iso, generators_of, graph_of, graph_signature, group_order, structural,
    GraphSignature, IsoMode,
};
use crate::error::SearchError;
use crate::spectral::{cospectral, sym_eigen};
use crate::tiling::{div_equivalent, Div};

use super::div_canonical_key_up_to_colors;

/// One exact-color graph-isomorphism class of the census.
#[derive(Clone, Debug)]
pub struct CensusClass {
    pub representative: Div,
    /// Number of enumerated volumes (equivalence classes) with this graph.
    pub size: usize,
    pub signature: GraphSignature,
    pub group_order: u64,
    pub spectrum: Vec<f64>,
    /// Internal side count of the representative.
    pub internal_sides: usize,
    pub external_counts: [usize; 3],
}

impl CensusClass {
    pub fn is_tree(&self) -> bool {
        self.internal_sides == self.representative.n() - 1
    }
}

/// Census of all volumes of `n` copies, grouped by exact-color graph
/// isomorphism. `color_class_count` additionally quotients by the tile's
/// own relabeling symmetries (for the regular triangle this is label-blind
/// geometric equivalence).
#[derive(Clone, Debug)]
pub struct Census {
    pub n: usize,
    pub div_count: usize,
    pub classes: Vec<CensusClass>,
    pub tree_class_count: usize,
    pub color_class_count: usize,
    pub tree_color_class_count: usize,
}

/// Groups enumerated volumes into exact-color graph-isomorphism classes and
/// annotates each class.
pub fn classify(divs: &[Div]) -> Result<Census, SearchError> {
    let n = divs.first().map_or(0, |d| d.n());
    let mut classes: Vec<(CensusClass, crate::algebra::ColoredGraph)> = Vec::new();
    let mut color_keys = std::collections::BTreeSet::new();
    let mut tree_color_keys = std::collections::BTreeSet::new();
    for div in divs {
        debug_assert_eq!(div.n(), n);
        let g = graph_of(div);
        let sig = graph_signature(&g);
        let mut found = false;
        for (class, rep_graph) in classes.iter_mut() {
            if class.signature == sig
                && colored_iso(&g, rep_graph, IsoMode::ExactColors)
                    .map_err(|e| match e {
                        crate::error::AlgebraError::SizeGuard(a, b) => SearchError::SizeGuard(a, b),
                        _ => SearchError::SizeGuard(n, super::ENUM_GUARD),
                    })?
                    .is_some()
            {
                class.size += 1;
                found = true;
                break;
            }
        }
        if !found {
            let gens = generators_of(div);
            let order = group_order(&gens).map_err(|_| SearchError::SizeGuard(n, 10))?;
            let x = auxiliary(div);
            let spectrum = sym_eigen(&x.0.to_dense())
                .expect("auxiliary matrices are symmetric")
                .values()
                .to_vec();
            let k = structural(div).matrix.cols();
            classes.push((
                CensusClass {
                    representative: div.clone(),
                    size: 1,
                    signature: sig,
                    group_order: order,
                    spectrum,
                    internal_sides: k,
                    external_counts: div.external_counts(),
                },
                g,
            ));
        }
        let color_key = div_canonical_key_up_to_colors(div);
        if div.internal_sides().len() == n.saturating_sub(1) {
            tree_color_keys.insert(color_key.clone());
        }
        color_keys.insert(color_key);
    }
    let mut classes: Vec<CensusClass> = classes.into_iter().map(|(c, _)| c).collect();
    classes.sort_by(|a, b| {
        a.signature
            .cmp(&b.signature)
            .then_with(|| a.group_order.cmp(&b.group_order))
    });
    let tree_class_count = classes.iter().filter(|c| c.is_tree()).count();
    Ok(Census {
        n,
        div_count: divs.len(),
        tree_class_count,
        color_class_count: color_keys.len(),
        tree_color_class_count: tree_color_keys.len(),
        classes,
    })
}

/// Report on one candidate pair of census classes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairReport {
    pub left_class: usize,
    pub right_class: usize,
    pub cospectral: bool,
    pub equivalent: bool,
    pub graphs_isomorphic: bool,
    pub external_side_counts_match: bool,
    pub group_orders: (u64, u64),
}

/// All unordered class pairs passing the structural preconditions (equal
/// external side counts by type) whose auxiliary matrices are cospectral.
/// Equispectral candidates are the reports with `equivalent == false`.
pub fn find_pairs(census: &Census, tol: f64) -> Vec<PairReport> {
    let mut out = Vec::new();
    for i in 0..census.classes.len() {
        for j in i + 1..census.classes.len() {
            let (l, r) = (&census.classes[i], &census.classes[j]);
            if l.external_counts != r.external_counts {
                continue;
            }
            let xl = auxiliary(&l.representative);
            let xr = auxiliary(&r.representative);
            let cosp = cospectral(&xl, &xr, Some(tol)).unwrap_or(false);
            if !cosp {
                continue;
            }
            let equiv = div_equivalent(&l.representative, &r.representative)
                .map(|o| o.is_some())
                .unwrap_or(false);
            let gl = graph_of(&l.representative);
            let gr = graph_of(&r.representative);
            let graphs_isomorphic = colored_iso(&gl, &gr, IsoMode::ExactColors)
                .map(|o| o.is_some())
                .unwrap_or(false);
            out.push(PairReport {
                left_class: i,
                right_class: j,
                cospectral: true,
                equivalent: equiv,
                graphs_isomorphic,
                external_side_counts_match: true,
                group_orders: (l.group_order, r.group_order),
            });
        }
    }
    out
}
