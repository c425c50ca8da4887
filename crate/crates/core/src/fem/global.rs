//! Gluing the per-copy reference meshes into one conforming mesh.
//!
//! Nodes on an internal side receive one global id from both adjacent
//! copies. The correspondence across a side is resolved in barycentric
//! index space; only the side's *endpoint orientation* is decided
//! geometrically (one comparison per side), so node identification is
//! exact.

use crate::error::FemError;
use crate::tiling::{Div, SideLabel};

use super::csr::Csr;
use super::refmesh::{element_matrices, RefMesh};

#[derive(Clone, Debug)]
pub struct GlobalMesh {
    ref_mesh: RefMesh,
    n_copies: usize,
    /// `(copy * L + local) -> global id`, ids dense in first-use order.
    node_ids: Vec<usize>,
    n_global: usize,
    /// Global ids constrained to zero (on some external side).
    dirichlet: Vec<bool>,
    /// Global ids on an internal side (shared by two copies).
    internal: Vec<bool>,
    free: Vec<usize>,
    free_index: Vec<Option<usize>>,
}

impl GlobalMesh {
    pub fn build(div: &Div, level: usize) -> Result<GlobalMesh, FemError> {
        let ref_mesh = RefMesh::new(level)?;
        let n = div.n();
        let l = ref_mesh.node_count();
        let tile = div.tile();
        let eps = 64.0 * tile.eps();

        // union-find over (copy, local) pairs
        let mut parent: Vec<usize> = (0..n * l).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
            let ra = find(parent, a);
            let rb = find(parent, b);
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        };

        for side in div.internal_sides() {
            let (ci, cj) = side.copies;
            let s = tile.side_of(side.label);
            let (a, _b) = tile.side_endpoints(s);
            let pi = &div.placements()[ci].iso;
            let pj = &div.placements()[cj].iso;
            // do the two copies traverse the shared segment in the same
            // direction?
            let reversed = (pi.apply(a) - pj.apply(a)).norm() > eps;
            for &t in &ref_mesh.side_nodes(s) {
                let t2 = ref_mesh.side_partner(t, s, reversed);
                union(&mut parent, ci * l + t, cj * l + t2);
            }
        }

        let mut id_of_root = vec![usize::MAX; n * l];
        let mut node_ids = vec![0usize; n * l];
        let mut n_global = 0;
        for x in 0..n * l {
            let root = find(&mut parent, x);
            if id_of_root[root] == usize::MAX {
                id_of_root[root] = n_global;
                n_global += 1;
            }
            node_ids[x] = id_of_root[root];
        }

        // Dirichlet set: nodes on external sides
        let mut dirichlet = vec![false; n_global];
        let internal_pairs: std::collections::HashSet<(usize, SideLabel)> = div
            .internal_sides()
            .iter()
            .flat_map(|s| [(s.copies.0, s.label), (s.copies.1, s.label)])
            .collect();
        for copy in 0..n {
            for label in SideLabel::ALL {
                if internal_pairs.contains(&(copy, label)) {
                    continue;
                }
                let s = tile.side_of(label);
                for &t in &ref_mesh.side_nodes(s) {
                    dirichlet[node_ids[copy * l + t]] = true;
                }
            }
        }
        // internal-side classification (shared nodes)
        let mut internal = vec![false; n_global];
        for (copy, label) in &internal_pairs {
            let s = tile.side_of(*label);
            for &t in &ref_mesh.side_nodes(s) {
                internal[node_ids[copy * l + t]] = true;
            }
        }

        let free: Vec<usize> = (0..n_global).filter(|&g| !dirichlet[g]).collect();
        let mut free_index = vec![None; n_global];
        for (t, &g) in free.iter().enumerate() {
            free_index[g] = Some(t);
        }
        Ok(GlobalMesh {
            ref_mesh,
            n_copies: n,
            node_ids,
            n_global,
            dirichlet,
            internal,
            free,
            free_index,
        })
    }

    pub fn ref_mesh(&self) -> &RefMesh {
        &self.ref_mesh
    }

    pub fn n_copies(&self) -> usize {
        self.n_copies
    }

    pub fn n_global(&self) -> usize {
        self.n_global
    }

    pub fn global_id(&self, copy: usize, local: usize) -> usize {
        self.node_ids[copy * self.ref_mesh.node_count() + local]
    }

    pub fn is_dirichlet(&self, global: usize) -> bool {
        self.dirichlet[global]
    }

    pub fn is_internal_side_node(&self, global: usize) -> bool {
        self.internal[global]
    }

    pub fn free_nodes(&self) -> &[usize] {
        &self.free
    }

    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    pub fn free_index(&self, global: usize) -> Option<usize> {
        self.free_index[global]
    }
}

/// Stiffness and mass restricted to the free (non-Dirichlet) nodes.
#[derive(Clone, Debug)]
pub struct DiscreteOperator {
    pub stiffness: Csr,
    pub mass: Csr,
}

/// Unconstrained stiffness and mass over all global nodes. Element
/// matrices are computed once in tile-local coordinates; every copy is
/// isometric to the tile, so the per-copy blocks are bit-identical.
pub fn assemble_unconstrained(div: &Div, gm: &GlobalMesh) -> (Csr, Csr) {
    let ref_mesh = gm.ref_mesh();
    let coords = ref_mesh.local_coords(div.tile());
    let elems: Vec<([usize; 3], [[f64; 3]; 3], [[f64; 3]; 3])> = ref_mesh
        .elements()
        .iter()
        .map(|&e| {
            let (k, b) = element_matrices([coords[e[0]], coords[e[1]], coords[e[2]]]);
            (e, k, b)
        })
        .collect();
    let mut kt = Vec::with_capacity(9 * elems.len() * div.n());
    let mut bt = Vec::with_capacity(9 * elems.len() * div.n());
    for copy in 0..div.n() {
        for (e, ke, be) in &elems {
            let g = [
                gm.global_id(copy, e[0]),
                gm.global_id(copy, e[1]),
                gm.global_id(copy, e[2]),
            ];
            for a in 0..3 {
                for c in 0..3 {
                    kt.push((g[a], g[c], ke[a][c]));
                    bt.push((g[a], g[c], be[a][c]));
                }
            }
        }
    }
    (
        Csr::from_triplets(gm.n_global(), kt),
        Csr::from_triplets(gm.n_global(), bt),
    )
}

/// Builds the conforming mesh and the Dirichlet-eliminated operator pair.
pub fn assemble(div: &Div, level: usize) -> Result<(GlobalMesh, DiscreteOperator), FemError> {
    let gm = GlobalMesh::build(div, level)?;
    let (k, b) = assemble_unconstrained(div, &gm);
    let op = DiscreteOperator {
        stiffness: k.restrict(gm.free_nodes()),
        mass: b.restrict(gm.free_nodes()),
    };
    Ok((gm, op))
}
