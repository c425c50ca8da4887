//! Numerical certification: identical per-copy P1 meshes, the Dirichlet
//! Laplacian over a glued volume, its lowest eigenpairs, and discrete
//! transplantation of eigenvectors between cospectral volumes.

mod csr;
mod eigen;
mod fit;
mod global;
mod refmesh;
mod vform;

pub use csr::Csr;
pub use eigen::{dirichlet_spectrum, dirichlet_spectrum_with, DENSE_LIMIT, RESIDUAL_TOL};
pub use fit::{fit_side_map, SideMapFit};
pub use global::{assemble, assemble_unconstrained, DiscreteOperator, GlobalMesh};
pub use refmesh::{element_matrices, RefMesh, REFINE_GUARD};
pub use vform::{
    eigen_clusters, eigen_residual, expand_free, from_vector_form, hersch_check, to_vector_form,
    transplant, HerschReport, TransplantCheck, VectorForm,
};

#[cfg(test)]
mod tests;
