//! Construction and spectral analysis of volumes glued from triangle tiles.
//!
//! The crate builds planar domains by reflective gluing of a labeled
//! triangle, derives their combinatorial descriptors (colored graph,
//! involution generators, adjacency/auxiliary/structural matrices), decides
//! equispectrality through auxiliary-matrix cospectrality, constructs
//! transplantation maps between cospectral pairs, enumerates and classifies
//! all volumes of a given size, and certifies pairs numerically with a P1
//! finite-element Dirichlet eigensolver.

pub mod algebra;
pub mod error;
pub mod fem;
pub mod fixtures;
pub mod geom;
pub mod search;
pub mod spectral;
pub mod tiling;

pub use error::{AlgebraError, FemError, IoError, SearchError, SpectralError, TilingError};
pub use geom::{Isometry, Point};
pub use tiling::{Div, SideLabel, Tile, Word};
pub use nalgebra;
