//! Quadrature, meshes, banded symmetric matrices and the pencil eigensolver.

pub mod banded;
pub mod eigen;
pub mod mesh;
pub mod quadrature;

pub use banded::{factor_inertia, BandedSymMatrix, InertiaTriple, LdlFactor, DEFAULT_ZERO_TOL};
pub use eigen::{smallest_eigenpair, EigenPair};
pub use mesh::{build_graded_mesh, build_mesh, TruncatedMesh, DEFAULT_GAUSS_POINTS};
pub use quadrature::GaussRule;
