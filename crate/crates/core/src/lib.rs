//! Progressive-precision multigrid for B-spline discretizations of the 1D
//! biharmonic equation.
//!
//! Everything numeric is generic over [`vprec::Real`]; the aliases below fix
//! the scalar to the 113-bit software float [`vprec::Quad`] used by the
//! experiments.

pub mod error;
pub mod error_lab;
pub mod mg_core;
pub mod precision_plan;
pub mod sparse_linalg;
pub mod spline_fem;
pub mod vprec;

pub use error::{Error, Result};
pub use vprec::{PrecisionCtx, Quad, Real};

pub type QuadMatrix = sparse_linalg::SparseMatrix<Quad>;
pub type QuadVector = sparse_linalg::Vector<Quad>;
pub type QuadHierarchy = mg_core::Hierarchy<Quad>;
