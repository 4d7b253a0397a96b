//! Boundary knot method (BKM): boundary-only, integration-free meshless
//! collocation for elliptic PDEs.
//!
//! The homogeneous part of the solution is expanded in nonsingular general
//! solutions of the Helmholtz operator centred at boundary knots; the
//! inhomogeneous part is handled by dual-reciprocity interpolation with
//! radial basis functions.

pub mod bench_cases;
pub mod drm;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod linalg;
pub mod rbf;
pub mod solver;
pub mod specfun;

pub use error::{BkmError, Result};
pub use geometry::{EllipseDomain, InteriorLayout, Knot, KnotRole, Point2, Point3};
pub use linalg::DenseMatrix;
pub use rbf::RbfPair;
pub use solver::{solve, BkmSolution, FirstOrderOperator, OperatorMode, ProblemSpec};
