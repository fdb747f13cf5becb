//! Matrix perspectives and Maréchal functions of operator convex functions,
//! quantum entropy functionals, and seeded randomized verification of
//! operator Jensen and joint convexity inequalities.
//!
//! Matrices are dense complex `n×n`. Spectral decompositions come from a
//! cyclic complex Jacobi solver, and every randomized routine is driven by
//! an explicit `u64` seed.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod funcat;
pub mod io;
pub mod jensen;
pub mod linalg;
pub mod superop;

pub use entropy::{DensityMatrix, LiebParameters};
pub use error::{Error, Result};
pub use funcat::{Interval, OpClass, ScalarFunction};
pub use io::{MatrixFile, MatrixKind};
pub use jensen::{Functional, SuiteSpec, VerificationReport, Witness};
pub use linalg::{
    ComplexMatrix, HermitianMatrix, InequalityReport, PositiveMatrix, SpectralDecomposition,
    ToleranceConfig,
};
pub use num_complex::Complex64;
pub use superop::LeftRightPair;
