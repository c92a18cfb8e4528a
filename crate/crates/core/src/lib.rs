//! Exact computation of minimal A∞ and C∞ structures on the cohomology of
//! finite dg algebras, with bar/cobar constructions, twisting cochains,
//! Hochschild brace calculus and rational-homotopy applications.
//!
//! Everything is graded cohomologically and all arithmetic is exact.

pub mod exactlin;
pub mod graded;
pub mod complexes;
pub mod ainfty;
pub mod barcobar;
pub mod twisting;
pub mod hochschild;
pub mod rht;
pub mod cli;
pub mod models;

pub use exactlin::{Field, Matrix, QuotientData, Scalar, Vector};
pub use graded::GradedModule;
