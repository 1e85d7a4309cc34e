//! Analytic Bethe ansatz for the Lie superalgebra sl(r+1|s+1) in any grading.
//!
//! The crate builds transfer-matrix eigenvalues in dressed vacuum form from
//! Young supertableaux, certifies their determinant formulas and T-system
//! relations exactly, solves Bethe ansatz equations numerically, checks
//! pole-freeness, and moves solutions between gradings with the
//! particle-hole transformation.

pub mod bethe;
pub mod certificate;
pub mod diagrams;
pub mod duality;
pub mod dvf;
pub mod error;
pub mod ratfun;
pub mod superalgebra;
pub mod tsystem;
pub mod verify;

pub use error::{Error, Result};
