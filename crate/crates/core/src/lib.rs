//! Clifford algebras `Cl(p,q)` of arbitrary signature, the generalized Pauli
//! intertwiner construction, and the lift of pseudo-orthogonal matrices to
//! their `±T` preimages in the spinor groups.
//!
//! The crate is organised bottom-up:
//!
//! - [`blade`], [`multivector`]: the fixed-basis algebra.
//! - [`pauli`]: intertwiners between two generator sets.
//! - [`rep`]: left-regular matrices, complex gamma matrices, matrix intertwiners.
//! - [`spin`]: component classification, the twisted adjoint and the lift.
//! - [`json`]: the file formats used by the command-line tool.
//! - [`golden`]: packaged reference vectors for self-tests.

pub mod blade;
pub mod error;
pub mod golden;
pub mod json;
mod linalg;
pub mod multivector;
pub mod orthogonal;
pub mod par;
pub mod pauli;
pub mod rep;
pub mod signature;
pub mod spin;

pub use blade::{blade_product, BladeMask};
pub use error::{Error, Result};
pub use multivector::{center_basis, Multivector};
pub use num_complex::Complex64;
pub use orthogonal::{classify_orthogonal, ComponentTag, OrthogonalMatrix};
pub use par::Exec;
pub use signature::{Field, Signature, MAX_DIM};

/// Numerical thresholds shared across the crate.
pub mod tol {
    /// Relative pruning and singularity threshold.
    pub const ZERO: f64 = 1e-9;
    /// Residual bound for certificates and group membership.
    pub const REL: f64 = 1e-8;
    /// Anticommutation and singularity threshold for explicit matrices.
    pub const MATRIX: f64 = 1e-10;
}
