//! Exact Jordan canonical forms over the Gaussian rationals.
//!
//! The crate computes, with no floating point anywhere, the Jordan
//! decomposition `A·P = P·J` of a square matrix over `Q(i)`, decides matrix
//! similarity through rank sequences of shifted operator powers, and
//! produces explicit similarity transforms. Every load-bearing identity —
//! chain relations, the chain counting identity, independence of the
//! assembled basis, `A·P = P·J` itself — is re-checked exactly at runtime
//! before a result is returned.
//!
//! Entry points:
//! - [`jordan::jordan_decompose`] — full decomposition with canonical block
//!   ordering.
//! - [`similarity::is_similar`] / [`similarity::similarity_transform`] —
//!   rank-sequence similarity decision and explicit transform.
//! - [`eigen::find_eigenvalues`] — eigenvalue discovery inside `Q(i)`, with
//!   a hint mechanism for spectra the built-in search cannot reach.
//! - [`generate::conjugated_jordan`] — test-case generator with known
//!   structure.

pub mod batch;
pub mod eigen;
pub mod error;
pub mod generate;
pub mod jordan;
pub mod linalg;
pub mod scalar;
pub mod similarity;

pub use error::Error;
pub use linalg::{ExactMatrix, Subspace};
pub use scalar::{GaussianRational, Rational};
