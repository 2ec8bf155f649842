//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while parsing scalars or decomposing a
/// matrix.
///
/// The variants split into three groups: user-facing input problems
/// (`Parse`, `RequiresEigenvalueHint`, `InvalidHint`), contract violations a
/// caller can trigger (`DivisionByZero`, `Singular`, `NotInvariant`,
/// `NotNested`, `NotAnEigenvalue`, `DependentBasis`), and internal
/// consistency checks that are asserted at runtime and must be impossible on
/// valid inputs (`NoPreimage`, `CountingViolation`, `IndependenceViolation`,
/// `VerificationFailed`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("matrix is singular")]
    Singular,

    #[error("subspace basis columns are linearly dependent")]
    DependentBasis,

    #[error("subspace is not invariant under the operator")]
    NotInvariant,

    #[error("inner subspace is not contained in the outer subspace")]
    NotNested,

    #[error("{lambda} is not an eigenvalue")]
    NotAnEigenvalue { lambda: String },

    #[error("eigenvalues outside Q(i) or degree too high; supply hints ({detail})")]
    RequiresEigenvalueHint { detail: String },

    #[error("hint {hint} is not an eigenvalue")]
    InvalidHint { hint: String },

    #[error("no preimage under the shifted operator power; vector outside the expected range space")]
    NoPreimage,

    #[error("chain counting identity violated: {0}")]
    CountingViolation(String),

    #[error("chain vectors failed the exact independence rank check")]
    IndependenceViolation,

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}
