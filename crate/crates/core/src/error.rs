//! Error type shared by all operations in the crate.

use alloc::string::String;
use thiserror::Error;

/// Everything that can go wrong when building or transforming states.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A matrix or vector had the wrong dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A covariance matrix was not symmetric within tolerance.
    #[error("matrix is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    /// A covariance matrix was not positive definite.
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    /// A covariance matrix violated the uncertainty relation.
    #[error("covariance matrix is unphysical (smallest symplectic eigenvalue {min_nu})")]
    Unphysical { min_nu: f64 },

    /// A matrix failed the `S Omega S^T = Omega` test.
    #[error("matrix is not symplectic (residual {residual:.3e})")]
    NotSymplectic { residual: f64 },

    /// An operation that requires a pure state was handed a mixed one.
    #[error("state is not pure (impurity {impurity:.3e})")]
    NotPure { impurity: f64 },

    /// A mode index pointed outside the state.
    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },

    /// Kept/measured mode lists overlapped, repeated an index, or had the
    /// wrong length.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// A parameter was outside its admissible range.
    #[error("{0}")]
    Domain(String),

    /// The matrix to invert during conditioning was numerically singular.
    #[error("conditioning matrix is numerically singular")]
    SingularConditioning,

    /// An iteration or decomposition failed numerically on admissible input.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The grid oracle was asked for more work than it is willing to do.
    #[error("grid oracle limit exceeded: {0}")]
    OracleTooLarge(String),
}

pub type Result<T> = core::result::Result<T, Error>;
