//! Numerical tolerances shared across the crate.

/// Relative tolerance on `|m - m^T|` when accepting a covariance matrix.
pub const SYMMETRY_RTOL: f64 = 1e-12;

/// Slack on the physicality test: every symplectic eigenvalue must satisfy
/// `nu >= 1 - PHYSICALITY_ATOL`.
pub const PHYSICALITY_ATOL: f64 = 1e-9;

/// Absolute tolerance on the residual of `S Omega S^T = Omega` when
/// accepting a symplectic transform.
pub const SYMPLECTIC_ATOL: f64 = 1e-10;

/// Impurity (`max_k |nu_k - 1|`) accepted by operations that require a pure
/// state, such as the entropy of entanglement. Looser than
/// [`PHYSICALITY_ATOL`] so that states assembled from long chains of
/// conditioning still qualify.
pub const PURITY_ATOL: f64 = 1e-6;

/// Relative singular-value cutoff for the pseudo-inverse used by homodyne
/// conditioning: singular values below `PINV_RCOND` times the largest are
/// treated as exact zeros.
pub const PINV_RCOND: f64 = 1e-12;

/// Convergence threshold on the objective for the coordinate-ascent phase
/// search.
pub const ASCENT_TOL: f64 = 1e-10;
