//! Optimal local single-mode measurements that concentrate the
//! entanglement of a multimode Gaussian state onto a kept pair of modes.
//!
//! Four routes are provided:
//!
//! * [`optimize_three_mode`]: exact optimum for pure three-mode states,
//!   through the reduction of the measured mode to one arm of a two-mode
//!   squeezed vacuum ([`decompose_three_mode`]).
//! * [`optimize_multimode_pure`]: coordinate ascent over homodyne phases
//!   for pure states with any number of measured modes; each single-phase
//!   update reuses the exact three-mode step.
//! * [`optimize_symmetric`]: closed treatment of the fully symmetric mixed
//!   family, reduced to an equivalent three-mode model
//!   ([`reduce_symmetric`]).
//! * [`grid_oracle`]: brute force over a measurement grid, as an
//!   independent check on all of the above.

mod multimode;
mod oracle;
mod symmetric;
mod three_mode;

pub use multimode::optimize_multimode_pure;
pub use oracle::{
    assignment, candidate_count, evaluate_candidate, grid_oracle, GridSpec, MAX_ORACLE_CANDIDATES,
    MAX_ORACLE_MODES,
};
pub use symmetric::{
    optimize_symmetric, reduce_symmetric, reduce_symmetric_kept_frame, symmetric_mu_squared,
    SymmetricStateSpec,
};
pub use three_mode::{decompose_three_mode, optimize_three_mode, ThreeModeReduction};

use alloc::vec::Vec;

use crate::conditioning::MeasurementSpec;
use crate::entanglement::Measure;
use crate::gaussian::GaussianState;

/// Which optimizer produced a [`LocalizationResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    AnalyticThreeMode,
    MultimodePhaseSearch,
    SymmetricReduction,
    GridOracle,
}

/// Outcome of a localization run.
#[derive(Debug, Clone)]
pub struct LocalizationResult {
    pub measure: Measure,
    /// Localized entanglement in bits.
    pub value: f64,
    /// One spec per measured mode, in partition order.
    pub optimal_specs: Vec<MeasurementSpec>,
    pub method: Method,
    /// Conditional state of the kept pair under `optimal_specs`.
    pub conditional: GaussianState,
}
