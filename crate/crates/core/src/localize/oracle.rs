//! Brute-force measurement search, used to validate the analytic
//! optimizers.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::conditioning::{condition_gaussian, MeasurementSpec};
use crate::entanglement::{entropy_of_entanglement, log_negativity, Measure};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, ModePartition};
use crate::localize::{LocalizationResult, Method};

/// Most measured modes the oracle will enumerate.
pub const MAX_ORACLE_MODES: usize = 3;

/// Most grid points the oracle will evaluate in one call.
pub const MAX_ORACLE_CANDIDATES: u64 = 20_000_000;

/// The per-mode measurement grid: `theta_steps` angles over `[0, pi)`,
/// each as ideal homodyne and as projectors at every squeezing in
/// `r_values`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub theta_steps: usize,
    pub r_values: Vec<f64>,
}

impl Default for GridSpec {
    /// 180 angles; projector squeezings `0, 0.5, ..., 6`.
    fn default() -> Self {
        Self::with_r_range(180, 6.0, 0.5)
    }
}

impl GridSpec {
    /// Angles as in [`GridSpec::default`], squeezings `0, r_step, ...`
    /// up to `r_max` inclusive (within rounding).
    pub fn with_r_range(theta_steps: usize, r_max: f64, r_step: f64) -> Self {
        let mut r_values = Vec::new();
        if r_step > 0.0 && r_max >= 0.0 {
            let mut r = 0.0;
            while r <= r_max + 1e-9 {
                r_values.push(r);
                r += r_step;
            }
        } else {
            r_values.push(0.0);
        }
        Self {
            theta_steps,
            r_values,
        }
    }

    /// All single-mode candidates, in deterministic order: for each angle,
    /// homodyne first, then the projectors by increasing squeezing.
    pub fn candidates(&self) -> Vec<MeasurementSpec> {
        let mut out = Vec::with_capacity(self.theta_steps * (self.r_values.len() + 1));
        for k in 0..self.theta_steps {
            let theta = core::f64::consts::PI * k as f64 / self.theta_steps as f64;
            out.push(MeasurementSpec::Homodyne { theta });
            for &r in &self.r_values {
                out.push(MeasurementSpec::Projector { theta, r });
            }
        }
        out
    }
}

/// Number of grid points for `n_measured` modes.
pub fn candidate_count(grid: &GridSpec, n_measured: usize) -> u64 {
    let per_mode = (grid.theta_steps * (grid.r_values.len() + 1)) as u64;
    per_mode.saturating_pow(n_measured as u32)
}

/// The `idx`-th joint assignment (mixed-radix over the per-mode list).
pub fn assignment(
    candidates: &[MeasurementSpec],
    n_measured: usize,
    idx: u64,
) -> Vec<MeasurementSpec> {
    let base = candidates.len() as u64;
    let mut specs = Vec::with_capacity(n_measured);
    let mut rest = idx;
    for _ in 0..n_measured {
        specs.push(candidates[(rest % base) as usize]);
        rest /= base;
    }
    specs
}

/// Conditional entanglement of one candidate assignment.
pub fn evaluate_candidate(
    state: &GaussianState,
    partition: &ModePartition,
    specs: &[MeasurementSpec],
    measure: Measure,
) -> Result<f64> {
    let conditional = condition_gaussian(state, partition, specs)?;
    let result = match measure {
        Measure::EntropyOfEntanglement => entropy_of_entanglement(&conditional)?,
        Measure::LogNegativity => log_negativity(&conditional)?,
    };
    Ok(result.value)
}

/// Exhaustive search over the grid; ties resolve to the lowest index, so
/// results are deterministic. Errors when the partition exceeds
/// [`MAX_ORACLE_MODES`] measured modes or the grid exceeds
/// [`MAX_ORACLE_CANDIDATES`] points.
pub fn grid_oracle(
    state: &GaussianState,
    partition: &ModePartition,
    measure: Measure,
    grid: &GridSpec,
) -> Result<LocalizationResult> {
    let m = partition.measured().len();
    if partition.kept().len() != 2 {
        return Err(Error::InvalidPartition(format!(
            "oracle keeps exactly two modes, got {}",
            partition.kept().len()
        )));
    }
    if m > MAX_ORACLE_MODES {
        return Err(Error::OracleTooLarge(format!(
            "{m} measured modes exceeds the limit of {MAX_ORACLE_MODES}"
        )));
    }
    let total = candidate_count(grid, m);
    if total > MAX_ORACLE_CANDIDATES {
        return Err(Error::OracleTooLarge(format!(
            "{total} grid points exceed the limit of {MAX_ORACLE_CANDIDATES}; \
             coarsen the grid"
        )));
    }
    if grid.theta_steps == 0 {
        return Err(Error::Domain(String::from("theta_steps must be positive")));
    }

    let candidates = grid.candidates();
    let mut best_idx = 0u64;
    let mut best_value = f64::NEG_INFINITY;
    for idx in 0..total {
        let specs = assignment(&candidates, m, idx);
        let value = evaluate_candidate(state, partition, &specs, measure)?;
        if value > best_value {
            best_value = value;
            best_idx = idx;
        }
    }

    let specs = assignment(&candidates, m, best_idx);
    let conditional = condition_gaussian(state, partition, &specs)?;
    Ok(LocalizationResult {
        measure,
        value: best_value,
        optimal_specs: specs,
        method: Method::GridOracle,
        conditional,
    })
}
