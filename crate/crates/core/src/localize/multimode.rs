//! Coordinate ascent over homodyne phases for pure states with several
//! measured modes.
//!
//! For pure states, homodyne on every measured mode is optimal and only
//! the phases remain to be found. Fixing all phases but one and
//! conditioning the rest leaves a pure three-mode problem whose optimal
//! phase is exact ([`super::optimize_three_mode`]), so cycling through the
//! measured modes monotonically increases the localized entropy. Random
//! restarts guard against the rare non-global fixed point.

use alloc::vec::Vec;
use alloc::{format, vec};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::conditioning::{condition_gaussian, MeasurementSpec};
use crate::entanglement::{entropy_of_entanglement, Measure};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, ModePartition};
use crate::localize::{optimize_three_mode, LocalizationResult, Method};
use crate::tol;

const RESTARTS: usize = 8;
const MAX_SWEEPS: usize = 100;

/// Localizes a pure `N >= 3` mode state onto the kept pair by homodyning
/// every other mode; the partition must cover all modes. Deterministic
/// for a fixed `seed`.
pub fn optimize_multimode_pure(
    state: &GaussianState,
    partition: &ModePartition,
    seed: u64,
) -> Result<LocalizationResult> {
    let n = state.n_modes();
    if n < 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: n,
        });
    }
    if partition.kept().len() != 2 {
        return Err(Error::InvalidPartition(format!(
            "need exactly two kept modes, got {}",
            partition.kept().len()
        )));
    }
    if partition.kept().len() + partition.measured().len() != n {
        return Err(Error::InvalidPartition(format!(
            "partition must cover all {n} modes"
        )));
    }
    let impurity = state.impurity()?;
    if impurity > tol::PURITY_ATOL {
        return Err(Error::NotPure { impurity });
    }

    let m = partition.measured().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<f64>)> = None;

    for restart in 0..RESTARTS {
        let mut phases: Vec<f64> = if restart == 0 {
            vec![0.0; m]
        } else {
            (0..m)
                .map(|_| rng.random_range(0.0..core::f64::consts::PI))
                .collect()
        };

        let mut prev = objective(state, partition, &phases)?;
        for _ in 0..MAX_SWEEPS {
            for j in 0..m {
                phases[j] = best_phase_for(state, partition, &phases, j)?;
            }
            let now = objective(state, partition, &phases)?;
            if now - prev < tol::ASCENT_TOL {
                prev = now;
                break;
            }
            prev = now;
        }

        if best.as_ref().is_none_or(|(v, _)| prev > *v) {
            best = Some((prev, phases));
        }
    }

    let (_, phases) = best.expect("at least one restart");
    let specs: Vec<MeasurementSpec> = phases
        .iter()
        .map(|&theta| MeasurementSpec::Homodyne { theta })
        .collect();
    let conditional = condition_gaussian(state, partition, &specs)?;
    let value = entropy_of_entanglement(&conditional)?.value;
    Ok(LocalizationResult {
        measure: Measure::EntropyOfEntanglement,
        value,
        optimal_specs: specs,
        method: Method::MultimodePhaseSearch,
        conditional,
    })
}

fn objective(state: &GaussianState, partition: &ModePartition, phases: &[f64]) -> Result<f64> {
    let specs: Vec<MeasurementSpec> = phases
        .iter()
        .map(|&theta| MeasurementSpec::Homodyne { theta })
        .collect();
    let conditional = condition_gaussian(state, partition, &specs)?;
    Ok(entropy_of_entanglement(&conditional)?.value)
}

/// Conditions every measured mode except `j` at the current phases, then
/// solves the remaining three-mode problem exactly.
fn best_phase_for(
    state: &GaussianState,
    partition: &ModePartition,
    phases: &[f64],
    j: usize,
) -> Result<f64> {
    let measured = partition.measured();
    let target = measured[j];
    let kept3 = [partition.kept()[0], partition.kept()[1], target];
    let others: Vec<usize> = measured
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .map(|(_, &mode)| mode)
        .collect();
    let other_specs: Vec<MeasurementSpec> = phases
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .map(|(_, &theta)| MeasurementSpec::Homodyne { theta })
        .collect();

    let part = ModePartition::new(&kept3, &others, state.n_modes())?;
    let three = condition_gaussian(state, &part, &other_specs)?;
    let part3 = ModePartition::new(&[0, 1], &[2], 3)?;
    let sub = optimize_three_mode(&three, &part3)?;
    match sub.optimal_specs[0] {
        MeasurementSpec::Homodyne { theta } => Ok(theta),
        _ => unreachable!("three-mode optimizer emits homodyne"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::entropy_of_entanglement;
    use crate::symplectic::SymplecticTransform;
    use approx::assert_relative_eq;

    #[test]
    fn matches_three_mode_answer_on_three_modes() {
        let state = GaussianState::beamsplit_tmsv(0.55).unwrap();
        let part = ModePartition::new(&[0, 1], &[2], 3).unwrap();
        let exact = optimize_three_mode(&state, &part).unwrap();
        let ascent = optimize_multimode_pure(&state, &part, 7).unwrap();
        assert_relative_eq!(ascent.value, exact.value, epsilon = 1e-10);
    }

    #[test]
    fn uncorrelated_extra_pair_changes_nothing() {
        // TMSV on the kept pair, independent TMSV on the measured pair:
        // no measurement can help or hurt.
        let state = GaussianState::two_mode_squeezed(0.5)
            .unwrap()
            .tensor(&GaussianState::two_mode_squeezed(0.8).unwrap());
        let part = ModePartition::new(&[0, 1], &[2, 3], 4).unwrap();
        let got = optimize_multimode_pure(&state, &part, 3).unwrap();
        let expect = entropy_of_entanglement(&GaussianState::two_mode_squeezed(0.5).unwrap())
            .unwrap()
            .value;
        assert_relative_eq!(got.value, expect, epsilon = 1e-9);
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let state = GaussianState::two_mode_squeezed(0.6)
            .unwrap()
            .tensor(&GaussianState::two_mode_squeezed(0.4).unwrap());
        let bs = SymplecticTransform::beamsplitter(4, 1, 2, 0.45).unwrap();
        let state = state.apply(&bs).unwrap();
        let part = ModePartition::new(&[0, 3], &[1, 2], 4).unwrap();
        let a = optimize_multimode_pure(&state, &part, 42).unwrap();
        let b = optimize_multimode_pure(&state, &part, 42).unwrap();
        assert_eq!(a.value, b.value);
        for (sa, sb) in a.optimal_specs.iter().zip(&b.optimal_specs) {
            assert_eq!(sa, sb);
        }
    }

    #[test]
    fn beats_or_matches_naive_zero_phases() {
        let state = GaussianState::two_mode_squeezed(0.7)
            .unwrap()
            .tensor(&GaussianState::vacuum(2));
        let bs1 = SymplecticTransform::beamsplitter(4, 1, 2, 0.6).unwrap();
        let bs2 = SymplecticTransform::beamsplitter(4, 2, 3, 0.3).unwrap();
        let rot = SymplecticTransform::rotation(0.9).embed(4, &[2]).unwrap();
        let state = state
            .apply(&bs1)
            .unwrap()
            .apply(&rot)
            .unwrap()
            .apply(&bs2)
            .unwrap();
        let part = ModePartition::new(&[0, 1], &[2, 3], 4).unwrap();

        let got = optimize_multimode_pure(&state, &part, 11).unwrap();
        let zero = objective(&state, &part, &[0.0, 0.0]).unwrap();
        assert!(got.value >= zero - 1e-10);

        let check = entropy_of_entanglement(&got.conditional).unwrap();
        assert_relative_eq!(check.value, got.value, epsilon = 1e-10);
    }

    #[test]
    fn rejects_partial_partitions() {
        let state = GaussianState::beamsplit_tmsv(0.5).unwrap();
        let part = ModePartition::new(&[0, 1], &[], 3).unwrap();
        assert!(optimize_multimode_pure(&state, &part, 0).is_err());
    }
}
