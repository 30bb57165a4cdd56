//! Randomized structural invariants of the covariance-matrix machinery.
//!
//! Each property runs on hundreds of seeded random inputs; failures shrink
//! to a reproducing seed.

use approx::relative_eq;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gle_core::conditioning::{condition_gaussian, condition_sequence, MeasurementSpec};
use gle_core::entanglement::{entropy_of_entanglement, log_negativity};
use gle_core::localize::{optimize_symmetric, optimize_three_mode};
use gle_core::sampling::{random_local_symplectic, random_pure_state, random_symmetric_spec};
use gle_core::symplectic::{symplectic_form, SymplecticTransform};
use gle_core::ModePartition;

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Random measurement specs, one per measured mode, mixing homodynes and
/// mildly squeezed projectors.
fn random_specs(rng: &mut ChaCha8Rng, count: usize) -> Vec<MeasurementSpec> {
    use rand::Rng;
    (0..count)
        .map(|_| {
            let theta = rng.random_range(0.0..core::f64::consts::PI);
            if rng.random_range(0.0..1.0_f64) < 0.5 {
                MeasurementSpec::Homodyne { theta }
            } else {
                MeasurementSpec::Projector {
                    theta,
                    r: rng.random_range(0.0..2.0),
                }
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// Compositions of rotations, squeezers, and beam splitters stay
    /// symplectic.
    #[test]
    fn circuits_preserve_symplectic_form(seed: u64, n in 2_usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = random_local_symplectic(&mut rng, n, 1.0);
        for m in 0..n - 1 {
            use rand::Rng;
            let bs = SymplecticTransform::beamsplitter(
                n, m, m + 1, rng.random_range(0.1..0.9),
            ).unwrap();
            t = t.compose(&bs).unwrap();
        }
        let omega = symplectic_form(n);
        let residual = max_abs(&(t.matrix() * &omega * t.matrix().transpose() - &omega));
        prop_assert!(residual < 1e-10, "residual {residual}");
    }

    /// Pure states stay pure through random circuits.
    #[test]
    fn circuits_preserve_purity(seed: u64, n in 2_usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = random_pure_state(&mut rng, n, 3, 0.8).unwrap();
        let impurity = state.impurity().unwrap();
        prop_assert!(impurity < 1e-9, "impurity {impurity}");
    }

    /// Conditioning a pure state on any mix of homodynes and projectors
    /// leaves the kept pair pure.
    #[test]
    fn conditioning_preserves_purity(seed: u64, n in 3_usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = random_pure_state(&mut rng, n, 2, 0.7).unwrap();
        let partition = ModePartition::keep_pair(0, 1, n).unwrap();
        let specs = random_specs(&mut rng, n - 2);
        let conditional = condition_gaussian(&state, &partition, &specs).unwrap();
        let impurity = conditional.impurity().unwrap();
        prop_assert!(impurity < 1e-8, "impurity {impurity}");
    }

    /// Entropy of entanglement is invariant under local symplectics.
    #[test]
    fn entropy_invariant_under_local_symplectics(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = random_pure_state(&mut rng, 2, 2, 0.7).unwrap();
        let local = random_local_symplectic(&mut rng, 2, 0.8);
        let moved = state.apply(&local).unwrap();
        let before = entropy_of_entanglement(&state).unwrap().value;
        let after = entropy_of_entanglement(&moved).unwrap().value;
        prop_assert!(
            relative_eq!(before, after, epsilon = 1e-8, max_relative = 1e-8),
            "{before} vs {after}"
        );
    }

    /// Logarithmic negativity is invariant under local symplectics, also
    /// for mixed states.
    #[test]
    fn log_negativity_invariant_under_local_symplectics(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pure3 = random_pure_state(&mut rng, 3, 2, 0.7).unwrap();
        let mixed = pure3.reduce(&[0, 1]).unwrap();
        let local = random_local_symplectic(&mut rng, 2, 0.8);
        let moved = mixed.apply(&local).unwrap();
        let before = log_negativity(&mixed).unwrap().value;
        let after = log_negativity(&moved).unwrap().value;
        prop_assert!(
            relative_eq!(before, after, epsilon = 1e-8, max_relative = 1e-8),
            "{before} vs {after}"
        );
    }

    /// Ideal homodyne agrees with an infinitely squeezed projector: the
    /// conditional state differs by O(e^{-2r}).
    #[test]
    fn homodyne_is_the_squeezed_projector_limit(
        seed: u64,
        theta in 0.0..core::f64::consts::PI,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = random_pure_state(&mut rng, 3, 2, 0.7).unwrap();
        let partition = ModePartition::keep_pair(0, 1, 3).unwrap();
        let ideal = condition_gaussian(
            &state,
            &partition,
            &[MeasurementSpec::Homodyne { theta }],
        ).unwrap();
        // The projector squeezes along its own axis; measuring the theta
        // quadrature means squeezing the conjugate one. The conditional
        // state converges at rate e^{-2r}; r much beyond 8 only trades
        // truncation error for ill-conditioned linear algebra.
        for r in [5.0, 8.0] {
            let finite = condition_gaussian(
                &state,
                &partition,
                &[MeasurementSpec::Projector {
                    theta: core::f64::consts::FRAC_PI_2 - theta,
                    r,
                }],
            ).unwrap();
            let scale = max_abs(ideal.cm()).max(1.0);
            let gap = max_abs(&(ideal.cm() - finite.cm()));
            let bound = 200.0 * (-2.0 * r).exp() * scale;
            prop_assert!(gap < bound, "gap {gap} at r = {r}, bound {bound}");
        }
    }

    /// For 2x2 blocks, det(X + Y) expands into the two determinants plus
    /// a trace coupling through the quarter-turn rotation; the steering
    /// optimizer's closed form rides on this identity.
    #[test]
    fn two_by_two_determinant_expansion(
        x in prop::array::uniform4(-3.0..3.0_f64),
        y in prop::array::uniform4(-3.0..3.0_f64),
    ) {
        let xm = DMatrix::from_row_slice(2, 2, &x);
        let ym = DMatrix::from_row_slice(2, 2, &y);
        let r = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let lhs = (&xm + &ym).determinant();
        let rhs = xm.determinant()
            + ym.determinant()
            + (&xm * &r * ym.transpose() * r.transpose()).trace();
        prop_assert!(
            relative_eq!(lhs, rhs, epsilon = 1e-9, max_relative = 1e-9),
            "{lhs} vs {rhs}"
        );
    }

    /// Measuring all modes at once agrees with measuring them one at a
    /// time.
    #[test]
    fn joint_conditioning_equals_sequential(seed: u64, n in 3_usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = random_pure_state(&mut rng, n, 2, 0.7).unwrap();
        let partition = ModePartition::keep_pair(0, 1, n).unwrap();
        let specs = random_specs(&mut rng, n - 2);
        let joint = condition_gaussian(&state, &partition, &specs).unwrap();
        let sequential = condition_sequence(&state, &partition, &specs).unwrap();
        let scale = max_abs(joint.cm()).max(1.0);
        let gap = max_abs(&(joint.cm() - sequential.cm()));
        prop_assert!(gap < 1e-9 * scale, "gap {gap}");
    }

    /// The closed-form three-mode optimum is realized by actually
    /// conditioning with the reported measurement.
    #[test]
    fn three_mode_value_is_realized(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = random_pure_state(&mut rng, 3, 2, 0.7).unwrap();
        let partition = ModePartition::keep_pair(0, 1, 3).unwrap();
        let result = optimize_three_mode(&state, &partition).unwrap();
        let check = entropy_of_entanglement(&result.conditional).unwrap().value;
        prop_assert!(
            (result.value - check).abs() < 1e-8,
            "claimed {}, conditioned {check}",
            result.value
        );
    }

    /// The symmetric-family optimum is realized on the full state by equal
    /// homodyne phases on every measured mode.
    #[test]
    fn symmetric_value_is_realized(seed: u64, n in 3_usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_symmetric_spec(&mut rng, n);
        let result = optimize_symmetric(&spec).unwrap();
        let check = log_negativity(&result.conditional).unwrap().value;
        prop_assert!(
            (result.value - check).abs() < 1e-8,
            "claimed {}, conditioned {check}",
            result.value
        );
    }
}
