//! Acceptance gate: one test per criterion, each printing a single pass or
//! fail line. Run with `cargo test -p gle-cli --test acceptance -- --nocapture`
//! to see the lines; the suite fails loudly either way.

use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use gle_core::conditioning::{condition_gaussian, MeasurementSpec};
use gle_core::entanglement::{entropy_of_entanglement, log_negativity, thermal_entropy, Measure};
use gle_core::fock::{
    localizable_gaussian_closed_form, localizable_non_gaussian, tmsv_entropy_series,
};
use gle_core::localize::{
    evaluate_candidate, grid_oracle, optimize_symmetric, optimize_three_mode, reduce_symmetric,
    reduce_symmetric_kept_frame, symmetric_mu_squared, GridSpec,
};
use gle_core::sampling::{random_local_symplectic, random_pure_state, random_symmetric_spec};
use gle_core::symplectic::{symplectic_form, SymplecticTransform};
use gle_core::{GaussianState, ModePartition};

/// Bookkeeping for one criterion: a deadline and a single result line.
struct Criterion {
    index: usize,
    name: &'static str,
    budget: Option<Duration>,
    started: Instant,
}

impl Criterion {
    fn start(index: usize, name: &'static str, budget_secs: Option<u64>) -> Self {
        Criterion {
            index,
            name,
            budget: budget_secs.map(Duration::from_secs),
            started: Instant::now(),
        }
    }

    fn finish(self, outcome: Result<String, String>) {
        let elapsed = self.started.elapsed();
        let over_budget = self.budget.is_some_and(|b| elapsed > b);
        match (&outcome, over_budget) {
            (Ok(detail), false) => {
                println!(
                    "acceptance {} ({}): PASS ({detail}; {elapsed:.2?})",
                    self.index, self.name
                );
            }
            (Ok(_), true) => {
                let msg = format!(
                    "finished correct but over budget: {elapsed:.2?} > {:?}",
                    self.budget.unwrap()
                );
                println!("acceptance {} ({}): FAIL ({msg})", self.index, self.name);
                panic!("{msg}");
            }
            (Err(msg), _) => {
                println!("acceptance {} ({}): FAIL ({msg})", self.index, self.name);
                panic!("{msg}");
            }
        }
    }
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gle-acceptance-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).expect("create scratch dir");
    dir
}

fn max_abs_diff(a: &nalgebra::DMatrix<f64>, b: &nalgebra::DMatrix<f64>) -> f64 {
    (a - b).iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// 1. The beamsplit two-mode-squeezed family, run through the real CLI
///    pipeline (`gen` then `localize`), matches the thermal-entropy closed
///    form at n_A = (1 - lambda^4)^{-1/2}/2 - 1/2 to 1e-9.
#[test]
fn beamsplit_family_closed_form_via_cli() {
    let c = Criterion::start(1, "beamsplit family closed form via CLI", Some(1));
    let outcome = (|| {
        let exe = env!("CARGO_BIN_EXE_gle");
        let dir = scratch_dir("fig3");
        let mut max_err = 0.0_f64;
        for k in 1..=9_u32 {
            let lambda = f64::from(k) / 10.0;
            let state_path = dir.join(format!("fig3-{k}.json"));
            let gen = Command::new(exe)
                .args([
                    "gen",
                    "fig3",
                    "--lambda",
                    &format!("{lambda}"),
                    "--out",
                    state_path.to_str().unwrap(),
                ])
                .output()
                .map_err(|e| format!("spawning gen: {e}"))?;
            if !gen.status.success() {
                return Err(format!("gen failed at lambda {lambda}"));
            }
            let localize = Command::new(exe)
                .args([
                    "localize",
                    "--state",
                    state_path.to_str().unwrap(),
                    "--method",
                    "three-mode",
                    "--format",
                    "json",
                ])
                .output()
                .map_err(|e| format!("spawning localize: {e}"))?;
            if !localize.status.success() {
                return Err(format!("localize failed at lambda {lambda}"));
            }
            let report: Value = serde_json::from_slice(&localize.stdout)
                .map_err(|e| format!("bad localize JSON: {e}"))?;
            let value = report["value"]
                .as_f64()
                .ok_or("missing value field".to_string())?;
            let n_a = 0.5 / (1.0 - lambda.powi(4)).sqrt() - 0.5;
            let expected = thermal_entropy(n_a);
            let err = (value - expected).abs();
            max_err = max_err.max(err);
            if err > 1e-9 {
                return Err(format!(
                    "lambda {lambda}: value {value} vs closed form {expected} (err {err:.3e})"
                ));
            }
        }
        fs::remove_dir_all(&dir).ok();
        Ok(format!("9 lambdas, max error {max_err:.2e}"))
    })();
    c.finish(outcome);
}

/// 2. For 200 random physical symmetric parameter sets with three modes,
///    the optimizer's mu^2 equals (b-e1)(b-e2)(1 + 2 min(e1,e2)/b) to 1e-10,
///    and the reported value is its floored half-log.
#[test]
fn symmetric_three_mode_closed_form() {
    let c = Criterion::start(2, "symmetric three-mode closed form", Some(5));
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut max_err = 0.0_f64;
        for i in 0..200 {
            let spec = random_symmetric_spec(&mut rng, 3);
            let (mu2, _) = symmetric_mu_squared(&spec).map_err(|e| e.to_string())?;
            let closed = (spec.b - spec.eps1)
                * (spec.b - spec.eps2)
                * (1.0 + 2.0 * spec.eps1.min(spec.eps2) / spec.b);
            let err = (mu2 - closed).abs();
            max_err = max_err.max(err);
            if err > 1e-10 {
                return Err(format!(
                    "case {i} {spec:?}: mu^2 {mu2} vs closed {closed} (err {err:.3e})"
                ));
            }
            let result = optimize_symmetric(&spec).map_err(|e| e.to_string())?;
            let expected = (-0.5 * mu2.log2()).max(0.0);
            if (result.value - expected).abs() > 1e-12 {
                return Err(format!(
                    "case {i}: value {} inconsistent with mu^2 ({expected})",
                    result.value
                ));
            }
        }
        Ok(format!("200 parameter sets, max mu^2 error {max_err:.2e}"))
    })();
    c.finish(outcome);
}

/// 3. For 100 random pure three-mode circuit states, the default grid
///    oracle never beats the analytic optimum by more than 1e-6, and the best
///    projector at squeezing 6 comes within 1e-3 ebits of the analytic
///    homodyne value.
#[test]
fn homodyne_optimality_on_random_pure_states() {
    let c = Criterion::start(3, "homodyne optimality, pure three-mode", Some(120));
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let partition = ModePartition::keep_pair(0, 1, 3).map_err(|e| e.to_string())?;
        let grid = GridSpec::default();
        let mut worst_overshoot = f64::NEG_INFINITY;
        let mut worst_finite_gap = 0.0_f64;
        for i in 0..100 {
            let state = random_pure_state(&mut rng, 3, 2, 0.7).map_err(|e| e.to_string())?;
            let analytic = optimize_three_mode(&state, &partition).map_err(|e| e.to_string())?;
            let oracle = grid_oracle(&state, &partition, Measure::EntropyOfEntanglement, &grid)
                .map_err(|e| e.to_string())?;
            let overshoot = oracle.value - analytic.value;
            worst_overshoot = worst_overshoot.max(overshoot);
            if overshoot > 1e-6 {
                return Err(format!(
                    "case {i}: oracle {} beats analytic {} by {overshoot:.3e}",
                    oracle.value, analytic.value
                ));
            }
            let mut best_finite = f64::NEG_INFINITY;
            for k in 0..grid.theta_steps {
                let theta = core::f64::consts::PI * (k as f64) / (grid.theta_steps as f64);
                let value = evaluate_candidate(
                    &state,
                    &partition,
                    &[MeasurementSpec::Projector { theta, r: 6.0 }],
                    Measure::EntropyOfEntanglement,
                )
                .map_err(|e| e.to_string())?;
                best_finite = best_finite.max(value);
            }
            let finite_gap = analytic.value - best_finite;
            worst_finite_gap = worst_finite_gap.max(finite_gap);
            if finite_gap > 1e-3 {
                return Err(format!(
                    "case {i}: best r=6 projector {best_finite} trails analytic {} by {finite_gap:.3e}",
                    analytic.value
                ));
            }
            if best_finite - analytic.value > 1e-6 {
                return Err(format!(
                    "case {i}: finite-r projector beats the analytic optimum by {:.3e}",
                    best_finite - analytic.value
                ));
            }
        }
        Ok(format!(
            "100 states, worst oracle overshoot {worst_overshoot:.2e}, \
             worst finite-r shortfall {worst_finite_gap:.2e}"
        ))
    })();
    c.finish(outcome);
}

/// 4. For 50 random symmetric parameter sets with 3 to 5 modes, the grid
///    oracle measuring the collective mode of the kept-frame reduced model
///    never beats the symmetric optimizer by more than 1e-6, and comes
///    within 1e-9 of it (its angle grid contains both quadratures, so a
///    larger shortfall would mean the comparison is in the wrong frame).
#[test]
fn homodyne_optimality_on_symmetric_mixed_states() {
    let c = Criterion::start(4, "homodyne optimality, symmetric mixed", Some(60));
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let partition = ModePartition::keep_pair(0, 1, 3).map_err(|e| e.to_string())?;
        let grid = GridSpec::default();
        let mut worst = f64::NEG_INFINITY;
        let mut worst_short = 0.0_f64;
        for i in 0..50 {
            let n = 3 + (i % 3);
            let spec = random_symmetric_spec(&mut rng, n);
            let analytic = optimize_symmetric(&spec).map_err(|e| e.to_string())?;
            let model = reduce_symmetric_kept_frame(&spec).map_err(|e| e.to_string())?;
            let oracle = grid_oracle(&model, &partition, Measure::LogNegativity, &grid)
                .map_err(|e| e.to_string())?;
            let overshoot = oracle.value - analytic.value;
            worst = worst.max(overshoot);
            worst_short = worst_short.max(-overshoot);
            if overshoot > 1e-6 {
                return Err(format!(
                    "case {i} (N = {n}) {spec:?}: oracle {} beats analytic {} by {overshoot:.3e}",
                    oracle.value, analytic.value
                ));
            }
            if overshoot < -1e-9 {
                return Err(format!(
                    "case {i} (N = {n}) {spec:?}: oracle {} falls {:.3e} short of analytic {}",
                    oracle.value, -overshoot, analytic.value
                ));
            }
        }
        Ok(format!(
            "50 parameter sets, worst oracle overshoot {worst:.2e}, worst shortfall {worst_short:.2e}"
        ))
    })();
    c.finish(outcome);
}

/// 5. Equal-angle homodynes on every measured mode of the full symmetric
///    state reproduce the reduced model's conditional covariance matrix of
///    the kept pair to 1e-9, for 3 to 6 modes. The model's kept pair lives
///    behind the balanced beam splitter that splits it into symmetric and
///    antisymmetric combinations, so the full-state conditional is compared
///    after that rotation.
#[test]
fn symmetric_optimum_is_locally_realized() {
    let c = Criterion::start(5, "local realization of the symmetric optimum", None);
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let model_partition = ModePartition::keep_pair(0, 1, 3).map_err(|e| e.to_string())?;
        let kept_bs = SymplecticTransform::beamsplitter(2, 0, 1, 0.5).map_err(|e| e.to_string())?;
        let mut max_gap = 0.0_f64;
        for n in 3..=6 {
            for _ in 0..5 {
                let spec = random_symmetric_spec(&mut rng, n);
                let full = spec.assemble().map_err(|e| e.to_string())?;
                let full_partition =
                    ModePartition::keep_pair(0, 1, n).map_err(|e| e.to_string())?;
                let model = reduce_symmetric(&spec).map_err(|e| e.to_string())?;
                for theta in [0.0, core::f64::consts::FRAC_PI_2, 0.7] {
                    let specs = vec![MeasurementSpec::Homodyne { theta }; n - 2];
                    let on_full = condition_gaussian(&full, &full_partition, &specs)
                        .map_err(|e| e.to_string())?
                        .apply(&kept_bs)
                        .map_err(|e| e.to_string())?;
                    let on_model = condition_gaussian(
                        &model,
                        &model_partition,
                        &[MeasurementSpec::Homodyne { theta }],
                    )
                    .map_err(|e| e.to_string())?;
                    let gap = max_abs_diff(on_full.cm(), on_model.cm());
                    max_gap = max_gap.max(gap);
                    if gap > 1e-9 {
                        return Err(format!(
                            "N = {n}, theta = {theta}, {spec:?}: conditional mismatch {gap:.3e}"
                        ));
                    }
                }
            }
        }
        Ok(format!(
            "N in 3..=6, three angles each, max conditional mismatch {max_gap:.2e}"
        ))
    })();
    c.finish(outcome);
}

/// 6. Photon counting beats the optimal Gaussian strategy at every point
///    of the 99-point lambda grid, by at least 1e-4 ebits from lambda = 0.1.
#[test]
fn photon_counting_beats_gaussian() {
    let c = Criterion::start(6, "photon counting beats Gaussian strategy", Some(10));
    let outcome = (|| {
        let mut min_gap_above = f64::INFINITY;
        for k in 1..=99_u32 {
            let lambda = f64::from(k) / 100.0;
            let gaussian = localizable_gaussian_closed_form(lambda).map_err(|e| e.to_string())?;
            let counting = localizable_non_gaussian(lambda, None).map_err(|e| e.to_string())?;
            let gap = counting - gaussian;
            if gap < 0.0 {
                return Err(format!(
                    "lambda {lambda}: counting {counting} below Gaussian {gaussian}"
                ));
            }
            if lambda >= 0.1 {
                min_gap_above = min_gap_above.min(gap);
                if gap < 1e-4 {
                    return Err(format!(
                        "lambda {lambda}: gap {gap:.3e} below the 1e-4 ebit margin"
                    ));
                }
            }
        }
        Ok(format!(
            "99 grid points, min gap {min_gap_above:.2e} for lambda >= 0.1"
        ))
    })();
    c.finish(outcome);
}

/// 7. The steering determinant's squeezing dependence is convex: on 1000
///    random (M_xx, M_pp, s_max, angle) samples, no interior squeezing beats
///    the better endpoint by more than 1e-12.
#[test]
fn steering_optimum_sits_at_the_endpoint() {
    let c = Criterion::start(7, "steering optimum at the squeezing endpoint", None);
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..1000 {
            let m_xx = rng.random_range(0.0..5.0_f64);
            let m_pp = rng.random_range(0.0..=m_xx);
            let s_max = rng.random_range(0.01..2.0_f64);
            let alpha = rng.random_range(0.0..core::f64::consts::PI);
            let p = m_xx * alpha.cos().powi(2) + m_pp * alpha.sin().powi(2);
            let q = m_xx * alpha.sin().powi(2) + m_pp * alpha.cos().powi(2);
            let g = |s: f64| p * (2.0 * s).exp() + q * (-2.0 * s).exp();
            let endpoint = g(s_max).max(g(-s_max));
            for j in 1..100 {
                let s = -s_max + 2.0 * s_max * (j as f64) / 100.0;
                if g(s) > endpoint + 1e-12 {
                    return Err(format!(
                        "sample {i}: interior s = {s} value {} beats endpoint {endpoint}",
                        g(s)
                    ));
                }
            }
        }
        Ok("1000 samples, 99 interior points each".to_string())
    })();
    c.finish(outcome);
}

/// 8. The covariance-matrix entropy of two-mode squeezed vacuum agrees
///    with the Fock-series entropy to 1e-8 across the squeezing range.
#[test]
fn covariance_and_fock_entropies_agree() {
    let c = Criterion::start(8, "covariance vs Fock-series entropy", None);
    let outcome = (|| {
        let mut max_err = 0.0_f64;
        for k in 1..=9_u32 {
            let lambda = f64::from(k) / 10.0;
            let state = GaussianState::two_mode_squeezed(lambda).map_err(|e| e.to_string())?;
            let cm_route = entropy_of_entanglement(&state)
                .map_err(|e| e.to_string())?
                .value;
            let series = tmsv_entropy_series(lambda, None).map_err(|e| e.to_string())?;
            let err = (cm_route - series).abs();
            max_err = max_err.max(err);
            if err > 1e-8 {
                return Err(format!(
                    "lambda {lambda}: matrix route {cm_route} vs series {series} (err {err:.3e})"
                ));
            }
        }
        Ok(format!("9 lambdas, max error {max_err:.2e}"))
    })();
    c.finish(outcome);
}

/// 9. Structural invariants on 500 random cases each: circuits preserve
///    the symplectic form (1e-10), conditioning preserves purity (1e-8),
///    both measures are invariant under local symplectics (1e-8), and the
///    2x2 determinant expansion holds (1e-9 relative).
#[test]
fn structural_invariant_suite() {
    let c = Criterion::start(9, "structural invariant suite", None);
    let outcome = (|| {
        // Circuits stay symplectic.
        for seed in 0..500_u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 2 + (seed as usize % 3);
            let mut t = random_local_symplectic(&mut rng, n, 1.0);
            for m in 0..n - 1 {
                let bs = SymplecticTransform::beamsplitter(n, m, m + 1, rng.random_range(0.1..0.9))
                    .map_err(|e| e.to_string())?;
                t = t.compose(&bs).map_err(|e| e.to_string())?;
            }
            let omega = symplectic_form(n);
            let residual = max_abs_diff(&(t.matrix() * &omega * t.matrix().transpose()), &omega);
            if residual > 1e-10 {
                return Err(format!("seed {seed}: symplectic residual {residual:.3e}"));
            }
        }

        // Conditioning pure states on pure Gaussian measurements keeps the
        // kept pair pure.
        for seed in 500..1000_u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 3 + (seed as usize % 3);
            let state = random_pure_state(&mut rng, n, 2, 0.7).map_err(|e| e.to_string())?;
            let partition = ModePartition::keep_pair(0, 1, n).map_err(|e| e.to_string())?;
            let specs: Vec<MeasurementSpec> = (0..n - 2)
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
                .collect();
            let conditional =
                condition_gaussian(&state, &partition, &specs).map_err(|e| e.to_string())?;
            let impurity = conditional.impurity().map_err(|e| e.to_string())?;
            if impurity > 1e-8 {
                return Err(format!("seed {seed}: conditional impurity {impurity:.3e}"));
            }
        }

        // Local symplectics change neither measure.
        for seed in 1000..1500_u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pure2 = random_pure_state(&mut rng, 2, 2, 0.7).map_err(|e| e.to_string())?;
            let local2 = random_local_symplectic(&mut rng, 2, 0.8);
            let moved2 = pure2.apply(&local2).map_err(|e| e.to_string())?;
            let before = entropy_of_entanglement(&pure2)
                .map_err(|e| e.to_string())?
                .value;
            let after = entropy_of_entanglement(&moved2)
                .map_err(|e| e.to_string())?
                .value;
            if (before - after).abs() > 1e-8 * before.abs().max(1.0) {
                return Err(format!("seed {seed}: entropy moved {before} -> {after}"));
            }

            let pure3 = random_pure_state(&mut rng, 3, 2, 0.7).map_err(|e| e.to_string())?;
            let mixed = pure3.reduce(&[0, 1]).map_err(|e| e.to_string())?;
            let local = random_local_symplectic(&mut rng, 2, 0.8);
            let moved = mixed.apply(&local).map_err(|e| e.to_string())?;
            let before = log_negativity(&mixed).map_err(|e| e.to_string())?.value;
            let after = log_negativity(&moved).map_err(|e| e.to_string())?.value;
            if (before - after).abs() > 1e-8 * before.abs().max(1.0) {
                return Err(format!(
                    "seed {seed}: log negativity moved {before} -> {after}"
                ));
            }
        }

        // det(X + Y) = det X + det Y + tr(X R Y^T R^T) for 2x2 blocks.
        let r = nalgebra::DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        for seed in 1500..2000_u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut draw =
                || nalgebra::DMatrix::from_fn(2, 2, |_, _| rng.random_range(-3.0..3.0_f64));
            let x = draw();
            let y = draw();
            let lhs = (&x + &y).determinant();
            let rhs = x.determinant()
                + y.determinant()
                + (&x * &r * y.transpose() * r.transpose()).trace();
            if (lhs - rhs).abs() > 1e-9 * lhs.abs().max(rhs.abs()).max(1.0) {
                return Err(format!("seed {seed}: {lhs} vs {rhs}"));
            }
        }

        Ok("4 invariants x 500 cases".to_string())
    })();
    c.finish(outcome);
}
