//! Seeded samplers for states, transforms, and family parameters, used by
//! the verification suites and the oracle-comparison workflows.

use alloc::vec::Vec;
use rand::Rng;

use crate::error::Result;
use crate::gaussian::GaussianState;
use crate::localize::SymmetricStateSpec;
use crate::symplectic::SymplecticTransform;

/// A random single-mode symplectic transform via its Euler form
/// `W(a) diag(e^r, e^-r) W(b)` with `|r| <= max_squeeze`.
pub fn random_single_mode_symplectic<R: Rng + ?Sized>(
    rng: &mut R,
    max_squeeze: f64,
) -> SymplecticTransform {
    let two_pi = 2.0 * core::f64::consts::PI;
    let a = SymplecticTransform::rotation(rng.random_range(0.0..two_pi));
    let s = SymplecticTransform::squeezer(rng.random_range(-max_squeeze..max_squeeze));
    let b = SymplecticTransform::rotation(rng.random_range(0.0..two_pi));
    a.compose(&s)
        .and_then(|t| t.compose(&b))
        .expect("same size")
}

/// A random product of independent single-mode transforms, one per mode.
pub fn random_local_symplectic<R: Rng + ?Sized>(
    rng: &mut R,
    n_modes: usize,
    max_squeeze: f64,
) -> SymplecticTransform {
    let mut t = random_single_mode_symplectic(rng, max_squeeze);
    for _ in 1..n_modes {
        t = t.direct_sum(&random_single_mode_symplectic(rng, max_squeeze));
    }
    t
}

/// A random pure state: vacuum through a few layers of single-mode
/// rotations and squeezers interleaved with nearest-neighbor beam
/// splitters. Squeezing per layer stays below `max_squeeze`, keeping
/// covariance norms moderate.
pub fn random_pure_state<R: Rng + ?Sized>(
    rng: &mut R,
    n_modes: usize,
    layers: usize,
    max_squeeze: f64,
) -> Result<GaussianState> {
    let mut state = GaussianState::vacuum(n_modes);
    for _ in 0..layers {
        for m in 0..n_modes {
            let local = random_single_mode_symplectic(rng, max_squeeze).embed(n_modes, &[m])?;
            state = state.apply(&local)?;
        }
        for m in 0..n_modes.saturating_sub(1) {
            let t = rng.random_range(0.15..0.85);
            let bs = SymplecticTransform::beamsplitter(n_modes, m, m + 1, t)?;
            state = state.apply(&bs)?;
        }
    }
    Ok(state)
}

/// A random physical parameter set of the symmetric family, by rejection
/// sampling.
pub fn random_symmetric_spec<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymmetricStateSpec {
    loop {
        let b = rng.random_range(1.0..2.2_f64);
        let span = 0.9 * (b - 1.0 / b).max(1e-3);
        let eps1 = rng.random_range(-span..span);
        let eps2 = rng.random_range(-span..span);
        if let Ok(spec) = SymmetricStateSpec::new(n, b, eps1, eps2) {
            return spec;
        }
    }
}

/// Homodyne phases drawn uniformly from `[0, pi)`.
pub fn random_phases<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<f64> {
    (0..count)
        .map(|_| rng.random_range(0.0..core::f64::consts::PI))
        .collect()
}
