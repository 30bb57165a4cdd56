//! Localization for fully symmetric (generally mixed) N-mode states.
//!
//! The family has covariance matrix with identical diagonal blocks
//! `beta = diag(b, b)` and identical pair correlations
//! `eps = diag(eps1, eps2)`. Localizing onto two of the modes by the same
//! homodyne on each of the remaining `N - 2` reduces, through the
//! symmetric/antisymmetric combination of the kept pair and the collective
//! mode of the measured set, to a three-mode model: only one collective
//! measured mode couples, with weight `sqrt(2(N - 2))`. The optimal phase
//! is a quadrature (`x` or `p`), and the localized log-negativity follows
//! from the product formula for beam-split pairs
//! ([`crate::entanglement::pt_min_eig_product`]).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;
// Supplies `f64` math in no_std builds; idle when std is linked and the
// inherent methods win, hence the allow.
#[allow(unused_imports)]
use num_traits::Float;

use crate::conditioning::{condition_gaussian, MeasurementSpec};
use crate::entanglement::{pt_min_eig_product, Measure};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, ModePartition};
use crate::localize::{LocalizationResult, Method};
use crate::symplectic::SymplecticTransform;

/// Parameters of the symmetric family: every mode has covariance
/// `diag(b, b)`, every pair couples through `diag(eps1, eps2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricStateSpec {
    pub n: usize,
    pub b: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl SymmetricStateSpec {
    /// Validates physicality by assembling the full state once.
    pub fn new(n: usize, b: f64, eps1: f64, eps2: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!(
                "symmetric family needs at least 3 modes, got {n}"
            )));
        }
        if b <= 0.0 || !b.is_finite() || !eps1.is_finite() || !eps2.is_finite() {
            return Err(Error::Domain(String::from(
                "symmetric parameters must be finite with b > 0",
            )));
        }
        let spec = Self { n, b, eps1, eps2 };
        spec.assemble()?;
        Ok(spec)
    }

    /// The full `2N x 2N` covariance matrix, checked for physicality.
    pub fn assemble(&self) -> Result<GaussianState> {
        let d = 2 * self.n;
        let mut cm = DMatrix::zeros(d, d);
        for i in 0..self.n {
            cm[(2 * i, 2 * i)] = self.b;
            cm[(2 * i + 1, 2 * i + 1)] = self.b;
            for j in 0..self.n {
                if i != j {
                    cm[(2 * i, 2 * j)] = self.eps1;
                    cm[(2 * i + 1, 2 * j + 1)] = self.eps2;
                }
            }
        }
        GaussianState::new(self.n, cm)
    }
}

/// The equivalent three-mode model: mode 0 is the symmetric combination
/// of the kept pair (the only one coupled to the measured set), mode 1
/// the antisymmetric combination, mode 2 the collective measured mode.
///
/// Blocks: `gamma_0 = beta + eps`, `gamma_1 = beta - eps`,
/// `gamma_2 = beta + (N - 3) eps`, and the only correlation
/// `sqrt(2(N - 2)) eps` between modes 0 and 2.
pub fn reduce_symmetric(spec: &SymmetricStateSpec) -> Result<GaussianState> {
    let (b, e1, e2) = (spec.b, spec.eps1, spec.eps2);
    let k = (2.0 * (spec.n as f64 - 2.0)).sqrt();
    let nm3 = spec.n as f64 - 3.0;
    let mut cm = DMatrix::zeros(6, 6);
    for (q, e) in [(0usize, e1), (1usize, e2)] {
        cm[(q, q)] = b + e;
        cm[(2 + q, 2 + q)] = b - e;
        cm[(4 + q, 4 + q)] = b + nm3 * e;
        cm[(q, 4 + q)] = k * e;
        cm[(4 + q, q)] = k * e;
    }
    GaussianState::new(3, cm)
}

/// The model of [`reduce_symmetric`] with the balanced beam splitter undone
/// on modes 0 and 1, so they are the kept pair itself rather than its
/// symmetric/antisymmetric combinations.
///
/// In the beam-split frame the kept pair is a direct sum and carries no
/// entanglement of its own; any bipartite measure across `(0, 1)` must be
/// evaluated in this frame to mean the physical pair entanglement.
pub fn reduce_symmetric_kept_frame(spec: &SymmetricStateSpec) -> Result<GaussianState> {
    let model = reduce_symmetric(spec)?;
    let bs = SymplecticTransform::beamsplitter(3, 0, 1, 0.5)?;
    model.apply(&bs.inverse())
}

/// The minimal partial-transpose eigenvalue product `mu^2` over the x/p
/// homodyne choice on the collective measured mode, with the winning angle.
///
/// Only the quadrature angles `0` and `pi/2` can be optimal; both are
/// evaluated through the reduced model.
pub fn symmetric_mu_squared(spec: &SymmetricStateSpec) -> Result<(f64, f64)> {
    let model = reduce_symmetric(spec)?;
    let gamma_b_in = model.mode_block(1)?;

    let mut best: Option<(f64, f64)> = None; // (mu^2, theta)
    for &theta in &[0.0, core::f64::consts::FRAC_PI_2] {
        let part = ModePartition::new(&[0], &[2], 3)?;
        let conditioned =
            condition_gaussian(&model, &part, &[MeasurementSpec::Homodyne { theta }])?;
        let gamma_a_in = conditioned.mode_block(0)?;
        let mu2 = pt_min_eig_product(&gamma_a_in, &gamma_b_in)?;
        if best.is_none_or(|(m, _)| mu2 < m) {
            best = Some((mu2, theta));
        }
    }
    Ok(best.expect("two candidates"))
}

/// Optimal equal-homodyne localization of the symmetric family onto a
/// pair, reported as logarithmic negativity.
pub fn optimize_symmetric(spec: &SymmetricStateSpec) -> Result<LocalizationResult> {
    let (mu2, theta) = symmetric_mu_squared(spec)?;
    let value = (-0.5 * mu2.log2()).max(0.0);

    let state = spec.assemble()?;
    let part = ModePartition::keep_pair(0, 1, spec.n)?;
    let specs: Vec<MeasurementSpec> = vec![MeasurementSpec::Homodyne { theta }; spec.n - 2];
    let conditional = condition_gaussian(&state, &part, &specs)?;

    Ok(LocalizationResult {
        measure: Measure::LogNegativity,
        value,
        optimal_specs: specs,
        method: Method::SymmetricReduction,
        conditional,
    })
}
