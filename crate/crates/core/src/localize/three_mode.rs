//! Exact localization for pure three-mode states.
//!
//! Any pure three-mode state splits, under local symplectic transforms
//! `S_AB` on the kept pair and `U_C` on the measured mode, into a two-mode
//! squeezed vacuum (parameter `lambda`) between the measured mode and one
//! collective mode of the pair, times vacuum. Measuring the squeezed arm
//! steers the collective mode through every pure squeezed state with
//! squeezing `|s| <= s_max`, `e^(2 s_max) = (1 + lambda^2)/(1 - lambda^2)`,
//! and the localized entropy depends on the steering only through
//! `det gamma_A = (det S_AA)^2 + (det T_AB)^2 + tr[gamma(s, theta) M]`,
//! with `M` a positive matrix assembled from the `S_AB` blocks. The trace
//! term is convex in `s`, so the optimum sits at `s = +/- s_max`, aligned
//! with the top eigenvector of `M`; homodyne detection reaches exactly
//! those endpoints.

use alloc::format;
use alloc::vec;
use nalgebra::DMatrix;
// Supplies `f64` math in no_std builds; idle when std is linked and the
// inherent methods win, hence the allow.
#[allow(unused_imports)]
use num_traits::Float;

use crate::conditioning::{condition_gaussian, MeasurementSpec};
use crate::entanglement::{thermal_entropy, Measure};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, ModePartition};
use crate::localize::{LocalizationResult, Method};
use crate::symplectic::{self, SymplecticTransform};
use crate::tol;

/// Normal form of a pure three-mode state relative to a kept pair and one
/// measured mode.
#[derive(Debug, Clone)]
pub struct ThreeModeReduction {
    /// Squeezing parameter of the virtual two-mode squeezed vacuum linking
    /// the measured mode to the pair; `0` for a product state.
    pub lambda: f64,
    /// Largest reachable steering squeezing, `ln(nu)/2` with
    /// `nu = sqrt(det gamma_C)`.
    pub s_max: f64,
    /// Two-mode transform on the kept pair (decomposed frame to physical).
    pub s_ab: SymplecticTransform,
    /// Single-mode transform on the measured mode.
    pub u_c: SymplecticTransform,
    /// The objective matrix `M = S_AA^T R T_AB T_AB^T R^T S_AA`.
    pub m_matrix: DMatrix<f64>,
    /// Angle diagonalizing `M`: `W(theta0) M W(theta0)^T = diag(m_xx,
    /// m_pp)` with `m_xx >= m_pp`.
    pub theta0: f64,
    pub m_xx: f64,
    pub m_pp: f64,
}

impl ThreeModeReduction {
    /// `det S_AA` of the pair transform's kept-mode block.
    fn det_s_aa(&self) -> f64 {
        self.s_ab.matrix().view((0, 0), (2, 2)).determinant()
    }

    /// `det T_AB` of the pair transform's cross block.
    fn det_t_ab(&self) -> f64 {
        self.s_ab.matrix().view((0, 2), (2, 2)).determinant()
    }

    /// `det gamma_A` when the steered collective mode sits at squeezing
    /// `s` and angle `theta` (in the decomposed frame).
    pub fn det_gamma_a(&self, s: f64, theta: f64) -> f64 {
        let alpha = theta + self.theta0;
        let (c2, s2) = {
            let c = alpha.cos();
            let sn = alpha.sin();
            (c * c, sn * sn)
        };
        let f = (2.0 * s).exp() * (self.m_xx * c2 + self.m_pp * s2)
            + (-2.0 * s).exp() * (self.m_xx * s2 + self.m_pp * c2);
        self.det_s_aa().powi(2) + self.det_t_ab().powi(2) + f
    }

    /// The maximal `det gamma_A` together with the optimal steering angle
    /// (decomposed frame): the endpoint `s = s_max`, aligned with the top
    /// eigenvector of `M`.
    pub fn optimal_det(&self) -> (f64, f64) {
        let theta_star = -self.theta0;
        (self.det_gamma_a(self.s_max, theta_star), theta_star)
    }

    /// The localized entropy of entanglement.
    pub fn optimal_entropy(&self) -> f64 {
        let (det, _) = self.optimal_det();
        let n_a = (det.max(1.0).sqrt() - 1.0) / 2.0;
        thermal_entropy(n_a)
    }
}

fn check_three_mode(
    state: &GaussianState,
    partition: &ModePartition,
) -> Result<(usize, usize, usize)> {
    if state.n_modes() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: state.n_modes(),
        });
    }
    if partition.kept().len() != 2 || partition.measured().len() != 1 {
        return Err(Error::InvalidPartition(format!(
            "need two kept modes and one measured mode, got {} and {}",
            partition.kept().len(),
            partition.measured().len()
        )));
    }
    Ok((
        partition.kept()[0],
        partition.kept()[1],
        partition.measured()[0],
    ))
}

/// Decomposes a pure three-mode state into its measured-arm normal form.
pub fn decompose_three_mode(
    state: &GaussianState,
    partition: &ModePartition,
) -> Result<ThreeModeReduction> {
    let (a, b, c) = check_three_mode(state, partition)?;
    let g3 = state.reduce(&[a, b, c])?;
    let impurity = g3.impurity()?;
    if impurity > tol::PURITY_ATOL {
        return Err(Error::NotPure { impurity });
    }

    // Bring the measured mode to a thermal form: gamma_C = nu * U_C0^2.
    let gamma_c = g3.mode_block(2)?;
    let nu = gamma_c.determinant().max(1.0).sqrt();
    let lambda = ((nu - 1.0) / (nu + 1.0)).max(0.0).sqrt();
    let s_max = 0.5 * nu.ln();
    let u_c0 = SymplecticTransform::new(1, symplectic::sqrt_spd(&(gamma_c / nu))?)?;
    let strip_c = u_c0.inverse().embed(3, &[2])?;
    let g_stripped = g3.apply(&strip_c)?;

    // Williamson on the pair: gamma'_AB = S_W diag(nu, nu, 1, 1) S_W^T.
    let pair = g_stripped.reduce(&[0, 1])?;
    let w = symplectic::williamson(pair.cm())?;
    let s_ab = w.transform.clone();
    let undo_pair = s_ab.inverse().direct_sum(&SymplecticTransform::identity(1));
    let g_normal = g_stripped.apply(&undo_pair)?;

    // In the normal frame the only correlation left is the cross block of
    // the collective mode with the measured mode, sinh(2r) * O with O a
    // reflection; snapping O through its polar factor and absorbing it
    // into U_C leaves the canonical two-mode squeezed cross diag(1, -1).
    let sinh2r = (nu * nu - 1.0).max(0.0).sqrt();
    let u_c = if sinh2r > 1e-9 {
        let x_a = g_normal.cm().view((0, 4), (2, 2)).into_owned();
        let o_raw = x_a / sinh2r;
        let svd = o_raw.svd(true, true);
        let u = svd.u.as_ref().expect("requested u");
        let v_t = svd.v_t.as_ref().expect("requested v_t");
        let sign = -(u.determinant() * v_t.determinant()).signum();
        let mut fix = DMatrix::identity(2, 2);
        fix[(1, 1)] = sign;
        let o = u * fix * v_t;
        let f = symplectic::mat2(1.0, 0.0, 0.0, -1.0);
        let t = SymplecticTransform::new(1, &f * o)?;
        u_c0.compose(&t.inverse())?
    } else {
        u_c0
    };

    // Objective matrix from the S_AB blocks.
    let s_aa = s_ab.matrix().view((0, 0), (2, 2)).into_owned();
    let t_ab = s_ab.matrix().view((0, 2), (2, 2)).into_owned();
    let r = symplectic::symplectic_form(1);
    let m = s_aa.transpose() * &r * &t_ab * t_ab.transpose() * r.transpose() * &s_aa;
    let m = 0.5 * (&m + m.transpose());

    // Closed-form diagonalization of the symmetric 2x2 M.
    let (m11, m22, m12) = (m[(0, 0)], m[(1, 1)], m[(0, 1)]);
    let theta0 = 0.5 * (2.0 * m12).atan2(m11 - m22);
    let mean = 0.5 * (m11 + m22);
    let dev = (0.25 * (m11 - m22) * (m11 - m22) + m12 * m12).sqrt();
    let (m_xx, m_pp) = (mean + dev, mean - dev);

    let reduction = ThreeModeReduction {
        lambda,
        s_max,
        s_ab,
        u_c,
        m_matrix: m,
        theta0,
        m_xx,
        m_pp,
    };

    // The normal form must reproduce the input state.
    let model = model_state(lambda)?;
    let back = reduction.s_ab.direct_sum(&reduction.u_c);
    let rebuilt = model.apply(&back)?;
    let scale = g3.cm().iter().fold(1.0_f64, |mx, v| mx.max(v.abs()));
    let residual = (rebuilt.cm() - g3.cm())
        .iter()
        .fold(0.0_f64, |mx, v| mx.max(v.abs()));
    if residual > scale * (1e-8_f64).max(1e3 * impurity) {
        return Err(Error::Numerical(format!(
            "three-mode normal form failed to reconstruct the state (residual {residual:.3e})"
        )));
    }

    Ok(reduction)
}

/// The decomposed-frame reference state: a two-mode squeezed vacuum
/// between the collective mode (0) and the measured mode (2), vacuum in
/// mode 1.
fn model_state(lambda: f64) -> Result<GaussianState> {
    let tmsv = GaussianState::two_mode_squeezed(lambda)?;
    tmsv.tensor(&GaussianState::vacuum(1)).reduce(&[0, 2, 1])
}

/// Exact localization for a pure three-mode state: decomposes, picks the
/// optimal steering endpoint, and maps it back to a homodyne angle on the
/// measured mode.
pub fn optimize_three_mode(
    state: &GaussianState,
    partition: &ModePartition,
) -> Result<LocalizationResult> {
    let reduction = decompose_three_mode(state, partition)?;
    let value = reduction.optimal_entropy();

    let theta_opt = if reduction.s_max < 1e-12 {
        // Product state: any measurement does nothing.
        0.0
    } else {
        // Optimal steering squeezes along theta_star = -theta0; the
        // matching homodyne direction in the decomposed measured-mode
        // frame is phi = theta_star - pi/2, mapped back through U_C^-T.
        let (_, theta_star) = reduction.optimal_det();
        let phi = theta_star - core::f64::consts::FRAC_PI_2;
        let u_dec = nalgebra::DVector::from_column_slice(&[phi.cos(), phi.sin()]);
        let u_phys = reduction.u_c.inverse().matrix().transpose() * u_dec;
        normalize_angle(u_phys[1].atan2(u_phys[0]))
    };

    let specs = vec![MeasurementSpec::Homodyne { theta: theta_opt }];
    let conditional = condition_gaussian(state, partition, &specs)?;
    Ok(LocalizationResult {
        measure: Measure::EntropyOfEntanglement,
        value,
        optimal_specs: specs,
        method: Method::AnalyticThreeMode,
        conditional,
    })
}

/// Folds an angle into `[0, pi)`; directions are only defined mod pi.
pub(crate) fn normalize_angle(t: f64) -> f64 {
    let mut t = t % core::f64::consts::PI;
    if t < 0.0 {
        t += core::f64::consts::PI;
    }
    if t >= core::f64::consts::PI {
        t -= core::f64::consts::PI;
    }
    t
}
