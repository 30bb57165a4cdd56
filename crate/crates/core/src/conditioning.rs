//! Conditioning a Gaussian state on Gaussian measurements of some modes.
//!
//! Measuring modes `M` of a state with covariance blocks
//! `[[A, C], [C^T, B]]` (kept block `A`) and obtaining some outcome leaves
//! the kept modes in a Gaussian state whose covariance matrix
//! `A - C (B + gamma_M)^-1 C^T` does not depend on the outcome; `gamma_M`
//! is the covariance matrix of the projecting pure state. Ideal homodyne is
//! the infinitely squeezed limit, evaluated exactly with a pseudo-inverse
//! restricted to the measured quadrature directions.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
// Supplies `f64` math in no_std builds; idle when std is linked and the
// inherent methods win, hence the allow.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, ModePartition};
use crate::symplectic::rotation_matrix;
use crate::tol;

/// A single-mode Gaussian measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementSpec {
    /// Projection onto the pure squeezed state with covariance matrix
    /// `W(theta) diag(e^2r, e^-2r) W(theta)^T`; `r = 0` is heterodyne
    /// (projection onto coherent states).
    Projector { theta: f64, r: f64 },
    /// Ideal homodyne detection of the rotated quadrature
    /// `x cos theta + p sin theta`.
    Homodyne { theta: f64 },
}

impl MeasurementSpec {
    /// Covariance matrix of the projecting state, `None` for homodyne.
    pub fn projector_cm(&self) -> Option<DMatrix<f64>> {
        match *self {
            MeasurementSpec::Projector { theta, r } => {
                let w = rotation_matrix(theta);
                let mut v = DMatrix::zeros(2, 2);
                v[(0, 0)] = (2.0 * r).exp();
                v[(1, 1)] = (-2.0 * r).exp();
                Some(&w * v * w.transpose())
            }
            MeasurementSpec::Homodyne { .. } => None,
        }
    }

    /// The measured direction `(cos theta, sin theta)` for homodyne.
    pub(crate) fn homodyne_direction(&self) -> Option<(f64, f64)> {
        match *self {
            MeasurementSpec::Homodyne { theta } => Some((theta.cos(), theta.sin())),
            MeasurementSpec::Projector { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (theta, r) = match *self {
            MeasurementSpec::Projector { theta, r } => (theta, r),
            MeasurementSpec::Homodyne { theta } => (theta, 0.0),
        };
        if !theta.is_finite() || !r.is_finite() {
            return Err(Error::Domain(String::from(
                "measurement parameters must be finite",
            )));
        }
        Ok(())
    }
}

/// Conditions `state` on measuring `partition.measured()` (one spec per
/// measured mode, in partition order). Modes in neither list are traced
/// out. Returns the conditional state of `partition.kept()`, in that
/// order.
pub fn condition_gaussian(
    state: &GaussianState,
    partition: &ModePartition,
    specs: &[MeasurementSpec],
) -> Result<GaussianState> {
    let measured = partition.measured();
    if specs.len() != measured.len() {
        return Err(Error::InvalidPartition(format!(
            "{} measurement specs for {} measured modes",
            specs.len(),
            measured.len()
        )));
    }
    for spec in specs {
        spec.validate()?;
    }
    if measured.is_empty() {
        return state.reduce(partition.kept());
    }

    // Reorder to kept ++ measured and split blocks.
    let mut order: Vec<usize> = partition.kept().to_vec();
    order.extend_from_slice(measured);
    let sub = state.reduce(&order)?;
    let dk = 2 * partition.kept().len();
    let dm = 2 * measured.len();
    let a = sub.cm().view((0, 0), (dk, dk)).into_owned();
    let c = sub.cm().view((0, dk), (dk, dm)).into_owned();
    let b = sub.cm().view((dk, dk), (dm, dm)).into_owned();

    // B + gamma_M over the projector modes; homodyne modes contribute
    // through the projection instead.
    let mut b_star = b;
    let mut any_homodyne = false;
    for (k, spec) in specs.iter().enumerate() {
        if let Some(gm) = spec.projector_cm() {
            let mut block = b_star.view_mut((2 * k, 2 * k), (2, 2));
            block += gm;
        } else {
            any_homodyne = true;
        }
    }

    let correction = if any_homodyne {
        // Compress onto the measured subspace: both quadratures of each
        // projector mode, only the measured direction of each homodyne
        // mode. The pseudo-inverse of Pi B* Pi is the inverse of this
        // compression, lifted back; eigenvalues below the rank cutoff
        // count as exact zeros.
        let mut basis: Vec<DVector<f64>> = Vec::new();
        for (k, spec) in specs.iter().enumerate() {
            if let Some((cx, sx)) = spec.homodyne_direction() {
                let mut u = DVector::zeros(dm);
                u[2 * k] = cx;
                u[2 * k + 1] = sx;
                basis.push(u);
            } else {
                for q in 0..2 {
                    let mut e = DVector::zeros(dm);
                    e[2 * k + q] = 1.0;
                    basis.push(e);
                }
            }
        }
        let u = DMatrix::from_columns(&basis);
        let b_uu = u.transpose() * b_star * &u;
        let eig = b_uu.symmetric_eigen();
        let lambda_max = eig
            .eigenvalues
            .iter()
            .fold(0.0_f64, |mx, &l| mx.max(l.abs()));
        let cutoff = tol::PINV_RCOND * lambda_max;
        let mut inv = DMatrix::zeros(u.ncols(), u.ncols());
        for (k, &l) in eig.eigenvalues.iter().enumerate() {
            if l > cutoff {
                inv[(k, k)] = 1.0 / l;
            }
        }
        let pinv_uu = &eig.eigenvectors * inv * eig.eigenvectors.transpose();
        let pinv = &u * pinv_uu * u.transpose();
        &c * pinv * c.transpose()
    } else {
        let chol = b_star
            .clone()
            .cholesky()
            .ok_or(Error::SingularConditioning)?;
        let solved = chol.solve(&c.transpose());
        &c * solved
    };

    let cm = a - correction;
    Ok(GaussianState::from_cm_trusted(
        partition.kept().len(),
        0.5 * (&cm + cm.transpose()),
    ))
}

/// Conditions one measured mode at a time, in partition order. Equivalent
/// to [`condition_gaussian`] for commuting local measurements; useful as a
/// cross-check.
pub fn condition_sequence(
    state: &GaussianState,
    partition: &ModePartition,
    specs: &[MeasurementSpec],
) -> Result<GaussianState> {
    let measured = partition.measured();
    if specs.len() != measured.len() {
        return Err(Error::InvalidPartition(format!(
            "{} measurement specs for {} measured modes",
            specs.len(),
            measured.len()
        )));
    }
    // Current state holds kept ++ not-yet-measured modes, in that order.
    let mut order: Vec<usize> = partition.kept().to_vec();
    order.extend_from_slice(measured);
    let mut current = state.reduce(&order)?;
    let n_kept = partition.kept().len();
    for (step, spec) in specs.iter().enumerate() {
        let remaining = current.n_modes();
        // Kept modes plus the still-unmeasured tail stay; the mode at
        // position n_kept is measured next.
        let keep: Vec<usize> = (0..remaining).filter(|&m| m != n_kept).collect();
        let part = ModePartition::new(&keep, &[n_kept], remaining)?;
        current = condition_gaussian(&current, &part, &[*spec])?;
        let _ = step;
    }
    Ok(current)
}
