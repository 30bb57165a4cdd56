//! Physical Gaussian states as covariance matrices, plus mode bookkeeping.

use alloc::format;
use alloc::string::String;
use alloc::{vec, vec::Vec};
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::symplectic::{self, SymplecticTransform};
use crate::tol;

/// A zero-mean Gaussian state, stored as its covariance matrix in the
/// ordering `(x1, p1, ..., xN, pN)` with vacuum normalized to the identity.
///
/// Construction through [`GaussianState::new`] enforces symmetry and the
/// uncertainty relation (all symplectic eigenvalues `>= 1` within
/// [`tol::PHYSICALITY_ATOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    n_modes: usize,
    cm: DMatrix<f64>,
}

impl GaussianState {
    /// Validates and wraps a covariance matrix.
    pub fn new(n_modes: usize, cm: DMatrix<f64>) -> Result<Self> {
        if cm.nrows() != 2 * n_modes || cm.ncols() != 2 * n_modes {
            return Err(Error::DimensionMismatch {
                expected: 2 * n_modes,
                got: cm.nrows().max(cm.ncols()),
            });
        }
        if cm.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(String::from(
                "covariance matrix has non-finite entries",
            )));
        }
        let scale = cm.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let residual = (&cm - cm.transpose())
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        if residual > tol::SYMMETRY_RTOL * scale {
            return Err(Error::NotSymmetric { residual });
        }
        // Symmetrize exactly so downstream eigensolvers see a clean input.
        let cm = 0.5 * (&cm + cm.transpose());
        let nus = symplectic::symplectic_eigenvalues(&cm)?;
        let min_nu = nus.iter().copied().fold(f64::INFINITY, f64::min);
        if min_nu < 1.0 - tol::PHYSICALITY_ATOL {
            return Err(Error::Unphysical { min_nu });
        }
        Ok(Self { n_modes, cm })
    }

    /// Wraps a matrix that is physical by construction (conditioning
    /// output, symplectic image of a physical state, ...).
    pub(crate) fn from_cm_trusted(n_modes: usize, cm: DMatrix<f64>) -> Self {
        debug_assert_eq!(cm.nrows(), 2 * n_modes);
        debug_assert_eq!(cm.ncols(), 2 * n_modes);
        Self { n_modes, cm }
    }

    /// Vacuum of `n_modes` modes: the identity matrix.
    pub fn vacuum(n_modes: usize) -> Self {
        Self::from_cm_trusted(n_modes, DMatrix::identity(2 * n_modes, 2 * n_modes))
    }

    /// Two-mode squeezed vacuum parameterized by `lambda = tanh r` in
    /// `[0, 1)`.
    ///
    /// The covariance matrix is `[[ch I, sh F], [sh F, ch I]]` with
    /// `ch = (1 + lambda^2)/(1 - lambda^2)`, `sh = 2 lambda/(1 - lambda^2)`,
    /// and `F = diag(1, -1)`; the rational forms keep `ch^2 - sh^2 = 1` to
    /// machine precision.
    pub fn two_mode_squeezed(lambda: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::Domain(format!(
                "two-mode squeezing parameter must lie in [0, 1), got {lambda}"
            )));
        }
        let denom = 1.0 - lambda * lambda;
        let ch = (1.0 + lambda * lambda) / denom;
        let sh = 2.0 * lambda / denom;
        let mut cm = DMatrix::identity(4, 4);
        for q in 0..2 {
            cm[(q, q)] = ch;
            cm[(2 + q, 2 + q)] = ch;
        }
        cm[(0, 2)] = sh;
        cm[(2, 0)] = sh;
        cm[(1, 3)] = -sh;
        cm[(3, 1)] = -sh;
        Ok(Self::from_cm_trusted(2, cm))
    }

    /// Three-mode pure state built by keeping one arm of a two-mode
    /// squeezed vacuum (modes 1, 2) and mixing the other arm with vacuum
    /// (mode 0) on a balanced beam splitter acting on modes (0, 1).
    ///
    /// This is the canonical example family behind the `curve-fig3`
    /// command: localizing onto modes (0, 1) by measuring mode 2.
    pub fn beamsplit_tmsv(lambda: f64) -> Result<Self> {
        let tmsv = Self::two_mode_squeezed(lambda)?;
        let state = Self::vacuum(1).tensor(&tmsv);
        let bs = SymplecticTransform::beamsplitter(3, 0, 1, 0.5)?;
        state.apply(&bs)
    }

    /// Direct sum with `other` appended after `self`'s modes.
    pub fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (2 * self.n_modes, 2 * other.n_modes);
        let mut cm = DMatrix::zeros(da + db, da + db);
        cm.view_mut((0, 0), (da, da)).copy_from(&self.cm);
        cm.view_mut((da, da), (db, db)).copy_from(&other.cm);
        Self::from_cm_trusted(self.n_modes + other.n_modes, cm)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// The covariance matrix.
    pub fn cm(&self) -> &DMatrix<f64> {
        &self.cm
    }

    /// Applies a symplectic transform: `gamma -> S gamma S^T`.
    pub fn apply(&self, t: &SymplecticTransform) -> Result<Self> {
        if t.n_modes() != self.n_modes {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes,
                got: t.n_modes(),
            });
        }
        let cm = t.matrix() * &self.cm * t.matrix().transpose();
        Ok(Self::from_cm_trusted(
            self.n_modes,
            0.5 * (&cm + cm.transpose()),
        ))
    }

    /// Reduced state of `modes`, in the order listed (partial trace over
    /// the rest).
    pub fn reduce(&self, modes: &[usize]) -> Result<Self> {
        check_distinct(modes, self.n_modes)?;
        if modes.is_empty() {
            return Err(Error::InvalidPartition(String::from(
                "cannot reduce to zero modes",
            )));
        }
        let d = 2 * modes.len();
        let mut cm = DMatrix::zeros(d, d);
        for (bi, &mi) in modes.iter().enumerate() {
            for (bj, &mj) in modes.iter().enumerate() {
                for qi in 0..2 {
                    for qj in 0..2 {
                        cm[(2 * bi + qi, 2 * bj + qj)] = self.cm[(2 * mi + qi, 2 * mj + qj)];
                    }
                }
            }
        }
        Ok(Self::from_cm_trusted(modes.len(), cm))
    }

    /// The 2x2 covariance block of a single mode.
    pub fn mode_block(&self, mode: usize) -> Result<DMatrix<f64>> {
        if mode >= self.n_modes {
            return Err(Error::ModeOutOfRange {
                index: mode,
                n_modes: self.n_modes,
            });
        }
        Ok(self.cm.view((2 * mode, 2 * mode), (2, 2)).into_owned())
    }

    /// Symplectic eigenvalues, descending.
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic::symplectic_eigenvalues(&self.cm)
    }

    /// `max_k |nu_k - 1|`: zero exactly for pure states.
    pub fn impurity(&self) -> Result<f64> {
        let nus = self.symplectic_eigenvalues()?;
        Ok(nus.iter().fold(0.0_f64, |m, &nu| m.max((nu - 1.0).abs())))
    }

    /// Whether all symplectic eigenvalues equal 1 within `atol`.
    pub fn is_pure_within(&self, atol: f64) -> Result<bool> {
        Ok(self.impurity()? <= atol)
    }
}

fn check_distinct(modes: &[usize], n_modes: usize) -> Result<()> {
    let mut seen = vec![false; n_modes];
    for &m in modes {
        if m >= n_modes {
            return Err(Error::ModeOutOfRange { index: m, n_modes });
        }
        if seen[m] {
            return Err(Error::InvalidPartition(format!("mode {m} listed twice")));
        }
        seen[m] = true;
    }
    Ok(())
}

/// Split of a state's modes into a kept pair and measured modes.
///
/// The two lists must be disjoint; modes in neither list are traced out
/// by conditioning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModePartition {
    kept: Vec<usize>,
    measured: Vec<usize>,
}

impl ModePartition {
    pub fn new(kept: &[usize], measured: &[usize], n_modes: usize) -> Result<Self> {
        let mut all: Vec<usize> = kept.to_vec();
        all.extend_from_slice(measured);
        check_distinct(&all, n_modes).map_err(|e| match e {
            Error::InvalidPartition(_) => {
                Error::InvalidPartition(String::from("kept and measured modes must be disjoint"))
            }
            other => other,
        })?;
        if kept.is_empty() {
            return Err(Error::InvalidPartition(String::from("kept set is empty")));
        }
        Ok(Self {
            kept: kept.to_vec(),
            measured: measured.to_vec(),
        })
    }

    /// Convenience for the common case: keep `(a, b)`, measure every other
    /// mode in ascending order.
    pub fn keep_pair(a: usize, b: usize, n_modes: usize) -> Result<Self> {
        let measured: Vec<usize> = (0..n_modes).filter(|&m| m != a && m != b).collect();
        Self::new(&[a, b], &measured, n_modes)
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_is_pure_and_physical() {
        let v = GaussianState::vacuum(3);
        GaussianState::new(3, v.cm().clone()).unwrap();
        assert!(v.is_pure_within(1e-12).unwrap());
    }

    #[test]
    fn rejects_unphysical_matrix() {
        let cm = DMatrix::identity(2, 2) * 0.5;
        let err = GaussianState::new(1, cm).unwrap_err();
        assert!(matches!(err, Error::Unphysical { .. }));
    }

    #[test]
    fn rejects_asymmetric_matrix() {
        let mut cm = DMatrix::identity(2, 2) * 2.0;
        cm[(0, 1)] = 1e-6;
        let err = GaussianState::new(1, cm).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { .. }));
    }

    #[test]
    fn tmsv_is_pure_with_thermal_margins() {
        let lambda = 0.6_f64;
        let s = GaussianState::two_mode_squeezed(lambda).unwrap();
        assert!(s.impurity().unwrap() < 1e-12);

        // Each arm alone is thermal with nu = cosh 2r.
        let ch = (1.0 + lambda * lambda) / (1.0 - lambda * lambda);
        let arm = s.reduce(&[1]).unwrap();
        assert_relative_eq!(arm.cm()[(0, 0)], ch, epsilon = 1e-12);
        assert_relative_eq!(arm.cm()[(1, 1)], ch, epsilon = 1e-12);
        assert_relative_eq!(
            arm.symplectic_eigenvalues().unwrap()[0],
            ch,
            epsilon = 1e-12
        );
    }

    #[test]
    fn tmsv_lambda_recovery_is_exact() {
        // lambda^2 = (nu_C - 1)/(nu_C + 1) with nu_C = sqrt(det gamma_C).
        for &lambda in &[0.0, 0.1, 0.5, 0.9, 0.99] {
            let s = GaussianState::two_mode_squeezed(lambda).unwrap();
            let gc = s.mode_block(0).unwrap();
            let nu = gc.determinant().sqrt();
            assert_relative_eq!((nu - 1.0) / (nu + 1.0), lambda * lambda, epsilon = 1e-12);
        }
    }

    #[test]
    fn beamsplit_tmsv_matches_direct_assembly() {
        let lambda = 0.45_f64;
        let state = GaussianState::beamsplit_tmsv(lambda).unwrap();

        let tmsv = GaussianState::two_mode_squeezed(lambda).unwrap();
        let direct = GaussianState::vacuum(1).tensor(&tmsv);
        let bs = SymplecticTransform::beamsplitter(3, 0, 1, 0.5).unwrap();
        let expect = bs.matrix() * direct.cm() * bs.matrix().transpose();
        let diff = (state.cm() - expect)
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(diff < 1e-14);

        // Mode 2 keeps the untouched squeezed-arm covariance.
        let ch = (1.0 + lambda * lambda) / (1.0 - lambda * lambda);
        let c_block = state.mode_block(2).unwrap();
        assert_relative_eq!(c_block[(0, 0)], ch, epsilon = 1e-12);
        assert_relative_eq!(c_block[(0, 1)], 0.0, epsilon = 1e-12);
        assert!(state.impurity().unwrap() < 1e-10);
    }

    #[test]
    fn reduce_reorders_modes() {
        let s = GaussianState::beamsplit_tmsv(0.5).unwrap();
        let swapped = s.reduce(&[2, 0]).unwrap();
        assert_relative_eq!(swapped.cm()[(0, 0)], s.cm()[(4, 4)], epsilon = 1e-15);
        assert_relative_eq!(swapped.cm()[(0, 2)], s.cm()[(4, 0)], epsilon = 1e-15);
    }

    #[test]
    fn partition_rejects_overlap_and_range() {
        assert!(ModePartition::new(&[0, 1], &[1], 3).is_err());
        assert!(ModePartition::new(&[0, 1], &[3], 3).is_err());
        let p = ModePartition::keep_pair(0, 2, 4).unwrap();
        assert_eq!(p.measured(), &[1, 3]);
    }
}
