//! Entanglement measures for two-mode Gaussian states.

use alloc::format;
use nalgebra::DMatrix;
// Supplies `f64` math in no_std builds; idle when std is linked and the
// inherent methods win, hence the allow.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::symplectic;
use crate::tol;

/// Which measure an [`EntanglementResult`] reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Entropy of entanglement; defined for pure states.
    EntropyOfEntanglement,
    /// Logarithmic negativity; defined for arbitrary states.
    LogNegativity,
}

/// An entanglement value together with the intermediates that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementResult {
    pub measure: Measure,
    /// The value in bits (base-2 logarithms), `>= 0`.
    pub value: f64,
    /// Smallest symplectic eigenvalue of the partial transpose, when the
    /// measure computes one.
    pub mu: Option<f64>,
    /// Mean thermal photon number of one reduced mode, when the measure
    /// computes one.
    pub n_a: Option<f64>,
}

/// Entropy of a thermal state with mean photon number `n`, in bits:
/// `(n+1) log2(n+1) - n log2 n`, continuously extended by 0 at `n = 0`.
pub fn thermal_entropy(n: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    (n + 1.0) * (n + 1.0).log2() - n * n.log2()
}

/// Entropy of entanglement of a pure two-mode state: the thermal entropy
/// of either reduced mode, with `n = (sqrt(det gamma_A) - 1)/2`.
pub fn entropy_of_entanglement(state: &GaussianState) -> Result<EntanglementResult> {
    if state.n_modes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: state.n_modes(),
        });
    }
    let impurity = state.impurity()?;
    if impurity > tol::PURITY_ATOL {
        return Err(Error::NotPure { impurity });
    }
    let det_a = state.mode_block(0)?.determinant();
    let n_a = ((det_a.max(1.0)).sqrt() - 1.0) / 2.0;
    Ok(EntanglementResult {
        measure: Measure::EntropyOfEntanglement,
        value: thermal_entropy(n_a),
        mu: None,
        n_a: Some(n_a),
    })
}

/// Logarithmic negativity of a two-mode state:
/// `max(0, -log2 mu)` where `mu` is the smallest symplectic eigenvalue of
/// the partial transpose (`p_2 -> -p_2`).
pub fn log_negativity(state: &GaussianState) -> Result<EntanglementResult> {
    if state.n_modes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: state.n_modes(),
        });
    }
    let mut pt = state.cm().clone();
    // Conjugating by diag(1, 1, 1, -1) flips the sign of row/column 3.
    for k in 0..4 {
        if k != 3 {
            pt[(3, k)] = -pt[(3, k)];
            pt[(k, 3)] = -pt[(k, 3)];
        }
    }
    let nus = symplectic::symplectic_eigenvalues(&pt)?;
    let mu = nus[nus.len() - 1];
    Ok(EntanglementResult {
        measure: Measure::LogNegativity,
        value: (-mu.log2()).max(0.0),
        mu: Some(mu),
        n_a: None,
    })
}

/// `mu^2` for a pair of single-mode blocks assembled on a balanced beam
/// splitter: the smallest eigenvalue of
/// `gamma_A R gamma_B R^T` with `R = [[0, 1], [-1, 0]]`.
///
/// When a two-mode state is built by mixing uncorrelated modes `A`, `B`
/// on a balanced beam splitter, the partial transpose's smallest
/// symplectic eigenvalue obeys `mu^2 = min eig(gamma_A R gamma_B R^T)`.
pub fn pt_min_eig_product(gamma_a: &DMatrix<f64>, gamma_b: &DMatrix<f64>) -> Result<f64> {
    for g in [gamma_a, gamma_b] {
        if g.nrows() != 2 || g.ncols() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: g.nrows().max(g.ncols()),
            });
        }
        if (g[(0, 1)] - g[(1, 0)]).abs() > tol::SYMMETRY_RTOL * 10.0 * scale_of(g) {
            return Err(Error::NotSymmetric {
                residual: (g[(0, 1)] - g[(1, 0)]).abs(),
            });
        }
    }
    // Symmetrized as gamma_A^1/2 (R gamma_B R^T) gamma_A^1/2, which shares
    // the spectrum of the product.
    let r = symplectic::symplectic_form(1);
    let rb = &r * gamma_b * r.transpose();
    let root_a = symplectic::sqrt_spd(gamma_a)?;
    let sym = &root_a * rb * &root_a;
    let eigs = sym.symmetric_eigen().eigenvalues;
    let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
    if min <= 0.0 || min.is_nan() {
        return Err(Error::Domain(format!(
            "eigenvalue product is not positive: {min}"
        )));
    }
    Ok(min)
}

fn scale_of(g: &DMatrix<f64>) -> f64 {
    g.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
}
