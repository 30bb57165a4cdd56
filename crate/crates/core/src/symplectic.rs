//! Symplectic transforms, symplectic spectra, and the Williamson normal form.
//!
//! All matrices act on quadratures ordered `(x1, p1, ..., xN, pN)`.

use alloc::string::String;
use alloc::{vec, vec::Vec};
use nalgebra::DMatrix;
// Supplies `f64` math in no_std builds; idle when std is linked and the
// inherent methods win, hence the allow.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::tol;

/// Symplectic form for `n_modes` modes: block-diagonal copies of
/// `[[0, 1], [-1, 0]]`.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

/// 2x2 matrix from row-major entries.
pub(crate) fn mat2(a: f64, b: f64, c: f64, d: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[a, b, c, d])
}

/// Phase-space rotation `W(theta) = [[cos t, sin t], [-sin t, cos t]]`.
pub fn rotation_matrix(theta: f64) -> DMatrix<f64> {
    let (s, c) = (theta.sin(), theta.cos());
    mat2(c, s, -s, c)
}

/// Single-mode squeezing matrix `diag(e^r, e^-r)`; maps vacuum to the
/// covariance matrix `diag(e^2r, e^-2r)`.
pub fn squeezing_matrix(r: f64) -> DMatrix<f64> {
    mat2(r.exp(), 0.0, 0.0, (-r).exp())
}

fn symplectic_residual(s: &DMatrix<f64>) -> f64 {
    let n = s.nrows() / 2;
    let omega = symplectic_form(n);
    let res = s * &omega * s.transpose() - &omega;
    res.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// A linear symplectic transform `S` acting on covariance matrices as
/// `S gamma S^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    n_modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticTransform {
    /// Wraps a matrix after checking shape and `S Omega S^T = Omega`.
    pub fn new(n_modes: usize, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != 2 * n_modes || matrix.ncols() != 2 * n_modes {
            return Err(Error::DimensionMismatch {
                expected: 2 * n_modes,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        let residual = symplectic_residual(&matrix);
        if residual > tol::SYMPLECTIC_ATOL || residual.is_nan() {
            return Err(Error::NotSymplectic { residual });
        }
        Ok(Self { n_modes, matrix })
    }

    /// Trusted constructor for matrices symplectic by construction.
    pub(crate) fn from_matrix_trusted(n_modes: usize, matrix: DMatrix<f64>) -> Self {
        debug_assert!(symplectic_residual(&matrix) <= 1e-8);
        Self { n_modes, matrix }
    }

    pub fn identity(n_modes: usize) -> Self {
        Self::from_matrix_trusted(n_modes, DMatrix::identity(2 * n_modes, 2 * n_modes))
    }

    /// Single-mode rotation by `theta`.
    pub fn rotation(theta: f64) -> Self {
        Self::from_matrix_trusted(1, rotation_matrix(theta))
    }

    /// Single-mode squeezer `diag(e^r, e^-r)`.
    pub fn squeezer(r: f64) -> Self {
        Self::from_matrix_trusted(1, squeezing_matrix(r))
    }

    /// Beam splitter of transmittance `t` on modes `(a, b)` of an `n_modes`
    /// state. The balanced case `t = 1/2` maps `x_a -> (x_a + x_b)/sqrt 2`
    /// and `x_b -> (x_a - x_b)/sqrt 2` (same for `p`), and is its own
    /// inverse.
    pub fn beamsplitter(n_modes: usize, a: usize, b: usize, transmittance: f64) -> Result<Self> {
        for &m in &[a, b] {
            if m >= n_modes {
                return Err(Error::ModeOutOfRange { index: m, n_modes });
            }
        }
        if a == b {
            return Err(Error::InvalidPartition(alloc::format!(
                "beam splitter needs two distinct modes, got ({a}, {b})"
            )));
        }
        if !(0.0..=1.0).contains(&transmittance) {
            return Err(Error::Domain(alloc::format!(
                "transmittance must lie in [0, 1], got {transmittance}"
            )));
        }
        let (ct, st) = (transmittance.sqrt(), (1.0 - transmittance).sqrt());
        let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
        for q in 0..2 {
            let (ia, ib) = (2 * a + q, 2 * b + q);
            s[(ia, ia)] = ct;
            s[(ia, ib)] = st;
            s[(ib, ia)] = st;
            s[(ib, ib)] = -ct;
        }
        Ok(Self::from_matrix_trusted(n_modes, s))
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Inverse through the symplectic identity `S^-1 = -Omega S^T Omega`.
    pub fn inverse(&self) -> Self {
        let omega = symplectic_form(self.n_modes);
        let inv = -(&omega * self.matrix.transpose() * &omega);
        Self::from_matrix_trusted(self.n_modes, inv)
    }

    /// Composition: `self.compose(&t)` acts as `self` after `t`.
    pub fn compose(&self, t: &Self) -> Result<Self> {
        if self.n_modes != t.n_modes {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes,
                got: t.n_modes,
            });
        }
        Ok(Self::from_matrix_trusted(
            self.n_modes,
            &self.matrix * &t.matrix,
        ))
    }

    /// Block-diagonal direct sum, `self` on the first modes.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (da, db) = (2 * self.n_modes, 2 * other.n_modes);
        let mut s = DMatrix::zeros(da + db, da + db);
        s.view_mut((0, 0), (da, da)).copy_from(&self.matrix);
        s.view_mut((da, da), (db, db)).copy_from(&other.matrix);
        Self::from_matrix_trusted(self.n_modes + other.n_modes, s)
    }

    /// Embeds `self` into an `n_modes` identity, its k-th mode acting on
    /// `modes[k]`.
    pub fn embed(&self, n_modes: usize, modes: &[usize]) -> Result<Self> {
        if modes.len() != self.n_modes {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes,
                got: modes.len(),
            });
        }
        let mut seen = vec![false; n_modes];
        for &m in modes {
            if m >= n_modes {
                return Err(Error::ModeOutOfRange { index: m, n_modes });
            }
            if seen[m] {
                return Err(Error::InvalidPartition(alloc::format!(
                    "mode {m} listed twice"
                )));
            }
            seen[m] = true;
        }
        let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
        for (bi, &mi) in modes.iter().enumerate() {
            for (bj, &mj) in modes.iter().enumerate() {
                for qi in 0..2 {
                    for qj in 0..2 {
                        s[(2 * mi + qi, 2 * mj + qj)] = self.matrix[(2 * bi + qi, 2 * bj + qj)];
                    }
                }
            }
        }
        Ok(Self::from_matrix_trusted(n_modes, s))
    }
}

/// Symmetric square root of a symmetric positive-definite matrix.
pub fn sqrt_spd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = m.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    let mut d = DMatrix::zeros(m.nrows(), m.ncols());
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        d[(k, k)] = l.sqrt();
    }
    Ok(&eig.eigenvectors * d * eig.eigenvectors.transpose())
}

/// Symplectic eigenvalues of a positive-definite covariance matrix, sorted
/// in descending order, one value per mode.
///
/// Computed from the antisymmetric matrix `K = gamma^1/2 Omega gamma^1/2`:
/// the eigenvalues of `K^T K` are the squared symplectic eigenvalues, each
/// twice.
pub fn symplectic_eigenvalues(cm: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = cm.nrows() / 2;
    if cm.nrows() != 2 * n || cm.ncols() != cm.nrows() {
        return Err(Error::DimensionMismatch {
            expected: cm.nrows(),
            got: cm.ncols(),
        });
    }
    let root = sqrt_spd(cm)?;
    let k = &root * symplectic_form(n) * &root;
    let mut sq: Vec<f64> = (k.transpose() * &k)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect();
    sq.sort_unstable_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    // Eigenvalues come in identical pairs; keep one of each.
    Ok(sq.into_iter().step_by(2).collect())
}

/// Williamson normal form `gamma = S D S^T` with `S` symplectic and
/// `D = diag(nu_1, nu_1, ..., nu_N, nu_N)`.
#[derive(Debug, Clone)]
pub struct Williamson {
    /// The symplectic congruence `S`.
    pub transform: SymplecticTransform,
    /// Symplectic eigenvalues in descending order, one per mode.
    pub spectrum: Vec<f64>,
}

impl Williamson {
    /// The diagonal factor `D` with each eigenvalue repeated per quadrature.
    pub fn diagonal(&self) -> DMatrix<f64> {
        let n = self.spectrum.len();
        let mut d = DMatrix::zeros(2 * n, 2 * n);
        for (k, &nu) in self.spectrum.iter().enumerate() {
            d[(2 * k, 2 * k)] = nu;
            d[(2 * k + 1, 2 * k + 1)] = nu;
        }
        d
    }
}

/// Williamson decomposition of a positive-definite covariance matrix.
///
/// Uses `S = gamma^1/2 Q D^-1/2` where the orthogonal `Q` brings the
/// antisymmetric `K = gamma^1/2 Omega gamma^1/2` to its canonical form of
/// 2x2 blocks `[[0, nu], [-nu, 0]]`. `Q` comes from the real Schur form of
/// `K`, which handles degenerate spectra without any eigenspace pairing
/// heuristics.
pub fn williamson(cm: &DMatrix<f64>) -> Result<Williamson> {
    let n = cm.nrows() / 2;
    if cm.nrows() != 2 * n || cm.ncols() != cm.nrows() {
        return Err(Error::DimensionMismatch {
            expected: cm.nrows(),
            got: cm.ncols(),
        });
    }
    let root = sqrt_spd(cm)?;
    let k = &root * symplectic_form(n) * &root;
    let scale = k.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

    let schur = k
        .clone()
        .try_schur(f64::EPSILON, 100_000)
        .ok_or_else(|| Error::Numerical(String::from("Schur iteration did not converge")))?;
    let (mut q, _) = schur.unpack();

    // Read the canonical blocks from Q^T K Q rather than trusting the
    // returned quasi-triangular factor; for antisymmetric K it must be
    // block diagonal up to roundoff.
    let canon = q.transpose() * &k * &q;
    let mut pairs: Vec<(f64, usize)> = Vec::with_capacity(n);
    for b in 0..n {
        let (i, j) = (2 * b, 2 * b + 1);
        let nu = canon[(i, j)];
        let residual = canon[(i, i)]
            .abs()
            .max(canon[(j, j)].abs())
            .max((canon[(j, i)] + nu).abs());
        if residual > 1e-10 * scale.max(1.0) || nu.abs() <= f64::EPSILON * scale {
            return Err(Error::Numerical(String::from(
                "could not bring the symplectic spectrum to canonical form",
            )));
        }
        if nu < 0.0 {
            // Swapping the pair's columns flips the block's sign.
            q.swap_columns(i, j);
        }
        pairs.push((nu.abs(), b));
    }
    pairs.sort_unstable_by(|a, b| b.0.partial_cmp(&a.0).expect("finite eigenvalues"));

    let dim = 2 * n;
    let mut q_sorted = DMatrix::zeros(dim, dim);
    let mut spectrum = Vec::with_capacity(n);
    for (slot, &(nu, b)) in pairs.iter().enumerate() {
        q_sorted.set_column(2 * slot, &q.column(2 * b));
        q_sorted.set_column(2 * slot + 1, &q.column(2 * b + 1));
        spectrum.push(nu);
    }

    let mut d_inv_sqrt = DMatrix::zeros(dim, dim);
    for (b, &nu) in spectrum.iter().enumerate() {
        let r = 1.0 / nu.sqrt();
        d_inv_sqrt[(2 * b, 2 * b)] = r;
        d_inv_sqrt[(2 * b + 1, 2 * b + 1)] = r;
    }
    let s = root * q_sorted * d_inv_sqrt;
    let transform = SymplecticTransform::new(n, s)?;
    Ok(Williamson {
        transform,
        spectrum,
    })
}
