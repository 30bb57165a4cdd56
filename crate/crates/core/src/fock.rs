//! Fock-space series for photon counting on one arm of two-mode squeezed
//! vacuum.
//!
//! For the three-mode family built by [`crate::gaussian::GaussianState::
//! beamsplit_tmsv`], counting `n` photons on the untouched squeezed arm
//! projects the kept pair onto a pure state whose Schmidt coefficients are
//! binomial: the localized entanglement of the counting strategy is
//! `sum_n p_n S_n` with `p_n = (1 - lambda^2) lambda^2n` and `S_n` the
//! entropy of the binomial amplitude distribution. The best Gaussian
//! strategy on the same family has the closed form
//! [`localizable_gaussian_closed_form`], which the series beats for every
//! `lambda > 0`.

use alloc::format;
use alloc::vec::Vec;
// Supplies `f64` math in no_std builds; idle when std is linked and the
// inherent methods win, hence the allow.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const LOG2_E: f64 = core::f64::consts::LOG2_E;

/// Truncation of a photon-number series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockCutoff {
    /// Largest photon number kept.
    pub n_max: usize,
    /// Probability mass above `n_max`: `lambda^(2(n_max + 1))`.
    pub tail_mass: f64,
}

impl FockCutoff {
    /// Fixed cutoff at `n_max` for squeezing parameter `lambda`.
    pub fn fixed(lambda: f64, n_max: usize) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(Self {
            n_max,
            tail_mass: (lambda * lambda).powi(n_max as i32 + 1),
        })
    }

    /// Smallest cutoff whose entropy-weighted tail estimate
    /// `tail_mass * (log2(pi e (n_max + 2) / 2)/2 + 1)` drops below
    /// `budget`. The estimate majorizes the true truncated contribution
    /// because `S_n` grows only logarithmically.
    pub fn auto(lambda: f64, budget: f64) -> Result<Self> {
        check_lambda(lambda)?;
        if budget <= 0.0 || budget.is_nan() {
            return Err(Error::Domain(format!(
                "cutoff budget must be positive, got {budget}"
            )));
        }
        let q = lambda * lambda;
        let mut n_max = 0usize;
        let mut tail = q;
        loop {
            let next = (n_max + 2) as f64;
            let estimate = tail
                * (0.5 * (core::f64::consts::PI * core::f64::consts::E * next / 2.0).log2() + 1.0);
            if estimate < budget {
                return Ok(Self {
                    n_max,
                    tail_mass: tail,
                });
            }
            n_max += 1;
            tail *= q;
            if n_max > 1_000_000 {
                return Err(Error::Domain(format!(
                    "cutoff for lambda = {lambda} exceeds 1e6 terms"
                )));
            }
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::Domain(format!(
            "squeezing parameter must lie in [0, 1), got {lambda}"
        )));
    }
    Ok(())
}

/// Photon-number distribution of one arm of two-mode squeezed vacuum:
/// `p_n = (1 - lambda^2) lambda^2n` for `n <= cutoff.n_max`.
pub fn photon_number_probabilities(lambda: f64, cutoff: &FockCutoff) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    let q = lambda * lambda;
    let mut probs = Vec::with_capacity(cutoff.n_max + 1);
    let mut p = 1.0 - q;
    for _ in 0..=cutoff.n_max {
        probs.push(p);
        p *= q;
    }
    Ok(probs)
}

/// Cumulative `ln n!` table: entry `k` is `ln k!`.
fn ln_factorials(up_to: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(up_to + 1);
    t.push(0.0);
    let mut acc = 0.0;
    for k in 1..=up_to {
        acc += (k as f64).ln();
        t.push(acc);
    }
    t
}

fn binomial_entropy_with_table(n: usize, lnf: &[f64]) -> f64 {
    // Weights w_k = C(n, k) / 2^n; entropy in bits. Everything stays in
    // the log domain so large n cannot overflow.
    let ln2 = core::f64::consts::LN_2;
    let mut s = 0.0;
    for k in 0..=n {
        let ln_w = lnf[n] - lnf[k] - lnf[n - k] - (n as f64) * ln2;
        s -= ln_w.exp() * ln_w * LOG2_E;
    }
    s
}

/// Entropy (bits) of the binomial amplitude distribution
/// `w_k = C(n, k)/2^n`, `k = 0..=n`.
///
/// This is the entanglement of the pure two-mode state obtained when a
/// balanced beam splitter distributes exactly `n` photons over the kept
/// pair.
pub fn binomial_state_entropy(n: usize) -> f64 {
    binomial_entropy_with_table(n, &ln_factorials(n))
}

/// Localized entanglement of the photon-counting strategy on the
/// `beamsplit_tmsv` family: `sum_n p_n S_n` truncated at the cutoff
/// (automatic with budget `1e-8` when `None`).
pub fn localizable_non_gaussian(lambda: f64, cutoff: Option<FockCutoff>) -> Result<f64> {
    let cutoff = match cutoff {
        Some(c) => c,
        None => FockCutoff::auto(lambda, 1e-8)?,
    };
    let probs = photon_number_probabilities(lambda, &cutoff)?;
    let lnf = ln_factorials(cutoff.n_max);
    let mut total = 0.0;
    for (n, &p) in probs.iter().enumerate() {
        if n >= 1 {
            total += p * binomial_entropy_with_table(n, &lnf);
        }
    }
    Ok(total)
}

/// Closed form for the best Gaussian strategy on the `beamsplit_tmsv`
/// family: the thermal entropy at
/// `n_A = (1 - lambda^4)^(-1/2) / 2 - 1/2`.
pub fn localizable_gaussian_closed_form(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let n_a = 0.5 / (1.0 - lambda.powi(4)).sqrt() - 0.5;
    Ok(crate::entanglement::thermal_entropy(n_a))
}

/// Entropy (bits) of the full photon-number distribution of one TMSV arm,
/// `-sum p_n log2 p_n`, truncated once the probability tail drops below
/// `1e-10` (or at the given cutoff).
///
/// Equals the entropy of entanglement of the two-mode squeezed vacuum, so
/// it cross-checks the covariance-matrix route through an independent
/// series.
pub fn tmsv_entropy_series(lambda: f64, cutoff: Option<FockCutoff>) -> Result<f64> {
    check_lambda(lambda)?;
    let cutoff = match cutoff {
        Some(c) => c,
        None => {
            let q = lambda * lambda;
            let mut n_max = 0usize;
            let mut tail = q;
            while tail >= 1e-10 {
                n_max += 1;
                tail *= q;
                if n_max > 10_000_000 {
                    return Err(Error::Domain(format!(
                        "series for lambda = {lambda} exceeds 1e7 terms"
                    )));
                }
            }
            FockCutoff {
                n_max,
                tail_mass: tail,
            }
        }
    };
    let probs = photon_number_probabilities(lambda, &cutoff)?;
    let mut s = 0.0;
    for &p in &probs {
        if p > 0.0 {
            s -= p * p.log2();
        }
    }
    Ok(s)
}
