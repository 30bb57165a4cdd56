//! File formats: the JSON state file, measurement lists, reports, and the
//! numeric formatting rules that keep outputs byte-deterministic.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use gle_core::conditioning::MeasurementSpec;
use gle_core::entanglement::{EntanglementResult, Measure};
use gle_core::GaussianState;

use crate::error::{CliError, Result};

/// The only quadrature ordering the state file accepts.
pub const ORDERING: &str = "xp-interleaved";
/// The only vacuum normalization the state file accepts.
pub const CONVENTION: &str = "vacuum-identity";

/// On-disk representation of a Gaussian state: a covariance matrix plus the
/// conventions it is written in.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub modes: usize,
    pub ordering: String,
    pub convention: String,
    pub cm: Vec<Vec<f64>>,
}

impl StateFile {
    /// Snapshot a state into its file form.
    pub fn from_state(state: &GaussianState) -> Self {
        let cm = state.cm();
        let dim = cm.nrows();
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| cm[(i, j)]).collect())
            .collect();
        StateFile {
            modes: state.n_modes(),
            ordering: ORDERING.into(),
            convention: CONVENTION.into(),
            cm: rows,
        }
    }

    /// Parse a state file, reporting the line and column of JSON errors.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Validation(format!(
                "state file parse error at line {}, column {}: {}",
                e.line(),
                e.column(),
                e
            ))
        })
    }

    /// Extract the covariance matrix after convention and shape checks,
    /// without judging physicality; `validate` reports on sick matrices too.
    pub fn raw_matrix(&self) -> Result<DMatrix<f64>> {
        if self.ordering != ORDERING {
            return Err(CliError::Validation(format!(
                "unsupported ordering {:?}; this tool reads {:?}",
                self.ordering, ORDERING
            )));
        }
        if self.convention != CONVENTION {
            return Err(CliError::Validation(format!(
                "unsupported convention {:?}; this tool reads {:?}",
                self.convention, CONVENTION
            )));
        }
        let dim = 2 * self.modes;
        if self.cm.len() != dim || self.cm.iter().any(|row| row.len() != dim) {
            return Err(CliError::Validation(format!(
                "covariance matrix must be {dim}x{dim} for {} modes",
                self.modes
            )));
        }
        Ok(DMatrix::from_fn(dim, dim, |i, j| self.cm[i][j]))
    }

    /// Rebuild the state, rejecting wrong conventions, shapes, and
    /// unphysical matrices.
    pub fn into_state(&self) -> Result<GaussianState> {
        let cm = self.raw_matrix()?;
        GaussianState::new(self.modes, cm).map_err(CliError::from)
    }

    /// Hand-formatted JSON with 17 significant digits per entry, enough to
    /// round-trip every f64 exactly. Layout is fixed so identical states
    /// produce identical bytes.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"modes\": {},\n", self.modes));
        out.push_str(&format!("  \"ordering\": \"{}\",\n", self.ordering));
        out.push_str(&format!("  \"convention\": \"{}\",\n", self.convention));
        out.push_str("  \"cm\": [\n");
        for (i, row) in self.cm.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            let comma = if i + 1 < self.cm.len() { "," } else { "" };
            out.push_str(&format!("    [{}]{}\n", cells.join(", "), comma));
        }
        out.push_str("  ]\n}\n");
        out
    }
}

/// One measurement in a localization report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementSpecJson {
    /// Index of the measured mode in the input state.
    pub mode: usize,
    /// Either `"projector"` or `"homodyne"`.
    pub kind: String,
    pub theta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

impl MeasurementSpecJson {
    pub fn from_spec(mode: usize, spec: &MeasurementSpec) -> Self {
        match *spec {
            MeasurementSpec::Projector { theta, r } => MeasurementSpecJson {
                mode,
                kind: "projector".into(),
                theta,
                r: Some(r),
            },
            MeasurementSpec::Homodyne { theta } => MeasurementSpecJson {
                mode,
                kind: "homodyne".into(),
                theta,
                r: None,
            },
        }
    }
}

/// Measure names used in reports.
pub fn measure_name(measure: Measure) -> &'static str {
    match measure {
        Measure::EntropyOfEntanglement => "entropy-of-entanglement",
        Measure::LogNegativity => "log-negativity",
    }
}

/// Entanglement quantities re-evaluated on the conditional state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntanglementJson {
    pub measure: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_a: Option<f64>,
}

impl EntanglementJson {
    pub fn from_result(result: &EntanglementResult) -> Self {
        EntanglementJson {
            measure: measure_name(result.measure).into(),
            value: result.value,
            mu: result.mu,
            n_a: result.n_a,
        }
    }
}

/// Full record of one localization run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalizeReport {
    pub method: String,
    pub measure: String,
    /// Value claimed by the optimizer.
    pub value: f64,
    /// The same measure recomputed from the conditional state below.
    pub entanglement: EntanglementJson,
    pub optimal_specs: Vec<MeasurementSpecJson>,
    /// Conditional two-mode covariance matrix after the optimal measurements.
    pub conditional_cm: Vec<Vec<f64>>,
}

/// Side-by-side record for `oracle-compare`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareReport {
    pub analytic: LocalizeReport,
    pub oracle: LocalizeReport,
    /// `analytic.value - oracle.value`; the oracle searches a finite grid, so
    /// small positive gaps are expected.
    pub gap: f64,
}

/// Health report for `validate`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidateReport {
    pub modes: usize,
    pub symmetry_residual: f64,
    pub positive_definite: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symplectic_eigenvalues: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_nu: Option<f64>,
    pub physical: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub impurity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pure: Option<bool>,
}

/// Twelve significant digits, with exact zero written as `0`.
pub fn fmt_sig12(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v:.11e}")
    }
}

/// Serialize any report as pretty JSON with a trailing newline.
pub fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numerical(format!("report serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn state_file_round_trips_exactly() {
        let state = GaussianState::two_mode_squeezed(0.37).unwrap();
        let file = StateFile::from_state(&state);
        let text = file.to_json();
        let back = StateFile::parse(&text).unwrap().into_state().unwrap();
        assert_eq!(state.cm(), back.cm());
    }

    #[test]
    fn state_file_rejects_wrong_conventions() {
        let state = GaussianState::vacuum(1);
        let mut file = StateFile::from_state(&state);
        file.ordering = "pq-blocked".into();
        assert!(file.into_state().is_err());

        let mut file = StateFile::from_state(&state);
        file.convention = "vacuum-half".into();
        assert!(file.into_state().is_err());

        let mut file = StateFile::from_state(&state);
        file.cm.pop();
        assert!(file.into_state().is_err());
    }

    #[test]
    fn parse_reports_line_and_column() {
        let err = StateFile::parse("{\n  \"modes\": oops\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(fmt_sig12(0.0), "0");
        assert_eq!(fmt_sig12(-0.0), "0");
        assert_eq!(fmt_sig12(1.0), "1.00000000000e0");
        let formatted = fmt_sig12(0.4150374992788438);
        assert_eq!(formatted, "4.15037499279e-1");
        let back: f64 = formatted.parse().unwrap();
        assert_relative_eq!(back, 0.4150374992788438, max_relative = 1e-11);
    }

    #[test]
    fn spec_json_kinds() {
        let h = MeasurementSpecJson::from_spec(2, &MeasurementSpec::Homodyne { theta: 1.25 });
        assert_eq!(h.kind, "homodyne");
        assert!(h.r.is_none());
        let p =
            MeasurementSpecJson::from_spec(0, &MeasurementSpec::Projector { theta: 0.5, r: 2.0 });
        assert_eq!(p.kind, "projector");
        assert_eq!(p.r, Some(2.0));
    }
}
