//! Command implementations: everything between parsed arguments and the
//! text that lands on stdout or in `--out` files.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use rayon::prelude::*;

use gle_core::conditioning::condition_gaussian;
use gle_core::entanglement::{entropy_of_entanglement, log_negativity, Measure};
use gle_core::fock::{localizable_gaussian_closed_form, localizable_non_gaussian, FockCutoff};
use gle_core::localize::{
    assignment, candidate_count, evaluate_candidate, grid_oracle, optimize_multimode_pure,
    optimize_symmetric, optimize_three_mode, reduce_symmetric_kept_frame, GridSpec,
    LocalizationResult, Method, SymmetricStateSpec, MAX_ORACLE_CANDIDATES, MAX_ORACLE_MODES,
};
use gle_core::symplectic::symplectic_eigenvalues;
use gle_core::tol::{PHYSICALITY_ATOL, PURITY_ATOL, SYMMETRY_RTOL};
use gle_core::{GaussianState, ModePartition};

use crate::args::{
    Cli, Command, CurveArgs, Format, GenKind, LocalizeArgs, MethodArg, OracleCompareArgs,
    SymmetricParams, ValidateArgs,
};
use crate::error::{CliError, Result, EXIT_VALIDATION};
use crate::formats::{
    fmt_sig12, measure_name, to_pretty_json, CompareReport, EntanglementJson, LocalizeReport,
    MeasurementSpecJson, StateFile, ValidateReport,
};

/// What a finished command hands back to `main`.
pub struct RunOutcome {
    /// Text for stdout; empty when the command wrote to `--out`.
    pub stdout: String,
    pub exit: i32,
}

/// Execute a parsed invocation.
pub fn run(cli: Cli) -> Result<RunOutcome> {
    match cli.command {
        Command::Validate(args) => run_validate(args),
        Command::Localize(args) => run_localize(args),
        Command::CurveFig3(args) => run_curve(args),
        Command::OracleCompare(args) => run_oracle_compare(args),
        Command::Gen { kind } => run_gen(kind),
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("could not read {}: {e}", path.display())))
}

fn read_state(path: &Path) -> Result<GaussianState> {
    StateFile::parse(&read_to_string(path)?)?.into_state()
}

/// Route text to stdout or `--out`.
fn emit(text: String, out: Option<&PathBuf>, exit: i32) -> Result<RunOutcome> {
    match out {
        Some(path) => {
            fs::write(path, text)
                .map_err(|e| CliError::Io(format!("could not write {}: {e}", path.display())))?;
            Ok(RunOutcome {
                stdout: String::new(),
                exit,
            })
        }
        None => Ok(RunOutcome { stdout: text, exit }),
    }
}

fn method_name(method: Method) -> &'static str {
    match method {
        Method::AnalyticThreeMode => "three-mode",
        Method::MultimodePhaseSearch => "multimode",
        Method::SymmetricReduction => "symmetric",
        Method::GridOracle => "oracle",
    }
}

// ---------------------------------------------------------------- validate

fn run_validate(args: ValidateArgs) -> Result<RunOutcome> {
    let file = StateFile::parse(&read_to_string(&args.state)?)?;
    let cm = file.raw_matrix()?;
    let report = validate_matrix(file.modes, &cm);
    let text = match args.format {
        Format::Json => to_pretty_json(&report)?,
        Format::Text => render_validate_text(&report),
    };
    let exit = if report.physical { 0 } else { EXIT_VALIDATION };
    emit(text, args.out.as_ref(), exit)
}

fn validate_matrix(modes: usize, cm: &DMatrix<f64>) -> ValidateReport {
    let scale = cm.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let residual = (cm - cm.transpose())
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let symmetric_ok = residual <= SYMMETRY_RTOL * scale;
    let sym = (cm + cm.transpose()) * 0.5;

    let min_eig = sym
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |m, v| m.min(*v));
    let positive_definite = min_eig > 0.0;

    let nus = if positive_definite {
        symplectic_eigenvalues(&sym).ok()
    } else {
        None
    };
    let min_nu = nus
        .as_ref()
        .map(|v| v.iter().fold(f64::INFINITY, |m, x| m.min(*x)));
    let physical =
        symmetric_ok && positive_definite && min_nu.is_some_and(|nu| nu >= 1.0 - PHYSICALITY_ATOL);

    let impurity = if physical {
        GaussianState::new(modes, sym)
            .ok()
            .and_then(|s| s.impurity().ok())
    } else {
        None
    };
    let pure = impurity.map(|imp| imp <= PURITY_ATOL);

    ValidateReport {
        modes,
        symmetry_residual: residual,
        positive_definite,
        symplectic_eigenvalues: nus,
        min_nu,
        physical,
        impurity,
        pure,
    }
}

fn render_validate_text(report: &ValidateReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("modes: {}\n", report.modes));
    s.push_str(&format!(
        "symmetry residual: {}\n",
        fmt_sig12(report.symmetry_residual)
    ));
    s.push_str(&format!(
        "positive definite: {}\n",
        if report.positive_definite {
            "yes"
        } else {
            "no"
        }
    ));
    if let Some(nus) = &report.symplectic_eigenvalues {
        let cells: Vec<String> = nus.iter().map(|v| fmt_sig12(*v)).collect();
        s.push_str(&format!("symplectic eigenvalues: {}\n", cells.join(", ")));
    }
    if let Some(min_nu) = report.min_nu {
        s.push_str(&format!("min nu: {}\n", fmt_sig12(min_nu)));
    }
    s.push_str(&format!(
        "physical: {}\n",
        if report.physical { "yes" } else { "no" }
    ));
    if let Some(impurity) = report.impurity {
        s.push_str(&format!("impurity: {}\n", fmt_sig12(impurity)));
    }
    if let Some(pure) = report.pure {
        s.push_str(&format!("pure: {}\n", if pure { "yes" } else { "no" }));
    }
    s
}

// ---------------------------------------------------------------- localize

fn run_localize(args: LocalizeArgs) -> Result<RunOutcome> {
    let grid = GridSpec::with_r_range(args.theta_steps, args.r_max, args.r_step);
    let (result, measured_modes) = if let Some(params) = args.symmetric {
        localize_symmetric(&params, args.kept, args.method, &grid)?
    } else {
        let path = args
            .state
            .as_ref()
            .ok_or_else(|| CliError::Usage("provide --state or --symmetric".into()))?;
        let state = read_state(path)?;
        let (a, b) = args.kept.unwrap_or((0, 1));
        let partition = ModePartition::keep_pair(a, b, state.n_modes())?;
        let measured = partition.measured().to_vec();
        let result = localize_state(&state, &partition, args.method, args.seed, &grid)?;
        (result, measured)
    };
    let report = build_report(&result, &measured_modes)?;
    let text = match args.format {
        Format::Json => to_pretty_json(&report)?,
        Format::Text => render_localize_text(&report),
    };
    emit(text, args.out.as_ref(), 0)
}

fn localize_symmetric(
    params: &SymmetricParams,
    kept: Option<(usize, usize)>,
    method: MethodArg,
    grid: &GridSpec,
) -> Result<(LocalizationResult, Vec<usize>)> {
    let spec = SymmetricStateSpec::new(params.n, params.b, params.eps1, params.eps2)?;
    let (a, b) = kept.unwrap_or((0, 1));
    let partition = ModePartition::keep_pair(a, b, params.n)?;
    let measured = partition.measured().to_vec();
    match method {
        MethodArg::Auto | MethodArg::Symmetric => {
            // The family is permutation symmetric, so the optimizer's
            // canonical kept pair (0, 1) answers for any kept pair.
            let result = optimize_symmetric(&spec)?;
            Ok((result, measured))
        }
        MethodArg::Oracle => {
            let state = spec.assemble()?;
            let result = oracle_search(&state, &partition, Measure::LogNegativity, grid)?;
            Ok((result, measured))
        }
        MethodArg::ThreeMode | MethodArg::Multimode => Err(CliError::Usage(
            "the symmetric family is mixed; use --method auto, symmetric, or oracle".into(),
        )),
    }
}

fn localize_state(
    state: &GaussianState,
    partition: &ModePartition,
    method: MethodArg,
    seed: u64,
    grid: &GridSpec,
) -> Result<LocalizationResult> {
    let pure = state.is_pure_within(PURITY_ATOL)?;
    let n = state.n_modes();
    let resolved = match method {
        MethodArg::Auto => {
            if pure && n == 3 {
                MethodArg::ThreeMode
            } else if pure && n > 3 {
                MethodArg::Multimode
            } else {
                MethodArg::Oracle
            }
        }
        MethodArg::Symmetric => {
            return Err(CliError::Usage(
                "--method symmetric needs --symmetric N,b,eps1,eps2".into(),
            ))
        }
        other => other,
    };
    match resolved {
        MethodArg::ThreeMode => Ok(optimize_three_mode(state, partition)?),
        MethodArg::Multimode => Ok(optimize_multimode_pure(state, partition, seed)?),
        MethodArg::Oracle => {
            let measure = if pure {
                Measure::EntropyOfEntanglement
            } else {
                Measure::LogNegativity
            };
            oracle_search(state, partition, measure, grid)
        }
        MethodArg::Auto | MethodArg::Symmetric => unreachable!("resolved above"),
    }
}

fn build_report(result: &LocalizationResult, measured_modes: &[usize]) -> Result<LocalizeReport> {
    let recomputed = match result.measure {
        Measure::EntropyOfEntanglement => entropy_of_entanglement(&result.conditional)?,
        Measure::LogNegativity => log_negativity(&result.conditional)?,
    };
    let specs = measured_modes
        .iter()
        .zip(&result.optimal_specs)
        .map(|(&mode, spec)| MeasurementSpecJson::from_spec(mode, spec))
        .collect();
    let cm = result.conditional.cm();
    let conditional_cm = (0..cm.nrows())
        .map(|i| (0..cm.ncols()).map(|j| cm[(i, j)]).collect())
        .collect();
    Ok(LocalizeReport {
        method: method_name(result.method).into(),
        measure: measure_name(result.measure).into(),
        value: result.value,
        entanglement: EntanglementJson::from_result(&recomputed),
        optimal_specs: specs,
        conditional_cm,
    })
}

fn render_localize_text(report: &LocalizeReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("method: {}\n", report.method));
    s.push_str(&format!("measure: {}\n", report.measure));
    s.push_str(&format!("value: {}\n", fmt_sig12(report.value)));
    let e = &report.entanglement;
    let mut extras = Vec::new();
    if let Some(mu) = e.mu {
        extras.push(format!("mu {}", fmt_sig12(mu)));
    }
    if let Some(n_a) = e.n_a {
        extras.push(format!("n_a {}", fmt_sig12(n_a)));
    }
    let suffix = if extras.is_empty() {
        String::new()
    } else {
        format!(" ({})", extras.join(", "))
    };
    s.push_str(&format!(
        "conditional value: {}{}\n",
        fmt_sig12(e.value),
        suffix
    ));
    if report.optimal_specs.is_empty() {
        s.push_str("optimal measurements: none (no measured modes)\n");
    } else {
        s.push_str("optimal measurements:\n");
        for spec in &report.optimal_specs {
            match spec.r {
                Some(r) => s.push_str(&format!(
                    "  mode {}: projector theta {} r {}\n",
                    spec.mode,
                    fmt_sig12(spec.theta),
                    fmt_sig12(r)
                )),
                None => s.push_str(&format!(
                    "  mode {}: homodyne theta {}\n",
                    spec.mode,
                    fmt_sig12(spec.theta)
                )),
            }
        }
    }
    s.push_str("conditional cm:\n");
    for row in &report.conditional_cm {
        let cells: Vec<String> = row.iter().map(|v| fmt_sig12(*v)).collect();
        s.push_str(&format!("  [{}]\n", cells.join(", ")));
    }
    s
}

// ------------------------------------------------------------------ curve

fn run_curve(args: CurveArgs) -> Result<RunOutcome> {
    if args.steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&args.lambda_min)
        || !(0.0..1.0).contains(&args.lambda_max)
        || args.lambda_min > args.lambda_max
    {
        return Err(CliError::Usage(
            "lambda grid must satisfy 0 <= lambda-min <= lambda-max < 1".into(),
        ));
    }
    let mut out = String::from("lambda,E_LG,E_LNG\n");
    for k in 0..args.steps {
        let lambda = if args.steps == 1 {
            args.lambda_min
        } else {
            let span = args.lambda_max - args.lambda_min;
            args.lambda_min + span * (k as f64) / ((args.steps - 1) as f64)
        };
        let gaussian = localizable_gaussian_closed_form(lambda)?;
        let cutoff = match args.cutoff {
            Some(n_max) => Some(FockCutoff::fixed(lambda, n_max)?),
            None => None,
        };
        let counting = localizable_non_gaussian(lambda, cutoff)?;
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_sig12(lambda),
            fmt_sig12(gaussian),
            fmt_sig12(counting)
        ));
    }
    emit(out, args.out.as_ref(), 0)
}

// --------------------------------------------------------- oracle-compare

fn run_oracle_compare(args: OracleCompareArgs) -> Result<RunOutcome> {
    let grid = GridSpec::with_r_range(args.theta_steps, args.r_max, args.r_step);
    let (analytic, oracle, measured_analytic, measured_oracle) =
        if let Some(params) = args.symmetric {
            let spec = SymmetricStateSpec::new(params.n, params.b, params.eps1, params.eps2)?;
            let analytic = optimize_symmetric(&spec)?;
            // The oracle side searches the reduced three-mode model in the
            // kept-pair frame, where entanglement across (0, 1) is the
            // physical pair entanglement; its measured mode 2 is the
            // collective combination of all measured modes of the full
            // family.
            let model = reduce_symmetric_kept_frame(&spec)?;
            let partition = ModePartition::keep_pair(0, 1, 3)?;
            let oracle = oracle_search(&model, &partition, Measure::LogNegativity, &grid)?;
            let measured_analytic: Vec<usize> = (2..params.n).collect();
            (analytic, oracle, measured_analytic, vec![2])
        } else {
            let path = args
                .state
                .as_ref()
                .ok_or_else(|| CliError::Usage("provide --state or --symmetric".into()))?;
            let state = read_state(path)?;
            if !state.is_pure_within(PURITY_ATOL)? {
                return Err(CliError::Usage(
                    "oracle-compare needs a pure state or --symmetric parameters".into(),
                ));
            }
            let (a, b) = args.kept.unwrap_or((0, 1));
            let partition = ModePartition::keep_pair(a, b, state.n_modes())?;
            let analytic = if state.n_modes() == 3 {
                optimize_three_mode(&state, &partition)?
            } else {
                optimize_multimode_pure(&state, &partition, args.seed)?
            };
            let oracle = oracle_search(&state, &partition, Measure::EntropyOfEntanglement, &grid)?;
            let measured = partition.measured().to_vec();
            (analytic, oracle, measured.clone(), measured)
        };

    let report = CompareReport {
        gap: analytic.value - oracle.value,
        analytic: build_report(&analytic, &measured_analytic)?,
        oracle: build_report(&oracle, &measured_oracle)?,
    };
    let text = match args.format {
        Format::Json => to_pretty_json(&report)?,
        Format::Text => render_compare_text(&report),
    };
    emit(text, args.out.as_ref(), 0)
}

fn render_compare_text(report: &CompareReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("analytic method: {}\n", report.analytic.method));
    s.push_str(&format!(
        "analytic value: {}\n",
        fmt_sig12(report.analytic.value)
    ));
    s.push_str(&format!(
        "oracle value: {}\n",
        fmt_sig12(report.oracle.value)
    ));
    s.push_str(&format!(
        "gap (analytic - oracle): {}\n",
        fmt_sig12(report.gap)
    ));
    s.push_str("oracle best measurements:\n");
    for spec in &report.oracle.optimal_specs {
        match spec.r {
            Some(r) => s.push_str(&format!(
                "  mode {}: projector theta {} r {}\n",
                spec.mode,
                fmt_sig12(spec.theta),
                fmt_sig12(r)
            )),
            None => s.push_str(&format!(
                "  mode {}: homodyne theta {}\n",
                spec.mode,
                fmt_sig12(spec.theta)
            )),
        }
    }
    s
}

// -------------------------------------------------------------------- gen

fn run_gen(kind: GenKind) -> Result<RunOutcome> {
    let (state, out) = match kind {
        GenKind::Vacuum { modes, out } => {
            if modes == 0 {
                return Err(CliError::Usage("--modes must be at least 1".into()));
            }
            (GaussianState::vacuum(modes), out)
        }
        GenKind::Tmsv { lambda, out } => (GaussianState::two_mode_squeezed(lambda)?, out),
        GenKind::Fig3 { lambda, out } => (GaussianState::beamsplit_tmsv(lambda)?, out),
        GenKind::Symmetric {
            n,
            b,
            eps1,
            eps2,
            out,
        } => (SymmetricStateSpec::new(n, b, eps1, eps2)?.assemble()?, out),
    };
    let text = StateFile::from_state(&state).to_json();
    emit(text, out.as_ref(), 0)
}

// ---------------------------------------------------------- oracle search

/// Grid oracle, parallelized over candidates when `GLE_THREADS` asks for
/// more than one thread. The reduction keeps the highest value and breaks
/// ties toward the lowest candidate index, so the result is identical to
/// the sequential oracle regardless of scheduling.
pub fn oracle_search(
    state: &GaussianState,
    partition: &ModePartition,
    measure: Measure,
    grid: &GridSpec,
) -> Result<LocalizationResult> {
    let threads = match std::env::var("GLE_THREADS") {
        Ok(raw) => raw
            .parse::<usize>()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "GLE_THREADS must be a positive integer, got {raw:?}"
                ))
            })?,
        Err(_) => 1,
    };
    if threads <= 1 {
        return Ok(grid_oracle(state, partition, measure, grid)?);
    }

    let m = partition.measured().len();
    if partition.kept().len() != 2 {
        return Err(CliError::Validation(format!(
            "oracle keeps exactly two modes, got {}",
            partition.kept().len()
        )));
    }
    if m > MAX_ORACLE_MODES {
        return Err(CliError::Usage(format!(
            "{m} measured modes exceeds the oracle limit of {MAX_ORACLE_MODES}"
        )));
    }
    let total = candidate_count(grid, m);
    if total > MAX_ORACLE_CANDIDATES {
        return Err(CliError::Usage(format!(
            "{total} grid points exceed the oracle limit of {MAX_ORACLE_CANDIDATES}; \
             coarsen the grid"
        )));
    }
    let candidates = grid.candidates();
    if candidates.is_empty() && m > 0 {
        return Err(CliError::Usage("the oracle grid is empty".into()));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Io(format!("could not build thread pool: {e}")))?;
    let best = pool.install(|| {
        (0..total)
            .into_par_iter()
            .map(|idx| {
                let specs = assignment(&candidates, m, idx);
                evaluate_candidate(state, partition, &specs, measure).map(|value| (value, idx))
            })
            .try_reduce(
                || (f64::NEG_INFINITY, u64::MAX),
                |a, b| {
                    Ok(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                        b
                    } else {
                        a
                    })
                },
            )
    })?;

    let optimal_specs = assignment(&candidates, m, best.1);
    let conditional = condition_gaussian(state, partition, &optimal_specs)?;
    Ok(LocalizationResult {
        measure,
        value: best.0,
        optimal_specs,
        method: Method::GridOracle,
        conditional,
    })
}
