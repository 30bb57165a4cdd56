//! Command line argument definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Gaussian localizable entanglement toolkit.
#[derive(Debug, Parser)]
#[command(
    name = "gle",
    version,
    about = "Optimal local Gaussian measurements for localizing entanglement on a kept pair of modes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a state file for symmetry, positive definiteness, physicality,
    /// and purity. Exits 0 only for physical states.
    Validate(ValidateArgs),
    /// Optimize local single-mode measurements on all modes outside the kept
    /// pair and report the localized entanglement.
    Localize(LocalizeArgs),
    /// Tabulate optimal-Gaussian versus photon-counting localization for the
    /// beamsplit two-mode squeezed family as CSV.
    #[command(name = "curve-fig3")]
    CurveFig3(CurveArgs),
    /// Run both the analytic optimizer and the brute-force grid oracle on the
    /// same problem and report the gap.
    OracleCompare(OracleCompareArgs),
    /// Emit canonical states as state files.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// State file to check.
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LocalizeArgs {
    /// State file holding the multimode Gaussian state.
    #[arg(long, conflicts_with = "symmetric")]
    pub state: Option<PathBuf>,
    /// Symmetric-family parameters `N,b,eps1,eps2` in place of a state file.
    #[arg(long, value_parser = parse_symmetric)]
    pub symmetric: Option<SymmetricParams>,
    /// Kept pair as `i,j` (default `0,1`). All other modes are measured.
    #[arg(long, value_parser = parse_pair)]
    pub kept: Option<(usize, usize)>,
    #[arg(long, value_enum, default_value_t)]
    pub method: MethodArg,
    /// Homodyne/projector angles per mode for the grid oracle.
    #[arg(long, default_value_t = 180)]
    pub theta_steps: usize,
    /// Largest projector squeezing on the oracle grid.
    #[arg(long, default_value_t = 6.0)]
    pub r_max: f64,
    /// Spacing of projector squeezings on the oracle grid.
    #[arg(long, default_value_t = 0.5)]
    pub r_step: f64,
    /// Seed for the multimode phase search restarts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Smallest squeezing parameter lambda on the grid.
    #[arg(long, default_value_t = 0.01)]
    pub lambda_min: f64,
    /// Largest squeezing parameter lambda on the grid.
    #[arg(long, default_value_t = 0.99)]
    pub lambda_max: f64,
    /// Number of grid points, spaced evenly from lambda-min to lambda-max.
    #[arg(long, default_value_t = 99)]
    pub steps: usize,
    /// Fixed Fock cutoff for the photon-counting column; chosen automatically
    /// when absent.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleCompareArgs {
    /// State file holding the multimode Gaussian state.
    #[arg(long, conflicts_with = "symmetric")]
    pub state: Option<PathBuf>,
    /// Symmetric-family parameters `N,b,eps1,eps2` in place of a state file.
    #[arg(long, value_parser = parse_symmetric)]
    pub symmetric: Option<SymmetricParams>,
    /// Kept pair as `i,j` (default `0,1`).
    #[arg(long, value_parser = parse_pair)]
    pub kept: Option<(usize, usize)>,
    #[arg(long, default_value_t = 180)]
    pub theta_steps: usize,
    #[arg(long, default_value_t = 6.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 0.5)]
    pub r_step: f64,
    /// Seed for the multimode phase search when it is the analytic side.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Vacuum state.
    Vacuum {
        #[arg(long)]
        modes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-mode squeezed vacuum with squeezing parameter lambda.
    Tmsv {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Three-mode state: one arm of a two-mode squeezed vacuum split on a
    /// balanced beam splitter with vacuum; kept pair (0, 1), measured mode 2.
    Fig3 {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Permutation-symmetric family with single-mode block diag(b, b) and
    /// pairwise correlations diag(eps1, eps2).
    Symmetric {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        eps1: f64,
        #[arg(long, allow_hyphen_values = true)]
        eps2: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Pick a method from the state: symmetric parameters use the symmetric
    /// reduction, pure three-mode states the closed form, larger pure states
    /// the phase search, everything else the grid oracle.
    #[default]
    Auto,
    ThreeMode,
    Multimode,
    Symmetric,
    Oracle,
}

/// Parameters of the permutation-symmetric family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricParams {
    pub n: usize,
    pub b: f64,
    pub eps1: f64,
    pub eps2: f64,
}

fn parse_symmetric(raw: &str) -> Result<SymmetricParams, String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 4 {
        return Err(format!(
            "expected N,b,eps1,eps2 (four comma-separated values), got {raw:?}"
        ));
    }
    let n: usize = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("mode count {:?} is not a positive integer", parts[0]))?;
    let mut values = [0.0_f64; 3];
    for (slot, part) in values.iter_mut().zip(&parts[1..]) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("{part:?} is not a number"))?;
    }
    Ok(SymmetricParams {
        n,
        b: values[0],
        eps1: values[1],
        eps2: values[2],
    })
}

fn parse_pair(raw: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 2 {
        return Err(format!(
            "expected i,j (two comma-separated indices), got {raw:?}"
        ));
    }
    let a: usize = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("index {:?} is not a non-negative integer", parts[0]))?;
    let b: usize = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("index {:?} is not a non-negative integer", parts[1]))?;
    if a == b {
        return Err(format!("kept pair needs two distinct modes, got {raw:?}"));
    }
    Ok((a, b))
}
