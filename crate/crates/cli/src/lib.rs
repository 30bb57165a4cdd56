//! Command line front end for `gle-core`: state files on disk, localization
//! runs, the Gaussian-versus-photon-counting curve, and analytic-versus-
//! oracle comparisons.
//!
//! The binary is `gle`; see the crate README for the file format and exit
//! code contract. Everything here is IO and formatting; the numerics live
//! in `gle-core`.

pub mod args;
pub mod commands;
pub mod error;
pub mod formats;

pub use args::Cli;
pub use commands::{run, RunOutcome};
pub use error::{CliError, EXIT_NUMERICAL, EXIT_USAGE, EXIT_VALIDATION};
