//! Command-line front end: fringe scans, visibility sweeps, the validation
//! suite and a moment dump.
//!
//! Every option can come from a flag or from one TOML config file with a
//! table per subcommand (`[fringe]`, `[visibility]`, `[validate]`,
//! `[moments]`). Precedence is flags, then the config file, then the
//! selected preset, then built-in defaults.

pub mod config;
pub mod fringe;
pub mod moments;
pub mod validate;
pub mod visibility;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::fock::FockError;
use crate::ramsey::RamseyError;

pub use config::ConfigFile;
pub use fringe::{run_fringe, FringeOptions, FringeSample, ScanRequest};
pub use moments::{run_moments, MomentsOptions};
pub use validate::{run_validate, ValidateOptions, ValidationReport};
pub use visibility::{run_visibility, VisibilityOptions, VisibilityRow};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_VALIDATION_FAILED: i32 = 1;
pub const EXIT_BAD_ARGUMENTS: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("numeric inadequacy: {0}")]
    Numeric(String),
    #[error("config file {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(_) => EXIT_NUMERIC,
            _ => EXIT_BAD_ARGUMENTS,
        }
    }
}

impl From<FockError> for CliError {
    fn from(err: FockError) -> Self {
        match err {
            FockError::InvalidParam(msg) => CliError::InvalidRequest(msg),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<RamseyError> for CliError {
    fn from(err: RamseyError) -> Self {
        match err {
            RamseyError::InvalidConfig(msg) => CliError::InvalidRequest(msg),
            RamseyError::Fock(inner) => inner.into(),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "ramsey-squeeze",
    version,
    about = "Ramsey fringes with two-mode squeezed light"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan p_e and p_ee over detuning or fringe phase; CSV on stdout.
    Fringe(FringeArgs),
    /// Sweep the fringe visibility over the squeeze magnitude; CSV.
    Visibility(VisibilityArgs),
    /// Run every numerical invariant check; exits 1 on any failure.
    Validate(ValidateArgs),
    /// Compare closed-form and grid moments of the split squeezed vacuum.
    Moments(MomentsArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML config file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FringeArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub options: FringeOptions,
}

#[derive(Debug, Args)]
pub struct VisibilityArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub options: VisibilityOptions,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub options: ValidateOptions,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub options: MomentsOptions,
}

/// Runs one subcommand, writing its primary output to `out` and
/// diagnostics to `diag`. Returns the process exit code.
pub fn run(command: Command, out: &mut dyn Write, diag: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Fringe(args) => {
            let file = ConfigFile::load_opt(args.common.config.as_deref())?;
            let request = args.options.or(file.fringe.unwrap_or_default()).resolve()?;
            let scan = run_fringe(&request)?;
            for warning in &scan.warnings {
                writeln!(diag, "warning: {warning}")?;
            }
            scan.write_csv(out)?;
            Ok(EXIT_SUCCESS)
        }
        Command::Visibility(args) => {
            let file = ConfigFile::load_opt(args.common.config.as_deref())?;
            let request = args
                .options
                .or(file.visibility.unwrap_or_default())
                .resolve()?;
            let sweep = run_visibility(&request)?;
            visibility::write_csv(&request, &sweep, out)?;
            Ok(EXIT_SUCCESS)
        }
        Command::Validate(args) => {
            let file = ConfigFile::load_opt(args.common.config.as_deref())?;
            let request = args
                .options
                .or(file.validate.unwrap_or_default())
                .resolve()?;
            let report = run_validate(&request)?;
            report.write(out)?;
            Ok(if report.all_passed() {
                EXIT_SUCCESS
            } else {
                EXIT_VALIDATION_FAILED
            })
        }
        Command::Moments(args) => {
            let file = ConfigFile::load_opt(args.common.config.as_deref())?;
            let request = args
                .options
                .or(file.moments.unwrap_or_default())
                .resolve()?;
            let rows = run_moments(&request)?;
            moments::write_csv(&rows, out)?;
            Ok(EXIT_SUCCESS)
        }
    }
}

impl Command {
    pub fn output(&self) -> Option<&std::path::Path> {
        let common = match self {
            Command::Fringe(a) => &a.common,
            Command::Visibility(a) => &a.common,
            Command::Validate(a) => &a.common,
            Command::Moments(a) => &a.common,
        };
        common.output.as_deref()
    }
}

/// Writes a float so that it parses back to the same value.
pub(crate) fn fmt_float(x: f64) -> String {
    format!("{x:?}")
}

/// `lo + (hi - lo) k/(n - 1)` for `k = 0..n`.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|k| if k + 1 == n { hi } else { lo + step * k as f64 })
        .collect()
}

/// `or` for option structs: every field is taken from `self` when present.
macro_rules! merge_options {
    ($ty:ident { $($field:ident),* $(,)? }) => {
        impl $ty {
            pub fn or(self, fallback: Self) -> Self {
                Self { $($field: self.$field.or(fallback.$field)),* }
            }
        }
    };
}
pub(crate) use merge_options;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_endpoints() {
        let xs = linspace(-1.0, 3.0, 5);
        assert_eq!(xs, vec![-1.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1e-300, -2.5e17, 0.47412247801749124] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn error_exit_codes() {
        let numeric: CliError = FockError::CutoffTooSmall {
            cutoff: 4,
            deficit: 0.1,
            tolerance: 1e-10,
        }
        .into();
        assert_eq!(numeric.exit_code(), EXIT_NUMERIC);
        let bad: CliError = FockError::InvalidParam("r".into()).into();
        assert_eq!(bad.exit_code(), EXIT_BAD_ARGUMENTS);
    }
}
