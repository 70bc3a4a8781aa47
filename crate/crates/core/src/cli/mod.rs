//! Command-line front end.
//!
//! Every subcommand builds a [`Report`] and renders it as JSON, CSV or an
//! aligned plain table. Exit status is 0 on success, 1 when a verification
//! or convergence check fails, and 2 on invalid arguments.

mod commands;
mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::oracle::OracleSettings;
use crate::precision::{Precision, DEFAULT_DIGITS};
use crate::series::cache::CACHE_DIR_ENV;
use crate::series::{parse_rational, Rational};

pub use render::{Format, Report, OUTPUT_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "vpt",
    version,
    about = "Variational perturbation theory for x^p anharmonic oscillators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "plain", global = true)]
    pub format: Format,

    /// Significant decimal digits for real arithmetic.
    #[arg(long, default_value_t = DEFAULT_DIGITS, value_parser = clap::value_parser!(u32).range(16..=2000), global = true)]
    pub precision: u32,

    /// Directory of cached Bender-Wu tables.
    #[arg(long, env = CACHE_DIR_ENV, global = true)]
    pub cache: Option<PathBuf>,

    #[command(flatten)]
    pub oracle: OracleArgs,
}

/// Overrides for the reference-energy solvers.
#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Starting oscillator-basis dimension for diagonalization.
    #[arg(long, global = true)]
    pub basis_dim: Option<usize>,
    /// Largest basis dimension tried before giving up.
    #[arg(long, global = true)]
    pub max_basis_dim: Option<usize>,
    /// Frequency of the oscillator basis [default: first-order variational frequency].
    #[arg(long, global = true)]
    pub basis_frequency: Option<f64>,
    /// Half-width of the finite-difference box [default: from a WKB decay estimate].
    #[arg(long, global = true)]
    pub grid_halfwidth: Option<f64>,
    /// Number of finite-difference grid points.
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    /// Relative convergence tolerance of the reference energy.
    #[arg(long, global = true)]
    pub oracle_tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact Bender-Wu coefficients e_0 .. e_order.
    Coeffs {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        order: usize,
    },
    /// Scaling polynomial P_order(sigma) and its real roots.
    Polynomial {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        order: usize,
    },
    /// Order-N variational energy with its candidate table.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        order: usize,
        /// Also compute the reference energy and the error against it.
        #[arg(long)]
        oracle: bool,
    },
    /// Variational energies for orders 1 ..= max-order against the reference energy.
    Converge {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        max_order: usize,
        /// Also fail when the error grows between consecutive odd orders.
        #[arg(long)]
        strict: bool,
    },
    /// Exact identity suite, structural checks and cache integrity.
    Verify {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        max_order: usize,
    },
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    #[arg(long)]
    pub p: u32,
    /// Harmonic frequency; exact rational such as "1", "3/4" or "0.1".
    #[arg(long, value_parser = rational_arg)]
    pub omega: Rational,
    /// Coupling; exact rational.
    #[arg(long, value_parser = rational_arg)]
    pub g: Rational,
}

fn rational_arg(text: &str) -> std::result::Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

impl GlobalArgs {
    pub fn precision(&self) -> Precision {
        Precision::digits(self.precision)
    }

    pub fn oracle_settings(&self) -> OracleSettings {
        let mut s = OracleSettings {
            precision: self.precision(),
            ..OracleSettings::default()
        };
        let o = &self.oracle;
        if let Some(v) = o.basis_dim {
            s.basis_dim = v;
        }
        if let Some(v) = o.max_basis_dim {
            s.max_basis_dim = v;
        }
        if o.basis_frequency.is_some() {
            s.basis_frequency = o.basis_frequency;
        }
        if o.grid_halfwidth.is_some() {
            s.grid_halfwidth = o.grid_halfwidth;
        }
        if let Some(v) = o.grid_points {
            s.grid_points = v;
        }
        if let Some(v) = o.oracle_tolerance {
            s.tolerance = v;
        }
        s
    }
}

/// Errors caused by the arguments rather than by the computation.
fn is_broken_pipe(e: &Error) -> bool {
    match e {
        Error::Io(io) => io.kind() == std::io::ErrorKind::BrokenPipe,
        Error::Json(json) => json.io_error_kind() == Some(std::io::ErrorKind::BrokenPipe),
        _ => false,
    }
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidPower(_)
            | Error::UnsupportedLevel(_)
            | Error::InvalidSpec(_)
            | Error::NonPositiveFrequency
            | Error::OrderTooLow
            | Error::ParseRational(_)
            | Error::IndexOutOfRange { .. }
            | Error::InsufficientCoefficients { .. }
    )
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match commands::execute(&cli) {
        Ok(report) => {
            match report.write(cli.global.format, out) {
                Ok(()) => {}
                Err(e) if is_broken_pipe(&e) => {}
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_FAILED;
                }
            }
            if report.passed {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if is_usage_error(&e) {
                EXIT_USAGE
            } else {
                EXIT_FAILED
            }
        }
    }
}
