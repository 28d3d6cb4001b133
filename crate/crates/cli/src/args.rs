//! Argument model.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "eub",
    version,
    about = "Entropic uncertainty lower bounds for projective measurements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every bound for one unitary (paired with the identity) or a list of bases.
    Bounds(BoundsArgs),
    /// `bounds` on the embedded 3x3 real orthogonal example matrix.
    Table1(Table1Args),
    /// Bounds along a parametric family, as CSV.
    Sweep(SweepArgs),
    /// Bound statistics over Haar-random unitaries.
    Random(RandomArgs),
    /// Monte-Carlo check that no sampled state violates any bound.
    Verify(VerifyArgs),
}

impl Command {
    pub fn out(&self) -> Option<&PathBuf> {
        match self {
            Command::Bounds(a) => a.common.out.as_ref(),
            Command::Table1(a) => a.common.out.as_ref(),
            Command::Sweep(a) => a.common.out.as_ref(),
            Command::Random(a) => a.common.out.as_ref(),
            Command::Verify(a) => a.out.as_ref(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Bits,
    Nats,
}

impl Unit {
    pub fn as_str(self) -> &'static str {
        match self {
            Unit::Bits => "bits",
            Unit::Nats => "nats",
        }
    }

    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Unit::Bits => nats / std::f64::consts::LN_2,
            Unit::Nats => nats,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Report in bits (default).
    #[arg(long, conflicts_with = "nats")]
    pub bits: bool,
    /// Report in nats.
    #[arg(long)]
    pub nats: bool,
    /// Write the artifact here (atomically) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    pub fn unit(&self) -> Unit {
        if self.nats {
            Unit::Nats
        } else {
            Unit::Bits
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RpzQ {
    Q1,
    Qd,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    /// Matrix JSON file; repeat for a multi-measurement set.
    #[arg(long = "matrix", required = true)]
    pub matrices: Vec<PathBuf>,
    /// Unitarity tolerance for the input matrices.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Include the singular-value profiles in the report.
    #[arg(long)]
    pub dump_profile: bool,
    /// Majorizing vector used by RPZ1 and RPZ3.
    #[arg(long, value_enum, default_value = "qd")]
    pub rpz_q: RpzQ,
    /// Order reported under MultiTsallis.
    #[arg(long, default_value_t = 2.0)]
    pub tsallis_order: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct Table1Args {
    #[arg(long)]
    pub dump_profile: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// f1_theta, f2_beta, f4_power, qubit3_theta or qutrit4_theta.
    #[arg(long)]
    pub family: String,
    /// `start:end:steps`; numbers may use `pi`, e.g. `0:pi/4:101`.
    #[arg(long)]
    pub range: Option<String>,
    /// Seed for the numeric optimum of multi-measurement families.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RandomArgs {
    /// Dimension of the sampled unitaries.
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Matrix JSON file; repeat for a multi-measurement set.
    #[arg(long = "matrix", conflicts_with = "family")]
    pub matrices: Vec<PathBuf>,
    /// Verify a family member instead of matrix files.
    #[arg(long, requires = "param")]
    pub family: Option<String>,
    /// Family parameter; may use `pi`, e.g. `pi/4`.
    #[arg(long)]
    pub param: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Unitarity tolerance for the input matrices.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Add a deliberately inflated bound that must be reported as violated.
    #[arg(long)]
    pub self_test: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses a real number, allowing `pi`, `pi/4`, `3pi/8`, `3*pi/8`, `0.5*pi`.
pub fn parse_real(text: &str) -> Result<f64, CliError> {
    let bad = || CliError::Argument(format!("cannot parse number {text:?}"));
    let t = text.trim();
    let Some(pos) = t.find("pi") else {
        return t.parse().map_err(|_| bad());
    };
    let (head, tail) = (t[..pos].trim_end_matches('*').trim(), &t[pos + 2..]);
    let factor = match head {
        "" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let divisor = match tail.trim() {
        "" => 1.0,
        d => d
            .strip_prefix('/')
            .ok_or_else(bad)?
            .trim()
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    let value = factor * PI / divisor;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Parses `start:end:steps`.
pub fn parse_range(text: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(CliError::Argument(format!("range {text:?} is not start:end:steps")));
    };
    let steps = n
        .trim()
        .parse()
        .map_err(|_| CliError::Argument(format!("cannot parse step count {n:?}")))?;
    Ok((parse_real(a)?, parse_real(b)?, steps))
}
