//! Command-line surface for qloci: argument parsing, job configuration,
//! the five commands and their report formats.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use qloci::linalg::DEFAULT_PRIME;
use qloci::oracle::DEFAULT_ORACLE_GUARD;
use qloci::poset::DEFAULT_ORBIT_GUARD;
use qloci::{DimensionVector, Field, Quiver, TypeAQuiver};

pub mod commands;

pub use commands::run;

/// Environment variable overriding the default enumeration ceiling.
pub const GUARD_ENV: &str = "QLOCI_GUARD";

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const GUARD: i32 = 3;
    pub const INVARIANT: i32 = 4;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Decompose,
    Zelevinsky,
    Poset,
    Reduce,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    #[value(name = "Q")]
    Rational,
    #[value(name = "Fp")]
    Prime,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "qloci", version, about = "Orbit closures of type A quiver representations")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Quiver file: JSON, or an orientation word such as RRLL.
    #[arg(long, value_name = "F")]
    pub quiver: Option<PathBuf>,
    /// Representation file (JSON).
    #[arg(long, value_name = "F")]
    pub rep: Option<PathBuf>,
    /// Dimension vector, comma separated.
    #[arg(long, value_name = "CSV")]
    pub dims: Option<String>,
    #[arg(long, value_enum)]
    pub field: Option<FieldArg>,
    /// Characteristic for Fp.
    #[arg(long, value_name = "N")]
    pub p: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Reduce non-bipartite input to its bipartite double.
    #[arg(long)]
    pub reduce: bool,
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub seed: u64,
    /// Enumeration ceiling; overrides QLOCI_GUARD.
    #[arg(long, value_name = "N")]
    pub guard: Option<u128>,
}

#[derive(Debug)]
pub enum CliError {
    Core(qloci::Error),
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(qloci::Error::GuardExceeded { .. }) => exit::GUARD,
            CliError::Core(qloci::Error::InvariantViolation(_)) => exit::INVARIANT,
            _ => exit::INPUT,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(m) => write!(f, "{m}"),
        }
    }
}

impl From<qloci::Error> for CliError {
    fn from(e: qloci::Error) -> CliError {
        CliError::Core(e)
    }
}

/// A validated job.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobConfig {
    pub command: Command,
    pub quiver: Option<PathBuf>,
    pub rep: Option<PathBuf>,
    pub dims: Option<DimensionVector>,
    /// `None` when neither `--field` nor `--p` was given.
    pub field: Option<Field>,
    /// Explicit ceiling from `--guard` or the environment.
    pub guard: Option<u128>,
    pub format: Format,
    pub reduce: bool,
    pub seed: u64,
}

impl JobConfig {
    /// `env_guard` is the value of [`GUARD_ENV`], if set.
    pub fn from_cli(cli: &Cli, env_guard: Option<&str>) -> Result<JobConfig, CliError> {
        let field = match (cli.field, cli.p) {
            (Some(FieldArg::Rational), Some(_)) => {
                return Err(CliError::Input("--p applies only to --field Fp".into()));
            }
            (Some(FieldArg::Rational), None) => Some(Field::Rational),
            (Some(FieldArg::Prime), p) => Some(Field::prime(p.unwrap_or(DEFAULT_PRIME as u64))?),
            (None, Some(p)) => Some(Field::prime(p)?),
            (None, None) => None,
        };
        let env = match env_guard {
            Some(s) => Some(
                s.trim()
                    .parse::<u128>()
                    .map_err(|_| CliError::Input(format!("{GUARD_ENV}={s:?} is not a number")))?,
            ),
            None => None,
        };
        let guard = cli.guard.or(env);
        if guard == Some(0) {
            return Err(CliError::Input("guards must be positive".into()));
        }
        let dims = cli.dims.as_deref().map(DimensionVector::parse_csv).transpose()?;
        Ok(JobConfig {
            command: cli.command,
            quiver: cli.quiver.clone(),
            rep: cli.rep.clone(),
            dims,
            field,
            guard,
            format: cli.format,
            reduce: cli.reduce,
            seed: cli.seed,
        })
    }

    pub fn orbit_guard(&self) -> u128 {
        self.guard.unwrap_or(DEFAULT_ORBIT_GUARD)
    }

    pub fn oracle_guard(&self) -> u128 {
        self.guard.unwrap_or(DEFAULT_ORACLE_GUARD)
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// A quiver file holds JSON or a bare orientation word.
pub fn parse_quiver(text: &str) -> Result<Quiver, CliError> {
    let t = text.trim();
    if t.starts_with('{') {
        serde_json::from_str(t).map_err(|e| CliError::Input(format!("quiver: {e}")))
    } else {
        Ok(Quiver::TypeA(TypeAQuiver::from_word(t)?))
    }
}

/// What a command produced: the rendered output and, if an internal check
/// failed, why.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub failure: Option<String>,
}

impl Outcome {
    pub fn ok(output: String) -> Outcome {
        Outcome { output, failure: None }
    }

    pub fn exit_code(&self) -> i32 {
        if self.failure.is_some() {
            exit::INVARIANT
        } else {
            exit::SUCCESS
        }
    }
}
