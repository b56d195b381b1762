//! Command-line front end: argument parsing, dispatch, JSON/text output and
//! the batch driver.
//!
//! Exit codes: 0 for any mathematical answer (including "not integrable"),
//! 1 when a batch manifest has failing lines, 2 for usage errors, 3 when a
//! resource limit is hit.

mod batch;
mod commands;

use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

pub use batch::{run_manifest, BatchLine};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Parser)]
#[command(name = "liouville", version, about = "Liouvillian solutions of y'' = M(x) y with polynomial M")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Largest admissible polynomial degree d
    #[arg(long, global = true, default_value_t = 64)]
    pub max_d: usize,
    /// Largest iteration index p
    #[arg(long, global = true, default_value_t = 64)]
    pub max_p: usize,
    /// Term budget for symbolic iterations (accepts 2e6)
    #[arg(long, global = true, default_value = "2e6", value_parser = parse_count)]
    pub term_budget: usize,
    /// Convergence tolerance for numerical roots
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// D'Alembert reduction of u'' + P u' + Q u = 0 to y'' = R y
    Reduce {
        #[arg(long = "P", allow_hyphen_values = true)]
        p: String,
        #[arg(long = "Q", allow_hyphen_values = true)]
        q: String,
        /// Rescaling factor k for the monic form
        #[arg(long)]
        scale: Option<String>,
        /// Accept a floating-point rescale when no rational one exists
        #[arg(long)]
        numeric: bool,
    },
    /// Complete the square M = A^2 + B
    Square {
        #[arg(long = "M", allow_hyphen_values = true)]
        m: String,
    },
    /// Universal obstruction Δ_p, symbolically or at (A, B)
    Delta {
        /// Index or inclusive range such as 0..3
        #[arg(long, value_parser = parse_range)]
        p: RangeInclusive<usize>,
        #[arg(long, conflicts_with_all = ["a", "b"])]
        symbolic: bool,
        #[arg(long = "A", requires = "b", allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long = "B", requires = "a", allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Asymptotic iteration for y'' = l0 y' + r0 y
    Aim {
        #[arg(long, allow_hyphen_values = true)]
        l0: String,
        #[arg(long, allow_hyphen_values = true)]
        r0: String,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        obstruction_only: bool,
    },
    /// Decide y'' = M y and build its Liouvillian solutions
    Solve {
        #[arg(long = "M", allow_hyphen_values = true)]
        m: String,
        /// Rescaling factor k with k^(2n+2) * lead = 1 for non-monic M
        #[arg(long)]
        scale: Option<String>,
    },
    /// Canonical equation y'' = (x^(2n) ± (2d+n) x^(n-1)) y
    Canonical {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "+", value_parser = parse_sign, allow_hyphen_values = true)]
        sign: liouville_core::reduce::Sign,
    },
    /// Generators of a spectral variety
    Variety {
        #[arg(long)]
        n: usize,
        /// Degree or inclusive range such as 0..6
        #[arg(long, value_parser = parse_range)]
        d: RangeInclusive<usize>,
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        sign: liouville_core::reduce::Sign,
        /// Keep a_{n-1} instead of the depressed form
        #[arg(long)]
        full: bool,
    },
    /// Spectral polynomial and algebraic levels of -ψ'' + U ψ = λ ψ
    Spectrum {
        #[arg(long = "U", allow_hyphen_values = true)]
        u: String,
        #[arg(long)]
        scale: Option<String>,
    },
    /// Eigenfunctions of -ψ'' + U ψ = λ ψ at a given λ
    EigenSolve {
        #[arg(long = "U", allow_hyphen_values = true)]
        u: String,
        /// Rational or quadratic surd, e.g. 2*sqrt(6)
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        scale: Option<String>,
    },
    /// Run a manifest of commands, optionally checking output hashes
    Batch { manifest: std::path::PathBuf },
}

fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1e18 => Ok(v as usize),
        _ => Err(format!("not a count: {s}")),
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t}: {e}"));
    match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            Ok(lo..=hi)
        }
        None => {
            let v = num(s)?;
            Ok(v..=v)
        }
    }
}

fn parse_sign(s: &str) -> Result<liouville_core::reduce::Sign, String> {
    liouville_core::reduce::Sign::parse(s).ok_or_else(|| format!("sign must be + or -, got {s}"))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

/// A command's answer: JSON body (without `schema_version`) and text form.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub text: String,
    /// Nonzero only for batch failures.
    pub code: i32,
}

impl Report {
    pub fn new(json: Value, text: impl Into<String>) -> Self {
        Report {
            json,
            text: text.into(),
            code: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        return v;
    }
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("result".into(), v);
    Value::Object(m)
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", with_schema(report.json.clone())),
        Format::Text => {
            let mut t = report.text.clone();
            if !t.ends_with('\n') {
                t.push('\n');
            }
            t
        }
    }
}

pub fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    commands::dispatch(&cli.command, &cli.global)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(&cli) {
        Ok(report) => Outcome {
            code: report.code,
            stdout: render(&report, cli.global.format),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
