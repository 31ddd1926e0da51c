//! `chainlet` command-line front end. Every command writes a mode banner first and prints
//! numbers in fixed precision; exit codes are 0 (ok), 1 (verification failure), 2 (bad input).

mod apply;
mod args;
mod convert;
mod hodge;
mod norm;
mod verify;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chainlet::io::{read_any_chain, AnyChain, IoError};
use chainlet::{ArithmeticMode, Chain, Scalar};
use thiserror::Error;

pub use args::{Cli, Command};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

/// Decimal places for float output.
pub const DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => EXIT_OK,
            Status::VerificationFailed => EXIT_FAIL,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: IoError },
    #[error(transparent)]
    Harness(#[from] harness::HarnessError),
    #[error(transparent)]
    Chain(#[from] chainlet::chains::ChainError),
    #[error(transparent)]
    Form(#[from] chainlet::forms::FormError),
    #[error(transparent)]
    Norm(#[from] chainlet::norms::NormError),
    #[error(transparent)]
    Geometry(#[from] chainlet::geometry::GeometryError),
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Status, CliError> {
    match cli.command {
        Command::Verify(a) => verify::run(a, out),
        Command::Norm(a) => norm::run(a, out),
        Command::Apply(a) => apply::run(a, out),
        Command::Hodge(a) => hodge::run(a, out),
        Command::Convert(a) => convert::run(a, out),
    }
}

pub(crate) fn banner(out: &mut dyn Write, command: &str, mode: &str) -> Result<(), CliError> {
    writeln!(out, "chainlet {command} | mode: {mode}")?;
    Ok(())
}

pub(crate) fn mode_label(mode: ArithmeticMode) -> &'static str {
    match mode {
        ArithmeticMode::Rational => "rational (exact)",
        ArithmeticMode::Float => "float (f64)",
    }
}

pub(crate) fn fixed(x: f64) -> String {
    format!("{x:.DIGITS$}")
}

pub(crate) fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::File {
        path: path.into(),
        source,
    })
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::File {
        path: path.into(),
        source,
    })
}

/// Reads a chain file, converting to `mode` when one is requested.
pub(crate) fn load_chain(path: &Path, mode: Option<ArithmeticMode>) -> Result<AnyChain, CliError> {
    let c = read_any_chain(&read_text(path)?).map_err(|source| CliError::Parse {
        path: path.into(),
        source,
    })?;
    match mode {
        None => Ok(c),
        Some(m) => convert_mode(c, m),
    }
}

/// Float to rational is exact (every finite double is a dyadic rational).
pub(crate) fn convert_mode(c: AnyChain, mode: ArithmeticMode) -> Result<AnyChain, CliError> {
    Ok(match (c, mode) {
        (AnyChain::Rational(c), ArithmeticMode::Float) => AnyChain::Float(c.to_f64()),
        (AnyChain::Float(c), ArithmeticMode::Rational) => {
            if c.poles()
                .iter()
                .any(|p| p.payload.terms().iter().any(|t| !t.coeff.is_finite()))
                || c.poles()
                    .iter()
                    .any(|p| p.at.coords().iter().any(|x| !x.is_finite()))
            {
                return Err(CliError::Usage(
                    "non-finite float cannot be converted to rational".into(),
                ));
            }
            AnyChain::Rational(c.map_scalars(|x| x.to_rational().expect("finite")))
        }
        (c, _) => c,
    })
}

pub(crate) fn describe<S: Scalar>(c: &Chain<S>) -> String {
    let label = |v: Option<usize>| match v {
        Some(v) => v.to_string(),
        None if c.is_empty() => "none".into(),
        None => "mixed".into(),
    };
    let (grade, order) = (label(c.grade()), label(c.order()));
    format!(
        "n={} poles={} grade={grade} order={order} mass={}",
        c.n(),
        c.len(),
        chainlet::scalar::fmt_fixed(&c.mass(), DIGITS)
    )
}
