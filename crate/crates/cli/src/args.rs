use std::path::PathBuf;

use chainlet::ArithmeticMode;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "chainlet",
    version,
    about = "Discrete exterior calculus on polypolar chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites and write CSV/JSON reports.
    Verify(VerifyArgs),
    /// Bracket the natural norm of a chain file.
    Norm(NormArgs),
    /// Apply an operator to a chain file.
    Apply(ApplyArgs),
    /// Hodge-sequence report over a sequence of mesh-pair files.
    Hodge(HodgeArgs),
    /// Convert chain files between modes or generate chain and mesh files.
    Convert(ConvertArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Rational,
    Float,
}

impl From<Mode> for ArithmeticMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Rational => ArithmeticMode::Rational,
            Mode::Float => ArithmeticMode::Float,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// stokes, change, star, div, curl, identities, norms, hodge, cauchy or all.
    pub suite: String,
    /// Largest ambient dimension for the randomized suites.
    #[arg(long)]
    pub n: Option<usize>,
    /// Finest refinement level.
    #[arg(long)]
    pub levels: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Relative tolerance for float identities.
    #[arg(long)]
    pub tol: Option<f64>,
    /// JSON file of configuration overrides; unknown keys are rejected.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Report directory.
    #[arg(long, default_value = "chainlet-reports")]
    pub out: PathBuf,
    /// Custom Stokes experiment: a (k-1)-form on the unit k-cell given by --domain.
    #[arg(long)]
    pub form: Option<String>,
    /// interval, unit-square, unit-cube or square-in-r3.
    #[arg(long, default_value = "unit-square")]
    pub domain: String,
    /// Print every report table.
    #[arg(long)]
    pub tables: bool,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    pub chain: PathBuf,
    /// Norm order.
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    /// Convert the chain before computing.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Also run the exhaustive oracle (at most 6 poles).
    #[arg(long)]
    pub brute: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Boundary,
    Perp,
    Pushforward,
    Prederivative,
    Diamond,
    Neg,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(value_enum)]
    pub op: Op,
    pub chain: PathBuf,
    /// Pushforward map components, comma separated (e.g. "x1^2,x2").
    #[arg(long)]
    pub map: Option<String>,
    /// Prederivative direction, comma separated (e.g. "1,0" or "1/2,0").
    #[arg(long)]
    pub dir: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Output chain file; the chain goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HodgeArgs {
    /// Mesh-pair files, coarsest first.
    #[arg(required = true)]
    pub meshes: Vec<PathBuf>,
    /// Each segment is refined into 2^refine poles for the norm bracket.
    #[arg(long, default_value_t = 4)]
    pub refine: u32,
    /// Largest final direction ratio accepted as convergence.
    #[arg(long, default_value_t = 0.05)]
    pub final_ratio: f64,
    /// Skip the dual lower bracket.
    #[arg(long)]
    pub no_lower: bool,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(subcommand)]
    pub what: ConvertWhat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DualArg {
    Circumcentric,
    Barycentric,
    Perp,
}

#[derive(Debug, Subcommand)]
pub enum ConvertWhat {
    /// Rewrite a chain file in the other arithmetic mode.
    Chain {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Level-N chain of the unit k-cube in R^n.
    Cube {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        level: u32,
        #[arg(long, value_enum, default_value = "rational")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structured unit-square mesh pair with 2^level cells per side.
    Mesh {
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum)]
        dual: DualArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
