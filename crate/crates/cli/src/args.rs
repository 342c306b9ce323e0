use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "dindex", version, about = "Index theorems on finite simplicial complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Facets,
    Edges,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Complex to read.
    #[arg(long, value_name = "FILE", required_unless_present = "generate")]
    pub input: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Facets)]
    pub format: Format,

    /// Build a named complex instead of reading one, e.g. `cycle:6`.
    #[arg(long, value_name = "FAMILY:N", conflicts_with = "input")]
    pub generate: Option<String>,

    /// Seed for random families, random functions and sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Report destination. Defaults to `$DINDEX_OUT_DIR/<command>.json` when
    /// that variable is set, standard output otherwise.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled(usize),
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "exhaustive" {
            return Ok(Mode::Exhaustive);
        }
        let n = s
            .strip_prefix("sampled:")
            .ok_or_else(|| format!("expected `exhaustive` or `sampled:N`, got {s:?}"))?;
        n.parse()
            .map(Mode::Sampled)
            .map_err(|_| format!("bad sample count {n:?}"))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OperatorKind {
    /// Exterior (or connection) derivative.
    D,
    Dirac,
    Hodge,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Counts, characteristics, Betti numbers, curvature and the index triple.
    Report {
        #[command(flatten)]
        input: Input,
    },
    /// Exact Betti numbers next to the numerical kernel dimensions.
    Betti {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Vertex curvature of order K and its total.
    Curvature {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Poincare-Hopf indices of a function and, optionally, their expectation.
    Ph {
        #[command(flatten)]
        input: Input,
        /// `label value` lines; a random injective function when absent.
        #[arg(long, value_name = "FILE")]
        function: Option<PathBuf>,
        #[arg(long, value_name = "exhaustive|sampled:N")]
        mode: Option<Mode>,
    },
    /// Lefschetz number of an automorphism against its fixed simplices.
    Lefschetz {
        #[command(flatten)]
        input: Input,
        /// Permutation in cycle notation or `a->b` lines; identity when absent.
        #[arg(long, value_name = "FILE")]
        perm: Option<PathBuf>,
        #[arg(long = "t", value_name = "LIST", value_delimiter = ',', default_values_t = [0.0, 0.1, 1.0, 10.0])]
        t: Vec<f64>,
    },
    /// Heat kernel super trace over a grid of times.
    Heat {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long = "t", value_name = "LIST", value_delimiter = ',', default_values_t = [0.0, 0.1, 0.5, 1.0, 5.0, 10.0])]
        t: Vec<f64>,
    },
    /// Isospectral deformation of the Dirac operator.
    Lax {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long = "t-end", default_value_t = 10.0)]
        t_end: f64,
        /// Keep every N-th step in the report.
        #[arg(long, default_value_t = 100)]
        stride: usize,
        /// Also write the trajectory as CSV.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Barycentric refinement with the f-vector prediction checked.
    Refine {
        #[command(flatten)]
        input: Input,
        /// Write the refined complex as a facet file.
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// The k-skeleton.
    Skeleton {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// A derivative, Dirac or Hodge operator as labelled sparse triplets.
    Export {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, value_enum, default_value_t = OperatorKind::D)]
        operator: OperatorKind,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Report { .. } => "report",
            Command::Betti { .. } => "betti",
            Command::Curvature { .. } => "curvature",
            Command::Ph { .. } => "ph",
            Command::Lefschetz { .. } => "lefschetz",
            Command::Heat { .. } => "heat",
            Command::Lax { .. } => "lax",
            Command::Refine { .. } => "refine",
            Command::Skeleton { .. } => "skeleton",
            Command::Export { .. } => "export",
        }
    }

    pub fn input(&self) -> &Input {
        match self {
            Command::Report { input }
            | Command::Betti { input, .. }
            | Command::Curvature { input, .. }
            | Command::Ph { input, .. }
            | Command::Lefschetz { input, .. }
            | Command::Heat { input, .. }
            | Command::Lax { input, .. }
            | Command::Refine { input, .. }
            | Command::Skeleton { input, .. }
            | Command::Export { input, .. } => input,
        }
    }
}
