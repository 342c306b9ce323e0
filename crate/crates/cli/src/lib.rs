//! The `dindex` command line tool.
//!
//! Every command reads one complex, computes one family of quantities and
//! writes a JSON [`Report`]. Exit status: 0 on success, 2 for unreadable or
//! invalid input, 3 for a violated mathematical contract, 4 for a refused
//! resource-heavy request, 1 for anything else.

pub mod args;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use dindex::complex::generate::{generate, Family};
use dindex::io::{parse_edges, parse_facets, Labels};
use dindex::Complex;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use args::{Cli, Command};

pub const SCHEMA: &str = "dindex.report/1";
pub const OUT_DIR_VAR: &str = "DINDEX_OUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] dindex::Error),
    #[error("{path}: {source}")]
    InFile { path: String, source: dindex::Error },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let core = match self {
            CliError::Core(e) | CliError::InFile { source: e, .. } => e,
            CliError::Io { .. } => return 1,
        };
        match core {
            dindex::Error::Parse { .. } | dindex::Error::InvalidInput(_) => 2,
            dindex::Error::ContractViolation(_) => 3,
            dindex::Error::ResourceLimit(_) => 4,
            dindex::Error::Divergence { .. } => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool_version: &'static str,
    /// SHA-256 of the input file, or of the generator description.
    pub input_digest: String,
    pub command: &'static str,
    pub results: serde_json::Value,
    pub timing_ms: f64,
}

/// A loaded complex with its vertex labels.
pub struct Loaded {
    pub complex: Complex,
    pub labels: Labels,
    pub digest: String,
}

pub(crate) fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub(crate) fn in_file<T>(path: &Path, r: dindex::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::InFile {
        path: path.display().to_string(),
        source,
    })
}

fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn load(input: &args::Input) -> CliResult<Loaded> {
    if let Some(spec) = &input.generate {
        let (family, n) = match spec.split_once(':') {
            Some((f, n)) => (f, n.parse().map_err(|_| dindex::Error::InvalidInput(format!("bad size in {spec:?}")))?),
            None => (spec.as_str(), 0),
        };
        let family: Family = family.parse()?;
        let complex = generate(family, n, input.seed)?;
        let labels = Labels::numeric(complex.base().last().map_or(0, |v| v + 1));
        let digest = digest(format!("generate {family}:{n} seed {}", input.seed).as_bytes());
        return Ok(Loaded { complex, labels, digest });
    }
    let path = input.input.as_deref().expect("clap requires --input or --generate");
    let text = read(path)?;
    let (complex, labels) = match input.format {
        args::Format::Facets => in_file(path, parse_facets(&text))?,
        args::Format::Edges => {
            let (g, labels) = in_file(path, parse_edges(&text))?;
            (g.whitney_complex(), labels)
        }
    };
    if complex.is_empty() {
        return Err(CliError::InFile {
            path: path.display().to_string(),
            source: dindex::Error::InvalidInput("the complex is empty".into()),
        });
    }
    Ok(Loaded {
        complex,
        labels,
        digest: digest(text.as_bytes()),
    })
}

pub fn run(command: &Command) -> CliResult<Report> {
    let start = Instant::now();
    let loaded = load(command.input())?;
    let results = commands::dispatch(command, &loaded)?;
    Ok(Report {
        schema: SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        input_digest: loaded.digest,
        command: command.name(),
        results,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn destination(command: &Command) -> Option<PathBuf> {
    if let Some(p) = &command.input().out {
        return Some(p.clone());
    }
    let dir = std::env::var_os(OUT_DIR_VAR)?;
    Some(Path::new(&dir).join(format!("{}.json", command.name())))
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = run(&cli.command).and_then(|report| {
        let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
        json.push('\n');
        match destination(&cli.command) {
            Some(path) => write_atomic(&path, json.as_bytes()),
            None => {
                print!("{json}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("dindex: {e}");
            e.exit_code()
        }
    }
}
