//! Command-line front end: turns experiment configurations into CSV/JSON
//! artifacts.
//!
//! Six subcommands map onto the library modules: `prior` (exact or sampled
//! function-frequency tables), `complexity` (one function's measures and its
//! minimal formula), `bounds` (closed-form probability bounds), `train` (one
//! or more seeded training runs), `sweep` (a restartable grid of training
//! runs plus an aggregate table), and `tilt` (the exhaustive weight-decay
//! posterior check).
//!
//! Conventions shared by every command:
//!
//! - `--config file.json` loads a JSON object whose entries override the
//!   command-line flags; unknown keys are rejected before any work starts.
//! - Artifacts are written atomically (temp file + rename) and embed the
//!   merged configuration, the seed, and the crate version — either inline
//!   (single-file JSON artifacts) or via `metadata.json` next to the data
//!   files. Nothing embeds a timestamp, so rerunning a configuration
//!   reproduces every data file byte for byte.
//! - `--threads` bounds the worker pool; the `BOOLBIAS_THREADS` environment
//!   variable caps it.
//! - Exit codes: `0` success, `2` invalid configuration, `3` computation
//!   budget exceeded, `4` I/O failure (any nonzero code can also surface from
//!   a failed run inside a sweep).

mod commands;
mod sweep;

pub use commands::{
    AlgoKind, BoundFamily, BoundsArgs, ComplexityArgs, FamilyArgs, FamilyKind, PriorArgs,
    SplitKind, TiltArgs, TrainArgs,
};
pub use sweep::{FloatList, SweepArgs, UintList};

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::Error;

/// A command failure carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Rejected flags or config file (exit 2).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// A documented exact-computation budget was exceeded (exit 3).
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    /// Filesystem failure while reading or writing artifacts (exit 4).
    #[error("i/o failure: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidConfig(_) => 2,
            CliError::BudgetExceeded(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(msg) => CliError::BudgetExceeded(msg),
            Error::Io(io) => CliError::Io(io.to_string()),
            other => CliError::InvalidConfig(other.to_string()),
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> CliError {
    CliError::InvalidConfig(msg.into())
}

/// Boolean-function simplicity-bias toolkit.
#[derive(Debug, Parser)]
#[command(name = "boolbias", version, about)]
pub struct Cli {
    /// JSON file whose entries override the command-line flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate how often random networks compute each function.
    Prior(PriorArgs),
    /// Complexity measures and the minimal formula of one function.
    Complexity(ComplexityArgs),
    /// Closed-form bounds on function-family probabilities.
    Bounds(BoundsArgs),
    /// Train networks on a target function (one or more seeds).
    Train(TrainArgs),
    /// Run a training grid with restart support and aggregate it.
    Sweep(SweepArgs),
    /// Exhaustive weight-decay posterior tilt check.
    Tilt(TiltArgs),
}

/// Parse the process arguments, run, and return the exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Execute one parsed invocation.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let config = cli.config.as_deref();
    match cli.command {
        Command::Prior(args) => {
            let args = merged_args(args, config)?;
            init_threads(args.threads)?;
            commands::run_prior(&args)
        }
        Command::Complexity(args) => {
            let args = merged_args(args, config)?;
            init_threads(args.threads)?;
            commands::run_complexity(&args)
        }
        Command::Bounds(args) => {
            let args = merged_args(args, config)?;
            init_threads(args.threads)?;
            commands::run_bounds(&args)
        }
        Command::Train(args) => {
            let args = merged_args(args, config)?;
            init_threads(args.threads)?;
            commands::run_train(&args)
        }
        Command::Sweep(args) => {
            let args = merged_args(args, config)?;
            init_threads(args.threads)?;
            sweep::run_sweep(&args)
        }
        Command::Tilt(args) => {
            let args = merged_args(args, config)?;
            init_threads(args.threads)?;
            commands::run_tilt(&args)
        }
    }
}

/// Overlay a JSON config file onto the parsed flags. Every key must name a
/// field of the command (the flag structs double as the config schema); the
/// merged result is validated by deserializing back into the struct.
fn merged_args<T: Serialize + DeserializeOwned>(
    args: T,
    config: Option<&Path>,
) -> Result<T, CliError> {
    let Some(path) = config else {
        return Ok(args);
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    let overrides: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| invalid(format!("{} is not valid JSON: {e}", path.display())))?;
    let serde_json::Value::Object(overrides) = overrides else {
        return Err(invalid(format!(
            "{} must hold a JSON object of parameter overrides",
            path.display()
        )));
    };
    let mut base = serde_json::to_value(&args).expect("flag structs serialize");
    let fields = base.as_object_mut().expect("flag structs are objects");
    for (key, value) in overrides {
        if !fields.contains_key(&key) {
            return Err(invalid(format!(
                "unknown config key {key:?} for this command"
            )));
        }
        fields.insert(key, value);
    }
    serde_json::from_value(base).map_err(|e| invalid(format!("config rejected: {e}")))
}

/// Size the global worker pool: the `--threads` flag bounded above by the
/// `BOOLBIAS_THREADS` environment variable (absent both, the library picks).
fn init_threads(requested: Option<usize>) -> Result<(), CliError> {
    let cap = match std::env::var("BOOLBIAS_THREADS") {
        Ok(v) => Some(v.parse::<usize>().ok().filter(|&t| t > 0).ok_or_else(|| {
            invalid(format!(
                "BOOLBIAS_THREADS must be a positive integer, got {v:?}"
            ))
        })?),
        Err(_) => None,
    };
    if requested == Some(0) {
        return Err(invalid("--threads must be at least 1"));
    }
    let threads = match (requested, cap) {
        (Some(r), Some(c)) => r.min(c),
        (Some(r), None) => r,
        (None, Some(c)) => c,
        (None, None) => 0, // library default
    };
    // A second initialization (same process) keeps the first pool; that only
    // affects in-process callers, never the one-shot binary.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

/// Write `bytes` to `path` via a same-directory temp file and a rename, so
/// readers never observe a half-written artifact.
pub(crate) fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("writing {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(io)?;
    let mut tmp_name = path.as_os_str().to_owned();
    tmp_name.push(".tmp");
    let tmp = PathBuf::from(tmp_name);
    fs::write(&tmp, bytes).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)?;
    Ok(())
}

/// Serialize `value` as pretty JSON (trailing newline) and write it atomically.
pub(crate) fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| CliError::Io(format!("encoding {}: {e}", path.display())))?;
    bytes.push(b'\n');
    atomic_write(path, &bytes)
}

/// The header every artifact embeds: crate version, command name, and the
/// merged configuration (which carries the seed).
pub(crate) fn metadata_value(
    command: &str,
    config: &impl Serialize,
    results: serde_json::Value,
) -> serde_json::Value {
    let mut doc = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
    });
    if !results.is_null() {
        doc.as_object_mut()
            .expect("doc is an object")
            .insert("results".into(), results);
    }
    doc
}

pub(crate) fn write_metadata(
    dir: &Path,
    command: &str,
    config: &impl Serialize,
    results: serde_json::Value,
) -> Result<(), CliError> {
    write_json(&dir.join("metadata.json"), &metadata_value(command, config, results))
}
