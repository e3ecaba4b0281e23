//! The non-grid subcommands (`prior`, `complexity`, `bounds`, `train`,
//! `tilt`) plus the single-run machinery that `sweep` reuses.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::boolfn::{BooleanFunction, Family, FamilySpec, SubsetRule};
use crate::complexity::{complexity_report, min_dnf, Objective};
use crate::dnf::Sign;
use crate::prior::bounds::{
    bound_1entropy, bound_constant, bound_entropy_upper, bound_ksparse, bound_parity,
    optimal_width, p_clause_covers, BoundParams,
};
use crate::prior::{exact_prior, rank_table, sample_prior};
use crate::training::{
    accuracy, greedy_train, mcmc_train, oracle_train, posterior_tilt_check, Dataset, GreedyConfig,
    McmcConfig, TrainTrace,
};

use super::{atomic_write, invalid, metadata_value, write_json, write_metadata, CliError};

// ---------------------------------------------------------------------------
// Shared argument vocabulary
// ---------------------------------------------------------------------------

/// Target-function family selector.
#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// XOR over the first `k` variables (`--k`).
    Parity,
    /// Random support with exactly `t` true outputs (`--t`, `--family-seed`).
    Entropy,
    /// Constant function (`--value`).
    Constant,
    /// A short 0/1 pattern tiled across the truth table (`--pattern`).
    Repeat,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::Parity => "parity",
            FamilyKind::Entropy => "entropy",
            FamilyKind::Constant => "constant",
            FamilyKind::Repeat => "repeat",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Training algorithm selector.
#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgoKind {
    /// Metropolis-Hastings chain on the tempered, norm-decayed posterior.
    Mcmc,
    /// Greedy descent with randomized min-norm tie-breaking.
    Greedy,
    /// Exact minimum-literal interpolation oracle.
    Oracle,
}

impl AlgoKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgoKind::Mcmc => "mcmc",
            AlgoKind::Greedy => "greedy",
            AlgoKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for AlgoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the `m` training inputs are chosen from the `2^n` truth-table rows.
#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitKind {
    /// A seeded uniform draw without replacement.
    Random,
    /// The first `m` rows in index order.
    First,
}

/// Flags describing a target function drawn from a named family.
#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct FamilyArgs {
    /// Target-function family.
    #[arg(long, value_enum, default_value_t = FamilyKind::Parity)]
    pub family: FamilyKind,
    /// Parity order: XOR over variables x1..xk (family = parity).
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of true outputs (family = entropy).
    #[arg(long)]
    pub t: Option<u64>,
    /// Constant output value (family = constant).
    #[arg(long)]
    pub value: Option<bool>,
    /// Pattern of 0/1 characters to tile (family = repeat).
    #[arg(long)]
    pub pattern: Option<String>,
    /// Seed for the entropy family's random support.
    #[arg(long, default_value_t = 0)]
    pub family_seed: u64,
}

impl FamilyArgs {
    /// Assemble the reproducible family description, checking that the
    /// family's required parameter was given.
    pub fn spec(&self, n: usize) -> Result<FamilySpec, CliError> {
        let family = match self.family {
            FamilyKind::Parity => Family::Parity {
                k: self
                    .k
                    .ok_or_else(|| invalid("family `parity` requires --k"))?,
                subset: SubsetRule::FIRST,
            },
            FamilyKind::Entropy => Family::Entropy {
                t: self
                    .t
                    .ok_or_else(|| invalid("family `entropy` requires --t"))?,
            },
            FamilyKind::Constant => Family::Constant {
                value: self
                    .value
                    .ok_or_else(|| invalid("family `constant` requires --value"))?,
            },
            FamilyKind::Repeat => Family::Repeat {
                pattern: self
                    .pattern
                    .clone()
                    .ok_or_else(|| invalid("family `repeat` requires --pattern"))?,
            },
        };
        Ok(FamilySpec {
            n,
            family,
            seed: self.family_seed,
        })
    }

    /// The family's scalar grid coordinate (parity `k` or entropy `t`).
    pub fn coordinate(&self) -> Option<u64> {
        match self.family {
            FamilyKind::Parity => self.k.map(|k| k as u64),
            FamilyKind::Entropy => self.t,
            _ => None,
        }
    }

    /// Whether any family-specific parameter was supplied at all.
    pub fn is_specified(&self) -> bool {
        self.k.is_some() || self.t.is_some() || self.value.is_some() || self.pattern.is_some()
    }
}

// ---------------------------------------------------------------------------
// prior
// ---------------------------------------------------------------------------

/// Estimate how often uniformly drawn networks compute each function and
/// rank the observed functions by frequency.
#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct PriorArgs {
    /// Input dimension.
    #[arg(long)]
    pub n: usize,
    /// Hidden-width multiplier: width = alpha_w * 2^(n-1).
    #[arg(long, default_value_t = 1)]
    pub alpha_w: usize,
    /// Enumerate every parameter state instead of sampling (small n only).
    #[arg(long, default_value_t = false)]
    pub exact: bool,
    /// Monte Carlo draw count; accepts scientific notation such as 1e8.
    #[arg(long, default_value = "1000000", value_parser = parse_count)]
    pub draws: u64,
    /// Sampling seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep only the most frequent functions in the table.
    #[arg(long)]
    pub top: Option<usize>,
    /// Output directory, or a path ending in .csv for a bare table plus a
    /// sibling metadata file.
    #[arg(long, default_value = "out/prior")]
    pub out: PathBuf,
    /// Worker threads (capped by BOOLBIAS_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
}

/// A whole number, optionally in scientific notation (`250000` or `2.5e5`).
fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() && v >= 1.0 && v <= u64::MAX as f64 && v.fract() == 0.0 {
        Ok(v as u64)
    } else {
        Err(format!("{s:?} is not a whole positive count"))
    }
}

/// One row of the ranked frequency table (column order is the file schema).
#[derive(Serialize)]
struct PriorRow {
    function_hex: String,
    count: u64,
    p_hat: f64,
    k_dnf: u32,
    k_theta: u32,
    k_clause: u32,
    k_lz: f64,
    rank: usize,
    zipf_ref: f64,
}

pub(crate) fn run_prior(args: &PriorArgs) -> Result<(), CliError> {
    let est = if args.exact {
        exact_prior(args.n, args.alpha_w)?
    } else {
        sample_prior(args.n, args.alpha_w, args.draws, args.seed)?
    };
    let entries = rank_table(&est, args.top)?;
    let rows: Vec<PriorRow> = entries
        .par_iter()
        .map(|e| -> crate::error::Result<PriorRow> {
            let report = complexity_report(&e.function)?;
            Ok(PriorRow {
                function_hex: report.function_hex,
                count: e.count,
                p_hat: e.p_hat,
                k_dnf: report.k_dnf,
                k_theta: report.k_theta,
                k_clause: report.k_clause,
                k_lz: report.k_lz,
                rank: e.rank,
                zipf_ref: e.zipf_reference,
            })
        })
        .collect::<crate::error::Result<_>>()?;

    let mut wtr = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        wtr.serialize(row)
            .map_err(|e| CliError::Io(format!("encoding frequency table: {e}")))?;
    }
    let csv_bytes = wtr
        .into_inner()
        .map_err(|e| CliError::Io(format!("encoding frequency table: {e}")))?;

    let results = json!({
        "exact": est.is_exact(),
        "draws": est.draws(),
        "observed_functions": est.observed_count(),
        "unobserved_functions": est.unobserved_count().map(|u| u.to_string()),
        "rows": rows.len(),
    });
    if args.out.extension().is_some_and(|e| e == "csv") {
        atomic_write(&args.out, &csv_bytes)?;
        write_json(
            &args.out.with_extension("metadata.json"),
            &metadata_value("prior", args, results),
        )
    } else {
        atomic_write(&args.out.join("prior.csv"), &csv_bytes)?;
        write_metadata(&args.out, "prior", args, results)
    }
}

// ---------------------------------------------------------------------------
// complexity
// ---------------------------------------------------------------------------

/// Compute every complexity measure of one function, plus its minimal
/// formula.
#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ComplexityArgs {
    /// Truth table as a 0/1 string (row index 0 first).
    #[arg(long = "fn", value_name = "BITS")]
    #[serde(rename = "fn")]
    pub function: Option<String>,
    /// Truth table in hexadecimal (requires --n).
    #[arg(long)]
    pub hex: Option<String>,
    /// Input dimension (needed by --hex and by family targets).
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// Write complexity.json into this directory instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (capped by BOOLBIAS_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
}

impl ComplexityArgs {
    fn resolve_function(&self) -> Result<BooleanFunction, CliError> {
        if let Some(bits) = &self.function {
            return Ok(bits.parse::<BooleanFunction>()?);
        }
        if let Some(hex) = &self.hex {
            let n = self.n.ok_or_else(|| invalid("--hex requires --n"))?;
            return Ok(BooleanFunction::from_hex(n, hex)?);
        }
        if self.family.is_specified() {
            let n = self
                .n
                .ok_or_else(|| invalid("a family target requires --n"))?;
            return Ok(self.family.spec(n)?.generate()?);
        }
        Err(invalid(
            "provide a function via --fn, --hex, or family flags (--k/--t/--value/--pattern)",
        ))
    }
}

pub(crate) fn run_complexity(args: &ComplexityArgs) -> Result<(), CliError> {
    let f = args.resolve_function()?;
    let report = complexity_report(&f)?;
    let minimal = min_dnf(
        &f,
        &BooleanFunction::constant(f.n(), false)?,
        Objective::Literals,
        true,
    )?;
    let mut doc = metadata_value("complexity", args, Value::Null);
    let fields = doc.as_object_mut().expect("metadata is an object");
    fields.insert(
        "report".into(),
        serde_json::to_value(&report).expect("report serializes"),
    );
    fields.insert("minimal_dnf".into(), Value::String(minimal.dnf.to_string()));
    fields.insert("minimal_dnf_literals".into(), json!(minimal.cost));
    match &args.out {
        Some(dir) => write_json(&dir.join("complexity.json"), &doc),
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("doc serializes")
            );
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

/// Bound family selector for the `bounds` command.
#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundFamily {
    /// Lower bounds on the two constant functions.
    Constant,
    /// Two-sided bounds on single-true-output functions.
    OneEntropy,
    /// Two-sided bounds on k-variable parities.
    Parity,
    /// Two-sided bounds on minimal k-literal single-clause functions.
    Ksparse,
    /// Upper bounds on functions with exactly t true outputs.
    EntropyUpper,
}

/// Evaluate the closed-form probability bounds for an `(n, alpha_w)`
/// ensemble.
#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct BoundsArgs {
    /// Input dimension.
    #[arg(long)]
    pub n: usize,
    /// Hidden-width multiplier: width = alpha_w * 2^(n-1).
    #[arg(long, default_value_t = 1)]
    pub alpha_w: usize,
    /// Restrict the output to one bound family (all by default).
    #[arg(long, value_enum)]
    pub family: Option<BoundFamily>,
    /// Parity/sparsity order (default: every k from 1 to n).
    #[arg(long)]
    pub k: Option<usize>,
    /// True-output count for entropy-upper (default: a small grid).
    #[arg(long)]
    pub t: Option<u64>,
    /// Write bounds.json and curves.csv into this directory instead of
    /// printing JSON to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (capped by BOOLBIAS_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
}

/// One row of the bound-curve table; absent columns stay empty.
#[derive(Serialize)]
struct CurveRow {
    family: &'static str,
    k: Option<u64>,
    t: Option<u64>,
    lower_ln: Option<f64>,
    lower: Option<f64>,
    upper_ln: Option<f64>,
    upper: Option<f64>,
}

/// Default `t` grid for the entropy upper bound: everything at small `n`,
/// powers of two plus the endpoint for larger `n`.
fn default_t_grid(n: usize) -> Vec<u64> {
    let inputs = 1u64 << n;
    if n <= 6 {
        (1..inputs).collect()
    } else {
        let mut ts: Vec<u64> = (0..n as u32).map(|e| 1u64 << e).collect();
        ts.push(inputs - 1);
        ts
    }
}

pub(crate) fn run_bounds(args: &BoundsArgs) -> Result<(), CliError> {
    let params = BoundParams::new(args.n, args.alpha_w)?;
    let include = |fam: BoundFamily| args.family.is_none() || args.family == Some(fam);
    let ks: Vec<usize> = match args.k {
        Some(k) => vec![k],
        None => (1..=args.n).collect(),
    };
    let ts = match args.t {
        Some(t) => vec![t],
        None => default_t_grid(args.n),
    };

    let mut doc = metadata_value("bounds", args, Value::Null);
    let fields = doc.as_object_mut().expect("metadata is an object");
    let mut curves: Vec<CurveRow> = Vec::new();

    let coverage = p_clause_covers(args.n)?;
    fields.insert(
        "clause_coverage".into(),
        json!({
            "per_clause": serde_json::to_value(coverage).expect("coverage serializes"),
            "per_input": coverage.input_true_probability(args.alpha_w),
        }),
    );
    fields.insert("optimal_width".into(), json!(optimal_width(args.n)?));

    if include(BoundFamily::Constant) {
        let b = bound_constant(&params);
        fields.insert(
            "constant".into(),
            serde_json::to_value(b).expect("bounds serialize"),
        );
        curves.push(CurveRow {
            family: "constant",
            k: None,
            t: None,
            lower_ln: Some(b.lower.ln()),
            lower: Some(b.lower),
            upper_ln: None,
            upper: None,
        });
    }
    if include(BoundFamily::OneEntropy) {
        let b = bound_1entropy(&params);
        fields.insert(
            "one_entropy".into(),
            serde_json::to_value(b).expect("bounds serialize"),
        );
        curves.push(CurveRow {
            family: "one-entropy",
            k: None,
            t: Some(1),
            lower_ln: Some(b.lower.ln),
            lower: Some(b.lower.linear),
            upper_ln: Some(b.upper.ln),
            upper: Some(b.upper.linear),
        });
    }
    if include(BoundFamily::Parity) {
        let mut rows = Vec::new();
        for &k in &ks {
            let b = bound_parity(&params, k)?;
            let mut row = serde_json::to_value(b).expect("bounds serialize");
            row.as_object_mut()
                .expect("bound rows are objects")
                .insert("k".into(), json!(k));
            rows.push(row);
            curves.push(CurveRow {
                family: "parity",
                k: Some(k as u64),
                t: None,
                lower_ln: Some(b.lower.ln),
                lower: Some(b.lower.linear),
                upper_ln: Some(b.upper.ln),
                upper: Some(b.upper.linear),
            });
        }
        fields.insert("parity".into(), Value::Array(rows));
    }
    if include(BoundFamily::Ksparse) {
        let mut rows = Vec::new();
        for &k in &ks {
            let b = bound_ksparse(&params, k)?;
            let mut row = serde_json::to_value(b).expect("bounds serialize");
            row.as_object_mut()
                .expect("bound rows are objects")
                .insert("k".into(), json!(k));
            rows.push(row);
            curves.push(CurveRow {
                family: "ksparse",
                k: Some(k as u64),
                t: None,
                lower_ln: Some(b.lower.ln),
                lower: Some(b.lower.linear),
                upper_ln: Some(b.upper.ln),
                upper: Some(b.upper.linear),
            });
        }
        fields.insert("ksparse".into(), Value::Array(rows));
    }
    if include(BoundFamily::EntropyUpper) {
        let mut rows = Vec::new();
        for &t in &ts {
            let b = bound_entropy_upper(&params, t)?;
            let mut row = serde_json::to_value(b).expect("bounds serialize");
            row.as_object_mut()
                .expect("bound rows are objects")
                .insert("t".into(), json!(t));
            rows.push(row);
            curves.push(CurveRow {
                family: "entropy-upper",
                k: None,
                t: Some(t),
                lower_ln: None,
                lower: None,
                upper_ln: Some(b.max.ln),
                upper: Some(b.max.linear),
            });
        }
        fields.insert("entropy_upper".into(), Value::Array(rows));
    }

    match &args.out {
        Some(dir) => {
            write_json(&dir.join("bounds.json"), &doc)?;
            let mut wtr = csv::Writer::from_writer(Vec::new());
            for row in &curves {
                wtr.serialize(row)
                    .map_err(|e| CliError::Io(format!("encoding curves: {e}")))?;
            }
            let bytes = wtr
                .into_inner()
                .map_err(|e| CliError::Io(format!("encoding curves: {e}")))?;
            atomic_write(&dir.join("curves.csv"), &bytes)
        }
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("doc serializes")
            );
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Single training runs (shared by `train` and `sweep`)
// ---------------------------------------------------------------------------

/// Everything one training run needs, resolved to concrete values.
pub(crate) struct RunSpec {
    pub algo: AlgoKind,
    pub target: BooleanFunction,
    pub family_label: &'static str,
    /// Scalar grid coordinate of the target (parity k or entropy t).
    pub coordinate: Option<u64>,
    pub m: usize,
    pub split: SplitKind,
    pub alpha_w: usize,
    pub kappa: f64,
    /// Weight-decay coefficient (mcmc).
    pub lambda: f64,
    /// Min-norm tie-break probability (greedy).
    pub p: f64,
    pub steps: u64,
    pub batch: Option<usize>,
    pub include_beta: bool,
    pub keep_current: bool,
    pub early_stop: bool,
    pub snapshots: bool,
    /// Drives both the dataset split and the chain.
    pub seed: u64,
}

/// The flat per-run record written as `summary.json` and re-read when a
/// sweep aggregates its grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct RunSummary {
    pub algo: AlgoKind,
    pub family: String,
    /// Grid coordinate of the target (parity k or entropy t), if any.
    pub k: Option<u64>,
    pub n: usize,
    pub m: usize,
    /// The swept regularization knob: weight decay for mcmc, the min-norm
    /// tie-break probability for greedy, 0 for the oracle.
    pub lambda: f64,
    pub seed: u64,
    /// Recorded steps (0 for the one-shot oracle).
    pub steps: u64,
    pub stopped_early: bool,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub norm_w1: u64,
    pub norm_w2: u64,
    pub norm: u64,
    /// Oracle objective value (its minimal literal count).
    pub cost: Option<u64>,
    /// The learned function's truth table as a bit string.
    pub prediction: String,
}

/// Flattened trace row (the file schema of `trace.csv`).
#[derive(Serialize)]
struct TraceRow {
    step: u64,
    loss: f64,
    train_acc: f64,
    test_acc: f64,
    norm_w1: u32,
    norm_w2: u32,
}

const TRACE_HEADER: [&str; 6] = ["step", "loss", "train_acc", "test_acc", "norm_w1", "norm_w2"];

fn write_trace_csv(path: &Path, trace: &TrainTrace) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(format!("encoding trace: {e}"));
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    wtr.write_record(TRACE_HEADER).map_err(io)?;
    for r in &trace.records {
        wtr.serialize(TraceRow {
            step: r.step,
            loss: r.loss,
            train_acc: r.train_accuracy,
            test_acc: r.test_accuracy,
            norm_w1: r.norm.norm_w1,
            norm_w2: r.norm.norm_w2,
        })
        .map_err(io)?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| CliError::Io(format!("encoding trace: {e}")))?;
    atomic_write(path, &bytes)
}

/// Export each snapshot as a heatmap-ready first-layer grid (CSV of width
/// rows by n signed columns) plus a sidecar JSON with the step, output sign,
/// gate vector, and accuracies.
fn write_snapshots(dir: &Path, trace: &TrainTrace, data: &Dataset) -> Result<(), CliError> {
    for snap in &trace.snapshots {
        let params = &snap.params;
        let n = params.n();
        let mut grid = String::new();
        for row in params.w1().chunks(n) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            grid.push_str(&cells.join(","));
            grid.push('\n');
        }
        atomic_write(
            &dir.join(format!("step{:09}.csv", snap.step)),
            grid.as_bytes(),
        )?;
        let test_accuracy = accuracy(&params.truth_table(), data.target(), data.test())?;
        let sidecar = json!({
            "step": snap.step,
            "beta": match params.beta() {
                Sign::Plus => "+",
                Sign::Minus => "-",
            },
            "w2": params.w2().iter().map(|&g| g as u8).collect::<Vec<u8>>(),
            "train_accuracy": snap.train_accuracy,
            "test_accuracy": test_accuracy,
        });
        write_json(&dir.join(format!("step{:09}.json", snap.step)), &sidecar)?;
    }
    Ok(())
}

/// Run one seed into `dir`: `trace.csv`, optional `snapshots/`, and finally
/// `summary.json`, whose presence marks the run complete.
pub(crate) fn execute_run(spec: &RunSpec, dir: &Path) -> Result<RunSummary, CliError> {
    let data = match spec.split {
        SplitKind::Random => Dataset::random(spec.target.clone(), spec.m, spec.seed)?,
        SplitKind::First => Dataset::first(spec.target.clone(), spec.m)?,
    };
    let summary = match spec.algo {
        AlgoKind::Mcmc => {
            let cfg = McmcConfig {
                kappa: spec.kappa,
                lambda: spec.lambda,
                steps: spec.steps,
                batch: spec.batch,
                seed: spec.seed,
                include_beta: spec.include_beta,
                early_stop: spec.early_stop,
                snapshots: spec.snapshots,
            };
            let out = mcmc_train(&data, spec.alpha_w, &cfg)?;
            write_trace_csv(&dir.join("trace.csv"), &out.trace)?;
            if spec.snapshots {
                write_snapshots(&dir.join("snapshots"), &out.trace, &data)?;
            }
            chain_summary(spec, &data, spec.lambda, &out)?
        }
        AlgoKind::Greedy => {
            let cfg = GreedyConfig {
                p: spec.p,
                steps: spec.steps,
                batch: spec.batch,
                seed: spec.seed,
                include_beta: spec.include_beta,
                keep_current: spec.keep_current,
                early_stop: spec.early_stop,
                snapshots: spec.snapshots,
            };
            let out = greedy_train(&data, spec.alpha_w, &cfg)?;
            write_trace_csv(&dir.join("trace.csv"), &out.trace)?;
            if spec.snapshots {
                write_snapshots(&dir.join("snapshots"), &out.trace, &data)?;
            }
            chain_summary(spec, &data, spec.p, &out)?
        }
        AlgoKind::Oracle => {
            let out = oracle_train(&data)?;
            write_trace_csv(&dir.join("trace.csv"), &TrainTrace::default())?;
            RunSummary {
                algo: spec.algo,
                family: spec.family_label.to_string(),
                k: spec.coordinate,
                n: data.n(),
                m: spec.m,
                lambda: 0.0,
                seed: spec.seed,
                steps: 0,
                stopped_early: false,
                train_accuracy: accuracy(&out.prediction, data.target(), data.train())?,
                test_accuracy: accuracy(&out.prediction, data.target(), data.test())?,
                norm_w1: out.cost,
                norm_w2: out.dnf.clauses().len() as u64,
                norm: out.cost + out.dnf.clauses().len() as u64,
                cost: Some(out.cost),
                prediction: out.prediction.to_string(),
            }
        }
    };
    write_json(&dir.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Build the summary for a chain trainer and write its trace artifacts.
fn chain_summary(
    spec: &RunSpec,
    data: &Dataset,
    knob: f64,
    out: &crate::training::TrainOutcome,
) -> Result<RunSummary, CliError> {
    let last = out
        .trace
        .last()
        .expect("positive step budgets leave at least one record");
    Ok(RunSummary {
        algo: spec.algo,
        family: spec.family_label.to_string(),
        k: spec.coordinate,
        n: data.n(),
        m: spec.m,
        lambda: knob,
        seed: spec.seed,
        steps: out.trace.records.len() as u64,
        stopped_early: out.stopped_early,
        train_accuracy: last.train_accuracy,
        test_accuracy: last.test_accuracy,
        norm_w1: last.norm.norm_w1 as u64,
        norm_w2: last.norm.norm_w2 as u64,
        norm: last.norm.total() as u64,
        cost: None,
        prediction: out.prediction.to_string(),
    })
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

/// Train networks on a family target over one or more seeds; each seed
/// drives both the train/test split and the chain.
#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct TrainArgs {
    /// Training algorithm.
    #[arg(long, value_enum, default_value_t = AlgoKind::Mcmc)]
    pub algo: AlgoKind,
    /// Input dimension.
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// Training-set size (between 1 and 2^n - 1).
    #[arg(long)]
    pub m: usize,
    /// How the m training inputs are chosen.
    #[arg(long, value_enum, default_value_t = SplitKind::Random)]
    pub split: SplitKind,
    /// Hidden-width multiplier: width = alpha_w * 2^(n-1).
    #[arg(long, default_value_t = 2)]
    pub alpha_w: usize,
    /// Inverse temperature on the batch loss (mcmc).
    #[arg(long, default_value_t = 1000.0)]
    pub kappa: f64,
    /// Weight-decay coefficient on the total norm (mcmc).
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Min-norm tie-break probability (greedy).
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    /// Step budget per run.
    #[arg(long, default_value_t = 200_000)]
    pub steps: u64,
    /// Minibatch size per step (full training set when absent).
    #[arg(long)]
    pub batch: Option<usize>,
    /// Let moves flip the output sign.
    #[arg(long, default_value_t = false)]
    pub include_beta: bool,
    /// Greedy: keep the current state in the candidate set, so moving
    /// requires a strict improvement.
    #[arg(long, default_value_t = false)]
    pub keep_current: bool,
    /// Stop a run once training error holds at zero for a sustained plateau.
    #[arg(long, default_value_t = false)]
    pub early_stop: bool,
    /// Export first-layer snapshots at new best training accuracies.
    #[arg(long, default_value_t = false)]
    pub snapshots: bool,
    /// Number of seeded runs.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    /// First seed; runs use first_seed, first_seed + 1, ...
    #[arg(long, default_value_t = 0)]
    pub first_seed: u64,
    /// Output directory (per-seed subdirectories when --seeds > 1).
    #[arg(long, default_value = "out/train")]
    pub out: PathBuf,
    /// Worker threads (capped by BOOLBIAS_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
}

impl TrainArgs {
    fn run_spec(&self, target: &BooleanFunction, seed: u64) -> RunSpec {
        RunSpec {
            algo: self.algo,
            target: target.clone(),
            family_label: self.family.family.as_str(),
            coordinate: self.family.coordinate(),
            m: self.m,
            split: self.split,
            alpha_w: self.alpha_w,
            kappa: self.kappa,
            lambda: self.lambda,
            p: self.p,
            steps: self.steps,
            batch: self.batch,
            include_beta: self.include_beta,
            keep_current: self.keep_current,
            early_stop: self.early_stop,
            snapshots: self.snapshots,
            seed,
        }
    }
}

pub(crate) fn run_train(args: &TrainArgs) -> Result<(), CliError> {
    if args.seeds == 0 {
        return Err(invalid("--seeds must be at least 1"));
    }
    let target = args.family.spec(args.n)?.generate()?;
    for seed in args.first_seed..args.first_seed + args.seeds {
        let dir = if args.seeds == 1 {
            args.out.clone()
        } else {
            args.out.join(format!("seed{seed}"))
        };
        let spec = args.run_spec(&target, seed);
        execute_run(&spec, &dir)?;
    }
    write_metadata(
        &args.out,
        "train",
        args,
        json!({ "runs": args.seeds, "target": target.to_string() }),
    )
}

// ---------------------------------------------------------------------------
// tilt
// ---------------------------------------------------------------------------

/// Exhaustively compare the weight-decay-tilted posterior against the flat
/// posterior over every interpolating parameter state.
#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct TiltArgs {
    /// Input dimension (the enumeration is exponential; keep it small).
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// Training-set size (between 1 and 2^n - 1).
    #[arg(long)]
    pub m: usize,
    /// Dataset split seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Hidden-width multiplier: width = alpha_w * 2^(n-1).
    #[arg(long, default_value_t = 1)]
    pub alpha_w: usize,
    /// Weight-decay coefficient defining the tilt.
    #[arg(long, default_value_t = 0.1)]
    pub lambda: f64,
    /// Output directory.
    #[arg(long, default_value = "out/tilt")]
    pub out: PathBuf,
    /// Worker threads (capped by BOOLBIAS_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
}

pub(crate) fn run_tilt(args: &TiltArgs) -> Result<(), CliError> {
    let target = args.family.spec(args.n)?.generate()?;
    let data = Dataset::random(target, args.m, args.seed)?;
    let report = posterior_tilt_check(&data, args.alpha_w, args.lambda)?;

    let mut doc = metadata_value("tilt", args, Value::Null);
    doc.as_object_mut().expect("metadata is an object").insert(
        "report".into(),
        serde_json::to_value(&report).expect("report serializes"),
    );
    write_json(&args.out.join("tilt.json"), &doc)?;

    let mut wtr = csv::Writer::from_writer(Vec::new());
    for entry in &report.entries {
        wtr.serialize(entry)
            .map_err(|e| CliError::Io(format!("encoding tilt table: {e}")))?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| CliError::Io(format!("encoding tilt table: {e}")))?;
    atomic_write(&args.out.join("tilt.csv"), &bytes)?;

    write_metadata(
        &args.out,
        "tilt",
        args,
        json!({
            "states": report.states,
            "interpolating_states": report.interpolating_states,
            "interpolating_functions": report.entries.len(),
            "correlation": report.correlation,
        }),
    )
}
