//! The `sweep` subcommand: a restartable grid of training runs.
//!
//! Every `(target, m, lambda, seed)` combination becomes one cell directory
//! under `out/cells/`. A cell's `summary.json` is written last, so its
//! presence marks the cell complete; rerunning the same sweep skips complete
//! cells and fills in the rest. After the grid, the per-cell summaries are
//! aggregated into `out/summary.csv` (one row per cell group, seeds
//! collapsed into means and sample standard deviations). Failed cells are
//! reported, the rest of the grid still runs, and the command exits with the
//! first failure's code.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::boolfn::{BooleanFunction, Family, FamilySpec, SubsetRule};

use super::commands::{execute_run, AlgoKind, FamilyKind, RunSpec, RunSummary, SplitKind};
use super::{atomic_write, invalid, write_metadata, CliError};

/// Unsigned integers as a comma list (`16,32,64`) or an inclusive range
/// (`1..7`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UintList(pub Vec<u64>);

impl FromStr for UintList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some((lo, hi)) = s.split_once("..") {
            let lo: u64 = lo
                .trim()
                .parse()
                .map_err(|_| format!("bad range start {:?}", lo.trim()))?;
            let hi: u64 = hi
                .trim()
                .parse()
                .map_err(|_| format!("bad range end {:?}", hi.trim()))?;
            if lo > hi {
                return Err(format!("range {s:?} is empty"));
            }
            return Ok(UintList((lo..=hi).collect()));
        }
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<u64>()
                    .map_err(|_| format!("bad integer {:?}", part.trim()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(UintList)
    }
}

/// Non-negative floats as a comma list (`0,0.01,0.1`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FloatList(pub Vec<f64>);

impl FromStr for FloatList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|part| {
                let v: f64 = part
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad number {:?}", part.trim()))?;
                if v.is_finite() && v >= 0.0 {
                    Ok(v)
                } else {
                    Err(format!("{v} is not a valid grid value"))
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FloatList)
    }
}

/// Run a grid of seeded training runs with restart support, then aggregate.
#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    /// Training algorithm (mcmc or greedy; run the oracle via `train`).
    #[arg(long, value_enum, default_value_t = AlgoKind::Mcmc)]
    pub algo: AlgoKind,
    /// Input dimension.
    #[arg(long)]
    pub n: usize,
    /// Target family; parity sweeps the --k grid, entropy the --t grid.
    #[arg(long, value_enum, default_value_t = FamilyKind::Parity)]
    pub family: FamilyKind,
    /// Parity orders, e.g. `1..7` or `1,3,5` (family = parity).
    #[arg(long)]
    pub k: Option<UintList>,
    /// True-output counts (family = entropy).
    #[arg(long)]
    pub t: Option<UintList>,
    /// Constant output value (family = constant).
    #[arg(long)]
    pub value: Option<bool>,
    /// Pattern of 0/1 characters to tile (family = repeat).
    #[arg(long)]
    pub pattern: Option<String>,
    /// Seed for the entropy family's random support.
    #[arg(long, default_value_t = 0)]
    pub family_seed: u64,
    /// Training-set sizes, e.g. `16,32,64,96`.
    #[arg(long)]
    pub m: UintList,
    /// Regularization grid: weight decay for mcmc, the min-norm tie-break
    /// probability for greedy.
    #[arg(long, default_value = "0")]
    pub lambda: FloatList,
    /// Runs per cell group, seeded 0, 1, ...; each seed drives its run's
    /// data split and chain.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    /// Hidden-width multiplier: width = alpha_w * 2^(n-1).
    #[arg(long, default_value_t = 2)]
    pub alpha_w: usize,
    /// Inverse temperature on the batch loss (mcmc).
    #[arg(long, default_value_t = 1000.0)]
    pub kappa: f64,
    /// Step budget per run.
    #[arg(long, default_value_t = 200_000)]
    pub steps: u64,
    /// Minibatch size per step (full training set when absent).
    #[arg(long)]
    pub batch: Option<usize>,
    /// Let moves flip the output sign.
    #[arg(long, default_value_t = false)]
    pub include_beta: bool,
    /// Greedy: require a strict improvement to move.
    #[arg(long, default_value_t = false)]
    pub keep_current: bool,
    /// Stop runs early on a sustained zero-training-error plateau.
    #[arg(long, default_value_t = false)]
    pub early_stop: bool,
    /// Output directory: cells under cells/, aggregate at summary.csv.
    #[arg(long, default_value = "out/sweep")]
    pub out: PathBuf,
    /// Worker threads (capped by BOOLBIAS_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
}

/// One grid point, resolved to its target and directory.
struct Cell {
    coordinate: Option<u64>,
    target: BooleanFunction,
    m: u64,
    lambda: f64,
    seed: u64,
    dir: PathBuf,
}

impl Cell {
    fn name(&self) -> String {
        self.dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default()
    }
}

/// The swept targets: one `(coordinate, function)` pair per grid value.
fn targets(args: &SweepArgs) -> Result<Vec<(Option<u64>, BooleanFunction)>, CliError> {
    let generate = |family: Family| -> Result<BooleanFunction, CliError> {
        Ok(FamilySpec {
            n: args.n,
            family,
            seed: args.family_seed,
        }
        .generate()?)
    };
    match args.family {
        FamilyKind::Parity => {
            let ks = args
                .k
                .as_ref()
                .ok_or_else(|| invalid("a parity sweep requires --k"))?;
            ks.0.iter()
                .map(|&k| {
                    let f = generate(Family::Parity {
                        k: k as usize,
                        subset: SubsetRule::FIRST,
                    })?;
                    Ok((Some(k), f))
                })
                .collect()
        }
        FamilyKind::Entropy => {
            let ts = args
                .t
                .as_ref()
                .ok_or_else(|| invalid("an entropy sweep requires --t"))?;
            ts.0.iter()
                .map(|&t| Ok((Some(t), generate(Family::Entropy { t })?)))
                .collect()
        }
        FamilyKind::Constant => {
            let value = args
                .value
                .ok_or_else(|| invalid("a constant sweep requires --value"))?;
            Ok(vec![(None, generate(Family::Constant { value })?)])
        }
        FamilyKind::Repeat => {
            let pattern = args
                .pattern
                .clone()
                .ok_or_else(|| invalid("a repeat sweep requires --pattern"))?;
            Ok(vec![(None, generate(Family::Repeat { pattern })?)])
        }
    }
}

/// Expand the full grid in row order: target (outer), m, lambda, seed
/// (inner). Seeds being innermost, consecutive chunks of `seeds` cells form
/// the aggregation groups.
fn expand_cells(
    args: &SweepArgs,
    targets: &[(Option<u64>, BooleanFunction)],
) -> Vec<Cell> {
    let cells_dir = args.out.join("cells");
    let mut cells = Vec::new();
    for (coordinate, target) in targets {
        let coord_label = match (args.family, coordinate) {
            (FamilyKind::Parity, Some(k)) => format!("k{k}"),
            (FamilyKind::Entropy, Some(t)) => format!("t{t}"),
            _ => args.family.as_str().to_string(),
        };
        for &m in &args.m.0 {
            for &lambda in &args.lambda.0 {
                for seed in 0..args.seeds {
                    cells.push(Cell {
                        coordinate: *coordinate,
                        target: target.clone(),
                        m,
                        lambda,
                        seed,
                        dir: cells_dir
                            .join(format!("{coord_label}_m{m}_lambda{lambda}_seed{seed}")),
                    });
                }
            }
        }
    }
    cells
}

fn cell_spec(args: &SweepArgs, cell: &Cell) -> RunSpec {
    RunSpec {
        algo: args.algo,
        target: cell.target.clone(),
        family_label: args.family.as_str(),
        coordinate: cell.coordinate,
        m: cell.m as usize,
        split: SplitKind::Random,
        alpha_w: args.alpha_w,
        kappa: args.kappa,
        lambda: if args.algo == AlgoKind::Mcmc {
            cell.lambda
        } else {
            0.0
        },
        p: if args.algo == AlgoKind::Greedy {
            cell.lambda
        } else {
            0.3
        },
        steps: args.steps,
        batch: args.batch,
        include_beta: args.include_beta,
        keep_current: args.keep_current,
        early_stop: args.early_stop,
        snapshots: false,
        seed: cell.seed,
    }
}

/// A cell is complete exactly when its summary parses.
fn read_summary(dir: &Path) -> Option<RunSummary> {
    let bytes = fs::read(dir.join("summary.json")).ok()?;
    serde_json::from_slice(&bytes).ok()
}

/// One aggregate row per cell group (seeds collapsed); statistic columns
/// stay empty until at least one run of the group is complete.
#[derive(Serialize)]
struct AggregateRow {
    family: &'static str,
    k: Option<u64>,
    m: u64,
    lambda: f64,
    algo: &'static str,
    runs: u64,
    complete: bool,
    mean_train_acc: Option<f64>,
    sd_train_acc: Option<f64>,
    mean_test_acc: Option<f64>,
    sd_test_acc: Option<f64>,
    mean_norm: Option<f64>,
    sd_norm: Option<f64>,
}

/// Mean and sample standard deviation (0 for a single value).
fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let count = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / count;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1.0);
    (mean, var.sqrt())
}

fn aggregate(args: &SweepArgs, cells: &[Cell]) -> Vec<AggregateRow> {
    let mut rows = Vec::new();
    for group in cells.chunks(args.seeds as usize) {
        let head = &group[0];
        let summaries: Vec<RunSummary> =
            group.iter().filter_map(|c| read_summary(&c.dir)).collect();
        let runs = summaries.len() as u64;
        let stat = |pick: fn(&RunSummary) -> f64| -> (Option<f64>, Option<f64>) {
            if summaries.is_empty() {
                return (None, None);
            }
            let xs: Vec<f64> = summaries.iter().map(pick).collect();
            let (mean, sd) = mean_sd(&xs);
            (Some(mean), Some(sd))
        };
        let (mean_train_acc, sd_train_acc) = stat(|s| s.train_accuracy);
        let (mean_test_acc, sd_test_acc) = stat(|s| s.test_accuracy);
        let (mean_norm, sd_norm) = stat(|s| s.norm as f64);
        rows.push(AggregateRow {
            family: args.family.as_str(),
            k: head.coordinate,
            m: head.m,
            lambda: head.lambda,
            algo: args.algo.as_str(),
            runs,
            complete: runs == args.seeds,
            mean_train_acc,
            sd_train_acc,
            mean_test_acc,
            sd_test_acc,
            mean_norm,
            sd_norm,
        });
    }
    rows
}

pub(crate) fn run_sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.algo == AlgoKind::Oracle {
        return Err(invalid(
            "sweep supports mcmc and greedy; run the oracle via `train --algo oracle`",
        ));
    }
    if args.seeds == 0 {
        return Err(invalid("--seeds must be at least 1"));
    }
    if args.m.0.is_empty() {
        return Err(invalid("--m needs at least one training-set size"));
    }
    if args.lambda.0.is_empty() {
        return Err(invalid("--lambda needs at least one grid value"));
    }
    let targets = targets(args)?;
    let cells = expand_cells(args, &targets);

    enum Status {
        Ran,
        Skipped,
    }
    let outcomes: Vec<Result<Status, (String, CliError)>> = cells
        .par_iter()
        .map(|cell| {
            if read_summary(&cell.dir).is_some() {
                return Ok(Status::Skipped);
            }
            execute_run(&cell_spec(args, cell), &cell.dir)
                .map(|_| Status::Ran)
                .map_err(|e| (cell.name(), e))
        })
        .collect();

    let mut ran = 0u64;
    let mut skipped = 0u64;
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(Status::Ran) => ran += 1,
            Ok(Status::Skipped) => skipped += 1,
            Err(failure) => failures.push(failure),
        }
    }
    for (name, e) in &failures {
        eprintln!("cell {name}: {e}");
    }

    let rows = aggregate(args, &cells);
    let complete_rows = rows.iter().filter(|r| r.complete).count();
    let mut wtr = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        wtr.serialize(row)
            .map_err(|e| CliError::Io(format!("encoding aggregate table: {e}")))?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| CliError::Io(format!("encoding aggregate table: {e}")))?;
    atomic_write(&args.out.join("summary.csv"), &bytes)?;

    // The metadata echoes only grid-shape facts, never the ran/skipped
    // split of this particular invocation, so a finished sweep's artifacts
    // are identical no matter how many restarts built it.
    write_metadata(
        &args.out,
        "sweep",
        args,
        json!({
            "cells": cells.len(),
            "groups": rows.len(),
            "complete_groups": complete_rows,
        }),
    )?;
    println!(
        "sweep: {} cells ({ran} ran, {skipped} already complete, {} failed); {complete_rows}/{} groups complete",
        cells.len(),
        failures.len(),
        rows.len(),
    );
    match failures.into_iter().next() {
        Some((_, e)) => Err(e),
        None => Ok(()),
    }
}
