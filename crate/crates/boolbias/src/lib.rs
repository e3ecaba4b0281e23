//! Discrete networks, DNF complexity, and parameter-space priors for Boolean
//! functions.
//!
//! This crate studies why randomly parameterized (and norm-regularized)
//! discrete threshold networks prefer simple Boolean functions. It provides:
//!
//! - [`boolfn`]: truth tables for `{0,1}^n -> {0,1}` with the string/hex
//!   codecs and the target-function families used in experiments;
//! - [`dnf`]: signed disjunctive normal forms and the canonical expansion;
//! - [`dfcn`]: discrete fully-connected networks and their exact, two-way
//!   correspondence with DNFs;
//! - [`complexity`]: exact minimal-DNF search and the complexity measures
//!   `K_dnf`, `K_theta`, `K_clause`, and the Lempel-Ziv score `K_lz`;
//! - [`prior`]: Monte Carlo and exhaustive estimates of the probability that
//!   a uniformly drawn network computes each function, analytic bounds on
//!   those probabilities, and the PAC-Bayes generalization bound;
//! - [`training`]: datasets plus three trainers (Metropolis-Hastings with
//!   norm decay, greedy descent, and an exact min-norm interpolation oracle)
//!   and the exhaustive tilted-posterior check;
//! - [`cli`]: the `boolbias` command-line front end that turns experiment
//!   configs into CSV/JSON artifacts.
//!
//! Start with the runnable examples (`cargo run --example <name>`); each one
//! demonstrates a major capability end to end.

mod bits;
mod error;

pub mod boolfn;
pub mod cli;
pub mod complexity;
pub mod dfcn;
pub mod dnf;
pub mod prior;
pub mod rng;
pub mod training;

pub use boolfn::{BooleanFunction, Family, FamilySpec, SubsetRule};
pub use complexity::{complexity_report, min_dnf, ComplexityReport, MinimalDnf, Objective};
pub use dfcn::{dfcn_to_dnf, dnf_to_dfcn, DfcnParams, WeightNorm};
pub use dnf::{Clause, Dnf, Sign};
pub use error::{Error, Result};
pub use prior::{
    exact_prior, pac_bayes_bound, rank_table, sample_prior, sample_prior_params,
    sample_prior_range, PriorEstimate, RankEntry,
};
pub use training::{
    accuracy, greedy_train, loss, mcmc_train, oracle_train, posterior_tilt_check, Dataset,
    GreedyConfig, McmcChain, McmcConfig, OracleOutcome, TiltReport, TrainOutcome, TrainTrace,
};
