//! Learning Boolean functions with discrete networks.
//!
//! A [`Dataset`] splits the `2^n` inputs of a target function into labeled
//! training inputs and held-out test inputs. Three trainers consume it:
//!
//! - [`mcmc_train`]: Metropolis-Hastings over single-coordinate parameter
//!   moves, with inverse temperature `kappa` on the batch loss and an
//!   optional weight-decay factor `lambda` on the parameter norm;
//! - [`greedy_train`]: evaluates every 1-hop neighbor each step and moves to
//!   a best one, preferring minimum-norm winners with probability `p`;
//! - [`oracle_train`]: exact minimum-literal interpolation — the training
//!   labels are hard constraints and the test inputs are don't-cares.
//!
//! [`posterior_tilt_check`] exhaustively verifies, on small instances, that
//! weight decay tilts the zero-error posterior over functions by roughly
//! `exp(-lambda * K_dnf)`.

mod evaluator;
mod greedy;
mod mcmc;
mod oracle;
mod tilt;

pub use greedy::{greedy_train, GreedyConfig};
pub use mcmc::{mcmc_train, McmcChain, McmcConfig};
pub use oracle::{oracle_train, OracleOutcome};
pub use tilt::{posterior_tilt_check, TiltEntry, TiltReport};

use crate::boolfn::BooleanFunction;
use crate::dfcn::{DfcnParams, WeightNorm};
use crate::error::{Error, Result};
use crate::rng::{Domain, Stream};
use serde::{Deserialize, Serialize};

/// Largest input dimension the chain-based trainers support (their
/// evaluators pack truth tables into 128-bit words).
pub const MAX_CHAIN_N: usize = 7;

/// Consecutive zero-training-error steps required before an early stop.
pub const EARLY_STOP_PLATEAU: u64 = 1_000;

/// A labeled train/test split of the full input space of a target function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    target: BooleanFunction,
    train_idx: Vec<usize>,
    test_idx: Vec<usize>,
    seed: Option<u64>,
}

impl Dataset {
    /// Seeded uniform split: shuffle all `2^n` inputs and take the first `m`
    /// as the training set.
    pub fn random(target: BooleanFunction, m: usize, seed: u64) -> Result<Self> {
        let len = target.len();
        if m == 0 || m >= len {
            return Err(Error::InvalidArgument(format!(
                "training-set size m must be in 1..{len}, got {m}"
            )));
        }
        let mut indices: Vec<usize> = (0..len).collect();
        let mut stream = Stream::new(seed, Domain::Dataset, 0);
        stream.shuffle(&mut indices);
        let test_idx = indices.split_off(m);
        Ok(Dataset {
            target,
            train_idx: indices,
            test_idx,
            seed: Some(seed),
        })
    }

    /// Deterministic split: the first `m` inputs in index order train, the
    /// rest test.
    pub fn first(target: BooleanFunction, m: usize) -> Result<Self> {
        let len = target.len();
        if m == 0 || m >= len {
            return Err(Error::InvalidArgument(format!(
                "training-set size m must be in 1..{len}, got {m}"
            )));
        }
        Ok(Dataset {
            target,
            train_idx: (0..m).collect(),
            test_idx: (m..len).collect(),
            seed: None,
        })
    }

    pub fn target(&self) -> &BooleanFunction {
        &self.target
    }

    pub fn n(&self) -> usize {
        self.target.n()
    }

    /// Training input indices (the labels are `target` restricted to them).
    pub fn train(&self) -> &[usize] {
        &self.train_idx
    }

    /// Held-out input indices.
    pub fn test(&self) -> &[usize] {
        &self.test_idx
    }

    /// The shuffle seed, when the split was random.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

/// Matching fraction between two functions on a set of input indices.
pub fn accuracy(
    prediction: &BooleanFunction,
    target: &BooleanFunction,
    indices: &[usize],
) -> Result<f64> {
    if prediction.n() != target.n() {
        return Err(Error::DimensionMismatch {
            expected: target.n(),
            got: prediction.n(),
        });
    }
    if indices.is_empty() {
        return Err(Error::InvalidArgument(
            "accuracy over an empty index set is undefined".into(),
        ));
    }
    let hits = indices
        .iter()
        .filter(|&&idx| prediction.get(idx) == target.get(idx))
        .count();
    Ok(hits as f64 / indices.len() as f64)
}

/// Mean squared error of a network against the dataset's labels on the given
/// indices; on 0/1 outputs this equals the misclassification fraction.
pub fn loss(params: &DfcnParams, data: &Dataset, indices: &[usize]) -> Result<f64> {
    if indices.is_empty() {
        return Err(Error::InvalidArgument(
            "loss over an empty index set is undefined".into(),
        ));
    }
    let prediction = params.truth_table();
    Ok(1.0 - accuracy(&prediction, data.target(), indices)?)
}

/// Per-step training statistics.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: u64,
    /// Batch loss of the state at the end of the step.
    pub loss: f64,
    /// Accuracy on the full training set.
    pub train_accuracy: f64,
    /// Accuracy on the held-out inputs.
    pub test_accuracy: f64,
    pub norm: WeightNorm,
}

/// A parameter snapshot taken when the full-training accuracy reaches a new
/// maximum.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub step: u64,
    pub train_accuracy: f64,
    pub params: DfcnParams,
}

/// The per-step record stream of one training run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainTrace {
    pub records: Vec<TraceRecord>,
    pub snapshots: Vec<Snapshot>,
}

impl TrainTrace {
    /// The final record (available once at least one step ran).
    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }
}

/// Final state and trace of a chain-based training run.
#[derive(Clone, Debug)]
pub struct TrainOutcome {
    /// The last state of the run (not the best seen).
    pub params: DfcnParams,
    /// The function that state computes.
    pub prediction: BooleanFunction,
    pub trace: TrainTrace,
    /// Whether the run ended on a sustained zero-training-error plateau
    /// before exhausting its step budget.
    pub stopped_early: bool,
}

fn validate_chain_dims(data: &Dataset, alpha_w: usize) -> Result<usize> {
    let n = data.n();
    if n > MAX_CHAIN_N {
        return Err(Error::BudgetExceeded(format!(
            "chain trainers support n <= {MAX_CHAIN_N}, got n = {n}"
        )));
    }
    if alpha_w == 0 {
        return Err(Error::InvalidArgument(
            "width multiplier alpha_w must be at least 1".into(),
        ));
    }
    Ok(alpha_w << (n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dnf::Sign;

    fn parity4() -> BooleanFunction {
        BooleanFunction::from_bits(4, (0..16).map(|i: u32| i.count_ones() % 2 == 1)).unwrap()
    }

    #[test]
    fn random_split_partitions_the_domain() {
        let data = Dataset::random(parity4(), 6, 3).unwrap();
        assert_eq!(data.train().len(), 6);
        assert_eq!(data.test().len(), 10);
        let mut all: Vec<usize> = data.train().iter().chain(data.test()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..16).collect::<Vec<_>>());
        assert_eq!(data.seed(), Some(3));
    }

    #[test]
    fn random_split_is_seed_deterministic() {
        let a = Dataset::random(parity4(), 8, 11).unwrap();
        let b = Dataset::random(parity4(), 8, 11).unwrap();
        let c = Dataset::random(parity4(), 8, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn paper_scale_test_sizes() {
        let target = BooleanFunction::var(7, 1).unwrap();
        for (m, expect) in [(16usize, 112usize), (32, 96), (64, 64), (96, 32)] {
            let data = Dataset::random(target.clone(), m, 0).unwrap();
            assert_eq!(data.test().len(), expect);
        }
    }

    #[test]
    fn first_split_takes_a_prefix() {
        let data = Dataset::first(parity4(), 4).unwrap();
        assert_eq!(data.train(), &[0, 1, 2, 3]);
        assert_eq!(data.test().len(), 12);
        assert_eq!(data.seed(), None);
    }

    #[test]
    fn split_sizes_are_validated() {
        assert!(Dataset::random(parity4(), 0, 0).is_err());
        assert!(Dataset::random(parity4(), 16, 0).is_err());
        let minimal = Dataset::first(parity4(), 15).unwrap();
        assert_eq!(minimal.test().len(), 1);
    }

    #[test]
    fn accuracy_matches_hand_counts() {
        let target = parity4();
        assert_eq!(accuracy(&target, &target, &[0, 5, 9]).unwrap(), 1.0);
        let complement = target.complement();
        assert_eq!(
            accuracy(&complement, &target, &(0..16).collect::<Vec<_>>()).unwrap(),
            0.0
        );
        // The two-variable-parity guess scores 4/12 on the held-out inputs.
        let guess: BooleanFunction = "0110011001100110".parse().unwrap();
        let test: Vec<usize> = (4..16).collect();
        let acc = accuracy(&guess, &target, &test).unwrap();
        assert!((acc - 4.0 / 12.0).abs() < 1e-12);
        assert!(accuracy(&guess, &target, &[]).is_err());
    }

    #[test]
    fn loss_is_misclassification_fraction() {
        let target = parity4();
        let data = Dataset::first(target.clone(), 8).unwrap();
        // The all-zero network with beta = +1 predicts constant 0; parity is
        // balanced on 0..8, so the loss there is 1/2.
        let params = DfcnParams::zeros(4, 8, Sign::Plus).unwrap();
        let l = loss(&params, &data, data.train()).unwrap();
        assert!((l - 0.5).abs() < 1e-12);
        assert!(loss(&params, &data, &[]).is_err());
    }
}
