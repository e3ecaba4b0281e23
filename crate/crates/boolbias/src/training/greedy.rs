//! Greedy coordinate descent with randomized tie-breaking.
//!
//! Each step scores every one-coordinate neighbor on batch accuracy and moves
//! to a member of the argmax set: with probability `p` a uniform draw from the
//! minimum-norm members of that set, otherwise a uniform draw from the whole
//! set. The current state competes for "best" only when `keep_current` is on,
//! which makes full-batch descent monotone.

use super::evaluator::{errors_in, Evaluator};
use super::{validate_chain_dims, Dataset, Snapshot, TraceRecord, TrainOutcome, TrainTrace};
use super::EARLY_STOP_PLATEAU;
use crate::boolfn::{packed_table, BooleanFunction};
use crate::dfcn::DfcnParams;
use crate::error::{Error, Result};
use crate::rng::{Domain, Stream};
use serde::{Deserialize, Serialize};

/// Greedy-descent hyperparameters.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GreedyConfig {
    /// Probability of restricting a tie-break to minimum-norm candidates.
    pub p: f64,
    /// Step budget.
    pub steps: u64,
    /// Batch size per step; `None` evaluates the full training set.
    pub batch: Option<usize>,
    pub seed: u64,
    /// Let moves flip the output sign (off by default).
    pub include_beta: bool,
    /// Keep the current state in the candidate set, so a strict improvement
    /// is required to move (monotone on full batches).
    pub keep_current: bool,
    /// Stop once the full-training error has been zero for
    /// [`EARLY_STOP_PLATEAU`] consecutive steps.
    pub early_stop: bool,
    /// Record parameter snapshots at new best training accuracies.
    pub snapshots: bool,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            p: 0.3,
            steps: 10_000,
            batch: None,
            seed: 0,
            include_beta: false,
            keep_current: false,
            early_stop: false,
            snapshots: false,
        }
    }
}

impl GreedyConfig {
    fn validate(&self, train_size: usize) -> Result<usize> {
        if !(self.p.is_finite() && (0.0..=1.0).contains(&self.p)) {
            return Err(Error::InvalidArgument(format!(
                "tie-break probability must lie in [0, 1], got {}",
                self.p
            )));
        }
        match self.batch {
            None => Ok(train_size),
            Some(b) if b >= 1 && b <= train_size => Ok(b),
            Some(b) => Err(Error::InvalidArgument(format!(
                "batch size {b} outside 1..={train_size}"
            ))),
        }
    }
}

/// Sentinel candidate index meaning "stay at the current state".
const STAY: usize = usize::MAX;

struct GreedyState {
    ev: Evaluator,
    stream: Stream,
    cfg: GreedyConfig,
    batch: usize,
    labels: u128,
    train_mask: u128,
    test_mask: u128,
    train_scratch: Vec<usize>,
    move_count: usize,
    /// Per-move `(errors, norm_delta)` scores, reused across steps.
    scores: Vec<(u32, i32)>,
    /// Candidate move indices in the argmax set, reused across steps.
    candidates: Vec<usize>,
}

impl GreedyState {
    fn new(data: &Dataset, alpha_w: usize, cfg: &GreedyConfig) -> Result<Self> {
        let width = validate_chain_dims(data, alpha_w)?;
        let batch = cfg.validate(data.train().len())?;
        let mut stream = Stream::new(cfg.seed, Domain::Greedy, 0);
        let params = DfcnParams::sample_uniform(data.n(), width, &mut stream)?;
        let move_count = params.move_count(cfg.include_beta);
        let ev = Evaluator::new(params);
        let mask_of = |idx: &[usize]| idx.iter().fold(0u128, |m, &i| m | 1u128 << i);
        Ok(GreedyState {
            labels: packed_table(data.target()),
            train_mask: mask_of(data.train()),
            test_mask: mask_of(data.test()),
            train_scratch: data.train().to_vec(),
            batch,
            cfg: *cfg,
            move_count,
            scores: Vec::with_capacity(move_count),
            candidates: Vec::with_capacity(move_count + 1),
            ev,
            stream,
        })
    }

    fn draw_batch_mask(&mut self) -> u128 {
        if self.batch == self.train_scratch.len() {
            return self.train_mask;
        }
        self.stream
            .partial_shuffle(&mut self.train_scratch, self.batch);
        self.train_scratch[..self.batch]
            .iter()
            .fold(0u128, |m, &i| m | 1u128 << i)
    }

    /// Score all neighbors, pick from the argmax set, move. Returns the
    /// end-of-step batch loss.
    fn step(&mut self) -> f64 {
        let mask = self.draw_batch_mask();
        self.scores.clear();
        let mut best = u32::MAX;
        for index in 0..self.move_count {
            let mv = self.ev.params().move_at(index, self.cfg.include_beta);
            let proposal = self.ev.propose(mv);
            let errors = errors_in(proposal.prediction(self.ev.full), self.labels, mask);
            best = best.min(errors);
            self.scores.push((errors, proposal.norm_delta));
        }
        let current_errors = errors_in(self.ev.prediction(), self.labels, mask);
        if self.cfg.keep_current {
            best = best.min(current_errors);
        }

        self.candidates.clear();
        if self.cfg.keep_current && current_errors == best {
            self.candidates.push(STAY);
        }
        self.candidates.extend(
            self.scores
                .iter()
                .enumerate()
                .filter(|(_, s)| s.0 == best)
                .map(|(i, _)| i),
        );

        if self.stream.unit_f64() < self.cfg.p {
            // Restrict to minimum-norm candidates (STAY has delta 0).
            let scores = &self.scores;
            let delta_of = |c: usize| if c == STAY { 0 } else { scores[c].1 };
            let min_delta = self
                .candidates
                .iter()
                .map(|&c| delta_of(c))
                .min()
                .expect("candidate set is never empty");
            self.candidates.retain(|&c| delta_of(c) == min_delta);
        }
        let pick = self.candidates[self.stream.below(self.candidates.len() as u64) as usize];
        if pick == STAY {
            return current_errors as f64 / self.batch as f64;
        }
        let mv = self.ev.params().move_at(pick, self.cfg.include_beta);
        let proposal = self.ev.propose(mv);
        let loss = self.scores[pick].0 as f64 / self.batch as f64;
        self.ev.apply(&proposal);
        loss
    }

    fn stats(&self) -> (f64, f64) {
        let pred = self.ev.prediction();
        let train_wrong = errors_in(pred, self.labels, self.train_mask);
        let test_wrong = errors_in(pred, self.labels, self.test_mask);
        (
            1.0 - train_wrong as f64 / self.train_mask.count_ones() as f64,
            1.0 - test_wrong as f64 / self.test_mask.count_ones() as f64,
        )
    }

    fn prediction(&self) -> BooleanFunction {
        let bits = self.ev.prediction();
        let n = self.ev.params().n();
        BooleanFunction::from_bits(n, (0..1usize << n).map(|i| bits >> i & 1 == 1))
            .expect("valid dimension")
    }
}

/// Run greedy descent and record its trace.
pub fn greedy_train(data: &Dataset, alpha_w: usize, cfg: &GreedyConfig) -> Result<TrainOutcome> {
    if cfg.steps == 0 {
        return Err(Error::InvalidArgument("step budget must be positive".into()));
    }
    let mut state = GreedyState::new(data, alpha_w, cfg)?;
    let mut trace = TrainTrace::default();
    trace.records.reserve(cfg.steps as usize);
    let mut best_train = f64::NEG_INFINITY;
    let mut plateau = 0u64;
    let mut stopped_early = false;

    if cfg.snapshots {
        let (train_accuracy, _) = state.stats();
        best_train = train_accuracy;
        trace.snapshots.push(Snapshot {
            step: 0,
            train_accuracy,
            params: state.ev.params().clone(),
        });
    }

    for step in 1..=cfg.steps {
        let loss = state.step();
        let (train_accuracy, test_accuracy) = state.stats();
        trace.records.push(TraceRecord {
            step,
            loss,
            train_accuracy,
            test_accuracy,
            norm: state.ev.norm(),
        });
        if cfg.snapshots && train_accuracy > best_train {
            best_train = train_accuracy;
            trace.snapshots.push(Snapshot {
                step,
                train_accuracy,
                params: state.ev.params().clone(),
            });
        }
        if cfg.early_stop {
            if train_accuracy == 1.0 {
                plateau += 1;
                if plateau >= EARLY_STOP_PLATEAU {
                    stopped_early = true;
                    break;
                }
            } else {
                plateau = 0;
            }
        }
    }

    Ok(TrainOutcome {
        prediction: state.prediction(),
        params: state.ev.params().clone(),
        trace,
        stopped_early,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::training::accuracy;

    fn parity(n: usize, k: usize) -> BooleanFunction {
        BooleanFunction::from_bits(n, (0..1u32 << n).map(|i| (i >> (n - k)).count_ones() % 2 == 1))
            .unwrap()
    }

    #[test]
    fn runs_are_seed_deterministic() {
        let data = Dataset::random(parity(4, 2), 8, 5).unwrap();
        let cfg = GreedyConfig {
            steps: 120,
            seed: 3,
            ..GreedyConfig::default()
        };
        let a = greedy_train(&data, 1, &cfg).unwrap();
        let b = greedy_train(&data, 1, &cfg).unwrap();
        assert_eq!(a.trace.records, b.trace.records);
        assert_eq!(a.params, b.params);
    }

    #[test]
    fn keep_current_makes_full_batch_descent_monotone() {
        let data = Dataset::random(parity(4, 3), 10, 11).unwrap();
        let cfg = GreedyConfig {
            keep_current: true,
            steps: 300,
            seed: 6,
            ..GreedyConfig::default()
        };
        let out = greedy_train(&data, 1, &cfg).unwrap();
        let mut last = f64::NEG_INFINITY;
        for r in &out.trace.records {
            assert!(
                r.train_accuracy >= last - 1e-12,
                "accuracy dropped from {last} to {}",
                r.train_accuracy
            );
            last = r.train_accuracy;
        }
    }

    #[test]
    fn learns_an_easy_target() {
        let target = BooleanFunction::var(4, 2).unwrap();
        let data = Dataset::random(target.clone(), 12, 2).unwrap();
        let cfg = GreedyConfig {
            steps: 400,
            seed: 0,
            ..GreedyConfig::default()
        };
        let out = greedy_train(&data, 2, &cfg).unwrap();
        assert_eq!(out.trace.last().unwrap().train_accuracy, 1.0);
        assert!(accuracy(&out.prediction, &target, data.test()).unwrap() >= 0.75);
    }

    #[test]
    fn norm_preference_prunes_once_interpolating() {
        // With p = 1 and the current state kept, every move is min-norm among
        // zero-error candidates, so after interpolation the norm can only
        // shrink or hold.
        let target = BooleanFunction::var(3, 1).unwrap();
        let data = Dataset::random(target, 6, 1).unwrap();
        let cfg = GreedyConfig {
            p: 1.0,
            keep_current: true,
            steps: 500,
            seed: 2,
            ..GreedyConfig::default()
        };
        let out = greedy_train(&data, 2, &cfg).unwrap();
        let records = &out.trace.records;
        let first_perfect = records
            .iter()
            .position(|r| r.train_accuracy == 1.0)
            .expect("never interpolated");
        let mut last = u32::MAX;
        for r in &records[first_perfect..] {
            assert_eq!(r.train_accuracy, 1.0, "perfect fit was abandoned");
            let norm = r.norm.total();
            assert!(norm <= last, "norm rose from {last} to {norm}");
            last = norm;
        }
        // The pruning pressure should actually bite.
        assert!(records.last().unwrap().norm.total() <= records[first_perfect].norm.total());
    }

    #[test]
    fn early_stop_and_validation() {
        let target = BooleanFunction::var(3, 3).unwrap();
        let data = Dataset::random(target, 6, 4).unwrap();
        let cfg = GreedyConfig {
            steps: 50_000,
            early_stop: true,
            seed: 1,
            ..GreedyConfig::default()
        };
        let out = greedy_train(&data, 2, &cfg).unwrap();
        assert!(out.stopped_early);
        assert!((out.trace.records.len() as u64) < cfg.steps);

        for bad_p in [-0.1, 1.5, f64::NAN] {
            let bad = GreedyConfig {
                p: bad_p,
                ..GreedyConfig::default()
            };
            assert!(greedy_train(&data, 1, &bad).is_err());
        }
        let bad = GreedyConfig {
            batch: Some(0),
            ..GreedyConfig::default()
        };
        assert!(greedy_train(&data, 1, &bad).is_err());
    }

    #[test]
    fn minibatch_losses_use_the_batch_denominator() {
        let data = Dataset::random(parity(4, 2), 9, 8).unwrap();
        let cfg = GreedyConfig {
            batch: Some(3),
            steps: 60,
            seed: 5,
            ..GreedyConfig::default()
        };
        let out = greedy_train(&data, 1, &cfg).unwrap();
        assert!(out
            .trace
            .records
            .iter()
            .all(|r| (r.loss * 3.0 - (r.loss * 3.0).round()).abs() < 1e-9));
    }
}
