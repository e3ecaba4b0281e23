//! Metropolis-Hastings training.
//!
//! The chain walks the parameter space by single-coordinate moves (two
//! alternatives per `W1` entry, one toggle per gate, optionally the output
//! sign), accepting a proposal with probability
//! `min(1, exp(kappa * (L_old - L_new) + lambda * (|theta_old| - |theta_new|)))`
//! where `L` is the batch misclassification fraction. The proposal kernel is
//! uniform over a symmetric neighbor relation, so with a full batch the
//! stationary distribution is proportional to
//! `exp(-kappa * L(theta) - lambda * |theta|)`.

use super::evaluator::{errors_in, Evaluator};
use super::{validate_chain_dims, Dataset, Snapshot, TraceRecord, TrainOutcome, TrainTrace};
use super::EARLY_STOP_PLATEAU;
use crate::boolfn::{packed_table, BooleanFunction};
use crate::dfcn::DfcnParams;
use crate::error::{Error, Result};
use crate::rng::{Domain, Stream};
use serde::{Deserialize, Serialize};

/// Metropolis-Hastings hyperparameters.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McmcConfig {
    /// Inverse temperature on the batch loss.
    pub kappa: f64,
    /// Weight-decay coefficient on `|W1| + |W2|`.
    pub lambda: f64,
    /// Step budget.
    pub steps: u64,
    /// Batch size per step; `None` evaluates the full training set.
    pub batch: Option<usize>,
    pub seed: u64,
    /// Let the chain flip the output sign (off by default: the sign stays
    /// wherever initialization put it).
    pub include_beta: bool,
    /// Stop once the full-training error has been zero for
    /// [`EARLY_STOP_PLATEAU`] consecutive steps.
    pub early_stop: bool,
    /// Record parameter snapshots at new best training accuracies.
    pub snapshots: bool,
}

impl Default for McmcConfig {
    fn default() -> Self {
        McmcConfig {
            kappa: 1_000.0,
            lambda: 0.0,
            steps: 200_000,
            batch: None,
            seed: 0,
            include_beta: false,
            early_stop: false,
            snapshots: false,
        }
    }
}

impl McmcConfig {
    fn validate(&self, train_size: usize) -> Result<usize> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "kappa must be positive and finite, got {}",
                self.kappa
            )));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "lambda must be non-negative and finite, got {}",
                self.lambda
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

/// What one chain step did.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub accepted: bool,
    /// Misclassification fraction of the end-of-step state on this step's
    /// batch.
    pub batch_loss: f64,
}

/// A running Metropolis-Hastings chain, exposed step by step so long-run
/// state frequencies can be compared against the stationary law.
pub struct McmcChain {
    ev: Evaluator,
    stream: Stream,
    kappa: f64,
    lambda: f64,
    include_beta: bool,
    batch: usize,
    labels: u128,
    train_mask: u128,
    test_mask: u128,
    train_scratch: Vec<usize>,
    move_count: usize,
}

impl McmcChain {
    /// Initialize per the sampler's uniform scheme: ternary `W1`, fair-coin
    /// gates, fair-coin sign — all drawn from the `(seed, chain)` stream that
    /// then drives the walk.
    pub fn new(data: &Dataset, alpha_w: usize, cfg: &McmcConfig) -> Result<Self> {
        let width = validate_chain_dims(data, alpha_w)?;
        let batch = cfg.validate(data.train().len())?;
        let mut stream = Stream::new(cfg.seed, Domain::Mcmc, 0);
        let params = DfcnParams::sample_uniform(data.n(), width, &mut stream)?;
        let move_count = params.move_count(cfg.include_beta);
        let ev = Evaluator::new(params);
        let mask_of = |idx: &[usize]| idx.iter().fold(0u128, |m, &i| m | 1u128 << i);
        Ok(McmcChain {
            labels: packed_table(data.target()),
            train_mask: mask_of(data.train()),
            test_mask: mask_of(data.test()),
            train_scratch: data.train().to_vec(),
            batch,
            kappa: cfg.kappa,
            lambda: cfg.lambda,
            include_beta: cfg.include_beta,
            move_count,
            ev,
            stream,
        })
    }

    pub fn params(&self) -> &DfcnParams {
        self.ev.params()
    }

    /// The function the current state computes.
    pub fn prediction(&self) -> BooleanFunction {
        let bits = self.ev.prediction();
        let n = self.ev.params().n();
        BooleanFunction::from_bits(n, (0..1usize << n).map(|i| bits >> i & 1 == 1))
            .expect("valid dimension")
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

    /// Advance the chain one proposal.
    pub fn step(&mut self) -> StepOutcome {
        let mask = self.draw_batch_mask();
        let errors_old = errors_in(self.ev.prediction(), self.labels, mask);
        let mv_index = self.stream.below(self.move_count as u64) as usize;
        let mv = self.ev.params().move_at(mv_index, self.include_beta);
        let proposal = self.ev.propose(mv);
        let errors_new = errors_in(proposal.prediction(self.ev.full), self.labels, mask);
        let exponent = self.kappa * (errors_old as f64 - errors_new as f64) / self.batch as f64
            - self.lambda * proposal.norm_delta as f64;
        let accepted = exponent >= 0.0 || self.stream.unit_f64() < exponent.exp();
        let end_errors = if accepted {
            self.ev.apply(&proposal);
            errors_new
        } else {
            errors_old
        };
        StepOutcome {
            accepted,
            batch_loss: end_errors as f64 / self.batch as f64,
        }
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
}

/// Run a full Metropolis-Hastings training loop and record its trace.
pub fn mcmc_train(data: &Dataset, alpha_w: usize, cfg: &McmcConfig) -> Result<TrainOutcome> {
    if cfg.steps == 0 {
        return Err(Error::InvalidArgument("step budget must be positive".into()));
    }
    let mut chain = McmcChain::new(data, alpha_w, cfg)?;
    let mut trace = TrainTrace::default();
    trace.records.reserve(cfg.steps as usize);
    let mut best_train = f64::NEG_INFINITY;
    let mut plateau = 0u64;
    let mut stopped_early = false;

    if cfg.snapshots {
        let (train_accuracy, _) = chain.stats();
        best_train = train_accuracy;
        trace.snapshots.push(Snapshot {
            step: 0,
            train_accuracy,
            params: chain.params().clone(),
        });
    }

    for step in 1..=cfg.steps {
        let outcome = chain.step();
        let (train_accuracy, test_accuracy) = chain.stats();
        trace.records.push(TraceRecord {
            step,
            loss: outcome.batch_loss,
            train_accuracy,
            test_accuracy,
            norm: chain.ev.norm(),
        });
        if cfg.snapshots && train_accuracy > best_train {
            best_train = train_accuracy;
            trace.snapshots.push(Snapshot {
                step,
                train_accuracy,
                params: chain.params().clone(),
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
        prediction: chain.prediction(),
        params: chain.ev.params().clone(),
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
    fn traces_are_seed_deterministic() {
        let data = Dataset::random(parity(4, 2), 8, 5).unwrap();
        let cfg = McmcConfig {
            steps: 500,
            seed: 9,
            ..McmcConfig::default()
        };
        let a = mcmc_train(&data, 1, &cfg).unwrap();
        let b = mcmc_train(&data, 1, &cfg).unwrap();
        assert_eq!(a.trace.records, b.trace.records);
        assert_eq!(a.params, b.params);
        let c = mcmc_train(&data, 1, &McmcConfig { seed: 10, ..cfg }).unwrap();
        assert_ne!(a.trace.records, c.trace.records);
    }

    #[test]
    fn one_record_per_step() {
        let data = Dataset::random(parity(3, 1), 4, 0).unwrap();
        let cfg = McmcConfig {
            steps: 250,
            ..McmcConfig::default()
        };
        let out = mcmc_train(&data, 1, &cfg).unwrap();
        assert_eq!(out.trace.records.len(), 250);
        assert!(out
            .trace
            .records
            .iter()
            .enumerate()
            .all(|(i, r)| r.step == i as u64 + 1));
        assert!(!out.stopped_early);
        assert!(out
            .trace
            .records
            .iter()
            .all(|r| (0.0..=1.0).contains(&r.train_accuracy)
                && (0.0..=1.0).contains(&r.test_accuracy)
                && (0.0..=1.0).contains(&r.loss)));
    }

    #[test]
    fn learns_an_easy_target() {
        // A single literal at n = 4 with most of the domain observed.
        let target = BooleanFunction::var(4, 1).unwrap();
        let data = Dataset::random(target.clone(), 12, 1).unwrap();
        let cfg = McmcConfig {
            steps: 20_000,
            seed: 2,
            ..McmcConfig::default()
        };
        let out = mcmc_train(&data, 2, &cfg).unwrap();
        let final_train = out.trace.last().unwrap().train_accuracy;
        assert_eq!(final_train, 1.0, "chain failed to interpolate");
        assert!(accuracy(&out.prediction, &target, data.test()).unwrap() >= 0.75);
    }

    #[test]
    fn high_kappa_rejects_uphill_moves() {
        // With a huge kappa and lambda = 0 the batch loss never increases.
        let data = Dataset::random(parity(3, 3), 6, 3).unwrap();
        let cfg = McmcConfig {
            kappa: 1e9,
            steps: 2_000,
            seed: 4,
            ..McmcConfig::default()
        };
        let out = mcmc_train(&data, 1, &cfg).unwrap();
        let mut last = f64::INFINITY;
        for r in &out.trace.records {
            assert!(r.loss <= last + 1e-12);
            last = r.loss;
        }
    }

    #[test]
    fn early_stop_cuts_the_run_short() {
        let target = BooleanFunction::var(3, 2).unwrap();
        let data = Dataset::random(target, 6, 0).unwrap();
        let cfg = McmcConfig {
            steps: 100_000,
            early_stop: true,
            seed: 1,
            ..McmcConfig::default()
        };
        let out = mcmc_train(&data, 2, &cfg).unwrap();
        assert!(out.stopped_early);
        assert!((out.trace.records.len() as u64) < cfg.steps);
        let tail = &out.trace.records[out.trace.records.len() - 1_000..];
        assert!(tail.iter().all(|r| r.train_accuracy == 1.0));
    }

    #[test]
    fn snapshots_track_new_bests() {
        let data = Dataset::random(parity(4, 2), 10, 7).unwrap();
        let cfg = McmcConfig {
            steps: 3_000,
            snapshots: true,
            seed: 0,
            ..McmcConfig::default()
        };
        let out = mcmc_train(&data, 1, &cfg).unwrap();
        assert!(!out.trace.snapshots.is_empty());
        assert_eq!(out.trace.snapshots[0].step, 0);
        let mut best = f64::NEG_INFINITY;
        for s in &out.trace.snapshots {
            assert!(s.train_accuracy > best || s.step == 0);
            best = best.max(s.train_accuracy);
        }
        // Snapshot steps must be trace steps (or the initial state).
        let steps: std::collections::HashSet<u64> =
            out.trace.records.iter().map(|r| r.step).collect();
        assert!(out
            .trace
            .snapshots
            .iter()
            .all(|s| s.step == 0 || steps.contains(&s.step)));
    }

    #[test]
    fn minibatches_and_config_validation() {
        let data = Dataset::random(parity(4, 3), 8, 2).unwrap();
        let cfg = McmcConfig {
            batch: Some(4),
            steps: 400,
            ..McmcConfig::default()
        };
        let out = mcmc_train(&data, 1, &cfg).unwrap();
        assert_eq!(out.trace.records.len(), 400);
        // Batch losses are multiples of 1/4.
        assert!(out
            .trace
            .records
            .iter()
            .all(|r| (r.loss * 4.0 - (r.loss * 4.0).round()).abs() < 1e-9));

        let bad = McmcConfig {
            batch: Some(9),
            ..McmcConfig::default()
        };
        assert!(mcmc_train(&data, 1, &bad).is_err());
        let bad = McmcConfig {
            kappa: 0.0,
            ..McmcConfig::default()
        };
        assert!(mcmc_train(&data, 1, &bad).is_err());
        let bad = McmcConfig {
            lambda: -0.1,
            ..McmcConfig::default()
        };
        assert!(mcmc_train(&data, 1, &bad).is_err());
        let bad = McmcConfig {
            steps: 0,
            ..McmcConfig::default()
        };
        assert!(mcmc_train(&data, 1, &bad).is_err());
    }

    #[test]
    fn weight_decay_shrinks_equilibrium_norms() {
        // Mean norm over the tail of the trace, averaged over seeds: the
        // decayed chain should sit well below the free one.
        let target = parity(4, 1);
        let data = Dataset::random(target, 12, 3).unwrap();
        let tail_mean = |out: &crate::training::TrainOutcome| {
            let records = &out.trace.records;
            let tail = &records[records.len() / 2..];
            tail.iter().map(|r| r.norm.total() as f64).sum::<f64>() / tail.len() as f64
        };
        let mut free_norms = 0.0;
        let mut decayed_norms = 0.0;
        for seed in 0..4 {
            let base = McmcConfig {
                steps: 6_000,
                seed,
                ..McmcConfig::default()
            };
            let free = mcmc_train(&data, 2, &base).unwrap();
            let decayed = mcmc_train(
                &data,
                2,
                &McmcConfig {
                    lambda: 0.5,
                    ..base
                },
            )
            .unwrap();
            free_norms += tail_mean(&free);
            decayed_norms += tail_mean(&decayed);
        }
        assert!(
            decayed_norms + 4.0 < free_norms,
            "decayed {decayed_norms} vs free {free_norms}"
        );
    }
}
