//! Metropolis-Hastings training on a 7-input parity target, with and
//! without weight decay.
//!
//! Run with `cargo run --release --example train_mcmc`. The run mirrors the
//! desk-scale experiment: width multiplier 2 (hidden width 128), inverse
//! temperature 1000, 64 of the 128 inputs observed, a 2x10^5-step budget.

use boolbias::{mcmc_train, BooleanFunction, Dataset, McmcConfig};
use std::time::Instant;

fn parity(n: usize, k: usize) -> BooleanFunction {
    BooleanFunction::from_bits(n, (0..1u32 << n).map(|i| (i >> (n - k)).count_ones() % 2 == 1))
        .expect("valid dimension")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 7;
    let alpha_w = 2;
    let target = parity(n, 1);
    let data = Dataset::random(target, 64, 42)?;
    println!(
        "target: 1-parity on {n} inputs, {} train / {} test inputs",
        data.train().len(),
        data.test().len()
    );

    for lambda in [0.0, 0.01] {
        let cfg = McmcConfig {
            kappa: 1_000.0,
            lambda,
            steps: 200_000,
            seed: 7,
            ..McmcConfig::default()
        };
        let clock = Instant::now();
        let out = mcmc_train(&data, alpha_w, &cfg)?;
        let elapsed = clock.elapsed();
        let last = out.trace.last().expect("at least one step");
        println!(
            "lambda = {lambda:<4}: train {:.3}  test {:.3}  |W1| = {:>3}  |W2| = {:>3}  \
             ({} steps in {:.2?})",
            last.train_accuracy,
            last.test_accuracy,
            last.norm.norm_w1,
            last.norm.norm_w2,
            out.trace.records.len(),
            elapsed
        );
    }
    Ok(())
}
