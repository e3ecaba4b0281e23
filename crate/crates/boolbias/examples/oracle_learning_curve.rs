//! Learning curves of the exact minimum-literal interpolation oracle: what
//! the smallest consistent formula generalizes to, for better and for worse.
//!
//! Run with `cargo run --release --example oracle_learning_curve`.

use boolbias::{accuracy, oracle_train, BooleanFunction, Dataset};

fn parity(n: usize, k: usize) -> BooleanFunction {
    BooleanFunction::from_bits(n, (0..1u32 << n).map(|i| (i >> (n - k)).count_ones() % 2 == 1))
        .expect("valid dimension")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Low-order parities on 6 inputs: the minimal interpolant locks onto the
    // target once enough of the table is visible.
    println!("mean test accuracy of the minimal interpolant (6 inputs, 8 seeds):");
    println!("{:>8} {:>8} {:>8} {:>8}", "m", "k = 1", "k = 2", "k = 3");
    for m in [8usize, 16, 32, 48] {
        print!("{m:>8}");
        for k in 1..=3usize {
            let target = parity(6, k);
            let mut mean = 0.0;
            let seeds = 8u64;
            for seed in 0..seeds {
                let data = Dataset::random(target.clone(), m, seed)?;
                let out = oracle_train(&data)?;
                mean += accuracy(&out.prediction, data.target(), data.test())?;
            }
            print!(" {:>8.3}", mean / seeds as f64);
        }
        println!();
    }

    // The cautionary tale: on a full parity, minimality actively misleads.
    // From the first half of the 4-parity table the cheapest consistent
    // formula is the 3-parity pattern tiled over both halves, so it gets
    // every held-out label wrong.
    let target = parity(4, 4);
    let data = Dataset::first(target, 8)?;
    let out = oracle_train(&data)?;
    println!(
        "\n4-parity from its first 8 rows: minimal formula ({} literals) {}",
        out.cost, out.dnf
    );
    println!(
        "prediction {} vs target {}: test accuracy {:.2} - exactly anti-correlated",
        out.prediction,
        data.target(),
        accuracy(&out.prediction, data.target(), data.test())?
    );
    Ok(())
}
