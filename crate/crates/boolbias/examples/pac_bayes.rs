//! The realizable PAC-Bayes bound: functions with more prior mass need fewer
//! examples for the same generalization guarantee.
//!
//! Run with `cargo run --release --example pac_bayes`.

use boolbias::{exact_prior, pac_bayes_bound, BooleanFunction, Family, FamilySpec, SubsetRule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let delta = 0.05;

    // The bound is monotone: more prior mass, tighter guarantee.
    println!("error bound at confidence 95%, m = 64 examples:");
    for p_f in [1e-1, 1e-3, 1e-6, 1e-12, 1e-24] {
        println!("  P(f) = {p_f:>6.0e}  ->  eps <= {:.3}", pac_bayes_bound(p_f, 64, delta)?);
    }

    // And it decays roughly like 1/m in the sample count.
    println!("\nerror bound for P(f) = 1e-6 as m grows:");
    for m in [32u64, 64, 128, 256, 1024, 4096] {
        println!("  m = {m:>4}  ->  eps <= {:.4}", pac_bayes_bound(1e-6, m, delta)?);
    }

    // Plugging in true prior masses from the exact n = 3 ensemble: simple
    // targets inherit non-vacuous guarantees, complex ones do not.
    let est = exact_prior(3, 1)?;
    let targets: Vec<(&str, BooleanFunction)> = vec![
        ("constant 0", BooleanFunction::constant(3, false)?),
        ("literal x1", "00001111".parse()?),
        (
            "3-parity",
            FamilySpec {
                n: 3,
                family: Family::Parity {
                    k: 3,
                    subset: SubsetRule::FIRST,
                },
                seed: 0,
            }
            .generate()?,
        ),
    ];
    println!("\nguarantees from the exact n = 3 prior (m = 100):");
    let mut last = 0.0;
    for (name, f) in &targets {
        let p_f = est.probability(f)?;
        let eps = pac_bayes_bound(p_f, 100, delta)?;
        println!("  {name:<12} P(f) = {p_f:.2e}  ->  eps <= {eps:.3}");
        assert!(eps >= last, "bound must loosen as prior mass shrinks");
        last = eps;
    }
    Ok(())
}
