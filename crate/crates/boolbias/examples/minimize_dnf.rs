//! Exact DNF minimization under the three objectives, with and without the
//! negated output sign, plus don't-care inputs.
//!
//! Run with `cargo run --example minimize_dnf`.

use boolbias::{min_dnf, BooleanFunction, Objective};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A function whose best positive form and best negated form differ.
    let f: BooleanFunction = "0111111111111110".parse()?;
    let none = BooleanFunction::constant(4, false)?;

    println!("target {f}\n");
    for objective in [
        Objective::Literals,
        Objective::Clauses,
        Objective::LiteralsPlusClauses,
    ] {
        let positive = min_dnf(&f, &none, objective, false)?;
        let signed = min_dnf(&f, &none, objective, true)?;
        println!("objective {objective:?}:");
        println!("  positive-only : cost {:>2}  {}", positive.cost, positive.dnf);
        println!("  either sign   : cost {:>2}  {}", signed.cost, signed.dnf);
        assert!(signed.cost <= positive.cost);
        assert_eq!(signed.dnf.truth_table(), f);
    }

    // Don't-care inputs loosen the cover: the minimizer may set them either
    // way. The required on-set must exclude the freed inputs, so subtract
    // them before relaxing. Freeing one corner of 4-parity shrinks the cover.
    let parity: BooleanFunction = "0110100110010110".parse()?;
    let strict = min_dnf(&parity, &none, Objective::Literals, true)?;
    let free = BooleanFunction::from_indices(4, [14usize, 15])?;
    let required = BooleanFunction::from_bits(4, (0..16).map(|i| parity.get(i) && !free.get(i)))?;
    let relaxed = min_dnf(&required, &free, Objective::Literals, true)?;
    println!("\n4-parity minimal literals: {}", strict.cost);
    println!(
        "with inputs 14,15 free   : {} via {}",
        relaxed.cost, relaxed.dnf
    );
    assert!(relaxed.cost < strict.cost);

    // Outside the don't-care set, the relaxed formula still matches.
    let relaxed_table = relaxed.dnf.truth_table();
    for idx in (0..16usize).filter(|&i| !free.get(i)) {
        assert_eq!(relaxed_table.get(idx), parity.get(idx));
    }
    println!("relaxed formula agrees with the target on all constrained inputs");
    Ok(())
}
