//! The four complexity measures side by side, and the arithmetic relations
//! that tie the three network-norm measures together.
//!
//! Run with `cargo run --example complexity_report`.

use boolbias::{complexity_report, BooleanFunction, Family, FamilySpec, SubsetRule};

fn parity(n: usize, k: usize) -> BooleanFunction {
    FamilySpec {
        n,
        family: Family::Parity {
            k,
            subset: SubsetRule::FIRST,
        },
        seed: 0,
    }
    .generate()
    .expect("valid family")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases: Vec<(&str, BooleanFunction)> = vec![
        ("constant 0", BooleanFunction::constant(4, false)?),
        ("single literal x1", "0000000011111111".parse()?),
        ("two-clause AND/OR mix", "0001000100011111".parse()?),
        ("2-parity", parity(4, 2)),
        ("4-parity (hardest)", parity(4, 4)),
        ("tiled 1001", "1001100110011001".parse()?),
    ];

    println!(
        "{:<24} {:>5} {:>7} {:>8} {:>6}",
        "function", "k_dnf", "k_theta", "k_clause", "k_lz"
    );
    for (name, f) in &cases {
        let r = complexity_report(f)?;
        println!(
            "{name:<24} {:>5} {:>7} {:>8} {:>6.1}",
            r.k_dnf, r.k_theta, r.k_clause, r.k_lz
        );
    }

    // k_theta adds the clause thresholds to the literal count, so it sits in
    // a sandwich around k_dnf; k_clause counts two weights per clause.
    let r = complexity_report(&parity(4, 4))?;
    let clauses = r.k_clause / 2;
    println!(
        "\n4-parity: {} literals across {} clauses;",
        r.k_dnf, clauses
    );
    println!(
        "  k_theta = k_dnf + thresholds: {} <= {} <= {}",
        r.k_dnf + r.k_dnf.div_ceil(4),
        r.k_theta,
        r.k_dnf + r.k_dnf.next_power_of_two()
    );

    // The k-parity family has closed forms: k * 2^(k-1) literals,
    // (k+1) * 2^(k-1) with thresholds, 2^k clause weights.
    println!("\nk-parity closed forms on n = 4 inputs:");
    for k in 1..=4usize {
        let r = complexity_report(&parity(4, k))?;
        assert_eq!(r.k_dnf as usize, k << (k - 1));
        assert_eq!(r.k_theta as usize, (k + 1) << (k - 1));
        assert_eq!(r.k_clause as usize, 1 << k);
        println!(
            "  k = {k}: k_dnf = {:>2}, k_theta = {:>2}, k_clause = {:>2}",
            r.k_dnf, r.k_theta, r.k_clause
        );
    }
    Ok(())
}
