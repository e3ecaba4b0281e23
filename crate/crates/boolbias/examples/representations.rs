//! The three views of a Boolean function — truth table, signed DNF, and
//! discrete network — and the exact conversions between them.
//!
//! Run with `cargo run --example representations`.

use boolbias::{dfcn_to_dnf, dnf_to_dfcn, BooleanFunction, Dnf};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Truth tables round-trip through bit strings and hex.
    let f: BooleanFunction = "01101001".parse()?;
    println!("bits {f}  =  hex {}  ({} ones)", f.to_hex(), f.count_ones());
    assert_eq!(BooleanFunction::from_hex(3, &f.to_hex())?, f);

    // A signed DNF round-trips through its textual form. This one computes
    // the 3-parity: negative sign, clauses covering the even-weight inputs.
    let formula = "-(!x1&!x2&!x3)|(!x1&x2&x3)|(x1&!x2&x3)|(x1&x2&!x3)";
    let dnf = Dnf::parse(3, formula)?;
    assert_eq!(dnf.to_string(), formula);
    assert_eq!(dnf.truth_table(), f);
    println!("formula {dnf} computes {}", dnf.truth_table());

    // Clauses embed as network rows: positive literal -> +1, negated -> -1,
    // absent -> 0; the gate layer keeps a row active, and the output sign
    // carries the DNF sign. Spare rows stay inactive.
    let net = dnf_to_dfcn(&dnf, 6)?;
    println!(
        "as a width-{} network: |W1| = {}, |W2| = {}, output sign {:?}",
        net.width(),
        net.weight_norm().norm_w1,
        net.weight_norm().norm_w2,
        net.beta(),
    );
    for (row, chunk) in net.w1().chunks(net.n()).enumerate() {
        println!("  row {row}: {chunk:>2?}  gate {}", net.w2()[row] as u8);
    }

    // The forward pass agrees with the formula on every input, and reading
    // the active rows back recovers the same canonical DNF.
    for idx in 0..1usize << net.n() {
        let v = [idx & 4 != 0, idx & 2 != 0, idx & 1 != 0];
        assert_eq!(net.forward(&v)?, dnf.eval(&v)?);
    }
    assert_eq!(dfcn_to_dnf(&net).canonicalized(), dnf.canonicalized());
    println!("forward pass matches on all {} inputs; conversion round-trips", 1 << net.n());

    // Every function also has the canonical one-clause-per-minterm form.
    let expansion = Dnf::canonical_expansion(&f);
    println!(
        "canonical expansion uses {} clauses; the minimal network above uses {}",
        expansion.clauses().len(),
        dnf.clauses().len()
    );
    Ok(())
}
