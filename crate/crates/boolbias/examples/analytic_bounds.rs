//! Closed-form bounds on prior probabilities, checked against the exact
//! enumeration where it is feasible and extrapolated where it is not.
//!
//! Run with `cargo run --release --example analytic_bounds`.

use boolbias::prior::bounds::{
    bound_1entropy, bound_constant, bound_parity, entropy_independence_curve, optimal_width,
    BoundParams,
};
use boolbias::{exact_prior, sample_prior, BooleanFunction, Family, FamilySpec, SubsetRule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = BoundParams::new(3, 1)?;
    let exact = exact_prior(3, 1)?;
    println!(
        "ensemble n = 3, width {}: a clause covers a fixed input w.p. {:.4}",
        params.rows(),
        params.p()
    );

    // Constants: at this small width the inclusion-exclusion lower bound is
    // vacuous (negative) yet valid; quadrupling the width makes it bite.
    let constant = bound_constant(&params);
    let p_false = exact.probability(&BooleanFunction::constant(3, false)?)?;
    println!(
        "\nP(constant 0) = {p_false:.5}  >=  bound {:.5} (width 4: vacuous but valid)",
        constant.lower
    );
    assert!(p_false >= constant.lower);
    let wide = bound_constant(&BoundParams::new(3, 4)?);
    let sampled = sample_prior(3, 4, 200_000, 2)?;
    let p_false_wide = sampled.probability(&BooleanFunction::constant(3, false)?)?;
    println!(
        "P(constant 0) ~ {p_false_wide:.5}  >=  bound {:.5} (width 16: informative)",
        wide.lower
    );
    assert!(p_false_wide >= wide.lower && wide.lower > 0.0);

    // Parity: two-sided bounds at matching Theta scale.
    let parity3 = FamilySpec {
        n: 3,
        family: Family::Parity {
            k: 3,
            subset: SubsetRule::FIRST,
        },
        seed: 0,
    }
    .generate()?;
    let pb = bound_parity(&params, 3)?;
    let p_parity = exact.probability(&parity3)?;
    println!(
        "P(3-parity)   = {:.3e}  in  [{:.3e}, {:.3e}] (Theta exponent {})",
        p_parity, pb.lower.linear, pb.upper.linear, pb.theta_exponent
    );
    // The lower bound is exactly attained here, so allow log-space rounding.
    let slack = 1.0 + 1e-9;
    assert!(pb.lower.linear <= p_parity * slack && p_parity <= pb.upper.linear * slack);

    // Single-true-output functions, conditioned on the negative output sign.
    let eb = bound_1entropy(&params);
    println!(
        "P(one-hot | negative sign) in [{:.3e}, {:.3e}]",
        eb.lower.linear, eb.upper.linear
    );

    // Out of exhaustive reach, the same forms still bracket: the 7-input
    // parity bounds span the region the samplers never visit.
    let params7 = BoundParams::new(7, 2)?;
    let pb7 = bound_parity(&params7, 7)?;
    println!(
        "\nn = 7, width {}: ln P(7-parity) in [{:.1}, {:.1}]",
        params7.rows(),
        pb7.lower.ln,
        pb7.upper.ln
    );

    // The entropy argument behind the bounds treats clause coverage as
    // independent across inputs; measuring the true accepted-clause fraction
    // shows how good that approximation is.
    println!("\naccepted-clause fraction vs independence model (n = 4):");
    for t in [1u64, 4, 8, 12, 15] {
        let c = entropy_independence_curve(4, t, 400, 11)?;
        println!(
            "  t = {t:>2}: measured {:.4} +- {:.4}, model {:.4}",
            c.mean, c.stddev, c.model
        );
    }

    // The width that maximizes single-clause acceptance mass.
    println!(
        "\nmost favorable width multiplier at n = 3: alpha_w ~ {:.2}",
        optimal_width(3)?
    );
    Ok(())
}
