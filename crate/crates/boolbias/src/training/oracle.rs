//! The minimum-formula learner: fit the training labels exactly with the
//! cheapest positive-sign DNF, treating unseen inputs as free.
//!
//! Because held-out inputs are don't-cares, the minimizer extends the
//! training labels by whatever total function admits the fewest literals —
//! the network-parameter analogue of picking a minimum-norm interpolator.

use super::Dataset;
use crate::complexity::{min_dnf, Objective};
use crate::dnf::Dnf;
use crate::error::Result;
use crate::BooleanFunction;

/// Result of the exact minimum-literal fit.
#[derive(Clone, Debug)]
pub struct OracleOutcome {
    /// Cheapest positive-sign formula consistent with the training labels.
    pub dnf: Dnf,
    /// The total function that formula computes (its truth table).
    pub prediction: BooleanFunction,
    /// Literal count of `dnf`.
    pub cost: u64,
}

/// Exactly minimize literal count subject to matching every training label,
/// with the held-out inputs free. Deterministic: ties are broken by the
/// minimizer's canonical clause order.
pub fn oracle_train(data: &Dataset) -> Result<OracleOutcome> {
    let n = data.n();
    let target = data.target();
    let on = BooleanFunction::from_indices(
        n,
        data.train().iter().copied().filter(|&i| target.get(i)),
    )?;
    let dont_care = BooleanFunction::from_indices(n, data.test().iter().copied())?;
    let minimal = min_dnf(&on, &dont_care, Objective::Literals, false)?;
    let prediction = minimal.dnf.truth_table();
    Ok(OracleOutcome {
        prediction,
        cost: minimal.cost,
        dnf: minimal.dnf,
    })
}
