//! Exhaustive check that weight decay tilts the interpolating posterior
//! toward formulas of low literal complexity.
//!
//! For tiny dimensions every parameter state `(W1, W2, beta)` is enumerated.
//! Restricted to states that fit the training labels exactly, two posteriors
//! over the computed functions are compared: the flat one (each interpolating
//! state counts once) and the tilted one (each state weighted by
//! `exp(-lambda * |theta|)`). The log of their ratio should fall with the
//! function's minimum literal count — weight decay is a complexity prior.

use super::Dataset;
use crate::boolfn::{packed_table, packed_var_tables, BooleanFunction};
use crate::complexity;
use crate::error::{Error, Result};
use serde::Serialize;

/// Enumeration budget: `log2(#states)` must stay below this.
const MAX_TILT_STATE_BITS: f64 = 25.0;

/// One interpolating function and its two posterior masses.
#[derive(Clone, Debug, Serialize)]
pub struct TiltEntry {
    /// The function, as its truth-table bit string.
    #[serde(serialize_with = "as_bit_string")]
    pub function: BooleanFunction,
    /// Minimum literal count of any DNF computing it.
    pub k_dnf: u32,
    /// Number of interpolating states computing it.
    pub count: u64,
    /// Weight-decay-tilted posterior mass.
    pub posterior: f64,
    /// Flat (uniform-over-states) posterior mass.
    pub flat_posterior: f64,
    /// `ln(posterior / flat_posterior)`.
    pub log_ratio: f64,
}

/// Result of the exhaustive posterior-tilt enumeration.
#[derive(Clone, Debug, Serialize)]
pub struct TiltReport {
    pub lambda: f64,
    /// Total parameter states enumerated.
    pub states: u64,
    /// States that fit every training label.
    pub interpolating_states: u64,
    /// Spearman rank correlation between `log_ratio` and `-lambda * k_dnf`
    /// across interpolating functions; `None` when it is undefined (fewer
    /// than two functions, `lambda = 0`, or a constant variable).
    pub correlation: Option<f64>,
    /// One row per interpolating function, sorted by tilted posterior
    /// (descending), ties by truth-table string.
    pub entries: Vec<TiltEntry>,
}

/// Exhaustively enumerate all `2 * 3^(n*M) * 2^M` parameter states of the
/// `(n, alpha_w)` ensemble and compare the flat and weight-decay-tilted
/// posteriors over the functions that interpolate `data`'s training labels.
pub fn posterior_tilt_check(data: &Dataset, alpha_w: usize, lambda: f64) -> Result<TiltReport> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "lambda must be non-negative and finite, got {lambda}"
        )));
    }
    let width = super::validate_chain_dims(data, alpha_w)?;
    let n = data.n();
    let digits = n * width;
    let state_bits = digits as f64 * 3f64.log2() + width as f64 + 1.0;
    if state_bits > MAX_TILT_STATE_BITS {
        return Err(Error::BudgetExceeded(format!(
            "enumerating (n = {n}, alpha_w = {alpha_w}) needs about 2^{state_bits:.1} states, \
             budget is 2^{MAX_TILT_STATE_BITS}"
        )));
    }
    let table_len = 1usize << n;
    let target_key = packed_table(data.target());
    let train_mask = data
        .train()
        .iter()
        .fold(0u128, |m, &i| m | 1u128 << i);

    // Cover table and nonzero count for each of the 3^n row codes. A row
    // whose weights are all zero fires on every input when its gate is on.
    let (vars, full) = packed_var_tables(n);
    let codes = 3usize.pow(n as u32);
    let mut row_cover = vec![0u128; codes];
    let mut row_nnz = vec![0u32; codes];
    for code in 0..codes {
        let mut cover = full;
        let mut nnz = 0;
        let mut rest = code;
        for var in vars.iter().take(n) {
            match rest % 3 {
                0 => {
                    cover &= !var;
                    nnz += 1;
                }
                2 => {
                    cover &= var;
                    nnz += 1;
                }
                _ => {}
            }
            rest /= 3;
        }
        row_cover[code] = cover;
        row_nnz[code] = nnz;
    }

    // exp(-lambda * norm) for every reachable norm.
    let weight_of: Vec<f64> = (0..=digits + width)
        .map(|norm| (-lambda * norm as f64).exp())
        .collect();

    // Accumulators indexed by the packed truth table (n <= 3 here, so at
    // most 256 distinct functions).
    let mut tilted = vec![0f64; 1 << table_len];
    let mut flat = vec![0u64; 1 << table_len];
    let mut interpolating_states = 0u64;

    let gate_sets = 1usize << width;
    let mut gate_union = vec![0u128; gate_sets];
    let mut rows = vec![0usize; width];
    loop {
        // Unions of active-row covers for every gate subset, by peeling the
        // lowest set bit.
        let w1_nnz: u32 = rows.iter().map(|&c| row_nnz[c]).sum();
        for s in 1..gate_sets {
            let low = s.trailing_zeros() as usize;
            gate_union[s] = gate_union[s & (s - 1)] | row_cover[rows[low]];
        }
        for (s, &union) in gate_union.iter().enumerate() {
            let norm = (w1_nnz + s.count_ones()) as usize;
            for key in [union, !union & full] {
                if (key ^ target_key) & train_mask == 0 {
                    interpolating_states += 1;
                    tilted[key as usize] += weight_of[norm];
                    flat[key as usize] += 1;
                }
            }
        }

        // Advance the mixed-radix odometer over row codes.
        let mut row = 0;
        loop {
            if row == width {
                break;
            }
            rows[row] += 1;
            if rows[row] < codes {
                break;
            }
            rows[row] = 0;
            row += 1;
        }
        if row == width {
            break;
        }
    }

    let states = 2 * (codes as u64).pow(width as u32) * gate_sets as u64;
    let tilted_total: f64 = tilted.iter().sum();
    let flat_total = interpolating_states as f64;
    let mut entries = Vec::new();
    for key in 0..flat.len() {
        if flat[key] == 0 {
            continue;
        }
        let function = BooleanFunction::from_bits(n, (0..table_len).map(|i| key >> i & 1 == 1))
            .expect("valid dimension");
        let posterior = tilted[key] / tilted_total;
        let flat_posterior = flat[key] as f64 / flat_total;
        entries.push(TiltEntry {
            k_dnf: complexity::k_dnf(&function)?,
            count: flat[key],
            posterior,
            flat_posterior,
            log_ratio: (posterior / flat_posterior).ln(),
            function,
        });
    }
    entries.sort_by(|a, b| {
        b.posterior
            .partial_cmp(&a.posterior)
            .expect("posteriors are finite")
            .then_with(|| a.function.to_string().cmp(&b.function.to_string()))
    });

    let log_ratios: Vec<f64> = entries.iter().map(|e| e.log_ratio).collect();
    let targets: Vec<f64> = entries.iter().map(|e| -lambda * e.k_dnf as f64).collect();
    let correlation = if lambda == 0.0 {
        None
    } else {
        spearman(&log_ratios, &targets)
    };

    Ok(TiltReport {
        lambda,
        states,
        interpolating_states,
        correlation,
        entries,
    })
}

fn as_bit_string<S: serde::Serializer>(
    f: &BooleanFunction,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(f)
}

/// Average ranks (1-based), ties sharing their mean rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let shared = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = shared;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation; `None` when undefined.
fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 {
        return None;
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mx, my) = (mean(&rx), mean(&ry));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfcn::DfcnParams;
    use crate::dnf::Sign;

    fn parity(n: usize, k: usize) -> BooleanFunction {
        BooleanFunction::from_bits(n, (0..1u32 << n).map(|i| (i >> (n - k)).count_ones() % 2 == 1))
            .unwrap()
    }

    /// Brute-force oracle: walk every state through `DfcnParams` itself.
    fn direct_enumeration(data: &Dataset, width: usize, lambda: f64) -> (u64, Vec<(String, f64, u64)>) {
        let n = data.n();
        let digits = n * width;
        let mut tallies: std::collections::BTreeMap<String, (f64, u64)> = Default::default();
        let mut interp = 0u64;
        let mut code = vec![0u8; digits];
        loop {
            let mut params = DfcnParams::zeros(n, width, Sign::Plus).unwrap();
            for (i, &d) in code.iter().enumerate() {
                params.set_w1(i / n, i % n, d as i8 - 1).unwrap();
            }
            for gates in 0..1usize << width {
                for row in 0..width {
                    params.set_w2(row, gates >> row & 1 == 1);
                }
                for beta in [Sign::Plus, Sign::Minus] {
                    params.set_beta(beta);
                    let f = params.truth_table();
                    if data
                        .train()
                        .iter()
                        .all(|&i| f.get(i) == data.target().get(i))
                    {
                        interp += 1;
                        let norm = params.weight_norm().total();
                        let e = tallies.entry(f.to_string()).or_insert((0.0, 0));
                        e.0 += (-lambda * norm as f64).exp();
                        e.1 += 1;
                    }
                }
            }
            let mut i = 0;
            while i < digits && code[i] == 2 {
                code[i] = 0;
                i += 1;
            }
            if i == digits {
                break;
            }
            code[i] += 1;
        }
        (
            interp,
            tallies.into_iter().map(|(k, (w, c))| (k, w, c)).collect(),
        )
    }

    #[test]
    fn matches_a_direct_walk_through_the_network() {
        let data = Dataset::random(parity(2, 2), 2, 7).unwrap();
        let lambda = 0.35;
        let report = posterior_tilt_check(&data, 1, lambda).unwrap();
        let (interp, tallies) = direct_enumeration(&data, 2, lambda);
        assert_eq!(report.states, 2 * 3u64.pow(4) * 4);
        assert_eq!(report.interpolating_states, interp);
        assert_eq!(report.entries.len(), tallies.len());
        let total_w: f64 = tallies.iter().map(|t| t.1).sum();
        for entry in &report.entries {
            let (_, w, c) = tallies
                .iter()
                .find(|t| t.0 == entry.function.to_string())
                .expect("function present in the oracle walk");
            assert_eq!(entry.count, *c);
            assert!((entry.posterior - w / total_w).abs() < 1e-12);
            assert!((entry.flat_posterior - *c as f64 / interp as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_decay_gives_flat_ratios_and_no_correlation() {
        let data = Dataset::random(parity(3, 3), 4, 1).unwrap();
        let report = posterior_tilt_check(&data, 1, 0.0).unwrap();
        assert!(report.correlation.is_none());
        assert!(!report.entries.is_empty());
        for e in &report.entries {
            assert_eq!(e.log_ratio, 0.0);
            assert_eq!(e.posterior, e.flat_posterior);
        }
        let total: f64 = report.entries.iter().map(|e| e.posterior).sum();
        assert!((total - 1.0).abs() < 1e-9);
        let counted: u64 = report.entries.iter().map(|e| e.count).sum();
        assert_eq!(counted, report.interpolating_states);
    }

    #[test]
    fn decay_tilts_toward_low_literal_counts() {
        let data = Dataset::random(parity(3, 3), 4, 1).unwrap();
        let report = posterior_tilt_check(&data, 1, 0.1).unwrap();
        let rho = report.correlation.expect("correlation defined");
        assert!(rho > 0.0, "rank correlation {rho} not positive");
        // The cheapest interpolator should gain mass, the dearest lose it.
        let min_k = report.entries.iter().min_by_key(|e| e.k_dnf).unwrap();
        let max_k = report.entries.iter().max_by_key(|e| e.k_dnf).unwrap();
        assert!(min_k.log_ratio > max_k.log_ratio);
    }

    #[test]
    fn budget_and_argument_validation() {
        let small = Dataset::random(parity(3, 1), 4, 0).unwrap();
        assert!(posterior_tilt_check(&small, 2, 0.1).is_err());
        let big = Dataset::random(parity(4, 1), 8, 0).unwrap();
        assert!(posterior_tilt_check(&big, 1, 0.1).is_err());
        assert!(posterior_tilt_check(&small, 1, -0.5).is_err());
        assert!(posterior_tilt_check(&small, 1, f64::NAN).is_err());
    }

    #[test]
    fn rank_helpers_handle_ties() {
        let ranks = average_ranks(&[3.0, 1.0, 3.0, 2.0]);
        assert_eq!(ranks, vec![3.5, 1.0, 3.5, 2.0]);
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]), Some(1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]), None);
        assert_eq!(spearman(&[1.0], &[2.0]), None);
        let anti = spearman(&[1.0, 2.0, 3.0], &[9.0, 5.0, 1.0]).unwrap();
        assert_eq!(anti, -1.0);
    }
}
