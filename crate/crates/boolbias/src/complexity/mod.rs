//! Boolean-function complexity measures.
//!
//! Three of the four measures are defined through exact DNF minimization
//! under different objectives (see [`minimize`]): `k_dnf` is the least total
//! literal count, `k_theta` the least literals-plus-clauses (equivalently the
//! least total nonzero-weight count of a network expressing the function),
//! and `k_clause` twice the least clause count. All three minimize over both
//! output signs. The fourth, `k_lz`, scores the truth-table string with a
//! direction-symmetrized Lempel-Ziv parse and needs no search.
//!
//! [`complexity_report`] bundles all four and checks the arithmetic relations
//! that must hold between them whenever the function is not constant:
//!
//! ```text
//! k_dnf + ceil(k_dnf / n) <= k_theta <= k_dnf + 2^ceil(log2 k_dnf)
//! 2 * ceil(k_dnf / n)     <= k_clause
//! ```

mod lz;
mod minimize;

pub use lz::{k_lz, word_count};
pub use minimize::{min_dnf, MinimalDnf, Objective, MAX_MIN_DNF_N};

use crate::boolfn::BooleanFunction;
use crate::error::Result;
use serde::{Deserialize, Serialize};

fn measure(f: &BooleanFunction, objective: Objective) -> Result<u64> {
    let none = BooleanFunction::zeros(f.n())?;
    Ok(min_dnf(f, &none, objective, true)?.cost)
}

/// Least total literal count of any DNF (either sign) expressing `f`.
/// Constant functions cost 0: the empty formula under the right sign.
pub fn k_dnf(f: &BooleanFunction) -> Result<u32> {
    Ok(measure(f, Objective::Literals)? as u32)
}

/// Least literals-plus-clauses of any DNF expressing `f`; equals the least
/// count of nonzero weights over networks expressing `f`.
pub fn k_theta(f: &BooleanFunction) -> Result<u32> {
    Ok(measure(f, Objective::LiteralsPlusClauses)? as u32)
}

/// Twice the least clause count of any DNF expressing `f`.
pub fn k_clause(f: &BooleanFunction) -> Result<u32> {
    Ok(2 * measure(f, Objective::Clauses)? as u32)
}

/// All four complexity measures of one function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub n: usize,
    /// Truth table as a 0/1 string (index 0 first).
    pub function: String,
    /// Truth table in hexadecimal (two characters per byte, index 0 at the
    /// most significant bit of the first byte).
    pub function_hex: String,
    pub k_dnf: u32,
    pub k_theta: u32,
    pub k_clause: u32,
    pub k_lz: f64,
}

/// Smallest `e` with `2^e >= k`; `k` must be positive.
fn ceil_log2(k: u32) -> u32 {
    k.next_power_of_two().trailing_zeros()
}

/// Compute every measure for `f` and check the relations between them.
pub fn complexity_report(f: &BooleanFunction) -> Result<ComplexityReport> {
    let report = ComplexityReport {
        n: f.n(),
        function: f.to_string(),
        function_hex: f.to_hex(),
        k_dnf: k_dnf(f)?,
        k_theta: k_theta(f)?,
        k_clause: k_clause(f)?,
        k_lz: k_lz(&f.to_string())?,
    };
    let k = report.k_dnf;
    if k == 0 {
        assert_eq!(report.k_theta, 0, "constant function with nonzero k_theta");
        assert_eq!(report.k_clause, 0, "constant function with nonzero k_clause");
    } else {
        let n = f.n() as u32;
        let per_clause_floor = k.div_ceil(n);
        assert!(
            k + per_clause_floor <= report.k_theta,
            "k_theta {} below its floor {} for {}",
            report.k_theta,
            k + per_clause_floor,
            report.function
        );
        assert!(
            report.k_theta <= k + (1 << ceil_log2(k)),
            "k_theta {} above its ceiling {} for {}",
            report.k_theta,
            k + (1 << ceil_log2(k)),
            report.function
        );
        assert!(
            2 * per_clause_floor <= report.k_clause,
            "k_clause {} below its floor {} for {}",
            report.k_clause,
            2 * per_clause_floor,
            report.function
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{Family, FamilySpec, SubsetRule};
    use crate::dfcn::DfcnParams;
    use crate::dnf::Sign;
    use std::collections::HashMap;

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
        .unwrap()
    }

    #[test]
    fn parity_literal_counts() {
        for (k, expected) in [(1usize, 1u32), (2, 4), (3, 12), (4, 32)] {
            let f = parity(k, k);
            assert_eq!(k_dnf(&f).unwrap(), expected, "{k}-parity");
        }
    }

    #[test]
    fn constant_report_is_all_zero() {
        let f = BooleanFunction::constant(3, true).unwrap();
        let report = complexity_report(&f).unwrap();
        assert_eq!(
            (report.k_dnf, report.k_theta, report.k_clause),
            (0, 0, 0)
        );
        assert_eq!(report.k_lz, k_lz("11111111").unwrap());
        assert_eq!(report.function_hex, "ff");
    }

    #[test]
    fn full_parity_report_matches_closed_forms() {
        for n in [2usize, 3] {
            let f = parity(n, n);
            let report = complexity_report(&f).unwrap();
            let half = 1u32 << (n - 1);
            assert_eq!(report.k_dnf, n as u32 * half);
            assert_eq!(report.k_theta, (n as u32 + 1) * half);
            assert_eq!(report.k_clause, 1 << n);
        }
    }

    #[test]
    fn complement_invariance() {
        for seed in 0..8u64 {
            let f = FamilySpec {
                n: 4,
                family: Family::Entropy { t: 5 + seed },
                seed,
            }
            .generate()
            .unwrap();
            assert_eq!(k_dnf(&f).unwrap(), k_dnf(&f.complement()).unwrap());
        }
    }

    #[test]
    fn entropy_instances_respect_the_literal_budget() {
        let n = 4usize;
        for t in 0..=16u64 {
            for seed in 0..6u64 {
                let f = FamilySpec {
                    n,
                    family: Family::Entropy { t },
                    seed,
                }
                .generate()
                .unwrap();
                let bound = n as u32 * t.min(16 - t) as u32;
                assert!(
                    k_dnf(&f).unwrap() <= bound,
                    "t={t} seed={seed} exceeded {bound}"
                );
            }
        }
    }

    #[test]
    fn literal_count_is_min_network_norm_at_width_two() {
        // Exhaustive check over every width-2 parameter setting at n=2:
        // the least first-layer nonzero count among networks computing f
        // equals k_dnf(f).
        let mut best: HashMap<String, u32> = HashMap::new();
        for code in 0..81u32 {
            let digits = [
                code % 3,
                code / 3 % 3,
                code / 9 % 3,
                code / 27 % 3,
            ];
            for gates in 0..4u32 {
                for beta in [Sign::Plus, Sign::Minus] {
                    let mut p = DfcnParams::zeros(2, 2, beta).unwrap();
                    for (i, &d) in digits.iter().enumerate() {
                        p.set_w1(i / 2, i % 2, d as i8 - 1).unwrap();
                    }
                    p.set_w2(0, gates & 1 == 1);
                    p.set_w2(1, gates & 2 == 2);
                    let table = p.truth_table().to_string();
                    let norm = p.weight_norm().norm_w1;
                    best.entry(table)
                        .and_modify(|b| *b = (*b).min(norm))
                        .or_insert(norm);
                }
            }
        }
        assert_eq!(best.len(), 16, "width 2 realizes every n=2 function");
        for (table, norm) in best {
            let f: BooleanFunction = table.parse().unwrap();
            assert_eq!(k_dnf(&f).unwrap(), norm, "function {f}");
        }
    }

    #[test]
    fn tiled_pattern_complexity_is_dimension_independent() {
        let tile = |n: usize| {
            FamilySpec {
                n,
                family: Family::Repeat {
                    pattern: "1001".into(),
                },
                seed: 0,
            }
            .generate()
            .unwrap()
        };
        let at4 = k_dnf(&tile(4)).unwrap();
        let at5 = k_dnf(&tile(5)).unwrap();
        assert_eq!(at4, at5);
        assert!(at4 > 0);
    }

    #[test]
    fn partial_parity_learning_instances() {
        // Minimal formulas consistent with short prefixes of 4-parity,
        // remaining inputs free. Four labeled inputs admit a 4-literal
        // two-variable parity; eight labeled inputs force 3-parity.
        let on = BooleanFunction::from_indices(4, [1, 2]).unwrap();
        let dc = BooleanFunction::from_indices(4, 4..16).unwrap();
        let got = min_dnf(&on, &dc, Objective::Literals, false).unwrap();
        assert_eq!(got.cost, 4);
        assert_eq!(
            got.dnf.truth_table().to_string(),
            "0110011001100110"
        );

        let on = BooleanFunction::from_indices(4, [1, 2, 4, 7]).unwrap();
        let dc = BooleanFunction::from_indices(4, 8..16).unwrap();
        let got = min_dnf(&on, &dc, Objective::Literals, false).unwrap();
        assert_eq!(got.cost, 12);
        assert_eq!(
            got.dnf.truth_table().to_string(),
            "0110100101101001"
        );
    }

    #[test]
    fn reports_are_serializable() {
        let report = complexity_report(&parity(2, 2)).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: ComplexityReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
