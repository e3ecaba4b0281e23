//! Exact minimal-DNF search.
//!
//! Two stages, both exact:
//!
//! 1. **Prime implicant enumeration.** Walk all `3^n` cubes (each variable
//!    absent, positive, or negated) depth-first, maintaining the cube's cover
//!    as a bitset and pruning any branch whose cover misses every required
//!    minterm. A cube is an implicant when its cover avoids the off-set;
//!    don't-care inputs may be covered freely. An implicant is prime when no
//!    single-literal removal stays within the implicant set.
//! 2. **Weighted exact set cover.** Branch-and-bound over the prime clauses:
//!    always branch on the uncovered minterm with the fewest remaining
//!    candidates, force nothing else, and prune with the bound
//!    `ceil(uncovered / max_cover) * min_weight`. A second pass rebuilds the
//!    lexicographically least optimal solution in canonical clause order
//!    (fewest literals, then positive mask, then negative mask), so equal-cost
//!    answers are bit-for-bit deterministic.
//!
//! When the off-set is empty every single-literal clause already works and the
//! cube walk is skipped: candidates are the `2n` single literals (the empty
//! clause is not a candidate because an empty clause evaluates to false, and a
//! tautology marker is not part of formula syntax).

use crate::bits;
use crate::boolfn::BooleanFunction;
use crate::dnf::{Clause, Dnf, Sign};
use crate::error::{Error, Result};
use std::collections::HashSet;

/// Largest dimension accepted by [`min_dnf`]; the cube walk is `O(3^n)` and
/// the cover search is worst-case exponential, so this is a safety rail.
pub const MAX_MIN_DNF_N: usize = 12;

/// What the set-cover stage charges per clause.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Total literal count (network nonzero-weight count of the first layer).
    Literals,
    /// Clause count.
    Clauses,
    /// Literal count plus clause count (total nonzero network weights).
    LiteralsPlusClauses,
}

impl Objective {
    fn weight(self, clause: &Clause) -> u64 {
        match self {
            Objective::Literals => clause.literal_count() as u64,
            Objective::Clauses => 1,
            Objective::LiteralsPlusClauses => clause.literal_count() as u64 + 1,
        }
    }
}

/// An exact minimizer result: the witness formula and its objective value.
#[derive(Clone, Debug)]
pub struct MinimalDnf {
    /// Lexicographically least optimal formula, clauses in canonical order.
    pub dnf: Dnf,
    /// Objective value of `dnf` (0 for the always-false empty formula).
    pub cost: u64,
}

/// Exact minimum-cost DNF whose positive part covers every minterm of `on`,
/// avoids every minterm outside `on | dont_care`, and is free on `dont_care`.
///
/// With `allow_negation` the complemented problem (cover the off-set, output
/// sign flipped) competes too and ties go to the positive sign. The returned
/// formula is the unique lexicographically least optimum under the canonical
/// clause order, so equal inputs always produce identical output.
pub fn min_dnf(
    on: &BooleanFunction,
    dont_care: &BooleanFunction,
    objective: Objective,
    allow_negation: bool,
) -> Result<MinimalDnf> {
    let n = on.n();
    if dont_care.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: dont_care.n(),
        });
    }
    if n > MAX_MIN_DNF_N {
        return Err(Error::BudgetExceeded(format!(
            "exact minimization is limited to n <= {MAX_MIN_DNF_N}, got n = {n}"
        )));
    }
    if on.intersects(dont_care) {
        return Err(Error::InvalidArgument(
            "required and don't-care sets overlap".into(),
        ));
    }

    let off = on.or(dont_care)?.complement();
    let plus = solve_polarity(n, on, &off, objective)?;
    let best = if allow_negation {
        let minus = solve_polarity(n, &off, on, objective)?;
        if minus.0 < plus.0 {
            (minus.0, minus.1, Sign::Minus)
        } else {
            (plus.0, plus.1, Sign::Plus)
        }
    } else {
        (plus.0, plus.1, Sign::Plus)
    };
    Ok(MinimalDnf {
        dnf: Dnf::new(n, best.2, best.1)?,
        cost: best.0,
    })
}

/// Minimum cost to cover `cover` while avoiding `avoid`, plus the
/// lexicographically least witness clause list.
fn solve_polarity(
    n: usize,
    cover: &BooleanFunction,
    avoid: &BooleanFunction,
    objective: Objective,
) -> Result<(u64, Vec<Clause>)> {
    if cover.count_ones() == 0 {
        return Ok((0, Vec::new()));
    }
    let candidates = if avoid.count_ones() == 0 {
        // Every single literal covers its half-cube and nothing is forbidden;
        // larger cubes are never cheaper than a literal under any objective.
        let mut single: Vec<Clause> = (1..=n)
            .flat_map(|var| {
                [
                    Clause::from_literals(n, &[(var, true)]).expect("literal in range"),
                    Clause::from_literals(n, &[(var, false)]).expect("literal in range"),
                ]
            })
            .collect();
        single.sort();
        single
    } else {
        prime_implicants(n, cover, avoid)
    };
    let problem = CoverProblem::build(cover, &candidates, objective);
    let (cost, picked) = problem.solve();
    Ok((
        cost,
        picked.into_iter().map(|i| candidates[i]).collect(),
    ))
}

/// All prime implicants of the cover/avoid pair, in canonical clause order.
fn prime_implicants(n: usize, cover: &BooleanFunction, avoid: &BooleanFunction) -> Vec<Clause> {
    let var_tables: Vec<BooleanFunction> = (1..=n)
        .map(|i| BooleanFunction::var(n, i).expect("dimension already validated"))
        .collect();
    let words = cover.words().len();
    let mut stack = vec![vec![0u64; words]; n + 1];
    let mut full = vec![u64::MAX; words];
    let len = 1usize << n;
    if let Some(last) = full.last_mut() {
        *last = bits::tail_mask(len);
    }
    stack[0] = full;
    let mut implicants: HashSet<(u16, u16)> = HashSet::new();

    struct Walk<'a> {
        n: usize,
        var_tables: &'a [BooleanFunction],
        cover: &'a [u64],
        avoid: &'a [u64],
        stack: &'a mut [Vec<u64>],
        implicants: &'a mut HashSet<(u16, u16)>,
    }

    fn descend(w: &mut Walk<'_>, depth: usize, pos: u16, neg: u16) {
        if !bits::intersects(&w.stack[depth], w.cover) {
            return; // this cube misses every required minterm
        }
        if depth == w.n {
            if !bits::intersects(&w.stack[depth], w.avoid) {
                w.implicants.insert((pos, neg));
            }
            return;
        }
        let bit = 1u16 << (w.n - 1 - depth);

        let (head, tail) = w.stack.split_at_mut(depth + 1);
        tail[0].copy_from_slice(&head[depth]);
        descend(w, depth + 1, pos, neg);

        let (head, tail) = w.stack.split_at_mut(depth + 1);
        tail[0].copy_from_slice(&head[depth]);
        bits::and_assign(&mut w.stack[depth + 1], w.var_tables[depth].words());
        descend(w, depth + 1, pos | bit, neg);

        let (head, tail) = w.stack.split_at_mut(depth + 1);
        tail[0].copy_from_slice(&head[depth]);
        bits::and_not_assign(&mut w.stack[depth + 1], w.var_tables[depth].words());
        descend(w, depth + 1, pos, neg | bit);
    }

    let mut walk = Walk {
        n,
        var_tables: &var_tables,
        cover: cover.words(),
        avoid: avoid.words(),
        stack: &mut stack,
        implicants: &mut implicants,
    };
    descend(&mut walk, 0, 0, 0);

    let mut primes: Vec<Clause> = implicants
        .iter()
        .filter(|&&(pos, neg)| {
            // Prime: dropping any single literal leaves the implicant set.
            // Within a set closed under supersets-of-cover this exact check
            // holds because the one-literal-removed cube covers a superset.
            let mut p = pos;
            while p != 0 {
                let bit = p & p.wrapping_neg();
                if implicants.contains(&(pos ^ bit, neg)) {
                    return false;
                }
                p ^= bit;
            }
            let mut q = neg;
            while q != 0 {
                let bit = q & q.wrapping_neg();
                if implicants.contains(&(pos, neg ^ bit)) {
                    return false;
                }
                q ^= bit;
            }
            true
        })
        .map(|&(pos, neg)| Clause::from_masks(n, pos, neg).expect("cube masks are disjoint"))
        .collect();
    primes.sort();
    primes
}

/// Weighted exact-cover instance over the required minterms.
struct CoverProblem {
    /// Bits `0..element_count` of the universe, one per required minterm.
    full: Vec<u64>,
    element_count: usize,
    /// Candidate cover sets in canonical clause order.
    sets: Vec<CandidateSet>,
}

struct CandidateSet {
    weight: u64,
    /// Covered elements, as a bitset over element indices.
    mask: Vec<u64>,
}

impl CoverProblem {
    fn build(cover: &BooleanFunction, candidates: &[Clause], objective: Objective) -> Self {
        let element_of: Vec<usize> = bits::iter_ones(cover.words()).collect();
        let mut position = vec![usize::MAX; cover.len()];
        for (e, &idx) in element_of.iter().enumerate() {
            position[idx] = e;
        }
        let element_count = element_of.len();
        let words = bits::word_count(element_count);
        let mut full = vec![0u64; words];
        for e in 0..element_count {
            bits::set(&mut full, e, true);
        }
        let sets = candidates
            .iter()
            .map(|clause| {
                let table = clause.cover_table();
                let mut mask = vec![0u64; words];
                for idx in bits::iter_ones(table.words()) {
                    if idx < position.len() && position[idx] != usize::MAX {
                        bits::set(&mut mask, position[idx], true);
                    }
                }
                CandidateSet {
                    weight: objective.weight(clause),
                    mask,
                }
            })
            .collect();
        CoverProblem {
            full,
            element_count,
            sets,
        }
    }

    /// Optimal cost and the lexicographically least optimal set of candidate
    /// indices (ascending). The instance is always feasible by construction.
    fn solve(&self) -> (u64, Vec<usize>) {
        let empty = vec![0u64; self.full.len()];
        let best = self
            .min_cost(&empty, 0, u64::MAX)
            .expect("a full-length clause exists for every required minterm");

        let mut picked = Vec::new();
        let mut covered = empty;
        let mut budget = best;
        let mut i = 0usize;
        while covered != self.full {
            assert!(
                i < self.sets.len(),
                "optimal cover reconstruction lost feasibility"
            );
            let set = &self.sets[i];
            if set.weight <= budget && gains(&set.mask, &covered) {
                let mut next = covered.clone();
                bits::or_assign(&mut next, &set.mask);
                if self.min_cost(&next, i + 1, budget - set.weight) == Some(budget - set.weight) {
                    picked.push(i);
                    covered = next;
                    budget -= set.weight;
                }
            }
            i += 1;
        }
        (best, picked)
    }

    /// Least total weight completing `covered` using sets with index >= floor,
    /// or `None` when that exceeds `budget` (or is infeasible).
    fn min_cost(&self, covered: &[u64], floor: usize, budget: u64) -> Option<u64> {
        if covered == self.full.as_slice() {
            return Some(0);
        }
        // Candidate scan: per-element candidate counts, plus bound inputs.
        let mut counts = vec![0u32; self.element_count];
        let mut min_weight = u64::MAX;
        let mut max_gain = 0usize;
        for set in &self.sets[floor..] {
            let mut gain = 0usize;
            for (w, (&m, &c)) in set.mask.iter().zip(covered.iter()).enumerate() {
                let mut fresh = m & !c;
                gain += fresh.count_ones() as usize;
                while fresh != 0 {
                    let b = fresh.trailing_zeros() as usize;
                    counts[w * 64 + b] += 1;
                    fresh &= fresh - 1;
                }
            }
            if gain > 0 {
                min_weight = min_weight.min(set.weight);
                max_gain = max_gain.max(gain);
            }
        }
        let mut pivot = usize::MAX;
        let mut pivot_count = u32::MAX;
        let mut uncovered = 0usize;
        for (e, &count) in counts.iter().enumerate().take(self.element_count) {
            if !bits::get(covered, e) {
                uncovered += 1;
                if count < pivot_count {
                    pivot_count = count;
                    pivot = e;
                }
            }
        }
        if pivot_count == 0 {
            return None; // some required minterm has no remaining candidate
        }
        let lower = (uncovered as u64).div_ceil(max_gain as u64) * min_weight;
        if lower > budget {
            return None;
        }
        let mut best: Option<u64> = None;
        let mut cap = budget;
        for i in floor..self.sets.len() {
            let set = &self.sets[i];
            if !bits::get(&set.mask, pivot) || set.weight > cap {
                continue;
            }
            let mut next = covered.to_vec();
            bits::or_assign(&mut next, &set.mask);
            if let Some(rest) = self.min_cost(&next, floor, cap - set.weight) {
                let total = set.weight + rest;
                if best.is_none_or(|b| total < b) {
                    best = Some(total);
                    cap = total.saturating_sub(1);
                }
            }
        }
        best.filter(|&b| b <= budget)
    }
}

/// Does `mask` cover anything not already in `covered`?
fn gains(mask: &[u64], covered: &[u64]) -> bool {
    mask.iter().zip(covered.iter()).any(|(&m, &c)| m & !c != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::BooleanFunction;

    fn f(bits: &str) -> BooleanFunction {
        bits.parse().unwrap()
    }

    fn none(n: usize) -> BooleanFunction {
        BooleanFunction::zeros(n).unwrap()
    }

    fn run(on: &str, objective: Objective) -> MinimalDnf {
        let on = f(on);
        min_dnf(&on, &none(on.n()), objective, true).unwrap()
    }

    #[test]
    fn constants_cost_zero() {
        let always_false = run("0000", Objective::Literals);
        assert_eq!(always_false.cost, 0);
        assert_eq!(always_false.dnf.to_string(), "");
        let always_true = run("1111", Objective::Literals);
        assert_eq!(always_true.cost, 0);
        assert_eq!(always_true.dnf.to_string(), "-");
    }

    #[test]
    fn single_literal_functions() {
        let got = run("0011", Objective::Literals);
        assert_eq!(got.cost, 1);
        assert_eq!(got.dnf.to_string(), "(x1)"); // ties in cost go to plus sign
        let got = run("0101", Objective::Literals);
        assert_eq!(got.dnf.to_string(), "(x2)");
        let got = run("1100", Objective::Literals);
        assert_eq!(got.dnf.to_string(), "(!x1)");
    }

    #[test]
    fn two_variable_parity() {
        let got = run("0110", Objective::Literals);
        assert_eq!(got.cost, 4);
        // Canonical clause order is ascending (length, pos_mask, neg_mask);
        // !x1&x2 has pos_mask 01 < x1&!x2's 10, so it prints first.
        assert_eq!(got.dnf.to_string(), "(!x1&x2)|(x1&!x2)");
        assert_eq!(run("0110", Objective::Clauses).cost, 2);
        assert_eq!(run("0110", Objective::LiteralsPlusClauses).cost, 6);
    }

    #[test]
    fn sign_ties_go_to_plus() {
        // "0111": the plus side needs (x2)|(x1), the minus side covers the
        // single zero with (!x1&!x2); literals prefer plus (2 < 2 is false,
        // it is a tie at 2) -- tie keeps the plus sign.
        let got = run("0111", Objective::Literals);
        assert_eq!(got.cost, 2);
        assert_eq!(got.dnf.to_string(), "(x2)|(x1)");

        // "1110" flips the roles: plus needs (!x2)|(!x1), minus (x1&x2).
        let got = run("1110", Objective::Literals);
        assert_eq!(got.dnf.to_string(), "(!x2)|(!x1)");

        // "1000": plus covers {0} with two literals, minus needs (x2)|(x1);
        // another tie, so plus with the single clause wins the sign.
        let got = run("1000", Objective::Literals);
        assert_eq!(got.dnf.to_string(), "(!x1&!x2)");

        // Under the clause objective "1000" favors minus... except a single
        // clause on the plus side also costs 1, so plus is kept again; the
        // genuinely asymmetric case is "0111" whose minus side needs one
        // clause versus two on the plus side.
        let got = run("0111", Objective::Clauses);
        assert_eq!(got.cost, 1);
        assert_eq!(got.dnf.to_string(), "-(!x1&!x2)");
    }

    #[test]
    fn dont_cares_shrink_the_formula() {
        // Without don't-cares "1001" is two-variable equivalence: 4 literals.
        // Freeing input 1 admits (!x1) for {0} and (x2) for {3} (it may cover
        // the free input), halving the cost.
        let on = f("1001");
        let dc = f("0100");
        let got = min_dnf(&on, &dc, Objective::Literals, false).unwrap();
        assert_eq!(got.cost, 2);
        assert_eq!(got.dnf.to_string(), "(!x1)|(x2)");
        assert_eq!(
            min_dnf(&on, &none(2), Objective::Literals, false).unwrap().cost,
            4
        );
    }

    #[test]
    fn overlap_between_on_and_dont_care_is_rejected() {
        let on = f("1000");
        assert!(min_dnf(&on, &on, Objective::Literals, true).is_err());
    }

    #[test]
    fn dimension_guard() {
        let on = BooleanFunction::zeros(13).unwrap();
        let dc = BooleanFunction::zeros(13).unwrap();
        assert!(matches!(
            min_dnf(&on, &dc, Objective::Literals, true),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn three_variable_parity_needs_all_four_clauses() {
        let got = run("01101001", Objective::Literals);
        assert_eq!(got.cost, 12);
        assert_eq!(got.dnf.clauses().len(), 4);
        assert_eq!(run("01101001", Objective::Clauses).cost, 4);
        assert_eq!(run("01101001", Objective::LiteralsPlusClauses).cost, 16);
    }

    #[test]
    fn covers_with_shared_minterms() {
        // ones {0,1,2,5,6,7} at n=3, zeros {3,4}: every single literal hits a
        // zero, so the positive side needs three 2-literal cubes (6 literals);
        // the negative side needs both zeros as full 3-literal clauses (also
        // 6 because no 2-cube isolates a zero). Tie stays positive.
        let got = run("11100111", Objective::Literals);
        assert_eq!(got.cost, 6);
        assert_eq!(got.dnf.clauses().len(), 3);
        let table = got.dnf.truth_table();
        assert_eq!(table.to_string(), "11100111");
    }

    #[test]
    fn deterministic_output() {
        let first = run("0110100110010110", Objective::Literals);
        let second = run("0110100110010110", Objective::Literals);
        assert_eq!(first.dnf, second.dnf);
        assert_eq!(first.cost, second.cost);
    }

    #[test]
    fn lexicographic_choice_among_equal_optima() {
        // Cover {1,2} with don't-care {3} at n=2: under the clause objective
        // both {(x2),(x1)} and the two mixed cubes {(!x1&x2),(x1&!x2)} cost
        // 2 clauses. The lexicographic rule compares clause lists under
        // ascending (length, pos_mask, neg_mask), so the single-literal pair
        // wins and (x2) (pos_mask 01) precedes (x1) (pos_mask 10).
        let on = f("0110");
        let dc = f("0001");
        let got = min_dnf(&on, &dc, Objective::Clauses, false).unwrap();
        assert_eq!(got.cost, 2);
        assert_eq!(got.dnf.to_string(), "(x2)|(x1)");
    }

    #[test]
    fn solution_always_realizes_the_function() {
        // Exhaustive n=2 and spot n=3: the witness's truth table matches on
        // required minterms and avoids forbidden ones.
        for code in 0u32..16 {
            let table = BooleanFunction::from_indices(
                2,
                (0..4).filter(|&i| code >> i & 1 == 1),
            )
            .unwrap();
            let got = min_dnf(&table, &none(2), Objective::Literals, true).unwrap();
            assert_eq!(got.dnf.truth_table(), table, "code {code}");
            assert_eq!(got.cost as u32, got.dnf.literal_count(), "code {code}");
        }
    }
}
