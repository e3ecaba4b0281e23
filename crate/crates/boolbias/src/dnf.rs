//! Signed disjunctive normal forms.
//!
//! A [`Dnf`] is a global sign `beta` plus an ordered list of [`Clause`]s
//! (conjunctions of literals). It evaluates to `OR(clauses)` when `beta` is
//! positive and `NOT OR(clauses)` when negative. Two special clauses exist:
//! the *empty* clause (no literals) is inactive and always evaluates false,
//! and a distinguished *tautology* marker always evaluates true. The
//! tautology marker is not produced by minimization; it only appears when
//! converting network states whose active rows are all-zero, so conversions
//! stay total.
//!
//! Textual syntax: an optional leading `-` for negative `beta`, then clauses
//! like `(x1&!x3)` joined by `|`. The empty clause prints as `()` and the
//! tautology marker as `(*)`.

use crate::bits;
use crate::boolfn::{index_of, BooleanFunction, MAX_N};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The global DNF sign; `Minus` negates the disjunction.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.as_i8()
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

const TAUTOLOGY_MASK: u16 = u16::MAX;

/// A conjunction of literals over `x_1..x_n`, stored as variable masks.
///
/// Mask bit `n - i` corresponds to variable `x_i`, matching the truth-table
/// index convention, so `covers_index` is two mask tests.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    n: u8,
    pos: u16,
    neg: u16,
}

impl Clause {
    /// The inactive clause (always false).
    pub fn empty(n: usize) -> Result<Self> {
        Self::from_masks(n, 0, 0)
    }

    /// The distinguished always-true marker.
    pub fn tautology(n: usize) -> Result<Self> {
        check_clause_n(n)?;
        Ok(Clause {
            n: n as u8,
            pos: TAUTOLOGY_MASK,
            neg: TAUTOLOGY_MASK,
        })
    }

    /// Build from index-aligned variable masks (`pos & neg` must be empty).
    pub fn from_masks(n: usize, pos: u16, neg: u16) -> Result<Self> {
        check_clause_n(n)?;
        let valid = ((1u32 << n) - 1) as u16;
        if pos & !valid != 0 || neg & !valid != 0 {
            return Err(Error::InvalidArgument(format!(
                "clause masks {pos:#x}/{neg:#x} exceed n = {n} variables"
            )));
        }
        if pos & neg != 0 {
            return Err(Error::InvalidArgument(
                "clause uses a variable both positively and negatively".into(),
            ));
        }
        Ok(Clause {
            n: n as u8,
            pos,
            neg,
        })
    }

    /// Build from literals given as `(variable_index_1_based, is_positive)`.
    pub fn from_literals(n: usize, literals: &[(usize, bool)]) -> Result<Self> {
        check_clause_n(n)?;
        let mut pos = 0u16;
        let mut neg = 0u16;
        for &(var, positive) in literals {
            if !(1..=n).contains(&var) {
                return Err(Error::InvalidArgument(format!(
                    "variable x{var} out of range for n = {n}"
                )));
            }
            let bit = 1u16 << (n - var);
            if positive {
                pos |= bit;
            } else {
                neg |= bit;
            }
        }
        Self::from_masks(n, pos, neg)
    }

    /// The full-length clause satisfied exactly by input `idx`.
    pub fn from_input(n: usize, idx: usize) -> Result<Self> {
        check_clause_n(n)?;
        if idx >= 1 << n {
            return Err(Error::InvalidArgument(format!(
                "input index {idx} out of range for n = {n}"
            )));
        }
        let valid = ((1u32 << n) - 1) as u16;
        Self::from_masks(n, idx as u16, !(idx as u16) & valid)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn is_tautology(&self) -> bool {
        self.pos == TAUTOLOGY_MASK && self.neg == TAUTOLOGY_MASK
    }

    pub fn is_empty(&self) -> bool {
        self.pos == 0 && self.neg == 0
    }

    /// Mask of positively required variables (empty for the tautology marker).
    pub fn pos_mask(&self) -> u16 {
        if self.is_tautology() {
            0
        } else {
            self.pos
        }
    }

    /// Mask of negated variables (empty for the tautology marker).
    pub fn neg_mask(&self) -> u16 {
        if self.is_tautology() {
            0
        } else {
            self.neg
        }
    }

    /// Number of literals; the empty clause and the tautology marker have 0.
    pub fn literal_count(&self) -> u32 {
        if self.is_tautology() {
            0
        } else {
            self.pos.count_ones() + self.neg.count_ones()
        }
    }

    /// Literals as `(variable_index_1_based, is_positive)`, ascending.
    pub fn literals(&self) -> Vec<(usize, bool)> {
        if self.is_tautology() {
            return Vec::new();
        }
        let n = self.n();
        (1..=n)
            .filter_map(|var| {
                let bit = 1u16 << (n - var);
                if self.pos & bit != 0 {
                    Some((var, true))
                } else if self.neg & bit != 0 {
                    Some((var, false))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Whether the clause is satisfied by the input with table index `idx`.
    pub fn covers_index(&self, idx: usize) -> bool {
        if self.is_tautology() {
            return true;
        }
        if self.is_empty() {
            return false;
        }
        let idx = idx as u16;
        idx & self.pos == self.pos && idx & self.neg == 0
    }

    /// Whether the clause is satisfied by an input vector (`x_1` first).
    pub fn covers(&self, v: &[bool]) -> Result<bool> {
        if v.len() != self.n() {
            return Err(Error::InputLength {
                expected: self.n(),
                got: v.len(),
            });
        }
        Ok(self.covers_index(index_of(v)))
    }

    /// The set of inputs satisfying the clause, as a truth table.
    pub fn cover_table(&self) -> BooleanFunction {
        let n = self.n();
        if self.is_tautology() {
            return BooleanFunction::constant(n, true).expect("valid n");
        }
        let mut table = BooleanFunction::constant(n, !self.is_empty()).expect("valid n");
        for var in 1..=n {
            let bit = 1u16 << (n - var);
            let var_table = BooleanFunction::var(n, var).expect("valid var");
            if self.pos & bit != 0 {
                bits::and_assign(table.words_mut(), var_table.words());
            } else if self.neg & bit != 0 {
                let complement = var_table.complement();
                bits::and_assign(table.words_mut(), complement.words());
            }
        }
        table
    }

    /// Sort key `(literal_count, pos_mask, neg_mask)` used everywhere clause
    /// lists need a deterministic order.
    pub fn sort_key(&self) -> (u32, u16, u16) {
        (self.literal_count(), self.pos, self.neg)
    }

    /// Parse the body of a clause (no parentheses): `x1&!x3`, `*`, or empty.
    pub fn parse_body(n: usize, body: &str) -> Result<Self> {
        let body = body.trim();
        if body.is_empty() {
            return Clause::empty(n);
        }
        if body == "*" {
            return Clause::tautology(n);
        }
        let mut literals = Vec::new();
        for raw in body.split('&') {
            let raw = raw.trim();
            let (positive, name) = match raw.strip_prefix('!') {
                Some(rest) => (false, rest.trim()),
                None => (true, raw),
            };
            let digits = name
                .strip_prefix('x')
                .ok_or_else(|| Error::Parse(format!("expected literal like x3, got {raw:?}")))?;
            let var: usize = digits
                .parse()
                .map_err(|_| Error::Parse(format!("invalid variable index in {raw:?}")))?;
            literals.push((var, positive));
        }
        for (i, &(var, _)) in literals.iter().enumerate() {
            if literals[..i].iter().any(|&(v, _)| v == var) {
                return Err(Error::Parse(format!(
                    "variable x{var} appears twice in one clause"
                )));
            }
        }
        Clause::from_literals(n, &literals)
    }
}

fn check_clause_n(n: usize) -> Result<()> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange { n })
    }
}

impl PartialOrd for Clause {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Clause {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl std::fmt::Display for Clause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_tautology() {
            return f.write_str("*");
        }
        for (i, (var, positive)) in self.literals().into_iter().enumerate() {
            if i > 0 {
                f.write_str("&")?;
            }
            if !positive {
                f.write_str("!")?;
            }
            write!(f, "x{var}")?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for Clause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Clause({self})")
    }
}

/// A signed DNF over `n` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dnf {
    n: u8,
    beta: Sign,
    clauses: Vec<Clause>,
}

impl Dnf {
    pub fn new(n: usize, beta: Sign, clauses: Vec<Clause>) -> Result<Self> {
        check_clause_n(n)?;
        for c in &clauses {
            if c.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.n(),
                });
            }
        }
        Ok(Dnf {
            n: n as u8,
            beta,
            clauses,
        })
    }

    /// A DNF with no clauses: constant-False for `Plus`, constant-True for `Minus`.
    pub fn empty(n: usize, beta: Sign) -> Result<Self> {
        Self::new(n, beta, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn beta(&self) -> Sign {
        self.beta
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Total literal count; empty and tautology clauses contribute zero.
    pub fn literal_count(&self) -> u32 {
        self.clauses.iter().map(Clause::literal_count).sum()
    }

    pub fn eval_index(&self, idx: usize) -> bool {
        let or = self.clauses.iter().any(|c| c.covers_index(idx));
        match self.beta {
            Sign::Plus => or,
            Sign::Minus => !or,
        }
    }

    pub fn eval(&self, v: &[bool]) -> Result<bool> {
        if v.len() != self.n() {
            return Err(Error::InputLength {
                expected: self.n(),
                got: v.len(),
            });
        }
        Ok(self.eval_index(index_of(v)))
    }

    /// The function computed by this DNF, evaluated clause-parallel over the
    /// whole table.
    pub fn truth_table(&self) -> BooleanFunction {
        let n = self.n();
        let mut acc = BooleanFunction::zeros(n).expect("valid n");
        for clause in &self.clauses {
            let cover = clause.cover_table();
            bits::or_assign(acc.words_mut(), cover.words());
        }
        if self.beta == Sign::Minus {
            acc = acc.complement();
        }
        acc
    }

    /// Clauses sorted by `(literal_count, pos_mask, neg_mask)`; used when a
    /// DNF is compared or printed order-independently.
    pub fn canonicalized(&self) -> Dnf {
        let mut clauses = self.clauses.clone();
        clauses.sort_unstable();
        Dnf {
            n: self.n,
            beta: self.beta,
            clauses,
        }
    }

    /// The canonical expansion: one full-length clause per minority output,
    /// with `beta` chosen by the minority side (ties resolve to `Plus`).
    pub fn canonical_expansion(f: &BooleanFunction) -> Dnf {
        let n = f.n();
        let ones = f.count_ones();
        let half = (f.len() as u64) / 2;
        let (beta, base) = if ones <= half {
            (Sign::Plus, f.clone())
        } else {
            (Sign::Minus, f.complement())
        };
        let clauses = base
            .ones()
            .map(|idx| Clause::from_input(n, idx).expect("index in range"))
            .collect();
        Dnf {
            n: n as u8,
            beta,
            clauses,
        }
    }

    /// Parse the textual form; `n` fixes the variable universe.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        check_clause_n(n)?;
        let mut rest = text.trim();
        let beta = if let Some(stripped) = rest.strip_prefix('-') {
            rest = stripped.trim_start();
            Sign::Minus
        } else {
            Sign::Plus
        };
        if rest.is_empty() {
            return Dnf::empty(n, beta);
        }
        let mut clauses = Vec::new();
        for part in rest.split('|') {
            let part = part.trim();
            let body = part
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("clause {part:?} is not parenthesized")))?;
            clauses.push(Clause::parse_body(n, body)?);
        }
        Dnf::new(n, beta, clauses)
    }
}

impl std::fmt::Display for Dnf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.beta == Sign::Minus {
            f.write_str("-")?;
        }
        for (i, clause) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "({clause})")?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for Dnf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Dnf(n={}, {})", self.n, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::FamilySpec;
    use crate::rng::{Domain, Stream};
    use proptest::prelude::*;

    fn clause(n: usize, text: &str) -> Clause {
        Clause::parse_body(n, text).unwrap()
    }

    #[test]
    fn clause_masks_and_literals() {
        // {x2 positive, x1 negated} over n = 3
        let c = clause(3, "!x1&x2");
        assert_eq!(c.literal_count(), 2);
        assert_eq!(c.literals(), vec![(1, false), (2, true)]);
        // covers inputs with x1=0, x2=1: indices 2 and 3
        let covered: Vec<usize> = (0..8).filter(|&i| c.covers_index(i)).collect();
        assert_eq!(covered, vec![2, 3]);
        assert_eq!(c.cover_table().to_string(), "00110000");
    }

    #[test]
    fn clause_rejects_conflicting_literal() {
        assert!(Clause::from_literals(3, &[(1, true), (1, false)]).is_err());
        assert!(Clause::from_masks(3, 0b100, 0b100).is_err());
        assert!(Clause::from_masks(3, 0b1000, 0).is_err());
    }

    #[test]
    fn empty_and_tautology_clauses() {
        let e = Clause::empty(4).unwrap();
        let t = Clause::tautology(4).unwrap();
        assert!(e.is_empty() && !e.is_tautology());
        assert!(t.is_tautology() && !t.is_empty());
        assert_eq!(e.literal_count(), 0);
        assert_eq!(t.literal_count(), 0);
        assert!((0..16).all(|i| !e.covers_index(i)));
        assert!((0..16).all(|i| t.covers_index(i)));
        assert_eq!(e.cover_table().count_ones(), 0);
        assert_eq!(t.cover_table().count_ones(), 16);
    }

    #[test]
    fn dnf_eval_and_beta() {
        let d = Dnf::parse(2, "(x1&x2)").unwrap();
        assert_eq!(d.truth_table().to_string(), "0001");
        let neg = Dnf::parse(2, "-(x1&x2)").unwrap();
        assert_eq!(neg.truth_table().to_string(), "1110");
        let empty_plus = Dnf::empty(2, Sign::Plus).unwrap();
        assert_eq!(empty_plus.truth_table().count_ones(), 0);
        let empty_minus = Dnf::empty(2, Sign::Minus).unwrap();
        assert_eq!(empty_minus.truth_table().count_ones(), 4);
    }

    #[test]
    fn canonical_expansion_minority_side_and_order() {
        // "1000": single 1 at index 0 -> beta plus, clause (!x1&!x2)
        let f = BooleanFunction::from_string("1000").unwrap();
        let d = Dnf::canonical_expansion(&f);
        assert_eq!(d.beta(), Sign::Plus);
        assert_eq!(d.to_string(), "(!x1&!x2)");
        assert_eq!(d.truth_table(), f);

        // majority of ones -> negative side, clauses over the zeros ascending
        let g = BooleanFunction::from_string("1101").unwrap();
        let dg = Dnf::canonical_expansion(&g);
        assert_eq!(dg.beta(), Sign::Minus);
        assert_eq!(dg.clauses().len(), 1);
        assert_eq!(dg.truth_table(), g);

        // exact tie resolves to plus
        let tie = BooleanFunction::from_string("0110").unwrap();
        assert_eq!(Dnf::canonical_expansion(&tie).beta(), Sign::Plus);
    }

    #[test]
    fn canonical_expansion_four_parity_has_eight_full_clauses() {
        let f = BooleanFunction::from_string("0110100110010110").unwrap();
        let d = Dnf::canonical_expansion(&f);
        assert_eq!(d.clauses().len(), 8);
        assert_eq!(d.literal_count(), 32);
        assert!(d.clauses().iter().all(|c| c.literal_count() == 4));
        assert_eq!(d.truth_table(), f);
    }

    #[test]
    fn parse_format_roundtrip_with_specials() {
        for text in [
            "(x1&!x3)|(x2)",
            "-(x1)|()|(*)",
            "",
            "-",
            "(!x1&!x2&!x3)",
            "(*)",
        ] {
            let d = Dnf::parse(3, text).unwrap();
            let printed = d.to_string();
            let back = Dnf::parse(3, &printed).unwrap();
            assert_eq!(d, back, "text {text:?} printed {printed:?}");
        }
        assert_eq!(Dnf::parse(3, "-").unwrap().beta(), Sign::Minus);
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(Dnf::parse(3, "x1&x2").is_err());
        assert!(Dnf::parse(3, "(x9)").is_err());
        assert!(Dnf::parse(3, "(x1&&x2)").is_err());
        assert!(Dnf::parse(3, "(y1)").is_err());
        assert!(Dnf::parse(3, "(x1&x1)").is_err());
    }

    #[test]
    fn tautology_under_minus_is_constant_false() {
        let d = Dnf::new(3, Sign::Minus, vec![Clause::tautology(3).unwrap()]).unwrap();
        assert_eq!(d.truth_table().count_ones(), 0);
    }

    fn random_dnf(stream: &mut Stream, n: usize) -> Dnf {
        let beta = if stream.flip() { Sign::Plus } else { Sign::Minus };
        let clause_count = stream.below(1 + (1 << (n - 1))) as usize;
        let clauses = (0..clause_count)
            .map(|_| {
                let mut pos = 0u16;
                let mut neg = 0u16;
                for var in 0..n {
                    match stream.below(3) {
                        1 => pos |= 1 << var,
                        2 => neg |= 1 << var,
                        _ => {}
                    }
                }
                Clause::from_masks(n, pos, neg).unwrap()
            })
            .collect();
        Dnf::new(n, beta, clauses).unwrap()
    }

    #[test]
    fn truth_table_matches_pointwise_eval() {
        let mut stream = Stream::new(17, Domain::Family, 0);
        for n in 1..=5 {
            for _ in 0..40 {
                let d = random_dnf(&mut stream, n);
                let table = d.truth_table();
                for idx in 0..1usize << n {
                    assert_eq!(table.get(idx), d.eval_index(idx));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn clause_order_does_not_change_function(seed in 0u64..300) {
            let mut stream = Stream::new(seed, Domain::Family, 1);
            let d = random_dnf(&mut stream, 4);
            let shuffled = {
                let mut clauses = d.clauses().to_vec();
                stream.shuffle(&mut clauses);
                Dnf::new(4, d.beta(), clauses).unwrap()
            };
            prop_assert_eq!(d.truth_table(), shuffled.truth_table());
        }

        #[test]
        fn canonical_expansion_roundtrips(seed in 0u64..300, n in 1usize..=6) {
            let t = seed % (1u64 << n);
            let f = FamilySpec { n, family: crate::boolfn::Family::Entropy { t }, seed }
                .generate().unwrap();
            let d = Dnf::canonical_expansion(&f);
            prop_assert_eq!(d.truth_table(), f.clone());
            // length bound n * min(t, 2^n - t) <= n * 2^(n-1)
            let minority = f.count_ones().min(f.len() as u64 - f.count_ones());
            prop_assert_eq!(u64::from(d.literal_count()), n as u64 * minority);
        }

        #[test]
        fn format_parse_roundtrip_random(seed in 0u64..300) {
            let mut stream = Stream::new(seed, Domain::Family, 2);
            let d = random_dnf(&mut stream, 5);
            let back = Dnf::parse(5, &d.to_string()).unwrap();
            prop_assert_eq!(d, back);
        }
    }
}
