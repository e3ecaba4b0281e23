//! Discrete fully-connected networks with one hidden layer.
//!
//! A [`DfcnParams`] holds the free parameters of the threshold network
//! `f(v) = 1[ W2 . relu(W1 v + b1) + b2 > 0 ]` with ternary first-layer
//! weights `W1[i][j] in {-1, 0, +1}`. The biases are pinned, not free:
//! `b1[i] = 1 - #{+1 entries in row i}` and `b2 = (1 - beta) / 2`, and the
//! second layer stores unsigned gates `w2[i] in {0, 1}` whose shared sign is
//! `beta`. Under that convention hidden unit `i` fires on exactly the inputs
//! matching row `i` read as a clause (`+1` = positive literal, `-1` = negated
//! literal, `0` = absent), which makes the network/DNF conversions below
//! exact: active nonzero rows are clauses, and an active all-zero row fires
//! everywhere (the tautology marker).

use crate::dnf::{Clause, Dnf, Sign};
use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::BooleanFunction;
use serde::{Deserialize, Serialize};

/// Parameters of a discrete network over `n` inputs with `width` hidden units.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DfcnParams {
    n: u8,
    width: usize,
    /// Row-major `width x n` ternary matrix.
    w1: Vec<i8>,
    /// Unsigned second-layer gates; the effective weight is `beta * w2[i]`.
    w2: Vec<bool>,
    beta: Sign,
}

/// Nonzero-entry counts of a parameter vector.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightNorm {
    pub norm_w1: u32,
    pub norm_w2: u32,
}

impl WeightNorm {
    /// `|W1| + |W2|`, the norm the trainers regularize.
    pub fn total(&self) -> u32 {
        self.norm_w1 + self.norm_w2
    }
}

/// A single-coordinate change of a parameter vector.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ParamMove {
    /// Set `w1[row][col]` to `value`.
    W1 { row: usize, col: usize, value: i8 },
    /// Toggle gate `w2[row]`.
    W2 { row: usize },
    /// Flip the output sign.
    BetaFlip,
}

impl DfcnParams {
    /// The all-zero network (computes the constant fixed by `beta`).
    pub fn zeros(n: usize, width: usize, beta: Sign) -> Result<Self> {
        if !(1..=crate::boolfn::MAX_N).contains(&n) {
            return Err(Error::DimensionOutOfRange { n });
        }
        if width == 0 {
            return Err(Error::InvalidArgument("width must be at least 1".into()));
        }
        Ok(DfcnParams {
            n: n as u8,
            width,
            w1: vec![0; width * n],
            w2: vec![false; width],
            beta,
        })
    }

    /// The standard hidden size `alpha_w * 2^(n-1)`.
    pub fn width_for(n: usize, alpha_w: u32) -> usize {
        alpha_w as usize * (1 << (n - 1))
    }

    /// Uniform parameters: ternary `W1`, fair gates, fair sign.
    pub fn sample_uniform(n: usize, width: usize, stream: &mut Stream) -> Result<Self> {
        let mut p = Self::zeros(n, width, Sign::Plus)?;
        let mut digits = vec![0u8; width * n];
        stream.fill_ternary(&mut digits);
        for (w, d) in p.w1.iter_mut().zip(&digits) {
            *w = *d as i8 - 1;
        }
        for gate in p.w2.iter_mut() {
            *gate = stream.flip();
        }
        p.beta = if stream.flip() { Sign::Plus } else { Sign::Minus };
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn beta(&self) -> Sign {
        self.beta
    }

    pub fn set_beta(&mut self, beta: Sign) {
        self.beta = beta;
    }

    pub fn w1(&self) -> &[i8] {
        &self.w1
    }

    pub fn w1_at(&self, row: usize, col: usize) -> i8 {
        self.w1[row * self.n as usize + col]
    }

    pub fn set_w1(&mut self, row: usize, col: usize, value: i8) -> Result<()> {
        if !(-1..=1).contains(&value) {
            return Err(Error::InvalidArgument(format!(
                "first-layer weights are ternary, got {value}"
            )));
        }
        let n = self.n as usize;
        self.w1[row * n + col] = value;
        Ok(())
    }

    pub fn w2(&self) -> &[bool] {
        &self.w2
    }

    pub fn set_w2(&mut self, row: usize, active: bool) {
        self.w2[row] = active;
    }

    /// First-layer bias of `row`: one minus the number of `+1` entries.
    pub fn b1(&self, row: usize) -> i32 {
        let n = self.n as usize;
        1 - self.w1[row * n..(row + 1) * n]
            .iter()
            .filter(|&&w| w == 1)
            .count() as i32
    }

    /// Output bias `(1 - beta) / 2`.
    pub fn b2(&self) -> i32 {
        match self.beta {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    /// Evaluate one input vector with the network arithmetic.
    pub fn forward(&self, v: &[bool]) -> Result<bool> {
        let n = self.n as usize;
        if v.len() != n {
            return Err(Error::InputLength {
                expected: n,
                got: v.len(),
            });
        }
        let mut gated_sum = 0i64;
        for row in 0..self.width {
            let mut z = i64::from(self.b1(row));
            for (col, &x) in v.iter().enumerate() {
                z += i64::from(self.w1[row * n + col]) * i64::from(x);
            }
            if self.w2[row] {
                gated_sum += z.max(0);
            }
        }
        let beta = i64::from(self.beta.as_i8());
        Ok(beta * gated_sum + i64::from(self.b2()) > 0)
    }

    /// The clause hidden unit `row` represents; `None` when the gate is off.
    pub fn row_clause(&self, row: usize) -> Option<Clause> {
        if !self.w2[row] {
            return None;
        }
        Some(self.row_pattern_clause(row))
    }

    fn row_pattern_clause(&self, row: usize) -> Clause {
        let n = self.n as usize;
        let mut pos = 0u16;
        let mut neg = 0u16;
        let mut nonzero = false;
        for col in 0..n {
            let bit = 1u16 << (n - 1 - col);
            match self.w1[row * n + col] {
                1 => {
                    pos |= bit;
                    nonzero = true;
                }
                -1 => {
                    neg |= bit;
                    nonzero = true;
                }
                _ => {}
            }
        }
        if nonzero {
            Clause::from_masks(n, pos, neg).expect("disjoint by construction")
        } else {
            Clause::tautology(n).expect("valid n")
        }
    }

    /// The function the network computes, via its clause covers.
    pub fn truth_table(&self) -> BooleanFunction {
        dfcn_to_dnf(self).truth_table()
    }

    /// Nonzero counts of both layers.
    pub fn weight_norm(&self) -> WeightNorm {
        WeightNorm {
            norm_w1: self.w1.iter().filter(|&&w| w != 0).count() as u32,
            norm_w2: self.w2.iter().filter(|&&g| g).count() as u32,
        }
    }

    /// Number of single-coordinate moves: two per `W1` entry plus one gate
    /// toggle per row, plus the optional sign flip.
    pub fn move_count(&self, include_beta: bool) -> usize {
        2 * self.width * self.n as usize + self.width + usize::from(include_beta)
    }

    /// Decode a move index (see [`DfcnParams::move_count`] for the layout:
    /// `W1` alternatives first, then gate toggles, then the sign flip).
    pub fn move_at(&self, index: usize, include_beta: bool) -> ParamMove {
        let n = self.n as usize;
        let w1_moves = 2 * self.width * n;
        if index < w1_moves {
            let entry = index / 2;
            let (row, col) = (entry / n, entry % n);
            let current = self.w1[entry];
            let mut alternatives = [-1i8, 0, 1].into_iter().filter(|&v| v != current);
            let first = alternatives.next().expect("two alternatives");
            let second = alternatives.next().expect("two alternatives");
            let value = if index.is_multiple_of(2) { first } else { second };
            ParamMove::W1 { row, col, value }
        } else if index < w1_moves + self.width {
            ParamMove::W2 {
                row: index - w1_moves,
            }
        } else {
            debug_assert!(include_beta && index == w1_moves + self.width);
            ParamMove::BetaFlip
        }
    }

    /// Apply a move in place and return its inverse.
    pub fn apply(&mut self, mv: ParamMove) -> ParamMove {
        match mv {
            ParamMove::W1 { row, col, value } => {
                let n = self.n as usize;
                let old = std::mem::replace(&mut self.w1[row * n + col], value);
                ParamMove::W1 {
                    row,
                    col,
                    value: old,
                }
            }
            ParamMove::W2 { row } => {
                self.w2[row] = !self.w2[row];
                mv
            }
            ParamMove::BetaFlip => {
                self.beta = self.beta.flip();
                mv
            }
        }
    }

    /// All parameter vectors one move away, in move-index order.
    pub fn neighbors(&self, include_beta: bool) -> impl Iterator<Item = DfcnParams> + '_ {
        (0..self.move_count(include_beta)).map(move |i| {
            let mut p = self.clone();
            p.apply(self.move_at(i, include_beta));
            p
        })
    }

    /// `W1` as CSV: `width` lines of `n` signed entries.
    pub fn w1_csv(&self) -> String {
        let n = self.n as usize;
        let mut out = String::new();
        for row in 0..self.width {
            let line: Vec<String> = (0..n).map(|c| self.w1[row * n + c].to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

impl std::fmt::Debug for DfcnParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "DfcnParams(n={}, width={}, beta={:+}, |W1|={})",
            self.n,
            self.width,
            self.beta.as_i8(),
            self.weight_norm().norm_w1
        )
    }
}

/// Embed a DNF into a network of the given hidden width.
///
/// Clause `i` becomes row `i` (literals to `+1`/`-1`, gate on); the tautology
/// marker becomes an active all-zero row; empty clauses become inactive rows.
/// Remaining rows are zero-padded with gates off.
pub fn dnf_to_dfcn(d: &Dnf, width: usize) -> Result<DfcnParams> {
    let n = d.n();
    if d.clauses().len() > width {
        return Err(Error::InvalidArgument(format!(
            "{} clauses do not fit width {width}",
            d.clauses().len()
        )));
    }
    let mut p = DfcnParams::zeros(n, width, d.beta())?;
    for (row, clause) in d.clauses().iter().enumerate() {
        if clause.is_tautology() {
            p.set_w2(row, true);
            continue;
        }
        if clause.is_empty() {
            continue;
        }
        for (var, positive) in clause.literals() {
            p.set_w1(row, var - 1, if positive { 1 } else { -1 })?;
        }
        p.set_w2(row, true);
    }
    Ok(p)
}

/// Read a network back as a DNF: one clause per active row, in row order.
pub fn dfcn_to_dnf(p: &DfcnParams) -> Dnf {
    let clauses: Vec<Clause> = (0..p.width()).filter_map(|row| p.row_clause(row)).collect();
    Dnf::new(p.n(), p.beta(), clauses).expect("rows are valid clauses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::input_of;
    use crate::rng::Domain;
    use proptest::prelude::*;

    #[test]
    fn biases_follow_convention() {
        let d = Dnf::parse(3, "(x1&!x2)|(x1&x2&x3)").unwrap();
        let p = dnf_to_dfcn(&d, 4).unwrap();
        assert_eq!(p.b1(0), 0); // one +1 entry
        assert_eq!(p.b1(1), -2); // three +1 entries
        assert_eq!(p.b1(2), 1); // zero row
        assert_eq!(p.b2(), 0);
        let neg = Dnf::parse(3, "-(x1)").unwrap();
        assert_eq!(dnf_to_dfcn(&neg, 1).unwrap().b2(), 1);
    }

    #[test]
    fn canonical_expansion_of_1000_maps_to_single_negative_row() {
        let f = BooleanFunction::from_string("1000").unwrap();
        let d = Dnf::canonical_expansion(&f);
        let p = dnf_to_dfcn(&d, 2).unwrap();
        assert_eq!(p.w1(), &[-1, -1, 0, 0]);
        assert_eq!(p.w2(), &[true, false]);
        assert_eq!(p.beta(), Sign::Plus);
        assert_eq!(p.truth_table(), f);
    }

    #[test]
    fn two_parity_rows_and_norm() {
        let f = BooleanFunction::from_string("0110").unwrap();
        let p = dnf_to_dfcn(&Dnf::canonical_expansion(&f), 2).unwrap();
        let mut rows: Vec<[i8; 2]> = (0..2).map(|r| [p.w1_at(r, 0), p.w1_at(r, 1)]).collect();
        rows.sort_unstable();
        assert_eq!(rows, vec![[-1, 1], [1, -1]]);
        assert_eq!(p.w2(), &[true, true]);
        let norm = p.weight_norm();
        assert_eq!((norm.norm_w1, norm.norm_w2, norm.total()), (4, 2, 6));
        assert_eq!(p.truth_table(), f);
    }

    #[test]
    fn active_zero_row_is_tautological() {
        let mut p = DfcnParams::zeros(3, 2, Sign::Plus).unwrap();
        p.set_w2(0, true);
        assert_eq!(p.truth_table().count_ones(), 8);
        assert!(p.forward(&[false, false, false]).unwrap());
        p.set_beta(Sign::Minus);
        assert_eq!(p.truth_table().count_ones(), 0);
    }

    #[test]
    fn inactive_rows_are_ignored() {
        let mut p = DfcnParams::zeros(2, 2, Sign::Plus).unwrap();
        p.set_w1(0, 0, 1).unwrap(); // row 0 = (x1), gate off
        assert_eq!(p.truth_table().count_ones(), 0);
        p.set_w2(0, true);
        assert_eq!(p.truth_table().to_string(), "0011");
    }

    #[test]
    fn zero_width_and_bad_weights_rejected() {
        assert!(DfcnParams::zeros(3, 0, Sign::Plus).is_err());
        let mut p = DfcnParams::zeros(3, 1, Sign::Plus).unwrap();
        assert!(p.set_w1(0, 0, 2).is_err());
    }

    #[test]
    fn width_too_small_for_clauses() {
        let d = Dnf::parse(3, "(x1)|(x2)|(x3)").unwrap();
        assert!(dnf_to_dfcn(&d, 2).is_err());
        assert!(dnf_to_dfcn(&d, 3).is_ok());
    }

    #[test]
    fn neighbor_count_and_single_coordinate_difference() {
        let p = DfcnParams::zeros(2, 2, Sign::Plus).unwrap();
        assert_eq!(p.move_count(false), 10);
        assert_eq!(p.move_count(true), 11);
        let neighbors: Vec<DfcnParams> = p.neighbors(true).collect();
        assert_eq!(neighbors.len(), 11);
        for q in &neighbors {
            let w1_diff = p.w1().iter().zip(q.w1()).filter(|(a, b)| a != b).count();
            let w2_diff = p.w2().iter().zip(q.w2()).filter(|(a, b)| a != b).count();
            let beta_diff = usize::from(p.beta() != q.beta());
            assert_eq!(w1_diff + w2_diff + beta_diff, 1);
        }
        // all neighbors distinct
        for (i, a) in neighbors.iter().enumerate() {
            for b in &neighbors[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn moves_are_symmetric() {
        let mut stream = Stream::new(3, Domain::Mcmc, 0);
        let p = DfcnParams::sample_uniform(3, 4, &mut stream).unwrap();
        for i in 0..p.move_count(true) {
            let mut q = p.clone();
            let inverse = q.apply(p.move_at(i, true));
            // the inverse move must appear in q's own move set
            let found = (0..q.move_count(true)).any(|j| q.move_at(j, true) == inverse);
            assert!(found, "inverse of move {i} missing");
            q.apply(inverse);
            assert_eq!(q, p);
        }
    }

    #[test]
    fn snapshot_csv_shape() {
        let d = Dnf::parse(2, "(x1&!x2)").unwrap();
        let p = dnf_to_dfcn(&d, 2).unwrap();
        assert_eq!(p.w1_csv(), "1,-1\n0,0\n");
    }

    proptest! {
        #[test]
        fn forward_matches_truth_table(seed in 0u64..400) {
            let mut stream = Stream::new(seed, Domain::Mcmc, 1);
            let n = 1 + (seed % 5) as usize;
            let p = DfcnParams::sample_uniform(n, 2 * n, &mut stream).unwrap();
            let table = p.truth_table();
            for idx in 0..1usize << n {
                prop_assert_eq!(p.forward(&input_of(n, idx)).unwrap(), table.get(idx));
            }
        }

        #[test]
        fn dnf_network_roundtrip(seed in 0u64..400) {
            let mut stream = Stream::new(seed, Domain::Mcmc, 2);
            let p = DfcnParams::sample_uniform(4, 6, &mut stream).unwrap();
            let d = dfcn_to_dnf(&p);
            prop_assert_eq!(d.truth_table(), p.truth_table());
            let q = dnf_to_dfcn(&d, p.width()).unwrap();
            prop_assert_eq!(q.truth_table(), p.truth_table());
            // active clause multisets agree after the roundtrip
            let back = dfcn_to_dnf(&q);
            prop_assert_eq!(d.canonicalized(), back.canonicalized());
        }
    }
}
