//! Incremental truth-table evaluation of a network under single-coordinate
//! parameter moves.
//!
//! The trainers propose thousands of 1-hop moves per run; recomputing the
//! full truth table for each would dominate the runtime. [`Evaluator`]
//! instead keeps, for every input, the number of active rows covering it,
//! so the effect of changing one `W1` entry, one gate, or the output sign
//! is computed from that row's cover alone.

use crate::boolfn::packed_var_tables;
use crate::dfcn::{DfcnParams, ParamMove, WeightNorm};
use crate::dnf::Sign;

/// A proposed move together with the state it would lead to.
#[derive(Copy, Clone, Debug)]
pub(crate) struct Proposal {
    pub mv: ParamMove,
    /// Union of active-row covers after the move.
    covered: u128,
    /// The moved row's new cover (`W1` moves only).
    row_cover: Option<u128>,
    /// Output sign after the move.
    beta: Sign,
    /// Change in `|W1| + |W2|`.
    pub norm_delta: i32,
}

impl Proposal {
    /// Truth table (packed) the network computes after this move.
    pub fn prediction(&self, full: u128) -> u128 {
        match self.beta {
            Sign::Plus => self.covered,
            Sign::Minus => !self.covered & full,
        }
    }
}

pub(crate) struct Evaluator {
    params: DfcnParams,
    n: usize,
    pub full: u128,
    vars: Vec<u128>,
    /// Per-row cover, gate-independent (an all-zero row covers everything —
    /// the tautology — when its gate fires).
    covers: Vec<u128>,
    /// Number of active rows covering each input.
    counts: Vec<u16>,
    /// Inputs covered by at least one active row.
    covered: u128,
    norm: WeightNorm,
}

impl Evaluator {
    pub fn new(params: DfcnParams) -> Self {
        let n = params.n();
        let width = params.width();
        let (vars, full) = packed_var_tables(n);
        let mut ev = Evaluator {
            n,
            full,
            vars,
            covers: vec![0; width],
            counts: vec![0; 1 << n],
            covered: 0,
            norm: params.weight_norm(),
            params,
        };
        for row in 0..width {
            ev.covers[row] = ev.compute_row_cover(row, None);
            if ev.params.w2()[row] {
                ev.add_cover(row);
            }
        }
        ev
    }

    pub fn params(&self) -> &DfcnParams {
        &self.params
    }

    pub fn norm(&self) -> WeightNorm {
        self.norm
    }

    /// Packed truth table of the current state.
    pub fn prediction(&self) -> u128 {
        match self.params.beta() {
            Sign::Plus => self.covered,
            Sign::Minus => !self.covered & self.full,
        }
    }

    /// Cover of `row`, optionally overriding one entry.
    fn compute_row_cover(&self, row: usize, over: Option<(usize, i8)>) -> u128 {
        let w1 = self.params.w1();
        let mut cover = self.full;
        let mut nonzero = false;
        for col in 0..self.n {
            let w = match over {
                Some((c, v)) if c == col => v,
                _ => w1[row * self.n + col],
            };
            match w {
                1 => {
                    cover &= self.vars[col];
                    nonzero = true;
                }
                -1 => {
                    cover &= !self.vars[col];
                    nonzero = true;
                }
                _ => {}
            }
        }
        if nonzero {
            cover
        } else {
            self.full // active all-zero row fires everywhere
        }
    }

    fn add_cover(&mut self, row: usize) {
        let mut bits = self.covers[row];
        while bits != 0 {
            let idx = bits.trailing_zeros() as usize;
            self.counts[idx] += 1;
            bits &= bits - 1;
        }
        self.covered |= self.covers[row];
    }

    fn remove_cover(&mut self, row: usize) {
        let mut bits = self.covers[row];
        while bits != 0 {
            let idx = bits.trailing_zeros() as usize;
            self.counts[idx] -= 1;
            if self.counts[idx] == 0 {
                self.covered &= !(1u128 << idx);
            }
            bits &= bits - 1;
        }
    }

    /// Inputs covered by an active row other than `row`.
    fn covered_without(&self, row: usize) -> u128 {
        let mut others = self.covered;
        let mut bits = self.covers[row] & self.covered;
        while bits != 0 {
            let idx = bits.trailing_zeros() as usize;
            if self.counts[idx] == 1 {
                others &= !(1u128 << idx);
            }
            bits &= bits - 1;
        }
        others
    }

    /// Evaluate a move without applying it.
    pub fn propose(&self, mv: ParamMove) -> Proposal {
        let w2 = self.params.w2();
        match mv {
            ParamMove::W1 { row, col, value } => {
                let old = self.params.w1()[row * self.n + col];
                let norm_delta = i32::from(value != 0) - i32::from(old != 0);
                let row_cover = self.compute_row_cover(row, Some((col, value)));
                let covered = if w2[row] {
                    self.covered_without(row) | row_cover
                } else {
                    self.covered
                };
                Proposal {
                    mv,
                    covered,
                    row_cover: Some(row_cover),
                    beta: self.params.beta(),
                    norm_delta,
                }
            }
            ParamMove::W2 { row } => {
                let (covered, norm_delta) = if w2[row] {
                    (self.covered_without(row), -1)
                } else {
                    (self.covered | self.covers[row], 1)
                };
                Proposal {
                    mv,
                    covered,
                    row_cover: None,
                    beta: self.params.beta(),
                    norm_delta,
                }
            }
            ParamMove::BetaFlip => Proposal {
                mv,
                covered: self.covered,
                row_cover: None,
                beta: self.params.beta().flip(),
                norm_delta: 0,
            },
        }
    }

    /// Commit a previously proposed move.
    pub fn apply(&mut self, proposal: &Proposal) {
        match proposal.mv {
            ParamMove::W1 { row, .. } => {
                let active = self.params.w2()[row];
                if active {
                    self.remove_cover(row);
                }
                self.covers[row] = proposal.row_cover.expect("W1 proposals carry a cover");
                if active {
                    self.add_cover(row);
                }
            }
            ParamMove::W2 { row } => {
                if self.params.w2()[row] {
                    self.remove_cover(row);
                } else {
                    self.add_cover(row);
                }
            }
            ParamMove::BetaFlip => {}
        }
        self.params.apply(proposal.mv);
        debug_assert_eq!(self.covered, proposal.covered);
        self.norm = WeightNorm {
            norm_w1: (self.norm.norm_w1 as i64
                + match proposal.mv {
                    ParamMove::W1 { .. } => proposal.norm_delta as i64,
                    _ => 0,
                }) as u32,
            norm_w2: (self.norm.norm_w2 as i64
                + match proposal.mv {
                    ParamMove::W2 { .. } => proposal.norm_delta as i64,
                    _ => 0,
                }) as u32,
        };
        debug_assert_eq!(self.norm, self.params.weight_norm());
    }
}

/// Number of wrong predictions within `mask`.
pub(crate) fn errors_in(prediction: u128, labels: u128, mask: u128) -> u32 {
    ((prediction ^ labels) & mask).count_ones()
}
