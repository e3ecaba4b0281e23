//! The parameter-space prior over Boolean functions.
//!
//! A discrete network with i.i.d. uniform ternary first-layer weights, a
//! fair-coin output sign, and second-layer gates that activate exactly the
//! nonzero first-layer rows induces a probability distribution `P(f)` over
//! all `2^(2^n)` Boolean functions: the chance that a freshly drawn
//! parameter vector computes `f`. This module estimates that distribution
//! two ways:
//!
//! - [`sample_prior`]: embarrassingly parallel Monte Carlo over independent
//!   per-draw RNG substreams, so an estimate over `[0, N)` draws equals the
//!   merge of estimates over any partition of `[0, N)`;
//! - [`exact_prior`]: exhaustive enumeration of the finite parameter space
//!   (all `2 * 3^(n * width)` states) for small instances.
//!
//! [`rank_table`] turns an estimate into a rank/frequency table with a
//! Zipf reference curve, and [`pac_bayes_bound`] converts a prior mass into
//! a realizable PAC-Bayes generalization bound. Analytic lower/upper bounds
//! on `P(f)` for structured families live in [`bounds`].

pub mod bounds;

use std::collections::HashMap;

use rayon::prelude::*;

use crate::boolfn::{packed_table, packed_var_tables, BooleanFunction};
use crate::complexity;
use crate::dfcn::DfcnParams;
use crate::dnf::Sign;
use crate::error::{Error, Result};
use crate::rng::{Domain, Stream};

/// Largest input dimension supported by the prior samplers (truth tables are
/// manipulated as single 128-bit words, so `2^n <= 128`).
pub const MAX_PRIOR_N: usize = 7;

/// Exhaustive enumeration budget for [`exact_prior`], in bits:
/// `n * width * log2(3) + 1` must stay at or below this.
pub const MAX_EXACT_PRIOR_BITS: f64 = 25.0;

/// Dimensions whose estimates are tallied in a dense array (`2^(2^n)`
/// entries); larger dimensions fall back to a hash map.
const MAX_DENSE_N: usize = 4;

/// Draws processed per parallel work item.
const DRAW_BLOCK: u64 = 1 << 14;

fn validate_prior_dims(n: usize, alpha_w: usize) -> Result<usize> {
    if !(1..=MAX_PRIOR_N).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "prior estimation supports n in 1..={MAX_PRIOR_N}, got n = {n}"
        )));
    }
    if alpha_w == 0 {
        return Err(Error::InvalidArgument(
            "width multiplier alpha_w must be at least 1".into(),
        ));
    }
    Ok(alpha_w << (n - 1))
}

/// Frequency table keyed by truth tables packed into `u128`.
#[derive(Clone, Debug)]
enum CountMap {
    Dense(Vec<u64>),
    Sparse(HashMap<u128, u64>),
}

impl CountMap {
    fn new(n: usize) -> Self {
        if n <= MAX_DENSE_N {
            CountMap::Dense(vec![0; 1usize << (1usize << n)])
        } else {
            CountMap::Sparse(HashMap::new())
        }
    }

    fn add(&mut self, key: u128, count: u64) {
        match self {
            CountMap::Dense(v) => v[key as usize] += count,
            CountMap::Sparse(m) => *m.entry(key).or_insert(0) += count,
        }
    }

    fn get(&self, key: u128) -> u64 {
        match self {
            CountMap::Dense(v) => v[key as usize],
            CountMap::Sparse(m) => m.get(&key).copied().unwrap_or(0),
        }
    }

    fn merge(&mut self, other: CountMap) {
        match (self, other) {
            (CountMap::Dense(a), CountMap::Dense(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            (CountMap::Sparse(a), CountMap::Sparse(b)) => {
                for (key, count) in b {
                    *a.entry(key).or_insert(0) += count;
                }
            }
            _ => unreachable!("count maps for the same n share a layout"),
        }
    }

    fn distinct(&self) -> usize {
        match self {
            CountMap::Dense(v) => v.iter().filter(|&&c| c > 0).count(),
            CountMap::Sparse(m) => m.len(),
        }
    }

    fn iter(&self) -> Box<dyn Iterator<Item = (u128, u64)> + '_> {
        match self {
            CountMap::Dense(v) => Box::new(
                v.iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(key, &c)| (key as u128, c)),
            ),
            CountMap::Sparse(m) => Box::new(m.iter().map(|(&key, &c)| (key, c))),
        }
    }
}

fn key_of(f: &BooleanFunction) -> u128 {
    packed_table(f)
}

fn function_of(n: usize, key: u128) -> BooleanFunction {
    let len = 1usize << n;
    BooleanFunction::from_bits(n, (0..len).map(|idx| key >> idx & 1 == 1))
        .expect("key built from a valid truth table")
}

/// An estimate of the prior `P(f)`: how often each truth table appeared
/// among `draws` independent parameter draws (or among all parameter states
/// for exact enumeration).
#[derive(Clone, Debug)]
pub struct PriorEstimate {
    n: usize,
    alpha_w: usize,
    exact: bool,
    draws: u64,
    counts: CountMap,
}

impl PriorEstimate {
    /// Input dimension of the tallied functions.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Width multiplier: the network had `alpha_w * 2^(n-1)` hidden gates.
    pub fn alpha_w(&self) -> usize {
        self.alpha_w
    }

    /// Hidden-layer width of the sampled networks.
    pub fn width(&self) -> usize {
        self.alpha_w << (self.n - 1)
    }

    /// Whether this came from exhaustive enumeration rather than sampling.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Total number of tallied parameter draws (or states, when exact).
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// How many times `f` was drawn.
    pub fn count(&self, f: &BooleanFunction) -> Result<u64> {
        if f.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: f.n(),
            });
        }
        Ok(self.counts.get(key_of(f)))
    }

    /// Estimated probability `count(f) / draws`.
    pub fn probability(&self, f: &BooleanFunction) -> Result<f64> {
        Ok(self.count(f)? as f64 / self.draws as f64)
    }

    /// Number of distinct functions observed at least once.
    pub fn observed_count(&self) -> usize {
        self.counts.distinct()
    }

    /// Number of the `2^(2^n)` functions never observed, or `None` when that
    /// total overflows (`n = 7` has `2^128` functions).
    pub fn unobserved_count(&self) -> Option<u128> {
        let exponent = 1u32 << self.n;
        if exponent >= 128 {
            return None;
        }
        Some((1u128 << exponent) - self.observed_count() as u128)
    }

    /// Iterate over `(function, count)` for every observed function, in
    /// unspecified order.
    pub fn observed(&self) -> impl Iterator<Item = (BooleanFunction, u64)> + '_ {
        self.counts
            .iter()
            .map(move |(key, count)| (function_of(self.n, key), count))
    }

    /// Fold another estimate of the same ensemble into this one. Counts add
    /// exactly, so merging disjoint draw ranges reproduces the single-range
    /// estimate bit for bit.
    pub fn merge(&mut self, other: PriorEstimate) -> Result<()> {
        if other.n != self.n || other.alpha_w != self.alpha_w {
            return Err(Error::InvalidArgument(format!(
                "cannot merge estimates for (n = {}, alpha_w = {}) and (n = {}, alpha_w = {})",
                self.n, self.alpha_w, other.n, other.alpha_w
            )));
        }
        if self.exact || other.exact {
            return Err(Error::InvalidArgument(
                "exact enumerations already cover every state; merging would double-count".into(),
            ));
        }
        self.draws += other.draws;
        self.counts.merge(other.counts);
        Ok(())
    }
}

/// Truth tables of the `n` input variables, packed into 128-bit words, plus
/// the all-ones table for the active domain.
struct TableKernel {
    n: usize,
    vars: Vec<u128>,
    full: u128,
}

impl TableKernel {
    fn new(n: usize) -> Self {
        let (vars, full) = packed_var_tables(n);
        TableKernel { n, vars, full }
    }

    /// Union of the active gates' covers for row-major ternary digits
    /// (`0 -> weight -1`, `1 -> 0`, `2 -> +1`); an all-zero row's gate is
    /// inactive under the prior and contributes nothing.
    fn covered(&self, digits: &[u8]) -> u128 {
        let mut covered = 0u128;
        for row in digits.chunks_exact(self.n) {
            if row.iter().all(|&d| d == 1) {
                continue;
            }
            let mut cover = self.full;
            for (col, &digit) in row.iter().enumerate() {
                match digit {
                    0 => cover &= !self.vars[col], // negated literal
                    2 => cover &= self.vars[col],  // positive literal
                    _ => {}
                }
            }
            covered |= cover;
        }
        covered
    }

    /// Draw one parameter state and return the truth table it computes.
    ///
    /// Consumes the stream exactly like [`sample_prior_params`]: one ternary
    /// fill of `width * n` digits (row-major first-layer weights), then one
    /// coin flip for the output sign.
    fn draw(&self, digits: &mut [u8], stream: &mut Stream) -> u128 {
        stream.fill_ternary(digits);
        let covered = self.covered(digits);
        if stream.flip() {
            covered // positive sign: output 1 where some active gate fires
        } else {
            !covered & self.full
        }
    }
}

/// Draw one network from the prior: every first-layer weight i.i.d. uniform
/// on `{-1, 0, +1}`, each second-layer gate active exactly when its row is
/// nonzero, and a fair-coin output sign.
///
/// This is the distribution whose pushforward onto truth tables the rest of
/// the module estimates. (Training initialization instead flips every gate
/// independently; see `DfcnParams::sample_uniform`.)
pub fn sample_prior_params(n: usize, alpha_w: usize, stream: &mut Stream) -> Result<DfcnParams> {
    let width = validate_prior_dims(n, alpha_w)?;
    let mut digits = vec![0u8; width * n];
    stream.fill_ternary(&mut digits);
    let beta = if stream.flip() { Sign::Plus } else { Sign::Minus };
    let mut params = DfcnParams::zeros(n, width, beta)?;
    for (row, chunk) in digits.chunks_exact(n).enumerate() {
        for (col, &digit) in chunk.iter().enumerate() {
            params.set_w1(row, col, digit as i8 - 1)?;
        }
        params.set_w2(row, chunk.iter().any(|&d| d != 1));
    }
    Ok(params)
}

/// Monte Carlo estimate of the prior from `draws` independent parameter
/// draws, using per-draw substreams `0..draws` of `seed`.
pub fn sample_prior(n: usize, alpha_w: usize, draws: u64, seed: u64) -> Result<PriorEstimate> {
    sample_prior_range(n, alpha_w, seed, 0, draws, None)
}

/// Monte Carlo estimate over the draw-index range `offset..offset + draws`.
///
/// Each draw `i` uses its own RNG substream derived from `(seed, i)`, so
/// estimates over disjoint ranges of the same seed can be [merged]
/// (PriorEstimate::merge) into exactly the estimate a single covering run
/// would produce — across any thread count or process boundary.
///
/// `max_distinct`, when set, aborts with [`Error::BudgetExceeded`] once the
/// tally holds more distinct functions than the cap (a memory guard for
/// large-`n` runs).
pub fn sample_prior_range(
    n: usize,
    alpha_w: usize,
    seed: u64,
    offset: u64,
    draws: u64,
    max_distinct: Option<usize>,
) -> Result<PriorEstimate> {
    let width = validate_prior_dims(n, alpha_w)?;
    if draws == 0 {
        return Err(Error::InvalidArgument("draws must be at least 1".into()));
    }
    offset.checked_add(draws).ok_or_else(|| {
        Error::InvalidArgument("draw-index range offset + draws overflows u64".into())
    })?;
    let kernel = TableKernel::new(n);
    let blocks = draws.div_ceil(DRAW_BLOCK);
    let counts = (0..blocks)
        .into_par_iter()
        .try_fold(
            || CountMap::new(n),
            |mut acc, block| {
                let start = block * DRAW_BLOCK;
                let len = DRAW_BLOCK.min(draws - start);
                let mut digits = vec![0u8; width * n];
                for i in start..start + len {
                    let mut stream = Stream::new(seed, Domain::Prior, offset + i);
                    let key = kernel.draw(&mut digits, &mut stream);
                    acc.add(key, 1);
                }
                if let Some(cap) = max_distinct {
                    if acc.distinct() > cap {
                        return Err(Error::BudgetExceeded(format!(
                            "prior tally exceeded max_distinct = {cap} functions"
                        )));
                    }
                }
                Ok(acc)
            },
        )
        .try_reduce(
            || CountMap::new(n),
            |mut a, b| {
                a.merge(b);
                if let Some(cap) = max_distinct {
                    if a.distinct() > cap {
                        return Err(Error::BudgetExceeded(format!(
                            "prior tally exceeded max_distinct = {cap} functions"
                        )));
                    }
                }
                Ok(a)
            },
        )?;
    Ok(PriorEstimate {
        n,
        alpha_w,
        exact: false,
        draws,
        counts,
    })
}

/// Exhaustively enumerate all `2 * 3^(n * width)` parameter states and tally
/// the exact prior.
///
/// Only the positive-sign half is walked; the negative-sign half contributes
/// `count(f) += count_plus(complement(f))` by symmetry. The state space must
/// fit the [`MAX_EXACT_PRIOR_BITS`] budget (in practice `n <= 3` at
/// `alpha_w = 1`).
pub fn exact_prior(n: usize, alpha_w: usize) -> Result<PriorEstimate> {
    let width = validate_prior_dims(n, alpha_w)?;
    let digits = n * width;
    let bits = digits as f64 * 3f64.log2() + 1.0;
    if bits > MAX_EXACT_PRIOR_BITS {
        return Err(Error::BudgetExceeded(format!(
            "exact prior needs {bits:.1} state bits for n = {n}, alpha_w = {alpha_w} \
             (limit {MAX_EXACT_PRIOR_BITS})"
        )));
    }
    let kernel = TableKernel::new(n);
    let states = 3u64.pow(digits as u32);
    let len = 1usize << n;

    // Tally the beta = +1 half over an odometer in base 3.
    let mut plus = vec![0u64; 1 << len];
    let mut odometer = vec![0u8; digits];
    for _ in 0..states {
        plus[kernel.covered(&odometer) as usize] += 1;
        for d in odometer.iter_mut() {
            if *d < 2 {
                *d += 1;
                break;
            }
            *d = 0;
        }
    }

    let full = kernel.full as usize;
    let mut counts = CountMap::new(n);
    for key in 0..plus.len() {
        let total = plus[key] + plus[!key & full];
        if total > 0 {
            counts.add(key as u128, total);
        }
    }
    Ok(PriorEstimate {
        n,
        alpha_w,
        exact: true,
        draws: 2 * states,
        counts,
    })
}

/// One row of a rank/frequency table.
#[derive(Clone, Debug)]
pub struct RankEntry {
    /// 1-based rank by descending count.
    pub rank: usize,
    /// The ranked function.
    pub function: BooleanFunction,
    /// How often it was drawn.
    pub count: u64,
    /// Empirical probability `count / draws`.
    pub p_hat: f64,
    /// Minimal-DNF literal count of the function.
    pub k_dnf: u32,
    /// Zipf reference `1 / (2^n * ln 2 * rank)` for comparison.
    pub zipf_reference: f64,
}

/// The Zipf-law reference curve `1 / (2^n * ln(2) * rank)` that heavy-tailed
/// priors are compared against.
pub fn zipf_reference(n: usize, rank: usize) -> f64 {
    1.0 / ((1u64 << n) as f64 * std::f64::consts::LN_2 * rank as f64)
}

/// Rank the observed functions by descending count (ties broken by ascending
/// truth-table string) and annotate each with its minimal-DNF size and the
/// Zipf reference. `top` truncates to the most frequent entries.
pub fn rank_table(est: &PriorEstimate, top: Option<usize>) -> Result<Vec<RankEntry>> {
    let mut observed: Vec<(BooleanFunction, u64)> = est.observed().collect();
    observed.sort_by(|(fa, ca), (fb, cb)| cb.cmp(ca).then_with(|| fa.to_string().cmp(&fb.to_string())));
    if let Some(top) = top {
        observed.truncate(top);
    }
    let draws = est.draws() as f64;
    observed
        .into_iter()
        .enumerate()
        .map(|(idx, (function, count))| {
            let rank = idx + 1;
            Ok(RankEntry {
                rank,
                k_dnf: complexity::k_dnf(&function)?,
                count,
                p_hat: count as f64 / draws,
                zipf_reference: zipf_reference(est.n(), rank),
                function,
            })
        })
        .collect()
}

/// Realizable PAC-Bayes generalization bound for a function of prior mass
/// `p_f`, from `m` training examples at confidence `1 - delta`:
///
/// `eps <= 1 - exp((ln p_f + ln(delta / (2 m))) / (m - 1))`,
///
/// clamped to `[0, 1]`. The bound is monotone non-increasing in `p_f`:
/// functions the prior favors generalize better.
pub fn pac_bayes_bound(p_f: f64, m: u64, delta: f64) -> Result<f64> {
    if !(p_f > 0.0 && p_f <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "prior mass p_f must lie in (0, 1], got {p_f}"
        )));
    }
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "PAC-Bayes bound needs at least m = 2 examples, got {m}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence parameter delta must lie in (0, 1), got {delta}"
        )));
    }
    let ln_term = p_f.ln() + (delta / (2.0 * m as f64)).ln();
    let eps = 1.0 - (ln_term / (m as f64 - 1.0)).exp();
    Ok(eps.clamp(0.0, 1.0))
}
