//! Closed-form bounds on the parameter-space probability of function
//! families, plus the clause-coverage model they are built from.
//!
//! Conventions shared by every bound here:
//!
//! - `M = alpha_w * 2^(n-1)` is the hidden width (row count);
//! - `p = (2^n - 1) / 3^n` is the probability that one uniformly random
//!   clause row covers a fixed input (the all-absent row is inactive and
//!   covers nothing, hence the `-1`);
//! - bounds whose values underflow `f64` are reported as [`LogValue`]s
//!   carrying the natural log alongside the (possibly zero) linear value.

use crate::bits;
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::rng::{Domain, Stream};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

/// A probability (or probability bound) carried in log space.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    /// Natural logarithm of the value.
    pub ln: f64,
    /// `exp(ln)`; zero when the value underflows.
    pub linear: f64,
}

impl LogValue {
    pub fn from_ln(ln: f64) -> Self {
        LogValue { ln, linear: ln.exp() }
    }
}

/// Shared geometry for the bound evaluators.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParams {
    pub n: usize,
    pub alpha_w: usize,
}

impl BoundParams {
    pub fn new(n: usize, alpha_w: usize) -> Result<Self> {
        if n == 0 || n > crate::boolfn::MAX_N {
            return Err(Error::DimensionOutOfRange { n });
        }
        if alpha_w == 0 {
            return Err(Error::InvalidArgument(
                "width multiplier alpha_w must be at least 1".into(),
            ));
        }
        Ok(BoundParams { n, alpha_w })
    }

    /// Hidden width `M = alpha_w * 2^(n-1)`.
    pub fn rows(&self) -> u64 {
        (self.alpha_w as u64) << (self.n - 1)
    }

    /// Per-input clause coverage probability `p`.
    pub fn p(&self) -> f64 {
        p_clause_covers(self.n).expect("n validated").p()
    }
}

/// The probability that one uniformly random clause row covers a fixed input:
/// exactly `(2^n - 1) / 3^n`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseCoverage {
    pub n: usize,
    pub numerator: u64,
    pub denominator: u64,
}

impl ClauseCoverage {
    /// The coverage probability as a float.
    pub fn p(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// Probability that a width-`M = alpha_w * 2^(n-1)` layer makes a fixed
    /// input true under the positive sign: `1 - (1-p)^M`.
    pub fn input_true_probability(&self, alpha_w: usize) -> f64 {
        let rows = (alpha_w as u64) << (self.n - 1);
        1.0 - (1.0 - self.p()).powf(rows as f64)
    }
}

/// Exact per-input coverage probability of a uniform random clause.
pub fn p_clause_covers(n: usize) -> Result<ClauseCoverage> {
    if n == 0 || n > crate::boolfn::MAX_N {
        return Err(Error::DimensionOutOfRange { n });
    }
    Ok(ClauseCoverage {
        n,
        numerator: (1u64 << n) - 1,
        denominator: 3u64.pow(n as u32),
    })
}

/// Lower bounds on the probability of one fixed constant function.
///
/// `lower` is the inclusion-exclusion sum `1/2 * sum_k (-1)^k C(2^n, k)
/// max(1 - k p, 0)^M`; bases are clamped at zero because a coverage
/// probability cannot be negative, and with clamping the alternating sum is
/// no longer guaranteed nonnegative — a negative result is a vacuous (but
/// still valid) lower bound. `truncated_lower` keeps only the first-order
/// term: `1/2 * (1 - 2^n (1-p)^M)`. Both are O(1) quantities, so plain
/// linear values suffice.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantBounds {
    pub lower: f64,
    pub truncated_lower: f64,
}

pub fn bound_constant(params: &BoundParams) -> ConstantBounds {
    let p = params.p();
    let m = params.rows() as f64;
    let inputs = 1u64 << params.n;
    let mut sum = 0.0;
    let ln_total = ln_gamma(inputs as f64 + 1.0);
    for k in 0..=inputs {
        let base = 1.0 - k as f64 * p;
        if base <= 0.0 {
            continue; // clamped term is exactly zero
        }
        let ln_binom =
            ln_total - ln_gamma(k as f64 + 1.0) - ln_gamma((inputs - k) as f64 + 1.0);
        let term = (ln_binom + m * base.ln()).exp();
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    ConstantBounds {
        lower: 0.5 * sum,
        truncated_lower: 0.5 * (1.0 - inputs as f64 * (1.0 - p).powf(m)),
    }
}

/// Upper bounds on the probability of weight-`t` functions, by output sign.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyUpper {
    pub plus: LogValue,
    pub minus: LogValue,
    pub max: LogValue,
}

/// Upper bound `exp(-M (2/3)^(n - floor(log2(2^n - t))))` on the probability
/// of computing any fixed function with exactly `t` ones under the positive
/// sign, together with the `t <-> 2^n - t` swapped form for the negative
/// sign and the larger of the two.
pub fn bound_entropy_upper(params: &BoundParams, t: u64) -> Result<EntropyUpper> {
    let inputs = 1u64 << params.n;
    if t == 0 || t >= inputs {
        return Err(Error::InvalidArgument(format!(
            "t must be in 1..={} (got {t})",
            inputs - 1
        )));
    }
    let m = params.rows() as f64;
    let exponent = |weight: u64| {
        let levels = params.n as i32 - (inputs - weight).ilog2() as i32;
        -m * (2.0f64 / 3.0).powi(levels)
    };
    let plus = LogValue::from_ln(exponent(t));
    let minus = LogValue::from_ln(exponent(inputs - t));
    let max = if plus.ln >= minus.ln { plus } else { minus };
    Ok(EntropyUpper { plus, minus, max })
}

/// A two-sided bound in log space.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairBounds {
    pub lower: LogValue,
    pub upper: LogValue,
}

/// Bounds on the conditional probability, given the negative output sign, of
/// one fixed function with a single true output:
/// `3^(-n^2) (1-p)^(M-n) <= P <= (1-p)^M`.
pub fn bound_1entropy(params: &BoundParams) -> PairBounds {
    let p = params.p();
    let m = params.rows() as f64;
    let n = params.n as f64;
    let miss = (1.0 - p).ln();
    PairBounds {
        lower: LogValue::from_ln(-n * n * 3f64.ln() + (m - n) * miss),
        upper: LogValue::from_ln(m * miss),
    }
}

/// Bounds on the probability of a `k`-variable parity, plus the exponent of
/// the common `Theta` scale the two sides share.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityBounds {
    pub lower: LogValue,
    pub upper: LogValue,
    /// Both bounds decay like `3^(-Theta(exponent))` with
    /// `exponent = alpha_w * k * 2^(n-1)`.
    pub theta_exponent: f64,
}

/// `3^(-n 2^(k-1)) (2^(k-1))! (2^(k-1)/3^k)^(M - 2^(k-1)) <= P(k-parity)
/// <= (2^(k-1)/3^k)^M`.
pub fn bound_parity(params: &BoundParams, k: usize) -> Result<ParityBounds> {
    if k == 0 || k > params.n {
        return Err(Error::InvalidArgument(format!(
            "parity order k must be in 1..={} (got {k})",
            params.n
        )));
    }
    let m = params.rows() as f64;
    let ln3 = 3f64.ln();
    let j = (1u64 << (k - 1)) as f64; // clauses in the minimal representation
    let ln_rate = j.ln() - k as f64 * ln3; // ln(2^(k-1) / 3^k)
    let lower = -(params.n as f64) * j * ln3 + ln_gamma(j + 1.0) + (m - j) * ln_rate;
    Ok(ParityBounds {
        lower: LogValue::from_ln(lower),
        upper: LogValue::from_ln(m * ln_rate),
        theta_exponent: (params.alpha_w * k) as f64 * (1u64 << (params.n - 1)) as f64,
    })
}

/// `3^(-nk) (1 - (2/3)^k + 3^(-n))^(M-k) <= P(k-sparse) <= (...)^M` for a
/// fixed function depending on exactly `k` of the `n` inputs.
pub fn bound_ksparse(params: &BoundParams, k: usize) -> Result<PairBounds> {
    if k == 0 || k > params.n {
        return Err(Error::InvalidArgument(format!(
            "sparsity k must be in 1..={} (got {k})",
            params.n
        )));
    }
    let m = params.rows() as f64;
    let n = params.n as f64;
    let base = (1.0 - (2.0f64 / 3.0).powi(k as i32) + 3f64.powi(-(params.n as i32))).ln();
    Ok(PairBounds {
        lower: LogValue::from_ln(-n * k as f64 * 3f64.ln() + (m - k as f64) * base),
        upper: LogValue::from_ln(m * base),
    })
}

/// Probability that, in `m` uniform draws from `N` equally likely states,
/// every state of a marked set of size `q` appears at least once and none of
/// a disjoint marked set of size `r` ever appears.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QrBounds {
    /// Exact inclusion-exclusion value
    /// `sum_i (-1)^i C(q,i) (1 - (r+i)/N)^m`.
    pub exact: f64,
    /// Union-bound relaxation
    /// `((N-r)/N)^m (1 - q (1 - 1/(N-r))^m)`; never exceeds `exact`.
    pub union_lower: f64,
}

pub fn bound_qr(q: u64, r: u64, states: u64, draws: u64) -> Result<QrBounds> {
    if states == 0 || draws == 0 {
        return Err(Error::InvalidArgument(
            "state and draw counts must be positive".into(),
        ));
    }
    if q + r > states {
        return Err(Error::InvalidArgument(format!(
            "q + r = {} exceeds the state count {states}",
            q + r
        )));
    }
    let n = states as f64;
    let m = draws as f64;
    let mut exact = 0.0;
    let ln_q_total = ln_gamma(q as f64 + 1.0);
    for i in 0..=q {
        let surviving = (states - r - i) as f64 / n;
        let term = if surviving == 0.0 {
            0.0
        } else {
            let ln_binom =
                ln_q_total - ln_gamma(i as f64 + 1.0) - ln_gamma((q - i) as f64 + 1.0);
            (ln_binom + m * surviving.ln()).exp()
        };
        if i % 2 == 0 {
            exact += term;
        } else {
            exact -= term;
        }
    }
    let union_lower = if states == r {
        0.0
    } else {
        let keep = (states - r) as f64 / n;
        keep.powf(m) * (1.0 - q as f64 * (1.0 - 1.0 / (states - r) as f64).powf(m))
    };
    Ok(QrBounds { exact, union_lower })
}

/// The width multiplier at which simple-function dominance is strongest:
/// `alpha_w* ~ 2 n ln2 (3/4)^n`.
pub fn optimal_width(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::DimensionOutOfRange { n });
    }
    Ok(2.0 * n as f64 * 2f64.ln() * (3.0f64 / 4.0).powi(n as i32))
}

/// Empirical accepted-clause statistics against the independent-coverage
/// model, for uniformly random weight-`t` functions.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceCurve {
    pub n: usize,
    pub t: u64,
    /// Zeros of the sampled functions: `2^n - t`.
    pub t_tilde: u64,
    pub trials: u64,
    /// Mean over sampled functions of the fraction of the `3^n` clauses
    /// (inactive clause included) that cover none of the function's zeros.
    pub mean: f64,
    /// Sample standard deviation of that fraction (0 for a single trial).
    pub stddev: f64,
    /// Independent-coverage prediction `(1-p)^(2^n - t)`.
    pub model: f64,
}

/// Sample `trials` uniform weight-`t` functions and measure the exact
/// accepted-clause fraction of each: a clause is accepted when adding it as
/// an active row cannot break any zero of the function, i.e. when it covers
/// no zero. The inactive all-absent clause covers nothing and is always
/// accepted. The model value treats the zeros as independently covered. It
/// is exact when the function has at most one zero, and overestimates the
/// accepted fraction when ones are scarce (most clauses cover large cubes
/// that almost surely hit a zero); at moderate densities and `n >= 4` the
/// true mean can instead exceed the model.
pub fn entropy_independence_curve(
    n: usize,
    t: u64,
    trials: u64,
    seed: u64,
) -> Result<IndependenceCurve> {
    const MAX_EXHAUSTIVE_N: usize = 5;
    if n == 0 || n > MAX_EXHAUSTIVE_N {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive clause check is limited to n <= {MAX_EXHAUSTIVE_N}, got n = {n}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let inputs = 1u64 << n;
    if t > inputs {
        return Err(Error::InvalidArgument(format!(
            "t must be in 0..={inputs} (got {t})"
        )));
    }

    // Cover table of every clause, as a bitset over the 2^n inputs; the
    // all-absent combination is the inactive clause covering nothing.
    let var_tables: Vec<u64> = (1..=n)
        .map(|i| {
            let f = BooleanFunction::var(n, i).expect("n validated");
            f.words()[0]
        })
        .collect();
    let full = bits::tail_mask(inputs as usize);
    let clause_count = 3u64.pow(n as u32);
    let mut clause_covers = Vec::with_capacity(clause_count as usize);
    for code in 0..clause_count {
        let mut c = code;
        let mut cover = full;
        let mut active = false;
        for table in &var_tables {
            match c % 3 {
                1 => {
                    cover &= table;
                    active = true;
                }
                2 => {
                    cover &= !table & full;
                    active = true;
                }
                _ => {}
            }
            c /= 3;
        }
        clause_covers.push(if active { cover } else { 0 });
    }

    let mut fractions = Vec::with_capacity(trials as usize);
    let mut indices: Vec<usize> = (0..inputs as usize).collect();
    for trial in 0..trials {
        let mut stream = Stream::new(seed, Domain::Independence, trial);
        stream.partial_shuffle(&mut indices, t as usize);
        let mut ones = 0u64;
        for &idx in indices.iter().take(t as usize) {
            ones |= 1 << idx;
        }
        let zeros = !ones & full;
        let accepted = clause_covers.iter().filter(|&&c| c & zeros == 0).count();
        fractions.push(accepted as f64 / clause_count as f64);
    }

    let mean = fractions.iter().sum::<f64>() / trials as f64;
    let stddev = if trials > 1 {
        let var = fractions.iter().map(|x| (x - mean).powi(2)).sum::<f64>()
            / (trials - 1) as f64;
        var.sqrt()
    } else {
        0.0
    };
    let p = p_clause_covers(n)?.p();
    Ok(IndependenceCurve {
        n,
        t,
        t_tilde: inputs - t,
        trials,
        mean,
        stddev,
        model: (1.0 - p).powi((inputs - t) as i32),
    })
}
