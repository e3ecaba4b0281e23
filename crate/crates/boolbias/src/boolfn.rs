//! Total Boolean functions `{0,1}^n -> {0,1}` stored as truth-table bit vectors.
//!
//! Input vectors `v = (x_1, ..., x_n)` map to table indices with `x_1` as the
//! most significant bit: `idx = sum_i x_i * 2^(n-i)`. Every representation in
//! this crate (strings, hex, clause masks, network rows) shares that
//! convention, so index `0` is the all-zeros input and index `2^n - 1` the
//! all-ones input.

use crate::bits;
use crate::error::{Error, Result};
use crate::rng::{Domain, Stream};
use serde::{Deserialize, Serialize};

/// Largest supported input dimension.
pub const MAX_N: usize = 16;

fn check_n(n: usize) -> Result<()> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange { n })
    }
}

/// Table index of an input vector (`x_1` first, most significant).
pub fn index_of(v: &[bool]) -> usize {
    v.iter().fold(0, |acc, &b| acc << 1 | usize::from(b))
}

/// Input vector for a table index (`x_1` first).
pub fn input_of(n: usize, idx: usize) -> Vec<bool> {
    (0..n).map(|i| idx >> (n - 1 - i) & 1 == 1).collect()
}

/// A total Boolean function on `n <= 16` inputs, as a `2^n`-bit truth table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: u8,
    words: Vec<u64>,
}

impl BooleanFunction {
    /// The constant-False function.
    pub fn zeros(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(BooleanFunction {
            n: n as u8,
            words: vec![0; bits::word_count(1 << n)],
        })
    }

    /// A constant function.
    pub fn constant(n: usize, value: bool) -> Result<Self> {
        let mut f = Self::zeros(n)?;
        if value {
            bits::not_assign(&mut f.words, 1 << n);
        }
        Ok(f)
    }

    /// Build from the output bits in index order.
    pub fn from_bits<I: IntoIterator<Item = bool>>(n: usize, bits_iter: I) -> Result<Self> {
        let mut f = Self::zeros(n)?;
        let mut count = 0;
        for (idx, b) in bits_iter.into_iter().enumerate() {
            if idx >= 1 << n {
                return Err(Error::InputLength {
                    expected: 1 << n,
                    got: idx + 1,
                });
            }
            f.set(idx, b);
            count += 1;
        }
        if count != 1 << n {
            return Err(Error::InputLength {
                expected: 1 << n,
                got: count,
            });
        }
        Ok(f)
    }

    /// Build from the set of indices where the function is 1.
    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, ones: I) -> Result<Self> {
        let mut f = Self::zeros(n)?;
        for idx in ones {
            if idx >= 1 << n {
                return Err(Error::InvalidArgument(format!(
                    "index {idx} out of range for n = {n}"
                )));
            }
            f.set(idx, true);
        }
        Ok(f)
    }

    /// Parse a `0`/`1` string of length `2^n` (index 0 first).
    pub fn from_string(s: &str) -> Result<Self> {
        let len = s.len();
        let n = match len {
            l if l >= 2 && l.is_power_of_two() => l.trailing_zeros() as usize,
            _ => {
                return Err(Error::Parse(format!(
                    "function string length {len} is not a power of two >= 2"
                )))
            }
        };
        check_n(n)?;
        let mut f = Self::zeros(n)?;
        for (idx, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => f.set(idx, true),
                other => {
                    return Err(Error::Parse(format!(
                        "invalid character {:?} in function string",
                        other as char
                    )))
                }
            }
        }
        Ok(f)
    }

    /// Hex form: two chars per byte, index 0 at the most significant bit of
    /// the first byte; tables shorter than a byte are zero-padded at the end.
    pub fn to_hex(&self) -> String {
        let len = self.len();
        let mut out = String::with_capacity(len.div_ceil(8) * 2);
        for byte_idx in 0..len.div_ceil(8) {
            let mut byte = 0u8;
            for k in 0..8 {
                let idx = byte_idx * 8 + k;
                if idx < len && self.get(idx) {
                    byte |= 1 << (7 - k);
                }
            }
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    /// Inverse of [`BooleanFunction::to_hex`]; `n` is required because the
    /// hex form pads to whole bytes.
    pub fn from_hex(n: usize, s: &str) -> Result<Self> {
        check_n(n)?;
        let len = 1usize << n;
        let expected_chars = len.div_ceil(8) * 2;
        if s.len() != expected_chars {
            return Err(Error::Parse(format!(
                "hex string has {} chars, expected {expected_chars} for n = {n}",
                s.len()
            )));
        }
        let mut f = Self::zeros(n)?;
        for (byte_idx, chunk) in s.as_bytes().chunks(2).enumerate() {
            let txt = std::str::from_utf8(chunk).expect("ascii");
            let byte = u8::from_str_radix(txt, 16)
                .map_err(|_| Error::Parse(format!("invalid hex byte {txt:?}")))?;
            for k in 0..8 {
                let idx = byte_idx * 8 + k;
                let bit = byte >> (7 - k) & 1 == 1;
                if idx < len {
                    f.set(idx, bit);
                } else if bit {
                    return Err(Error::Parse(
                        "nonzero padding bits in hex function string".into(),
                    ));
                }
            }
        }
        Ok(f)
    }

    /// Truth table of the single variable `x_i` (1-based).
    pub fn var(n: usize, i: usize) -> Result<Self> {
        check_n(n)?;
        if !(1..=n).contains(&i) {
            return Err(Error::InvalidArgument(format!(
                "variable x{i} out of range for n = {n}"
            )));
        }
        let mut f = Self::zeros(n)?;
        for idx in 0..1usize << n {
            if idx >> (n - i) & 1 == 1 {
                f.set(idx, true);
            }
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Table length `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, idx: usize) -> bool {
        bits::get(&self.words, idx)
    }

    pub fn set(&mut self, idx: usize, value: bool) {
        bits::set(&mut self.words, idx, value);
    }

    /// Evaluate on an input vector (`x_1` first).
    pub fn eval(&self, v: &[bool]) -> Result<bool> {
        if v.len() != self.n() {
            return Err(Error::InputLength {
                expected: self.n(),
                got: v.len(),
            });
        }
        Ok(self.get(index_of(v)))
    }

    /// Evaluate on a table index.
    pub fn eval_index(&self, idx: usize) -> bool {
        self.get(idx)
    }

    pub fn count_ones(&self) -> u64 {
        bits::count_ones(&self.words)
    }

    /// Indices where the function outputs 1, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        bits::iter_ones(&self.words)
    }

    pub fn complement(&self) -> Self {
        let mut f = self.clone();
        let len = f.len();
        bits::not_assign(&mut f.words, len);
        f
    }

    /// Pointwise OR (both operands must share `n`).
    pub fn or(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let mut f = self.clone();
        bits::or_assign(&mut f.words, &other.words);
        Ok(f)
    }

    /// Pointwise AND (both operands must share `n`).
    pub fn and(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        let mut f = self.clone();
        bits::and_assign(&mut f.words, &other.words);
        Ok(f)
    }

    /// True when the two functions output 1 on a common input.
    pub fn intersects(&self, other: &Self) -> bool {
        bits::intersects(&self.words, &other.words)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n(),
                got: other.n(),
            })
        }
    }
}

/// Truth table of `f` packed into a single 128-bit word (requires `n <= 7`).
pub(crate) fn packed_table(f: &BooleanFunction) -> u128 {
    debug_assert!(f.n() <= 7);
    let words = f.words();
    let mut key = words[0] as u128;
    if words.len() > 1 {
        key |= (words[1] as u128) << 64;
    }
    key
}

/// Packed truth tables of the variables `x_1..x_n` plus the all-ones mask
/// over the `2^n` inputs (requires `n <= 7`).
pub(crate) fn packed_var_tables(n: usize) -> (Vec<u128>, u128) {
    debug_assert!((1..=7).contains(&n));
    let vars = (1..=n)
        .map(|i| packed_table(&BooleanFunction::var(n, i).expect("n validated")))
        .collect();
    let len = 1u32 << n;
    let full = if len == 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    };
    (vars, full)
}

impl std::fmt::Display for BooleanFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for idx in 0..self.len() {
            f.write_str(if self.get(idx) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BooleanFunction(n={}, {})", self.n, self)
    }
}

impl std::str::FromStr for BooleanFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_string(s)
    }
}

/// Which variables a parity family acts on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", untagged)]
pub enum SubsetRule {
    /// Named rule: `"first"` (variables `x_1..x_k`) or `"random"` (seeded draw).
    Named(NamedSubset),
    /// Explicit 1-based variable list.
    Fixed(Vec<usize>),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedSubset {
    First,
    Random,
}

impl SubsetRule {
    pub const FIRST: SubsetRule = SubsetRule::Named(NamedSubset::First);
    pub const RANDOM: SubsetRule = SubsetRule::Named(NamedSubset::Random);
}

/// The target-function families used across experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// Constant 0 or constant 1.
    Constant { value: bool },
    /// XOR over a `k`-variable subset.
    Parity { k: usize, subset: SubsetRule },
    /// Exactly `t` outputs set to 1, support drawn uniformly from the seed.
    Entropy { t: u64 },
    /// A short `0`/`1` pattern tiled to length `2^n` (truncating the tail).
    Repeat { pattern: String },
}

/// A reproducible description of a target function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub n: usize,
    #[serde(flatten)]
    pub family: Family,
    pub seed: u64,
}

impl FamilySpec {
    /// Materialize the truth table this spec describes.
    pub fn generate(&self) -> Result<BooleanFunction> {
        let n = self.n;
        check_n(n)?;
        match &self.family {
            Family::Constant { value } => BooleanFunction::constant(n, *value),
            Family::Parity { k, subset } => {
                if !(1..=n).contains(k) {
                    return Err(Error::InvalidArgument(format!(
                        "parity order k = {k} out of range for n = {n}"
                    )));
                }
                let vars: Vec<usize> = match subset {
                    SubsetRule::Named(NamedSubset::First) => (1..=*k).collect(),
                    SubsetRule::Named(NamedSubset::Random) => {
                        let mut stream = Stream::new(self.seed, Domain::Family, 0);
                        let mut all: Vec<usize> = (1..=n).collect();
                        stream.partial_shuffle(&mut all, *k);
                        let mut chosen = all[..*k].to_vec();
                        chosen.sort_unstable();
                        chosen
                    }
                    SubsetRule::Fixed(vars) => {
                        let mut sorted = vars.clone();
                        sorted.sort_unstable();
                        sorted.dedup();
                        if sorted.len() != *k || vars.len() != *k {
                            return Err(Error::InvalidArgument(format!(
                                "parity subset {vars:?} is not {k} distinct variables"
                            )));
                        }
                        if sorted.iter().any(|v| !(1..=n).contains(v)) {
                            return Err(Error::InvalidArgument(format!(
                                "parity subset {vars:?} out of range for n = {n}"
                            )));
                        }
                        sorted
                    }
                };
                let mask: usize = vars.iter().map(|&i| 1usize << (n - i)).sum();
                BooleanFunction::from_bits(
                    n,
                    (0..1usize << n).map(|idx| (idx & mask).count_ones() % 2 == 1),
                )
            }
            Family::Entropy { t } => {
                let len = 1u64 << n;
                if *t > len {
                    return Err(Error::InvalidArgument(format!(
                        "entropy weight t = {t} exceeds 2^{n}"
                    )));
                }
                let mut stream = Stream::new(self.seed, Domain::Family, 0);
                let mut indices: Vec<usize> = (0..1usize << n).collect();
                stream.partial_shuffle(&mut indices, *t as usize);
                BooleanFunction::from_indices(n, indices[..*t as usize].iter().copied())
            }
            Family::Repeat { pattern } => {
                if pattern.is_empty() || pattern.bytes().any(|b| b != b'0' && b != b'1') {
                    return Err(Error::InvalidArgument(format!(
                        "repeat pattern {pattern:?} must be a nonempty 0/1 string"
                    )));
                }
                let bytes = pattern.as_bytes();
                BooleanFunction::from_bits(
                    n,
                    (0..1usize << n).map(|idx| bytes[idx % bytes.len()] == b'1'),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn index_convention_x1_is_msb() {
        // v = (x1, x2, x3, x4) = (0, 0, 0, 1) -> idx 1
        assert_eq!(index_of(&[false, false, false, true]), 1);
        assert_eq!(index_of(&[true, false, false, false]), 8);
        assert_eq!(input_of(4, 9), vec![true, false, false, true]);
    }

    #[test]
    fn four_parity_string_evaluates_correctly() {
        let f = BooleanFunction::from_string("0110100110010110").unwrap();
        assert_eq!(f.n(), 4);
        assert!(f.eval(&[false, false, false, true]).unwrap());
        assert!(!f.eval(&[true, false, false, true]).unwrap());
        for idx in 0..16 {
            let parity = (idx as u32).count_ones() % 2 == 1;
            assert_eq!(f.eval_index(idx), parity, "idx {idx}");
        }
    }

    #[test]
    fn string_roundtrip_exhaustive_n2() {
        for bits in 0u32..16 {
            let f = BooleanFunction::from_bits(2, (0..4).map(|i| bits >> i & 1 == 1)).unwrap();
            let back = BooleanFunction::from_string(&f.to_string()).unwrap();
            assert_eq!(f, back);
        }
    }

    #[test]
    fn hex_roundtrip_matches_msb_first_bytes() {
        let f = BooleanFunction::from_string("0110100110010110").unwrap();
        assert_eq!(f.to_hex(), "6996");
        assert_eq!(BooleanFunction::from_hex(4, "6996").unwrap(), f);
        // sub-byte table pads with zeros
        let g = BooleanFunction::from_string("0110").unwrap();
        assert_eq!(g.to_hex(), "60");
        assert_eq!(BooleanFunction::from_hex(2, "60").unwrap(), g);
        assert!(BooleanFunction::from_hex(2, "61").is_err());
    }

    #[test]
    fn rejects_bad_strings() {
        assert!(BooleanFunction::from_string("011").is_err());
        assert!(BooleanFunction::from_string("01x0").is_err());
        assert!(BooleanFunction::from_string("1").is_err());
        assert!(BooleanFunction::zeros(17).is_err());
        assert!(BooleanFunction::zeros(0).is_err());
    }

    #[test]
    fn var_tables_follow_index_bits() {
        let x1 = BooleanFunction::var(3, 1).unwrap();
        assert_eq!(x1.to_string(), "00001111");
        let x3 = BooleanFunction::var(3, 3).unwrap();
        assert_eq!(x3.to_string(), "01010101");
    }

    #[test]
    fn parity_family_on_first_two_bits_n3() {
        let spec = FamilySpec {
            n: 3,
            family: Family::Parity {
                k: 2,
                subset: SubsetRule::FIRST,
            },
            seed: 0,
        };
        assert_eq!(spec.generate().unwrap().to_string(), "00111100");
    }

    #[test]
    fn parity_fixed_subset_matches_first_when_equal() {
        let fixed = FamilySpec {
            n: 4,
            family: Family::Parity {
                k: 2,
                subset: SubsetRule::Fixed(vec![2, 1]),
            },
            seed: 9,
        };
        let first = FamilySpec {
            n: 4,
            family: Family::Parity {
                k: 2,
                subset: SubsetRule::FIRST,
            },
            seed: 1,
        };
        assert_eq!(fixed.generate().unwrap(), first.generate().unwrap());
    }

    #[test]
    fn entropy_family_weight_and_determinism() {
        let spec = FamilySpec {
            n: 5,
            family: Family::Entropy { t: 7 },
            seed: 42,
        };
        let f = spec.generate().unwrap();
        assert_eq!(f.count_ones(), 7);
        assert_eq!(f, spec.generate().unwrap());
        let other_seed = FamilySpec { seed: 43, ..spec };
        assert_ne!(f, other_seed.generate().unwrap());
    }

    #[test]
    fn repeat_family_tiles_and_truncates() {
        let spec = FamilySpec {
            n: 3,
            family: Family::Repeat {
                pattern: "110".into(),
            },
            seed: 0,
        };
        assert_eq!(spec.generate().unwrap().to_string(), "11011011");
        let tiled = FamilySpec {
            n: 4,
            family: Family::Repeat {
                pattern: "1001".into(),
            },
            seed: 0,
        };
        assert_eq!(tiled.generate().unwrap().to_string(), "1001100110011001");
    }

    #[test]
    fn constant_families() {
        let t = FamilySpec {
            n: 3,
            family: Family::Constant { value: true },
            seed: 0,
        };
        let f = t.generate().unwrap();
        assert_eq!(f.count_ones(), 8);
        assert_eq!(f.complement().count_ones(), 0);
    }

    #[test]
    fn family_spec_serde_roundtrip() {
        let spec = FamilySpec {
            n: 7,
            family: Family::Parity {
                k: 3,
                subset: SubsetRule::RANDOM,
            },
            seed: 5,
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<FamilySpec>(&json).unwrap(), spec);
        let explicit: FamilySpec =
            serde_json::from_str(r#"{"n":4,"family":"parity","k":2,"subset":[1,3],"seed":0}"#)
                .unwrap();
        assert_eq!(
            explicit.family,
            Family::Parity {
                k: 2,
                subset: SubsetRule::Fixed(vec![1, 3])
            }
        );
    }

    proptest! {
        #[test]
        fn string_roundtrip_random(n in 1usize..=7, seed in 0u64..1_000) {
            let spec = FamilySpec { n, family: Family::Entropy { t: seed % (1u64 << n) }, seed };
            let f = spec.generate().unwrap();
            let back = BooleanFunction::from_string(&f.to_string()).unwrap();
            prop_assert_eq!(&f, &back);
            let hex_back = BooleanFunction::from_hex(n, &f.to_hex()).unwrap();
            prop_assert_eq!(&f, &hex_back);
        }

        #[test]
        fn complement_is_involution(seed in 0u64..500) {
            let spec = FamilySpec { n: 5, family: Family::Entropy { t: seed % 32 }, seed };
            let f = spec.generate().unwrap();
            prop_assert_eq!(f.complement().complement(), f);
        }

        #[test]
        fn eval_matches_index(seed in 0u64..200, idx in 0usize..32) {
            let spec = FamilySpec { n: 5, family: Family::Entropy { t: 11 }, seed };
            let f = spec.generate().unwrap();
            let v = input_of(5, idx);
            prop_assert_eq!(f.eval(&v).unwrap(), f.eval_index(idx));
        }
    }
}
