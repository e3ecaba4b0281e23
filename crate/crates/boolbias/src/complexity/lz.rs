//! Lempel-Ziv string complexity.
//!
//! [`word_count`] runs the LZ76 exhaustive-history parse: scan left to right,
//! growing the current word while it already occurs as a substring of the
//! text preceding its final character (self-overlapping occurrences count),
//! and emit it as soon as it becomes new; the final word counts even when it
//! was seen before. [`k_lz`] symmetrizes the parse over both reading
//! directions: `K_lz(x) = (log2(len) / 2) * (N_w(x) + N_w(reverse(x)))`.
//! This is the one fixed variant used everywhere in this crate; no special
//! case is applied to constant strings.

use crate::error::{Error, Result};

fn validate(s: &str) -> Result<&[u8]> {
    if s.is_empty() {
        return Err(Error::InvalidArgument(
            "Lempel-Ziv parse needs a nonempty string".into(),
        ));
    }
    if s.bytes().any(|b| b != b'0' && b != b'1') {
        return Err(Error::Parse(format!("{s:?} is not a 0/1 string")));
    }
    Ok(s.as_bytes())
}

fn parse_words(bytes: &[u8]) -> usize {
    let mut words = 0;
    let mut start = 0;
    while start < bytes.len() {
        let mut end = start + 1;
        // Extend while bytes[start..end] occurs in the text before position
        // end-1; such occurrences start strictly before the word itself but
        // may overlap into it.
        while end < bytes.len() {
            let word = &bytes[start..end];
            if !bytes[..end - 1].windows(word.len()).any(|w| w == word) {
                break;
            }
            end += 1;
        }
        words += 1;
        start = end;
    }
    words
}

/// Number of words in the LZ76 dictionary parse of a `0`/`1` string.
pub fn word_count(s: &str) -> Result<usize> {
    Ok(parse_words(validate(s)?))
}

/// Direction-symmetrized Lempel-Ziv complexity of a `0`/`1` string, in bits.
pub fn k_lz(s: &str) -> Result<f64> {
    let bytes = validate(s)?;
    let forward = parse_words(bytes);
    let reversed: Vec<u8> = bytes.iter().rev().copied().collect();
    let backward = parse_words(&reversed);
    Ok((bytes.len() as f64).log2() / 2.0 * (forward + backward) as f64)
}
