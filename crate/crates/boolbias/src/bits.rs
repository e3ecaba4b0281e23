//! Word-level helpers for fixed-length bit vectors stored as `[u64]`.
//!
//! All truth tables and index sets in this crate are little bit vectors
//! (bit `i` of the vector lives at `words[i / 64]`, position `i % 64`);
//! these free functions keep the masking conventions in one place.

/// Number of `u64` words needed for `len` bits.
pub(crate) fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

/// Mask selecting the valid bits of the final word of a `len`-bit vector.
pub(crate) fn tail_mask(len: usize) -> u64 {
    match len % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

pub(crate) fn get(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

pub(crate) fn set(words: &mut [u64], i: usize, value: bool) {
    let mask = 1u64 << (i % 64);
    if value {
        words[i / 64] |= mask;
    } else {
        words[i / 64] &= !mask;
    }
}

pub(crate) fn count_ones(words: &[u64]) -> u64 {
    words.iter().map(|w| w.count_ones() as u64).sum()
}

pub(crate) fn or_assign(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d |= s;
    }
}

pub(crate) fn and_assign(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= s;
    }
}

/// `dst &= !src`.
pub(crate) fn and_not_assign(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= !s;
    }
}

/// Complement within a `len`-bit vector (padding bits stay zero).
pub(crate) fn not_assign(words: &mut [u64], len: usize) {
    for w in words.iter_mut() {
        *w = !*w;
    }
    if let Some(last) = words.last_mut() {
        *last &= tail_mask(len);
    }
}

pub(crate) fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

/// Indices of set bits, ascending.
pub(crate) fn iter_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(wi * 64 + b)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_masks() {
        let mut v = vec![0u64; word_count(130)];
        set(&mut v, 0, true);
        set(&mut v, 64, true);
        set(&mut v, 129, true);
        assert!(get(&v, 0) && get(&v, 64) && get(&v, 129) && !get(&v, 1));
        assert_eq!(count_ones(&v), 3);
        assert_eq!(iter_ones(&v).collect::<Vec<_>>(), vec![0, 64, 129]);
        not_assign(&mut v, 130);
        assert_eq!(count_ones(&v), 127);
        assert_eq!(tail_mask(130), 0b11);
    }
}
