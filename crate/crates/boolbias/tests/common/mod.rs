//! Shared test oracles, implemented independently of the library's
//! minimizer: shortest-path search over uncovered-minterm sets using every
//! possible clause, rather than prime-implicant set cover.

use boolbias::BooleanFunction;

/// Exact minimum total literal count of a DNF whose union covers every `on`
/// minterm and avoids every `off` minterm (indices outside both are free).
/// Dijkstra on the lattice of still-uncovered `on` subsets with a bucket
/// queue; edges add one clause (any of the `3^n` sign patterns, tautology
/// included) that avoids `off`.
pub fn min_literals_cover(n: usize, on: u32, off: u32) -> u32 {
    assert!(n <= 4, "test oracle sized for n <= 4");
    let inputs = 1usize << n;
    debug_assert_eq!(on & off, 0);
    if on == 0 {
        return 0;
    }

    // Dense re-indexing of the on-set bits.
    let on_bits: Vec<usize> = (0..inputs).filter(|&i| on >> i & 1 == 1).collect();
    let dense = |cover: u32| -> u32 {
        let mut d = 0;
        for (pos, &bit) in on_bits.iter().enumerate() {
            if cover >> bit & 1 == 1 {
                d |= 1 << pos;
            }
        }
        d
    };

    // Every clause that avoids the off-set, as (dense on-cover, literals).
    let mut moves: Vec<(u32, u32)> = Vec::new();
    let clause_count = 3usize.pow(n as u32);
    for code in 0..clause_count {
        let mut cover = (1u32 << inputs) - 1;
        let mut literals = 0;
        let mut rest = code;
        for var in 0..n {
            // Variable `var` reads input index bit `n - 1 - var`.
            let bit = n - 1 - var;
            let table: u32 = (0..inputs as u32)
                .filter(|i| i >> bit & 1 == 1)
                .fold(0, |t, i| t | 1 << i);
            match rest % 3 {
                0 => {
                    cover &= !table;
                    literals += 1;
                }
                2 => {
                    cover &= table;
                    literals += 1;
                }
                _ => {}
            }
            rest /= 3;
        }
        if cover & off == 0 && cover & on != 0 {
            moves.push((dense(cover), literals));
        }
    }

    // Bucket-queue Dijkstra: dist[mask] = min literals to cover `mask`.
    let full = (1u32 << on_bits.len()) - 1;
    let mut dist = vec![u32::MAX; 1 << on_bits.len()];
    let max_cost = (n as u32 + 1) * on_bits.len() as u32 + 1;
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); max_cost as usize];
    dist[full as usize] = 0;
    buckets[0].push(full);
    for cost in 0..max_cost {
        while let Some(mask) = buckets[cost as usize].pop() {
            if dist[mask as usize] != cost {
                continue;
            }
            if mask == 0 {
                return cost;
            }
            for &(cover, literals) in &moves {
                let next = mask & !cover;
                if next == mask {
                    continue;
                }
                let next_cost = cost + literals;
                if next_cost < dist[next as usize] {
                    dist[next as usize] = next_cost;
                    buckets[next_cost as usize].push(next);
                }
            }
        }
    }
    unreachable!("a full clause always covers each on minterm");
}

/// Independent K_DNF oracle: cheaper of representing the function or its
/// complement (global output negation).
pub fn brute_k_dnf(f: &BooleanFunction) -> u32 {
    let n = f.n();
    let inputs = 1usize << n;
    let mut on = 0u32;
    for i in 0..inputs {
        if f.get(i) {
            on |= 1 << i;
        }
    }
    let full = (1u32 << inputs) - 1;
    let off = full & !on;
    min_literals_cover(n, on, off).min(min_literals_cover(n, off, on))
}
