//! Counting `#{i : ‖N_i‖ ≤ T}` without materialising products.
//!
//! Column sums of `N_i N_j` are `(1ᵀN_i)·N_j`, so the norm along a branch only
//! depends on the column-sum row vector. The generic route walks that vector
//! tree. For the Rauzy triple a much faster exact route exists: appending
//! letter `j` adds coordinate `j` to the others, which leaves coordinate `j`
//! as the strict minimum. A run of repeated letters therefore has closed-form
//! length, and children past a threshold contribute `⌊(T − q − kz)/(p + kz)⌋`
//! nodes each, a quotient that only takes a handful of values.

use crate::error::{Error, Result};

use super::{rauzy_rows, GeneratorSet};

/// Whether the generators are exactly the three Rauzy matrices, in any order.
pub fn is_rauzy_triple(gens: &GeneratorSet) -> bool {
    if gens.len() != 3 || gens.matrix_size() != 3 {
        return false;
    }
    let mut have: Vec<Vec<Vec<i64>>> = gens
        .generators()
        .iter()
        .filter_map(|g| g.matrix().rows_i64())
        .collect();
    let mut want = rauzy_rows();
    have.sort();
    want.sort();
    have == want
}

/// Calls `f(depth, norm)` for every word with `‖N_i‖ ≤ cap`, in depth-first order.
pub fn for_each_norm(gens: &GeneratorSet, cap: u64, mut f: impl FnMut(usize, u64)) -> Result<()> {
    if !gens.supports_norm_cap() {
        return Err(Error::Policy("norm-capped sets are infinite for these generators".into()));
    }
    if cap == 0 {
        return Ok(());
    }
    let n = gens.matrix_size();
    let mats: Vec<Vec<u64>> = gens
        .generators()
        .iter()
        .map(|g| {
            g.matrix()
                .rows_i64()
                .expect("generators are small")
                .into_iter()
                .flatten()
                .map(|x| x as u64)
                .collect()
        })
        .collect();
    let m = mats.len();
    f(0, 1);
    let mut stack: Vec<(Vec<u64>, usize)> = vec![(vec![1; n], 0)];
    while let Some((s, next)) = stack.last_mut() {
        if *next == m {
            stack.pop();
            continue;
        }
        let g = &mats[*next];
        *next += 1;
        let child: Vec<u64> = (0..n)
            .map(|c| (0..n).fold(0u64, |acc, r| acc.saturating_add(s[r].saturating_mul(g[r * n + c]))))
            .collect();
        let norm = child.iter().copied().max().unwrap_or(0);
        if norm <= cap {
            f(stack.len(), norm);
            stack.push((child, 0));
        }
    }
    Ok(())
}

/// Exact count by walking the column-sum tree node by node.
pub fn count_norm_cap_dfs(gens: &GeneratorSet, cap: u64) -> Result<u64> {
    let mut count = 0u64;
    for_each_norm(gens, cap, |_, _| count += 1)?;
    Ok(count)
}

/// Exact `#{i ∈ 𝓘 : ‖N_i‖ ≤ cap}`, using the run-length route for the Rauzy triple.
pub fn count_norm_cap(gens: &GeneratorSet, cap: u64) -> Result<u64> {
    if !is_rauzy_triple(gens) {
        return count_norm_cap_dfs(gens, cap);
    }
    Ok(match cap {
        0 => 0,
        1 => 1,
        // intermediate sums reach about 4·cap
        c if c < (1 << 29) => 1 + 3 * rauzy_block_u32(2, 2, 1, c as u32),
        c if c < (1 << 61) => 1 + 3 * rauzy_block_u64(2, 2, 1, c),
        _ => return Err(Error::InvalidArgument(format!("norm cap {cap} too large"))),
    })
}

macro_rules! rauzy_block {
    ($name:ident, $t:ty) => {
        /// Nodes in the subtree rooted at a column-sum vector whose last
        /// letter produced the minimum `z`; `x`, `y` are the other two sums.
        fn $name(x: $t, y: $t, z: $t, t: $t) -> u64 {
            let kmax = (t - x.max(y)) / z;
            let total = kmax as u64 + 1;
            if x + y > t {
                return total;
            }
            // run positions k with branching children: x + y + 2kz ≤ t
            let kb = (t - x - y) / (2 * z);
            // equal sums give mirror-image subtrees, so one side is counted twice
            let sides: &[($t, $t)] = if x == y { &[(x, y)] } else { &[(x, y), (y, x)] };
            let mut below = 0u64;
            for &(p, q) in sides {
                let mut lo = 0;
                if 2 * p + q + z <= t {
                    let kr = ((t - 2 * p - q - z) / (3 * z)).min(kb);
                    for k in 0..=kr {
                        let (pp, qq) = (p + k * z, q + k * z);
                        below += $name(qq + pp, z + pp, pp, t);
                    }
                    lo = kr + 1;
                }
                // children without branching of their own: a pure run each
                let mut k = lo;
                while k <= kb {
                    let quot = (t - q - k * z) / (p + k * z);
                    let kend = ((t - q - quot * p) / ((quot + 1) * z)).min(kb);
                    below += quot as u64 * (kend - k + 1) as u64;
                    k = kend + 1;
                }
            }
            total + if x == y { 2 * below } else { below }
        }
    };
}

rauzy_block!(rauzy_block_u32, u32);
rauzy_block!(rauzy_block_u64, u64);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_route_matches_node_walk() {
        let g = GeneratorSet::rauzy();
        for cap in [0u64, 1, 2, 3, 4, 5, 7, 10, 31, 100, 317, 1000, 2500] {
            assert_eq!(count_norm_cap(&g, cap).unwrap(), count_norm_cap_dfs(&g, cap).unwrap(), "cap {cap}");
        }
        assert_eq!(count_norm_cap(&g, 10).unwrap(), 106);
    }

    #[test]
    fn wide_route_matches_narrow_route() {
        for cap in [50u32, 999, 20_000] {
            assert_eq!(rauzy_block_u32(2, 2, 1, cap), rauzy_block_u64(2, 2, 1, cap as u64));
        }
    }

    #[test]
    fn generator_order_does_not_matter() {
        let mut rows = rauzy_rows();
        rows.rotate_left(1);
        let g = GeneratorSet::from_rows(&rows).unwrap();
        assert!(is_rauzy_triple(&g));
        assert_eq!(count_norm_cap(&g, 200).unwrap(), count_norm_cap_dfs(&GeneratorSet::rauzy(), 200).unwrap());
    }

    #[test]
    fn single_parabolic_generator_counts_linearly() {
        let g = GeneratorSet::from_rows(&[rauzy_rows()[0].clone()]).unwrap();
        // ‖N₁ⁿ‖ = n + 1
        assert_eq!(count_norm_cap(&g, 1000).unwrap(), 1000);
    }
}
