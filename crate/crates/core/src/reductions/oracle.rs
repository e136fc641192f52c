//! Exhaustive solvers for the source problems.
//!
//! Subsets are enumerated as bitmasks in increasing order and a later subset
//! replaces the incumbent only when strictly better, so the witness returned
//! is the first optimal subset in mask order.

use std::collections::BTreeSet;

use super::independent_set::GraphInstance;
use super::knapsack::KnapsackInstance;
use super::ReductionError;

pub const DEFAULT_ORACLE_BOUND: usize = 20;

fn members(mask: u64, size: usize) -> BTreeSet<usize> {
    (0..size).filter(|&i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

fn check_bound(size: usize, bound: usize) -> Result<(), ReductionError> {
    if size > bound || size >= 64 {
        Err(ReductionError::OracleBound { size, bound })
    } else {
        Ok(())
    }
}

/// Size of a maximum independent set and the first one in mask order.
pub fn max_independent_set(
    g: &GraphInstance,
    bound: usize,
) -> Result<(usize, BTreeSet<usize>), ReductionError> {
    let n = g.n();
    check_bound(n, bound)?;
    let edge_masks: Vec<u64> = g.edges().map(|(u, v)| 1 << (u - 1) | 1 << (v - 1)).collect();
    let mut best = 0u64;
    for mask in 0..1u64 << n {
        if mask.count_ones() > best.count_ones() && edge_masks.iter().all(|&e| mask & e != e) {
            best = mask;
        }
    }
    Ok((best.count_ones() as usize, members(best, n)))
}

/// Highest total value of an item subset with weight at most `capacity`.
pub fn best_subset_under(
    items: &[(u64, u64)],
    capacity: u64,
    bound: usize,
) -> Result<(u64, BTreeSet<usize>), ReductionError> {
    let m = items.len();
    check_bound(m, bound)?;
    let mut best = (0u64, 0u64);
    for mask in 0..1u64 << m {
        let (mut weight, mut value) = (0u64, 0u64);
        for (j, &(w, v)) in items.iter().enumerate() {
            if mask >> j & 1 == 1 {
                weight += w;
                value += v;
            }
        }
        if weight <= capacity && value > best.1 {
            best = (mask, value);
        }
    }
    Ok((best.1, members(best.0, m)))
}

/// Knapsack optimum under the instance's capacity; the instance is a yes
/// instance iff the returned value reaches its goal D.
pub fn knapsack_oracle(
    k: &KnapsackInstance,
    bound: usize,
) -> Result<(u64, BTreeSet<usize>), ReductionError> {
    best_subset_under(k.items(), k.capacity(), bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    #[test]
    fn independent_set_examples() {
        let path = GraphInstance::new(3, [(1, 2), (2, 3)], 2).unwrap();
        assert_eq!(max_independent_set(&path, DEFAULT_ORACLE_BOUND).unwrap(), (2, set(&[1, 3])));
        let triangle = GraphInstance::new(3, [(1, 2), (2, 3), (1, 3)], 1).unwrap();
        assert_eq!(max_independent_set(&triangle, DEFAULT_ORACLE_BOUND).unwrap(), (1, set(&[1])));
        let edgeless = GraphInstance::new(4, [], 1).unwrap();
        assert_eq!(max_independent_set(&edgeless, DEFAULT_ORACLE_BOUND).unwrap().0, 4);
    }

    #[test]
    fn knapsack_examples() {
        let k = KnapsackInstance::new(vec![(1, 2), (2, 3)], 2, 3).unwrap();
        assert_eq!(knapsack_oracle(&k, DEFAULT_ORACLE_BOUND).unwrap(), (3, set(&[2])));
        let roomy = KnapsackInstance::new(vec![(1, 2), (2, 3)], 3, 1).unwrap();
        assert_eq!(knapsack_oracle(&roomy, DEFAULT_ORACLE_BOUND).unwrap(), (5, set(&[1, 2])));
        assert_eq!(best_subset_under(&[(1, 2), (2, 3)], 0, DEFAULT_ORACLE_BOUND).unwrap(), (0, set(&[])));
    }

    #[test]
    fn bound_is_enforced() {
        let g = GraphInstance::new(5, [], 1).unwrap();
        assert_eq!(
            max_independent_set(&g, 4),
            Err(ReductionError::OracleBound { size: 5, bound: 4 })
        );
    }
}
