//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use privcap::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Adjacency as one bit-mask per vertex; n ≤ 32.
pub fn masks(g: &Graph) -> Vec<u32> {
    assert!(g.n() <= 32);
    (0..g.n()).map(|u| (0..g.n()).filter(|&v| g.has_edge(u, v)).fold(0u32, |m, v| m | 1 << v)).collect()
}

/// α by enumerating all 2^n vertex subsets.
pub fn brute_alpha(g: &Graph) -> usize {
    let adj = masks(g);
    let n = g.n();
    let mut independent = vec![false; 1usize << n];
    independent[0] = true;
    let mut best = 0;
    for mask in 1usize..1 << n {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if independent[rest] && adj[low] as usize & rest == 0 {
            independent[mask] = true;
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

/// Edge probability drawn per graph so both sparse and dense cases appear.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let p: f64 = rng.gen_range(0.05..0.95);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Pascal's triangle with u128 entries, rows 0..=n.
pub fn pascal(n: usize) -> Vec<Vec<u128>> {
    let mut rows: Vec<Vec<u128>> = vec![vec![1]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![1u128; i + 1];
        for k in 1..i {
            row[k] = prev[k - 1] + prev[k];
        }
        rows.push(row);
    }
    rows
}

/// All k-subsets of {1..r} as bit-masks (bit e-1), in increasing numeric
/// order, which is colex order.
pub fn colex_masks(r: u32, k: u32) -> Vec<u64> {
    (0u64..1 << r).filter(|m| m.count_ones() == k).collect()
}

pub fn elements_of(mask: u64) -> Vec<u32> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Maximal sets of {1..t} (as masks) containing no member of `family`.
pub fn brute_maximal_free(t: u32, family: &[u32]) -> Vec<u32> {
    let free = |x: u32| family.iter().all(|&f| f & !x != 0);
    (0u32..1 << t).filter(|&x| free(x) && (0..t).all(|b| x >> b & 1 == 1 || !free(x | 1 << b))).collect()
}

/// Strips the `"timing"` entry from a CLI report.
pub fn without_timing(report: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(report).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    serde_json::to_string(&v).unwrap()
}
