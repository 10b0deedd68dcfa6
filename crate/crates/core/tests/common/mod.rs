//! Shared fixtures and random generators for the integration tests.
// Each test binary uses its own subset of these.
#![allow(dead_code)]

use num_rational::BigRational;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use tightspan::rational::rat;
use tightspan::splits::{GroundSet, Split, WeightedSplitSystem};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The octahedral split system on {1..6} with unit weights.
pub fn octahedral_system() -> WeightedSplitSystem {
    let ground = GroundSet::numbered(6).unwrap();
    let splits = vec![
        Split::from_indices(6, [0, 1, 2]).unwrap(),
        Split::from_indices(6, [1, 2, 3]).unwrap(),
        Split::from_indices(6, [2, 3, 4]).unwrap(),
        Split::from_indices(6, [0, 2, 4]).unwrap(),
    ];
    WeightedSplitSystem::with_unit_weights(ground, splits).unwrap()
}

/// The m consecutive splits {i..i+m-1}|rest on 2m points, unit weights: a
/// strictly circular system whose tight span is an m-cube.
pub fn circular_consecutive(m: usize) -> WeightedSplitSystem {
    let n = 2 * m;
    let ground = GroundSet::numbered(n).unwrap();
    let splits: Vec<Split> = (0..m)
        .map(|i| Split::from_indices(n, i..i + m).unwrap())
        .collect();
    WeightedSplitSystem::with_unit_weights(ground, splits).unwrap()
}

/// Octahedral block, strictly circular triple, and two pendant splits glued
/// at shared taxa: four incompatibility components on ten taxa.
pub fn composite_system() -> WeightedSplitSystem {
    let n = 10;
    let ground = GroundSet::numbered(n).unwrap();
    let splits = vec![
        // Octahedral component over parts {1},..,{5},{6..10}.
        Split::from_indices(n, [0, 1, 2]).unwrap(),
        Split::from_indices(n, [1, 2, 3]).unwrap(),
        Split::from_indices(n, [2, 3, 4]).unwrap(),
        Split::from_indices(n, [0, 2, 4]).unwrap(),
        // Circular triple over parts ({1..5}, {6}, {7}, {8}, {9}, {10}).
        Split::from_indices(n, [0, 1, 2, 3, 4, 5, 6]).unwrap(),
        Split::from_indices(n, [5, 6, 7]).unwrap(),
        Split::from_indices(n, [6, 7, 8]).unwrap(),
        // Two pendant (trivial) splits.
        Split::from_indices(n, [0]).unwrap(),
        Split::from_indices(n, [9]).unwrap(),
    ];
    WeightedSplitSystem::with_unit_weights(ground, splits).unwrap()
}

pub fn random_weight(rng: &mut ChaCha8Rng) -> BigRational {
    rat(rng.gen_range(1..=8), rng.gen_range(1..=4))
}

/// A random circular split system: arcs of a random cyclic taxon order.
/// Circular systems are weakly compatible, making them good round-trip
/// generators.
pub fn random_circular_system(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_splits: usize,
    unit_weights: bool,
) -> WeightedSplitSystem {
    let ground = GroundSet::numbered(n).unwrap();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut entries: Vec<(Split, BigRational)> = Vec::new();
    let mut attempts = 0;
    while entries.len() < max_splits && attempts < 10 * max_splits {
        attempts += 1;
        let start = rng.gen_range(0..n);
        let len = rng.gen_range(1..n);
        let side: Vec<usize> = (0..len).map(|k| order[(start + k) % n]).collect();
        let split = Split::from_indices(n, side).unwrap();
        if entries.iter().any(|(s, _)| *s == split) {
            continue;
        }
        let w = if unit_weights {
            rat(1, 1)
        } else {
            random_weight(rng)
        };
        entries.push((split, w));
    }
    WeightedSplitSystem::new(ground, entries).unwrap()
}

/// A random unrooted binary tree on `leaves` leaves with random positive
/// rational edge weights, as its split system.
pub fn random_tree_system(rng: &mut ChaCha8Rng, leaves: usize) -> WeightedSplitSystem {
    assert!(leaves >= 3);
    // Edges over node ids; leaves are 0..leaves, internal nodes follow.
    let mut next_node = leaves;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let center = next_node;
    next_node += 1;
    edges.push((0, center));
    edges.push((1, center));
    edges.push((2, center));
    for leaf in 3..leaves {
        let eidx = rng.gen_range(0..edges.len());
        let (u, v) = edges[eidx];
        let mid = next_node;
        next_node += 1;
        edges[eidx] = (u, mid);
        edges.push((mid, v));
        edges.push((leaf, mid));
    }
    // Each edge induces a split of the leaf set.
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); next_node];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    let mut entries = Vec::new();
    for (i, &(u, _)) in edges.iter().enumerate() {
        // Leaves on u's side of edge i.
        let mut side = Vec::new();
        let mut stack = vec![u];
        let mut seen = vec![false; next_node];
        seen[u] = true;
        while let Some(w) = stack.pop() {
            if w < leaves {
                side.push(w);
            }
            for &(z, eid) in &adj[w] {
                if eid != i && !seen[z] {
                    seen[z] = true;
                    stack.push(z);
                }
            }
        }
        let split = Split::from_indices(leaves, side).unwrap();
        entries.push((split, random_weight(rng)));
    }
    let ground = GroundSet::numbered(leaves).unwrap();
    WeightedSplitSystem::new(ground, entries).unwrap()
}

/// A completely random split system (no structural guarantees) with unit
/// weights, for exercising both weak-compatibility checkers.
pub fn random_split_system(rng: &mut ChaCha8Rng, n: usize, max_splits: usize) -> WeightedSplitSystem {
    let ground = GroundSet::numbered(n).unwrap();
    let mut splits: Vec<Split> = Vec::new();
    let mut attempts = 0;
    while splits.len() < max_splits && attempts < 10 * max_splits {
        attempts += 1;
        let bits = rng.gen_range(1..(1u64 << n) - 1);
        let split = Split::new(n, tightspan::splits::TaxonSet(bits)).unwrap();
        if !splits.contains(&split) {
            splits.push(split);
        }
    }
    WeightedSplitSystem::with_unit_weights(ground, splits).unwrap()
}
