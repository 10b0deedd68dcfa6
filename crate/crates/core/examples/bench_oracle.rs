//! Rough oracle timings on the sizes the test suite uses.

use std::time::Instant;

use tightspan::metric::synthesize;
use tightspan::oracle::{oracle_edges, oracle_vertices, OracleOptions};
use tightspan::splits::{GroundSet, Split, WeightedSplitSystem};

fn octahedral(n: usize) -> WeightedSplitSystem {
    let ground = GroundSet::numbered(n).unwrap();
    let splits = vec![
        Split::from_indices(n, [0, 1, 2]).unwrap(),
        Split::from_indices(n, [1, 2, 3]).unwrap(),
        Split::from_indices(n, [2, 3, 4]).unwrap(),
        Split::from_indices(n, [0, 2, 4]).unwrap(),
    ];
    WeightedSplitSystem::with_unit_weights(ground, splits).unwrap()
}

fn caterpillar(n: usize) -> WeightedSplitSystem {
    let ground = GroundSet::numbered(n).unwrap();
    let mut splits: Vec<Split> = (0..n).map(|i| Split::from_indices(n, [i]).unwrap()).collect();
    for k in 2..(n - 1) {
        splits.push(Split::from_indices(n, 0..k).unwrap());
    }
    WeightedSplitSystem::with_unit_weights(ground, splits).unwrap()
}

fn composite() -> WeightedSplitSystem {
    let n = 10;
    let ground = GroundSet::numbered(n).unwrap();
    let splits = vec![
        // Octahedral component over parts {0},..,{4},{5..9}.
        Split::from_indices(n, [0, 1, 2]).unwrap(),
        Split::from_indices(n, [1, 2, 3]).unwrap(),
        Split::from_indices(n, [2, 3, 4]).unwrap(),
        Split::from_indices(n, [0, 2, 4]).unwrap(),
        // Circular triple over parts ({0..4}, {5}, {6}, {7}, {8}, {9}).
        Split::from_indices(n, [0, 1, 2, 3, 4, 5, 6]).unwrap(),
        Split::from_indices(n, [5, 6, 7]).unwrap(),
        Split::from_indices(n, [6, 7, 8]).unwrap(),
        // Two pendant splits.
        Split::from_indices(n, [0]).unwrap(),
        Split::from_indices(n, [9]).unwrap(),
    ];
    WeightedSplitSystem::with_unit_weights(ground, splits).unwrap()
}

fn run(name: &str, sys: &WeightedSplitSystem, cap: usize) {
    let d = synthesize(sys);
    assert!(sys.is_weakly_compatible(), "{name}: not weakly compatible");
    let t0 = Instant::now();
    let vs = oracle_vertices(&d, &OracleOptions { cap }).unwrap();
    let t1 = t0.elapsed();
    let es = oracle_edges(&d, &vs);
    let t2 = t0.elapsed();
    println!(
        "{name}: n={} |S|={} vertices={} edges={} vertex_time={:.2?} total={:.2?}",
        sys.n(),
        sys.len(),
        vs.len(),
        es.len(),
        t1,
        t2
    );
}

fn main() {
    run("octahedral-6", &octahedral(6), 8);
    run("caterpillar-7", &caterpillar(7), 8);
    run("caterpillar-8", &caterpillar(8), 8);
    run("composite-10", &composite(), 10);
}
