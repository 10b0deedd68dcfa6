//! Structural theorems as executable invariants: block/support lemmas of
//! the Buneman complex, the gate equations, the extremal-subset property of
//! block images, and the compatibility shield around octahedral components.

mod common;

use num_rational::BigRational;
use num_traits::Zero;
use rand::prelude::*;

use common::*;
use tightspan::buneman::{same_block, BunemanComplex, BunemanPoint};
use tightspan::kappa::{d1, is_tight_point, KappaMap};
use tightspan::metric::synthesize;
use tightspan::oracle::{oracle_vertices, OracleOptions};
use tightspan::rational::half;
use tightspan::splits::{is_compatible, ComponentClass, GroundSet, Split, TaxonSet, WeightedSplitSystem};
use tightspan::tightspan::assemble;

/// Octahedral plus circular triple glued at shared taxa, without the
/// pendant edges: exactly two blocks meeting in one cut vertex.
fn glued_pair_system() -> WeightedSplitSystem {
    let n = 10;
    let ground = GroundSet::numbered(n).unwrap();
    let splits = vec![
        Split::from_indices(n, [0, 1, 2]).unwrap(),
        Split::from_indices(n, [1, 2, 3]).unwrap(),
        Split::from_indices(n, [2, 3, 4]).unwrap(),
        Split::from_indices(n, [0, 2, 4]).unwrap(),
        Split::from_indices(n, [0, 1, 2, 3, 4, 5, 6]).unwrap(),
        Split::from_indices(n, [5, 6, 7]).unwrap(),
        Split::from_indices(n, [6, 7, 8]).unwrap(),
    ];
    WeightedSplitSystem::with_unit_weights(ground, splits).unwrap()
}

/// Three overlapping arcs of a 5-point circle: the incompatibility graph is
/// a path, so the single component is consistent but not pairwise
/// incompatible, and its block consists of two squares sharing an edge.
fn two_squares_system() -> WeightedSplitSystem {
    let n = 5;
    let ground = GroundSet::numbered(n).unwrap();
    let splits = vec![
        Split::from_indices(n, [0, 1]).unwrap(),
        Split::from_indices(n, [1, 2]).unwrap(),
        Split::from_indices(n, [2, 3]).unwrap(),
    ];
    WeightedSplitSystem::with_unit_weights(ground, splits).unwrap()
}

#[test]
fn consistent_block_with_two_maximal_squares() {
    let sys = two_squares_system();
    let graph = sys.incompatibility_graph();
    assert_eq!(graph.components().len(), 1);
    assert_eq!(
        sys.classify_component(&graph.components()[0]).unwrap(),
        ComponentClass::Consistent
    );

    let complex = BunemanComplex::build(&sys).unwrap();
    assert_eq!(complex.blocks().len(), 1);
    let maximal: Vec<usize> = complex
        .cells()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.maximal)
        .map(|(i, _)| i)
        .collect();
    assert_eq!(maximal.len(), 2);
    assert!(maximal.iter().all(|&c| complex.cells()[c].dim == 2));
    // The two squares share exactly one edge (two vertices).
    let va = complex.cell_vertices(maximal[0]);
    let vb = complex.cell_vertices(maximal[1]);
    let shared: Vec<usize> = va.iter().filter(|v| vb.contains(v)).copied().collect();
    assert_eq!(shared.len(), 2);

    // Kappa copies the block isomorphically and the oracle agrees.
    let assembly = assemble(&sys).unwrap();
    assert_eq!(assembly.complex.blocks().len(), 1);
    assert_eq!(assembly.complex.cells_of_dim(2).len(), 2);
    let d = synthesize(&sys);
    let report =
        tightspan::oracle::compare(&assembly.complex, &d, &OracleOptions::default()).unwrap();
    assert!(report.passed(), "{:?}", report.mismatches);
}

#[test]
fn random_circular_systems_match_oracle() {
    // End-to-end fuzz: random weighted circular systems (mixed block
    // shapes) must assemble into exactly the oracle's complex.
    let mut r = rng(0xfa22);
    let mut cases = 0;
    while cases < 12 {
        let n = r.gen_range(4..=7);
        let max_splits = r.gen_range(2..=8usize);
        let sys = random_circular_system(&mut r, n, max_splits, false);
        if !synthesize(&sys).is_proper() {
            continue;
        }
        let assembly = assemble(&sys).unwrap();
        let d = synthesize(&sys);
        let report =
            tightspan::oracle::compare(&assembly.complex, &d, &OracleOptions::default()).unwrap();
        assert!(
            report.passed(),
            "system {sys} failed: {:?}",
            report.mismatches
        );
        cases += 1;
    }
}

#[test]
fn blocks_are_internally_biconnected() {
    // Within each assembled block the 1-skeleton is connected and has no
    // cut vertex of its own.
    for sys in [
        octahedral_system(),
        composite_system(),
        glued_pair_system(),
        two_squares_system(),
    ] {
        let assembly = assemble(&sys).unwrap();
        let ts = &assembly.complex;
        for block in ts.blocks() {
            let verts = &block.vertices;
            let index_of = |v: usize| verts.binary_search(&v).unwrap();
            let edges: Vec<(usize, usize)> = block
                .cells
                .iter()
                .filter(|&&c| ts.cells()[c].dim == 1)
                .map(|&c| {
                    let vs = &ts.cells()[c].vertices;
                    (index_of(vs[0]), index_of(vs[1]))
                })
                .collect();
            let decomposition =
                tightspan::graph::block_decomposition(verts.len(), &edges);
            assert_eq!(decomposition.blocks.len(), 1, "block must be 2-connected");
            assert!(decomposition.cut_vertices.is_empty());
        }
    }
}

#[test]
fn larger_circular_systems_give_m_cubes() {
    // Structural counts for m = 4, 5 (the oracle checks m = 2, 3 in the
    // acceptance suite; these sizes are checked against the cube formulas).
    for m in [4usize, 5] {
        let sys = circular_consecutive(m);
        let assembly = assemble(&sys).unwrap();
        let ts = &assembly.complex;
        assert_eq!(ts.blocks().len(), 1);
        assert_eq!(ts.vertex_count(), 1 << m);
        assert_eq!(ts.edges().len(), m << (m - 1));
        assert_eq!(ts.max_dim(), m);
        assert_eq!(ts.cells_of_dim(m).len(), 1);
        // Binomial cell counts of the m-cube in every dimension.
        let choose = |n: usize, k: usize| -> usize {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        };
        for dim in 0..=m {
            assert_eq!(
                ts.cells_of_dim(dim).len(),
                choose(m, dim) << (m - dim),
                "m={m}, dim={dim}"
            );
        }
    }
}

#[test]
fn octahedral_components_are_shielded() {
    // Every split outside an octahedral component is compatible with all
    // four of its splits.
    for sys in [composite_system(), glued_pair_system()] {
        let graph = sys.incompatibility_graph();
        for comp in graph.components() {
            if !matches!(
                sys.classify_component(comp).unwrap(),
                ComponentClass::Octahedral(_)
            ) {
                continue;
            }
            for other in 0..sys.len() {
                if comp.contains(&other) {
                    continue;
                }
                for &inner in comp {
                    assert!(
                        is_compatible(sys.split(other), sys.split(inner)).unwrap(),
                        "split {other} must be compatible with octahedral member {inner}"
                    );
                }
            }
        }
    }
}

#[test]
fn glued_pair_shares_one_cut_vertex() {
    let sys = glued_pair_system();
    // Exactly one octahedral subsystem survives the gluing.
    let oct = sys.oct_subsystems().unwrap();
    assert_eq!(oct.len(), 1);
    assert_eq!(oct[0].len(), 4);
    let complex = BunemanComplex::build(&sys).unwrap();
    assert_eq!(complex.blocks().len(), 2);
    assert_eq!(complex.cut_vertices().len(), 1);
    let cut = complex.cut_vertices()[0];
    for block in complex.blocks() {
        assert!(block.vertices.binary_search(&cut).is_ok());
    }
    let shared: Vec<usize> = complex.blocks()[0]
        .vertices
        .iter()
        .filter(|v| complex.blocks()[1].vertices.contains(v))
        .copied()
        .collect();
    assert_eq!(shared, vec![cut]);

    // The assembled tight span glues at the kappa image of that vertex.
    let assembly = assemble(&sys).unwrap();
    assert_eq!(assembly.complex.blocks().len(), 2);
    assert_eq!(assembly.complex.cut_vertices().len(), 1);
}

#[test]
fn zero_one_lemma_on_block_points() {
    // For any point of a block and any split outside the block's component,
    // both side values are 0 or alpha/2. Sampled at the generator points of
    // all block cells.
    for sys in [composite_system(), glued_pair_system()] {
        let complex = BunemanComplex::build(&sys).unwrap();
        for block in complex.blocks() {
            for &cid in &block.cells {
                let p = complex.generator_point(cid);
                for s in 0..sys.len() {
                    if block.splits >> s & 1 == 1 {
                        continue;
                    }
                    let v = p.value(s);
                    let hi = half(sys.weight(s));
                    assert!(
                        v.is_zero() || *v == hi,
                        "outside split {s} must be pinned to a side on block points"
                    );
                }
            }
        }
    }
}

#[test]
fn same_block_on_non_vertex_points() {
    // Cut vertex against interior points of each adjacent block: the
    // delta-containment predicate must match geometric membership.
    let sys = glued_pair_system();
    let complex = BunemanComplex::build(&sys).unwrap();
    let cut = complex.cut_vertices()[0];
    let cut_point = complex.vertex_point(cut);
    for (bid, block) in complex.blocks().iter().enumerate() {
        let top_cell = *block.cells.last().unwrap();
        let generator = complex.generator_point(top_cell);
        assert!(complex.block_contains_point(bid, &generator));
        assert!(complex.block_contains_point(bid, &cut_point));
        // The cut vertex and an interior point share exactly this block.
        assert!(same_block(&cut_point, &generator, block.splits));
        let other = 1 - bid;
        assert!(!same_block(
            &generator,
            &complex.generator_point(*complex.blocks()[other].cells.last().unwrap()),
            block.splits
        ));
    }
}

#[test]
fn gate_equation_over_octahedral_cube() {
    // The gate realizes the l1 geodesic split: d1(phi_x, psi) =
    // d1(phi_x, gate) + d1(gate, psi) for every vertex psi of the cell.
    let sys = octahedral_system();
    let complex = BunemanComplex::build(&sys).unwrap();
    let cube = complex.cells().iter().position(|c| c.dim == 4).unwrap();
    for x in 0..sys.n() {
        let phi_x = complex.vertex_point(complex.taxon_vertex(x));
        let gate = complex.vertex_point(complex.gate(cube, x));
        for vid in complex.cell_vertices(cube) {
            let psi = complex.vertex_point(vid);
            assert_eq!(
                d1(&sys, &phi_x, &psi),
                d1(&sys, &phi_x, &gate) + d1(&sys, &gate, &psi),
                "gate equation fails for taxon {x} and vertex {vid}"
            );
        }
    }
}

#[test]
fn gate_distances_sum_free_split_weights() {
    // d1(gate_x, gate_y) = sum of alpha(S) over free splits separating x, y.
    for sys in [octahedral_system(), glued_pair_system()] {
        let complex = BunemanComplex::build(&sys).unwrap();
        for (cid, cell) in complex.cells().iter().enumerate() {
            if cell.dim == 0 {
                continue;
            }
            for x in 0..sys.n() {
                for y in 0..sys.n() {
                    let gx = complex.vertex_point(complex.gate(cid, x));
                    let gy = complex.vertex_point(complex.gate(cid, y));
                    let expected: BigRational = TaxonSet(cell.free)
                        .iter()
                        .filter(|&s| sys.split(s).separates(x, y))
                        .map(|s| sys.weight(s).clone())
                        .sum();
                    assert_eq!(d1(&sys, &gx, &gy), expected);
                }
            }
        }
    }
}

#[test]
fn block_images_are_extremal_subsets() {
    // Convex combinations within one cell stay in the tight span; proper
    // combinations across two blocks (away from the cut vertex) leave it.
    // This is the executable shadow of the extremal-subset property: if a
    // combination lands in a block image, both ends must belong to it.
    let sys = glued_pair_system();
    let complex = BunemanComplex::build(&sys).unwrap();
    let kappa = KappaMap::new(&sys).unwrap();
    let d = kappa.metric();
    let quarter = |a: &BigRational, b: &BigRational| {
        (a * tightspan::rational::rat(1, 4)) + (b * tightspan::rational::rat(3, 4))
    };

    // Within a cell: combination of two vertices of the octahedral cube.
    let cube = complex.cells().iter().position(|c| c.dim == 4).unwrap();
    let cube_vertices = complex.cell_vertices(cube);
    let f = kappa.apply(&complex.vertex_point(cube_vertices[0]));
    let g = kappa.apply(&complex.vertex_point(cube_vertices[5]));
    let inside: Vec<BigRational> = f
        .coords()
        .iter()
        .zip(g.coords())
        .map(|(a, b)| quarter(a, b))
        .collect();
    assert!(is_tight_point(&inside, d));

    // Across blocks: non-cut vertices from the two different blocks.
    let cut = complex.cut_vertices()[0];
    let pick = |bid: usize| {
        complex.blocks()[bid]
            .vertices
            .iter()
            .copied()
            .find(|&v| v != cut)
            .unwrap()
    };
    let f = kappa.apply(&complex.vertex_point(pick(0)));
    let g = kappa.apply(&complex.vertex_point(pick(1)));
    for combo in [
        f.midpoint(&g, d).coords().to_vec(),
        f.coords()
            .iter()
            .zip(g.coords())
            .map(|(a, b)| quarter(a, b))
            .collect(),
    ] {
        assert!(
            !is_tight_point(&combo, d),
            "cross-block combinations must leave the tight span"
        );
    }
}

#[test]
fn oracle_vertices_have_kappa_preimages() {
    // kappa surjects onto the tight span: every oracle vertex is the image
    // of some Buneman vertex, and the structural vertex set equals the
    // oracle's.
    for sys in [octahedral_system(), circular_consecutive(3), glued_pair_system()] {
        let complex = BunemanComplex::build(&sys).unwrap();
        let kappa = KappaMap::new(&sys).unwrap();
        let d = synthesize(&sys);
        let images: Vec<Vec<BigRational>> = (0..complex.vertex_count())
            .map(|v| kappa.apply(&complex.vertex_point(v)).coords().to_vec())
            .collect();
        let cap = if sys.n() > 8 { sys.n() } else { 8 };
        let oracle = oracle_vertices(&d, &OracleOptions { cap }).unwrap();
        for vertex in &oracle {
            assert!(
                images.contains(&vertex.coords().to_vec()),
                "oracle vertex without kappa preimage"
            );
        }
        // Deterministic canonical order: sorted coordinate vectors.
        let coords: Vec<_> = oracle.iter().map(|v| v.coords().to_vec()).collect();
        let mut sorted = coords.clone();
        sorted.sort();
        assert_eq!(coords, sorted);
    }
}

#[test]
fn kappa_images_of_sampled_points_are_tight() {
    // Not only vertices: generator points of all cells map into the tight
    // span as well.
    let mut r = rng(0x90aa);
    for sys in [octahedral_system(), composite_system()] {
        let complex = BunemanComplex::build(&sys).unwrap();
        let kappa = KappaMap::new(&sys).unwrap();
        for _ in 0..50 {
            let cid = r.gen_range(0..complex.cells().len());
            let p = complex.generator_point(cid);
            assert!(complex.contains_point(&p));
            let image = kappa.apply(&p);
            assert!(is_tight_point(image.coords(), kappa.metric()));
        }
    }
}

#[test]
fn point_membership_respects_support_condition() {
    // A point holding two overlapping far sides strictly positive violates
    // the support condition.
    let sys = octahedral_system();
    // values = alpha/4 on all splits is the cube center: valid here since
    // the system is pairwise incompatible.
    let center = BunemanPoint::new(vec![tightspan::rational::rat(1, 4); 4]);
    assert!(tightspan::buneman::is_in_complex(&sys, &center));

    // On a compatible pair, interior values on both splits are forbidden.
    let ground = GroundSet::numbered(4).unwrap();
    let tree = WeightedSplitSystem::with_unit_weights(
        ground,
        vec![
            Split::from_indices(4, [0]).unwrap(),
            Split::from_indices(4, [1]).unwrap(),
        ],
    )
    .unwrap();
    let bad = BunemanPoint::new(vec![
        tightspan::rational::rat(1, 4),
        tightspan::rational::rat(1, 4),
    ]);
    assert!(!tightspan::buneman::is_in_complex(&tree, &bad));
    let vertex = BunemanPoint::new(vec![tightspan::rational::rat(0, 1), half(tree.weight(1))]);
    assert!(tightspan::buneman::is_in_complex(&tree, &vertex));
}
