//! The Buneman complex B(S, alpha) of a weighted split system: points,
//! vertices (0-cells), hypercube cells, the 1-skeleton (Buneman graph), the
//! block decomposition, gates, and the same-block predicate.

use std::collections::{HashMap, HashSet};

use num_rational::BigRational;
use num_traits::Zero;

use crate::graph::block_decomposition;
use crate::rational::half;
use crate::splits::{ComponentClass, IncompatibilityGraph, TaxonSet, WeightedSplitSystem};
use crate::{Error, Result};

/// Default ceiling on the number of splits for vertex enumeration.
pub const DEFAULT_SPLIT_LIMIT: usize = 24;

/// A point of H(S, alpha), stored as one coordinate per split: the value on
/// the canonical side. The value on the other side is `alpha/2 - value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BunemanPoint {
    values: Vec<BigRational>,
}

impl BunemanPoint {
    pub fn new(values: Vec<BigRational>) -> Self {
        BunemanPoint { values }
    }

    /// Value on the canonical side of split `i`.
    pub fn value(&self, i: usize) -> &BigRational {
        &self.values[i]
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Midpoint of two points (H is convex; membership in B is not
    /// automatic and can be checked with `is_in_complex`).
    pub fn midpoint(&self, other: &BunemanPoint) -> BunemanPoint {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| half(&(a + b)))
            .collect();
        BunemanPoint { values }
    }
}

/// The set of splits on which two points differ (as a bitmask over split
/// indices). Restrictions to a split differ exactly when the canonical-side
/// coordinates differ.
pub fn delta(p1: &BunemanPoint, p2: &BunemanPoint) -> u64 {
    debug_assert_eq!(p1.len(), p2.len());
    let mut mask = 0u64;
    for i in 0..p1.len() {
        if p1.value(i) != p2.value(i) {
            mask |= 1 << i;
        }
    }
    mask
}

/// Theorem-`pairs` predicate: two distinct points lie in a common block
/// `B_{S'}` iff all splits on which they differ belong to `S'`.
pub fn same_block(p1: &BunemanPoint, p2: &BunemanPoint, component_mask: u64) -> bool {
    delta(p1, p2) & !component_mask == 0
}

/// A hypercube cell, canonically represented: `base` is the vertex of the
/// cell with every free-split bit cleared, `free` the set of free splits.
#[derive(Debug, Clone)]
pub struct BunemanCell {
    pub dim: usize,
    pub base: u64,
    pub free: u64,
    /// Ids of the (dim-1)-faces.
    pub facets: Vec<usize>,
    pub maximal: bool,
    /// Component of I(S) this cell's free splits live in (dim >= 1 only).
    pub component: Option<usize>,
}

/// One block of the complex: the sub-complex over a maximal 2-connected
/// piece of the Buneman graph, corresponding to one component of I(S).
#[derive(Debug, Clone)]
pub struct BunemanBlock {
    /// Index into the incompatibility graph's component list.
    pub component: usize,
    /// Bitmask of the component's split indices.
    pub splits: u64,
    /// All cell ids of the block (including the 0-cells of its vertices).
    pub cells: Vec<usize>,
    /// Vertex ids occurring in the block.
    pub vertices: Vec<usize>,
    /// Vertices of this block that are cut vertices of the whole complex.
    pub cut_vertices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct BunemanEdge {
    pub endpoints: (usize, usize),
    pub split: usize,
}

/// The fully enumerated complex.
#[derive(Debug, Clone)]
pub struct BunemanComplex {
    sys: WeightedSplitSystem,
    /// Vertices as choice masks (bit i set iff the canonical side of split i
    /// is the chosen = zero side), sorted ascending.
    vertices: Vec<u64>,
    vertex_index: HashMap<u64, usize>,
    edges: Vec<BunemanEdge>,
    cells: Vec<BunemanCell>,
    cells_by_dim: Vec<Vec<usize>>,
    blocks: Vec<BunemanBlock>,
    cut_vertices: Vec<usize>,
    taxon_vertices: Vec<usize>,
    incompat: IncompatibilityGraph,
    classes: Vec<ComponentClass>,
}

impl BunemanComplex {
    pub fn build(sys: &WeightedSplitSystem) -> Result<Self> {
        Self::build_with_limit(sys, DEFAULT_SPLIT_LIMIT)
    }

    pub fn build_with_limit(sys: &WeightedSplitSystem, limit: usize) -> Result<Self> {
        let m = sys.len();
        if m > limit {
            return Err(Error::TooManySplits {
                limit,
                actual: m,
            });
        }
        let vertices = enumerate_vertices(sys, limit)?;
        let vertex_index: HashMap<u64, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();

        let incompat = sys.incompatibility_graph();
        let classes: Vec<ComponentClass> = incompat
            .components()
            .iter()
            .map(|c| sys.classify_component(c))
            .collect::<Result<_>>()?;

        // Pairwise incompatibility as split masks.
        let incompat_mask: Vec<u64> = (0..m)
            .map(|i| {
                (0..m)
                    .filter(|&j| j != i && incompat.are_incompatible(i, j))
                    .fold(0u64, |acc, j| acc | 1 << j)
            })
            .collect();

        // Cells by dimension. Dimension 0: one cell per vertex.
        let mut cells: Vec<BunemanCell> = Vec::new();
        let mut cell_id: HashMap<(u64, u64), usize> = HashMap::new();
        let mut cells_by_dim: Vec<Vec<usize>> = vec![Vec::new()];
        for &v in &vertices {
            let id = cells.len();
            cell_id.insert((v, 0), id);
            cells_by_dim[0].push(id);
            cells.push(BunemanCell {
                dim: 0,
                base: v,
                free: 0,
                facets: Vec::new(),
                maximal: true,
                component: None,
            });
        }
        // Dimension k+1 cells arise by joining a k-cell with its flip along
        // one more split; both halves must already be cells.
        loop {
            let dim = cells_by_dim.len() - 1;
            let mut next: Vec<usize> = Vec::new();
            let current: Vec<usize> = cells_by_dim[dim].clone();
            for &cid in &current {
                let (base, free) = (cells[cid].base, cells[cid].free);
                for s in 0..m {
                    let bit = 1u64 << s;
                    if free & bit != 0 {
                        continue;
                    }
                    // Free splits must stay pairwise incompatible.
                    if free & !incompat_mask[s] != 0 {
                        continue;
                    }
                    let partner = base ^ bit;
                    if !cell_id.contains_key(&(partner, free)) {
                        continue;
                    }
                    let new_base = base & !bit;
                    let new_free = free | bit;
                    if cell_id.contains_key(&(new_base, new_free)) {
                        continue;
                    }
                    let component = incompat.component_of(s);
                    let id = cells.len();
                    cell_id.insert((new_base, new_free), id);
                    next.push(id);
                    cells.push(BunemanCell {
                        dim: dim + 1,
                        base: new_base,
                        free: new_free,
                        facets: Vec::new(),
                        maximal: true,
                        component: Some(component),
                    });
                }
            }
            if next.is_empty() {
                break;
            }
            cells_by_dim.push(next);
        }
        // Facets: drop one free split, at either of its two fixed values.
        for cid in 0..cells.len() {
            let (base, free, dim) = (cells[cid].base, cells[cid].free, cells[cid].dim);
            if dim == 0 {
                continue;
            }
            let mut facets = Vec::new();
            for s in TaxonSet(free).iter() {
                let bit = 1u64 << s;
                let rest = free & !bit;
                for half_base in [base, base | bit] {
                    let fid = cell_id[&(half_base, rest)];
                    cells[fid].maximal = false;
                    facets.push(fid);
                }
            }
            facets.sort_unstable();
            cells[cid].facets = facets;
        }

        // Edges = 1-cells.
        let mut edges: Vec<BunemanEdge> = Vec::new();
        let one_cells: Vec<usize> = cells_by_dim.get(1).cloned().unwrap_or_default();
        for &cid in &one_cells {
            let c = &cells[cid];
            let s = TaxonSet(c.free).min_element().unwrap();
            let a = vertex_index[&c.base];
            let b = vertex_index[&(c.base | c.free)];
            edges.push(BunemanEdge {
                endpoints: (a.min(b), a.max(b)),
                split: s,
            });
        }

        // Block decomposition of the Buneman graph; each graph block's edge
        // labels must form exactly one component of I(S).
        let edge_pairs: Vec<(usize, usize)> = edges.iter().map(|e| e.endpoints).collect();
        let decomposition = block_decomposition(vertices.len(), &edge_pairs);
        let cut_vertices = decomposition.cut_vertices.clone();
        if !sys.is_empty() && decomposition.blocks.len() != incompat.components().len() {
            return Err(Error::Internal(format!(
                "Buneman graph has {} blocks but I(S) has {} components",
                decomposition.blocks.len(),
                incompat.components().len()
            )));
        }
        let mut block_of_component: Vec<Option<usize>> =
            vec![None; incompat.components().len()];
        let mut blocks: Vec<BunemanBlock> = Vec::new();
        let mut graph_blocks = decomposition.blocks;
        // Deterministic block order: by the component they carry.
        graph_blocks.sort_by_key(|b| {
            b.iter()
                .map(|&eid| incompat.component_of(edges[eid].split))
                .min()
                .unwrap()
        });
        for block_edges in &graph_blocks {
            let mut split_mask = 0u64;
            for &eid in block_edges {
                split_mask |= 1 << edges[eid].split;
            }
            let component = incompat.component_of(TaxonSet(split_mask).min_element().unwrap());
            if split_mask != incompat.component_mask(component) {
                return Err(Error::Internal(
                    "graph block's split support is not a component of I(S)".into(),
                ));
            }
            if block_of_component[component].is_some() {
                return Err(Error::Internal(
                    "two graph blocks share one incompatibility component".into(),
                ));
            }
            block_of_component[component] = Some(blocks.len());
            let mut vertex_set: HashSet<usize> = HashSet::new();
            for &eid in block_edges {
                vertex_set.insert(edges[eid].endpoints.0);
                vertex_set.insert(edges[eid].endpoints.1);
            }
            let mut block_vertices: Vec<usize> = vertex_set.into_iter().collect();
            block_vertices.sort_unstable();
            let cut: Vec<usize> = block_vertices
                .iter()
                .copied()
                .filter(|v| cut_vertices.contains(v))
                .collect();
            blocks.push(BunemanBlock {
                component,
                splits: split_mask,
                cells: Vec::new(),
                vertices: block_vertices,
                cut_vertices: cut,
            });
        }
        // Attach cells to blocks: a positive-dimensional cell goes to its
        // component's block; 0-cells go to every block listing the vertex.
        for (cid, cell) in cells.iter().enumerate() {
            match cell.component {
                Some(comp) => {
                    let bid = block_of_component[comp].ok_or_else(|| {
                        Error::Internal("cell's component has no graph block".into())
                    })?;
                    blocks[bid].cells.push(cid);
                }
                None => {
                    let vid = vertex_index[&cell.base];
                    for block in blocks.iter_mut() {
                        if block.vertices.binary_search(&vid).is_ok() {
                            block.cells.push(cid);
                        }
                    }
                }
            }
        }
        for block in &mut blocks {
            block.cells.sort_unstable();
        }

        let taxon_vertices = (0..sys.n())
            .map(|x| vertex_index[&taxon_choice_mask(sys, x)])
            .collect();

        Ok(BunemanComplex {
            sys: sys.clone(),
            vertices,
            vertex_index,
            edges,
            cells,
            cells_by_dim,
            blocks,
            cut_vertices,
            taxon_vertices,
            incompat,
            classes,
        })
    }

    pub fn system(&self) -> &WeightedSplitSystem {
        &self.sys
    }

    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_id(&self, choice: u64) -> Option<usize> {
        self.vertex_index.get(&choice).copied()
    }

    pub fn edges(&self) -> &[BunemanEdge] {
        &self.edges
    }

    pub fn cells(&self) -> &[BunemanCell] {
        &self.cells
    }

    pub fn cells_of_dim(&self, dim: usize) -> &[usize] {
        self.cells_by_dim.get(dim).map_or(&[], |v| v.as_slice())
    }

    pub fn max_dim(&self) -> usize {
        self.cells_by_dim.len() - 1
    }

    pub fn blocks(&self) -> &[BunemanBlock] {
        &self.blocks
    }

    pub fn cut_vertices(&self) -> &[usize] {
        &self.cut_vertices
    }

    pub fn incompatibility(&self) -> &IncompatibilityGraph {
        &self.incompat
    }

    pub fn component_classes(&self) -> &[ComponentClass] {
        &self.classes
    }

    /// Vertex id of the embedded taxon point `phi_x`.
    pub fn taxon_vertex(&self, x: usize) -> usize {
        self.taxon_vertices[x]
    }

    /// The point realizing a vertex: coordinate 0 on the chosen side,
    /// `alpha/2` on the other.
    pub fn vertex_point(&self, vid: usize) -> BunemanPoint {
        choice_point(&self.sys, self.vertices[vid])
    }

    /// The canonical generator of a cell: base values on fixed splits,
    /// midpoint values `alpha/4` on free splits (any strictly interior value
    /// works; the midpoint is canonical).
    pub fn generator_point(&self, cid: usize) -> BunemanPoint {
        let cell = &self.cells[cid];
        let mut values = choice_point(&self.sys, cell.base).values().to_vec();
        for s in TaxonSet(cell.free).iter() {
            values[s] = half(&half(self.sys.weight(s)));
        }
        BunemanPoint::new(values)
    }

    /// All 2^dim vertex ids of a cell, in mask order.
    pub fn cell_vertices(&self, cid: usize) -> Vec<usize> {
        let cell = &self.cells[cid];
        let free: Vec<usize> = TaxonSet(cell.free).iter().collect();
        let mut out = Vec::with_capacity(1 << free.len());
        for subset in 0u64..(1 << free.len()) {
            let mut mask = cell.base;
            for (pos, &s) in free.iter().enumerate() {
                if subset >> pos & 1 == 1 {
                    mask |= 1 << s;
                }
            }
            out.push(self.vertex_index[&mask]);
        }
        out.sort_unstable();
        out
    }

    /// The gate of a cell for taxon `x`: on free splits copy `phi_x`'s
    /// choice, elsewhere keep the cell's fixed values. It is a vertex of the
    /// cell, through which all l1 geodesics from `phi_x` into the cell pass.
    pub fn gate(&self, cid: usize, x: usize) -> usize {
        let cell = &self.cells[cid];
        let phi_x = taxon_choice_mask(&self.sys, x);
        let mask = (cell.base & !cell.free) | (phi_x & cell.free);
        self.vertex_index[&mask]
    }

    /// Geometric membership of a point in a block: the point lies in some
    /// cell of the block (fixed coordinates equal to the cell's, free
    /// coordinates anywhere in range).
    pub fn block_contains_point(&self, block_id: usize, p: &BunemanPoint) -> bool {
        let block = &self.blocks[block_id];
        'cells: for &cid in &block.cells {
            let cell = &self.cells[cid];
            let base = choice_point(&self.sys, cell.base);
            for i in 0..self.sys.len() {
                let bit = 1u64 << i;
                if cell.free & bit != 0 {
                    let hi = half(self.sys.weight(i));
                    if p.value(i) < &BigRational::zero() || p.value(i) > &hi {
                        continue 'cells;
                    }
                } else if p.value(i) != base.value(i) {
                    continue 'cells;
                }
            }
            return true;
        }
        false
    }

    /// Membership of an arbitrary point in the underlying set of B(S,alpha).
    pub fn contains_point(&self, p: &BunemanPoint) -> bool {
        is_in_complex(&self.sys, p)
    }
}

/// Choice mask of the embedded taxon point: the chosen (zero) side of every
/// split is the side containing `x`.
pub fn taxon_choice_mask(sys: &WeightedSplitSystem, x: usize) -> u64 {
    let mut mask = 0u64;
    for (i, s) in sys.splits().iter().enumerate() {
        if s.side().contains(x) {
            mask |= 1 << i;
        }
    }
    mask
}

/// The embedding point `phi_x`: value `alpha/2` on sides avoiding `x`, zero
/// on sides containing `x`.
pub fn taxon_point(sys: &WeightedSplitSystem, x: usize) -> Result<BunemanPoint> {
    if x >= sys.n() {
        return Err(Error::UnknownTaxon(format!("#{x}")));
    }
    Ok(choice_point(sys, taxon_choice_mask(sys, x)))
}

/// Point realizing a choice mask (canonical side chosen = coordinate 0).
pub fn choice_point(sys: &WeightedSplitSystem, choice: u64) -> BunemanPoint {
    let values = (0..sys.len())
        .map(|i| {
            if choice >> i & 1 == 1 {
                BigRational::zero()
            } else {
                half(sys.weight(i))
            }
        })
        .collect();
    BunemanPoint::new(values)
}

/// Validity of a choice mask: all pairwise intersections of chosen sides
/// are nonempty.
fn choice_valid(sides: &[(TaxonSet, TaxonSet)], choice: u64) -> bool {
    let m = sides.len();
    for i in 0..m {
        let a = if choice >> i & 1 == 1 {
            sides[i].0
        } else {
            sides[i].1
        };
        for (j, s) in sides.iter().enumerate().take(m).skip(i + 1) {
            let b = if choice >> j & 1 == 1 { s.0 } else { s.1 };
            if a.intersection(b).is_empty() {
                return false;
            }
        }
    }
    true
}

fn side_table(sys: &WeightedSplitSystem) -> Vec<(TaxonSet, TaxonSet)> {
    sys.splits()
        .iter()
        .map(|s| (s.side(), s.other_side()))
        .collect()
}

/// Vertex enumeration by breadth-first flip expansion seeded at the taxon
/// points. Completeness rests on the connectivity of the Buneman graph; the
/// exhaustive filter below guards it in tests.
pub fn enumerate_vertices(sys: &WeightedSplitSystem, limit: usize) -> Result<Vec<u64>> {
    let m = sys.len();
    if m > limit {
        return Err(Error::TooManySplits {
            limit,
            actual: m,
        });
    }
    let sides = side_table(sys);
    let mut seen: HashSet<u64> = HashSet::new();
    let mut queue: Vec<u64> = Vec::new();
    for x in 0..sys.n() {
        let mask = taxon_choice_mask(sys, x);
        debug_assert!(choice_valid(&sides, mask));
        if seen.insert(mask) {
            queue.push(mask);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        'flips: for s in 0..m {
            let flipped = v ^ (1 << s);
            if seen.contains(&flipped) {
                continue;
            }
            let new_side = if flipped >> s & 1 == 1 {
                sides[s].0
            } else {
                sides[s].1
            };
            for (j, sj) in sides.iter().enumerate() {
                if j == s {
                    continue;
                }
                let chosen = if flipped >> j & 1 == 1 { sj.0 } else { sj.1 };
                if new_side.intersection(chosen).is_empty() {
                    continue 'flips;
                }
            }
            seen.insert(flipped);
            queue.push(flipped);
        }
    }
    let mut vertices: Vec<u64> = seen.into_iter().collect();
    vertices.sort_unstable();
    Ok(vertices)
}

/// The test oracle for vertex enumeration: filter all 2^|S| choice maps.
pub fn enumerate_vertices_exhaustive(sys: &WeightedSplitSystem) -> Vec<u64> {
    let m = sys.len();
    assert!(m <= 20, "exhaustive enumeration is for small test systems");
    let sides = side_table(sys);
    (0u64..(1 << m))
        .filter(|&c| choice_valid(&sides, c))
        .collect()
}

/// Membership of an arbitrary point in B(S, alpha): coordinates within
/// range, and no two strictly positive sides of distinct splits covering the
/// ground set (the support condition).
pub fn is_in_complex(sys: &WeightedSplitSystem, p: &BunemanPoint) -> bool {
    let m = sys.len();
    if p.len() != m {
        return false;
    }
    let full = sys.ground().full_set();
    let mut positive: Vec<Vec<TaxonSet>> = Vec::with_capacity(m);
    for i in 0..m {
        let hi = half(sys.weight(i));
        let v = p.value(i);
        if v < &BigRational::zero() || v > &hi {
            return false;
        }
        let mut sides = Vec::new();
        if v > &BigRational::zero() {
            sides.push(sys.split(i).side());
        }
        if v < &hi {
            sides.push(sys.split(i).other_side());
        }
        positive.push(sides);
    }
    for i in 0..m {
        for j in (i + 1)..m {
            for &a in &positive[i] {
                for &b in &positive[j] {
                    if a.union(b) == full {
                        return false;
                    }
                }
            }
        }
    }
    true
}
