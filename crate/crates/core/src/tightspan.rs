//! Assembly of the tight span as a polytopal complex: blocks of the Buneman
//! complex are carried over through the kappa map, with 4-cube blocks of
//! octahedral components replaced by rhombic dodecahedra, and everything
//! glued at the images of the cut vertices.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;

use crate::buneman::BunemanComplex;
use crate::kappa::{KappaMap, TightPoint};
use crate::metric::FiniteMetric;
use crate::splits::{ComponentClass, GroundSet, OctahedralPattern, WeightedSplitSystem};
use crate::{Error, Result};

/// What kind of polytope a tight-span block is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockClass {
    /// Copied isomorphically from the Buneman complex (hypercube cells).
    Consistent,
    /// The projection of an octahedral 4-cube: a rhombic dodecahedron.
    RhombicDodecahedron,
}

impl BlockClass {
    pub fn name(&self) -> &'static str {
        match self {
            BlockClass::Consistent => "consistent",
            BlockClass::RhombicDodecahedron => "rhombic dodecahedron",
        }
    }
}

/// A cell of the assembled complex.
#[derive(Debug, Clone)]
pub struct TsCell {
    pub dim: usize,
    /// Global vertex ids, sorted.
    pub vertices: Vec<usize>,
    /// Global ids of the (dim-1)-faces.
    pub facets: Vec<usize>,
    /// Owning block (for 0-cells: the lowest-numbered block containing the
    /// vertex; shared-vertex membership is recorded on the blocks).
    pub block: usize,
}

/// A block of the assembled complex.
#[derive(Debug, Clone)]
pub struct TsBlock {
    /// Component id in the incompatibility graph.
    pub component: usize,
    /// Bitmask of the component's splits.
    pub splits: u64,
    pub class: BlockClass,
    pub cells: Vec<usize>,
    pub vertices: Vec<usize>,
    pub cut_vertices: Vec<usize>,
    /// Kappa images of 4-cube corners that are not vertices of the block
    /// (octahedral blocks only; recorded, not part of the complex).
    pub interior_points: Vec<TightPoint>,
}

/// The bijection K between Buneman blocks and tight-span blocks, with a
/// cell-level isomorphism wherever kappa is injective (non-octahedral).
#[derive(Debug, Clone)]
pub struct BlockCorrespondence {
    pub buneman_block: usize,
    pub tightspan_block: usize,
    /// Pairs (Buneman cell id, tight-span cell id); `None` for octahedral
    /// blocks, where kappa is not a cell map.
    pub cell_map: Option<Vec<(usize, usize)>>,
}

/// The tight span as an explicit polytopal complex with exact coordinates.
#[derive(Debug, Clone)]
pub struct PolytopalComplex {
    ground: GroundSet,
    metric: FiniteMetric,
    vertices: Vec<TightPoint>,
    cells: Vec<TsCell>,
    cells_by_dim: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    blocks: Vec<TsBlock>,
    block_map: Vec<BlockCorrespondence>,
}

impl PolytopalComplex {
    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn metric(&self) -> &FiniteMetric {
        &self.metric
    }

    pub fn vertices(&self) -> &[TightPoint] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn cells(&self) -> &[TsCell] {
        &self.cells
    }

    pub fn cells_of_dim(&self, dim: usize) -> &[usize] {
        self.cells_by_dim.get(dim).map_or(&[], |v| v.as_slice())
    }

    pub fn max_dim(&self) -> usize {
        self.cells_by_dim.len() - 1
    }

    /// 1-cells as sorted vertex-id pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn blocks(&self) -> &[TsBlock] {
        &self.blocks
    }

    pub fn block_map(&self) -> &[BlockCorrespondence] {
        &self.block_map
    }

    /// Vertices shared by at least two blocks.
    pub fn cut_vertices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .blocks
            .iter()
            .flat_map(|b| b.cut_vertices.iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Drop one edge from the 1-skeleton. Negative-control hook for the
    /// verification pipeline; produces a complex the oracle must reject.
    #[doc(hidden)]
    pub fn corrupt_drop_last_edge(&mut self) {
        self.edges.pop();
    }

    /// One-line summary per block, e.g. `rhombic dodecahedron (14V/24E/12F/1C3)`.
    pub fn block_summaries(&self) -> Vec<String> {
        self.blocks
            .iter()
            .map(|b| {
                let mut per_dim: Vec<usize> = Vec::new();
                for &cid in &b.cells {
                    let d = self.cells[cid].dim;
                    if per_dim.len() <= d {
                        per_dim.resize(d + 1, 0);
                    }
                    per_dim[d] += 1;
                }
                let counts: Vec<String> = per_dim
                    .iter()
                    .enumerate()
                    .map(|(d, c)| match d {
                        0 => format!("{c}V"),
                        1 => format!("{c}E"),
                        2 => format!("{c}F"),
                        _ => format!("{c}C{d}"),
                    })
                    .collect();
                format!("{} ({})", b.class.name(), counts.join("/"))
            })
            .collect()
    }
}

/// The fixed combinatorics of the rhombic dodecahedron as a projected
/// 4-cube: corners are coded in pattern coordinates (bit i = side of the
/// relabeled split S_{i+1}), the two alternating corners project to interior
/// points, and everything else survives.
#[derive(Debug, Clone)]
pub struct RhombicDodecahedronTemplate {
    /// The 14 surviving corner codes, sorted.
    pub vertex_corners: Vec<u8>,
    /// 24 edges as corner pairs.
    pub edges: Vec<(u8, u8)>,
    /// 12 rhombic faces as corner quadruples (cube squares).
    pub faces: Vec<[u8; 4]>,
    /// The corner codes whose images are interior: the alternating side
    /// choices 0101 and 1010.
    pub interior_corners: [u8; 2],
}

impl RhombicDodecahedronTemplate {
    pub fn new() -> Self {
        let interior: [u8; 2] = [0b0101, 0b1010];
        let is_vertex = |c: u8| !interior.contains(&c);
        let vertex_corners: Vec<u8> = (0u8..16).filter(|&c| is_vertex(c)).collect();
        let mut edges = Vec::new();
        for &c in &vertex_corners {
            for bit in 0..4 {
                let d = c ^ (1 << bit);
                if c < d && is_vertex(d) {
                    edges.push((c, d));
                }
            }
        }
        let mut faces = Vec::new();
        for base in 0u8..16 {
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let (bi, bj) = (1u8 << i, 1u8 << j);
                    if base & (bi | bj) != 0 {
                        continue;
                    }
                    let quad = [base, base | bi, base | bj, base | bi | bj];
                    if quad.iter().all(|&c| is_vertex(c)) {
                        faces.push(quad);
                    }
                }
            }
        }
        let template = RhombicDodecahedronTemplate {
            vertex_corners,
            edges,
            faces,
            interior_corners: interior,
        };
        debug_assert_eq!(template.vertex_corners.len(), 14);
        debug_assert_eq!(template.edges.len(), 24);
        debug_assert_eq!(template.faces.len(), 12);
        debug_assert_eq!(template.degree_profile(), (6, 8));
        template
    }

    /// (number of degree-4 corners, number of degree-3 corners).
    fn degree_profile(&self) -> (usize, usize) {
        let mut deg: HashMap<u8, usize> = HashMap::new();
        for &(a, b) in &self.edges {
            *deg.entry(a).or_insert(0) += 1;
            *deg.entry(b).or_insert(0) += 1;
        }
        let four = deg.values().filter(|&&d| d == 4).count();
        let three = deg.values().filter(|&&d| d == 3).count();
        (four, three)
    }

    /// Corner codes with 4 incident edges; these must coincide with the
    /// gate corners (one per part of the octahedral partition).
    pub fn degree_four_corners(&self) -> Vec<u8> {
        let mut deg: HashMap<u8, usize> = HashMap::new();
        for &(a, b) in &self.edges {
            *deg.entry(a).or_insert(0) += 1;
            *deg.entry(b).or_insert(0) += 1;
        }
        let mut out: Vec<u8> = deg
            .iter()
            .filter(|&(_, &d)| d == 4)
            .map(|(&c, _)| c)
            .collect();
        out.sort_unstable();
        out
    }
}

impl Default for RhombicDodecahedronTemplate {
    fn default() -> Self {
        Self::new()
    }
}

/// The result of assembling a system: the Buneman complex it came from and
/// the tight-span complex.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub buneman: BunemanComplex,
    pub complex: PolytopalComplex,
}

#[derive(Debug)]
pub struct LocalCell {
    dim: usize,
    vertices: Vec<usize>,
    facets: Vec<usize>,
}

/// A block's worth of the tight span before gluing: vertices with exact
/// coordinates, cells over local vertex indices.
#[derive(Debug)]
pub struct LocalBlock {
    class: BlockClass,
    vertices: Vec<TightPoint>,
    cells: Vec<LocalCell>,
    /// (Buneman vertex id, local vertex index) of the block's cut vertices.
    cut: Vec<(usize, usize)>,
    interior_points: Vec<TightPoint>,
    /// (Buneman cell id, local cell index) for consistent blocks.
    bcell_map: Option<Vec<(usize, usize)>>,
}

/// Build the tight-span complex of a weakly compatible system.
pub fn assemble(sys: &WeightedSplitSystem) -> Result<Assembly> {
    if sys.is_empty() {
        return Err(Error::EmptySystem);
    }
    let kappa = KappaMap::new(sys)?;
    let buneman = BunemanComplex::build(sys)?;

    let mut locals: Vec<LocalBlock> = Vec::new();
    for (bid, bblock) in buneman.blocks().iter().enumerate() {
        let class = &buneman.component_classes()[bblock.component];
        let local = match class {
            ComponentClass::Octahedral(pattern) => {
                octahedral_block(&buneman, &kappa, bid, pattern)?
            }
            _ => consistent_block(&buneman, &kappa, bid),
        };
        locals.push(local);
    }

    // Glue: global vertex ids by sorted exact coordinates.
    let mut coord_ids: BTreeMap<Vec<BigRational>, usize> = BTreeMap::new();
    for local in &locals {
        for v in &local.vertices {
            coord_ids.entry(v.coords().to_vec()).or_insert(0);
        }
    }
    for (next, (_, id)) in coord_ids.iter_mut().enumerate() {
        *id = next;
    }
    let mut vertices: Vec<Option<TightPoint>> = vec![None; coord_ids.len()];
    let mut seen_in: Vec<Vec<usize>> = vec![Vec::new(); coord_ids.len()];
    for (bid, local) in locals.iter().enumerate() {
        for v in &local.vertices {
            let gid = coord_ids[v.coords()];
            vertices[gid].get_or_insert_with(|| v.clone());
            if !seen_in[gid].contains(&bid) {
                seen_in[gid].push(bid);
            }
        }
    }
    let vertices: Vec<TightPoint> = vertices.into_iter().map(|v| v.unwrap()).collect();

    // Cells: one 0-cell per global vertex, then the local cells of dim >= 1.
    let mut cells: Vec<TsCell> = (0..vertices.len())
        .map(|gid| TsCell {
            dim: 0,
            vertices: vec![gid],
            facets: Vec::new(),
            block: usize::MAX,
        })
        .collect();
    let mut blocks: Vec<TsBlock> = Vec::new();
    let mut block_map: Vec<BlockCorrespondence> = Vec::new();
    for (bid, local) in locals.iter().enumerate() {
        let bblock = &buneman.blocks()[bid];
        let to_global: Vec<usize> = local
            .vertices
            .iter()
            .map(|v| coord_ids[v.coords()])
            .collect();
        for &gid in &to_global {
            if cells[gid].block == usize::MAX {
                cells[gid].block = bid;
            }
        }
        // Local cell index -> global cell id.
        let mut cell_globals: Vec<usize> = vec![usize::MAX; local.cells.len()];
        for (lidx, lcell) in local.cells.iter().enumerate() {
            if lcell.dim == 0 {
                cell_globals[lidx] = to_global[lcell.vertices[0]];
                continue;
            }
            let mut vs: Vec<usize> = lcell.vertices.iter().map(|&lv| to_global[lv]).collect();
            vs.sort_unstable();
            let facets: Vec<usize> = lcell.facets.iter().map(|&f| cell_globals[f]).collect();
            debug_assert!(facets.iter().all(|&f| f != usize::MAX));
            let gid = cells.len();
            cells.push(TsCell {
                dim: lcell.dim,
                vertices: vs,
                facets,
                block: bid,
            });
            cell_globals[lidx] = gid;
        }
        let mut block_vertices: Vec<usize> = to_global.clone();
        block_vertices.sort_unstable();
        block_vertices.dedup();
        let mut block_cells: Vec<usize> = cell_globals.clone();
        block_cells.sort_unstable();
        block_cells.dedup();
        let cut_vertices: Vec<usize> = local.cut.iter().map(|&(_, lv)| to_global[lv]).collect();
        blocks.push(TsBlock {
            component: bblock.component,
            splits: bblock.splits,
            class: local.class,
            cells: block_cells,
            vertices: block_vertices,
            cut_vertices,
            interior_points: local.interior_points.clone(),
        });
        block_map.push(BlockCorrespondence {
            buneman_block: bid,
            tightspan_block: bid,
            cell_map: local.bcell_map.as_ref().map(|pairs| {
                pairs
                    .iter()
                    .map(|&(bc, lidx)| (bc, cell_globals[lidx]))
                    .collect()
            }),
        });
    }

    // Gluing correctness: coordinates shared across blocks are exactly the
    // kappa images of the Buneman cut vertices.
    let mut shared: Vec<usize> = (0..vertices.len())
        .filter(|&gid| seen_in[gid].len() >= 2)
        .collect();
    shared.sort_unstable();
    let mut expected: Vec<usize> = buneman
        .cut_vertices()
        .iter()
        .map(|&bv| coord_ids[kappa.apply(&buneman.vertex_point(bv)).coords()])
        .collect();
    expected.sort_unstable();
    expected.dedup();
    if shared != expected {
        return Err(Error::Internal(
            "vertices shared between blocks do not match the cut-vertex images".into(),
        ));
    }
    if blocks.len() != buneman.incompatibility().components().len() {
        return Err(Error::Internal(
            "tight-span block count differs from the component count".into(),
        ));
    }

    let mut cells_by_dim: Vec<Vec<usize>> = Vec::new();
    for (cid, cell) in cells.iter().enumerate() {
        if cells_by_dim.len() <= cell.dim {
            cells_by_dim.resize(cell.dim + 1, Vec::new());
        }
        cells_by_dim[cell.dim].push(cid);
    }
    let mut edges: Vec<(usize, usize)> = cells_by_dim
        .get(1)
        .map(|ids| {
            ids.iter()
                .map(|&cid| (cells[cid].vertices[0], cells[cid].vertices[1]))
                .collect()
        })
        .unwrap_or_default();
    edges.sort_unstable();

    let complex = PolytopalComplex {
        ground: sys.ground().clone(),
        metric: kappa.metric().clone(),
        vertices,
        cells,
        cells_by_dim,
        edges,
        blocks,
        block_map,
    };
    Ok(Assembly { buneman, complex })
}

/// Copy a non-octahedral block through kappa: same cells, same face
/// relation, vertex coordinates replaced by their images (kappa is
/// injective on such blocks).
fn consistent_block(buneman: &BunemanComplex, kappa: &KappaMap, bid: usize) -> LocalBlock {
    let bblock = &buneman.blocks()[bid];
    let mut vertex_local: HashMap<usize, usize> = HashMap::new();
    let mut vertices = Vec::new();
    for &bv in &bblock.vertices {
        vertex_local.insert(bv, vertices.len());
        vertices.push(kappa.apply(&buneman.vertex_point(bv)));
    }
    let mut bcell_local: HashMap<usize, usize> = HashMap::new();
    let mut cells = Vec::new();
    let mut bcell_map = Vec::new();
    // Block cells are in ascending id order, so every face of a cell is
    // processed before the cell itself.
    for &bc in &bblock.cells {
        let cell = &buneman.cells()[bc];
        let vs: Vec<usize> = buneman
            .cell_vertices(bc)
            .into_iter()
            .map(|bv| vertex_local[&bv])
            .collect();
        let facets: Vec<usize> = cell.facets.iter().map(|f| bcell_local[f]).collect();
        let lidx = cells.len();
        bcell_local.insert(bc, lidx);
        bcell_map.push((bc, lidx));
        cells.push(LocalCell {
            dim: cell.dim,
            vertices: vs,
            facets,
        });
    }
    let cut: Vec<(usize, usize)> = bblock
        .cut_vertices
        .iter()
        .map(|&bv| (bv, vertex_local[&bv]))
        .collect();
    LocalBlock {
        class: BlockClass::Consistent,
        vertices,
        cells,
        cut,
        interior_points: Vec::new(),
        bcell_map: Some(bcell_map),
    }
}

/// Instantiate the rhombic dodecahedron replacing an octahedral 4-cube
/// block. Coordinates come from evaluating kappa on the cube's 16 corners;
/// the two corners with alternating side choices project into the interior
/// and are recorded but dropped from the vertex set.
pub fn octahedral_block(
    buneman: &BunemanComplex,
    kappa: &KappaMap,
    bid: usize,
    pattern: &OctahedralPattern,
) -> Result<LocalBlock> {
    let sys = buneman.system();
    let bblock = &buneman.blocks()[bid];
    // The block must consist of a single maximal 4-cube.
    let cube = bblock
        .cells
        .iter()
        .copied()
        .find(|&cid| buneman.cells()[cid].dim == 4)
        .ok_or(Error::NotOctahedral)?;
    let cube_cell = &buneman.cells()[cube];
    let free_mask: u64 = pattern.split_order.iter().fold(0, |m, &s| m | 1 << s);
    if cube_cell.free != free_mask || bblock.vertices.len() != 16 {
        return Err(Error::NotOctahedral);
    }
    // Whether the pattern's A_i side is the canonical side of the split.
    let a_canonical: Vec<bool> = pattern
        .split_order
        .iter()
        .zip(&pattern.a_sides)
        .map(|(&s, a)| sys.split(s).side() == *a)
        .collect();
    // Corner code -> Buneman choice mask. Bit i of the code clear means the
    // chosen (zero) side of relabeled split i is A_i.
    let corner_mask = |code: u8| -> u64 {
        let mut mask = cube_cell.base;
        for (i, &s) in pattern.split_order.iter().enumerate() {
            let choose_a = code >> i & 1 == 0;
            let canonical_chosen = choose_a == a_canonical[i];
            if canonical_chosen {
                mask |= 1 << s;
            } else {
                mask &= !(1 << s);
            }
        }
        mask
    };
    let template = RhombicDodecahedronTemplate::new();
    let corner_image = |code: u8| -> TightPoint {
        let bv = buneman
            .vertex_id(corner_mask(code))
            .expect("cube corner is a vertex");
        kappa.apply(&buneman.vertex_point(bv))
    };
    // Gate corners: one per part, matching the part's side signature; they
    // must be exactly the degree-4 corners of the template.
    let mut gate_corners: Vec<u8> = pattern
        .parts
        .iter()
        .map(|part| {
            let mut code = 0u8;
            for (i, a) in pattern.a_sides.iter().enumerate() {
                if part.intersection(*a).is_empty() {
                    code |= 1 << i;
                }
            }
            code
        })
        .collect();
    gate_corners.sort_unstable();
    if gate_corners != template.degree_four_corners() {
        return Err(Error::Internal(
            "gate corners do not match the degree-4 template corners".into(),
        ));
    }
    // Gates computed through the cell-gate operation must agree.
    for part in &pattern.parts {
        let x = part.min_element().unwrap();
        let gate_vid = buneman.gate(cube, x);
        let code = (0..16u8)
            .find(|&c| buneman.vertex_id(corner_mask(c)) == Some(gate_vid))
            .expect("gate is a cube corner");
        if !gate_corners.contains(&code) {
            return Err(Error::Internal("cell gate is not a gate corner".into()));
        }
    }

    let mut local_of_corner: HashMap<u8, usize> = HashMap::new();
    let mut vertices = Vec::new();
    for &code in &template.vertex_corners {
        local_of_corner.insert(code, vertices.len());
        vertices.push(corner_image(code));
    }
    let interior_points: Vec<TightPoint> = template
        .interior_corners
        .iter()
        .map(|&code| corner_image(code))
        .collect();

    // Cells: 14 corner 0-cells, 24 edges, 12 rhombi, one 3-cell.
    let mut cells: Vec<LocalCell> = Vec::new();
    for lv in 0..vertices.len() {
        cells.push(LocalCell {
            dim: 0,
            vertices: vec![lv],
            facets: Vec::new(),
        });
    }
    let mut edge_cell: HashMap<(u8, u8), usize> = HashMap::new();
    for &(a, b) in &template.edges {
        let id = cells.len();
        edge_cell.insert((a, b), id);
        cells.push(LocalCell {
            dim: 1,
            vertices: vec![local_of_corner[&a], local_of_corner[&b]],
            facets: vec![local_of_corner[&a], local_of_corner[&b]],
        });
    }
    let mut face_cells: Vec<usize> = Vec::new();
    for quad in &template.faces {
        // The four unit-step pairs inside the quad are its edges.
        let mut facets = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let (a, b) = (quad[i].min(quad[j]), quad[i].max(quad[j]));
                if (a ^ b).count_ones() == 1 {
                    facets.push(edge_cell[&(a, b)]);
                }
            }
        }
        debug_assert_eq!(facets.len(), 4);
        let id = cells.len();
        face_cells.push(id);
        cells.push(LocalCell {
            dim: 2,
            vertices: quad.iter().map(|c| local_of_corner[c]).collect(),
            facets,
        });
    }
    cells.push(LocalCell {
        dim: 3,
        vertices: (0..vertices.len()).collect(),
        facets: face_cells,
    });

    // Cut vertices of the Buneman block must land on template vertices.
    let mut cut = Vec::new();
    for &bv in &bblock.cut_vertices {
        let mask = buneman.vertices()[bv];
        let code = (0..16u8)
            .find(|&c| corner_mask(c) == mask)
            .ok_or_else(|| Error::Internal("cut vertex is not a cube corner".into()))?;
        let lv = *local_of_corner
            .get(&code)
            .ok_or_else(|| Error::Internal("cut vertex projects to an interior point".into()))?;
        cut.push((bv, lv));
    }

    Ok(LocalBlock {
        class: BlockClass::RhombicDodecahedron,
        vertices,
        cells,
        cut,
        interior_points,
        bcell_map: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{circular_triple, octahedral_system, quartet_tree};
    use crate::kappa::is_tight_point;
    use crate::rational::rat;
    use crate::splits::{GroundSet, Split};

    #[test]
    fn template_combinatorics() {
        let t = RhombicDodecahedronTemplate::new();
        assert_eq!(t.vertex_corners.len(), 14);
        assert_eq!(t.edges.len(), 24);
        assert_eq!(t.faces.len(), 12);
        assert_eq!(t.degree_four_corners().len(), 6);
        assert_eq!(t.interior_corners, [0b0101, 0b1010]);
    }

    #[test]
    fn octahedral_assembles_to_rhombic_dodecahedron() {
        let assembly = assemble(&octahedral_system()).unwrap();
        let c = &assembly.complex;
        assert_eq!(c.blocks().len(), 1);
        assert_eq!(c.blocks()[0].class, BlockClass::RhombicDodecahedron);
        assert_eq!(c.vertex_count(), 14);
        assert_eq!(c.edges().len(), 24);
        assert_eq!(c.cells_of_dim(2).len(), 12);
        assert_eq!(c.cells_of_dim(3).len(), 1);
        // With unit weights the two interior corner images coincide at the
        // block's center; they are recorded, not vertices.
        let ints = &c.blocks()[0].interior_points;
        assert_eq!(ints.len(), 2);
        assert_eq!(ints[0], ints[1]);
        for p in ints {
            assert!(!c.vertices().iter().any(|v| v == p));
        }
    }

    #[test]
    fn octahedral_unequal_weights_distinct_interior_points() {
        let ground = GroundSet::numbered(6).unwrap();
        let splits = octahedral_system().splits().to_vec();
        let weights = [rat(1, 1), rat(2, 1), rat(3, 2), rat(1, 3)];
        let entries = splits
            .into_iter()
            .zip(weights.iter().cloned())
            .collect::<Vec<_>>();
        let sys = WeightedSplitSystem::new(ground, entries).unwrap();
        let assembly = assemble(&sys).unwrap();
        let c = &assembly.complex;
        assert_eq!(c.vertex_count(), 14);
        assert_eq!(c.edges().len(), 24);
        let ints = &c.blocks()[0].interior_points;
        assert_eq!(ints.len(), 2);
        // Interior images coincide only when all four weights are equal.
        assert_ne!(ints[0], ints[1]);
        for v in c.vertices() {
            assert!(is_tight_point(v.coords(), c.metric()));
        }
    }

    #[test]
    fn tree_assembles_to_edge_blocks() {
        let sys = quartet_tree();
        let assembly = assemble(&sys).unwrap();
        let c = &assembly.complex;
        assert_eq!(c.blocks().len(), 5);
        assert!(c.blocks().iter().all(|b| b.class == BlockClass::Consistent));
        assert!(c.blocks().iter().all(|b| b.vertices.len() == 2));
        assert_eq!(c.vertex_count(), 6);
        assert_eq!(c.edges().len(), 5);
    }

    #[test]
    fn circular_triple_assembles_to_three_cube() {
        let assembly = assemble(&circular_triple()).unwrap();
        let c = &assembly.complex;
        assert_eq!(c.blocks().len(), 1);
        assert_eq!(c.blocks()[0].class, BlockClass::Consistent);
        assert_eq!(c.vertex_count(), 8);
        assert_eq!(c.edges().len(), 12);
        assert_eq!(c.cells_of_dim(2).len(), 6);
        assert_eq!(c.cells_of_dim(3).len(), 1);
    }

    #[test]
    fn consistent_blocks_copy_cell_counts() {
        for sys in [quartet_tree(), circular_triple()] {
            let assembly = assemble(&sys).unwrap();
            for corr in assembly.complex.block_map() {
                let bblock = &assembly.buneman.blocks()[corr.buneman_block];
                let tsblock = &assembly.complex.blocks()[corr.tightspan_block];
                assert_eq!(bblock.cells.len(), tsblock.cells.len());
                let map = corr.cell_map.as_ref().unwrap();
                let lookup: HashMap<usize, usize> = map.iter().copied().collect();
                for &(bc, tc) in map {
                    assert_eq!(assembly.buneman.cells()[bc].dim, assembly.complex.cells()[tc].dim);
                    // Face relation is preserved.
                    let mut bfaces: Vec<usize> = assembly.buneman.cells()[bc]
                        .facets
                        .iter()
                        .map(|f| lookup[f])
                        .collect();
                    let mut tfaces = assembly.complex.cells()[tc].facets.clone();
                    bfaces.sort_unstable();
                    tfaces.sort_unstable();
                    assert_eq!(bfaces, tfaces);
                }
            }
        }
    }

    #[test]
    fn single_split_yields_one_cube_block() {
        let ground = GroundSet::numbered(4).unwrap();
        let sys = WeightedSplitSystem::with_unit_weights(
            ground,
            vec![Split::from_indices(4, [0, 1]).unwrap()],
        )
        .unwrap();
        let assembly = assemble(&sys).unwrap();
        assert_eq!(assembly.complex.vertex_count(), 2);
        assert_eq!(assembly.complex.edges().len(), 1);
    }

    #[test]
    fn empty_system_rejected() {
        let ground = GroundSet::numbered(3).unwrap();
        let sys = WeightedSplitSystem::new(ground, vec![]).unwrap();
        assert!(matches!(assemble(&sys), Err(Error::EmptySystem)));
    }

    #[test]
    fn assembled_vertices_and_edge_midpoints_are_tight() {
        for sys in [octahedral_system(), quartet_tree(), circular_triple()] {
            let assembly = assemble(&sys).unwrap();
            let c = &assembly.complex;
            for v in c.vertices() {
                assert!(is_tight_point(v.coords(), c.metric()));
            }
            for &(a, b) in c.edges() {
                let mid = c.vertices()[a].midpoint(&c.vertices()[b], c.metric());
                assert!(is_tight_point(mid.coords(), c.metric()));
            }
        }
    }

    #[test]
    fn gate_images_at_expected_sup_distances() {
        // Unit-weight octahedral block: gate images of octahedron-adjacent
        // parts sit at sup-distance 2, antipodal parts at 4.
        let sys = octahedral_system();
        let assembly = assemble(&sys).unwrap();
        let kappa = KappaMap::new(&sys).unwrap();
        let buneman = &assembly.buneman;
        let cube = buneman.cells().iter().position(|c| c.dim == 4).unwrap();
        let gates: Vec<TightPoint> = (0..6)
            .map(|x| kappa.apply(&buneman.vertex_point(buneman.gate(cube, x))))
            .collect();
        for i in 0..6 {
            // Parts are singletons here, so gate images are distance rows.
            assert_eq!(gates[i], kappa.h(i));
            for j in (i + 1)..6 {
                let dist = gates[i].d_inf(&gates[j]);
                let expected = if (i + 3) % 6 == j { rat(4, 1) } else { rat(2, 1) };
                assert_eq!(dist, expected, "gates {i},{j}");
            }
        }
    }

    #[test]
    fn two_cells_intersect_in_common_face() {
        for sys in [octahedral_system(), quartet_tree(), circular_triple()] {
            let assembly = assemble(&sys).unwrap();
            let c = &assembly.complex;
            for i in 0..c.cells().len() {
                for j in (i + 1)..c.cells().len() {
                    let vi = &c.cells()[i].vertices;
                    let vj = &c.cells()[j].vertices;
                    let shared: Vec<usize> =
                        vi.iter().filter(|v| vj.contains(v)).copied().collect();
                    if shared.is_empty() {
                        continue;
                    }
                    assert!(
                        c.cells().iter().any(|cell| cell.vertices == shared),
                        "cells {i} and {j} share a non-face"
                    );
                }
            }
        }
    }
}
