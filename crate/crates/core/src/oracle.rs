//! Independent brute-force computation of the tight-span vertices and
//! 1-skeleton straight from the defining polyhedron: enumerate linearly
//! independent subsets of the constraints `f(x) + f(y) >= d(x,y)`, solve the
//! equality systems exactly, and keep the feasible basic solutions. The
//! oracle never consults split-system data; it sees only the metric.
//!
//! The enumeration runs over denominator-cleared integers (every basic
//! solution is integral after scaling by twice the common denominator),
//! with incremental propagation through a parity union-find: a connected
//! component of the chosen tight pairs is an affine line `f = a +/- t`
//! until an odd cycle pins `t` down. Infeasible partial systems are pruned
//! via per-component intervals on `t`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::graph::block_decomposition;
use crate::kappa::{is_tight_point, TightPoint};
use crate::metric::FiniteMetric;
use crate::tightspan::PolytopalComplex;
use crate::{Error, Result};

/// Oracle configuration. The taxa cap keeps runtimes sane; raising it is an
/// explicit decision.
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub cap: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { cap: 8 }
    }
}

/// The inequalities `f(x) + f(y) >= d(x,y)` over all unordered pairs,
/// including the loops `2 f(x) >= 0`.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    n: usize,
    pairs: Vec<(usize, usize)>,
    rhs: Vec<BigRational>,
}

impl ConstraintSystem {
    pub fn new(d: &FiniteMetric) -> Self {
        let n = d.n();
        let mut pairs = Vec::with_capacity(n * (n + 1) / 2);
        let mut rhs = Vec::with_capacity(n * (n + 1) / 2);
        for x in 0..n {
            for y in x..n {
                pairs.push((x, y));
                rhs.push(d.get(x, y).clone());
            }
        }
        ConstraintSystem { n, pairs, rhs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, row: usize) -> (usize, usize) {
        self.pairs[row]
    }

    pub fn satisfied_by(&self, f: &[BigRational]) -> bool {
        self.pairs
            .iter()
            .zip(&self.rhs)
            .all(|(&(x, y), d)| &f[x] + &f[y] >= *d)
    }
}

const NEG_INF: i128 = i128::MIN / 4;
const POS_INF: i128 = i128::MAX / 4;

/// Integer form of the constraint system: distances scaled by twice the
/// common denominator so that every basic solution is integral.
struct IntCore {
    n: usize,
    rows: Vec<(usize, usize, i128)>,
    dist: Vec<i128>,
    /// Suffix coverage masks: taxa appearing in rows[i..].
    future_cover: Vec<u64>,
    scale: BigInt,
}

impl IntCore {
    fn new(d: &FiniteMetric) -> Result<Self> {
        let n = d.n();
        let mut denom_lcm = BigInt::one();
        for e in d.entries() {
            denom_lcm = denom_lcm.lcm(e.denom());
        }
        let scale = BigInt::from(2) * denom_lcm;
        let mut dist = vec![0i128; n * n];
        for x in 0..n {
            for y in 0..n {
                let scaled = d.get(x, y) * BigRational::from_integer(scale.clone());
                debug_assert!(scaled.denom().is_one());
                let v = scaled.numer().to_i64().ok_or(Error::OracleOverflow)? as i128;
                dist[x * n + y] = v;
            }
        }
        let mut rows = Vec::new();
        for x in 0..n {
            for y in x..n {
                rows.push((x, y, dist[x * n + y]));
            }
        }
        let mut future_cover = vec![0u64; rows.len() + 1];
        for i in (0..rows.len()).rev() {
            future_cover[i] = future_cover[i + 1] | 1 << rows[i].0 | 1 << rows[i].1;
        }
        Ok(IntCore {
            n,
            rows,
            dist,
            future_cover,
            scale,
        })
    }

    fn d(&self, x: usize, y: usize) -> i128 {
        self.dist[x * self.n + y]
    }

    fn satisfied(&self, f: &[i128]) -> bool {
        (0..self.n).all(|x| (x..self.n).all(|y| f[x] + f[y] >= self.d(x, y)))
    }
}

/// Union-find with affine tracking and rollback. Every non-root node
/// satisfies `f(v) = off[v] + sgn[v] * f(parent[v])`; a root carries the
/// free parameter of its component, the parameter's feasible interval, and
/// its value once an odd cycle has determined it.
struct SolverState {
    parent: Vec<usize>,
    off: Vec<i128>,
    sgn: Vec<i8>,
    size: Vec<usize>,
    members: Vec<Vec<usize>>,
    lo: Vec<i128>,
    hi: Vec<i128>,
    det: Vec<Option<i128>>,
    determined_nodes: Vec<usize>,
    journal: Vec<Change>,
}

enum Change {
    Attach { child: usize },
    MembersLen { root: usize, len: usize },
    Bounds { root: usize, lo: i128, hi: i128 },
    Det { root: usize, prev: Option<i128>, nodes: Vec<usize> },
}

enum RowOutcome {
    /// Row is linearly dependent on the chosen ones; cannot join a basis.
    Dependent,
    /// Row added; rollback to the caller's checkpoint undoes it.
    Added,
    /// Row would make the system infeasible; state already rolled back.
    Infeasible,
}

impl SolverState {
    fn new(core: &IntCore) -> Self {
        let n = core.n;
        SolverState {
            parent: (0..n).collect(),
            off: vec![0; n],
            sgn: vec![1; n],
            size: vec![1; n],
            members: (0..n).map(|v| vec![v]).collect(),
            // Singleton components: f(v) = t_v with 0 <= f(v) <= max_y
            // d(v,y); the upper bound holds because every vertex of the
            // polyhedron lies in the tight span.
            lo: vec![0; n],
            hi: (0..n)
                .map(|v| (0..n).map(|y| core.d(v, y)).max().unwrap())
                .collect(),
            det: vec![None; n],
            determined_nodes: Vec::new(),
            journal: Vec::new(),
        }
    }

    fn checkpoint(&self) -> usize {
        self.journal.len()
    }

    fn rollback(&mut self, checkpoint: usize) {
        while self.journal.len() > checkpoint {
            match self.journal.pop().unwrap() {
                Change::Attach { child } => {
                    let p = self.parent[child];
                    self.size[p] -= self.size[child];
                    self.parent[child] = child;
                }
                Change::MembersLen { root, len } => self.members[root].truncate(len),
                Change::Bounds { root, lo, hi } => {
                    self.lo[root] = lo;
                    self.hi[root] = hi;
                }
                Change::Det { root, prev, nodes } => {
                    self.det[root] = prev;
                    self.determined_nodes = nodes;
                }
            }
        }
    }

    /// Resolve `f(v) = off + sgn * t_root`.
    fn find(&self, v: usize) -> (usize, i128, i8) {
        let (mut node, mut off, mut sgn) = (v, 0i128, 1i8);
        while self.parent[node] != node {
            off += sgn as i128 * self.off[node];
            sgn *= self.sgn[node];
            node = self.parent[node];
        }
        (node, off, sgn)
    }

    fn value(&self, v: usize) -> i128 {
        let (root, off, sgn) = self.find(v);
        let t = self.det[root].expect("component must be determined");
        off + sgn as i128 * t
    }

    fn narrow(&mut self, root: usize, lo: i128, hi: i128) -> bool {
        let (old_lo, old_hi) = (self.lo[root], self.hi[root]);
        let (new_lo, new_hi) = (old_lo.max(lo), old_hi.min(hi));
        if new_lo != old_lo || new_hi != old_hi {
            self.journal.push(Change::Bounds {
                root,
                lo: old_lo,
                hi: old_hi,
            });
            self.lo[root] = new_lo;
            self.hi[root] = new_hi;
        }
        new_lo <= new_hi
    }

    /// Constrain `s * t_root >= c` with `s = +-2`.
    fn bound_halfline(&mut self, root: usize, s: i128, c: i128) -> bool {
        debug_assert!(s == 2 || s == -2);
        if s > 0 {
            let b = c.div_euclid(2) + i128::from(c.rem_euclid(2) != 0);
            self.narrow(root, b, POS_INF)
        } else {
            let b = (-c).div_euclid(2);
            self.narrow(root, NEG_INF, b)
        }
    }

    /// Pin a component's parameter to `t` and vet `new_members` (all of the
    /// component's members on a fresh determination, just the newly attached
    /// ones when merging into an already determined component): `t` must sit
    /// in the accumulated interval, the vetted values must satisfy every
    /// pair against the already determined nodes, and they tighten the
    /// intervals of the still-free components.
    fn settle_determined(
        &mut self,
        core: &IntCore,
        root: usize,
        t: i128,
        new_members: &[usize],
    ) -> bool {
        if t < self.lo[root] || t > self.hi[root] {
            return false;
        }
        self.journal.push(Change::Det {
            root,
            prev: self.det[root],
            nodes: self.determined_nodes.clone(),
        });
        self.det[root] = Some(t);
        let mut values = Vec::with_capacity(new_members.len());
        for &z in new_members {
            let (r, off, sgn) = self.find(z);
            debug_assert_eq!(r, root);
            values.push((z, off + sgn as i128 * t));
        }
        for k in 0..self.determined_nodes.len() {
            let w = self.determined_nodes[k];
            let wv = self.value(w);
            for &(z, zv) in &values {
                if zv + wv < core.d(z, w) {
                    return false;
                }
            }
        }
        for w in 0..core.n {
            let (wr, woff, wsgn) = self.find(w);
            if wr == root || self.det[wr].is_some() {
                continue;
            }
            for &(z, zv) in &values {
                // zv + woff + wsgn * t_wr >= d(z, w)
                let c = core.d(z, w) - zv - woff;
                let ok = if wsgn > 0 {
                    self.narrow(wr, c, POS_INF)
                } else {
                    self.narrow(wr, NEG_INF, -c)
                };
                if !ok {
                    return false;
                }
            }
        }
        for &(z, _) in &values {
            self.determined_nodes.push(z);
        }
        true
    }

    /// Try to add row (x, y) as a tight equality.
    fn add_row(&mut self, core: &IntCore, x: usize, y: usize, rhs: i128) -> RowOutcome {
        let (rx, ax, sx) = self.find(x);
        let (ry, ay, sy) = self.find(y);
        if rx == ry {
            let s = sx as i128 + sy as i128;
            if s == 0 || self.det[rx].is_some() {
                return RowOutcome::Dependent;
            }
            let num = rhs - ax - ay;
            debug_assert_eq!(num.rem_euclid(2), 0, "scaled solutions are integral");
            let t = num / s;
            let cp = self.checkpoint();
            let members = self.members[rx].clone();
            if self.settle_determined(core, rx, t, &members) {
                RowOutcome::Added
            } else {
                self.rollback(cp);
                RowOutcome::Infeasible
            }
        } else {
            if self.det[rx].is_some() && self.det[ry].is_some() {
                return RowOutcome::Dependent;
            }
            let cp = self.checkpoint();
            // Attach the smaller component under the larger.
            let (big, small, ab, sb, asm, ssm) = if self.size[rx] >= self.size[ry] {
                (rx, ry, ax, sx, ay, sy)
            } else {
                (ry, rx, ay, sy, ax, sx)
            };
            // From (ab + sb t_big) + (asm + ssm t_small) = rhs:
            // t_small = c + g * t_big.
            let c = ssm as i128 * (rhs - ab - asm);
            let g = -(ssm * sb);
            let big_members_before = self.members[big].len();
            self.journal.push(Change::Attach { child: small });
            self.journal.push(Change::MembersLen {
                root: big,
                len: big_members_before,
            });
            self.parent[small] = big;
            self.off[small] = c;
            self.sgn[small] = g;
            self.size[big] += self.size[small];
            let small_members = self.members[small].clone();
            self.members[big].extend_from_slice(&small_members);

            // Transport the small component's interval and determined value.
            let (slo, shi) = (self.lo[small], self.hi[small]);
            let interval_ok = if g > 0 {
                self.narrow(big, sat_sub(slo, c), sat_sub(shi, c))
            } else {
                self.narrow(big, sat_sub(c, shi), sat_sub(c, slo))
            };
            if !interval_ok {
                self.rollback(cp);
                return RowOutcome::Infeasible;
            }
            let already_determined = self.det[big].is_some();
            let det_value = self.det[big].or_else(|| {
                // t_small = c + g t_big  =>  t_big = g (t_small - c)
                self.det[small].map(|ts| g as i128 * (ts - c))
            });
            if !already_determined {
                // Cross pairs between the merged halves, as interval bounds
                // (same parity) or absolute checks (opposite parity).
                let big_members: Vec<usize> = self.members[big][..big_members_before].to_vec();
                for &z in &big_members {
                    let (_, az, sz) = self.find(z);
                    for &w in &small_members {
                        let (_, aw, sw) = self.find(w);
                        let s = sz as i128 + sw as i128;
                        let base = az + aw;
                        let need = core.d(z, w);
                        let ok = if s == 0 {
                            base >= need
                        } else {
                            self.bound_halfline(big, s, need - base)
                        };
                        if !ok {
                            self.rollback(cp);
                            return RowOutcome::Infeasible;
                        }
                    }
                }
            }
            if let Some(t) = det_value {
                // On a fresh determination every member needs vetting; when
                // big was already determined its members sit in
                // determined_nodes, so vetting the attached ones against
                // that list covers the new cross pairs too.
                let to_vet: Vec<usize> = if already_determined {
                    small_members.clone()
                } else {
                    self.members[big].clone()
                };
                if !self.settle_determined(core, big, t, &to_vet) {
                    self.rollback(cp);
                    return RowOutcome::Infeasible;
                }
            }
            RowOutcome::Added
        }
    }
}

fn sat_sub(a: i128, b: i128) -> i128 {
    if a <= NEG_INF {
        return NEG_INF;
    }
    if a >= POS_INF {
        return POS_INF;
    }
    (a - b).clamp(NEG_INF, POS_INF)
}

fn dfs(
    core: &IntCore,
    state: &mut SolverState,
    row_idx: usize,
    includes: usize,
    uncovered: u64,
    out: &mut BTreeSet<Vec<i128>>,
) {
    if includes == core.n {
        let f: Vec<i128> = (0..core.n).map(|v| state.value(v)).collect();
        if core.satisfied(&f) {
            out.insert(f);
        }
        return;
    }
    if row_idx == core.rows.len() || core.rows.len() - row_idx < core.n - includes {
        return;
    }
    // Per-taxon coverage pruning: a basis must touch every taxon.
    if uncovered & !core.future_cover[row_idx] != 0 {
        return;
    }
    let (x, y, rhs) = core.rows[row_idx];
    let cp = state.checkpoint();
    if matches!(state.add_row(core, x, y, rhs), RowOutcome::Added) {
        let covered = uncovered & !(1 << x) & !(1 << y);
        dfs(core, state, row_idx + 1, includes + 1, covered, out);
        state.rollback(cp);
    }
    dfs(core, state, row_idx + 1, includes, uncovered, out);
}

/// All vertices of the polyhedron `{f : f(x) + f(y) >= d(x,y)}`, as exact
/// tight points sorted by coordinates. These are exactly the 0-cells of the
/// tight span.
pub fn oracle_vertices(d: &FiniteMetric, opts: &OracleOptions) -> Result<Vec<TightPoint>> {
    let n = d.n();
    if n > opts.cap {
        return Err(Error::OracleCapExceeded {
            cap: opts.cap,
            actual: n,
        });
    }
    let core = IntCore::new(d)?;
    let all_mask = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
    // Static partition for parallelism: branch on the first included row
    // (everything before it is excluded).
    let sets: Vec<BTreeSet<Vec<i128>>> = (0..core.rows.len())
        .into_par_iter()
        .map(|first| {
            let mut out = BTreeSet::new();
            if core.rows.len() - first >= core.n {
                let mut state = SolverState::new(&core);
                let (x, y, rhs) = core.rows[first];
                if matches!(state.add_row(&core, x, y, rhs), RowOutcome::Added) {
                    let covered = all_mask & !(1 << x) & !(1 << y);
                    dfs(&core, &mut state, first + 1, 1, covered, &mut out);
                }
            }
            out
        })
        .collect();
    let mut merged: BTreeSet<Vec<i128>> = BTreeSet::new();
    for s in sets {
        merged.extend(s);
    }
    let scale = BigRational::from_integer(core.scale.clone());
    let mut result = Vec::with_capacity(merged.len());
    for f in merged {
        let coords: Vec<BigRational> = f
            .iter()
            .map(|&v| BigRational::from_integer(BigInt::from(v)) / scale.clone())
            .collect();
        debug_assert!(
            is_tight_point(&coords, d),
            "polyhedron vertex must lie in the tight span"
        );
        result.push(TightPoint::new(coords, d));
    }
    Ok(result)
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination. Ample
/// headroom in i128 for the small 0/1/2 constraint matrices used here.
pub(crate) fn integer_rank(rows: &[Vec<i128>], cols: usize) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let nrows = m.len();
    let mut rank = 0;
    let mut prev_pivot: i128 = 1;
    for col in 0..cols {
        let Some(pivot_row) = (rank..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col];
        for r in (rank + 1)..nrows {
            for c in (col + 1)..cols {
                m[r][c] = (m[r][c] * pivot - m[r][col] * m[rank][c]) / prev_pivot;
            }
            m[r][col] = 0;
        }
        prev_pivot = pivot;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Rank over the rationals (used for affine spans, whose entries are not
/// tiny integers).
pub(crate) fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot_row) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        for r in (rank + 1)..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot;
            for c in col..cols {
                let sub = &factor * &m[rank][c];
                m[r][c] -= sub;
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

fn row_vector(n: usize, x: usize, y: usize) -> Vec<i128> {
    let mut v = vec![0i128; n];
    if x == y {
        v[x] = 2;
    } else {
        v[x] = 1;
        v[y] = 1;
    }
    v
}

/// Rank of a set of constraint rows given by their taxon pairs.
fn tight_rank(n: usize, pairs: &[(usize, usize)]) -> usize {
    let rows: Vec<Vec<i128>> = pairs.iter().map(|&(x, y)| row_vector(n, x, y)).collect();
    integer_rank(&rows, n)
}

/// The edges of the tight span: pairs of oracle vertices whose midpoint's
/// tight-constraint set has solution space of dimension exactly 1 and whose
/// midpoint is itself a tight point (a bounded 1-face).
pub fn oracle_edges(d: &FiniteMetric, vertices: &[TightPoint]) -> Vec<(usize, usize)> {
    let n = d.n();
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in (i + 1)..vertices.len() {
            let mid = vertices[i].midpoint(&vertices[j], d);
            let pairs: Vec<(usize, usize)> = mid.tight_pairs().to_vec();
            if n - tight_rank(n, &pairs) == 1 && is_tight_point(mid.coords(), d) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// One face-verification record from `compare`.
#[derive(Debug, Clone)]
pub struct CellCheck {
    pub cell: usize,
    pub dim: usize,
    /// Dimension of the solution space of the cell's common tight rows.
    pub solution_dim: usize,
    /// Affine dimension spanned by the cell's vertices.
    pub affine_dim: usize,
    pub pass: bool,
}

/// Comparison report between the structural assembly and the oracle.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub vertices_match: bool,
    pub edges_match: bool,
    pub oracle_vertex_count: usize,
    pub structural_vertex_count: usize,
    pub oracle_edge_count: usize,
    pub structural_edge_count: usize,
    pub oracle_block_count: usize,
    pub structural_block_count: usize,
    pub cell_checks: Vec<CellCheck>,
    pub mismatches: Vec<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.vertices_match
            && self.edges_match
            && self.oracle_block_count == self.structural_block_count
            && self.cell_checks.iter().all(|c| c.pass)
    }
}

/// Verify a structural complex against the oracle: vertex and edge sets as
/// exact coordinate data, block counts via articulation points of the
/// oracle skeleton, and a face check for every structural cell. Mismatches
/// are reported, never thrown.
pub fn compare(
    complex: &PolytopalComplex,
    d: &FiniteMetric,
    opts: &OracleOptions,
) -> Result<OracleReport> {
    let n = d.n();
    let oracle = oracle_vertices(d, opts)?;
    let oracle_edge_list = oracle_edges(d, &oracle);
    let mut mismatches = Vec::new();

    // Vertex sets as exact coordinate vectors; both sides sorted.
    let oracle_coords: Vec<&[BigRational]> = oracle.iter().map(|v| v.coords()).collect();
    let structural_coords: Vec<&[BigRational]> =
        complex.vertices().iter().map(|v| v.coords()).collect();
    let vertices_match = oracle_coords == structural_coords;
    if !vertices_match {
        mismatches.push(format!(
            "vertex sets differ: oracle has {}, structural has {}",
            oracle_coords.len(),
            structural_coords.len()
        ));
        for c in &oracle_coords {
            if !structural_coords.contains(c) {
                mismatches.push(format!(
                    "oracle vertex missing from structural complex: {}",
                    render_coords(c)
                ));
            }
        }
        for c in &structural_coords {
            if !oracle_coords.contains(c) {
                mismatches.push(format!(
                    "structural vertex not found by oracle: {}",
                    render_coords(c)
                ));
            }
        }
    }

    // Edge sets. When the vertex lists agree the indices align (both are
    // coordinate-sorted).
    let mut structural_edges: Vec<(usize, usize)> = complex.edges().to_vec();
    structural_edges.sort_unstable();
    let mut oracle_edge_sorted = oracle_edge_list;
    oracle_edge_sorted.sort_unstable();
    let edges_match = vertices_match && structural_edges == oracle_edge_sorted;
    if vertices_match && !edges_match {
        for e in &oracle_edge_sorted {
            if !structural_edges.contains(e) {
                mismatches.push(format!("oracle edge missing from structural complex: {e:?}"));
            }
        }
        for e in &structural_edges {
            if !oracle_edge_sorted.contains(e) {
                mismatches.push(format!("structural edge not found by oracle: {e:?}"));
            }
        }
    }

    // Block counts via articulation points of the oracle 1-skeleton.
    let oracle_block_count = block_decomposition(oracle.len(), &oracle_edge_sorted)
        .blocks
        .len();
    let structural_block_count = complex.blocks().len();
    if oracle_block_count != structural_block_count {
        mismatches.push(format!(
            "block counts differ: oracle skeleton has {oracle_block_count}, structural has {structural_block_count}"
        ));
    }

    // Face verification per structural cell: the common tight rows must
    // leave at least dim degrees of freedom, and the cell's vertices must
    // affinely span exactly dim.
    let mut cell_checks = Vec::new();
    for (cid, cell) in complex.cells().iter().enumerate() {
        let mut common: Option<Vec<(usize, usize)>> = None;
        for &vid in &cell.vertices {
            let pairs = complex.vertices()[vid].tight_pairs();
            common = Some(match common {
                None => pairs.to_vec(),
                Some(prev) => prev.into_iter().filter(|p| pairs.contains(p)).collect(),
            });
        }
        let common = common.unwrap_or_default();
        let solution_dim = n - tight_rank(n, &common);
        let first = &complex.vertices()[cell.vertices[0]];
        let diffs: Vec<Vec<BigRational>> = cell.vertices[1..]
            .iter()
            .map(|&vid| {
                complex.vertices()[vid]
                    .coords()
                    .iter()
                    .zip(first.coords())
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        let affine_dim = rational_rank(&diffs);
        let pass = solution_dim >= cell.dim && affine_dim == cell.dim;
        if !pass {
            mismatches.push(format!(
                "cell {cid} (dim {}) fails the face check: solution dim {solution_dim}, affine dim {affine_dim}",
                cell.dim
            ));
        }
        cell_checks.push(CellCheck {
            cell: cid,
            dim: cell.dim,
            solution_dim,
            affine_dim,
            pass,
        });
    }

    Ok(OracleReport {
        vertices_match,
        edges_match,
        oracle_vertex_count: oracle.len(),
        structural_vertex_count: complex.vertex_count(),
        oracle_edge_count: oracle_edge_sorted.len(),
        structural_edge_count: structural_edges.len(),
        oracle_block_count,
        structural_block_count,
        cell_checks,
        mismatches,
    })
}

fn render_coords(coords: &[BigRational]) -> String {
    let parts: Vec<String> = coords.iter().map(crate::rational::format_rational).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{circular_triple, octahedral_system, quartet_tree};
    use crate::metric::synthesize;
    use crate::rational::int;
    use crate::splits::GroundSet;
    use crate::tightspan::assemble;

    /// Dead-simple reference enumeration for tiny instances: all size-n row
    /// subsets solved by rational elimination.
    fn naive_vertices(d: &FiniteMetric) -> Vec<Vec<BigRational>> {
        let n = d.n();
        let cs = ConstraintSystem::new(d);
        let mut found: BTreeSet<Vec<BigRational>> = BTreeSet::new();
        let mut subset: Vec<usize> = Vec::new();
        rec(n, &cs, d, 0, &mut subset, &mut found);
        return found.into_iter().collect();

        fn rec(
            n: usize,
            cs: &ConstraintSystem,
            d: &FiniteMetric,
            start: usize,
            subset: &mut Vec<usize>,
            found: &mut BTreeSet<Vec<BigRational>>,
        ) {
            if subset.len() == n {
                if let Some(f) = solve(n, cs, d, subset) {
                    if cs.satisfied_by(&f) {
                        found.insert(f);
                    }
                }
                return;
            }
            for row in start..cs.len() {
                subset.push(row);
                rec(n, cs, d, row + 1, subset, found);
                subset.pop();
            }
        }

        fn solve(
            n: usize,
            cs: &ConstraintSystem,
            d: &FiniteMetric,
            subset: &[usize],
        ) -> Option<Vec<BigRational>> {
            let mut m: Vec<Vec<BigRational>> = subset
                .iter()
                .map(|&row| {
                    let (x, y) = cs.pair(row);
                    let mut v = vec![BigRational::zero(); n + 1];
                    if x == y {
                        v[x] = int(2);
                    } else {
                        v[x] = int(1);
                        v[y] = int(1);
                    }
                    v[n] = d.get(x, y).clone();
                    v
                })
                .collect();
            let mut pivots = Vec::new();
            let mut rank = 0;
            for col in 0..n {
                let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
                    continue;
                };
                m.swap(rank, p);
                let pivot = m[rank][col].clone();
                for r in 0..m.len() {
                    if r != rank && !m[r][col].is_zero() {
                        let factor = &m[r][col] / &pivot;
                        for c in col..=n {
                            let sub = &factor * &m[rank][c];
                            m[r][c] -= sub;
                        }
                    }
                }
                pivots.push((rank, col));
                rank += 1;
            }
            if rank != n {
                return None;
            }
            let mut f = vec![BigRational::zero(); n];
            for (row, col) in pivots {
                f[col] = &m[row][n] / &m[row][col];
            }
            Some(f)
        }
    }

    #[test]
    fn two_point_metric_is_a_segment() {
        let ground = GroundSet::new(["a", "b"]).unwrap();
        let d = FiniteMetric::new(ground, vec![int(0), int(3), int(3), int(0)]).unwrap();
        let vs = oracle_vertices(&d, &OracleOptions::default()).unwrap();
        assert_eq!(vs.len(), 2);
        let coords: Vec<Vec<BigRational>> = vs.iter().map(|v| v.coords().to_vec()).collect();
        assert!(coords.contains(&vec![int(0), int(3)]));
        assert!(coords.contains(&vec![int(3), int(0)]));
        let es = oracle_edges(&d, &vs);
        assert_eq!(es, vec![(0, 1)]);
    }

    #[test]
    fn oracle_matches_naive_enumeration_on_small_metrics() {
        let ground = GroundSet::new(["a", "b", "c"]).unwrap();
        let d = FiniteMetric::new(
            ground,
            vec![
                int(0),
                int(2),
                int(3),
                int(2),
                int(0),
                int(4),
                int(3),
                int(4),
                int(0),
            ],
        )
        .unwrap();
        let fast: Vec<Vec<BigRational>> = oracle_vertices(&d, &OracleOptions::default())
            .unwrap()
            .iter()
            .map(|v| v.coords().to_vec())
            .collect();
        assert_eq!(fast, naive_vertices(&d));

        // A 4-point metric with two incompatible splits.
        let sys = {
            use crate::splits::{Split, WeightedSplitSystem};
            let ground = GroundSet::numbered(4).unwrap();
            let splits = vec![
                Split::from_indices(4, [0, 1]).unwrap(),
                Split::from_indices(4, [1, 2]).unwrap(),
                Split::from_indices(4, [1]).unwrap(),
                Split::from_indices(4, [3]).unwrap(),
            ];
            WeightedSplitSystem::with_unit_weights(ground, splits).unwrap()
        };
        let d = synthesize(&sys);
        let fast: Vec<Vec<BigRational>> = oracle_vertices(&d, &OracleOptions::default())
            .unwrap()
            .iter()
            .map(|v| v.coords().to_vec())
            .collect();
        assert_eq!(fast, naive_vertices(&d));
    }

    #[test]
    fn octahedral_metric_has_rhombic_dodecahedron_skeleton() {
        let d = synthesize(&octahedral_system());
        let vs = oracle_vertices(&d, &OracleOptions::default()).unwrap();
        assert_eq!(vs.len(), 14);
        let es = oracle_edges(&d, &vs);
        assert_eq!(es.len(), 24);
    }

    #[test]
    fn circular_triple_metric_has_cube_skeleton() {
        let d = synthesize(&circular_triple());
        let vs = oracle_vertices(&d, &OracleOptions::default()).unwrap();
        assert_eq!(vs.len(), 8);
        let es = oracle_edges(&d, &vs);
        assert_eq!(es.len(), 12);
    }

    #[test]
    fn tree_metric_vertex_count_is_node_count() {
        let d = synthesize(&quartet_tree());
        let vs = oracle_vertices(&d, &OracleOptions::default()).unwrap();
        assert_eq!(vs.len(), 6);
        let es = oracle_edges(&d, &vs);
        assert_eq!(es.len(), 5);
    }

    #[test]
    fn cap_is_enforced() {
        let d = synthesize(&octahedral_system());
        assert!(matches!(
            oracle_vertices(&d, &OracleOptions { cap: 4 }),
            Err(Error::OracleCapExceeded { cap: 4, actual: 6 })
        ));
    }

    #[test]
    fn compare_passes_on_fixtures() {
        for sys in [octahedral_system(), quartet_tree(), circular_triple()] {
            let assembly = assemble(&sys).unwrap();
            let d = synthesize(&sys);
            let report = compare(&assembly.complex, &d, &OracleOptions::default()).unwrap();
            assert!(report.passed(), "mismatches: {:?}", report.mismatches);
            assert!(report.vertices_match && report.edges_match);
            assert_eq!(report.oracle_block_count, report.structural_block_count);
        }
    }

    #[test]
    fn compare_flags_corrupted_complex() {
        let sys = octahedral_system();
        let assembly = assemble(&sys).unwrap();
        let mut complex = assembly.complex;
        complex.corrupt_drop_last_edge();
        let d = synthesize(&sys);
        let report = compare(&complex, &d, &OracleOptions::default()).unwrap();
        assert!(!report.passed());
        assert!(!report.edges_match);
        assert!(report.vertices_match);
        assert!(report
            .mismatches
            .iter()
            .any(|m| m.contains("oracle edge missing")));
    }

    #[test]
    fn ranks() {
        // A star plus a loop has full rank.
        let rows = vec![
            row_vector(4, 0, 1),
            row_vector(4, 0, 2),
            row_vector(4, 0, 3),
            row_vector(4, 0, 0),
        ];
        assert_eq!(integer_rank(&rows, 4), 4);
        // An even cycle is rank-deficient.
        let rows = vec![
            row_vector(4, 0, 1),
            row_vector(4, 1, 2),
            row_vector(4, 2, 3),
            row_vector(4, 3, 0),
        ];
        assert_eq!(integer_rank(&rows, 4), 3);
    }
}
