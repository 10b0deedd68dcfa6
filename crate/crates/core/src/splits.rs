//! Ground sets, splits, weighted split systems, and their compatibility
//! structure: the incompatibility graph, its connected components, and the
//! classification of pairwise-incompatible components into strictly circular
//! and octahedral systems.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use crate::rational::{format_rational, parse_rational};
use crate::{Error, Result};

/// An ordered set of distinct taxon labels. The ordering is fixed at
/// construction and drives every canonical form downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::GroundTooSmall(labels.len()));
        }
        if labels.len() > 64 {
            return Err(Error::GroundTooLarge(labels.len()));
        }
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(GroundSet { labels, index })
    }

    /// A ground set `1..=n` for quick construction in tests and fixtures.
    pub fn numbered(n: usize) -> Result<Self> {
        GroundSet::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownTaxon(label.to_string()))
    }

    pub fn full_set(&self) -> TaxonSet {
        TaxonSet::full(self.len())
    }
}

/// A subset of ground-set indices as a bitmask (ground sets are capped at 64
/// taxa, which is far beyond what exact enumeration can handle anyway).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TaxonSet(pub u64);

impl TaxonSet {
    pub const EMPTY: TaxonSet = TaxonSet(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 64);
        if n == 64 {
            TaxonSet(!0)
        } else {
            TaxonSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        TaxonSet(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut bits = 0u64;
        for i in iter {
            bits |= 1 << i;
        }
        TaxonSet(bits)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(&self, other: TaxonSet) -> TaxonSet {
        TaxonSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: TaxonSet) -> TaxonSet {
        TaxonSet(self.0 & other.0)
    }

    pub fn complement_in(&self, full: TaxonSet) -> TaxonSet {
        TaxonSet(full.0 & !self.0)
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset_of(&self, other: TaxonSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min_element(&self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Order by the sorted element sequence (lexicographic), i.e. by the
    /// smallest element on which the two sets differ.
    pub fn lex_cmp(&self, other: &TaxonSet) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let lowest = diff & diff.wrapping_neg();
        if self.0 & lowest != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

/// A bipartition of the ground set, stored in canonical form: `side` is the
/// part NOT containing taxon 0. Two splits are equal iff their canonical
/// sides are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Split {
    n: usize,
    side: TaxonSet,
}

impl Split {
    /// Canonicalizes on construction: if `side` contains taxon 0, its
    /// complement is stored instead.
    pub fn new(n: usize, side: TaxonSet) -> Result<Self> {
        let full = TaxonSet::full(n);
        let side = TaxonSet(side.0 & full.0);
        if side.is_empty() || side == full {
            return Err(Error::DegenerateSplit);
        }
        let side = if side.contains(0) {
            side.complement_in(full)
        } else {
            side
        };
        Ok(Split { n, side })
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, iter: I) -> Result<Self> {
        Split::new(n, TaxonSet::from_indices(iter))
    }

    pub fn ground_len(&self) -> usize {
        self.n
    }

    /// The canonical side (never contains taxon 0).
    pub fn side(&self) -> TaxonSet {
        self.side
    }

    pub fn other_side(&self) -> TaxonSet {
        self.side.complement_in(TaxonSet::full(self.n))
    }

    /// The side containing taxon `x`.
    pub fn side_containing(&self, x: usize) -> TaxonSet {
        if self.side.contains(x) {
            self.side
        } else {
            self.other_side()
        }
    }

    /// The side NOT containing taxon `x`.
    pub fn side_avoiding(&self, x: usize) -> TaxonSet {
        if self.side.contains(x) {
            self.other_side()
        } else {
            self.side
        }
    }

    pub fn separates(&self, x: usize, y: usize) -> bool {
        self.side.contains(x) != self.side.contains(y)
    }

    pub fn is_trivial(&self) -> bool {
        self.side.len() == 1 || self.side.len() == self.n - 1
    }

    fn cmp_canonical(&self, other: &Split) -> Ordering {
        self.side.lex_cmp(&other.side)
    }
}

impl PartialOrd for Split {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Split {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_canonical(other)
    }
}

/// `true` iff some side of `s1` united with some side of `s2` covers the
/// ground set. A split is compatible with itself; distinctness is the
/// caller's concern.
pub fn is_compatible(s1: &Split, s2: &Split) -> Result<bool> {
    if s1.n != s2.n {
        return Err(Error::GroundMismatch(s1.n, s2.n));
    }
    let full = TaxonSet::full(s1.n);
    let (a, ac) = (s1.side(), s1.other_side());
    let (b, bc) = (s2.side(), s2.other_side());
    Ok(a.union(b) == full || a.union(bc) == full || ac.union(b) == full || ac.union(bc) == full)
}

/// A witness quadruple for the failure of weak compatibility: three splits
/// and four taxa realizing the forbidden pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakCompatViolation {
    /// Indices of the three splits, in system order.
    pub splits: [usize; 3],
    /// Taxa `x0, x1, x2, x3` with `S_j(x_i) = S_j(x_0)` iff `i = j`.
    pub taxa: [usize; 4],
}

/// A split system with positive rational weights. Splits are stored sorted
/// by canonical side so that all downstream output is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSplitSystem {
    ground: GroundSet,
    splits: Vec<Split>,
    weights: Vec<BigRational>,
}

impl WeightedSplitSystem {
    pub fn new(ground: GroundSet, entries: Vec<(Split, BigRational)>) -> Result<Self> {
        let n = ground.len();
        let mut entries = entries;
        for (s, w) in &entries {
            if s.n != n {
                return Err(Error::GroundMismatch(s.n, n));
            }
            if !w.is_positive() {
                return Err(Error::NonPositiveWeight(format_rational(w)));
            }
        }
        entries.sort_by_key(|e| e.0);
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateSplit(side_to_string(
                    &ground,
                    pair[0].0.side(),
                )));
            }
        }
        let (splits, weights) = entries.into_iter().unzip();
        Ok(WeightedSplitSystem {
            ground,
            splits,
            weights,
        })
    }

    /// All splits with weight 1 — handy for fixtures.
    pub fn with_unit_weights(ground: GroundSet, splits: Vec<Split>) -> Result<Self> {
        let one = BigRational::from_integer(1.into());
        let entries = splits.into_iter().map(|s| (s, one.clone())).collect();
        WeightedSplitSystem::new(ground, entries)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn len(&self) -> usize {
        self.splits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splits.is_empty()
    }

    pub fn split(&self, i: usize) -> &Split {
        &self.splits[i]
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn weight(&self, i: usize) -> &BigRational {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn position_of(&self, s: &Split) -> Option<usize> {
        self.splits.binary_search(s).ok()
    }

    /// Weak compatibility via the triple-intersection characterization: for
    /// all splits `S1,S2,S3` and every taxon `x`, the intersection of the
    /// three sides avoiding `x` equals one of the three pairwise
    /// intersections. O(|S|^3 n); this is the default checker.
    pub fn is_weakly_compatible(&self) -> bool {
        let m = self.splits.len();
        let n = self.n();
        for i in 0..m {
            for j in (i + 1)..m {
                for k in (j + 1)..m {
                    for x in 0..n {
                        let f1 = self.splits[i].side_avoiding(x);
                        let f2 = self.splits[j].side_avoiding(x);
                        let f3 = self.splits[k].side_avoiding(x);
                        let triple = f1.intersection(f2).intersection(f3);
                        if triple != f1.intersection(f2)
                            && triple != f2.intersection(f3)
                            && triple != f1.intersection(f3)
                        {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Weak compatibility by direct scan for the forbidden quadruple
    /// pattern. O(|S|^3 n^4); serves as the independent oracle for
    /// `is_weakly_compatible` and produces a witness on failure.
    pub fn weak_compatibility_violation(&self) -> Option<WeakCompatViolation> {
        let m = self.splits.len();
        let n = self.n();
        let same = |s: &Split, a: usize, b: usize| s.side.contains(a) == s.side.contains(b);
        for i in 0..m {
            for j in (i + 1)..m {
                for k in (j + 1)..m {
                    let tri = [&self.splits[i], &self.splits[j], &self.splits[k]];
                    for x0 in 0..n {
                        for x1 in 0..n {
                            if !same(tri[0], x1, x0) || same(tri[1], x1, x0) || same(tri[2], x1, x0)
                            {
                                continue;
                            }
                            for x2 in 0..n {
                                if same(tri[0], x2, x0)
                                    || !same(tri[1], x2, x0)
                                    || same(tri[2], x2, x0)
                                {
                                    continue;
                                }
                                for x3 in 0..n {
                                    if !same(tri[0], x3, x0)
                                        && !same(tri[1], x3, x0)
                                        && same(tri[2], x3, x0)
                                    {
                                        return Some(WeakCompatViolation {
                                            splits: [i, j, k],
                                            taxa: [x0, x1, x2, x3],
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Errors with a witness when the system is not weakly compatible.
    pub fn require_weakly_compatible(&self) -> Result<()> {
        if self.is_weakly_compatible() {
            return Ok(());
        }
        let v = self
            .weak_compatibility_violation()
            .expect("checkers disagree on weak compatibility");
        Err(Error::NotWeaklyCompatible {
            splits: v.splits,
            taxa: v.taxa.map(|t| self.ground.label(t).to_string()),
        })
    }

    pub fn incompatibility_graph(&self) -> IncompatibilityGraph {
        let m = self.splits.len();
        let mut adjacency = vec![0u64; m];
        let mut edges = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                let compat = is_compatible(&self.splits[i], &self.splits[j])
                    .expect("same ground set by construction");
                if !compat {
                    adjacency[i] |= 1 << j;
                    adjacency[j] |= 1 << i;
                    edges.push((i, j));
                }
            }
        }
        // Connected components, listed by smallest member index.
        let mut component_of = vec![usize::MAX; m];
        let mut components = Vec::new();
        for start in 0..m {
            if component_of[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            component_of[start] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for w in TaxonSet(adjacency[v]).iter() {
                    if component_of[w] == usize::MAX {
                        component_of[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        IncompatibilityGraph {
            adjacency,
            edges,
            components,
            component_of,
        }
    }

    /// The partition of the ground set into the equivalence classes of
    /// "separated by no split in `comp`", ordered by smallest taxon.
    fn refinement_partition(&self, comp: &[usize]) -> Vec<TaxonSet> {
        let n = self.n();
        let mut classes: Vec<TaxonSet> = Vec::new();
        'outer: for x in 0..n {
            for class in &mut classes {
                let rep = class.min_element().unwrap();
                if comp.iter().all(|&s| !self.splits[s].separates(rep, x)) {
                    class.insert(x);
                    continue 'outer;
                }
            }
            classes.push(TaxonSet::singleton(x));
        }
        classes
    }

    /// Classify one connected component of the incompatibility graph.
    ///
    /// Requires the whole system to be weakly compatible; for such input a
    /// pairwise-incompatible component is guaranteed to match the strictly
    /// circular or octahedral pattern.
    ///
    /// Note the single-split convention: the literature counts a 1-element
    /// split system as incompatible, but it is reported here as `Singleton`
    /// rather than as a degenerate circular system.
    pub fn classify_component(&self, comp: &[usize]) -> Result<ComponentClass> {
        self.require_weakly_compatible()?;
        if comp.len() == 1 {
            return Ok(ComponentClass::Singleton);
        }
        let pairwise_incompatible = comp.iter().enumerate().all(|(a, &i)| {
            comp[a + 1..]
                .iter()
                .all(|&j| !is_compatible(&self.splits[i], &self.splits[j]).unwrap())
        });
        if !pairwise_incompatible {
            return Ok(ComponentClass::Consistent);
        }
        let k = comp.len();
        let parts = self.refinement_partition(comp);
        if parts.len() == 2 * k {
            if let Some((parts, split_order)) = self.match_circular(comp, &parts) {
                return Ok(ComponentClass::StrictlyCircular { parts, split_order });
            }
        }
        if k == 4 && parts.len() == 6 {
            if let Some(oct) = self.match_octahedral(comp, &parts) {
                return Ok(ComponentClass::Octahedral(oct));
            }
        }
        Err(Error::UnclassifiableComponent(
            comp.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ))
    }

    /// Search for a cyclic ordering `X_1..X_{2k}` of the refinement parts
    /// under which every split of the component is an arc of k consecutive
    /// parts. Consecutive parts differ in the side of exactly one split, so
    /// the ordering is recovered by walking the unit-difference cycle from
    /// an anchor instead of trying all (2k)! relabelings.
    fn match_circular(&self, comp: &[usize], parts: &[TaxonSet]) -> Option<(Vec<TaxonSet>, Vec<usize>)> {
        let k = comp.len();
        let p = parts.len();
        debug_assert_eq!(p, 2 * k);
        // Signature of a part: for each component split, whether the part
        // lies on the canonical side.
        let sig = |part: &TaxonSet| -> u64 {
            let rep = part.min_element().unwrap();
            let mut bits = 0u64;
            for (pos, &s) in comp.iter().enumerate() {
                if self.splits[s].side().contains(rep) {
                    bits |= 1 << pos;
                }
            }
            bits
        };
        let sigs: Vec<u64> = parts.iter().map(sig).collect();
        // Unit-difference graph must be a single 2k-cycle.
        let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); p];
        for i in 0..p {
            for j in (i + 1)..p {
                if (sigs[i] ^ sigs[j]).count_ones() == 1 {
                    neighbors[i].push(j);
                    neighbors[j].push(i);
                }
            }
        }
        if neighbors.iter().any(|ns| ns.len() != 2) {
            return None;
        }
        // Anchor at the part holding the smallest taxon, orient toward the
        // neighbor with the smaller minimum taxon (deterministic).
        let anchor = (0..p)
            .min_by_key(|&i| parts[i].min_element().unwrap())
            .unwrap();
        let first = *neighbors[anchor]
            .iter()
            .min_by_key(|&&i| parts[i].min_element().unwrap())
            .unwrap();
        let mut order = vec![anchor, first];
        while order.len() < p {
            let last = *order.last().unwrap();
            let prev = order[order.len() - 2];
            let next = *neighbors[last].iter().find(|&&x| x != prev)?;
            if order.contains(&next) {
                return None;
            }
            order.push(next);
        }
        // Verify closure of the cycle.
        if !neighbors[*order.last().unwrap()].contains(&anchor) {
            return None;
        }
        let ordered: Vec<TaxonSet> = order.iter().map(|&i| parts[i]).collect();
        // Every split must be an arc of exactly k consecutive parts; record
        // for each start position 0..k-1 which split starts there.
        let mut split_order = vec![usize::MAX; k];
        for &s in comp {
            let on_side: Vec<bool> = ordered
                .iter()
                .map(|part| self.splits[s].side().contains(part.min_element().unwrap()))
                .collect();
            let start = arc_start(&on_side, k)?;
            let pos = start % k;
            if split_order[pos] != usize::MAX {
                return None;
            }
            split_order[pos] = s;
        }
        Some((ordered, split_order))
    }

    fn match_octahedral(&self, comp: &[usize], parts: &[TaxonSet]) -> Option<OctahedralPattern> {
        debug_assert_eq!(comp.len(), 4);
        debug_assert_eq!(parts.len(), 6);
        let side_of = |s: usize, part: &TaxonSet| -> TaxonSet {
            self.splits[s].side_containing(part.min_element().unwrap())
        };
        let union3 = |a: &TaxonSet, b: &TaxonSet, c: &TaxonSet| a.union(*b).union(*c);
        // Try each split in the role of S4 = X1 u X3 u X5 | X2 u X4 u X6,
        // then each consistent placement of the parts. The parts on one side
        // of S4 become the odd-indexed X's.
        for (s4_pos, &s4) in comp.iter().enumerate() {
            let left: Vec<usize> = (0..6)
                .filter(|&i| side_of(s4, &parts[i]) == self.splits[s4].side())
                .collect();
            let right: Vec<usize> = (0..6).filter(|i| !left.contains(i)).collect();
            if left.len() != 3 || right.len() != 3 {
                continue;
            }
            let rest: Vec<usize> = comp
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != s4_pos)
                .map(|(_, &s)| s)
                .collect();
            // X1, X3, X5 from `left` (3! placements), X2, X4, X6 from
            // `right` (3! placements); anchoring X1 to the lexicographically
            // first choice that works keeps the output deterministic.
            for odd in permutations3(&left) {
                for even in permutations3(&right) {
                    let xs = [odd[0], even[0], odd[1], even[1], odd[2], even[2]];
                    let x = |i: usize| parts[xs[(i - 1) % 6]];
                    // Required sides: S_i = X_i u X_{i+1} u X_{i+2} for i=1..3.
                    let mut assigned = [usize::MAX; 3];
                    let mut used = [false; 3];
                    let mut ok = true;
                    for i in 1..=3usize {
                        let want = union3(&x(i), &x(i + 1), &x(i + 2));
                        let mut found = false;
                        for (rp, &s) in rest.iter().enumerate() {
                            if used[rp] {
                                continue;
                            }
                            if self.splits[s].side() == want || self.splits[s].other_side() == want
                            {
                                assigned[i - 1] = s;
                                used[rp] = true;
                                found = true;
                                break;
                            }
                        }
                        if !found {
                            ok = false;
                            break;
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let want4 = union3(&x(1), &x(3), &x(5));
                    if self.splits[s4].side() != want4 && self.splits[s4].other_side() != want4 {
                        continue;
                    }
                    let a_sides = [
                        union3(&x(1), &x(2), &x(3)),
                        union3(&x(2), &x(3), &x(4)),
                        union3(&x(3), &x(4), &x(5)),
                        want4,
                    ];
                    return Some(OctahedralPattern {
                        parts: [x(1), x(2), x(3), x(4), x(5), x(6)],
                        split_order: [assigned[0], assigned[1], assigned[2], s4],
                        a_sides,
                    });
                }
            }
        }
        None
    }

    /// The components of the incompatibility graph that are octahedral. In a
    /// weakly compatible system every octahedral subsystem is a full
    /// component, so this lists exactly the octahedral subsystems.
    pub fn oct_subsystems(&self) -> Result<Vec<Vec<usize>>> {
        let graph = self.incompatibility_graph();
        let mut out = Vec::new();
        for comp in graph.components() {
            if matches!(self.classify_component(comp)?, ComponentClass::Octahedral(_)) {
                out.push(comp.clone());
            }
        }
        Ok(out)
    }

    pub fn side_labels(&self, side: TaxonSet) -> String {
        side_to_string(&self.ground, side)
    }
}

fn side_to_string(ground: &GroundSet, side: TaxonSet) -> String {
    side.iter()
        .map(|i| ground.label(i).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// If `on_side` (cyclic) consists of exactly one run of `k` consecutive
/// `true`s or `false`s matching an arc, return the start index of the `true`
/// arc.
fn arc_start(on_side: &[bool], k: usize) -> Option<usize> {
    let p = on_side.len();
    if on_side.iter().filter(|&&b| b).count() != k {
        return None;
    }
    let start = (0..p).find(|&i| on_side[i] && !on_side[(i + p - 1) % p])?;
    if (0..k).all(|j| on_side[(start + j) % p]) {
        Some(start)
    } else {
        None
    }
}

fn permutations3(items: &[usize]) -> Vec<[usize; 3]> {
    let (a, b, c) = (items[0], items[1], items[2]);
    vec![
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ]
}

/// The graph on split indices whose edges are the incompatible pairs,
/// together with its connected components.
#[derive(Debug, Clone)]
pub struct IncompatibilityGraph {
    adjacency: Vec<u64>,
    edges: Vec<(usize, usize)>,
    components: Vec<Vec<usize>>,
    component_of: Vec<usize>,
}

impl IncompatibilityGraph {
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, split: usize) -> usize {
        self.component_of[split]
    }

    pub fn are_incompatible(&self, i: usize, j: usize) -> bool {
        self.adjacency[i] >> j & 1 == 1
    }

    pub fn component_mask(&self, id: usize) -> u64 {
        self.components[id].iter().fold(0u64, |m, &s| m | 1 << s)
    }
}

/// How a connected component of the incompatibility graph sits inside the
/// classification of weakly compatible systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentClass {
    /// A single split (the 1-element system, conventionally incompatible).
    Singleton,
    /// Pairwise incompatible, realized as k arcs on a cyclic partition into
    /// 2k parts. `split_order[i]` is the split whose arc starts at part i.
    StrictlyCircular {
        parts: Vec<TaxonSet>,
        split_order: Vec<usize>,
    },
    /// Four pairwise-incompatible splits over a 6-part partition in the
    /// octahedron pattern.
    Octahedral(OctahedralPattern),
    /// Everything else a weakly compatible component can be.
    Consistent,
}

impl ComponentClass {
    pub fn name(&self) -> &'static str {
        match self {
            ComponentClass::Singleton => "singleton",
            ComponentClass::StrictlyCircular { .. } => "strictly circular",
            ComponentClass::Octahedral(_) => "octahedral",
            ComponentClass::Consistent => "consistent",
        }
    }
}

/// A relabeling witnessing the octahedral pattern: parts `X_1..X_6`,
/// `split_order[i]` playing the role of `S_{i+1}`, and `a_sides[i]` the side
/// of that split equal to the pattern's listed union of parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OctahedralPattern {
    pub parts: [TaxonSet; 6],
    pub split_order: [usize; 4],
    pub a_sides: [TaxonSet; 4],
}

impl fmt::Display for WeightedSplitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "taxa: {}", self.ground.labels().join(" "))?;
        for (s, w) in self.splits.iter().zip(&self.weights) {
            writeln!(
                f,
                "{} : {}",
                format_rational(w),
                side_to_string(&self.ground, s.side())
            )?;
        }
        Ok(())
    }
}

/// Parse the splits text format:
///
/// ```text
/// # comment
/// taxa: a b c d e f
/// 1 : a, b, c
/// 1/2 : b, c, d
/// ```
///
/// The stored side is canonicalized on parse.
pub fn parse_splits(text: &str) -> Result<WeightedSplitSystem> {
    let mut ground: Option<GroundSet> = None;
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("taxa:") {
            if ground.is_some() {
                return Err(Error::Parse {
                    line,
                    msg: "duplicate `taxa:` header".into(),
                });
            }
            let labels: Vec<&str> = rest.split_whitespace().collect();
            ground = Some(GroundSet::new(labels).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?);
            continue;
        }
        let ground = ground.as_ref().ok_or_else(|| Error::Parse {
            line,
            msg: "expected `taxa:` header before split lines".into(),
        })?;
        let (weight_str, side_str) = content.split_once(':').ok_or_else(|| Error::Parse {
            line,
            msg: "expected `<weight> : <side>`".into(),
        })?;
        let weight = parse_rational(weight_str).map_err(|msg| Error::Parse { line, msg })?;
        let mut side = TaxonSet::EMPTY;
        for label in side_str.split(',') {
            let label = label.trim();
            if label.is_empty() {
                return Err(Error::Parse {
                    line,
                    msg: "empty taxon label in split side".into(),
                });
            }
            let idx = ground.index_of(label).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
            side.insert(idx);
        }
        let split = Split::new(ground.len(), side).map_err(|e| Error::Parse {
            line,
            msg: e.to_string(),
        })?;
        entries.push((split, weight));
    }
    let ground = ground.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing `taxa:` header".into(),
    })?;
    WeightedSplitSystem::new(ground, entries)
}
