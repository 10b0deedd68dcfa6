//! Finite metrics, split pseudometrics, synthesis of a metric from a
//! weighted split system, and the split decomposition (isolation indices)
//! that recovers the system from the metric.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::rational::{format_rational, half, parse_rational};
use crate::splits::{GroundSet, Split, TaxonSet, WeightedSplitSystem};
use crate::{Error, Result};

/// A symmetric matrix of exact nonnegative rationals with zero diagonal
/// satisfying the triangle inequality. Distinct points at distance zero are
/// allowed (pseudometrics pass validation); `is_proper` tells them apart.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetric {
    ground: GroundSet,
    d: Vec<BigRational>,
}

impl FiniteMetric {
    pub fn new(ground: GroundSet, entries: Vec<BigRational>) -> Result<Self> {
        let n = ground.len();
        assert_eq!(entries.len(), n * n, "distance matrix must be n x n");
        let at = |x: usize, y: usize| &entries[x * n + y];
        for x in 0..n {
            if !at(x, x).is_zero() {
                return Err(Error::NonzeroDiagonal(ground.label(x).to_string()));
            }
            for y in (x + 1)..n {
                if at(x, y) != at(y, x) {
                    return Err(Error::AsymmetricMatrix(
                        ground.label(x).to_string(),
                        ground.label(y).to_string(),
                    ));
                }
                if at(x, y).is_negative() {
                    return Err(Error::NegativeDistance(
                        ground.label(x).to_string(),
                        ground.label(y).to_string(),
                    ));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if at(x, z) > &(at(x, y) + at(y, z)) {
                        return Err(Error::TriangleViolation(
                            ground.label(x).to_string(),
                            ground.label(y).to_string(),
                            ground.label(z).to_string(),
                        ));
                    }
                }
            }
        }
        Ok(FiniteMetric { ground, d: entries })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn get(&self, x: usize, y: usize) -> &BigRational {
        &self.d[x * self.n() + y]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.d
    }

    /// True iff all off-diagonal distances are strictly positive, i.e. the
    /// pseudometric is an honest metric.
    pub fn is_proper(&self) -> bool {
        let n = self.n();
        (0..n).all(|x| ((x + 1)..n).all(|y| self.get(x, y).is_positive()))
    }

    /// The largest distance from `x` to anything.
    pub fn eccentricity(&self, x: usize) -> BigRational {
        (0..self.n())
            .map(|y| self.get(x, y))
            .max()
            .expect("nonempty ground set")
            .clone()
    }
}

impl fmt::Display for FiniteMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "taxa: {}", self.ground.labels().join(" "))?;
        let n = self.n();
        for x in 0..n {
            let row: Vec<String> = (0..n).map(|y| format_rational(self.get(x, y))).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// The split pseudometric: 1 when the split separates the pair, else 0.
pub fn split_metric(ground: &GroundSet, s: &Split) -> FiniteMetric {
    let n = ground.len();
    let one = BigRational::from_integer(1.into());
    let mut d = vec![BigRational::zero(); n * n];
    for x in 0..n {
        for y in 0..n {
            if s.separates(x, y) {
                d[x * n + y] = one.clone();
            }
        }
    }
    FiniteMetric {
        ground: ground.clone(),
        d,
    }
}

/// The metric `sum over S of alpha(S) * delta_S`. This is a pseudometric
/// when some pair of taxa is separated by no split; check `is_proper` on the
/// result if that matters.
pub fn synthesize(sys: &WeightedSplitSystem) -> FiniteMetric {
    let n = sys.n();
    let mut d = vec![BigRational::zero(); n * n];
    for (s, w) in sys.splits().iter().zip(sys.weights()) {
        for x in 0..n {
            for y in 0..n {
                if s.separates(x, y) {
                    d[x * n + y] += w;
                }
            }
        }
    }
    FiniteMetric {
        ground: sys.ground().clone(),
        d,
    }
}

/// The isolation index of a split `A|B` in `d`:
///
/// ```text
/// alpha_d(S) = 1/2 min over a,a' in A, b,b' in B of
///     max( d(a,b)+d(a',b'), d(a,b')+d(a',b), d(a,a')+d(b,b') )
///     - d(a,a') - d(b,b')
/// ```
///
/// Degenerate quadruples (a = a', b = b') participate in the minimum, per
/// the usual convention.
pub fn isolation_index(d: &FiniteMetric, s: &Split) -> BigRational {
    let side_a: Vec<usize> = s.side().iter().collect();
    let side_b: Vec<usize> = s.other_side().iter().collect();
    let mut best: Option<BigRational> = None;
    for (ai, &a) in side_a.iter().enumerate() {
        for &a2 in &side_a[ai..] {
            for (bi, &b) in side_b.iter().enumerate() {
                for &b2 in &side_b[bi..] {
                    let c1 = d.get(a, b) + d.get(a2, b2);
                    let c2 = d.get(a, b2) + d.get(a2, b);
                    let c3 = d.get(a, a2) + d.get(b, b2);
                    let value = c1.max(c2).max(c3.clone()) - c3;
                    if best.as_ref().map_or(true, |m| &value < m) {
                        best = Some(value);
                    }
                }
            }
        }
    }
    half(&best.expect("split sides are nonempty"))
}

/// The outcome of the split decomposition of a metric.
#[derive(Debug, Clone)]
pub struct DecompositionResult {
    /// All splits with positive isolation index, weighted by it.
    pub system: WeightedSplitSystem,
    /// `d - synthesize(system)`, entrywise exact (the split-prime part).
    pub residual: Vec<BigRational>,
    /// True iff the residual is identically zero.
    pub totally_split_decomposable: bool,
    /// Weak compatibility of the extracted system, checked (only meaningful
    /// to assert when `totally_split_decomposable`; it is checked always).
    pub system_weakly_compatible: bool,
}

/// Split decomposition by exhaustive isolation-index computation over all
/// `2^(n-1) - 1` bipartitions. Deliberately desk-scale: inputs with more
/// than 16 taxa are refused. The per-split scans run in parallel; the
/// canonical split order is restored when the system is built.
pub fn decompose(d: &FiniteMetric) -> Result<DecompositionResult> {
    let n = d.n();
    if n > 16 {
        return Err(Error::TooManyTaxaForDecompose(n));
    }
    // Canonical sides are exactly the nonempty subsets avoiding taxon 0.
    let entries: Vec<(Split, BigRational)> = (1u64..(1 << (n - 1)))
        .into_par_iter()
        .filter_map(|bits| {
            let side = TaxonSet(bits << 1);
            let split = Split::new(n, side).expect("proper subset by construction");
            let alpha = isolation_index(d, &split);
            alpha.is_positive().then_some((split, alpha))
        })
        .collect();
    let system = WeightedSplitSystem::new(d.ground().clone(), entries)?;
    let synthesized = synthesize(&system);
    let residual: Vec<BigRational> = d
        .entries()
        .iter()
        .zip(synthesized.entries())
        .map(|(a, b)| a - b)
        .collect();
    let totally = residual.iter().all(|r| r.is_zero());
    let weakly = system.is_weakly_compatible();
    Ok(DecompositionResult {
        system,
        residual,
        totally_split_decomposable: totally,
        system_weakly_compatible: weakly,
    })
}

/// Parse the distance-matrix format: a `taxa:` header, then n full rows of n
/// entries (decimal or `p/q`). Symmetry and the metric axioms are validated.
pub fn parse_matrix(text: &str) -> Result<FiniteMetric> {
    let mut ground: Option<GroundSet> = None;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut row_lines: Vec<usize> = Vec::new();
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
            msg: "expected `taxa:` header before matrix rows".into(),
        })?;
        let row: Vec<BigRational> = content
            .split_whitespace()
            .map(parse_rational)
            .collect::<std::result::Result<_, _>>()
            .map_err(|msg| Error::Parse { line, msg })?;
        if row.len() != ground.len() {
            return Err(Error::Parse {
                line,
                msg: format!("expected {} entries, got {}", ground.len(), row.len()),
            });
        }
        rows.push(row);
        row_lines.push(line);
    }
    let ground = ground.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing `taxa:` header".into(),
    })?;
    if rows.len() != ground.len() {
        return Err(Error::Parse {
            line: row_lines.last().copied().unwrap_or(0),
            msg: format!("expected {} matrix rows, got {}", ground.len(), rows.len()),
        });
    }
    FiniteMetric::new(ground, rows.into_iter().flatten().collect())
}
