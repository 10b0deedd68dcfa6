//! The map from the Buneman complex into distance space: l1 geometry on
//! H(S, alpha), the kappa map, tight points of a metric, and the octahedral
//! collision witness.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::buneman::{delta, taxon_point, BunemanPoint};
use crate::metric::{synthesize, FiniteMetric};
use crate::splits::{ComponentClass, WeightedSplitSystem};
use crate::{Error, Result};

/// The l1 distance over the coordinates of H(S, alpha). Both sides of every
/// split contribute, hence the factor 2 on the stored canonical-side values.
pub fn d1(sys: &WeightedSplitSystem, p1: &BunemanPoint, p2: &BunemanPoint) -> BigRational {
    debug_assert_eq!(p1.len(), sys.len());
    debug_assert_eq!(p2.len(), sys.len());
    let mut total = BigRational::zero();
    for i in 0..sys.len() {
        let diff = p1.value(i) - p2.value(i);
        total += diff.abs();
    }
    total * BigRational::from_integer(2.into())
}

/// A function on the taxa together with its tight pairs: the pairs
/// `{x, y}` (x = y allowed) at which `f(x) + f(y) = d(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightPoint {
    f: Vec<BigRational>,
    tight: Vec<(usize, usize)>,
}

impl TightPoint {
    pub fn new(f: Vec<BigRational>, d: &FiniteMetric) -> Self {
        let n = f.len();
        let mut tight = Vec::new();
        for x in 0..n {
            for y in x..n {
                if &f[x] + &f[y] == *d.get(x, y) {
                    tight.push((x, y));
                }
            }
        }
        TightPoint { f, tight }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.f
    }

    pub fn value(&self, x: usize) -> &BigRational {
        &self.f[x]
    }

    pub fn tight_pairs(&self) -> &[(usize, usize)] {
        &self.tight
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn midpoint(&self, other: &TightPoint, d: &FiniteMetric) -> TightPoint {
        let two = BigRational::from_integer(2.into());
        let f = self
            .f
            .iter()
            .zip(&other.f)
            .map(|(a, b)| (a + b) / &two)
            .collect();
        TightPoint::new(f, d)
    }

    /// The sup distance between two functions on the taxa.
    pub fn d_inf(&self, other: &TightPoint) -> BigRational {
        self.f
            .iter()
            .zip(&other.f)
            .map(|(a, b)| (a - b).abs())
            .max()
            .expect("nonempty coordinate vectors")
    }
}

/// `f` is in the tight span of `d`: it satisfies all the defining
/// inequalities and is extremal, i.e. `f(x) = max_y (d(x,y) - f(y))` for
/// every `x`.
pub fn is_tight_point(f: &[BigRational], d: &FiniteMetric) -> bool {
    let n = d.n();
    if f.len() != n {
        return false;
    }
    for x in 0..n {
        for y in x..n {
            if &f[x] + &f[y] < *d.get(x, y) {
                return false;
            }
        }
    }
    for x in 0..n {
        let sup = (0..n)
            .map(|y| d.get(x, y) - &f[y])
            .max()
            .expect("nonempty ground set");
        if f[x] != sup {
            return false;
        }
    }
    true
}

/// Evaluator for the kappa map `phi -> (x -> d1(phi, phi_x))`. Construction
/// fails unless the system is weakly compatible (only then is the image the
/// tight span).
pub struct KappaMap {
    sys: WeightedSplitSystem,
    metric: FiniteMetric,
    taxon_points: Vec<BunemanPoint>,
}

impl KappaMap {
    pub fn new(sys: &WeightedSplitSystem) -> Result<Self> {
        sys.require_weakly_compatible()?;
        let taxon_points = (0..sys.n())
            .map(|x| taxon_point(sys, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(KappaMap {
            sys: sys.clone(),
            metric: synthesize(sys),
            taxon_points,
        })
    }

    pub fn metric(&self) -> &FiniteMetric {
        &self.metric
    }

    pub fn system(&self) -> &WeightedSplitSystem {
        &self.sys
    }

    pub fn apply(&self, p: &BunemanPoint) -> TightPoint {
        let f = self
            .taxon_points
            .iter()
            .map(|phi_x| d1(&self.sys, p, phi_x))
            .collect();
        TightPoint::new(f, &self.metric)
    }

    /// The distance row of taxon `x` (the image of `phi_x`).
    pub fn h(&self, x: usize) -> TightPoint {
        let f = (0..self.metric.n())
            .map(|y| self.metric.get(x, y).clone())
            .collect();
        TightPoint::new(f, &self.metric)
    }
}

/// Diagnostic for Theorem-`octahedral`: given two distinct points with equal
/// kappa images, the support of their midpoint is an octahedral split
/// system; returns its split indices.
pub fn octahedral_witness(
    kappa: &KappaMap,
    p1: &BunemanPoint,
    p2: &BunemanPoint,
) -> Result<Vec<usize>> {
    if delta(p1, p2) == 0 {
        return Err(Error::KappaImagesDiffer);
    }
    if kappa.apply(p1) != kappa.apply(p2) {
        return Err(Error::KappaImagesDiffer);
    }
    let sys = kappa.system();
    let mid = p1.midpoint(p2);
    // S(phi) = splits with both sides strictly positive at the midpoint.
    let support: Vec<usize> = (0..sys.len())
        .filter(|&i| {
            let v = mid.value(i);
            v.is_positive() && v < &crate::rational::half(sys.weight(i))
        })
        .collect();
    let entries = support
        .iter()
        .map(|&i| (*sys.split(i), sys.weight(i).clone()))
        .collect();
    let sub = WeightedSplitSystem::new(sys.ground().clone(), entries)?;
    let graph = sub.incompatibility_graph();
    if graph.components().len() != 1 {
        return Err(Error::NotOctahedral);
    }
    match sub.classify_component(&graph.components()[0])? {
        ComponentClass::Octahedral(_) => Ok(support),
        _ => Err(Error::NotOctahedral),
    }
}
