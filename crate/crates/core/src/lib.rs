//! Exact computation of the tight span of a totally split-decomposable metric.
//!
//! The pipeline goes: a finite metric is decomposed into a weighted split
//! system (split decomposition), the Buneman complex of that system is built,
//! and the tight span is assembled block by block from the complex. Blocks
//! whose splits form an octahedral system become rhombic dodecahedra; all
//! other blocks are carried over isomorphically by the `kappa` map. An
//! independent polyhedral oracle enumerates the tight-span vertices and edges
//! straight from the defining inequalities so the assembly can be
//! cross-checked on small instances.
//!
//! All arithmetic is exact (arbitrary-precision rationals); no tolerances
//! appear anywhere.

pub mod buneman;
pub mod export;
pub mod graph;
pub mod kappa;
pub mod metric;
pub mod oracle;
pub mod rational;
pub mod splits;
pub mod tightspan;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set must have at least 2 taxa, got {0}")]
    GroundTooSmall(usize),
    #[error("ground set supports at most 64 taxa, got {0}")]
    GroundTooLarge(usize),
    #[error("duplicate taxon label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown taxon `{0}`")]
    UnknownTaxon(String),
    #[error("split side must be a nonempty proper subset of the ground set")]
    DegenerateSplit,
    #[error("splits live on different ground sets ({0} vs {1} taxa)")]
    GroundMismatch(usize, usize),
    #[error("duplicate split in system: {0}")]
    DuplicateSplit(String),
    #[error("split weight must be positive, got {0}")]
    NonPositiveWeight(String),
    #[error("split system is not weakly compatible: splits {splits:?} and taxa {taxa:?} violate the forbidden-quadruple condition")]
    NotWeaklyCompatible { splits: [usize; 3], taxa: [String; 4] },
    #[error("component {{{0}}} is pairwise incompatible but matches neither the circular nor the octahedral pattern")]
    UnclassifiableComponent(String),
    #[error("matrix is not symmetric at pair ({0}, {1})")]
    AsymmetricMatrix(String, String),
    #[error("nonzero diagonal entry at taxon {0}")]
    NonzeroDiagonal(String),
    #[error("negative distance at pair ({0}, {1})")]
    NegativeDistance(String, String),
    #[error("triangle inequality violated: d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(String, String, String),
    #[error("split enumeration limited to 16 taxa, got {0}")]
    TooManyTaxaForDecompose(usize),
    #[error("vertex enumeration limited to {limit} splits, system has {actual}")]
    TooManySplits { limit: usize, actual: usize },
    #[error("oracle limited to {cap} taxa, got {actual} (raise the cap explicitly to override)")]
    OracleCapExceeded { cap: usize, actual: usize },
    #[error("oracle input exceeds exact integer working range")]
    OracleOverflow,
    #[error("empty split system has no tight-span complex")]
    EmptySystem,
    #[error("component is not octahedral")]
    NotOctahedral,
    #[error("expected two points with equal kappa images")]
    KappaImagesDiffer,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
