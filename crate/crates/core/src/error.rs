use thiserror::Error;

use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground-set mismatch: {left} vs {right}")]
    GroundMismatch { left: usize, right: usize },

    #[error("ground set of size {0} exceeds the 64-element cap")]
    GroundTooLarge(usize),

    #[error("degree exceeds ground set: degree {degree} on {ground_size} elements")]
    DegreeExceedsGround { degree: usize, ground_size: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("set {set:?} has cardinality {found}, expected {expected}")]
    WrongCardinality { set: Subset, expected: usize, found: usize },

    #[error("set {set:?} is not contained in the ground set of size {ground_size}")]
    OutOfGround { set: Subset, ground_size: usize },

    #[error("zero function has every cofactor")]
    ZeroFunctionCofactor,

    #[error("zero has no block")]
    ZeroHasNoBlock,

    #[error("no transversal exists: the family contains the empty set")]
    NoTransversal,

    #[error("degenerate degree: {0}")]
    DegenerateDegree(String),

    #[error("not a zero-divisor pair: fg is nonzero at {0:?}")]
    NotZeroDivisorPair(Subset),

    #[error("expected a function of degree 1, found degree {0}")]
    NotDegreeOne(usize),

    #[error("base too large for exhaustive canonicalization: {0} > 8")]
    BaseTooLarge(usize),

    #[error("invalid relational structure: {0}")]
    InvalidStructure(String),

    #[error("type admits disjoint embedding; f² ≠ 0 not guaranteed")]
    DisjointEmbedding,

    #[error("profile inequality violated at n={n}, m={m}: {detail}")]
    ProfileInequality { n: usize, m: usize, detail: String },

    #[error("shuffle positions have size {found}, expected {expected}")]
    ShufflePositions { expected: usize, found: usize },

    #[error("predicate is not closed under subwords: holds on {word} but not on {subword}")]
    NotSubwordClosed { word: String, subword: String },

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
