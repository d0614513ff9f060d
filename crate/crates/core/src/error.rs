use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("{rows}x{cols} matrix needs {} entries, got {len}", rows * cols)]
    EntryCount {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("cannot {op} {left:?} with {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("basis has rank {rank} but {cols} columns")]
    RankDeficient { rank: usize, cols: usize },
    #[error("invariant factor {0} is below 2")]
    BadInvariantFactor(BigInt),
    #[error("invariant factors do not form a divisibility chain")]
    DivisibilityChain,
    #[error("group action is not a homomorphism")]
    NotAHomomorphism,
    #[error("sublattice is not stable under the action")]
    NotStable,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BrauerError {
    #[error("fraction {0:?} is not a reduced num/den with 0 <= num < den")]
    BadFraction(String),
    #[error("place labels must be unique, non-empty and free of ':' (got {0:?})")]
    BadPlaceLabel(String),
    #[error("the model needs at least one place")]
    NoPlaces,
    #[error("unknown place {0:?}")]
    UnknownPlace(String),
    #[error("degree-{degree} algebra cannot have component degrees {components:?}")]
    BadComponents { degree: u32, components: Vec<u32> },
    #[error("component {component}: local degrees {local:?} at {place} do not sum to {degree}")]
    BadSplitting {
        component: usize,
        place: String,
        local: Vec<u32>,
        degree: u32,
    },
    #[error("component {component} has no splitting data at {place}")]
    MissingSplitting { component: usize, place: String },
    #[error("invariants of component {component} sum to {sum}, not 0")]
    Reciprocity { component: usize, sum: String },
    #[error("{0}")]
    IncompatibleTower(String),
    #[error("place permutation is invalid: {0}")]
    BadPermutation(String),
    #[error("automorphism {0} is not among the declared L-automorphisms")]
    UnknownAutomorphism(usize),
    #[error("denominator bound must be 1, 2, 3 or 6 (got {0})")]
    BadBound(u32),
    #[error("algebra degree {degree} is not a multiple of its index {index}")]
    DegreeIndex { degree: u64, index: u64 },
    #[error("surface data is not valid: {0}")]
    InvalidPair(String),
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Brauer(#[from] BrauerError),
    #[error("{0}")]
    Invalid(String),
}
