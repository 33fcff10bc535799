use thiserror::Error;

use crate::space::Triple;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid distance {value:?}: {reason}")]
    BadNumeral { value: String, reason: String },

    #[error("distance table is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),

    #[error("zero distance between distinct points ({0}, {1})")]
    ZeroOffDiagonal(usize, usize),

    #[error("nonzero diagonal entry at point {0}")]
    NonzeroDiagonal(usize),

    #[error("distance table has {rows} rows, {cols} columns in row {row}, and {points} points")]
    SizeMismatch {
        points: usize,
        rows: usize,
        row: usize,
        cols: usize,
    },

    #[error("a space needs at least one point")]
    EmptySpace,

    #[error("duplicate point name {0:?}")]
    DuplicatePoint(String),

    #[error("unknown point {0}")]
    UnknownPoint(String),

    #[error("empty point subset")]
    EmptySubset,

    #[error("space is not ultrametric: strong triangle inequality fails on {0:?}")]
    NotUltrametric(Triple),

    #[error("table is not a metric: triangle inequality fails on {0:?}")]
    NotMetric(Triple),

    #[error("level {0} is not a positive spectrum value")]
    NotInSpectrum(String),

    #[error("operation requires at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("space has {got} points, the exhaustive search cap is {cap}")]
    OverCap { got: usize, cap: usize },

    #[error("diametrical graph is not complete multipartite")]
    NotMultipartite,

    #[error("invalid representing tree at node {node}: {reason}")]
    InvalidTree { node: usize, reason: String },

    #[error("label pool has {available} labels but the tree needs depth {needed}")]
    ShallowPool { available: usize, needed: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("not an isometry: {0}")]
    NotIsometry(String),

    #[error("point set {0:?} is not a ball")]
    NotABall(Vec<usize>),

    #[error("balls {0:?} and {1:?} overlap")]
    OverlappingBalls(Vec<usize>, Vec<usize>),

    #[error("space is not maximally rigid")]
    NotMaxRigid,

    #[error("spaces are not weakly similar")]
    NotWeaklySimilar,

    #[error("ball counts differ: {0} vs {1}")]
    BallCountMismatch(usize, usize),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
