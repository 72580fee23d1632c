use thiserror::Error;

use crate::verdict::Verdict;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by the zero field")]
    DivisionByZero,
    #[error("mismatched variable contexts")]
    ContextMismatch,
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("pole at evaluation point")]
    PoleAtPoint,
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("tensors live on different charts")]
    ChartMismatch,
    #[error("exterior derivative of a top-degree form")]
    TopDegree,
    #[error("interior product with a degree-0 form")]
    DegreeZero,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degenerate {0}: determinant vanishes identically")]
    Degenerate(&'static str),
    #[error("frame is rank-deficient: rank {rank} for {len} sections")]
    RankDeficientFrame { rank: usize, len: usize },
    #[error("generalized almost complex structures need an even-dimensional chart (got {0})")]
    OddDimension(usize),
    #[error("almost contact structures need an odd-dimensional chart (got {0})")]
    EvenDimension(usize),
    #[error("B-field is not closed")]
    NonClosedB,
    #[error("incompatible data: {0}")]
    Incompatible(String),
    #[error("no polynomial eigenframe of generic full rank: {0}")]
    NoEigenframe(String),
    #[error("linear system has no unique solution: {0}")]
    Unsolvable(String),
    #[error("operation needs a cylinder chart")]
    NotCylinder,
    #[error("structure is not normal")]
    NotNormal(Box<Verdict>),
    #[error("structure is degenerate")]
    NotNondegenerate,
    #[error("structures do not share one metric")]
    MetricMismatch,
    #[error("invalid structure")]
    Invalid(Box<Verdict>),
}

pub type Result<T> = std::result::Result<T, Error>;
