use thiserror::Error;

use crate::classify::Label;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial is not homogeneous of degree {degree} in the piece variables: {poly}")]
    NonHomogeneous { degree: u32, poly: String },

    #[error("degree pieces live in different spaces (degrees {left} and {right})")]
    DegreeMismatch { left: u32, right: u32 },

    #[error("Pfaffian of an odd-size ({0}x{0}) matrix")]
    OddSize(usize),

    #[error("matrix has nonzero Pfaffian {0}")]
    PfaffianNonZero(String),

    #[error("colon iteration still growing after {cap} steps (dimensions {dims:?})")]
    NonStabilizing { cap: usize, dims: Vec<usize> },

    #[error("entry span has dimension {0}, expected 4")]
    WrongSpanDimension(usize),

    #[error("cannot truncate a jet of order {order} to order {requested}")]
    OrderTooLarge { order: usize, requested: usize },

    #[error("operation needs a matrix of type (c) or (e), got {0}")]
    WrongType(Label),

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error(
        "no catalog fingerprint matches {0}; the matrix is not semistable, \
         or lies outside the hypotheses of the classification"
    )]
    Unclassified(String),

    #[error("unknown degeneration arrow {0:?}")]
    UnknownArrow(String),

    #[error("block matrix is not skew-symmetric: {0}")]
    NotSkew(String),

    #[error("the cubic form is zero")]
    ZeroCubic,

    #[error("cubic does not lie in the test piece of the matrix")]
    NotInPiece,

    #[error("{0}")]
    Parse(String),
}
