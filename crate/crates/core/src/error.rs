use thiserror::Error;

use crate::kernel::Point;

/// Reasons an input polygon is rejected.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("polygon needs at least 3 distinct vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {index} is not finite")]
    NonFinite { index: usize },
    #[error("polygon has zero area")]
    Degenerate,
    #[error("point ({}, {}) lies outside the polygon", .0.x, .0.y)]
    OutsidePolygon(Point),
    #[error("edges {a} and {b} intersect near ({}, {})", at.x, at.y)]
    SelfIntersection { a: usize, b: usize, at: Point },
}

/// Errors from the partition algorithms.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum PartitionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("size bound must be positive and finite, got {0}")]
    BadBound(f64),
    #[error("area list is invalid: {0}")]
    BadAreas(&'static str),
    #[error("area list sums to {got}, polygon area is {expected}")]
    AreaMismatch { got: f64, expected: f64 },
    #[error("no point set of this kind has bounded size {0}")]
    Infeasible(f64),
    #[error("invalid configuration: {0}")]
    BadConfig(&'static str),
    #[error("internal construction failed: {0}")]
    Construction(&'static str),
}
