use thiserror::Error;

use crate::hyperbolic::Classification;

/// Errors raised by the geometric kernels and the file readers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point is not in the upper half-plane (y = {0})")]
    NotInUpperHalfPlane(f64),
    #[error("point is not in upper half-space (t = {0})")]
    NotInUpperHalfSpace(f64),
    #[error("geodesic endpoints coincide")]
    DegenerateGeodesic,
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("map has non-real entries")]
    NotReal,
    #[error("map is not loxodromic (classified as {0:?})")]
    NotLoxodromic(Classification),
    #[error("map is not hyperbolic (classified as {0:?})")]
    NotHyperbolic(Classification),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("leaf {0} has non-positive weight {1}")]
    NonPositiveWeight(usize, f64),
    #[error("leaves {0} and {1} intersect transversally")]
    Interleaved(usize, usize),
    #[error("leaves {0} and {1} share an endpoint")]
    SharedEndpoint(usize, usize),
    #[error("geodesic is disjoint from every leaf")]
    Disjoint,
    #[error("point lies on leaf {0}")]
    OnLamination(usize),
    #[error("region is empty")]
    EmptyRegion,
    #[error("segment does not span one period of the translation (gap {0:e})")]
    NotAPeriod(f64),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("rational slope: continued fraction terminates after {0} terms")]
    RationalSlope(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("malformed leaf {index}: {message}")]
    MalformedLeaf { index: usize, message: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
