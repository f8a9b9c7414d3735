use thiserror::Error;

/// Errors reported by the geometry kernel and the higher-level modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input value lies outside the domain of the model or formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operands carry different geometry tags.
    #[error("geometry mismatch: expected {expected:?}, got {got:?}")]
    GeometryMismatch {
        expected: crate::geometry::Geometry,
        got: crate::geometry::Geometry,
    },

    /// The geodesic through the given points is not unique.
    #[error("degenerate geodesic: {0}")]
    DegenerateGeodesic(String),

    /// A point expected on a boundary is not on it.
    #[error("point not on boundary (residual {residual:e})")]
    NotOnBoundary { residual: f64 },

    /// The operation is not defined for this disc shape.
    #[error("unsupported shape: {0}")]
    Unsupported(String),

    /// Caller passed arguments that violate a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The triangle side misses the circle: the configuration has left the
    /// partially-overlapping regime and the circumscribed formula applies.
    #[error("regime error: side misses the circle (inradius {inradius} > radius {radius})")]
    Regime { inradius: f64, radius: f64 },

    /// An iterative numerical procedure failed to converge or bracket.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
