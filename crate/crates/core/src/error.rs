use thiserror::Error;

/// Errors produced by the numerics and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The query point lies outside the region.
    #[error("point ({x}, {y}, {z}) lies outside the region")]
    OutsideRegion { x: f64, y: f64, z: f64 },

    /// The operation is not defined for this kind of region.
    #[error("unsupported region: {0}")]
    UnsupportedRegion(String),

    /// A sampling or experiment specification failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Adaptive quadrature hit its subdivision limit before reaching the tolerance.
    #[error(
        "quadrature did not converge: estimate {estimate}, error {achieved:e} > requested {requested:e}"
    )]
    NonConvergence {
        estimate: f64,
        achieved: f64,
        requested: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
