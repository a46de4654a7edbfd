use crate::numerics::Complex;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the region where an operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Argument too close to a pole of the function being evaluated.
    #[error("{point} lies within {radius:e} of the pole at {nearest}")]
    PoleProximity {
        point: Complex,
        nearest: Complex,
        radius: f64,
    },

    /// A continuation path passes too close to a branch point of `s`, `c`.
    #[error(
        "path passes within {distance:e} of the branch point {branch_point} (minimum {minimum:e})"
    )]
    BranchProximity {
        branch_point: Complex,
        distance: f64,
        minimum: f64,
    },

    #[error("quadrature did not converge: estimate {estimate}, error estimate {error_estimate:e}")]
    Accuracy { estimate: f64, error_estimate: f64 },

    /// Taylor truncation tail exceeds the accuracy target at this order.
    #[error("series of order {order} leaves an estimated tail of {tail:e} at |z| = {modulus} (limit {limit:e})")]
    InsufficientOrder {
        order: usize,
        modulus: f64,
        tail: f64,
        limit: f64,
    },

    #[error("degenerate addition: ℘(z) and ℘(w) coincide ({0})")]
    DegenerateAddition(Complex),

    #[error("degenerate duplication: ℘′(z) vanishes at {0}")]
    DegenerateDuplication(Complex),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("unknown suite `{name}`; valid suites: {valid}")]
    UnknownSuite { name: String, valid: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
