//! Error types shared by the whole pipeline.

use thiserror::Error;

/// Errors surfaced by evaluation and assembly operations.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// An evaluation point collided with a pole (a measure atom or an
    /// interpolation node) within the geometric tolerance.
    #[error("evaluation point {point} is within tolerance of the pole at {pole}")]
    PoleProximity { point: String, pole: String },

    /// Quadrature node computation failed to converge.
    #[error("quadrature node iteration did not converge (node {node} of {total})")]
    QuadratureFailure { node: usize, total: usize },

    /// The supplied data is inconsistent with a Herglotz function
    /// (values must map the upper half plane into itself).
    #[error("data is not consistent with a Herglotz function: {reason}")]
    NotHerglotzData { reason: String },

    /// The value supplied at the conjugate point deviates from the conjugate
    /// of the value at the base point beyond tolerance.
    #[error("conjugate-symmetry defect {defect} exceeds tolerance {tol}")]
    AsymmetricData { defect: String, tol: String },

    /// A Schur step degenerated (b^2 below the degeneration threshold); the
    /// transformed tail does not exist.
    #[error("degenerate Schur tail at level {level}: b^2 = {b2}")]
    DegenerateTail { level: usize, b2: String },

    /// A pencil truncation was requested beyond the available chain depth.
    #[error("requested order {requested} needs {needed} completed steps, chain has {available}")]
    InsufficientDepth {
        requested: usize,
        needed: usize,
        available: usize,
    },

    /// The truncated J section is numerically singular. This cannot happen
    /// for coefficients produced by a valid chain and signals corrupt data.
    #[error("singular J section at order {order}")]
    SingularJ { order: usize },

    /// The pencil H - lambda*J is singular at the requested point
    /// (only possible for real lambda).
    #[error("singular pencil at lambda = {lambda}")]
    SingularPencil { lambda: String },

    /// The eigenvalue iteration stalled.
    #[error("eigenvalue iteration did not converge after {sweeps} sweeps")]
    EigenFailure { sweeps: usize },

    /// A circle fit received (numerically) collinear points. Cannot occur
    /// for Herglotz data with Im lambda > 0; signals corrupt inputs.
    #[error("three-point circle fit is degenerate: {reason}")]
    DegenerateCircle { reason: String },

    /// A non-finite value (NaN or infinity) escaped an operation.
    #[error("non-finite value produced in {context}")]
    NonFinite { context: String },

    /// Report serialization failed.
    #[error("report serialization failed: {0}")]
    SerializationFailure(String),

    /// An input violated a domain-type invariant.
    #[error("invalid {what}: {reason}")]
    InvalidInput { what: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
