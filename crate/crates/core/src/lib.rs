//! Truncated Nevanlinna-Pick interpolation for Herglotz functions of class
//! R0 via tridiagonal linear pencils.
//!
//! The pipeline starts from either a finitely supported probability measure
//! or raw interpolation data `{z_k, w_k}` in the upper half plane, runs the
//! modified multipoint Schur algorithm to extract recurrence coefficients
//! `(a_j, c_j, b_j)` at the nodes `z_j`, and assembles the Hermitian
//! tridiagonal pencil `H - lambda*J`. On top of that sit:
//!
//! * first/second-kind polynomial evaluation and their renormalized hats
//!   ([`recurrence`]),
//! * multipoint diagonal Pade values along three independent routes
//!   (polynomial ratio, backward continued fraction, resolvent solve),
//! * Weyl-circle geometry, nesting/tangency diagnostics, and determinacy
//!   indicators ([`weyl`]),
//! * end-to-end experiments with deterministic reports ([`harness`]).
//!
//! All arithmetic is multiprecision (MPFR), parameterized by a
//! [`Precision`] context; the default is a 128-bit significand.
//!
//! With the default `parallel` feature, grid sweeps and residual suites
//! fan out over threads via rayon; per-point work is pure, and reductions
//! are index-ordered, so results are identical with and without the
//! feature.

pub mod cplx;
pub mod error;
pub mod harness;
pub mod herglotz;
pub(crate) mod linalg;
pub mod measure;
pub(crate) mod par;
pub mod pencil;
pub mod precision;
pub mod quadrature;
pub mod recurrence;
pub mod report;
pub mod schur;
pub mod weyl;

pub use cplx::Cplx;
pub use error::{Error, Result};
pub use herglotz::{herglotz_audit, HerglotzFn, InterpolationProblem, R0Evaluator};
pub use measure::DiscreteMeasure;
pub use precision::Precision;
pub use schur::{SchurChain, SchurParameters, Termination};
