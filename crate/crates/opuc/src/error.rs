//! Crate-wide error type.
//!
//! Numerical failure modes are first-class citizens here: a Verblunsky
//! coefficient escaping the open unit disk, a moment sequence that is not
//! positive definite, or an eigenvalue iteration that stalls are all
//! conditions callers are expected to match on, so they get dedicated
//! variants rather than a stringly-typed catch-all.

use thiserror::Error;

/// Convenience alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by all modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A coefficient that must lie strictly inside the unit disk does not.
    #[error("coefficient at index {index} has modulus {modulus} outside the open unit disk")]
    NotStrictlyInside { index: usize, modulus: f64 },

    /// The Schur algorithm reached a parameter of modulus one; the measure
    /// behind the data is supported on finitely many points and the
    /// iteration cannot continue past `index`.
    #[error("unimodular Schur parameter at step {index}; the iteration terminates")]
    TerminalParameter { index: usize },

    /// A matrix that should be unitary fails the check `‖U*U - 1‖ ≤ {tol}`.
    #[error("matrix is not unitary: deviation {deviation} exceeds tolerance {tol}")]
    NotUnitary { deviation: f64, tol: f64 },

    /// Jacobi data whose spectral measure is not confined to `[-2, 2]`,
    /// detected through a sign condition failing at `index`.
    #[error("sign condition fails at index {index}: the measure is not supported in [-2, 2]")]
    SupportOutsideInterval { index: usize },

    /// A moment matrix that must be positive definite is not, within
    /// round-off slack.
    #[error("moment data is not positive definite (pivot {pivot} at size {size})")]
    NotPositiveDefinite { size: usize, pivot: f64 },

    /// A moment index too close to the grid's Nyquist limit was requested.
    #[error("moment index {index} needs a grid larger than {grid_size} points to avoid aliasing")]
    AliasingRisk { index: usize, grid_size: usize },

    /// An evaluation point that must lie strictly inside the unit disk
    /// does not.
    #[error("evaluation point with |z| = {modulus} is not strictly inside the unit disk")]
    OutsideDisk { modulus: f64 },

    /// An iterative method ran out of its iteration budget.
    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    /// Structurally invalid input: wrong lengths, empty data, parity
    /// violations, values out of range.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Shorthand for [`Error::InvalidInput`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
