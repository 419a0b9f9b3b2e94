//! Crate-wide error type.

use thiserror::Error;

/// Errors shared across the estimation, equilibria, and inference modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter lies outside its admissible region.
    #[error("parameter {field} = {value} violates {bound}")]
    OutOfParamSpace {
        field: &'static str,
        value: f64,
        bound: String,
    },

    /// Input data failed validation.
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// The discounted second-moment recursion collapsed; beliefs are not
    /// updateable on this input.
    #[error("degenerate learning variance: {0}")]
    DegenerateVariance(String),

    /// A regression design matrix is numerically singular.
    #[error("singular design matrix (condition number {cond:.3e})")]
    SingularDesign { cond: f64 },

    /// The numerical Hessian is not positive definite, which signals a
    /// boundary solution or loss of identification.
    #[error("Hessian not positive definite (eigenvalues {eigenvalues:?})")]
    NotPositiveDefinite { eigenvalues: [f64; 3] },

    /// No fixed point of the autocorrelation map was found on [0, 1].
    #[error("no equilibrium found on [0,1]: G(0) = {g0:.3e}, G(1) = {g1:.3e}")]
    NoRootFound { g0: f64, g1: f64 },

    /// The denominator of the fixed-point map is non-positive.
    #[error("degenerate denominator D(beta) = {0:.3e}")]
    DegenerateDenominator(f64),

    /// The studentization scale of the uniform band is numerically zero.
    #[error("degenerate band scale (min s_n = {0:.3e})")]
    DegenerateScale(f64),

    /// An excluded boundary (rho = 1 or delta = 1) was hit in a closed-form
    /// expression.
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),

    /// Too many Monte Carlo replications failed for the summary to be
    /// trustworthy.
    #[error("{failed} of {reps} Monte Carlo replications failed (n = {n})")]
    McFailureRate { failed: usize, reps: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
