use thiserror::Error;

/// Errors raised by the evaluators, the solver and the harness.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the region where the formula is defined
    /// (beyond the cut locus, at a coordinate singularity, outside a table).
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter violates a structural invariant (p <= 1, n < 2, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The discrete function vanishes on every free node.
    #[error("test function is identically zero on the free nodes")]
    ZeroFunction,

    /// Bisection could not bracket the requested target.
    #[error("no bracket: {0}")]
    NoBracket(String),

    /// Adaptive integration shrank its step below the floor.
    #[error("step size underflow at r = {0}")]
    StepUnderflow(f64),

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "exponent p must satisfy p > 1, got {p}"
        )))
    }
}
