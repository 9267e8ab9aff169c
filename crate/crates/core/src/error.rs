//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Expression source could not be parsed. `offset` is a byte offset
    /// into the source string.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// Numeric evaluation of an expression failed (division by zero,
    /// square root of a negative value, non-finite result).
    #[error("evaluation failed at point {point:?}: {reason}")]
    Eval { point: Vec<f64>, reason: String },

    /// The contact condition fails: the restriction of the top form's
    /// differential to the distribution is degenerate.
    #[error("contact condition violated{}: {detail}", fmt_point(.point))]
    ContactDegeneracy { point: Vec<f64>, detail: String },

    /// Declared metric is not positive definite at a sample point.
    #[error("metric is not positive definite at point {point:?}")]
    MetricNotPositive { point: Vec<f64> },

    /// Coframe matrix is singular at a sample point.
    #[error("coframe is singular at point {point:?}")]
    SingularCoframe { point: Vec<f64> },

    /// A gram matrix is not symmetric positive definite.
    #[error("gram matrix is degenerate or not positive definite")]
    DegenerateGram,

    /// A candidate equivalence map has singular Jacobian at a point.
    #[error("map is not immersive at point {point:?}")]
    NotImmersive { point: Vec<f64> },

    /// An internal consistency check failed; this signals a bug upstream
    /// of the failing operation, not bad user input.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    /// Malformed caller input (bad dimensions, unknown names, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn fmt_point(point: &[f64]) -> String {
    if point.is_empty() {
        String::new()
    } else {
        format!(" at point {point:?}")
    }
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn eval(point: &[f64], reason: impl Into<String>) -> Self {
        Error::Eval {
            point: point.to_vec(),
            reason: reason.into(),
        }
    }
}
