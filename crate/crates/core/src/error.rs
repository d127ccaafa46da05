use thiserror::Error;

/// Failures raised by the library.
///
/// `Numeric` marks a computation that ran but produced something unusable
/// (a non-monotone transport map, a density with no mass left after
/// flooring). Every other variant is a problem with the caller's input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("not a unit vector: norm deviates from 1 by {0:e}")]
    NotUnit(f64),

    #[error("vector is not tangent at the base point (residual {0:e})")]
    NotTangent(f64),

    #[error("not a rotation matrix: {0}")]
    NotRotation(String),

    #[error("weights are not on the probability simplex: {0}")]
    NotOnSimplex(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    /// True for failures of the computation itself rather than of its input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Checks that `w` is a probability vector to within `tol`.
pub(crate) fn check_simplex(w: &[f64], tol: f64) -> Result<()> {
    if w.is_empty() {
        return Err(Error::NotOnSimplex("empty weight vector".into()));
    }
    if let Some(bad) = w.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::NotOnSimplex(format!("entry {bad} is negative or not finite")));
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::NotOnSimplex(format!("entries sum to {total}")));
    }
    Ok(())
}
