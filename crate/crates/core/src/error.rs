use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("root finder did not converge after {iterations} iterations (best scaled residual {best_residual:e})")]
    RootNonConvergence { iterations: usize, best_residual: f64 },

    #[error("QR iteration did not converge after {iterations} sweeps; {} eigenvalues deflated", deflated.len())]
    EigenNonConvergence { iterations: usize, deflated: Vec<Complex64> },

    #[error("point {index} lies on the boundary circle |z| = {r0}; resample")]
    BoundaryPoint { index: usize, r0: f64 },

    #[error("inside configurations have different moments: coordinate {index} differs by {gap:e}")]
    MomentMismatch { index: usize, gap: f64 },

    #[error("outside point {index} violates the gap: |ω| - r0 = {gap} < θ = {theta}")]
    GapViolation { index: usize, gap: f64, theta: f64 },

    #[error("no sample passed the event checks ({total} drawn)")]
    InsufficientEvents { total: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures of an iterative numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RootNonConvergence { .. } | Error::EigenNonConvergence { .. }
        )
    }
}
