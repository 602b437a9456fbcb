use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The state vector is identically zero.
    #[error("state vector is identically zero")]
    ZeroState,

    /// An iterative numerical procedure failed to converge. `residuals`
    /// carries whatever per-item residuals were available at the point of
    /// failure (possibly empty).
    #[error("numerical failure in {what} (residuals: {residuals:?})")]
    NumericalFailure { what: String, residuals: Vec<f64> },

    /// Problem size exceeds a documented hard limit.
    #[error("{what} limited to {limit}, got {requested}")]
    ResourceLimit {
        what: String,
        limit: usize,
        requested: usize,
    },

    /// A pair of stars is (anti)coincident where the requested quantity is
    /// undefined.
    #[error("degenerate star pair ({i}, {j}): {what}")]
    DegeneratePair { i: usize, j: usize, what: String },

    /// Consecutive samples of a trajectory are too far apart to identify
    /// stars across the step.
    #[error("trajectory discontinuity at step {step}: {what}")]
    Discontinuity { step: usize, what: String },

    /// Eigenstate tracking lost the level identity.
    #[error("eigenstate tracking failed at step {step}: overlap {overlap:.6} below threshold")]
    TrackingFailure { step: usize, overlap: f64 },

    /// Operation requires a matched loop.
    #[error("loop trajectory is not matched")]
    UnmatchedLoop,

    /// Star set does not belong to the entanglement class the measure is
    /// defined for.
    #[error("classification error: {0}")]
    Classification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
