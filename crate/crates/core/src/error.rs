use thiserror::Error;

/// Errors raised by fitting, scoring, path computation and calibration.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("observation {index} has feature {x} outside the domain [{lo}, {hi}]")]
    FeatureOutOfDomain { index: usize, x: f64, lo: f64, hi: f64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("model {0} has an empty cell and cannot be scored")]
    InadmissibleModel(String),

    #[error("quadrature did not converge on cell {cell} ([{lo}, {hi}])")]
    QuadratureFailed { cell: usize, lo: f64, hi: f64 },

    #[error("invalid score: {0}")]
    InvalidScore(String),

    #[error("no models to select from")]
    EmptyCollection,

    #[error("threshold never reached: no path segment has dimension <= {d_thresh}")]
    ThresholdNeverReached { d_thresh: usize },

    #[error("path has no jump")]
    NoJump,

    #[error("slope window contains {found} model(s), at least 2 are required")]
    SlopeWindowTooSmall { found: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
