use thiserror::Error;

/// Errors produced by region construction, channel evaluation and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A frontier was requested for an empty point set.
    #[error("no points")]
    NoPoints,

    /// A parameter violated its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A variable label is not part of the joint distribution.
    #[error("unknown label: {0}")]
    UnknownLabel(String),

    /// Mutual-information argument sets must be nonempty and pairwise disjoint.
    #[error("invalid label sets: {0}")]
    InvalidLabelSets(String),

    /// The strong-interference bound only applies when `b^2 >= 1`.
    #[error("strong-interference bound inapplicable: b^2 = {b2} < 1")]
    WeakChannel { b2: f64 },

    /// A joint distribution does not factor as required by the theorem.
    #[error("factorization violation: max deviation {0:.3e}")]
    FactorizationViolation(f64),

    /// Brute-force enumeration would exceed the configured state-space cap.
    #[error("state space too large: {0} entries")]
    StateSpaceOverflow(usize),

    /// A probability table failed validation.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A CSV region file failed to parse or violated frontier invariants.
    #[error("csv error: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
