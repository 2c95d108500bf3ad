use thiserror::Error;

/// Errors raised by the spectral toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("usage: {0}")]
    Usage(String),

    #[error("series centers differ ({0} vs {1})")]
    CenterMismatch(String, String),

    #[error("pole at expansion center {0}")]
    PoleAtCenter(String),

    #[error("invalid decimal literal {0:?}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no bound state n={n} in this sector; largest admissible level is {max_level:?}")]
    NoSuchState { n: usize, max_level: Option<usize> },

    #[error("no degree-{degree} polynomial state: need v > {threshold}")]
    NoPolynomialState { degree: usize, threshold: String },

    #[error("sufficiency condition violated: |P_(N+1)| = {residual}")]
    Sufficiency { residual: String },

    #[error("vanishing Pochhammer factor at k={0}")]
    PochhammerZero(usize),

    #[error("iteration budget exhausted after {0} steps")]
    IterationBudget(usize),

    #[error("series truncated with tail {tail} above tolerance {tolerance}")]
    Truncation { tail: String, tolerance: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
