use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the numeric
/// machinery rather than the call sites, so callers can match on the kind.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Argument hits a pole of the function.
    #[error("pole error: {0}")]
    Pole(String),
    /// A series or iteration failed to converge within its budget.
    #[error("convergence error: {0}")]
    Convergence(String),
    /// Boundary-value extrapolation (x + i0 limits) did not stabilize.
    #[error("boundary error: {0}")]
    Boundary(String),
    /// Stieltjes inversion produced a materially negative density.
    #[error("inversion error: {0}")]
    Inversion(String),
    /// An integral was detected to diverge.
    #[error("divergence error: {0}")]
    Divergence(String),
    /// Division by a numerically vanishing transform value.
    #[error("division error: {0}")]
    Division(String),
    /// The law does not embed into a ⊠-convolution semigroup.
    #[error("not ⊠-infinitely divisible: {0}")]
    NotBoxtimesId(String),
    /// Complex analytic continuation (Newton path) failed.
    #[error("continuation error: {0}")]
    Continuation(String),
    /// Hypothesis of a limit theorem fails for this input.
    #[error("hypothesis error: {0}")]
    Hypothesis(String),
    /// Membership test for a function class failed.
    #[error("class error: {0}")]
    Class(String),
    /// A truncated translate/tail sum could not reach the requested accuracy.
    #[error("truncation error: {0}")]
    Truncation(String),
    /// Numerical linear algebra failure (non-convergence of an eigensolver).
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A constructive procedure (e.g. quantile inversion) failed a sanity check.
    #[error("construction error: {0}")]
    Construction(String),
    /// Moment data insufficient for the requested accuracy.
    #[error("insufficient moments: {0}")]
    InsufficientMoments(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
