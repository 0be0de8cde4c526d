use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("unknown lattice {0:?} (expected one of H, E8, minus4, M2)")]
    UnknownLattice(String),

    #[error("Gram matrix is degenerate")]
    DegenerateGram,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("no cover with this branching exists: r = k + l + m - n - 2 = {0} < 0")]
    NegativeR(i64),

    #[error("profile does not give a trivial canonical sheaf: {0}")]
    NotCalabiYau(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("characteristic polynomial is not integral: {0}")]
    NonIntegralPolynomial(String),

    #[error("search budget must be positive")]
    InvalidBudget,

    #[error("hypotheses not met: {0}")]
    Hypothesis(String),

    #[error("invalid map parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid degeneration: {0}")]
    InvalidDegeneration(String),

    #[error("inconsistent profile: {0}")]
    Inconsistent(String),

    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("output error: {0}")]
    Output(String),
    /// The reader went away (for example `| head`).
    #[error("output closed")]
    OutputClosed,
}

pub type Result<T> = std::result::Result<T, Error>;
