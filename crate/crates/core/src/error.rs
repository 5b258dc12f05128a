use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("invalid lattice field `{field}`: {reason}")]
    InvalidLattice { field: &'static str, reason: String },

    #[error("{op} requires a pmf-interpreted lattice")]
    NotPmf { op: &'static str },

    #[error("invalid axis set: {0}")]
    InvalidAxisSet(String),

    #[error("invalid axis relabel: {0}")]
    InvalidRelabel(String),

    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    #[error("full check needs {pairs} point pairs, budget is {budget}")]
    BudgetExceeded { pairs: u128, budget: u64 },

    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),

    #[error("invalid ranks: d={d}, i={i}, j={j}")]
    InvalidRanks { d: usize, i: usize, j: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("conditioning event has zero probability at {at}")]
    UndefinedConditioning { at: f64 },

    #[error("quadrature did not converge: last two estimates {prev} and {last}")]
    QuadratureFailure { prev: f64, last: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    #[error("need at least 2 usable bins, found {0}")]
    InsufficientBins(usize),

    #[error("invalid sample request: {0}")]
    InvalidSample(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
