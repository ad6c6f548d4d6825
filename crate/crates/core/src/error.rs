use thiserror::Error;

/// Errors produced while building grids, operators, or solving problems.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid derivative order {order}: expected {expected}")]
    InvalidOrder {
        order: usize,
        expected: &'static str,
    },

    #[error("point {value} lies outside [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },

    #[error("invalid Robin data: {0}")]
    InvalidRobin(String),

    #[error("boundary elimination matrix is singular ({0})")]
    SingularElimination(String),

    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("linear system is singular (reciprocal condition estimate {rcond:e})")]
    SingularSystem { rcond: f64 },

    #[error("Jacobian is singular at Newton iteration {iteration}")]
    SingularJacobian { iteration: usize },

    #[error(
        "Newton iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("unknown problem `{id}`; available: {}", available.join(", "))]
    UnknownProblem { id: String, available: Vec<String> },

    #[error("problem `{0}` has no exact solution")]
    NoExactSolution(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
