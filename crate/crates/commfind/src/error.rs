//! Error type and process exit codes.

use thiserror::Error;

/// All failure modes surfaced by the library and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violated an operation precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A parameter set is unusable (e.g. a sampling probability above 1).
    #[error("invalid params: {0}")]
    InvalidParams(String),

    /// An exhaustive enumeration would exceed its configured budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// The generator could not satisfy its constraints after bounded retries.
    #[error("generation infeasible: {0}")]
    GenerationInfeasible(String),

    /// File read/write or parse failure.
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the CLI: 0 success, 2 usage, 3 I/O,
    /// 4 invalid params, 5 budget exceeded, 6 generation infeasible.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 3,
            Error::InvalidInput(_) | Error::InvalidParams(_) => 4,
            Error::BudgetExceeded(_) => 5,
            Error::GenerationInfeasible(_) => 6,
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Error {
        Error::Io(format!("{}: {}", path.display(), err))
    }
}
