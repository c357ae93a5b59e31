use std::path::PathBuf;

use thiserror::Error;

use crate::scalar::ScalarError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("a Taylor series needs at least one coefficient")]
    EmptySeries,
    #[error(
        "dimension {dimension} needs {needed} coefficients but only {available} are available"
    )]
    InsufficientCoefficients {
        dimension: usize,
        needed: usize,
        available: usize,
    },
    #[error("{what} must be at least {min}, got {got}")]
    OrderTooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("the linear-solve oracle only accepts exact coefficients")]
    InexactOracleInput,
    #[error("linear system is singular")]
    SingularSystem,
    #[error("pole at x = {x}")]
    Pole { x: String },
    #[error("convergence table has {rows} rows; at least {min} are needed")]
    TableTooShort { rows: usize, min: usize },
    #[error("Möbius map needs a nonzero x coefficient in the denominator")]
    DegenerateMobius,
    #[error("unknown corpus function `{0}`")]
    UnknownFunction(String),
    #[error("bad parameters for `{function}`: {message}")]
    BadParams { function: String, message: String },
    #[error("{identity}: ({params}) is outside the admissible range")]
    Inadmissible {
        identity: &'static str,
        params: String,
    },
    #[error("residual grid must be nonempty and strictly increasing")]
    InvalidGrid,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: line {line}, column {column}: {message}")]
    Json {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: field `{field}`: {message}")]
    Field {
        path: PathBuf,
        field: String,
        message: String,
    },
}
