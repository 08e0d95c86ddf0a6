use thiserror::Error;

/// Errors produced by the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("measure has infinite total mass: {0}")]
    InfiniteMass(String),

    #[error("Blaschke condition fails: {0}")]
    BlaschkeCondition(String),

    #[error("integral diverges at angle {angle} (combined exponent {exponent})")]
    Divergent { angle: f64, exponent: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("unsupported fixture: {0}")]
    Unsupported(String),

    #[error("function is not a member of the weighted space: {0}")]
    NonMember(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
