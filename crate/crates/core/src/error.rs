use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid field `{field}`: {msg}")]
    Validation { field: String, msg: String },
    #[error("slice `{0}` has no ossuary-derived persons for its generic")]
    UndefinedEstimator(String),
    #[error("specification error: {0}")]
    Spec(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("parameter error: {0}")]
    Param(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("{0}")]
    Infinite(String),
}

impl Error {
    /// Broad class for process exit codes: configuration problems versus
    /// computation contract violations.
    pub fn is_config(&self) -> bool {
        !matches!(self, Error::Contract(_) | Error::Infinite(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
