use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    BoundViolation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::BoundViolation(_) => 3,
        }
    }
}

macro_rules! validation_from {
    ($($t:ty),* $(,)?) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Validation(e.to_string())
            }
        })*
    };
}

validation_from!(
    std::io::Error,
    serde_json::Error,
    csv::Error,
    redblue::io::IoError,
    redblue::instance::InstanceError,
    redblue::generators::GenError,
    redblue::generators::CnfError,
    redblue::oracle::OracleError,
    redblue::approx::ApproxError,
    redblue::cyclecover::CoverError,
);

pub type CliResult<T> = Result<T, CliError>;
