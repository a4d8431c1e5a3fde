use std::fmt;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input, or parameters outside a domain.
    Input(String),
    /// An exact count exceeded its work budget.
    WorkLimit(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::WorkLimit(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "input error: {msg}"),
            CliError::WorkLimit(msg) => write!(f, "resource limit: {msg}"),
        }
    }
}

impl From<colorcount::CountError> for CliError {
    fn from(e: colorcount::CountError) -> Self {
        match e {
            colorcount::CountError::WorkLimitExceeded { .. } => CliError::WorkLimit(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<colorcount::PairingError> for CliError {
    fn from(e: colorcount::PairingError) -> Self {
        match e {
            colorcount::PairingError::Count(inner) => inner.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

macro_rules! input_errors {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        })*
    };
}

input_errors!(
    colorcount::GraphError,
    colorcount::CoverError,
    colorcount::ColoringError,
    colorcount::CouponError,
    colorcount::BoundError,
    std::io::Error,
    serde_json::Error,
    csv::Error
);

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    VerificationFailed,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        match s {
            Status::Success => ExitCode::SUCCESS,
            Status::VerificationFailed => ExitCode::from(1),
        }
    }
}
