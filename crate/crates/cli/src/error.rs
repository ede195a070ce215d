//! Error classification for exit codes: 1 for input problems, 2 for internal
//! numerical failures.

use rbfnet::activations::ActivationError;
use rbfnet::cycles::CycleError;
use rbfnet::duality::DualityError;
use rbfnet::geometry::GeometryError;
use rbfnet::io::FileError;
use rbfnet::network::NetworkError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn input(message: impl std::fmt::Display) -> Self {
        CliError::Input(message.to_string())
    }

    pub fn numerical(message: impl std::fmt::Display) -> Self {
        CliError::Numerical(message.to_string())
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        CliError::input(e)
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::input(e)
    }
}

impl From<ActivationError> for CliError {
    fn from(e: ActivationError) -> Self {
        CliError::input(e)
    }
}

impl From<CycleError> for CliError {
    fn from(e: CycleError) -> Self {
        match e {
            CycleError::WitnessOverflow => CliError::numerical(e),
            other => CliError::input(other),
        }
    }
}

impl From<NetworkError> for CliError {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::NumericalFailure(_) | NetworkError::DegenerateDesign => {
                CliError::numerical(e)
            }
            other => CliError::input(other),
        }
    }
}

impl From<DualityError> for CliError {
    fn from(e: DualityError) -> Self {
        match e {
            DualityError::WitnessRejected => CliError::numerical(e),
            DualityError::Network(n) => n.into(),
            DualityError::Cycle(c) => c.into(),
            other => CliError::input(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e)
    }
}
