use std::io;

use chirosat::chirotope::ChirotopeError;
use chirosat::encoder::{EncodeError, WriteError};
use chirosat::geometry::GeometryError;
use chirosat::solver::SolverError;
use chirosat::witness::WitnessError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Executable(String),
    #[error("{0}")]
    Input(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
    /// The command ran but the expected outcome was not reached.
    #[error("{0}")]
    Outcome(String),
}

impl CliError {
    pub fn io(context: impl Into<String>, source: io::Error) -> CliError {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    /// Stable token printed with every error.
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Executable(_) => "executable",
            CliError::Input(_) => "input",
            CliError::Io { .. } => "io",
            CliError::Outcome(_) => "outcome",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Outcome(_) => 1,
            CliError::Config(_) => 2,
            CliError::Executable(_) => 3,
            CliError::Input(_) => 4,
            CliError::Io { .. } => 5,
        }
    }
}

impl From<EncodeError> for CliError {
    fn from(e: EncodeError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ChirotopeError> for CliError {
    fn from(e: ChirotopeError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::NoSolver | SolverError::NoChecker | SolverError::Spawn { .. } => {
                CliError::Executable(e.to_string())
            }
            SolverError::Io { context, source } => CliError::Io { context, source },
        }
    }
}

impl From<WriteError> for CliError {
    fn from(e: WriteError) -> Self {
        match e {
            WriteError::Encode(e) => e.into(),
            WriteError::Io(source) => CliError::io("writing DIMACS", source),
        }
    }
}

impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        match e {
            WitnessError::Encode(e) => e.into(),
            WitnessError::Write(e) => e.into(),
            WitnessError::Solver(e) => e.into(),
            WitnessError::Chirotope(e) => e.into(),
            WitnessError::Io { context, source } => CliError::Io { context, source },
            WitnessError::BadRange | WitnessError::PipelineRange(_) => CliError::Config(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
