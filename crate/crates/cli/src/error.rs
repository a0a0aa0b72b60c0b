use std::fmt;

use qshalg::fdb::FdbError;
use qshalg::hopfmaps::MapError;
use qshalg::qsh::QshError;
use qshalg::rings::RingError;

use crate::parse::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input or options.
    Parse,
    /// A truncation window too small for the requested output.
    Window,
    /// A hypothesis of the model is violated.
    Hypothesis,
    /// Two algorithms disagreed.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Self { kind, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Parse, message)
    }

    pub fn window(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Window, message)
    }

    pub fn hypothesis(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Hypothesis, message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Internal, message)
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Parse => 2,
            ErrorKind::Window => 3,
            ErrorKind::Hypothesis => 4,
            ErrorKind::Internal => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self.kind {
            ErrorKind::Parse => "parse error",
            ErrorKind::Window => "window error",
            ErrorKind::Hypothesis => "hypothesis violated",
            ErrorKind::Internal => "internal error",
        };
        write!(f, "{label}: {}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        match e {
            RingError::OutOfWindow { .. } => CliError::window(e.to_string()),
            _ => CliError::hypothesis(e.to_string()),
        }
    }
}

impl From<QshError> for CliError {
    fn from(e: QshError) -> Self {
        CliError::hypothesis(e.to_string())
    }
}

impl From<MapError> for CliError {
    fn from(e: MapError) -> Self {
        match e {
            MapError::Ring(r) => r.into(),
            other => CliError::hypothesis(other.to_string()),
        }
    }
}

impl From<FdbError> for CliError {
    fn from(e: FdbError) -> Self {
        match e {
            FdbError::Ring(r) => r.into(),
            FdbError::Map(m) => m.into(),
            other => CliError::hypothesis(other.to_string()),
        }
    }
}
