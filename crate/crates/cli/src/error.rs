use std::fmt;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    FixtureFailure = 1,
    Parse = 2,
    Domain = 3,
    NoWitness = 4,
    Io = 5,
}

/// A failure carrying the exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn new(exit: Exit, message: impl Into<String>) -> Self {
        Self {
            exit,
            message: message.into(),
        }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(Exit::Parse, message)
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Self::new(Exit::Domain, message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(Exit::Io, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Invalid matrices and malformed unitaries are input errors; everything
/// else the library rejects is a domain error.
impl From<absfef::Error> for CliError {
    fn from(e: absfef::Error) -> Self {
        let exit = if e.is_validation() || matches!(e, absfef::Error::NotUnitary { .. }) {
            Exit::Parse
        } else {
            Exit::Domain
        };
        Self::new(exit, e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
