use fourgeom::GeomError;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, config keys or parameters.
    Usage(String),
    /// NaN, singular frames or failed integration.
    Numeric(String),
    /// A self-check assertion failed; carries its name.
    CheckFailed(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::CheckFailed(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::CheckFailed(name) => write!(f, "check failed: {name}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::DegenerateFrame { .. } | GeomError::NumericFailure { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
