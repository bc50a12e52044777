use thiserror::Error;

pub type Result<T> = std::result::Result<T, CissaError>;

/// Errors produced by the decomposition pipeline and its I/O layer.
///
/// The variants map one-to-one onto the CLI exit codes (see [`CissaError::exit_code`]).
#[derive(Debug, Error)]
pub enum CissaError {
    /// A caller-supplied parameter is out of range or inconsistent.
    #[error("{0}")]
    Parameter(String),

    /// Input data could not be parsed or is not usable (non-finite values, bad encoding).
    #[error("{0}")]
    Input(String),

    /// A numerical step failed or produced an inconsistent result.
    #[error("{0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CissaError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        CissaError::Parameter(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        CissaError::Input(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        CissaError::Numeric(msg.into())
    }

    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            CissaError::Parameter(_) => 2,
            CissaError::Input(_) | CissaError::Io(_) => 3,
            CissaError::Numeric(_) => 4,
        }
    }

    /// Machine-greppable tag printed as `error[TAG]: ...`.
    pub fn tag(&self) -> &'static str {
        match self {
            CissaError::Parameter(_) => "ARG",
            CissaError::Input(_) | CissaError::Io(_) => "PARSE",
            CissaError::Numeric(_) => "NUM",
        }
    }
}
