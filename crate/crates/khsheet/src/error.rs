use khsheet_core::Error as CoreError;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_EMPTY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Empty(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Empty(_) => EXIT_EMPTY,
            CliError::Core(e) => match e {
                CoreError::Domain { .. } | CoreError::Argument(_) | CoreError::Cfl { .. } => EXIT_USAGE,
                CoreError::NoUnstableRoot { .. } => EXIT_EMPTY,
                CoreError::OutsideXi { .. } => EXIT_USAGE,
                CoreError::SingularDenominator { .. }
                | CoreError::Quadrature { .. }
                | CoreError::Blowup { .. }
                | CoreError::Eigen(_)
                | CoreError::Singular(_) => EXIT_NUMERICAL,
            },
            CliError::Io { .. } | CliError::Output(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
