use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INDETERMINATE: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const CONFIG: i32 = 65;
    pub const IO: i32 = 74;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numerical(seclab_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Config(_) => exit::CONFIG,
            CliError::Io(_) => exit::IO,
            CliError::Numerical(_) => exit::FAIL,
        }
    }
}

impl From<seclab_core::Error> for CliError {
    fn from(e: seclab_core::Error) -> Self {
        use seclab_core::Error as E;
        match e {
            E::UnknownField(_)
            | E::FieldArgs { .. }
            | E::ExponentDomain(_)
            | E::Inadmissible { .. }
            | E::SectorAngleRange(_)
            | E::AngleRange(_)
            | E::Precondition(_)
            | E::Capability(_)
            | E::SizeCap { .. }
            | E::GridSize(_)
            | E::SectorRejected { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
