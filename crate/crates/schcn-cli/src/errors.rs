use std::fmt;

/// Application-level error with a defined process exit code.
#[derive(Debug)]
pub enum AppError {
    /// Bad flags, malformed files, mismatched grids. Exit code 2.
    Invalid(String),
    /// A numerical routine failed to converge. Exit code 3.
    NonConvergent,
    /// Filesystem failure. Exit code 1.
    Io(std::io::Error),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Invalid(_) => 2,
            AppError::NonConvergent => 3,
            AppError::Io(_) => 1,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Invalid(msg) => write!(f, "invalid configuration: {msg}"),
            AppError::NonConvergent => write!(f, "numerical routine did not converge"),
            AppError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<schcn_core::Error> for AppError {
    fn from(e: schcn_core::Error) -> Self {
        match e {
            schcn_core::Error::NonConvergent => AppError::NonConvergent,
            other => AppError::Invalid(other.to_string()),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}
