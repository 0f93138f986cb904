use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of a function (e.g. non-finite).
    #[error("domain error: {0}")]
    Domain(String),
    /// Caller passed an invalid argument.
    #[error("argument error: {0}")]
    Argument(String),
    /// NaN or failed convergence inside a numerical kernel.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A documented pre- or post-condition does not hold.
    #[error("contract violation: {0}")]
    Contract(String),
    /// The eigenbasis window is too small to represent the packet.
    #[error("truncation error: {0}")]
    Truncation(String),
    /// Bad configuration file or command line.
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Argument(_) => 2,
            _ => 3,
        }
    }
}
