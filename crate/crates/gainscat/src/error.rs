use thiserror::Error;

/// Error type shared by every module of the crate.
///
/// The three variants map onto the CLI exit codes: `Config` and `Domain`
/// exit with status 2, `Numerical` with status 3.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed catalog files or run configuration.
    #[error("config error: {0}")]
    Config(String),
    /// An argument outside an operation's domain of validity.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical procedure failed to reach its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
