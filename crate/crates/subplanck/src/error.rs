use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadratic solve produced no positive real root.
    #[error("no real root: discriminant {discriminant:.3e} below tolerance")]
    NoRealRoot { discriminant: f64 },

    /// Newton refinement failed to reach the residual target.
    #[error(
        "root refinement did not converge: last iterate {last_iterate}, residual {residual:.3e}"
    )]
    NoConvergence { last_iterate: f64, residual: f64 },

    /// A state or grid file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// File I/O failure, with the offending path attached.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
