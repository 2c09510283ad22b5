use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every stage of the solver.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value is outside the documented domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Stiffness quadrature did not reach its tolerance within the refinement budget.
    #[error("quadrature for Toeplitz offset {offset} did not converge (last change {change:.3e})")]
    Quadrature { offset: usize, change: f64 },

    /// Linear algebra breakdown (non-SPD system, stalled iteration).
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Invalid run configuration, including a manufactured source that failed self-convergence.
    #[error("configuration error: {0}")]
    Config(String),

    /// A persisted artifact could not be decoded.
    #[error("malformed artifact: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// An error raised inside one pipeline phase.
    #[error("{phase}: {source}")]
    Phase {
        phase: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code: 3 for numeric failures, 2 for everything caused by the
    /// inputs (parameters, configuration, missing or malformed artifacts).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) | Error::Config(_) | Error::Format(_) | Error::Io(_) => 2,
            Error::Quadrature { .. } | Error::Numeric(_) => 3,
            Error::Phase { source, .. } => source.exit_code(),
        }
    }
}

pub(crate) trait PhaseExt<T> {
    fn phase(self, phase: &'static str) -> Result<T>;
}

impl<T> PhaseExt<T> for Result<T> {
    fn phase(self, phase: &'static str) -> Result<T> {
        self.map_err(|e| Error::Phase {
            phase,
            source: Box::new(e),
        })
    }
}
