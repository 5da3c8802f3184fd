use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while building data, fitting or evaluating.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is singular: numerical rank {rank}, rank {required} required")]
    Singular { rank: usize, required: usize },

    #[error("{requested} components requested but at most {attainable} are attainable")]
    Rank { requested: usize, attainable: usize },

    #[error(
        "coordinate descent did not converge after {sweeps} sweeps \
         (last max coefficient change {max_change:e}, KKT residual {kkt_residual:e})"
    )]
    Convergence {
        sweeps: usize,
        max_change: f64,
        kkt_residual: f64,
    },

    #[error("target is uncorrelated with every column of X (X^T y = 0)")]
    DegenerateTarget,

    #[error("signal is identically zero, SNR is undefined")]
    DegenerateSignal,

    #[error("row {row}, column {col}: {message}")]
    Parse {
        row: usize,
        col: usize,
        message: String,
    },

    #[error("malformed input: {0}")]
    Format(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("split failed: {0}")]
    Split(String),

    #[error("standardization statistics were not computed from the training partition")]
    Leakage,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics on otherwise well-formed input
    /// (rank problems, non-convergence, degenerate targets).
    pub fn is_computational(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. }
                | Error::Rank { .. }
                | Error::Convergence { .. }
                | Error::DegenerateTarget
                | Error::DegenerateSignal
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
