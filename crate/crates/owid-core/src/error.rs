use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by state construction, measures and exports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The input does not describe a physical quantum state.
    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("matrix is not Hermitian: max |M - M^dag| entry = {max_deviation:e}")]
    NotHermitian { max_deviation: f64 },

    #[error(
        "eigensolver did not converge: off-diagonal norm {off_diagonal:e} after {sweeps} sweeps"
    )]
    EigensolverFailure { off_diagonal: f64, sweeps: usize },

    /// Closed form refused because the ordering condition on (s, c1, c2, c3)
    /// does not hold; use the oracle instead.
    #[error("closed form unsupported here ({0}); evaluate with the measurement oracle instead")]
    ClosedFormUnsupported(String),

    #[error(
        "optimizer did not converge: best value {best} bits, simplex spread {spread:e} after {iterations} iterations"
    )]
    NonConvergence {
        best: f64,
        spread: f64,
        iterations: usize,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
