//! Error type shared by all solver modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Geometry parameters violate a constructor invariant.
    #[error("invalid geometry: {0}")]
    Geometry(String),

    /// An argument is outside an operation's domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Evaluation was requested at (or too close to) a singular point.
    #[error("singular evaluation: {0}")]
    Singular(String),

    /// The iterative SVD did not converge within the sweep cap.
    #[error("svd did not converge after {sweeps} sweeps")]
    SvdConvergence { sweeps: usize },

    /// The sampled L-curve is degenerate and has no detectable corner.
    #[error("l-curve has no detectable corner")]
    NoCorner,

    /// A report could not be written.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
