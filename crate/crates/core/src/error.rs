use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("vertex index {index} out of range 1..={max}")]
    Index { index: usize, max: usize },

    #[error("degenerate simplex: {0}")]
    DegenerateSimplex(String),

    #[error("vertices are not a regular simplex (relative distance spread {spread:.3e} exceeds {tolerance:.3e})")]
    NotRegular { spread: f64, tolerance: f64 },

    #[error("supplied {what} disagrees with the vertices (relative mismatch {mismatch:.3e})")]
    InconsistentGeometry { what: &'static str, mismatch: f64 },

    #[error("singular system: {0}")]
    Singular(String),

    /// No construction is available for this dimension.
    #[error(
        "no integer simplex construction for n = {n}: {}",
        if *.schoenberg_feasible {
            "an integer regular simplex exists (Schoenberg condition holds) but only n + 1 a perfect square is constructible"
        } else {
            "Schoenberg's condition fails, so no integer regular simplex exists"
        }
    )]
    InfeasibleInteger { n: usize, schoenberg_feasible: bool },

    #[error("degenerate extrapolation: {0}")]
    DegenerateExtrapolation(String),

    #[error("function evaluation failed at vertex {vertex}: {source}")]
    Evaluation {
        vertex: usize,
        #[source]
        source: Box<dyn std::error::Error + Send + Sync>,
    },

    #[error("function returned non-finite value {value} at vertex {vertex}")]
    NonFinite { vertex: usize, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for this error: 3 for numerical or regularity failures, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotRegular { .. }
            | Error::InconsistentGeometry { .. }
            | Error::Singular(_)
            | Error::NonFinite { .. } => 3,
            _ => 2,
        }
    }
}
