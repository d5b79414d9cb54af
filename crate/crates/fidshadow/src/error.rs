use thiserror::Error;

/// Errors surfaced by channel construction, geometry and density routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Kraus operators are not trace preserving (max deviation {max_dev:.3e} > {tol:.1e})")]
    NotTracePreserving { max_dev: f64, tol: f64 },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("empty sample set")]
    EmptySample,

    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("degenerate triangle: eigenvalues are collinear ({0})")]
    DegenerateTriangle(String),

    #[error("operators do not commute (max commutator norm {max_comm:.3e} > {tol:.1e})")]
    NotCommuting { max_comm: f64, tol: f64 },

    #[error("diagonalized operators together with the identity span only {rank} of {dim} diagonal dimensions")]
    NotSpanning { rank: usize, dim: usize },

    #[error("matrix is not Hermitian (max deviation {max_dev:.3e} > {tol:.1e})")]
    NotHermitian { max_dev: f64, tol: f64 },

    #[error("matrix is not unitary (max deviation {max_dev:.3e})")]
    NotUnitary { max_dev: f64 },

    #[error("matrix is not orthogonal (max deviation {max_dev:.3e})")]
    NotOrthogonal { max_dev: f64 },

    #[error("dimension {dim} exceeds the face-enumeration guard ({max})")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
