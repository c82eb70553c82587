use thiserror::Error;

/// Errors raised by the spectral distance library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e} exceeds {tolerance:.3e})")]
    NonHermitianInput { residual: f64, tolerance: f64 },

    #[error("eigensolver did not converge")]
    ConvergenceFailure,

    #[error("matrix is indefinite (eigenvalue {min_eigenvalue:.6e} below -{tolerance:.3e})")]
    IndefiniteInput { min_eigenvalue: f64, tolerance: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("Bures form is negative beyond round-off ({value:.6e}); numerical failure")]
    NegativeDistance { value: f64 },

    #[error("AR polynomial is singular at omega = {omega} (condition {condition:.3e})")]
    SingularAr { omega: f64, condition: f64 },

    #[error("AR model is not stable (companion spectral radius {spectral_radius:.6})")]
    UnstableAr { spectral_radius: f64 },

    #[error("frequency grid of {n_freq} points cannot resolve lags up to {max_lag} (need >= {required})")]
    GridTooCoarse { n_freq: usize, max_lag: usize, required: usize },

    #[error("lag {max_lag} is too large for a grid of {n_freq} frequencies")]
    LagTooLarge { max_lag: usize, n_freq: usize },

    #[error("inverse transform left an imaginary residue of {residue:.3e}")]
    NonRealResidue { residue: f64 },

    #[error("not positive definite: {context} (min eigenvalue {min_eigenvalue:.6e})")]
    NotPositiveDefinite { context: String, min_eigenvalue: f64 },

    #[error("spectra are sampled on different grids: {left} vs {right} frequencies")]
    GridMismatch { left: usize, right: usize },

    #[error("only {segments} Welch segments available (need at least {required})")]
    TooFewSegments { segments: usize, required: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("file not found: {0}")]
    FileNotFound(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
