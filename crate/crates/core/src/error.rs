use thiserror::Error;

/// Errors raised by the ordering, spectral and stability routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SnoError {
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("matrix must have at least one row")]
    EmptyMatrix,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid partition {parts:?}: {reason}")]
    InvalidPartition { parts: Vec<usize>, reason: &'static str },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("eigenvalue iteration did not converge for a {n}x{n} matrix")]
    EigenSolverFailed { n: usize },

    #[error(
        "inconsistent Jordan structure at {lambda_re}{lambda_im:+}i: kernel staircase gives weight {found}, \
         algebraic multiplicity is {expected} (try adjusting cluster/rank tolerances)"
    )]
    InconsistentJordanStructure {
        lambda_re: f64,
        lambda_im: f64,
        expected: usize,
        found: usize,
    },

    #[error(
        "spectra differ (spectral distance {distance:.3e} exceeds cluster tolerance {cluster_tol:.3e}); \
         the rank certificate needs identical spectra"
    )]
    SpectraMismatch { distance: f64, cluster_tol: f64 },

    #[error("matrix is not stable (spectral abscissa {abscissa})")]
    NotStable { abscissa: f64 },

    #[error(
        "matrix exponential overflowed at t = {t} (t·‖A‖ = {scaled_norm:.3e}); shorten the time horizon"
    )]
    ExponentialOverflow { t: f64, scaled_norm: f64 },

    #[error("invalid time grid: {reason}")]
    InvalidGrid { reason: &'static str },
}

pub type Result<T> = std::result::Result<T, SnoError>;

pub(crate) fn check_tolerance(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(SnoError::InvalidParameter {
            name,
            value,
            reason: "must be finite and non-negative",
        });
    }
    Ok(())
}
