use thiserror::Error;

/// Errors raised by the linear algebra, norm, mean and checker layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    Dimension {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix must have at least one row and one column, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("matrix entry at ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric (defect {defect:.3e} exceeds {allowed:.3e})")]
    Symmetry { defect: f64, allowed: f64 },

    #[error("{algorithm} did not converge within {limit} iterations")]
    Convergence {
        algorithm: &'static str,
        limit: usize,
    },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is singular (smallest eigenvalue {min_eigenvalue:e}) and power {power} needs an inverse")]
    Singular { min_eigenvalue: f64, power: f64 },

    #[error("{0}")]
    Range(String),

    #[error("spectrum [{lowest}, {highest}] is not contained in bounds [{m}, {big_m}]")]
    SpectrumBounds {
        m: f64,
        big_m: f64,
        lowest: f64,
        highest: f64,
    },

    #[error("integrand is not finite at {at}")]
    Domain { at: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn range_error(msg: impl Into<String>) -> Error {
    Error::Range(msg.into())
}
