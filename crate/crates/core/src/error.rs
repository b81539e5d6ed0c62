use thiserror::Error;

/// Errors reported by the matrix kernels and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix entry ({row},{col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    ZeroDimension { rows: usize, cols: usize },

    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    DataLength {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {context}: {details}")]
    Dimensions {
        context: &'static str,
        details: String,
    },

    #[error("matrix is not symmetric: relative asymmetry {relative:.3e} exceeds {tolerance:.1e}")]
    Asymmetric { relative: f64, tolerance: f64 },

    #[error("matrix is not positive-definite: factorisation broke down at pivot {pivot}")]
    NotPositiveDefinite { pivot: usize },

    #[error("matrix is not positive semi-definite: smallest eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("rank {k} out of range, must be in 1..={bound}")]
    RankOutOfRange { k: usize, bound: usize },

    #[error("columns are not orthonormal: residual {residual:.3e} exceeds {tolerance:.1e}")]
    NotOrthonormal { residual: f64, tolerance: f64 },

    #[error("column {index} is not unit-norm: |q| = {norm}")]
    NotUnit { index: usize, norm: f64 },

    #[error("invalid regulariser spec: {0}")]
    InvalidRegularizer(String),

    #[error("invalid descent config: {0}")]
    InvalidConfig(String),

    #[error("second-difference matrix needs n >= 3, got {n}")]
    TooSmall { n: usize },

    #[error("invalid skew index ({i},{j}) for dimension {m}")]
    BadSkewIndex { i: usize, j: usize, m: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
