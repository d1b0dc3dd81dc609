use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric: |a({row},{col}) - a({col},{row})| = {deviation:e}")]
    NotSymmetric {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("matrix is numerically rank deficient: R({index},{index}) = {pivot:e}")]
    RankDeficient { index: usize, pivot: f64 },

    #[error("matrix is not positive definite: pivot {index} = {pivot:e}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("order mismatch: expected {expected}, found {found}")]
    OrderMismatch { expected: usize, found: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid permutation map: {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("order {order} is too large for exhaustive permutation search (max {max})")]
    OrderTooLarge { order: usize, max: usize },

    #[error("best-instantaneous selection requires ground-truth eigenvalues")]
    MissingTruth,

    #[error("gave up generating an invertible matrix after {attempts} consecutive rejections")]
    GenerationExhausted { attempts: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("every ensemble member failed for at least one algorithm")]
    EnsembleFailed,
}
