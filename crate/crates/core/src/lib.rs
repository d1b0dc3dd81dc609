//! Dense real symmetric eigen-iterations.
//!
//! The crate implements classical QR iteration, QR on tridiagonal (Hessenberg)
//! form, shifted QR, Cholesky iteration and QR iteration with a symmetric
//! permutation applied before every factorization. Permutations are chosen by
//! diagonal ordering, column ordering, or an exhaustive best-instantaneous
//! search against known eigenvalues.
//!
//! ```
//! use permqr::{run_iteration, jacobi_eigen, AlgorithmKind, StrategyId, SymmetricMatrix};
//!
//! let a = SymmetricMatrix::from_rows(&[
//!     vec![4.0, 1.0, 0.5],
//!     vec![1.0, 3.0, 0.2],
//!     vec![0.5, 0.2, 1.0],
//! ])
//! .unwrap();
//! let truth = jacobi_eigen(&a, permqr::DEFAULT_JACOBI_TOL).unwrap();
//! let trace = run_iteration(&a, AlgorithmKind::PermQr(StrategyId::ColumnOrder), 30, &truth).unwrap();
//! assert!(trace.final_error().unwrap() < 1e-12);
//! ```

mod error;

pub mod ensemble;
pub mod iteration;
pub mod linalg;
pub mod metrics;
pub mod strategy;

pub use ensemble::{
    gen_diagonal, gen_positive_definite, gen_symmetric, generate, matrix_rng, run_ensemble,
    run_member, EnsembleConfig, EnsembleReport, MatrixClass, MemberResult, Sample,
};
pub use error::{Error, Result};
pub use iteration::{
    run_iteration, step_cholesky, step_perm_qr, step_qr, step_qrs, AlgorithmKind, IterationState,
    IterationTrace, StepFailure,
};
pub use linalg::{
    cholesky_upper, jacobi_eigen, jacobi_eigen_with, permutation_matrix, qr_factor, sym_permute,
    tridiagonalize, EigenDecomposition, Matrix, Permutation, QrFactors, SymmetricMatrix,
    DEFAULT_JACOBI_TOL,
};
pub use metrics::{diag_vec, diagmat, dsort, error_ek, ErrorValue};
pub use strategy::{bic_select, column_order, diord, select, StrategyId, BIC_MAX_ORDER};
