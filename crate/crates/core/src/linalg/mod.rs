//! Dense real linear algebra: matrices, factorizations, tridiagonal
//! reduction, permutations and a Jacobi eigenvalue oracle.

mod cholesky;
mod jacobi;
mod matrix;
mod permutation;
mod qr;
mod tridiag;

pub use cholesky::cholesky_upper;
pub use jacobi::{
    jacobi_eigen, jacobi_eigen_with, EigenDecomposition, DEFAULT_JACOBI_TOL, DEFAULT_MAX_SWEEPS,
};
pub use matrix::{Matrix, SymmetricMatrix, SYMMETRY_TOL};
pub use permutation::{permutation_matrix, sym_permute, Permutation};
pub use qr::{qr_factor, QrFactors, RANK_TOL};
pub use tridiag::tridiagonalize;
