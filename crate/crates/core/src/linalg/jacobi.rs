use super::{Matrix, SymmetricMatrix};
use crate::{Error, Result};

/// Default stopping threshold: off-diagonal Frobenius norm relative to the
/// Frobenius norm of the input.
pub const DEFAULT_JACOBI_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_SWEEPS: usize = 100;

/// Eigenvalues (in the order produced) and unit eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl EigenDecomposition {
    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues in descending order.
    pub fn sorted_values(&self) -> Vec<f64> {
        crate::metrics::dsort(&self.values)
    }

    pub fn min_abs_value(&self) -> f64 {
        self.values
            .iter()
            .fold(f64::INFINITY, |m, x| m.min(x.abs()))
    }
}

/// Cyclic Jacobi eigen-decomposition with the default sweep limit.
pub fn jacobi_eigen(a: &SymmetricMatrix, tol: f64) -> Result<EigenDecomposition> {
    jacobi_eigen_with(a, tol, DEFAULT_MAX_SWEEPS)
}

/// Cyclic Jacobi rotations, row by row over the strict upper triangle.
///
/// Stops once the off-diagonal Frobenius norm is at most `tol` times the
/// Frobenius norm of `a`.
pub fn jacobi_eigen_with(
    a: &SymmetricMatrix,
    tol: f64,
    max_sweeps: usize,
) -> Result<EigenDecomposition> {
    assert!(tol > 0.0, "tolerance must be positive");
    a.check_finite()?;
    let n = a.order();
    let mut m = a.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let threshold = tol * m.frobenius_norm();

    for sweep in 0..=max_sweeps {
        if m.off_diagonal_norm() <= threshold {
            return Ok(EigenDecomposition {
                values: m.diagonal(),
                vectors: v,
            });
        }
        if sweep == max_sweeps {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                // negligible against both diagonal entries: drop it
                let g = 100.0 * apq.abs();
                if sweep > 3
                    && m[(p, p)].abs() + g == m[(p, p)].abs()
                    && m[(q, q)].abs() + g == m[(q, q)].abs()
                {
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, &mut v, p, q, c, s);
            }
        }
    }
    Err(Error::NoConvergence { sweeps: max_sweeps })
}

fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}
