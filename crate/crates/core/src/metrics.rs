//! Vector helpers and the eigenvalue estimation error.

use std::cmp::Ordering;

use crate::linalg::{Matrix, SymmetricMatrix};
use crate::{Error, Result};

/// Squared eigenvalue estimation error `E²`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ErrorValue(f64);

impl ErrorValue {
    pub fn e_squared(self) -> f64 {
        self.0
    }

    pub fn e(self) -> f64 {
        self.0.sqrt()
    }
}

impl From<ErrorValue> for f64 {
    fn from(e: ErrorValue) -> f64 {
        e.0
    }
}

/// Descending sort. Equal values keep their relative order.
pub fn dsort(v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    out.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    out
}

pub fn diag_vec(a: &SymmetricMatrix) -> Vec<f64> {
    a.diagonal()
}

pub fn diagmat(v: &[f64]) -> SymmetricMatrix {
    let n = v.len();
    SymmetricMatrix::symmetrize(Matrix::from_fn(
        n,
        n,
        |i, j| if i == j { v[i] } else { 0.0 },
    ))
}

/// `‖dsort(estimate) − dsort(truth)‖²`.
pub fn error_ek(estimate: &[f64], truth: &[f64]) -> Result<ErrorValue> {
    if estimate.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: estimate.len(),
            right: truth.len(),
        });
    }
    let e2 = dsort(estimate)
        .iter()
        .zip(dsort(truth))
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(ErrorValue(e2))
}
