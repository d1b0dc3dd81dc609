use super::{Matrix, SymmetricMatrix};
use crate::{Error, Result};

/// Upper-triangular `R` with positive diagonal such that `Rᵀ R = b`.
pub fn cholesky_upper(b: &SymmetricMatrix) -> Result<Matrix> {
    let n = b.order();
    let mut r = Matrix::zeros(n, n);
    for i in 0..n {
        let mut d = b[(i, i)];
        for k in 0..i {
            d -= r[(k, i)] * r[(k, i)];
        }
        if d.is_nan() || d <= 0.0 {
            return Err(Error::NotPositiveDefinite {
                index: i + 1,
                pivot: d,
            });
        }
        let rii = d.sqrt();
        r[(i, i)] = rii;
        for j in i + 1..n {
            let mut s = b[(i, j)];
            for k in 0..i {
                s -= r[(k, i)] * r[(k, j)];
            }
            r[(i, j)] = s / rii;
        }
    }
    Ok(r)
}
