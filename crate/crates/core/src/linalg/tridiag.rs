use super::{Matrix, SymmetricMatrix};
use crate::Result;

/// Householder reduction to tridiagonal form.
///
/// Returns `(T, U)` with `Uᵀ A U = T`. Entries of `T` outside the three
/// central diagonals are set to exactly zero. Columns that already have no
/// entries below the first sub-diagonal are skipped, so tridiagonal input
/// comes back unchanged with `U = I`.
pub fn tridiagonalize(a: &SymmetricMatrix) -> Result<(SymmetricMatrix, Matrix)> {
    a.check_finite()?;
    let n = a.order();
    let mut t = a.as_matrix().clone();
    let mut u = Matrix::identity(n);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        let tail: f64 = (k + 2..n).map(|i| t[(i, k)] * t[(i, k)]).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = t[(k + 1, k)];
        let norm = (x0 * x0 + tail).sqrt();
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        v.iter_mut().for_each(|x| *x = 0.0);
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = t[(i, k)];
        }
        let beta = 2.0 / (v[k + 1] * v[k + 1] + tail);

        // H T H = T - v wᵀ - w vᵀ with p = β T v, w = p - (β/2)(vᵀp) v.
        for i in 0..n {
            p[i] = beta * (k + 1..n).map(|j| t[(i, j)] * v[j]).sum::<f64>();
        }
        let half = 0.5 * beta * (k + 1..n).map(|j| v[j] * p[j]).sum::<f64>();
        let w: Vec<f64> = (0..n).map(|i| p[i] - half * v[i]).collect();
        for i in 0..n {
            for j in 0..n {
                t[(i, j)] -= v[i] * w[j] + w[i] * v[j];
            }
        }

        for i in 0..n {
            let s = beta * (k + 1..n).map(|l| u[(i, l)] * v[l]).sum::<f64>();
            for l in k + 1..n {
                u[(i, l)] -= s * v[l];
            }
        }
    }

    for i in 0..n {
        for j in 0..n {
            if i.abs_diff(j) > 1 {
                t[(i, j)] = 0.0;
            }
        }
    }
    Ok((SymmetricMatrix::symmetrize(t), u))
}
