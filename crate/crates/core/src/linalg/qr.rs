use super::Matrix;
use crate::{Error, Result};

/// A diagonal entry of R smaller than this (times the max-abs input entry)
/// marks the input as numerically singular.
pub const RANK_TOL: f64 = 1e-12;

/// `Q R` with orthonormal `Q` and upper-triangular `R` whose diagonal is
/// strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct QrFactors {
    pub q: Matrix,
    pub r: Matrix,
}

/// Householder QR of a square matrix.
///
/// After the reflections, any row `i` of `R` with a negative diagonal is
/// negated together with column `i` of `Q`, so the factorization is the
/// unique one with `r(i,i) > 0`. Columns whose sub-diagonal part is already
/// zero are left untouched, which keeps `Q = I` exactly for upper-triangular
/// inputs with a positive diagonal.
pub fn qr_factor(a: &Matrix) -> Result<QrFactors> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    a.check_finite()?;
    let n = a.rows();
    let mut r = a.clone();
    let mut q = Matrix::identity(n);
    let mut v = vec![0.0; n];

    for k in 0..n.saturating_sub(1) {
        let tail: f64 = (k + 1..n).map(|i| r[(i, k)] * r[(i, k)]).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let norm = (x0 * x0 + tail).sqrt();
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        v[k] = x0 - alpha;
        for i in k + 1..n {
            v[i] = r[(i, k)];
        }
        let vtv = v[k] * v[k] + tail;
        let beta = 2.0 / vtv;

        // R <- H R on rows k.., columns k..
        for j in k..n {
            let s: f64 = (k..n).map(|i| v[i] * r[(i, j)]).sum();
            let s = beta * s;
            for i in k..n {
                r[(i, j)] -= s * v[i];
            }
        }
        // Q <- Q H on columns k..
        for i in 0..n {
            let s: f64 = (k..n).map(|l| q[(i, l)] * v[l]).sum();
            let s = beta * s;
            for l in k..n {
                q[(i, l)] -= s * v[l];
            }
        }
        r[(k, k)] = alpha;
        for i in k + 1..n {
            r[(i, k)] = 0.0;
        }
    }

    for i in 0..n {
        if r[(i, i)] < 0.0 {
            for j in i..n {
                r[(i, j)] = -r[(i, j)];
            }
            for l in 0..n {
                q[(l, i)] = -q[(l, i)];
            }
        }
    }

    let tol = RANK_TOL * a.max_abs();
    for i in 0..n {
        let pivot = r[(i, i)];
        if pivot.is_nan() || pivot <= tol {
            return Err(Error::RankDeficient {
                index: i + 1,
                pivot,
            });
        }
    }
    Ok(QrFactors { q, r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random(n: usize, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Matrix::from_fn(n, n, |_, _| StandardNormal.sample(&mut rng))
    }

    /// Modified Gram-Schmidt with the positive-diagonal convention built in.
    fn mgs(a: &Matrix) -> (Matrix, Matrix) {
        let n = a.rows();
        let mut q = a.clone();
        let mut r = Matrix::zeros(n, n);
        for j in 0..n {
            let norm = (0..n).map(|i| q[(i, j)] * q[(i, j)]).sum::<f64>().sqrt();
            r[(j, j)] = norm;
            for i in 0..n {
                q[(i, j)] /= norm;
            }
            for k in j + 1..n {
                let d: f64 = (0..n).map(|i| q[(i, j)] * q[(i, k)]).sum();
                r[(j, k)] = d;
                for i in 0..n {
                    q[(i, k)] -= d * q[(i, j)];
                }
            }
        }
        (q, r)
    }

    #[test]
    fn identity_factors_trivially() {
        let f = qr_factor(&Matrix::identity(4)).unwrap();
        assert_eq!(f.q, Matrix::identity(4));
        assert_eq!(f.r, Matrix::identity(4));
    }

    #[test]
    fn positive_diagonal_is_its_own_r() {
        let d = Matrix::from_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let f = qr_factor(&d).unwrap();
        assert_eq!(f.q, Matrix::identity(3));
        assert_eq!(f.r, d);
    }

    #[test]
    fn swap_matrix_sign_convention() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let f = qr_factor(&a).unwrap();
        assert_eq!(f.q, a);
        assert_eq!(f.r, Matrix::identity(2));
    }

    #[test]
    fn negative_diagonal_is_flipped() {
        let a = Matrix::from_rows(&[vec![-2.0, 0.0], vec![0.0, 5.0]]).unwrap();
        let f = qr_factor(&a).unwrap();
        assert_eq!(f.r.to_rows(), vec![vec![2.0, 0.0], vec![0.0, 5.0]]);
        assert_eq!(f.q.to_rows(), vec![vec![-1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn matches_gram_schmidt_oracle() {
        for seed in 0..50 {
            let a = random(4, seed);
            let f = qr_factor(&a).unwrap();
            let (q, r) = mgs(&a);
            let scale = a.max_abs();
            assert!(f.q.max_abs_diff(&q) < 1e-10, "seed {seed}");
            assert!(f.r.max_abs_diff(&r) < 1e-10 * scale, "seed {seed}");
            assert!((&f.q * &f.r).max_abs_diff(&(&q * &r)) < 1e-12 * scale);
        }
    }

    #[test]
    fn singular_input_is_rank_deficient() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            qr_factor(&a),
            Err(Error::RankDeficient { index: 2, .. })
        ));
        assert!(matches!(
            qr_factor(&Matrix::zeros(3, 3)),
            Err(Error::RankDeficient { index: 1, .. })
        ));
    }

    #[test]
    fn rejects_non_square() {
        assert!(matches!(
            qr_factor(&Matrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }
}
