use std::fmt;

use super::{Matrix, SymmetricMatrix};
use crate::{Error, Result};

/// Permutation of order N stored as an index map.
///
/// `map[i] = j` means row `i` of the output takes row `j` of the input, i.e.
/// the permutation matrix has `P(i, map[i]) = 1`. Indices are 0-based in
/// storage; [`Permutation::one_based`] gives the 1..N form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &j in &map {
            if j >= n || seen[j] {
                return Err(Error::InvalidPermutation(map));
            }
            seen[j] = true;
        }
        Ok(Self { map })
    }

    /// From a 1-based map as written in MATLAB-style notation.
    pub fn from_one_based(map: &[usize]) -> Result<Self> {
        if map.contains(&0) {
            return Err(Error::InvalidPermutation(map.to_vec()));
        }
        Self::new(map.iter().map(|j| j - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.map.iter().map(|j| j + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Self { map: inv }
    }

    /// The permutation whose matrix is `matrix(self) · matrix(other)`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        check_order(self.order(), other.order())?;
        Ok(Self {
            map: self.map.iter().map(|&j| other.map[j]).collect(),
        })
    }

    /// `P v`: entry `i` of the result is `v[map[i]]`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_order(self.order(), v.len())?;
        Ok(self.map.iter().map(|&j| v[j]).collect())
    }

    /// `Pᵀ M`: row `map[i]` of the result is row `i` of `m`.
    pub fn transpose_mul(&self, m: &Matrix) -> Result<Matrix> {
        check_order(self.order(), m.rows())?;
        let mut out = Matrix::zeros(m.rows(), m.cols());
        for (i, &j) in self.map.iter().enumerate() {
            for c in 0..m.cols() {
                out[(j, c)] = m[(i, c)];
            }
        }
        Ok(out)
    }

    /// All permutations of order `n` in lexicographic order of their maps,
    /// starting from the identity.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut next = Some(Self::identity(n));
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut m = current.map.clone();
            if next_lexicographic(&mut m) {
                next = Some(Self { map: m });
            }
            Some(current)
        })
    }
}

fn next_lexicographic(m: &mut [usize]) -> bool {
    if m.len() < 2 {
        return false;
    }
    let Some(i) = (0..m.len() - 1).rev().find(|&i| m[i] < m[i + 1]) else {
        return false;
    };
    let j = (i + 1..m.len()).rev().find(|&j| m[j] > m[i]).unwrap();
    m.swap(i, j);
    m[i + 1..].reverse();
    true
}

fn check_order(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::OrderMismatch { expected, found })
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.one_based())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `P A Pᵀ`, i.e. `out(i,j) = a(map[i], map[j])`.
pub fn sym_permute(a: &SymmetricMatrix, p: &Permutation) -> Result<SymmetricMatrix> {
    check_order(a.order(), p.order())?;
    let m = Matrix::from_fn(a.order(), a.order(), |i, j| a[(p.map[i], p.map[j])]);
    Ok(SymmetricMatrix::symmetrize(m))
}

/// Dense 0/1 matrix of `p`.
pub fn permutation_matrix(p: &Permutation) -> Matrix {
    let n = p.order();
    let mut m = Matrix::zeros(n, n);
    for (i, &j) in p.map.iter().enumerate() {
        m[(i, j)] = 1.0;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Permutation::new(vec![1, 0, 2]).is_ok());
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert_eq!(
            Permutation::from_one_based(&[2, 3, 1]).unwrap().map(),
            &[1, 2, 0]
        );
    }

    #[test]
    fn matrix_of_identity_and_swap() {
        assert_eq!(
            permutation_matrix(&Permutation::identity(3)),
            Matrix::identity(3)
        );
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert_eq!(
            permutation_matrix(&swap).to_rows(),
            vec![vec![0.0, 1.0], vec![1.0, 0.0]]
        );
    }

    #[test]
    fn composition_is_a_homomorphism() {
        let perms: Vec<_> = Permutation::all(3).collect();
        for p in &perms {
            let pm = permutation_matrix(p);
            assert_eq!(&pm * &pm.transpose(), Matrix::identity(3));
            assert!(p.compose(&p.inverse()).unwrap().is_identity());
            for q in &perms {
                let lhs = permutation_matrix(&p.compose(q).unwrap());
                assert_eq!(lhs, &pm * &permutation_matrix(q));
            }
        }
    }

    #[test]
    fn apply_matches_matrix_vector_product() {
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let v = [10.0, 20.0, 30.0];
        assert_eq!(p.apply(&v).unwrap(), vec![30.0, 10.0, 20.0]);
        assert_eq!(permutation_matrix(&p).mul_vec(&v), vec![30.0, 10.0, 20.0]);
        let m = Matrix::from_fn(3, 2, |i, j| (10 * i + j) as f64);
        assert_eq!(
            p.transpose_mul(&m).unwrap(),
            &permutation_matrix(&p).transpose() * &m
        );
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all: Vec<_> = Permutation::all(4).collect();
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all[0].is_identity());
        assert_eq!(Permutation::all(0).count(), 1);
        assert_eq!(Permutation::all(1).count(), 1);
    }

    #[test]
    fn sym_permute_cases() {
        let a = SymmetricMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert_eq!(
            sym_permute(&a, &swap).unwrap().to_rows(),
            vec![vec![2.0, 0.0], vec![0.0, 1.0]]
        );
        assert_eq!(sym_permute(&a, &Permutation::identity(2)).unwrap(), a);
        assert_eq!(
            sym_permute(&a, &Permutation::identity(3)),
            Err(Error::OrderMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn sym_permute_equals_p_a_pt() {
        let a = SymmetricMatrix::new(Matrix::from_fn(4, 4, |i, j| {
            (i * j) as f64 + (i + j) as f64
        }))
        .unwrap();
        for p in Permutation::all(4) {
            let pm = permutation_matrix(&p);
            let expected = &(&pm * a.as_matrix()) * &pm.transpose();
            assert_eq!(sym_permute(&a, &p).unwrap().as_matrix(), &expected);
        }
    }
}
