//! Per-iteration permutation choices for permuted QR iteration.

use std::fmt;
use std::str::FromStr;

use crate::iteration::perm_qr_next;
use crate::linalg::{EigenDecomposition, Permutation, SymmetricMatrix};
use crate::metrics::error_ek;
use crate::{Error, Result};

/// Largest order for which the exhaustive search is allowed (8! = 40320).
pub const BIC_MAX_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyId {
    /// Always the identity; reduces permuted QR to classical QR.
    Identity,
    /// Sort the diagonal by descending absolute value.
    DiagonalOrder,
    /// Sort columns by descending Euclidean norm.
    ColumnOrder,
    /// Exhaustive argmin of the post-step error (needs known eigenvalues).
    Bic,
}

impl StrategyId {
    pub fn label(self) -> &'static str {
        match self {
            StrategyId::Identity => "ID",
            StrategyId::DiagonalOrder => "DO",
            StrategyId::ColumnOrder => "CO",
            StrategyId::Bic => "BIC",
        }
    }

    pub fn needs_truth(self) -> bool {
        self == StrategyId::Bic
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for StrategyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "id" | "identity" => Ok(StrategyId::Identity),
            "do" | "diagonal" => Ok(StrategyId::DiagonalOrder),
            "co" | "column" => Ok(StrategyId::ColumnOrder),
            "bic" => Ok(StrategyId::Bic),
            _ => Err(Error::InvalidConfig(format!("unknown strategy `{s}`"))),
        }
    }
}

/// Stable descending-by-magnitude ordering of `keys`.
fn order_by_magnitude(keys: &[f64]) -> Permutation {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&i, &j| keys[j].abs().total_cmp(&keys[i].abs()));
    Permutation::new(idx).expect("sorted index list is a bijection")
}

/// Diagonal ordering: `diag(P A Pᵀ)` is non-increasing in absolute value,
/// ties kept in original index order.
pub fn diord(a: &SymmetricMatrix) -> Permutation {
    order_by_magnitude(&a.diagonal())
}

/// Column ordering, i.e. `diord(A·A)` computed from the squared column norms
/// in O(N²) without forming the product.
pub fn column_order(a: &SymmetricMatrix) -> Permutation {
    let n = a.order();
    let norms: Vec<f64> = (0..n)
        .map(|i| {
            let mut s = 0.0;
            for l in 0..n {
                s += a[(i, l)] * a[(l, i)];
            }
            s
        })
        .collect();
    order_by_magnitude(&norms)
}

/// Tries every permutation for one step of permuted QR and keeps the one
/// with the smallest error after the step. Ties go to the lexicographically
/// smallest map. Candidates whose factorization fails are skipped.
pub fn bic_select(a: &SymmetricMatrix, truth: &EigenDecomposition) -> Result<Permutation> {
    let n = a.order();
    if n > BIC_MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: BIC_MAX_ORDER,
        });
    }
    if truth.order() != n {
        return Err(Error::OrderMismatch {
            expected: n,
            found: truth.order(),
        });
    }
    let mut best: Option<(f64, Permutation)> = None;
    let mut last_err = None;
    for p in Permutation::all(n) {
        match perm_qr_next(a, &p) {
            Ok((next, _)) => {
                let e2 = error_ek(&next.diagonal(), &truth.values)?.e_squared();
                if best.as_ref().is_none_or(|(b, _)| e2 < *b) {
                    best = Some((e2, p));
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    match (best, last_err) {
        (Some((_, p)), _) => Ok(p),
        (None, Some(e)) => Err(e),
        (None, None) => unreachable!("at least one candidate is always tried"),
    }
}

pub fn select(
    strategy: StrategyId,
    a: &SymmetricMatrix,
    truth: Option<&EigenDecomposition>,
) -> Result<Permutation> {
    match strategy {
        StrategyId::Identity => Ok(Permutation::identity(a.order())),
        StrategyId::DiagonalOrder => Ok(diord(a)),
        StrategyId::ColumnOrder => Ok(column_order(a)),
        StrategyId::Bic => bic_select(a, truth.ok_or(Error::MissingTruth)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{jacobi_eigen, sym_permute, Matrix, DEFAULT_JACOBI_TOL};
    use crate::metrics::diagmat;
    use proptest::prelude::*;

    fn sample() -> SymmetricMatrix {
        SymmetricMatrix::from_rows(&[
            vec![0.5, 1.2, -0.7, 0.3],
            vec![1.2, -2.0, 0.4, 0.9],
            vec![-0.7, 0.4, 3.1, -1.1],
            vec![0.3, 0.9, -1.1, 1.4],
        ])
        .unwrap()
    }

    fn symmetric(n: usize) -> impl Strategy<Value = SymmetricMatrix> {
        prop::collection::vec(-10.0f64..10.0, n * n)
            .prop_map(move |v| SymmetricMatrix::symmetrize(Matrix::from_vec(n, n, v).unwrap()))
    }

    #[test]
    fn diord_examples() {
        let sorted = diagmat(&[4.0, -3.0, 1.0]);
        assert!(diord(&sorted).is_identity());

        let a = diagmat(&[1.0, -3.0, 2.0]);
        let p = diord(&a);
        assert_eq!(p.one_based(), vec![2, 3, 1]);
        assert_eq!(
            sym_permute(&a, &p).unwrap().diagonal(),
            vec![-3.0, 2.0, 1.0]
        );

        let tie = diagmat(&[2.0, -2.0, 5.0]);
        assert_eq!(diord(&tie).one_based(), vec![3, 1, 2]);
    }

    #[test]
    fn column_order_examples() {
        let a = diagmat(&[1.0, -3.0, 2.0]);
        assert_eq!(column_order(&a), diord(&a));
        assert!(column_order(&SymmetricMatrix::identity(3)).is_identity());
        let a = sample();
        let full = SymmetricMatrix::symmetrize(a.as_matrix() * a.as_matrix());
        assert_eq!(column_order(&a), diord(&full));
    }

    #[test]
    fn bic_trivial_cases() {
        let one = SymmetricMatrix::from_rows(&[vec![3.0]]).unwrap();
        let truth = jacobi_eigen(&one, DEFAULT_JACOBI_TOL).unwrap();
        assert!(bic_select(&one, &truth).unwrap().is_identity());

        let d = diagmat(&[4.0, 1.0, 2.0, 3.0]);
        let truth = jacobi_eigen(&d, DEFAULT_JACOBI_TOL).unwrap();
        assert!(bic_select(&d, &truth).unwrap().is_identity());
    }

    #[test]
    fn bic_beats_every_candidate() {
        let a = sample();
        let truth = jacobi_eigen(&a, DEFAULT_JACOBI_TOL).unwrap();
        let chosen = bic_select(&a, &truth).unwrap();
        let score = |p: &Permutation| {
            let (next, _) = perm_qr_next(&a, p).unwrap();
            error_ek(&next.diagonal(), &truth.values)
                .unwrap()
                .e_squared()
        };
        let best = score(&chosen);
        for p in Permutation::all(4) {
            assert!(best <= score(&p));
        }
        assert!(best <= score(&Permutation::identity(4)));
    }

    #[test]
    fn bic_guards() {
        let big = SymmetricMatrix::identity(9);
        let truth = jacobi_eigen(&big, DEFAULT_JACOBI_TOL).unwrap();
        assert_eq!(
            bic_select(&big, &truth),
            Err(Error::OrderTooLarge { order: 9, max: 8 })
        );
        let a = sample();
        assert_eq!(select(StrategyId::Bic, &a, None), Err(Error::MissingTruth));
        let singular = SymmetricMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let truth = jacobi_eigen(&singular, DEFAULT_JACOBI_TOL).unwrap();
        assert!(matches!(
            bic_select(&singular, &truth),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn select_dispatch() {
        let a = sample();
        let truth = jacobi_eigen(&a, DEFAULT_JACOBI_TOL).unwrap();
        assert!(select(StrategyId::Identity, &a, None)
            .unwrap()
            .is_identity());
        assert_eq!(
            select(StrategyId::DiagonalOrder, &diagmat(&[1.0, -3.0, 2.0]), None)
                .unwrap()
                .one_based(),
            vec![2, 3, 1]
        );
        assert_eq!(
            select(StrategyId::ColumnOrder, &a, None).unwrap(),
            column_order(&a)
        );
        assert_eq!(
            select(StrategyId::Bic, &a, Some(&truth)).unwrap(),
            bic_select(&a, &truth).unwrap()
        );
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [
            StrategyId::Identity,
            StrategyId::DiagonalOrder,
            StrategyId::ColumnOrder,
            StrategyId::Bic,
        ] {
            assert_eq!(s.label().parse::<StrategyId>().unwrap(), s);
        }
        assert!("xx".parse::<StrategyId>().is_err());
    }

    proptest! {
        #[test]
        fn diord_output_is_non_increasing(a in (1usize..8).prop_flat_map(symmetric)) {
            let d = sym_permute(&a, &diord(&a)).unwrap().diagonal();
            prop_assert!(d.windows(2).all(|w| w[0].abs() >= w[1].abs()));
        }

        #[test]
        fn column_order_is_diord_of_square(a in (1usize..8).prop_flat_map(symmetric)) {
            let full = SymmetricMatrix::symmetrize(a.as_matrix() * a.as_matrix());
            prop_assert_eq!(column_order(&a), diord(&full));
        }
    }
}
