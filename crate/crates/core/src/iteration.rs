//! Stepping functions for the iteration families and the trace runner.
//!
//! Every QR-type step maps `A_k` to `A_{k+1} = R Q` where `Q R` is the
//! positive-diagonal factorization of (a transform of) `A_k`, and folds the
//! applied orthonormal factor into the eigenvector estimate `V_k`. The
//! product `R Q` is symmetrized after every step.

use std::fmt;
use std::str::FromStr;

use crate::linalg::{
    cholesky_upper, qr_factor, sym_permute, tridiagonalize, EigenDecomposition, Matrix,
    Permutation, SymmetricMatrix,
};
use crate::metrics::error_ek;
use crate::strategy::{self, StrategyId};
use crate::{Error, Result};

/// Relative shift perturbation used when the shifted matrix is singular.
pub const SHIFT_RETRY_SCALE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmKind {
    /// Classical unshifted QR iteration.
    Qr,
    /// QR iteration after reduction to tridiagonal form.
    Qrh,
    /// Tridiagonal QR with shift `s = A_k(N,N)`, no deflation.
    Qrs,
    /// Cholesky iteration on `B_0 = A²`.
    Cholesky,
    /// QR iteration with a symmetric permutation before each factorization.
    PermQr(StrategyId),
}

impl AlgorithmKind {
    /// The six curves of the reference experiment, in legend order.
    pub const REFERENCE_SET: [AlgorithmKind; 6] = [
        AlgorithmKind::Qr,
        AlgorithmKind::Qrh,
        AlgorithmKind::Qrs,
        AlgorithmKind::PermQr(StrategyId::DiagonalOrder),
        AlgorithmKind::PermQr(StrategyId::ColumnOrder),
        AlgorithmKind::PermQr(StrategyId::Bic),
    ];

    pub fn label(self) -> &'static str {
        match self {
            AlgorithmKind::Qr => "QR",
            AlgorithmKind::Qrh => "QRH",
            AlgorithmKind::Qrs => "QRS",
            AlgorithmKind::Cholesky => "CHOL",
            AlgorithmKind::PermQr(s) => s.label(),
        }
    }

    pub fn needs_truth(self) -> bool {
        matches!(self, AlgorithmKind::PermQr(s) if s.needs_truth())
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qr" => Ok(AlgorithmKind::Qr),
            "qrh" => Ok(AlgorithmKind::Qrh),
            "qrs" => Ok(AlgorithmKind::Qrs),
            "chol" | "cholesky" => Ok(AlgorithmKind::Cholesky),
            other => other
                .parse::<StrategyId>()
                .map(AlgorithmKind::PermQr)
                .map_err(|_| Error::InvalidConfig(format!("unknown algorithm `{s}`"))),
        }
    }
}

/// One iterate.
///
/// For Cholesky iteration `a` holds `B_k` and `v` stays the identity, since
/// that recurrence never forms an orthonormal factor.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationState {
    pub k: usize,
    pub a: SymmetricMatrix,
    /// Accumulated eigenvector estimate `V_k`.
    pub v: Matrix,
    /// Shift used to produce this state (shifted QR only, else 0).
    pub shift: f64,
}

impl IterationState {
    pub fn initial(a: SymmetricMatrix) -> Self {
        let n = a.order();
        Self {
            k: 0,
            a,
            v: Matrix::identity(n),
            shift: 0.0,
        }
    }

    /// Eigenvalue estimate `diag(A_k)`.
    pub fn eigenvalue_estimate(&self) -> Vec<f64> {
        self.a.diagonal()
    }
}

/// Applies one permuted QR step to a bare matrix and returns the next iterate
/// together with the applied orthonormal factor `Pᵀ Q`.
pub(crate) fn perm_qr_next(
    a: &SymmetricMatrix,
    p: &Permutation,
) -> Result<(SymmetricMatrix, Matrix)> {
    let permuted = sym_permute(a, p)?;
    let f = qr_factor(&permuted)?;
    let next = SymmetricMatrix::symmetrize(&f.r * &f.q);
    Ok((next, p.transpose_mul(&f.q)?))
}

pub fn step_qr(s: &IterationState) -> Result<IterationState> {
    let f = qr_factor(&s.a)?;
    Ok(IterationState {
        k: s.k + 1,
        a: SymmetricMatrix::symmetrize(&f.r * &f.q),
        v: &s.v * &f.q,
        shift: 0.0,
    })
}

/// Factors `P A_k Pᵀ = Q R`, sets `A_{k+1} = R Q` and `V_{k+1} = V_k Pᵀ Q`.
pub fn step_perm_qr(s: &IterationState, p: &Permutation) -> Result<IterationState> {
    let (a, factor) = perm_qr_next(&s.a, p)?;
    Ok(IterationState {
        k: s.k + 1,
        a,
        v: &s.v * &factor,
        shift: 0.0,
    })
}

/// Shifted step with `s = A_k(N,N)`: factor `A_k − sI = Q R`, then
/// `A_{k+1} = R Q + sI`. If the shifted matrix is singular the shift is moved
/// by `SHIFT_RETRY_SCALE · max|A_k|` and the factorization retried once.
pub fn step_qrs(s: &IterationState) -> Result<IterationState> {
    let n = s.a.order();
    if n == 0 {
        return step_qr(s);
    }
    let mut shift = s.a[(n - 1, n - 1)];
    let f = match qr_factor(&s.a.shifted(shift)) {
        Ok(f) => f,
        Err(Error::RankDeficient { .. }) => {
            shift += SHIFT_RETRY_SCALE * s.a.max_abs();
            qr_factor(&s.a.shifted(shift))?
        }
        Err(e) => return Err(e),
    };
    let next = (&f.r * &f.q).shifted(-shift);
    Ok(IterationState {
        k: s.k + 1,
        a: SymmetricMatrix::symmetrize(next),
        v: &s.v * &f.q,
        shift,
    })
}

/// `B_k = Rᵀ R`, `B_{k+1} = R Rᵀ`.
pub fn step_cholesky(s: &IterationState) -> Result<IterationState> {
    let r = cholesky_upper(&s.a)?;
    Ok(IterationState {
        k: s.k + 1,
        a: SymmetricMatrix::symmetrize(&r * &r.transpose()),
        v: s.v.clone(),
        shift: 0.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepFailure {
    /// Index of the state that could not be produced.
    pub step: usize,
    pub error: Error,
}

impl fmt::Display for StepFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step, self.error)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub algorithm: AlgorithmKind,
    pub states: Vec<IterationState>,
    /// `E_k²` for each entry of `states`.
    pub errors: Vec<f64>,
    /// Set when the run stopped before the requested iteration count.
    pub failure: Option<StepFailure>,
    pub tag: Option<String>,
}

impl IterationTrace {
    pub fn final_error(&self) -> Option<f64> {
        self.errors.last().copied()
    }

    pub fn final_state(&self) -> Option<&IterationState> {
        self.states.last()
    }

    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs `iters` steps of `alg` from `a0` and records `E_k²` against `truth`
/// at every state, including the initial one.
///
/// For QRH and QRS `a0` is first reduced to tridiagonal form and the
/// reduction's orthonormal factor becomes `V_0`. Cholesky iteration starts
/// from `B_0 = A²` and is scored by `sqrt(diag(B_k))` against `|λ|`.
///
/// A failing step ends the trace early and is recorded in
/// [`IterationTrace::failure`]; only setup errors are returned as `Err`.
pub fn run_iteration(
    a0: &SymmetricMatrix,
    alg: AlgorithmKind,
    iters: usize,
    truth: &EigenDecomposition,
) -> Result<IterationTrace> {
    let n = a0.order();
    if truth.order() != n {
        return Err(Error::OrderMismatch {
            expected: n,
            found: truth.order(),
        });
    }
    let initial = match alg {
        AlgorithmKind::Qrh | AlgorithmKind::Qrs => {
            let (t, u) = tridiagonalize(a0)?;
            IterationState {
                k: 0,
                a: t,
                v: u,
                shift: 0.0,
            }
        }
        AlgorithmKind::Cholesky => IterationState::initial(a0.square()),
        AlgorithmKind::Qr | AlgorithmKind::PermQr(_) => IterationState::initial(a0.clone()),
    };

    let abs_truth: Vec<f64> = truth.values.iter().map(|x| x.abs()).collect();
    let score = |s: &IterationState| -> Result<f64> {
        let e = if alg == AlgorithmKind::Cholesky {
            let est: Vec<f64> = s.a.diagonal().iter().map(|b| b.max(0.0).sqrt()).collect();
            error_ek(&est, &abs_truth)?
        } else {
            error_ek(&s.eigenvalue_estimate(), &truth.values)?
        };
        Ok(e.e_squared())
    };

    let mut errors = Vec::with_capacity(iters + 1);
    errors.push(score(&initial)?);
    let mut states = Vec::with_capacity(iters + 1);
    states.push(initial);
    let mut failure = None;

    for _ in 0..iters {
        let current = states.last().expect("trace starts non-empty");
        let next = match alg {
            AlgorithmKind::Qr | AlgorithmKind::Qrh => step_qr(current),
            AlgorithmKind::Qrs => step_qrs(current),
            AlgorithmKind::Cholesky => step_cholesky(current),
            AlgorithmKind::PermQr(id) => strategy::select(id, &current.a, Some(truth))
                .and_then(|p| step_perm_qr(current, &p)),
        };
        match next {
            Ok(s) => {
                errors.push(score(&s)?);
                states.push(s);
            }
            Err(error) => {
                failure = Some(StepFailure {
                    step: current.k + 1,
                    error,
                });
                break;
            }
        }
    }

    Ok(IterationTrace {
        algorithm: alg,
        states,
        errors,
        failure,
        tag: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{jacobi_eigen, DEFAULT_JACOBI_TOL};
    use crate::metrics::diagmat;

    fn pd_sample() -> SymmetricMatrix {
        // Mᵀ M for a fixed well-conditioned M
        let m = Matrix::from_rows(&[
            vec![1.0, 0.3, -0.2, 0.5],
            vec![0.1, 1.5, 0.4, -0.3],
            vec![-0.6, 0.2, 0.9, 0.1],
            vec![0.2, -0.4, 0.3, 2.2],
        ])
        .unwrap();
        SymmetricMatrix::symmetrize(&m.transpose() * &m)
    }

    fn truth(a: &SymmetricMatrix) -> EigenDecomposition {
        jacobi_eigen(a, DEFAULT_JACOBI_TOL).unwrap()
    }

    fn sorted_eigs(a: &SymmetricMatrix) -> Vec<f64> {
        truth(a).sorted_values()
    }

    #[test]
    fn algorithm_names() {
        for alg in AlgorithmKind::REFERENCE_SET {
            assert_eq!(alg.label().parse::<AlgorithmKind>().unwrap(), alg);
        }
        assert_eq!(
            "chol".parse::<AlgorithmKind>().unwrap(),
            AlgorithmKind::Cholesky
        );
        assert_eq!(
            "ID".parse::<AlgorithmKind>().unwrap(),
            AlgorithmKind::PermQr(StrategyId::Identity)
        );
        assert!("lu".parse::<AlgorithmKind>().is_err());
    }

    #[test]
    fn positive_diagonal_is_a_fixed_point() {
        let s = IterationState::initial(diagmat(&[3.0, 1.0, 2.0]));
        let next = step_qr(&s).unwrap();
        assert_eq!(next.a, s.a);
        assert_eq!(next.k, 1);
    }

    #[test]
    fn swap_matrix_stagnates() {
        let a = SymmetricMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let next = step_qr(&IterationState::initial(a.clone())).unwrap();
        assert_eq!(next.a, a);
    }

    #[test]
    fn qr_converges_on_pd_sample() {
        let a = pd_sample();
        let t = truth(&a);
        let mut s = IterationState::initial(a.clone());
        for _ in 0..50 {
            s = step_qr(&s).unwrap();
        }
        assert!(s.a.off_diagonal_norm() < 1e-6);
        let diff = crate::metrics::error_ek(&s.a.diagonal(), &t.values).unwrap();
        assert!(diff.e() < 1e-6);
    }

    #[test]
    fn identity_permutation_is_bitwise_qr() {
        let s = IterationState::initial(pd_sample());
        let a = step_qr(&s).unwrap();
        let b = step_perm_qr(&s, &Permutation::identity(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn permuted_step_on_diagonal_input() {
        let d = diagmat(&[1.0, 4.0, 2.0]);
        let p = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let next = step_perm_qr(&IterationState::initial(d.clone()), &p).unwrap();
        assert_eq!(next.a, sym_permute(&d, &p).unwrap());
    }

    #[test]
    fn permuted_step_is_a_similarity() {
        let a = pd_sample();
        let s = IterationState::initial(a.clone());
        let p = strategy::diord(&s.a);
        let next = step_perm_qr(&s, &p).unwrap();
        for (x, y) in sorted_eigs(&a).iter().zip(sorted_eigs(&next.a)) {
            assert!((x - y).abs() < 1e-10);
        }
        let back = &(&next.v.transpose() * a.as_matrix()) * &next.v;
        assert!(back.max_abs_diff(&next.a) < 1e-12 * a.max_abs());
    }

    #[test]
    fn shifted_step_on_diagonal_uses_retry() {
        let d = diagmat(&[3.0, -1.0, 2.0]);
        let next = step_qrs(&IterationState::initial(d.clone())).unwrap();
        assert_eq!(next.shift, 2.0 + SHIFT_RETRY_SCALE * 3.0);
        assert!(next.a.max_abs_diff(&d) < 1e-15);
    }

    #[test]
    fn shifted_step_on_equal_diagonal_stagnates() {
        // a − 2I = [[0,1],[1,0]] factors with Q = swap, R = I, so R Q + 2I = a.
        let a = SymmetricMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let next = step_qrs(&IterationState::initial(a.clone())).unwrap();
        assert_eq!(next.shift, 2.0);
        assert_eq!(next.a, a);
    }

    #[test]
    fn shifted_step_reduces_off_diagonal() {
        // a − 3I = [[-1,1],[1,0]] = Q R with R = [[√2, -1/√2], [0, 1/√2]],
        // so R Q = [[-3/2, 1/2], [1/2, 1/2]] and the off-diagonal halves.
        let a = SymmetricMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let next = step_qrs(&IterationState::initial(a)).unwrap();
        assert_eq!(next.shift, 3.0);
        assert!((next.a[(0, 1)].abs() - 0.5).abs() < 1e-15);
        assert!((next.a[(0, 0)] - 1.5).abs() < 1e-15);
        assert!((next.a[(1, 1)] - 3.5).abs() < 1e-15);
    }

    #[test]
    fn shifted_beats_plain_on_slow_pd_draw() {
        // member 13 of seed 42 has a close eigenvalue pair that stalls plain QR
        let s = crate::ensemble::gen_positive_definite(
            4,
            crate::ensemble::DEFAULT_THRESHOLD,
            &mut crate::ensemble::matrix_rng(42, 13),
        )
        .unwrap();
        let qr = run_iteration(&s.matrix, AlgorithmKind::Qr, 50, &s.truth).unwrap();
        let qrs = run_iteration(&s.matrix, AlgorithmKind::Qrs, 50, &s.truth).unwrap();
        assert!(qrs.is_complete());
        assert!(qrs.states[0].a.is_tridiagonal(0.0));
        assert!(qrs.final_error().unwrap() < qr.final_error().unwrap());
    }

    #[test]
    fn cholesky_fixed_points() {
        let i = IterationState::initial(SymmetricMatrix::identity(3));
        assert_eq!(step_cholesky(&i).unwrap().a, i.a);
        let d = IterationState::initial(diagmat(&[4.0, 9.0, 1.0]));
        assert_eq!(step_cholesky(&d).unwrap().a, d.a);
    }

    #[test]
    fn cholesky_iterates_are_squares_of_qr_iterates() {
        let a = pd_sample();
        let t = truth(&a);
        let qr = run_iteration(&a, AlgorithmKind::Qr, 30, &t).unwrap();
        let ch = run_iteration(&a, AlgorithmKind::Cholesky, 30, &t).unwrap();
        for (s, b) in qr.states.iter().zip(&ch.states) {
            let sq = s.a.square();
            assert!(sq.max_abs_diff(&b.a) <= 1e-8 * b.a.max_abs());
        }
        assert!(ch.final_error().unwrap() < 1e-10);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let s = IterationState::initial(diagmat(&[1.0, -1.0]));
        assert!(matches!(
            step_cholesky(&s),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn zero_iterations_and_diagonal_input() {
        let a = pd_sample();
        let t = truth(&a);
        let trace = run_iteration(&a, AlgorithmKind::Qr, 0, &t).unwrap();
        assert_eq!(trace.states.len(), 1);
        assert_eq!(trace.errors.len(), 1);
        assert!(trace.errors[0] > 0.0);

        let d = diagmat(&[5.0, 1.0, 3.0]);
        let t = truth(&d);
        for alg in AlgorithmKind::REFERENCE_SET {
            let trace = run_iteration(&d, alg, 10, &t).unwrap();
            assert_eq!(trace.errors.len(), 11, "{alg}");
            assert!(trace.errors.iter().all(|&e| e < 1e-24), "{alg}");
        }
    }

    #[test]
    fn failure_truncates_trace() {
        let singular = SymmetricMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let t = truth(&singular);
        let trace = run_iteration(&singular, AlgorithmKind::Qr, 5, &t).unwrap();
        assert_eq!(trace.states.len(), 1);
        let failure = trace.failure.unwrap();
        assert_eq!(failure.step, 1);
        assert!(matches!(failure.error, Error::RankDeficient { .. }));
    }

    #[test]
    fn truth_order_is_checked() {
        let t = truth(&SymmetricMatrix::identity(3));
        assert!(matches!(
            run_iteration(&pd_sample(), AlgorithmKind::Qr, 1, &t),
            Err(Error::OrderMismatch { .. })
        ));
    }
}
