//! Random matrix ensembles and averaged error curves.
//!
//! Each ensemble member `i` draws from its own ChaCha8 stream selected by
//! `(seed, i)`, so results do not depend on how members are scheduled across
//! threads. Every configured algorithm runs on the same member matrix and a
//! member is dropped from all averages if any algorithm fails on it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::iteration::{run_iteration, AlgorithmKind, StepFailure};
use crate::linalg::{
    jacobi_eigen, EigenDecomposition, Matrix, SymmetricMatrix, DEFAULT_JACOBI_TOL,
};
use crate::strategy::BIC_MAX_ORDER;
use crate::{Error, Result};

pub const DEFAULT_THRESHOLD: f64 = 1e-6;
/// Consecutive rejections after which generation gives up.
pub const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixClass {
    /// `(M + Mᵀ)/2` with standard normal `M`: definite and indefinite mixed.
    Symmetric,
    /// `Mᵀ M` with standard normal `M`.
    PositiveDefinite,
    /// Diagonal with standard normal entries. Every algorithm starts at its
    /// fixed point, which makes all error curves identically zero.
    Diagonal,
}

impl MatrixClass {
    pub fn name(self) -> &'static str {
        match self {
            MatrixClass::Symmetric => "sym",
            MatrixClass::PositiveDefinite => "pd",
            MatrixClass::Diagonal => "diag",
        }
    }
}

impl std::str::FromStr for MatrixClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sym" | "symmetric" => Ok(MatrixClass::Symmetric),
            "pd" | "positive_definite" | "positive-definite" => Ok(MatrixClass::PositiveDefinite),
            "diag" | "diagonal" => Ok(MatrixClass::Diagonal),
            _ => Err(Error::InvalidConfig(format!("unknown matrix class `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub order: usize,
    pub count: usize,
    pub iterations: usize,
    pub class: MatrixClass,
    pub algorithms: Vec<AlgorithmKind>,
    pub seed: u64,
    /// Draws whose smallest |eigenvalue| falls below this are rejected.
    pub threshold: f64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            order: 4,
            count: 1000,
            iterations: 50,
            class: MatrixClass::PositiveDefinite,
            algorithms: AlgorithmKind::REFERENCE_SET.to_vec(),
            seed: 0,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.order == 0 {
            return bad("order must be at least 1".into());
        }
        if self.count == 0 {
            return bad("count must be at least 1".into());
        }
        if self.algorithms.is_empty() {
            return bad("at least one algorithm is required".into());
        }
        if !(self.threshold >= 0.0 && self.threshold.is_finite()) {
            return bad(format!(
                "threshold must be finite and >= 0, got {}",
                self.threshold
            ));
        }
        if self.order > BIC_MAX_ORDER && self.algorithms.iter().any(|a| a.needs_truth()) {
            return bad(format!(
                "BIC needs order <= {BIC_MAX_ORDER}, got {}",
                self.order
            ));
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].contains(a) {
                return bad(format!("algorithm {a} listed twice"));
            }
        }
        Ok(())
    }
}

/// A generated matrix with its Jacobi eigen-decomposition.
#[derive(Debug, Clone)]
pub struct Sample {
    pub matrix: SymmetricMatrix,
    pub truth: EigenDecomposition,
    /// Draws rejected before this one was accepted.
    pub rejected: usize,
}

/// Deterministic stream for ensemble member `index`.
pub fn matrix_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn normal_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(n, n, |_, _| StandardNormal.sample(rng))
}

fn accept_or_redraw<R: Rng + ?Sized>(
    rng: &mut R,
    threshold: f64,
    mut draw: impl FnMut(&mut R) -> SymmetricMatrix,
) -> Result<Sample> {
    for rejected in 0..MAX_REJECTIONS {
        let matrix = draw(rng);
        let truth = jacobi_eigen(&matrix, DEFAULT_JACOBI_TOL)?;
        if truth.min_abs_value() >= threshold {
            return Ok(Sample {
                matrix,
                truth,
                rejected,
            });
        }
    }
    Err(Error::GenerationExhausted {
        attempts: MAX_REJECTIONS,
    })
}

pub fn gen_symmetric<R: Rng + ?Sized>(order: usize, threshold: f64, rng: &mut R) -> Result<Sample> {
    accept_or_redraw(rng, threshold, |rng| {
        SymmetricMatrix::symmetrize(normal_matrix(order, rng))
    })
}

pub fn gen_positive_definite<R: Rng + ?Sized>(
    order: usize,
    threshold: f64,
    rng: &mut R,
) -> Result<Sample> {
    accept_or_redraw(rng, threshold, |rng| {
        let m = normal_matrix(order, rng);
        SymmetricMatrix::symmetrize(&m.transpose() * &m)
    })
}

pub fn gen_diagonal<R: Rng + ?Sized>(order: usize, threshold: f64, rng: &mut R) -> Result<Sample> {
    accept_or_redraw(rng, threshold, |rng| {
        let d: Vec<f64> = (0..order).map(|_| StandardNormal.sample(rng)).collect();
        crate::metrics::diagmat(&d)
    })
}

pub fn generate<R: Rng + ?Sized>(
    class: MatrixClass,
    order: usize,
    threshold: f64,
    rng: &mut R,
) -> Result<Sample> {
    match class {
        MatrixClass::Symmetric => gen_symmetric(order, threshold, rng),
        MatrixClass::PositiveDefinite => gen_positive_definite(order, threshold, rng),
        MatrixClass::Diagonal => gen_diagonal(order, threshold, rng),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleReport {
    pub config: EnsembleConfig,
    /// Column labels, one per configured algorithm.
    pub labels: Vec<String>,
    /// `means[a][k]`: mean `E_k²` of algorithm `a` over included members.
    pub means: Vec<Vec<f64>>,
    pub included: usize,
    /// Members dropped because at least one algorithm failed on them.
    pub excluded: usize,
    /// Total draws rejected by the invertibility threshold.
    pub rejected: usize,
    /// Per algorithm, how many members it failed on.
    pub failures: Vec<usize>,
}

impl EnsembleReport {
    pub fn curve(&self, alg: AlgorithmKind) -> Option<&[f64]> {
        let i = self.config.algorithms.iter().position(|&a| a == alg)?;
        Some(&self.means[i])
    }

    /// Algorithms that failed on every member.
    pub fn fully_failed(&self) -> Vec<AlgorithmKind> {
        self.config
            .algorithms
            .iter()
            .zip(&self.failures)
            .filter(|(_, &f)| f == self.config.count)
            .map(|(&a, _)| a)
            .collect()
    }
}

/// Outcome for one ensemble member.
#[derive(Debug, Clone)]
pub struct MemberResult {
    pub rejected: usize,
    /// One error curve per algorithm, or the failure for that algorithm.
    pub curves: Vec<std::result::Result<Vec<f64>, StepFailure>>,
}

/// Runs every configured algorithm on member `index` of the ensemble.
pub fn run_member(cfg: &EnsembleConfig, index: usize) -> Result<MemberResult> {
    let mut rng = matrix_rng(cfg.seed, index as u64);
    let sample = generate(cfg.class, cfg.order, cfg.threshold, &mut rng)?;
    let curves = cfg
        .algorithms
        .iter()
        .map(|&alg| {
            let trace = run_iteration(&sample.matrix, alg, cfg.iterations, &sample.truth)?;
            Ok(match trace.failure {
                None => Ok(trace.errors),
                Some(f) => Err(f),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MemberResult {
        rejected: sample.rejected,
        curves,
    })
}

/// Generates `cfg.count` matrices and averages the `E_k²` curves.
///
/// Members run in parallel; sums are accumulated in member order so the
/// report is bit-identical across runs and thread counts.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleReport> {
    cfg.validate()?;
    let members: Vec<MemberResult> = (0..cfg.count)
        .into_par_iter()
        .map(|i| run_member(cfg, i))
        .collect::<Result<_>>()?;

    let n_alg = cfg.algorithms.len();
    let len = cfg.iterations + 1;
    let mut sums = vec![vec![0.0; len]; n_alg];
    let mut failures = vec![0; n_alg];
    let (mut included, mut excluded, mut rejected) = (0, 0, 0);

    for m in &members {
        rejected += m.rejected;
        let mut ok = true;
        for (a, c) in m.curves.iter().enumerate() {
            if c.is_err() {
                failures[a] += 1;
                ok = false;
            }
        }
        if !ok {
            excluded += 1;
            continue;
        }
        included += 1;
        for (sum, curve) in sums.iter_mut().zip(&m.curves) {
            let curve = curve.as_ref().expect("checked above");
            for (s, e) in sum.iter_mut().zip(curve) {
                *s += e;
            }
        }
    }

    if included == 0 {
        return Err(Error::EnsembleFailed);
    }
    let means = sums
        .into_iter()
        .map(|s| s.into_iter().map(|x| x / included as f64).collect())
        .collect();
    Ok(EnsembleReport {
        config: cfg.clone(),
        labels: cfg
            .algorithms
            .iter()
            .map(|a| a.label().to_string())
            .collect(),
        means,
        included,
        excluded,
        rejected,
        failures,
    })
}
