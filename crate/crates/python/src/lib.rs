//! Python bindings. Matrices cross the boundary as lists of row lists and
//! permutations as 0-based index lists.

use permqr::{
    AlgorithmKind, EigenDecomposition, EnsembleConfig, Matrix, MatrixClass, Permutation,
    StrategyId, SymmetricMatrix, DEFAULT_JACOBI_TOL,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(permqr, PermqrError, PyValueError);

type Rows = Vec<Vec<f64>>;

fn err(e: permqr::Error) -> PyErr {
    PermqrError::new_err(e.to_string())
}

fn symmetric(a: Rows) -> PyResult<SymmetricMatrix> {
    SymmetricMatrix::from_rows(&a).map_err(err)
}

fn permutation(map: Vec<usize>) -> PyResult<Permutation> {
    Permutation::new(map).map_err(err)
}

fn truth(a: &SymmetricMatrix) -> PyResult<EigenDecomposition> {
    permqr::jacobi_eigen(a, DEFAULT_JACOBI_TOL).map_err(err)
}

fn parse<T: std::str::FromStr<Err = permqr::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

/// Householder QR with positive R diagonal. Returns `(q, r)`.
#[pyfunction]
fn qr_factor(a: Rows) -> PyResult<(Rows, Rows)> {
    let m = Matrix::from_rows(&a).map_err(err)?;
    let f = permqr::qr_factor(&m).map_err(err)?;
    Ok((f.q.to_rows(), f.r.to_rows()))
}

/// Upper Cholesky factor `R` with `A = Rᵀ R`.
#[pyfunction]
fn cholesky_upper(a: Rows) -> PyResult<Rows> {
    Ok(permqr::cholesky_upper(&symmetric(a)?)
        .map_err(err)?
        .to_rows())
}

/// Returns `(t, u)` with `uᵀ a u = t` tridiagonal.
#[pyfunction]
fn tridiagonalize(a: Rows) -> PyResult<(Rows, Rows)> {
    let (t, u) = permqr::tridiagonalize(&symmetric(a)?).map_err(err)?;
    Ok((t.to_rows(), u.to_rows()))
}

/// Cyclic Jacobi eigensolver. Returns `(values, vectors)`, eigenvectors as columns.
#[pyfunction]
#[pyo3(signature = (a, tol = DEFAULT_JACOBI_TOL))]
fn jacobi_eigen(a: Rows, tol: f64) -> PyResult<(Vec<f64>, Rows)> {
    let e = permqr::jacobi_eigen(&symmetric(a)?, tol).map_err(err)?;
    Ok((e.values, e.vectors.to_rows()))
}

/// `P A Pᵀ` for a 0-based index map.
#[pyfunction]
fn sym_permute(a: Rows, perm: Vec<usize>) -> PyResult<Rows> {
    let out = permqr::sym_permute(&symmetric(a)?, &permutation(perm)?).map_err(err)?;
    Ok(out.to_rows())
}

/// Permutation chosen by a strategy (`id`, `do`, `co` or `bic`).
#[pyfunction]
fn select(strategy: &str, a: Rows) -> PyResult<Vec<usize>> {
    let id: StrategyId = parse(strategy)?;
    let a = symmetric(a)?;
    let t = if id.needs_truth() {
        Some(truth(&a)?)
    } else {
        None
    };
    let p = permqr::select(id, &a, t.as_ref()).map_err(err)?;
    Ok(p.map().to_vec())
}

#[pyfunction]
fn dsort(v: Vec<f64>) -> Vec<f64> {
    permqr::dsort(&v)
}

/// Squared eigenvalue error between an estimate and the true spectrum.
#[pyfunction]
fn error_ek(estimate: Vec<f64>, truth: Vec<f64>) -> PyResult<f64> {
    Ok(permqr::error_ek(&estimate, &truth)
        .map_err(err)?
        .e_squared())
}

/// Outcome of one iteration run.
#[pyclass(module = "permqr", frozen, get_all)]
struct Trace {
    algorithm: String,
    errors: Vec<f64>,
    /// Iterates `A_k`, one per recorded step.
    iterates: Vec<Rows>,
    /// Accumulated orthonormal factors `V_k`.
    vectors: Vec<Rows>,
    /// `(step, message)` if a step failed and the trace was truncated.
    failure: Option<(usize, String)>,
}

#[pymethods]
impl Trace {
    #[getter]
    fn final_error(&self) -> Option<f64> {
        self.errors.last().copied()
    }

    fn __repr__(&self) -> String {
        format!(
            "Trace(algorithm={}, steps={}, final_error={:?})",
            self.algorithm,
            self.errors.len().saturating_sub(1),
            self.final_error()
        )
    }
}

/// Runs `iters` steps of `algorithm` (qr, qrh, qrs, chol, id, do, co, bic),
/// scoring against Jacobi eigenvalues of `a`.
#[pyfunction]
#[pyo3(signature = (a, algorithm, iters = 50))]
fn run_iteration(py: Python<'_>, a: Rows, algorithm: &str, iters: usize) -> PyResult<Trace> {
    let alg: AlgorithmKind = parse(algorithm)?;
    let a = symmetric(a)?;
    let t = truth(&a)?;
    let trace = py
        .detach(|| permqr::run_iteration(&a, alg, iters, &t))
        .map_err(err)?;
    Ok(Trace {
        algorithm: alg.label().to_string(),
        errors: trace.errors.clone(),
        iterates: trace.states.iter().map(|s| s.a.to_rows()).collect(),
        vectors: trace.states.iter().map(|s| s.v.to_rows()).collect(),
        failure: trace
            .failure
            .as_ref()
            .map(|f| (f.step, f.error.to_string())),
    })
}

/// Averaged error curves of an ensemble experiment.
#[pyclass(module = "permqr", frozen, get_all)]
struct EnsembleReport {
    labels: Vec<String>,
    means: Vec<Vec<f64>>,
    included: usize,
    excluded: usize,
    rejected: usize,
    failures: Vec<usize>,
    seed: u64,
}

#[pymethods]
impl EnsembleReport {
    /// Mean curve for one label, e.g. `report.curve("CO")`.
    fn curve(&self, label: &str) -> Option<Vec<f64>> {
        self.labels
            .iter()
            .position(|l| l.eq_ignore_ascii_case(label))
            .map(|i| self.means[i].clone())
    }

    fn __repr__(&self) -> String {
        format!(
            "EnsembleReport(labels={:?}, included={}, seed={})",
            self.labels, self.included, self.seed
        )
    }
}

#[pyfunction]
#[pyo3(signature = (order = 4, count = 1000, iterations = 50, matrix_class = "pd", algorithms = None, seed = 0, threshold = 1e-6))]
#[allow(clippy::too_many_arguments)]
fn run_ensemble(
    py: Python<'_>,
    order: usize,
    count: usize,
    iterations: usize,
    matrix_class: &str,
    algorithms: Option<Vec<String>>,
    seed: u64,
    threshold: f64,
) -> PyResult<EnsembleReport> {
    let algorithms = match algorithms {
        Some(names) => names
            .iter()
            .map(|n| parse::<AlgorithmKind>(n))
            .collect::<PyResult<_>>()?,
        None => AlgorithmKind::REFERENCE_SET.to_vec(),
    };
    let cfg = EnsembleConfig {
        order,
        count,
        iterations,
        class: parse::<MatrixClass>(matrix_class)?,
        algorithms,
        seed,
        threshold,
    };
    let r = py.detach(|| permqr::run_ensemble(&cfg)).map_err(err)?;
    Ok(EnsembleReport {
        labels: r.labels,
        means: r.means,
        included: r.included,
        excluded: r.excluded,
        rejected: r.rejected,
        failures: r.failures,
        seed,
    })
}

/// One seeded sample of a matrix class. Returns `(matrix, eigenvalues)`.
#[pyfunction]
#[pyo3(signature = (matrix_class, order, seed, index = 0, threshold = 1e-6))]
fn generate(
    matrix_class: &str,
    order: usize,
    seed: u64,
    index: u64,
    threshold: f64,
) -> PyResult<(Rows, Vec<f64>)> {
    let class: MatrixClass = parse(matrix_class)?;
    let s = permqr::generate(
        class,
        order,
        threshold,
        &mut permqr::matrix_rng(seed, index),
    )
    .map_err(err)?;
    Ok((s.matrix.to_rows(), s.truth.values))
}

#[pymodule]
#[pyo3(name = "permqr")]
fn permqr_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PermqrError", m.py().get_type::<PermqrError>())?;
    m.add_class::<Trace>()?;
    m.add_class::<EnsembleReport>()?;
    m.add_function(wrap_pyfunction!(qr_factor, m)?)?;
    m.add_function(wrap_pyfunction!(cholesky_upper, m)?)?;
    m.add_function(wrap_pyfunction!(tridiagonalize, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_eigen, m)?)?;
    m.add_function(wrap_pyfunction!(sym_permute, m)?)?;
    m.add_function(wrap_pyfunction!(select, m)?)?;
    m.add_function(wrap_pyfunction!(dsort, m)?)?;
    m.add_function(wrap_pyfunction!(error_ek, m)?)?;
    m.add_function(wrap_pyfunction!(run_iteration, m)?)?;
    m.add_function(wrap_pyfunction!(run_ensemble, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    Ok(())
}
