use std::fs;
use std::path::{Path, PathBuf};

use permqr::{
    generate, jacobi_eigen, matrix_rng, run_ensemble, run_iteration, AlgorithmKind, MatrixClass,
    DEFAULT_JACOBI_TOL,
};

use crate::config::parse_config;
use crate::error::{CliError, Result};
use crate::io::{format_matrix, format_report, format_trace, parse_matrix};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

/// Writes to `path`, or to stdout when `path` is `None`.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p.display().to_string(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(
    matrix: &Path,
    alg: AlgorithmKind,
    iters: usize,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<()> {
    let a = parse_matrix(&read(matrix)?)?;
    let truth = jacobi_eigen(&a, DEFAULT_JACOBI_TOL)
        .map_err(|e| CliError::Numerical(format!("eigenvalue oracle: {e}")))?;
    let mut trace = run_iteration(&a, alg, iters, &truth)
        .map_err(|e| CliError::Numerical(format!("setup: {e}")))?;
    trace.tag = seed.map(|s| format!("seed={s}"));
    emit(out, &format_trace(&trace, seed))?;
    match trace.failure {
        Some(f) => Err(CliError::Numerical(format!("{alg} {f}"))),
        None => Ok(()),
    }
}

pub fn ensemble(config: &Path, out: Option<&Path>) -> Result<()> {
    let cfg = parse_config(&read(config)?)?;
    let report = run_ensemble(&cfg.ensemble).map_err(|e| match e {
        permqr::Error::EnsembleFailed | permqr::Error::GenerationExhausted { .. } => {
            CliError::Ensemble(e.to_string())
        }
        permqr::Error::InvalidConfig(_) => CliError::Input(e.to_string()),
        other => CliError::Numerical(other.to_string()),
    })?;
    let failed = report.fully_failed();
    if !failed.is_empty() {
        let names: Vec<&str> = failed.iter().map(|a| a.label()).collect();
        return Err(CliError::Ensemble(format!(
            "every member failed for {}",
            names.join(", ")
        )));
    }
    let target: Option<PathBuf> = out.map(Path::to_path_buf).or(cfg.out);
    emit(target.as_deref(), &format_report(&report))
}

pub fn gen(
    class: MatrixClass,
    order: usize,
    seed: u64,
    threshold: f64,
    out: Option<&Path>,
) -> Result<()> {
    if order == 0 {
        return Err(CliError::Input("order must be at least 1".into()));
    }
    let sample = generate(class, order, threshold, &mut matrix_rng(seed, 0))
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    emit(out, &format_matrix(&sample.matrix))
}
