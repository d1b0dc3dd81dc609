//! Flat `key = value` run configuration.
//!
//! ```text
//! # Figure 1b, desk scale
//! order = 4
//! count = 1000
//! iterations = 50
//! class = pd
//! algorithms = qr, qrh, qrs, do, co, bic
//! seed = 42
//! threshold = 1e-6
//! out = fig1b.csv
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Unknown or repeated
//! keys are errors. Missing keys take the [`EnsembleConfig`] defaults.

use std::collections::HashSet;
use std::path::PathBuf;

use permqr::{AlgorithmKind, EnsembleConfig, MatrixClass};

use crate::error::{CliError, Result};

pub const KEYS: [&str; 8] = [
    "order",
    "count",
    "iterations",
    "class",
    "algorithms",
    "seed",
    "threshold",
    "out",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfigFile {
    pub ensemble: EnsembleConfig,
    pub out: Option<PathBuf>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Input(format!("line {line}: bad value for `{key}`: {e}")))
}

pub fn parse_config(text: &str) -> Result<RunConfigFile> {
    let mut cfg = EnsembleConfig::default();
    let mut out = None;
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("line {line}: expected `key = value`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(CliError::Input(format!("line {line}: unknown key `{key}`")));
        }
        if !seen.insert(key.to_string()) {
            return Err(CliError::Input(format!(
                "line {line}: duplicate key `{key}`"
            )));
        }
        match key {
            "order" => cfg.order = parse_value(key, value, line)?,
            "count" => cfg.count = parse_value(key, value, line)?,
            "iterations" => cfg.iterations = parse_value(key, value, line)?,
            "class" => cfg.class = parse_value::<MatrixClass>(key, value, line)?,
            "algorithms" => {
                cfg.algorithms = value
                    .split(',')
                    .map(|s| parse_value::<AlgorithmKind>(key, s.trim(), line))
                    .collect::<Result<_>>()?
            }
            "seed" => cfg.seed = parse_value(key, value, line)?,
            "threshold" => cfg.threshold = parse_value(key, value, line)?,
            "out" => {
                if value.is_empty() {
                    return Err(CliError::Input(format!("line {line}: empty `out`")));
                }
                out = Some(PathBuf::from(value));
            }
            _ => unreachable!("key list checked above"),
        }
    }
    cfg.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(RunConfigFile { ensemble: cfg, out })
}
