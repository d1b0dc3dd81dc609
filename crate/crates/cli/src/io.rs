//! Matrix files and CSV output.
//!
//! Floating-point values are written as `{:.16e}` (17 significant digits),
//! which parses back to the identical `f64`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use permqr::{EnsembleReport, IterationTrace, Matrix, SymmetricMatrix};

use crate::error::{CliError, Result};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses the plain-text matrix format: the order `N` on the first line,
/// then `N` rows of `N` whitespace-separated numbers. Blank lines and `#`
/// comments are skipped.
pub fn parse_matrix(text: &str) -> Result<SymmetricMatrix> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| CliError::Input("matrix file is empty".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| CliError::Input(format!("first line must be the order, got `{header}`")))?;
    let mut rows = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        if i >= n {
            return Err(CliError::Input(format!("more than {n} rows")));
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| CliError::Input(format!("row {}: bad number `{tok}`", i + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != n {
            return Err(CliError::Input(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(CliError::Input(format!(
            "expected {n} rows, found {}",
            rows.len()
        )));
    }
    SymmetricMatrix::from_rows(&rows).map_err(|e| CliError::Input(e.to_string()))
}

pub fn format_matrix(m: &Matrix) -> String {
    let mut s = format!("{}\n", m.rows());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&x| fmt_f64(x)).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// `k,e_squared,off_diagonal_norm`, one row per recorded state.
pub fn format_trace(trace: &IterationTrace, seed: Option<u64>) -> String {
    let mut s = String::new();
    writeln!(s, "# algorithm={}", trace.algorithm).unwrap();
    if let Some(seed) = seed {
        writeln!(s, "# seed={seed}").unwrap();
    }
    if let Some(f) = &trace.failure {
        writeln!(s, "# failure={f}").unwrap();
    }
    s.push_str("k,e_squared,off_diagonal_norm\n");
    for (st, e) in trace.states.iter().zip(&trace.errors) {
        writeln!(
            s,
            "{},{},{}",
            st.k,
            fmt_f64(*e),
            fmt_f64(st.a.off_diagonal_norm())
        )
        .unwrap();
    }
    s
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Mean-error table with `#` metadata lines and a `k,<label>...` header.
pub fn format_report(r: &EnsembleReport) -> String {
    let c = &r.config;
    let mut s = String::new();
    let meta: [(&str, String); 12] = [
        ("seed", c.seed.to_string()),
        ("order", c.order.to_string()),
        ("count", c.count.to_string()),
        ("iterations", c.iterations.to_string()),
        ("class", c.class.name().to_string()),
        ("threshold", fmt_f64(c.threshold)),
        (
            "algorithms",
            join(&c.algorithms.iter().map(|a| a.label()).collect::<Vec<_>>()),
        ),
        ("included", r.included.to_string()),
        ("excluded", r.excluded.to_string()),
        ("rejected", r.rejected.to_string()),
        ("failures", join(&r.failures)),
        ("statistic", "mean E_k^2".to_string()),
    ];
    for (k, v) in meta {
        writeln!(s, "# {k}={v}").unwrap();
    }
    writeln!(s, "k,{}", r.labels.join(",")).unwrap();
    for k in 0..=c.iterations {
        let row: Vec<String> = r.means.iter().map(|m| fmt_f64(m[k])).collect();
        writeln!(s, "{k},{}", row.join(",")).unwrap();
    }
    s
}

/// A report CSV read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedReport {
    pub metadata: BTreeMap<String, String>,
    pub labels: Vec<String>,
    /// `means[a][k]`, same layout as [`EnsembleReport::means`].
    pub means: Vec<Vec<f64>>,
}

pub fn parse_report(text: &str) -> Result<ParsedReport> {
    let bad = |msg: String| CliError::Input(msg);
    let mut metadata = BTreeMap::new();
    let mut labels: Option<Vec<String>> = None;
    let mut means: Vec<Vec<f64>> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        if let Some(meta) = line.strip_prefix('#') {
            if let Some((k, v)) = meta.trim().split_once('=') {
                metadata.insert(k.to_string(), v.to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        match &labels {
            None => {
                if fields.first() != Some(&"k") {
                    return Err(bad(format!("line {}: expected header `k,...`", idx + 1)));
                }
                let l: Vec<String> = fields[1..].iter().map(|s| s.to_string()).collect();
                means = vec![Vec::new(); l.len()];
                labels = Some(l);
            }
            Some(l) => {
                if fields.len() != l.len() + 1 {
                    return Err(bad(format!("line {}: wrong column count", idx + 1)));
                }
                let k: usize = fields[0]
                    .parse()
                    .map_err(|_| bad(format!("line {}: bad k", idx + 1)))?;
                if k != means[0].len() {
                    return Err(bad(format!("line {}: rows out of order", idx + 1)));
                }
                for (col, f) in means.iter_mut().zip(&fields[1..]) {
                    col.push(
                        f.parse()
                            .map_err(|_| bad(format!("line {}: bad number `{f}`", idx + 1)))?,
                    );
                }
            }
        }
    }
    let labels = labels.ok_or_else(|| bad("missing header row".into()))?;
    Ok(ParsedReport {
        metadata,
        labels,
        means,
    })
}
