//! CSV emission: header row, LF line endings, round-trip-exact floats.

use std::io::Write;
use std::path::Path;

use super::ResultRow;

pub const HEADER: &str =
    "experiment,scheme,param1_name,param1,param2_name,param2,metric,value,n,ci95";

/// Render rows to a CSV string. Rust's shortest round-trip float formatting
/// keeps every value decimal-exact.
pub fn rows_to_string(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.experiment,
            r.scheme,
            r.param1_name,
            r.param1,
            r.param2_name,
            r.param2,
            r.metric,
            r.value,
            r.n,
            r.ci95
        ));
    }
    out
}

pub fn write_csv(path: &Path, rows: &[ResultRow]) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(rows_to_string(rows).as_bytes())
}

/// 95% binomial half-width, `1.96 sqrt(p (1 - p) / n)`.
pub fn binomial_ci95(errors: u64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = errors as f64 / n as f64;
    1.96 * (p * (1.0 - p) / n as f64).sqrt()
}
