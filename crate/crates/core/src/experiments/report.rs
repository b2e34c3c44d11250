//! CSV and text output of experiment reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::mesh_io::fmt_f64;

use super::{ExperimentReport, ResolutionRow};

/// `index,lambda_h,lambda_exact,abs_error` rows plus a `zero_count,<int>`
/// footer (`NA` when the solver did not count the kernel).
pub fn spectrum_csv(row: &ResolutionRow) -> String {
    let mut s = String::from("index,lambda_h,lambda_exact,abs_error\n");
    for r in &row.comparison.rows {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            r.index,
            fmt_f64(r.lambda_h),
            fmt_f64(r.lambda_exact),
            fmt_f64(r.abs_error)
        );
    }
    let _ = writeln!(s, "zero_count,{}", zero_count_text(row));
    s
}

fn zero_count_text(row: &ResolutionRow) -> String {
    row.zero_count.map_or_else(|| "NA".to_string(), |z| z.to_string())
}

/// `h,abs_error_lambda1,rate`; the first row has an empty rate.
pub fn rates_csv(report: &ExperimentReport) -> String {
    let h: Vec<f64> = report.rows.iter().map(|r| r.h).collect();
    rates_table(&h, &report.lambda1_errors, report.rates.as_deref())
}

/// `h,abs_error_lambda1,rate` table from raw columns; `rates[i]` belongs to
/// row `i + 1`.
pub fn rates_table(h: &[f64], errors: &[f64], rates: Option<&[f64]>) -> String {
    let mut s = String::from("h,abs_error_lambda1,rate\n");
    for (i, (&hi, &ei)) in h.iter().zip(errors).enumerate() {
        let rate = match rates {
            Some(r) if i > 0 => fmt_f64(r[i - 1]),
            _ => String::new(),
        };
        let _ = writeln!(s, "{},{},{}", fmt_f64(hi), fmt_f64(ei), rate);
    }
    s
}

/// Human-readable `key: value` summary.
pub fn summary_text(report: &ExperimentReport) -> String {
    let sc = &report.scenario;
    let mut s = String::new();
    let _ = writeln!(s, "domain: {:?}", sc.domain.bounds());
    let _ = writeln!(s, "degree: {}", sc.degree);
    let _ = writeln!(s, "refine: {}", sc.refine);
    let _ = writeln!(s, "bc: {}", sc.bc);
    let _ = writeln!(s, "num_eigs: {}", sc.num_eigs);
    let _ = writeln!(s, "zero_tol: {:e}", sc.zero_tol);
    let _ = writeln!(s, "solver: {}", sc.solver);
    for row in &report.rows {
        let c = &row.comparison;
        let _ = writeln!(s, "[n = {}]", row.n);
        let _ = writeln!(s, "h_subcube: {}", fmt_f64(row.h));
        let _ = writeln!(s, "max_h_t: {}", fmt_f64(row.max_h_t));
        let _ = writeln!(s, "max_shape_ratio: {}", fmt_f64(row.max_shape_ratio));
        let _ = writeln!(s, "tets: {}", row.num_tets);
        let _ = writeln!(s, "reduced_dim: {}", row.reduced_dim);
        let _ = writeln!(s, "zero_count: {}", zero_count_text(row));
        let _ = writeln!(s, "compared: {}", row.compared);
        let _ = writeln!(
            s,
            "window_count [{}, {}]: {} (exact {})",
            c.window.0, c.window.1, c.window_count, c.expected_window_count
        );
        let _ = writeln!(s, "spurious: {}", c.spurious);
        let _ = writeln!(s, "max_residual: {:e}", row.max_residual);
        let _ = writeln!(s, "m_orthonormality: {:e}", row.m_orthonormality);
    }
    s
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf> {
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes `spectrum_n<N>.csv` per resolution, `rates.csv`, and `summary.txt`.
pub fn emit_tables(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = Vec::new();
    for row in &report.rows {
        out.push(write(
            dir.join(format!("spectrum_n{}.csv", row.n)),
            &spectrum_csv(row),
        )?);
    }
    out.push(write(dir.join("rates.csv"), &rates_csv(report))?);
    out.push(write(dir.join("summary.txt"), &summary_text(report))?);
    Ok(out)
}
