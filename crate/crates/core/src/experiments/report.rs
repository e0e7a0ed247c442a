//! Machine-readable report files: CSV tables plus JSON summary fragments.
//!
//! Every file is written to a temporary sibling and renamed into place, so a
//! failing run never leaves a partial file behind. Floats carry 17
//! significant digits, enough to round-trip an f64.

use std::io::Write;
use std::path::Path;

use serde_json::json;

use crate::error::Result;
use crate::experiments::problem::{BoundaryTrace, ExperimentReport};
use crate::experiments::sweeps::{CollocationRow, NoiseSweepReport, ParamScanReport};
use crate::regularization::LCurve;

/// Writes `bytes` to `path` atomically (temp file + rename).
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Boundary traces: `component,theta,u_numeric,u_exact`.
pub fn write_trace_csv(path: &Path, traces: &[BoundaryTrace]) -> Result<()> {
    let mut out = Vec::new();
    writeln!(out, "component,theta,u_numeric,u_exact")?;
    for trace in traces {
        for i in 0..trace.thetas.len() {
            writeln!(
                out,
                "{},{},{},{}",
                trace.component,
                fmt(trace.thetas[i]),
                fmt(trace.numeric[i]),
                fmt(trace.exact[i])
            )?;
        }
    }
    write_atomic(path, &out)
}

/// L-curve samples: `alpha,residual_norm,solution_norm,curvature`.
pub fn write_lcurve_csv(path: &Path, curve: &LCurve) -> Result<()> {
    let mut out = Vec::new();
    writeln!(out, "alpha,residual_norm,solution_norm,curvature")?;
    for i in 0..curve.alphas.len() {
        writeln!(
            out,
            "{},{},{},{}",
            fmt(curve.alphas[i]),
            fmt(curve.residual_norms[i]),
            fmt(curve.solution_norms[i]),
            fmt(curve.curvatures[i])
        )?;
    }
    write_atomic(path, &out)
}

/// Errors at explicitly requested parameters: `alpha,max_relative_error`.
pub fn write_alpha_table_csv(path: &Path, report: &ExperimentReport) -> Result<()> {
    let mut out = Vec::new();
    writeln!(out, "alpha,max_relative_error")?;
    for row in &report.alpha_table {
        writeln!(out, "{},{}", fmt(row.alpha), fmt(row.error))?;
    }
    write_atomic(path, &out)
}

/// Noise sweep cells: `delta,seed_index,seed,optimal_alpha,error`.
pub fn write_noise_sweep_csv(path: &Path, report: &NoiseSweepReport) -> Result<()> {
    let mut out = Vec::new();
    writeln!(out, "delta,seed_index,seed,optimal_alpha,error")?;
    for row in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt(row.delta),
            row.seed_index,
            row.seed,
            fmt(row.optimal_alpha),
            fmt(row.error)
        )?;
    }
    write_atomic(path, &out)
}

/// Scan cells: `n,r,error,suitable_alpha` with empty fields for failures.
pub fn write_param_scan_csv(path: &Path, report: &ParamScanReport) -> Result<()> {
    let mut out = Vec::new();
    writeln!(out, "n,r,max_relative_error,suitable_alpha")?;
    for cell in &report.cells {
        let error = cell.error.map(fmt).unwrap_or_default();
        let alpha = cell.suitable_alpha.map(fmt).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{}",
            cell.source_points,
            fmt(cell.source_radius),
            error,
            alpha
        )?;
    }
    write_atomic(path, &out)
}

/// Collocation sweep rows: `m,error,suitable_alpha`.
pub fn write_collocation_csv(path: &Path, rows: &[CollocationRow]) -> Result<()> {
    let mut out = Vec::new();
    writeln!(out, "m,max_relative_error,suitable_alpha")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{}",
            row.collocation_points,
            fmt(row.error),
            fmt(row.suitable_alpha)
        )?;
    }
    write_atomic(path, &out)
}

/// Key numbers of a solve as a JSON fragment for the run summary.
pub fn solve_summary(report: &ExperimentReport) -> serde_json::Value {
    json!({
        "max_relative_error": report.max_relative_error,
        "alpha_used": report.alpha_used,
        "suitable_alpha": report.suitable_alpha,
        "optimal_alpha": report.optimal_alpha,
        "residual_norm": report.residual_norm,
        "solution_norm": report.solution_norm,
        "dirichlet_neumann_row_norm_ratio": report.dirichlet_neumann_row_norm_ratio,
        "alpha_table": report.alpha_table,
    })
}

/// Key numbers of a noise sweep as a JSON fragment.
pub fn sweep_summary(report: &NoiseSweepReport) -> serde_json::Value {
    json!({
        "medians": report.medians,
        "error_fit": report.error_fit,
        "alpha_fit": report.alpha_fit,
    })
}
