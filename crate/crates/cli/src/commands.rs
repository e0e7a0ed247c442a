//! Subcommand implementations: run the experiment, write the report files,
//! assemble the JSON summary with the full effective configuration.

use std::path::{Path, PathBuf};

use serde_json::json;

use cauchy_mfs::experiments::report::{
    solve_summary, sweep_summary, write_alpha_table_csv, write_atomic, write_collocation_csv,
    write_lcurve_csv, write_noise_sweep_csv, write_param_scan_csv, write_trace_csv,
};
use cauchy_mfs::experiments::{collocation_sweep, noise_sweep, param_scan, CauchyProblem};

use crate::config::RunConfig;
use crate::CliError;

fn out_dir(config: &RunConfig) -> Result<PathBuf, CliError> {
    let dir = config
        .out_dir
        .as_ref()
        .ok_or_else(|| CliError::Config("no output directory (set out_dir or --out)".into()))?;
    let dir = PathBuf::from(dir);
    std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn write_summary(
    dir: &Path,
    command: &str,
    config: &RunConfig,
    results: serde_json::Value,
    files: &[&str],
    warnings: &[String],
) -> Result<(), CliError> {
    let summary = json!({
        "command": command,
        "config": config,
        "results": results,
        "files": files,
        "warnings": warnings,
    });
    let bytes = serde_json::to_vec_pretty(&summary)
        .map_err(|e| CliError::Io(format!("cannot serialize summary: {e}")))?;
    write_atomic(&dir.join("summary.json"), &bytes)
        .map_err(|e| CliError::Io(format!("cannot write summary.json: {e}")))?;
    Ok(())
}

pub fn cmd_solve(config: &RunConfig) -> Result<(), CliError> {
    let run = config.validate()?;
    let dir = out_dir(config)?;

    let problem = CauchyProblem::setup(run.geometry, run.exact, run.params, run.noise)?;
    let table = config.alpha_table.clone().unwrap_or_default();
    let report = problem.report(config.alpha, &table)?;

    let mut files = vec!["trace.csv"];
    write_trace_csv(&dir.join("trace.csv"), &report.traces)?;
    if let Some(curve) = &report.lcurve {
        write_lcurve_csv(&dir.join("lcurve.csv"), curve)?;
        files.push("lcurve.csv");
    }
    if !report.alpha_table.is_empty() {
        write_alpha_table_csv(&dir.join("alpha_table.csv"), &report)?;
        files.push("alpha_table.csv");
    }
    if config.dump_matrix {
        problem
            .system
            .write_csv(&dir.join("matrix.csv"), &dir.join("rhs.csv"))?;
        files.push("matrix.csv");
        files.push("rhs.csv");
    }
    write_summary(&dir, "solve", config, solve_summary(&report), &files, &[])?;
    println!(
        "solve: e = {:.6e} at alpha = {:.6e} (corner {}, optimal {}) -> {}",
        report.max_relative_error,
        report.alpha_used,
        report
            .suitable_alpha
            .map_or("n/a".into(), |a| format!("{a:.6e}")),
        report
            .optimal_alpha
            .map_or("n/a".into(), |a| format!("{a:.6e}")),
        dir.display()
    );
    Ok(())
}

pub fn cmd_sweep_noise(config: &RunConfig) -> Result<(), CliError> {
    let run = config.validate()?;
    let dir = out_dir(config)?;

    let deltas = config
        .deltas
        .clone()
        .ok_or_else(|| CliError::Config("sweep-noise needs a deltas list".into()))?;
    if deltas.is_empty() {
        return Err(CliError::Config("deltas list is empty".into()));
    }
    let seeds_per_delta = config.seeds_per_delta.unwrap_or(5);

    let report = noise_sweep(
        run.geometry,
        run.exact,
        run.params,
        &deltas,
        seeds_per_delta,
        config.seed,
    )?;

    let mut warnings = Vec::new();
    if report.error_fit.is_none() {
        warnings.push("fewer than two distinct noise levels: no regression fits".to_string());
    }
    write_noise_sweep_csv(&dir.join("noise_sweep.csv"), &report)?;
    write_summary(
        &dir,
        "sweep-noise",
        config,
        sweep_summary(&report),
        &["noise_sweep.csv"],
        &warnings,
    )?;
    match (report.error_fit, report.alpha_fit) {
        (Some(e), Some(a)) => println!(
            "sweep-noise: error slope {:.5}, alpha slope {:.5} -> {}",
            e.slope,
            a.slope,
            dir.display()
        ),
        _ => println!("sweep-noise: no fits (single level) -> {}", dir.display()),
    }
    Ok(())
}

pub fn cmd_scan_params(config: &RunConfig) -> Result<(), CliError> {
    let run = config.validate()?;
    let dir = out_dir(config)?;
    let mode = config.scan_mode.as_deref().unwrap_or("source-grid");

    match mode {
        "source-grid" => {
            let n_values = config
                .n_values
                .clone()
                .ok_or_else(|| CliError::Config("source-grid scan needs n_values".into()))?;
            let r_values = config
                .r_values
                .clone()
                .ok_or_else(|| CliError::Config("source-grid scan needs r_values".into()))?;
            let report = param_scan(
                run.geometry,
                run.exact,
                run.params,
                &n_values,
                &r_values,
                config.delta,
                config.seed,
            )?;
            let missing = report.cells.iter().filter(|c| c.error.is_none()).count();
            write_param_scan_csv(&dir.join("param_scan.csv"), &report)?;
            write_summary(
                &dir,
                "scan-params",
                config,
                json!({"cells": report.cells.len(), "missing": missing}),
                &["param_scan.csv"],
                &[],
            )?;
            println!(
                "scan-params: {} cells ({missing} missing) -> {}",
                report.cells.len(),
                dir.display()
            );
        }
        "collocation" => {
            let m_values = config
                .m_values
                .clone()
                .ok_or_else(|| CliError::Config("collocation scan needs m_values".into()))?;
            let rows = collocation_sweep(
                run.geometry,
                run.exact,
                run.params,
                &m_values,
                config.delta,
                config.seed,
            )?;
            write_collocation_csv(&dir.join("collocation_sweep.csv"), &rows)?;
            write_summary(
                &dir,
                "scan-params",
                config,
                json!({"rows": rows.len()}),
                &["collocation_sweep.csv"],
                &[],
            )?;
            println!(
                "scan-params: {} collocation counts -> {}",
                rows.len(),
                dir.display()
            );
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown scan_mode \"{other}\" (use \"source-grid\" or \"collocation\")"
            )))
        }
    }
    Ok(())
}
