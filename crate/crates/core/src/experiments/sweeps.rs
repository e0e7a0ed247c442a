//! Noise-level sweeps and discretization-parameter scans.
//!
//! Every cell of a sweep is an independent solve with its own derived seed,
//! so cells can run in parallel and a fixed base seed reproduces the whole
//! report bit for bit regardless of thread count.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::noise::{derive_seed, NoiseSpec};
use crate::experiments::problem::{CauchyProblem, SolveParams};
use crate::geometry::{BoundaryGeometry, ExactSolution, SourceRadii};

/// Least-squares line through `(x_i, y_i)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegressionFit {
    pub slope: f64,
    pub intercept: f64,
}

pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<RegressionFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some(RegressionFit {
        slope,
        intercept: my - slope * mx,
    })
}

pub(crate) fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// One (noise level, seed) cell of a noise sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NoiseSweepRow {
    pub delta: f64,
    pub seed_index: usize,
    pub seed: u64,
    pub optimal_alpha: f64,
    /// Boundary error at the optimal parameter.
    pub error: f64,
}

/// Per-level medians used for the regression fits.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NoiseSweepMedian {
    pub delta: f64,
    pub median_error: f64,
    pub median_optimal_alpha: f64,
}

#[derive(Debug, Serialize)]
pub struct NoiseSweepReport {
    pub rows: Vec<NoiseSweepRow>,
    pub medians: Vec<NoiseSweepMedian>,
    /// Fit of `log₁₀ e` against `log₁₀ δ` over the medians.
    pub error_fit: Option<RegressionFit>,
    /// Fit of `log₁₀ α_opt` against `log₁₀ δ` over the medians.
    pub alpha_fit: Option<RegressionFit>,
}

/// For each noise level and seed, solves the problem and records the
/// error-optimal parameter and its error; fits both power laws over the
/// per-level medians.
pub fn noise_sweep(
    geometry: BoundaryGeometry,
    exact: ExactSolution,
    params: SolveParams,
    deltas: &[f64],
    seeds_per_delta: usize,
    base_seed: u64,
) -> Result<NoiseSweepReport> {
    if deltas.is_empty() {
        return Err(Error::Argument("noise sweep needs at least one level".into()));
    }
    if deltas.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::Argument("noise levels must be positive".into()));
    }
    if seeds_per_delta == 0 {
        return Err(Error::Argument("need at least one seed per level".into()));
    }

    let cells: Vec<(f64, usize)> = deltas
        .iter()
        .flat_map(|&d| (0..seeds_per_delta).map(move |s| (d, s)))
        .collect();

    let rows: Vec<NoiseSweepRow> = cells
        .par_iter()
        .map(|&(delta, seed_index)| {
            let seed = derive_seed(base_seed, delta.to_bits() ^ seed_index as u64);
            let noise = NoiseSpec::new(delta, seed)?;
            let problem = CauchyProblem::setup(geometry, exact, params, noise)?;
            let alpha = problem.optimal_alpha()?;
            let (_, error) = problem.solve_at(alpha)?;
            Ok(NoiseSweepRow {
                delta,
                seed_index,
                seed,
                optimal_alpha: alpha,
                error,
            })
        })
        .collect::<Result<_>>()?;

    let medians: Vec<NoiseSweepMedian> = deltas
        .iter()
        .map(|&delta| {
            let errs: Vec<f64> = rows
                .iter()
                .filter(|r| r.delta == delta)
                .map(|r| r.error)
                .collect();
            let alphas: Vec<f64> = rows
                .iter()
                .filter(|r| r.delta == delta)
                .map(|r| r.optimal_alpha)
                .collect();
            NoiseSweepMedian {
                delta,
                median_error: median(&errs),
                median_optimal_alpha: median(&alphas),
            }
        })
        .collect();

    let mut distinct: Vec<f64> = deltas.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    let (error_fit, alpha_fit) = if distinct.len() >= 2 {
        let xs: Vec<f64> = medians.iter().map(|m| m.delta.log10()).collect();
        let es: Vec<f64> = medians.iter().map(|m| m.median_error.log10()).collect();
        let als: Vec<f64> = medians
            .iter()
            .map(|m| m.median_optimal_alpha.log10())
            .collect();
        (linear_fit(&xs, &es), linear_fit(&xs, &als))
    } else {
        (None, None)
    };

    Ok(NoiseSweepReport {
        rows,
        medians,
        error_fit,
        alpha_fit,
    })
}

/// One cell of a source-count/source-radius scan; `error` is absent when
/// the configuration is invalid or the solve fails.
#[derive(Debug, Clone, Serialize)]
pub struct ScanCell {
    pub source_points: usize,
    pub source_radius: f64,
    pub error: Option<f64>,
    pub suitable_alpha: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ParamScanReport {
    pub cells: Vec<ScanCell>,
}

/// Grid of boundary errors at the corner parameter over (N, R) pairs with a
/// fixed collocation count. Per-cell failures become missing values.
pub fn param_scan(
    geometry: BoundaryGeometry,
    exact: ExactSolution,
    base: SolveParams,
    n_values: &[usize],
    r_values: &[f64],
    delta: f64,
    seed: u64,
) -> Result<ParamScanReport> {
    if n_values.is_empty() || r_values.is_empty() {
        return Err(Error::Argument("scan needs at least one N and one R".into()));
    }
    let cells: Vec<(usize, f64)> = n_values
        .iter()
        .flat_map(|&n| r_values.iter().map(move |&r| (n, r)))
        .collect();

    let cells: Vec<ScanCell> = cells
        .par_iter()
        .map(|&(n, r)| {
            let mut params = base;
            params.source_points = n;
            params.radii = SourceRadii::Single(r);
            let outcome = (|| -> Result<(f64, f64)> {
                let noise = NoiseSpec::new(delta, seed)?;
                let problem = CauchyProblem::setup(geometry, exact, params, noise)?;
                let alpha = problem.suitable_alpha()?;
                let (_, error) = problem.solve_at(alpha)?;
                Ok((error, alpha))
            })();
            match outcome {
                Ok((error, alpha)) => ScanCell {
                    source_points: n,
                    source_radius: r,
                    error: Some(error),
                    suitable_alpha: Some(alpha),
                    failure: None,
                },
                Err(e) => ScanCell {
                    source_points: n,
                    source_radius: r,
                    error: None,
                    suitable_alpha: None,
                    failure: Some(e.to_string()),
                },
            }
        })
        .collect();

    Ok(ParamScanReport { cells })
}

/// Boundary error at the corner parameter for each collocation count.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CollocationRow {
    pub collocation_points: usize,
    pub error: f64,
    pub suitable_alpha: f64,
}

pub fn collocation_sweep(
    geometry: BoundaryGeometry,
    exact: ExactSolution,
    base: SolveParams,
    m_values: &[usize],
    delta: f64,
    seed: u64,
) -> Result<Vec<CollocationRow>> {
    if m_values.is_empty() {
        return Err(Error::Argument("sweep needs at least one collocation count".into()));
    }
    m_values
        .par_iter()
        .map(|&m| {
            let mut params = base;
            params.collocation_points = m;
            let noise = NoiseSpec::new(delta, seed)?;
            let problem = CauchyProblem::setup(geometry, exact, params, noise)?;
            let alpha = problem.suitable_alpha()?;
            let (_, error) = problem.solve_at(alpha)?;
            Ok(CollocationRow {
                collocation_points: m,
                error,
                suitable_alpha: alpha,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tiny_params() -> SolveParams {
        let mut p = SolveParams::new(40, 10, SourceRadii::Single(3.2));
        p.eval_points = 200;
        p
    }

    #[test]
    fn fit_recovers_exact_line() {
        let xs = [-3.0, -2.0, -1.0, 0.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.4 * x - 1.2).collect();
        let fit = linear_fit(&xs, &ys).unwrap();
        assert_relative_eq!(fit.slope, 0.4, max_relative = 1e-12);
        assert_relative_eq!(fit.intercept, -1.2, max_relative = 1e-12);
        assert!(linear_fit(&xs[..1], &ys[..1]).is_none());
    }

    #[test]
    fn median_odd_even() {
        assert_relative_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_relative_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn duplicate_levels_produce_identical_rows() {
        let geom = BoundaryGeometry::unit_disk();
        let report = noise_sweep(
            geom,
            ExactSolution::ExpTrig,
            tiny_params(),
            &[0.05, 0.05],
            2,
            999,
        )
        .unwrap();
        assert_eq!(report.rows.len(), 4);
        for s in 0..2 {
            let a = &report.rows[s];
            let b = &report.rows[2 + s];
            assert_eq!(a.seed, b.seed);
            assert_eq!(a.error.to_bits(), b.error.to_bits());
            assert_eq!(a.optimal_alpha.to_bits(), b.optimal_alpha.to_bits());
        }
    }

    #[test]
    fn single_level_has_no_fit() {
        let geom = BoundaryGeometry::unit_disk();
        let report = noise_sweep(
            geom,
            ExactSolution::ExpTrig,
            tiny_params(),
            &[0.05],
            2,
            1,
        )
        .unwrap();
        assert!(report.error_fit.is_none());
        assert!(report.alpha_fit.is_none());
        assert_eq!(report.medians.len(), 1);
    }

    #[test]
    fn empty_levels_rejected() {
        let geom = BoundaryGeometry::unit_disk();
        assert!(noise_sweep(geom, ExactSolution::ExpTrig, tiny_params(), &[], 2, 1).is_err());
        assert!(
            noise_sweep(geom, ExactSolution::ExpTrig, tiny_params(), &[0.0], 2, 1).is_err()
        );
    }

    #[test]
    fn trivial_scan_emits_all_cells() {
        let geom = BoundaryGeometry::unit_disk();
        let report = param_scan(
            geom,
            ExactSolution::ExpTrig,
            tiny_params(),
            &[8, 10],
            &[2.5, 3.5],
            0.05,
            5,
        )
        .unwrap();
        assert_eq!(report.cells.len(), 4);
        assert!(report.cells.iter().all(|c| c.error.is_some()));
    }

    #[test]
    fn invalid_radius_becomes_missing_cell() {
        let geom = BoundaryGeometry::unit_disk();
        let report = param_scan(
            geom,
            ExactSolution::ExpTrig,
            tiny_params(),
            &[10],
            &[0.5, 3.0],
            0.05,
            5,
        )
        .unwrap();
        assert_eq!(report.cells.len(), 2);
        assert!(report.cells[0].error.is_none());
        assert!(report.cells[0].failure.is_some());
        assert!(report.cells[1].error.is_some());
    }

    #[test]
    fn single_collocation_count_matches_direct_solve() {
        let geom = BoundaryGeometry::unit_disk();
        let rows = collocation_sweep(
            geom,
            ExactSolution::ExpTrig,
            tiny_params(),
            &[40],
            0.05,
            77,
        )
        .unwrap();
        assert_eq!(rows.len(), 1);

        let noise = NoiseSpec::new(0.05, 77).unwrap();
        let problem =
            CauchyProblem::setup(geom, ExactSolution::ExpTrig, tiny_params(), noise).unwrap();
        let alpha = problem.suitable_alpha().unwrap();
        let (_, error) = problem.solve_at(alpha).unwrap();
        assert_eq!(rows[0].error.to_bits(), error.to_bits());
        assert_eq!(rows[0].suitable_alpha.to_bits(), alpha.to_bits());
    }
}
