//! End-to-end Cauchy solves: point layout, noisy data, assembly, SVD,
//! parameter selection and the boundary error metric.

use nalgebra::{DVector, Point2};

use crate::assembly::{assemble, evaluate_expansion, MfsSystem};
use crate::error::{Error, Result};
use crate::experiments::noise::{add_noise, NoiseSpec};
use crate::geometry::{
    distribute_points, exact_trace, BoundaryComponent, BoundaryGeometry, ExactSolution, PointSet,
    SourceRadii,
};
use crate::regularization::{
    compute_svd, least_norm_solution, lcurve_corner, lcurve_sample, optimal_alpha, tikhonov_solve,
    AlphaGrid, LCurve, RegularizedSolution, SvdFactors,
};

/// Number of evaluation points per boundary component used by the error
/// metric unless overridden.
pub const DEFAULT_EVAL_POINTS: usize = 2000;

/// Discretization parameters of one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveParams {
    /// Collocation point count M on the Cauchy arc.
    pub collocation_points: usize,
    /// Source point count N.
    pub source_points: usize,
    pub radii: SourceRadii,
    /// Optional override of the annulus outer/inner source split.
    pub outer_sources: Option<usize>,
    /// Grid for corner detection; defaults to `[1e-10 σ₁, σ₁]` with 200
    /// points.
    pub alpha_grid: Option<AlphaGrid>,
    /// Evaluation points per boundary component.
    pub eval_points: usize,
}

impl SolveParams {
    pub fn new(m: usize, n: usize, radii: SourceRadii) -> Self {
        Self {
            collocation_points: m,
            source_points: n,
            radii,
            outer_sources: None,
            alpha_grid: None,
            eval_points: DEFAULT_EVAL_POINTS,
        }
    }
}

/// Solution and reference values along one boundary component.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundaryTrace {
    pub component: String,
    pub thetas: Vec<f64>,
    pub numeric: Vec<f64>,
    pub exact: Vec<f64>,
}

/// Maximum relative boundary error `max|u_N − u| / max|u|` over every trace.
pub fn boundary_error(traces: &[BoundaryTrace]) -> Result<f64> {
    let mut numerator: f64 = 0.0;
    let mut denominator: f64 = 0.0;
    for trace in traces {
        for (n, e) in trace.numeric.iter().zip(&trace.exact) {
            numerator = numerator.max((n - e).abs());
            denominator = denominator.max(e.abs());
        }
    }
    if denominator == 0.0 {
        return Err(Error::Argument(
            "exact solution vanishes on the evaluation grid; relative error undefined".into(),
        ));
    }
    Ok(numerator / denominator)
}

/// Everything reusable about one configured problem: the layout, the noisy
/// system, its SVD and the evaluation grid.
#[derive(Debug)]
pub struct CauchyProblem {
    pub geometry: BoundaryGeometry,
    pub exact: ExactSolution,
    pub params: SolveParams,
    pub noise: NoiseSpec,
    pub points: PointSet,
    pub system: MfsSystem,
    /// Noise-free right-hand side.
    pub rhs_exact: DVector<f64>,
    pub svd: SvdFactors,
    eval_components: Vec<EvalComponent>,
}

/// Label, angles, target points and exact values on one boundary component.
type EvalComponent = (String, Vec<f64>, Vec<Point2<f64>>, Vec<f64>);

impl CauchyProblem {
    pub fn setup(
        geometry: BoundaryGeometry,
        exact: ExactSolution,
        params: SolveParams,
        noise: NoiseSpec,
    ) -> Result<Self> {
        let points = distribute_points(
            &geometry,
            params.collocation_points,
            params.source_points,
            params.radii,
            params.outer_sources,
        )?;
        let (f, g) = exact_trace(&exact, &points)?;

        // One relative-noise field over the collocation points, applied to
        // the Dirichlet and Neumann traces alike.
        let field = noise.stream(0);
        let f_noisy = add_noise(&f, &field);
        let g_noisy = add_noise(&g, &field);

        let system = assemble(&points, &f_noisy, &g_noisy)?;
        let mut rhs_exact = DVector::zeros(2 * f.len());
        rhs_exact.as_mut_slice()[..f.len()].copy_from_slice(&f);
        rhs_exact.as_mut_slice()[f.len()..].copy_from_slice(&g);

        let svd = compute_svd(&system.matrix)?;

        if params.eval_points < 2 {
            return Err(Error::Argument(format!(
                "need at least 2 evaluation points, got {}",
                params.eval_points
            )));
        }
        let mut eval_components = Vec::new();
        let mut components = vec![("outer", BoundaryComponent::Outer)];
        if geometry.has_inner_boundary() {
            components.push(("inner", BoundaryComponent::Inner));
        }
        for (label, which) in components {
            let mut thetas = Vec::with_capacity(params.eval_points);
            let mut targets = Vec::with_capacity(params.eval_points);
            let mut reference = Vec::with_capacity(params.eval_points);
            for k in 0..params.eval_points {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / params.eval_points as f64;
                let (p, _) = geometry.point_and_normal(theta, which)?;
                thetas.push(theta);
                targets.push(p);
                reference.push(exact.value(p)?);
            }
            eval_components.push((label.to_string(), thetas, targets, reference));
        }

        Ok(Self {
            geometry,
            exact,
            params,
            noise,
            points,
            system,
            rhs_exact,
            svd,
            eval_components,
        })
    }

    /// Grid used for L-curve sampling and corner detection.
    pub fn corner_grid(&self) -> Result<AlphaGrid> {
        match self.params.alpha_grid {
            Some(grid) => Ok(grid),
            None => AlphaGrid::default_for(&self.svd),
        }
    }

    /// Wider grid used when searching for the error-optimal parameter, so
    /// the optimum at very small noise levels is not clipped.
    pub fn optimal_grid(&self) -> Result<AlphaGrid> {
        match self.params.alpha_grid {
            Some(grid) => Ok(grid),
            None => {
                let sigma = self.svd.largest();
                if !(sigma > 0.0) {
                    return Err(Error::NoCorner);
                }
                AlphaGrid::new(1e-13 * sigma, sigma, 260)
            }
        }
    }

    pub fn lcurve(&self) -> Result<LCurve> {
        lcurve_sample(&self.svd, &self.system.rhs, &self.corner_grid()?)
    }

    /// Corner of the L-curve: the suitable regularization parameter.
    pub fn suitable_alpha(&self) -> Result<f64> {
        lcurve_corner(&self.lcurve()?)
    }

    /// Parameter minimizing the weight-space distance to the noise-free
    /// least-norm solution.
    pub fn optimal_alpha(&self) -> Result<f64> {
        let w_exact = least_norm_solution(&self.svd, &self.rhs_exact)?;
        optimal_alpha(&self.svd, &self.system.rhs, &w_exact, &self.optimal_grid()?)
    }

    /// Regularized solve at a fixed parameter plus its boundary error.
    pub fn solve_at(&self, alpha: f64) -> Result<(RegularizedSolution, f64)> {
        let solution = tikhonov_solve(&self.svd, &self.system.rhs, alpha)?;
        let traces = self.traces(&solution)?;
        Ok((solution, boundary_error(&traces)?))
    }

    /// Boundary traces of a solution over the evaluation grid.
    pub fn traces(&self, solution: &RegularizedSolution) -> Result<Vec<BoundaryTrace>> {
        self.eval_components
            .iter()
            .map(|(label, thetas, targets, reference)| {
                let numeric = evaluate_expansion(&solution.weights, &self.points, targets)?;
                Ok(BoundaryTrace {
                    component: label.clone(),
                    thetas: thetas.clone(),
                    numeric,
                    exact: reference.clone(),
                })
            })
            .collect()
    }

    /// Full report: corner and optimal parameters, the solve at the corner
    /// (or at `alpha_override` when given), traces and optional per-α errors.
    pub fn report(
        &self,
        alpha_override: Option<f64>,
        alpha_table: &[f64],
    ) -> Result<ExperimentReport> {
        let lcurve = match self.lcurve() {
            Ok(curve) => Some(curve),
            Err(Error::NoCorner) if alpha_override.is_some() => None,
            Err(e) => return Err(e),
        };
        let suitable = match &lcurve {
            Some(curve) => match lcurve_corner(curve) {
                Ok(alpha) => Some(alpha),
                Err(Error::NoCorner) if alpha_override.is_some() => None,
                Err(e) => return Err(e),
            },
            None => None,
        };
        let optimal = self.optimal_alpha().ok();
        let alpha_used = match alpha_override {
            Some(alpha) => alpha,
            None => suitable.ok_or(Error::NoCorner)?,
        };
        let (solution, error) = self.solve_at(alpha_used)?;
        let traces = self.traces(&solution)?;
        let table = alpha_table
            .iter()
            .map(|&alpha| {
                let (_, e) = self.solve_at(alpha)?;
                Ok(AlphaTableRow { alpha, error: e })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(ExperimentReport {
            max_relative_error: error,
            alpha_used,
            suitable_alpha: suitable,
            optimal_alpha: optimal,
            residual_norm: solution.residual_norm,
            solution_norm: solution.solution_norm,
            dirichlet_neumann_row_norm_ratio: self.system.dirichlet_neumann_row_norm_ratio(),
            alpha_table: table,
            traces,
            lcurve,
        })
    }
}

/// Boundary error at one explicitly requested parameter.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct AlphaTableRow {
    pub alpha: f64,
    pub error: f64,
}

/// Outcome of one end-to-end solve.
#[derive(Debug)]
pub struct ExperimentReport {
    /// `max|u_N − u| / max|u|` over the whole boundary at `alpha_used`.
    pub max_relative_error: f64,
    pub alpha_used: f64,
    /// L-curve corner (absent only when overridden on a cornerless curve).
    pub suitable_alpha: Option<f64>,
    /// Error-optimal parameter against the noise-free least-norm solution.
    pub optimal_alpha: Option<f64>,
    pub residual_norm: f64,
    pub solution_norm: f64,
    pub dirichlet_neumann_row_norm_ratio: f64,
    pub alpha_table: Vec<AlphaTableRow>,
    pub traces: Vec<BoundaryTrace>,
    pub lcurve: Option<LCurve>,
}

/// One-call pipeline: layout, noise, assembly, SVD, corner, solve, report.
pub fn solve_cauchy(
    geometry: BoundaryGeometry,
    exact: ExactSolution,
    params: SolveParams,
    noise: NoiseSpec,
    alpha_override: Option<f64>,
) -> Result<ExperimentReport> {
    CauchyProblem::setup(geometry, exact, params, noise)?.report(alpha_override, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small_disk_params() -> SolveParams {
        let mut p = SolveParams::new(60, 12, SourceRadii::Single(3.2));
        p.eval_points = 400;
        p
    }

    #[test]
    fn boundary_error_reference_cases() {
        let trace = |numeric: Vec<f64>, exact: Vec<f64>| BoundaryTrace {
            component: "outer".into(),
            thetas: vec![0.0; numeric.len()],
            numeric,
            exact,
        };
        let t = trace(vec![1.0, 2.0, -0.5], vec![1.0, 2.0, -0.5]);
        assert_relative_eq!(boundary_error(&[t]).unwrap(), 0.0);

        let e = vec![1.0, 2.0, -0.5];
        let n: Vec<f64> = e.iter().map(|v| 2.0 * v).collect();
        let t = trace(n, e);
        assert_relative_eq!(boundary_error(&[t]).unwrap(), 1.0);

        let t = trace(vec![1.0], vec![0.0]);
        assert!(boundary_error(&[t]).is_err());
    }

    #[test]
    fn solve_is_deterministic() {
        let geom = BoundaryGeometry::unit_disk();
        let noise = NoiseSpec::new(0.05, 31).unwrap();
        let a = solve_cauchy(geom, ExactSolution::ExpTrig, small_disk_params(), noise, None)
            .unwrap();
        let b = solve_cauchy(geom, ExactSolution::ExpTrig, small_disk_params(), noise, None)
            .unwrap();
        assert_eq!(a.max_relative_error.to_bits(), b.max_relative_error.to_bits());
        assert_eq!(a.alpha_used.to_bits(), b.alpha_used.to_bits());
        for (ta, tb) in a.traces.iter().zip(&b.traces) {
            assert_eq!(ta.numeric, tb.numeric);
        }
    }

    #[test]
    fn noise_free_solve_is_accurate() {
        // With a rich enough basis the rank cutoff suppresses the
        // approximation-floor modes and the unregularized solve is accurate.
        let geom = BoundaryGeometry::unit_disk();
        let noise = NoiseSpec::new(0.0, 1).unwrap();
        let report = solve_cauchy(
            geom,
            ExactSolution::ExpTrig,
            SolveParams::new(600, 28, SourceRadii::Single(3.2)),
            noise,
            Some(0.0),
        )
        .unwrap();
        assert!(report.max_relative_error < 1e-3, "e = {}", report.max_relative_error);
    }

    #[test]
    fn alpha_override_reports_requested_parameter() {
        let geom = BoundaryGeometry::unit_disk();
        let noise = NoiseSpec::new(0.05, 77).unwrap();
        let problem =
            CauchyProblem::setup(geom, ExactSolution::ExpTrig, small_disk_params(), noise)
                .unwrap();
        let report = problem.report(Some(1e-3), &[1e-4, 1e-3]).unwrap();
        assert_eq!(report.alpha_used, 1e-3);
        assert!(report.suitable_alpha.is_some());
        assert_eq!(report.alpha_table.len(), 2);
        assert_eq!(report.alpha_table[1].alpha, 1e-3);
        assert_relative_eq!(report.alpha_table[1].error, report.max_relative_error);
    }

    #[test]
    fn annulus_solve_covers_both_components() {
        let geom = BoundaryGeometry::annulus(0.5, 1.0).unwrap();
        let mut params = SolveParams::new(
            80,
            24,
            SourceRadii::Pair {
                outer: 3.2,
                inner: 0.4,
            },
        );
        params.eval_points = 200;
        let noise = NoiseSpec::new(0.0, 9).unwrap();
        let report = solve_cauchy(
            geom,
            ExactSolution::Dipole { offset: 0.2 },
            params,
            noise,
            Some(0.0),
        )
        .unwrap();
        assert_eq!(report.traces.len(), 2);
        assert_eq!(report.traces[0].component, "outer");
        assert_eq!(report.traces[1].component, "inner");
        for trace in &report.traces {
            assert_eq!(trace.thetas.len(), 200);
            assert!(trace.numeric.iter().all(|v| v.is_finite()));
        }
        assert!(report.max_relative_error.is_finite());
    }

    #[test]
    fn shared_noise_field_hits_both_traces() {
        // the same relative perturbation multiplies f and g pointwise
        let geom = BoundaryGeometry::unit_disk();
        let params = small_disk_params();
        let noise = NoiseSpec::new(0.3, 123).unwrap();
        let problem =
            CauchyProblem::setup(geom, ExactSolution::ExpTrig, params, noise).unwrap();
        let m = params.collocation_points;
        let (f, g) = exact_trace(&ExactSolution::ExpTrig, &problem.points).unwrap();
        let mut compared = 0;
        for i in 0..m {
            if f[i].abs() < 1e-6 || g[i].abs() < 1e-6 {
                continue;
            }
            let rf = problem.system.rhs[i] / f[i];
            let rg = problem.system.rhs[m + i] / g[i];
            assert_relative_eq!(rf, rg, max_relative = 1e-12);
            assert!((0.7 - 1e-12..=1.3 + 1e-12).contains(&rf));
            compared += 1;
        }
        assert!(compared > m / 2);
    }
}
