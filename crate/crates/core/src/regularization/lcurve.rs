//! L-curve sampling and corner detection.
//!
//! The L-curve is the log-log plot of solution norm against residual norm as
//! the regularization parameter varies. Both norms follow from the SVD in
//! closed form, so sampling never re-solves the system. The corner — the
//! parameter balancing perturbation against regularization error — is taken
//! at the maximum of the curve's bending measured at the scale of the whole
//! curve: axes are normalized to their sampled ranges and the curvature is
//! formed from central differences in log α whose stencil spans 1/8 of the
//! grid. A five-point local-quadratic smoother is applied before the argmax
//! and the winner is refined on a 50-point pass over ±1 decade; ties go to
//! the larger (safer) parameter.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::regularization::svd::SvdFactors;
use crate::regularization::tikhonov::{filter_factor, residual_floor_sq};

/// Logarithmically spaced grid of regularization parameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AlphaGrid {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub count: usize,
}

impl AlphaGrid {
    pub fn new(alpha_min: f64, alpha_max: f64, count: usize) -> Result<Self> {
        let grid = Self {
            alpha_min,
            alpha_max,
            count,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Default range `[10⁻¹⁰·σ₁, σ₁]` with 200 points.
    pub fn default_for(svd: &SvdFactors) -> Result<Self> {
        let sigma = svd.largest();
        if !(sigma > 0.0) {
            return Err(Error::NoCorner);
        }
        Self::new(1e-10 * sigma, sigma, 200)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_min > 0.0 && self.alpha_min < self.alpha_max)
            || !self.alpha_max.is_finite()
        {
            return Err(Error::Argument(format!(
                "alpha grid needs 0 < min < max, got [{}, {}]",
                self.alpha_min, self.alpha_max
            )));
        }
        if self.count < 2 {
            return Err(Error::Argument(format!(
                "alpha grid needs at least 2 points, got {}",
                self.count
            )));
        }
        Ok(())
    }

    pub fn log_values(&self) -> Vec<f64> {
        let (lo, hi) = (self.alpha_min.ln(), self.alpha_max.ln());
        (0..self.count)
            .map(|i| lo + (hi - lo) * i as f64 / (self.count - 1) as f64)
            .collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.log_values().into_iter().map(f64::exp).collect()
    }
}

/// Spectral data sufficient to evaluate both L-curve norms at any parameter.
#[derive(Debug, Clone)]
struct TikhonovSpectrum {
    /// Singular values above the rank cutoff.
    sigmas: Vec<f64>,
    /// Matching coefficients `u_i · b`.
    betas: Vec<f64>,
    /// `‖b − P_range b‖²`, the unreachable residual part.
    floor_sq: f64,
}

impl TikhonovSpectrum {
    fn new(svd: &SvdFactors, b: &DVector<f64>) -> Result<Self> {
        if b.len() != svd.left_vectors.nrows() {
            return Err(Error::Argument(format!(
                "right-hand side length {} does not match the {} matrix rows",
                b.len(),
                svd.left_vectors.nrows()
            )));
        }
        let beta = svd.left_coefficients(b);
        Ok(Self {
            sigmas: svd.singular_values[..svd.rank].to_vec(),
            betas: beta[..svd.rank].to_vec(),
            floor_sq: residual_floor_sq(svd, b, &beta),
        })
    }

    /// `(‖A w_α − b‖, ‖w_α‖)` via filter factors.
    fn norms_at(&self, alpha: f64) -> (f64, f64) {
        let mut residual_sq = self.floor_sq;
        let mut solution_sq = 0.0;
        for (&sigma, &beta) in self.sigmas.iter().zip(&self.betas) {
            let gamma = filter_factor(sigma, alpha);
            residual_sq += ((1.0 - gamma) * beta).powi(2);
            solution_sq += (gamma * beta / sigma).powi(2);
        }
        (residual_sq.sqrt(), solution_sq.sqrt())
    }
}

/// Sampled L-curve with its curvature profile and detected corner.
#[derive(Debug, Clone)]
pub struct LCurve {
    pub alphas: Vec<f64>,
    pub residual_norms: Vec<f64>,
    pub solution_norms: Vec<f64>,
    /// Smoothed bending measure per grid point; `corner_index` maximizes it.
    pub curvatures: Vec<f64>,
    pub corner_index: usize,
    spectrum: TikhonovSpectrum,
    scale: CurveScale,
}

impl LCurve {
    /// `(log residual, log solution)` pairs of the sampled curve.
    pub fn log_points(&self) -> Vec<(f64, f64)> {
        self.residual_norms
            .iter()
            .zip(&self.solution_norms)
            .map(|(&r, &s)| (r.ln(), s.ln()))
            .collect()
    }
}

/// Axis normalization and stencil width fixed by the coarse sampling pass.
#[derive(Debug, Clone, Copy)]
struct CurveScale {
    x_range: f64,
    y_range: f64,
    /// Half-width of the curvature stencil in log-α units.
    stencil: f64,
}

fn curvature_at<F: Fn(f64) -> (f64, f64)>(sampler: &F, scale: &CurveScale, t: f64) -> f64 {
    let dt = scale.stencil;
    let mut x = [0.0; 3];
    let mut y = [0.0; 3];
    for (k, tt) in [t - dt, t, t + dt].into_iter().enumerate() {
        let (rho, eta) = sampler(tt.exp());
        x[k] = rho.ln() / scale.x_range;
        y[k] = eta.ln() / scale.y_range;
    }
    let xp = (x[2] - x[0]) / (2.0 * dt);
    let yp = (y[2] - y[0]) / (2.0 * dt);
    let xpp = (x[2] - 2.0 * x[1] + x[0]) / (dt * dt);
    let ypp = (y[2] - 2.0 * y[1] + y[0]) / (dt * dt);
    let speed_cubed = (xp * xp + yp * yp).powf(1.5);
    if speed_cubed > 0.0 {
        (xp * ypp - yp * xpp) / speed_cubed
    } else {
        f64::NEG_INFINITY
    }
}

/// Five-point Savitzky-Golay (quadratic) smoothing; endpoints and windows
/// containing non-finite values are left as-is.
fn smooth5(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut out = values.to_vec();
    if n < 5 {
        return out;
    }
    for i in 2..n - 2 {
        let w = &values[i - 2..=i + 2];
        if w.iter().all(|v| v.is_finite()) {
            out[i] = (-3.0 * w[0] + 12.0 * w[1] + 17.0 * w[2] + 12.0 * w[3] - 3.0 * w[4]) / 35.0;
        }
    }
    out
}

/// Smoothed curvature profile over the log-grid plus the argmax index
/// (ties resolved toward larger α).
fn curvature_stage<F: Fn(f64) -> (f64, f64)>(
    sampler: &F,
    scale: &CurveScale,
    ts: &[f64],
) -> (Vec<f64>, Option<usize>) {
    let raw: Vec<f64> = ts.iter().map(|&t| curvature_at(sampler, scale, t)).collect();
    let smoothed = smooth5(&raw);
    let mut best: Option<(f64, usize)> = None;
    for (i, &v) in smoothed.iter().enumerate() {
        if v.is_finite() && best.is_none_or(|(bv, _)| v >= bv) {
            best = Some((v, i));
        }
    }
    (smoothed, best.map(|(_, i)| i))
}

fn sample_scale<F: Fn(f64) -> (f64, f64)>(
    sampler: &F,
    ts: &[f64],
) -> Result<(Vec<f64>, Vec<f64>, CurveScale)> {
    let mut residuals = Vec::with_capacity(ts.len());
    let mut solutions = Vec::with_capacity(ts.len());
    for &t in ts {
        let (rho, eta) = sampler(t.exp());
        if !(rho.is_finite() && eta.is_finite() && rho > 0.0 && eta > 0.0) {
            return Err(Error::NoCorner);
        }
        residuals.push(rho);
        solutions.push(eta);
    }
    let logs = |v: &[f64]| {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &x in v {
            lo = lo.min(x.ln());
            hi = hi.max(x.ln());
        }
        hi - lo
    };
    let x_range = logs(&residuals);
    let y_range = logs(&solutions);
    if x_range <= 0.0 && y_range <= 0.0 {
        // every sampled point coincides
        return Err(Error::NoCorner);
    }
    let scale = CurveScale {
        x_range: if x_range > 0.0 { x_range } else { 1.0 },
        y_range: if y_range > 0.0 { y_range } else { 1.0 },
        stencil: (ts[ts.len() - 1] - ts[0]) / 8.0,
    };
    Ok((residuals, solutions, scale))
}

fn refine<F: Fn(f64) -> (f64, f64)>(sampler: &F, scale: &CurveScale, t_coarse: f64) -> f64 {
    let span = 10f64.ln();
    let ts: Vec<f64> = (0..50)
        .map(|i| t_coarse - span + 2.0 * span * i as f64 / 49.0)
        .collect();
    let (_, best) = curvature_stage(sampler, scale, &ts);
    best.map_or(t_coarse, |i| ts[i])
}

/// Corner search over an arbitrary `(residual, solution)`-norm sampler:
/// coarse argmax of the smoothed curvature over the grid, then one refined
/// pass of 50 points across ±1 decade.
pub fn corner_search<F: Fn(f64) -> (f64, f64)>(sampler: F, grid: &AlphaGrid) -> Result<f64> {
    grid.validate()?;
    if grid.count < 5 {
        return Err(Error::Argument(format!(
            "corner detection needs at least 5 grid points, got {}",
            grid.count
        )));
    }
    let ts = grid.log_values();
    let (_, _, scale) = sample_scale(&sampler, &ts)?;
    let (_, best) = curvature_stage(&sampler, &scale, &ts);
    let coarse = best.ok_or(Error::NoCorner)?;
    Ok(refine(&sampler, &scale, ts[coarse]).exp())
}

/// Samples the L-curve of the system behind `svd` for the right-hand side
/// `b` over the given grid.
pub fn lcurve_sample(svd: &SvdFactors, b: &DVector<f64>, grid: &AlphaGrid) -> Result<LCurve> {
    grid.validate()?;
    if grid.count < 10 {
        return Err(Error::Argument(format!(
            "l-curve sampling needs at least 10 grid points, got {}",
            grid.count
        )));
    }
    let spectrum = TikhonovSpectrum::new(svd, b)?;
    let ts = grid.log_values();
    let sampler = |alpha: f64| spectrum.norms_at(alpha);
    let (residuals, solutions, scale) = sample_scale(&sampler, &ts)?;
    let (curvatures, best) = curvature_stage(&sampler, &scale, &ts);
    let corner_index = best.ok_or(Error::NoCorner)?;
    Ok(LCurve {
        alphas: ts.into_iter().map(f64::exp).collect(),
        residual_norms: residuals,
        solution_norms: solutions,
        curvatures,
        corner_index,
        spectrum,
        scale,
    })
}

/// Suitable regularization parameter: the curve's corner, refined by one
/// local pass around the coarse grid winner.
pub fn lcurve_corner(curve: &LCurve) -> Result<f64> {
    if curve.alphas.len() < 5 {
        return Err(Error::Argument(
            "corner detection needs at least 5 sampled points".into(),
        ));
    }
    let sampler = |alpha: f64| curve.spectrum.norms_at(alpha);
    let t = curve.alphas[curve.corner_index].ln();
    Ok(refine(&sampler, &curve.scale, t).exp())
}
