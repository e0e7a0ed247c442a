//! Least-norm and Tikhonov-regularized solutions through the SVD.
//!
//! With `A = U Σ Vᵀ` the least-squares/least-norm solution is
//! `w₀ = Σ_{i≤r} (u_i·b)/σ_i v_i`, and the Tikhonov minimizer of
//! `‖Aw − b‖² + α²‖w‖²` damps each mode by the filter factor
//! `γ_i = σ_i²/(σ_i² + α²)`. The error against the noise-free least-norm
//! solution splits into a perturbation part (filtered noise) and a
//! regularization part (the bias of the filter on the exact data).

use nalgebra::DVector;

use crate::assembly::WeightVector;
use crate::error::{Error, Result};
use crate::regularization::svd::SvdFactors;

use super::AlphaGrid;

/// Tikhonov filter factor `σ²/(σ² + α²)`.
#[inline]
pub(crate) fn filter_factor(sigma: f64, alpha: f64) -> f64 {
    let s2 = sigma * sigma;
    s2 / (s2 + alpha * alpha)
}

/// A Tikhonov-regularized solution together with the norms that place it on
/// the L-curve.
#[derive(Debug, Clone)]
pub struct RegularizedSolution {
    pub weights: WeightVector,
    pub alpha: f64,
    /// `‖A w − b‖`.
    pub residual_norm: f64,
    /// `‖w‖`.
    pub solution_norm: f64,
}

fn check_rhs(svd: &SvdFactors, b: &DVector<f64>) -> Result<()> {
    if b.len() != svd.left_vectors.nrows() {
        return Err(Error::Argument(format!(
            "right-hand side length {} does not match the {} matrix rows",
            b.len(),
            svd.left_vectors.nrows()
        )));
    }
    Ok(())
}

/// Norm squared of the component of `b` outside the span of the retained
/// left singular vectors; part of every residual.
pub(crate) fn residual_floor_sq(svd: &SvdFactors, b: &DVector<f64>, beta: &[f64]) -> f64 {
    let captured: f64 = beta[..svd.rank].iter().map(|c| c * c).sum();
    (b.norm_squared() - captured).max(0.0)
}

/// Least-squares solution of minimal Euclidean norm.
pub fn least_norm_solution(svd: &SvdFactors, b: &DVector<f64>) -> Result<WeightVector> {
    check_rhs(svd, b)?;
    let beta = svd.left_coefficients(b);
    let n = svd.right_vectors.nrows();
    let mut w = DVector::zeros(n);
    for i in 0..svd.rank {
        let coeff = beta[i] / svd.singular_values[i];
        w += coeff * svd.right_vectors.column(i);
    }
    Ok(WeightVector(w))
}

/// Tikhonov-regularized solution for parameter `alpha ≥ 0`.
///
/// `alpha = 0` reduces to the least-norm solution. For `alpha > 0` the
/// result solves the normal equations `(AᵀA + α²I) w = Aᵀb` restricted to
/// the numerical range of `A`.
pub fn tikhonov_solve(svd: &SvdFactors, b: &DVector<f64>, alpha: f64) -> Result<RegularizedSolution> {
    check_rhs(svd, b)?;
    if !(alpha >= 0.0) {
        return Err(Error::Argument(format!("negative alpha {alpha}")));
    }
    let beta = svd.left_coefficients(b);
    let n = svd.right_vectors.nrows();
    let mut w = DVector::zeros(n);
    let mut solution_sq = 0.0;
    let mut residual_sq = residual_floor_sq(svd, b, &beta);
    for i in 0..svd.rank {
        let gamma = filter_factor(svd.singular_values[i], alpha);
        let coeff = gamma * beta[i] / svd.singular_values[i];
        w += coeff * svd.right_vectors.column(i);
        solution_sq += coeff * coeff;
        residual_sq += ((1.0 - gamma) * beta[i]).powi(2);
    }
    Ok(RegularizedSolution {
        weights: WeightVector(w),
        alpha,
        residual_norm: residual_sq.sqrt(),
        solution_norm: solution_sq.sqrt(),
    })
}

/// Splits `w_α(b_noisy) − w₀(b_exact)` into its perturbation part
/// `Σ γ_i (u_i·Δb)/σ_i v_i` and regularization part
/// `Σ (γ_i − 1)(u_i·b)/σ_i v_i`; the two sum to the full error exactly.
pub fn error_decomposition(
    svd: &SvdFactors,
    b_exact: &DVector<f64>,
    b_noisy: &DVector<f64>,
    alpha: f64,
) -> Result<(DVector<f64>, DVector<f64>)> {
    check_rhs(svd, b_exact)?;
    check_rhs(svd, b_noisy)?;
    if !(alpha > 0.0) {
        return Err(Error::Argument(format!(
            "error decomposition needs alpha > 0, got {alpha}"
        )));
    }
    let delta = b_noisy - b_exact;
    let n = svd.right_vectors.nrows();
    let mut perturbation = DVector::zeros(n);
    let mut regularization = DVector::zeros(n);
    for i in 0..svd.rank {
        let sigma = svd.singular_values[i];
        let gamma = filter_factor(sigma, alpha);
        let u_i = svd.left_vectors.column(i);
        perturbation += (gamma * u_i.dot(&delta) / sigma) * svd.right_vectors.column(i);
        regularization += ((gamma - 1.0) * u_i.dot(b_exact) / sigma) * svd.right_vectors.column(i);
    }
    Ok((perturbation, regularization))
}

/// Parameter minimizing `‖w_exact − w_α(b_noisy)‖` over the grid, refined
/// once on ±1 decade around the coarse minimizer.
pub fn optimal_alpha(
    svd: &SvdFactors,
    b_noisy: &DVector<f64>,
    w_exact: &WeightVector,
    grid: &AlphaGrid,
) -> Result<f64> {
    check_rhs(svd, b_noisy)?;
    if w_exact.len() != svd.right_vectors.nrows() {
        return Err(Error::Argument(format!(
            "reference weight length {} does not match {} sources",
            w_exact.len(),
            svd.right_vectors.nrows()
        )));
    }
    grid.validate()?;

    let beta = svd.left_coefficients(b_noisy);
    // Expand the reference in the right singular basis once; the error norm
    // at any alpha is then a cheap coefficient-space sum.
    let d = svd.right_vectors.transpose() * &w_exact.0;
    let tail_sq: f64 = (svd.rank..d.len()).map(|i| d[i] * d[i]).sum();
    let error_at = |alpha: f64| -> f64 {
        let mut acc = tail_sq;
        for i in 0..svd.rank {
            let coeff = filter_factor(svd.singular_values[i], alpha) * beta[i]
                / svd.singular_values[i];
            acc += (d[i] - coeff) * (d[i] - coeff);
        }
        acc.sqrt()
    };

    let argmin = |alphas: &[f64]| -> f64 {
        let mut best = (f64::INFINITY, alphas[0]);
        for &a in alphas {
            let e = error_at(a);
            // ties prefer the larger (safer) parameter
            if e <= best.0 {
                best = (e, a);
            }
        }
        best.1
    };

    let coarse = argmin(&grid.values());
    let refined = AlphaGrid::new(coarse / 10.0, coarse * 10.0, 50)?;
    Ok(argmin(&refined.values()))
}
