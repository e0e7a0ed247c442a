//! Fundamental-solution kernels and the dense collocation system.
//!
//! With sources `ξ_j` outside the domain and collocation points `x_i` on the
//! data arc, matching the expansion `u_N = Σ_j w_j φ*(|x − ξ_j|)` to the
//! Dirichlet and Neumann data stacks a 2M×N system `A w = b`: rows `1..M`
//! hold the potentials `φ_j(x_i)`, rows `M+1..2M` their normal derivatives,
//! and `b = (f; g)`.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector, Point2, Vector2};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::PointSet;

const TWO_PI: f64 = 2.0 * PI;

/// Free-space fundamental solution of the 2-D Laplace operator,
/// `φ*(r) = −ln(r) / 2π`.
pub fn fundamental_solution(r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Singular(format!(
            "fundamental solution undefined for distance {r}"
        )));
    }
    Ok(-r.ln() / TWO_PI)
}

/// Normal derivative of the basis function centered at `source`, evaluated
/// at `x`: `∂φ*(|x−ξ|)/∂n = −((x−ξ)·n) / (2π |x−ξ|²)`.
pub fn basis_normal_derivative(
    x: Point2<f64>,
    source: Point2<f64>,
    normal: Vector2<f64>,
) -> Result<f64> {
    let d = x - source;
    let r2 = d.norm_squared();
    if r2 == 0.0 {
        return Err(Error::Singular(
            "normal derivative requested at the source point".into(),
        ));
    }
    Ok(-d.dot(&normal) / (TWO_PI * r2))
}

/// Expansion coefficients, one per source point.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(pub DVector<f64>);

impl WeightVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Assembled collocation system.
#[derive(Debug, Clone)]
pub struct MfsSystem {
    /// Dense 2M×N matrix; row `i < M` is the potential block, row `M + i`
    /// the flux block for collocation point `i`.
    pub matrix: DMatrix<f64>,
    /// Stacked right-hand side `(f; g)`, length 2M.
    pub rhs: DVector<f64>,
    /// Points the rows and columns were generated from.
    pub points: PointSet,
}

impl MfsSystem {
    pub fn collocation_count(&self) -> usize {
        self.points.collocation_count()
    }

    /// Diagnostic: ratio of the Frobenius norm of the Dirichlet block to the
    /// Neumann block. The system mixes both row types unscaled.
    pub fn dirichlet_neumann_row_norm_ratio(&self) -> f64 {
        let m = self.collocation_count();
        let top = self.matrix.rows(0, m).norm();
        let bottom = self.matrix.rows(m, m).norm();
        top / bottom
    }

    /// Dumps the matrix and right-hand side as CSV (17 significant digits).
    pub fn write_csv(&self, matrix_path: &Path, rhs_path: &Path) -> Result<()> {
        let mut out = Vec::new();
        for i in 0..self.matrix.nrows() {
            let row: Vec<String> = (0..self.matrix.ncols())
                .map(|j| format!("{:.16e}", self.matrix[(i, j)]))
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        crate::experiments::report::write_atomic(matrix_path, &out)?;
        let mut out = Vec::new();
        for i in 0..self.rhs.len() {
            writeln!(out, "{:.16e}", self.rhs[i])?;
        }
        crate::experiments::report::write_atomic(rhs_path, &out)?;
        Ok(())
    }
}

/// Builds the 2M×N system from a point layout and Cauchy data vectors.
pub fn assemble(points: &PointSet, f: &[f64], g: &[f64]) -> Result<MfsSystem> {
    let m = points.collocation_count();
    let n = points.source_count();
    if f.len() != m || g.len() != m {
        return Err(Error::Argument(format!(
            "data lengths ({}, {}) do not match the {m} collocation points",
            f.len(),
            g.len()
        )));
    }

    // Each collocation point owns one potential row and one flux row, so the
    // rows can be filled independently.
    let rows: Vec<(Vec<f64>, Vec<f64>)> = points
        .collocation
        .par_iter()
        .map(|&(x, normal)| {
            let mut pot = Vec::with_capacity(n);
            let mut flux = Vec::with_capacity(n);
            for &source in &points.sources {
                let r = (x - source).norm();
                pot.push(fundamental_solution(r)?);
                flux.push(basis_normal_derivative(x, source, normal)?);
            }
            Ok((pot, flux))
        })
        .collect::<Result<_>>()?;

    let mut matrix = DMatrix::zeros(2 * m, n);
    for (i, (pot, flux)) in rows.iter().enumerate() {
        for j in 0..n {
            matrix[(i, j)] = pot[j];
            matrix[(m + i, j)] = flux[j];
        }
    }
    let mut rhs = DVector::zeros(2 * m);
    rhs.as_mut_slice()[..m].copy_from_slice(f);
    rhs.as_mut_slice()[m..].copy_from_slice(g);

    Ok(MfsSystem {
        matrix,
        rhs,
        points: points.clone(),
    })
}

/// Evaluates the expansion `u_N(x) = Σ_j w_j φ_j(x)` at each target.
pub fn evaluate_expansion(
    weights: &WeightVector,
    points: &PointSet,
    targets: &[Point2<f64>],
) -> Result<Vec<f64>> {
    if weights.len() != points.source_count() {
        return Err(Error::Argument(format!(
            "{} weights for {} sources",
            weights.len(),
            points.source_count()
        )));
    }
    targets
        .par_iter()
        .map(|&t| {
            let mut acc = 0.0;
            for (j, &source) in points.sources.iter().enumerate() {
                acc += weights.0[j] * fundamental_solution((t - source).norm())?;
            }
            Ok(acc)
        })
        .collect()
}
