//! One-sided Jacobi singular value decomposition.
//!
//! The collocation matrices are tall (2M ≥ N) with at most a few dozen
//! columns, which is exactly the regime where cyclic one-sided Jacobi is
//! simple and fully accurate: plane rotations orthogonalize the columns in
//! place, the column norms become the singular values, and the accumulated
//! rotations form the right singular vectors.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative cutoff below which singular values do not count toward the rank.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Convergence threshold on the cosine between column pairs.
const ORTHO_TOLERANCE: f64 = 1e-13;

/// Thin SVD `A = U Σ Vᵀ` of a tall matrix.
///
/// `left_vectors` holds the first `N = min` columns of `U` (the remaining
/// `2M − N` columns multiply zero rows of `Σ` and are never materialized),
/// `right_vectors` is the full N×N `V`.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub left_vectors: DMatrix<f64>,
    /// Non-increasing, non-negative.
    pub singular_values: Vec<f64>,
    pub right_vectors: DMatrix<f64>,
    /// Count of singular values above `RANK_TOLERANCE · σ₁`.
    pub rank: usize,
}

impl SvdFactors {
    pub fn largest(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Coefficients `β_i = u_i · b` for the retained columns.
    pub fn left_coefficients(&self, b: &DVector<f64>) -> Vec<f64> {
        (0..self.singular_values.len())
            .map(|i| self.left_vectors.column(i).dot(b))
            .collect()
    }
}

fn col_dot(data: &[f64], rows: usize, i: usize, j: usize) -> f64 {
    let a = &data[i * rows..(i + 1) * rows];
    let b = &data[j * rows..(j + 1) * rows];
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rotate_cols(data: &mut [f64], rows: usize, i: usize, j: usize, c: f64, s: f64) {
    debug_assert!(i < j);
    let (head, tail) = data.split_at_mut(j * rows);
    let col_i = &mut head[i * rows..(i + 1) * rows];
    let col_j = &mut tail[..rows];
    for (a, b) in col_i.iter_mut().zip(col_j.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

/// Computes the thin SVD of a tall dense matrix (rows ≥ columns).
///
/// Cyclic sweeps over all column pairs, capped at `100 · min(rows, cols)`
/// sweeps; failure to converge within the cap is reported as an error.
pub fn compute_svd(matrix: &DMatrix<f64>) -> Result<SvdFactors> {
    let (rows, cols) = matrix.shape();
    if rows < cols {
        return Err(Error::Argument(format!(
            "svd expects a tall matrix, got {rows}×{cols}"
        )));
    }
    if cols == 0 {
        return Err(Error::Argument("svd of an empty matrix".into()));
    }
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument("svd input contains non-finite entries".into()));
    }

    // Column-major working copies: `work` becomes U·Σ, `v` accumulates the
    // rotations so that A = work · vᵀ throughout.
    let mut work: Vec<f64> = matrix.as_slice().to_vec();
    let mut v: Vec<f64> = DMatrix::<f64>::identity(cols, cols).as_slice().to_vec();

    let max_sweeps = 100 * cols.min(rows);
    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for i in 0..cols - 1 {
            for j in i + 1..cols {
                let aii = col_dot(&work, rows, i, i);
                let ajj = col_dot(&work, rows, j, j);
                let aij = col_dot(&work, rows, i, j);
                if aij.abs() <= ORTHO_TOLERANCE * (aii * ajj).sqrt() || aii * ajj == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (ajj - aii) / (2.0 * aij);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_cols(&mut work, rows, i, j, c, s);
                rotate_cols(&mut v, cols, i, j, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SvdConvergence { sweeps: max_sweeps });
    }

    // Column norms are the singular values; sort them non-increasing.
    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = (0..cols)
        .map(|j| col_dot(&work, rows, j, j).sqrt())
        .collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap());

    let mut left = DMatrix::zeros(rows, cols);
    let mut right = DMatrix::zeros(cols, cols);
    let mut singular_values = Vec::with_capacity(cols);
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        singular_values.push(sigma);
        let col = &work[src * rows..(src + 1) * rows];
        if sigma > 0.0 {
            for (r, &value) in col.iter().enumerate() {
                left[(r, dst)] = value / sigma;
            }
        }
        let vcol = &v[src * cols..(src + 1) * cols];
        for (r, &value) in vcol.iter().enumerate() {
            right[(r, dst)] = value;
        }
    }

    // Zero columns carry no information; complete U orthonormally so the
    // factor stays a valid orthonormal basis.
    for dst in 0..cols {
        if singular_values[dst] > 0.0 {
            continue;
        }
        for basis in 0..rows {
            let mut candidate = DVector::zeros(rows);
            candidate[basis] = 1.0;
            for k in 0..cols {
                if k == dst || (singular_values[k] == 0.0 && k > dst) {
                    continue;
                }
                let col = left.column(k).clone_owned();
                let proj = col.dot(&candidate);
                candidate -= proj * col;
            }
            let norm = candidate.norm();
            if norm > 0.5 {
                left.set_column(dst, &(candidate / norm));
                break;
            }
        }
    }

    let sigma_max = singular_values[0];
    let rank = singular_values
        .iter()
        .take_while(|&&s| s > RANK_TOLERANCE * sigma_max)
        .count();

    Ok(SvdFactors {
        left_vectors: left,
        singular_values,
        right_vectors: right,
        rank,
    })
}
