//! Spectral treatment of the ill-conditioned collocation system: singular
//! value decomposition, least-norm and Tikhonov-filtered solutions, and
//! L-curve selection of the regularization parameter.

mod lcurve;
mod svd;
mod tikhonov;

pub use lcurve::{corner_search, lcurve_corner, lcurve_sample, AlphaGrid, LCurve};
pub use svd::{compute_svd, SvdFactors, RANK_TOLERANCE};
pub use tikhonov::{
    error_decomposition, least_norm_solution, optimal_alpha, tikhonov_solve, RegularizedSolution,
};
