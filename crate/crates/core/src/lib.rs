//! Solver library for the Cauchy problem of the 2-D Laplace equation.
//!
//! The boundary value problem prescribes both Dirichlet and Neumann data on
//! one part of the boundary and asks for the potential everywhere else. The
//! problem is discretized by the method of fundamental solutions: the
//! potential is expanded in logarithmic point sources placed outside the
//! domain, collocation at the data points yields a severely ill-conditioned
//! dense system, and Tikhonov regularization with an L-curve-selected
//! parameter produces a stable solution.
//!
//! Modules:
//! - [`geometry`]: boundary curves, normals, exact test solutions and the
//!   uniform collocation/source point layouts.
//! - [`assembly`]: the fundamental solution kernels and the dense system.
//! - [`regularization`]: SVD, least-norm and Tikhonov solutions, L-curve
//!   sampling and corner detection.
//! - [`experiments`]: noise injection, end-to-end solves, error metrics,
//!   parameter sweeps and machine-readable reports.

// `!(x > 0.0)`-style guards treat NaN as invalid input on purpose; index
// loops walk several parallel arrays at once.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod assembly;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod regularization;

pub use error::{Error, Result};
