//! The numerical experiments: noise injection, end-to-end solves, sweeps
//! and report serialization.

pub mod noise;
pub mod problem;
pub mod report;
pub mod sweeps;

pub use noise::{add_noise, derive_seed, NoiseSpec, SplitMix64};
pub use problem::{
    boundary_error, solve_cauchy, AlphaTableRow, BoundaryTrace, CauchyProblem, ExperimentReport,
    SolveParams, DEFAULT_EVAL_POINTS,
};
pub use sweeps::{
    collocation_sweep, noise_sweep, param_scan, CollocationRow, NoiseSweepMedian, NoiseSweepReport,
    NoiseSweepRow, ParamScanReport, RegressionFit, ScanCell,
};
