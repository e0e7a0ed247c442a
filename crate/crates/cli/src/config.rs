//! Flat key-value experiment configuration.
//!
//! One file describes one experiment. Files are TOML (JSON is accepted too,
//! so a summary's config echo can be re-run directly); command-line flags
//! override individual fields. All numeric constraints are validated here,
//! before any computation starts.

use std::path::Path;

use serde::{Deserialize, Serialize};

use cauchy_mfs::experiments::{NoiseSpec, SolveParams, DEFAULT_EVAL_POINTS};
use cauchy_mfs::geometry::{BoundaryGeometry, BoundaryKind, ExactSolution, SourceRadii};
use cauchy_mfs::regularization::AlphaGrid;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// "unit-disk", "cassini-oval" or "annulus".
    pub geometry: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cassini_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cassini_b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annulus_r_inner: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annulus_r_outer: Option<f64>,
    /// Cauchy arc `[lo, hi)` in radians; defaults to the first-quadrant
    /// quarter arc.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cauchy_arc_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cauchy_arc_hi: Option<f64>,

    /// "exp-trig", "dipole", "inverse-radial" or "sine-cosh".
    pub exact: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dipole_offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sine_frequency: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sine_decay: Option<f64>,

    /// Collocation point count.
    pub m: usize,
    /// Source point count.
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_radius_outer: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_radius_inner: Option<f64>,
    /// Override of the annulus outer/inner source split.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_sources: Option<usize>,

    /// Relative noise level.
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval_points: Option<usize>,

    /// Fixed regularization parameter instead of the L-curve corner.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Extra parameters whose boundary errors are tabulated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_table: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_count: Option<usize>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub dump_matrix: bool,

    // sweep-noise
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds_per_delta: Option<usize>,

    // scan-params
    /// "source-grid" (N×R scan) or "collocation" (M sweep).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_values: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_values: Option<Vec<usize>>,
}

fn is_false(v: &bool) -> bool {
    !v
}

/// Typed inputs derived from a validated configuration.
pub struct ValidatedRun {
    pub geometry: BoundaryGeometry,
    pub exact: ExactSolution,
    pub params: SolveParams,
    pub noise: NoiseSpec,
}

impl RunConfig {
    /// Reads a configuration file, accepting TOML or JSON.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let toml_err = match toml::from_str::<Self>(&text) {
            Ok(config) => return Ok(config),
            Err(e) => e,
        };
        match serde_json::from_str::<Self>(&text) {
            Ok(config) => Ok(config),
            Err(json_err) => Err(CliError::Config(format!(
                "cannot parse {} as TOML ({toml_err}) or JSON ({json_err})",
                path.display()
            ))),
        }
    }

    /// Builds the typed solver inputs, checking every module precondition.
    pub fn validate(&self) -> Result<ValidatedRun, CliError> {
        let config_err = |msg: String| CliError::Config(msg);

        let kind = match self.geometry.as_str() {
            "unit-disk" => BoundaryKind::UnitDisk,
            "cassini-oval" => BoundaryKind::CassiniOval {
                a: self
                    .cassini_a
                    .ok_or_else(|| config_err("cassini-oval needs cassini_a".into()))?,
                b: self
                    .cassini_b
                    .ok_or_else(|| config_err("cassini-oval needs cassini_b".into()))?,
            },
            "annulus" => BoundaryKind::Annulus {
                r_inner: self
                    .annulus_r_inner
                    .ok_or_else(|| config_err("annulus needs annulus_r_inner".into()))?,
                r_outer: self
                    .annulus_r_outer
                    .ok_or_else(|| config_err("annulus needs annulus_r_outer".into()))?,
            },
            other => return Err(config_err(format!("unknown geometry \"{other}\""))),
        };
        let geometry = match (self.cauchy_arc_lo, self.cauchy_arc_hi) {
            (None, None) => BoundaryGeometry::new(kind),
            (lo, hi) => BoundaryGeometry::with_cauchy_arc(
                kind,
                lo.unwrap_or(0.0),
                hi.unwrap_or(std::f64::consts::FRAC_PI_2),
            ),
        }
        .map_err(|e| config_err(e.to_string()))?;

        let exact = match self.exact.as_str() {
            "exp-trig" => ExactSolution::ExpTrig,
            "dipole" => ExactSolution::Dipole {
                offset: self
                    .dipole_offset
                    .ok_or_else(|| config_err("dipole needs dipole_offset".into()))?,
            },
            "inverse-radial" => ExactSolution::InverseRadial,
            "sine-cosh" => ExactSolution::SineCosh {
                frequency: self
                    .sine_frequency
                    .ok_or_else(|| config_err("sine-cosh needs sine_frequency".into()))?,
                decay: self
                    .sine_decay
                    .ok_or_else(|| config_err("sine-cosh needs sine_decay".into()))?,
            },
            other => return Err(config_err(format!("unknown exact solution \"{other}\""))),
        };

        let radii = if geometry.has_inner_boundary() {
            SourceRadii::Pair {
                outer: self
                    .source_radius_outer
                    .ok_or_else(|| config_err("annulus needs source_radius_outer".into()))?,
                inner: self
                    .source_radius_inner
                    .ok_or_else(|| config_err("annulus needs source_radius_inner".into()))?,
            }
        } else {
            SourceRadii::Single(self.source_radius.ok_or_else(|| {
                config_err("simply connected geometry needs source_radius".into())
            })?)
        };

        let alpha_grid = match (self.alpha_min, self.alpha_max, self.alpha_count) {
            (None, None, None) => None,
            (Some(lo), Some(hi), count) => Some(
                AlphaGrid::new(lo, hi, count.unwrap_or(200))
                    .map_err(|e| config_err(e.to_string()))?,
            ),
            _ => {
                return Err(config_err(
                    "alpha_min and alpha_max must be given together".into(),
                ))
            }
        };

        let mut params = SolveParams::new(self.m, self.n, radii);
        params.outer_sources = self.outer_sources;
        params.alpha_grid = alpha_grid;
        params.eval_points = self.eval_points.unwrap_or(DEFAULT_EVAL_POINTS);
        if params.collocation_points == 0 || params.source_points == 0 {
            return Err(config_err("m and n must be at least 1".into()));
        }
        if let Some(alpha) = self.alpha {
            if !(alpha >= 0.0) {
                return Err(config_err(format!("alpha override {alpha} must be ≥ 0")));
            }
        }

        let noise =
            NoiseSpec::new(self.delta, self.seed).map_err(|e| config_err(e.to_string()))?;

        // fail fast on invalid layouts (radii vs geometry etc.)
        cauchy_mfs::geometry::distribute_points(
            &geometry,
            params.collocation_points,
            params.source_points,
            params.radii,
            params.outer_sources,
        )
        .map_err(|e| config_err(e.to_string()))?;

        Ok(ValidatedRun {
            geometry,
            exact,
            params,
            noise,
        })
    }
}
