//! Boundary curves, exact test solutions and point layouts.
//!
//! Three boundary families are supported: the unit disk, a Cassini oval and
//! a circular annulus. Cauchy data live on an angular sub-arc of the (outer)
//! boundary; collocation points are placed uniformly in the curve parameter
//! on that arc and point sources on one or two circles outside the closed
//! domain.

use std::f64::consts::PI;

use nalgebra::{Point2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Evaluation closer than this to a singular point of an exact solution is
/// rejected rather than returning a meaningless float.
pub const SINGULARITY_GUARD: f64 = 1e-10;

/// Boundary curve family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryKind {
    UnitDisk,
    CassiniOval { a: f64, b: f64 },
    Annulus { r_inner: f64, r_outer: f64 },
}

/// Which boundary component of a multi-component domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryComponent {
    Outer,
    Inner,
}

/// A boundary curve together with the angular arc carrying the Cauchy data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGeometry {
    kind: BoundaryKind,
    /// Half-open angular interval `[lo, hi)` on the outer boundary.
    cauchy_arc: (f64, f64),
}

/// Radius of the Cassini oval `r(θ) = a·sqrt(cos 2θ + sqrt((b/a)⁴ − sin²2θ))`.
///
/// Requires `b > a > 0`, which keeps the radicand positive for every angle
/// and the curve a single closed loop.
pub fn cassini_radius(theta: f64, a: f64, b: f64) -> Result<f64> {
    check_cassini(a, b)?;
    let q = (b / a).powi(4);
    let s2 = (2.0 * theta).sin();
    Ok(a * ((2.0 * theta).cos() + (q - s2 * s2).sqrt()).sqrt())
}

/// Analytic derivative `r′(θ)` of the Cassini radius.
pub fn cassini_radius_derivative(theta: f64, a: f64, b: f64) -> Result<f64> {
    let r = cassini_radius(theta, a, b)?;
    let q = (b / a).powi(4);
    let s2 = (2.0 * theta).sin();
    // d/dθ [cos 2θ + sqrt(q − sin²2θ)] = −2 sin 2θ − sin 4θ / sqrt(q − sin²2θ)
    let gp = -2.0 * s2 - (4.0 * theta).sin() / (q - s2 * s2).sqrt();
    Ok(a * a * gp / (2.0 * r))
}

fn check_cassini(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > a) {
        return Err(Error::Geometry(format!(
            "cassini oval needs b > a > 0, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

impl BoundaryGeometry {
    /// Constructs a geometry with the default Cauchy arc `[0, π/2)`, the
    /// first-quadrant quarter of the (outer) boundary.
    pub fn new(kind: BoundaryKind) -> Result<Self> {
        Self::with_cauchy_arc(kind, 0.0, PI / 2.0)
    }

    pub fn unit_disk() -> Self {
        Self::new(BoundaryKind::UnitDisk).expect("unit disk is always valid")
    }

    pub fn cassini_oval(a: f64, b: f64) -> Result<Self> {
        Self::new(BoundaryKind::CassiniOval { a, b })
    }

    pub fn annulus(r_inner: f64, r_outer: f64) -> Result<Self> {
        Self::new(BoundaryKind::Annulus { r_inner, r_outer })
    }

    /// Constructs a geometry with an explicit Cauchy arc `[lo, hi)`, a strict
    /// sub-interval of `[0, 2π)`.
    pub fn with_cauchy_arc(kind: BoundaryKind, lo: f64, hi: f64) -> Result<Self> {
        match kind {
            BoundaryKind::UnitDisk => {}
            BoundaryKind::CassiniOval { a, b } => check_cassini(a, b)?,
            BoundaryKind::Annulus { r_inner, r_outer } => {
                if !(0.0 < r_inner && r_inner < r_outer) {
                    return Err(Error::Geometry(format!(
                        "annulus needs 0 < r_inner < r_outer, got {r_inner}, {r_outer}"
                    )));
                }
            }
        }
        if !(lo >= 0.0 && lo < hi && hi - lo < TWO_PI && hi < TWO_PI) {
            return Err(Error::Geometry(format!(
                "cauchy arc [{lo}, {hi}) must be a strict sub-interval of [0, 2π)"
            )));
        }
        Ok(Self {
            kind,
            cauchy_arc: (lo, hi),
        })
    }

    pub fn kind(&self) -> BoundaryKind {
        self.kind
    }

    pub fn cauchy_arc(&self) -> (f64, f64) {
        self.cauchy_arc
    }

    pub fn has_inner_boundary(&self) -> bool {
        matches!(self.kind, BoundaryKind::Annulus { .. })
    }

    /// Largest distance from the origin to the (outer) boundary; sources must
    /// be placed strictly beyond it.
    pub fn max_radius(&self) -> f64 {
        match self.kind {
            BoundaryKind::UnitDisk => 1.0,
            // r(θ) peaks at θ = 0 where it equals sqrt(a² + b²).
            BoundaryKind::CassiniOval { a, b } => (a * a + b * b).sqrt(),
            BoundaryKind::Annulus { r_outer, .. } => r_outer,
        }
    }

    /// Point on the requested boundary component and the unit normal pointing
    /// out of the solution domain.
    ///
    /// For circles the normal is radial, negated on the inner boundary of the
    /// annulus where "out of the domain" points toward the center. For the
    /// oval it is built from `r` and `r′`.
    pub fn point_and_normal(
        &self,
        theta: f64,
        which: BoundaryComponent,
    ) -> Result<(Point2<f64>, Vector2<f64>)> {
        let radial = Vector2::new(theta.cos(), theta.sin());
        match (self.kind, which) {
            (BoundaryKind::UnitDisk, BoundaryComponent::Outer) => {
                Ok((Point2::from(radial), radial))
            }
            (BoundaryKind::CassiniOval { a, b }, BoundaryComponent::Outer) => {
                let r = cassini_radius(theta, a, b)?;
                let rp = cassini_radius_derivative(theta, a, b)?;
                let den = (rp * rp + r * r).sqrt();
                let normal = Vector2::new(
                    (rp * theta.sin() + r * theta.cos()) / den,
                    (-rp * theta.cos() + r * theta.sin()) / den,
                );
                Ok((Point2::from(r * radial), normal))
            }
            (BoundaryKind::Annulus { r_outer, .. }, BoundaryComponent::Outer) => {
                Ok((Point2::from(r_outer * radial), radial))
            }
            (BoundaryKind::Annulus { r_inner, .. }, BoundaryComponent::Inner) => {
                Ok((Point2::from(r_inner * radial), -radial))
            }
            (_, BoundaryComponent::Inner) => Err(Error::Argument(
                "inner boundary requested on a simply connected geometry".into(),
            )),
        }
    }
}

/// Source-circle radii: one circle for simply connected domains, an
/// outer/inner pair for the annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SourceRadii {
    Single(f64),
    Pair { outer: f64, inner: f64 },
}

/// Collocation points with outward normals plus exterior source points.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub collocation: Vec<(Point2<f64>, Vector2<f64>)>,
    pub sources: Vec<Point2<f64>>,
    pub radii: SourceRadii,
}

impl PointSet {
    pub fn collocation_count(&self) -> usize {
        self.collocation.len()
    }

    pub fn source_count(&self) -> usize {
        self.sources.len()
    }
}

fn source_circle(radius: f64, count: usize) -> impl Iterator<Item = Point2<f64>> {
    (1..=count).map(move |j| {
        let angle = TWO_PI * (j as f64 - 1.0) / count as f64 + PI / count as f64;
        Point2::new(radius * angle.cos(), radius * angle.sin())
    })
}

/// Lays out `m` collocation points uniformly (in the angular parameter) on
/// the Cauchy arc and `n` sources on the given exterior circle(s).
///
/// On the default quarter arc the collocation angles are
/// `θ_i = 2π(i−1)/(4m) + π/(4m)` and the source angles
/// `θ̂_j = 2π(j−1)/n + π/n`. For the annulus, `n` splits as
/// `ceil(n/2)` sources on the outer circle and `floor(n/2)` on the inner
/// one unless `outer_sources` overrides the split.
pub fn distribute_points(
    geom: &BoundaryGeometry,
    m: usize,
    n: usize,
    radii: SourceRadii,
    outer_sources: Option<usize>,
) -> Result<PointSet> {
    if m == 0 || n == 0 {
        return Err(Error::Argument(format!(
            "need at least one collocation and one source point, got m = {m}, n = {n}"
        )));
    }

    let (lo, hi) = geom.cauchy_arc;
    let collocation = (1..=m)
        .map(|i| {
            let theta = lo + (hi - lo) * (i as f64 - 0.5) / m as f64;
            geom.point_and_normal(theta, BoundaryComponent::Outer)
        })
        .collect::<Result<Vec<_>>>()?;

    let sources = match (geom.kind, radii) {
        (BoundaryKind::Annulus { r_inner, r_outer }, SourceRadii::Pair { outer, inner }) => {
            if !(outer > r_outer) {
                return Err(Error::Geometry(format!(
                    "outer source radius {outer} must exceed the outer boundary radius {r_outer}"
                )));
            }
            if !(0.0 < inner && inner < r_inner) {
                return Err(Error::Geometry(format!(
                    "inner source radius {inner} must lie strictly inside the hole (0, {r_inner})"
                )));
            }
            let n_outer = outer_sources.unwrap_or(n.div_ceil(2));
            if n_outer > n {
                return Err(Error::Argument(format!(
                    "outer source count {n_outer} exceeds total source count {n}"
                )));
            }
            source_circle(outer, n_outer)
                .chain(source_circle(inner, n - n_outer))
                .collect()
        }
        (BoundaryKind::Annulus { .. }, SourceRadii::Single(_)) => {
            return Err(Error::Geometry(
                "annulus geometry needs an outer/inner source radius pair".into(),
            ));
        }
        (_, SourceRadii::Pair { .. }) => {
            return Err(Error::Geometry(
                "simply connected geometry takes a single source radius".into(),
            ));
        }
        (_, SourceRadii::Single(radius)) => {
            if !(radius > geom.max_radius()) {
                return Err(Error::Geometry(format!(
                    "source radius {radius} must exceed the boundary extent {}",
                    geom.max_radius()
                )));
            }
            source_circle(radius, n).collect()
        }
    };

    Ok(PointSet {
        collocation,
        sources,
        radii,
    })
}

/// Harmonic reference solutions used by the numerical experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExactSolution {
    /// `u = e^x cos y − e^y sin x`, entire.
    ExpTrig,
    /// `u = ln|p − (x₀,0)| − ln|p + (x₀,0)|`, singular at `(±x₀, 0)`.
    Dipole { offset: f64 },
    /// `u = x / (x² + y²)`, singular at the origin.
    InverseRadial,
    /// `u = n^{−k} sin(nx) cosh(ny)`, entire; the textbook instability family.
    SineCosh { frequency: u32, decay: f64 },
}

impl ExactSolution {
    fn guard(&self, p: Point2<f64>) -> Result<()> {
        let near = |c: Point2<f64>| (p - c).norm() < SINGULARITY_GUARD;
        let hit = match *self {
            ExactSolution::Dipole { offset } => {
                near(Point2::new(offset, 0.0)) || near(Point2::new(-offset, 0.0))
            }
            ExactSolution::InverseRadial => near(Point2::origin()),
            _ => false,
        };
        if hit {
            Err(Error::Singular(format!(
                "evaluation at ({}, {}) is within {SINGULARITY_GUARD} of a singular point",
                p.x, p.y
            )))
        } else {
            Ok(())
        }
    }

    pub fn value(&self, p: Point2<f64>) -> Result<f64> {
        self.guard(p)?;
        let (x, y) = (p.x, p.y);
        Ok(match *self {
            ExactSolution::ExpTrig => x.exp() * y.cos() - y.exp() * x.sin(),
            ExactSolution::Dipole { offset } => {
                let r1 = (x - offset) * (x - offset) + y * y;
                let r2 = (x + offset) * (x + offset) + y * y;
                0.5 * (r1.ln() - r2.ln())
            }
            ExactSolution::InverseRadial => x / (x * x + y * y),
            ExactSolution::SineCosh { frequency, decay } => {
                let n = frequency as f64;
                n.powf(-decay) * (n * x).sin() * (n * y).cosh()
            }
        })
    }

    pub fn gradient(&self, p: Point2<f64>) -> Result<Vector2<f64>> {
        self.guard(p)?;
        let (x, y) = (p.x, p.y);
        Ok(match *self {
            ExactSolution::ExpTrig => Vector2::new(
                x.exp() * y.cos() - y.exp() * x.cos(),
                -x.exp() * y.sin() - y.exp() * x.sin(),
            ),
            ExactSolution::Dipole { offset } => {
                let r1 = (x - offset) * (x - offset) + y * y;
                let r2 = (x + offset) * (x + offset) + y * y;
                Vector2::new((x - offset) / r1 - (x + offset) / r2, y / r1 - y / r2)
            }
            ExactSolution::InverseRadial => {
                let d = (x * x + y * y) * (x * x + y * y);
                Vector2::new((y * y - x * x) / d, -2.0 * x * y / d)
            }
            ExactSolution::SineCosh { frequency, decay } => {
                let n = frequency as f64;
                let scale = n.powf(1.0 - decay);
                Vector2::new(
                    scale * (n * x).cos() * (n * y).cosh(),
                    scale * (n * x).sin() * (n * y).sinh(),
                )
            }
        })
    }
}

/// Dirichlet trace `f_i = u(x_i)` and Neumann trace `g_i = ∇u(x_i)·n_i` at
/// the collocation points.
pub fn exact_trace(sol: &ExactSolution, pts: &PointSet) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut f = Vec::with_capacity(pts.collocation.len());
    let mut g = Vec::with_capacity(pts.collocation.len());
    for &(p, n) in &pts.collocation {
        f.push(sol.value(p)?);
        g.push(sol.gradient(p)?.dot(&n));
    }
    Ok((f, g))
}

/// Demonstrates the lack of continuous dependence on the Cauchy data using
/// the family `u = n^{−k} sin(nx) cosh(ny)` on the unit square.
///
/// Returns `(sup |f| on the data segment, sup |u| on a samples×samples grid
/// of [0,1]²)`. As `n` grows the data supremum vanishes while the solution
/// supremum blows up.
pub fn instability_demo(frequency: u32, decay: f64, samples: usize) -> Result<(f64, f64)> {
    if frequency == 0 || decay <= 0.0 || samples < 2 {
        return Err(Error::Argument(format!(
            "need frequency ≥ 1, decay > 0, samples ≥ 2; got {frequency}, {decay}, {samples}"
        )));
    }
    let n = frequency as f64;
    let scale = n.powf(-decay);
    let grid = |i: usize| i as f64 / (samples - 1) as f64;

    let mut sup_f: f64 = 0.0;
    for i in 0..samples {
        sup_f = sup_f.max(scale * (n * grid(i)).sin().abs());
    }
    let mut sup_u: f64 = 0.0;
    for j in 0..samples {
        let cosh_ny = (n * grid(j)).cosh();
        for i in 0..samples {
            sup_u = sup_u.max(scale * (n * grid(i)).sin().abs() * cosh_ny);
        }
    }
    Ok((sup_f, sup_u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::experiments::noise::SplitMix64;

    #[test]
    fn cassini_radius_at_zero() {
        // sqrt(1 + 1.01²·… ) = sqrt(1 + sqrt(1.01⁴))
        let r = cassini_radius(0.0, 1.0, 1.01).unwrap();
        assert_relative_eq!(r, 1.4213022197970423, max_relative = 1e-14);
    }

    #[test]
    fn cassini_radius_at_quarter_pi() {
        // Independent high-precision evaluation of the radius formula.
        let r = cassini_radius(PI / 4.0, 1.0, 1.01).unwrap();
        assert_relative_eq!(r, 0.44889237819140064, max_relative = 1e-14);
    }

    #[test]
    fn cassini_radius_pi_periodic() {
        for k in 0..40 {
            let theta = TWO_PI * k as f64 / 40.0;
            let a = cassini_radius(theta, 1.0, 1.01).unwrap();
            let b = cassini_radius(theta + PI, 1.0, 1.01).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn cassini_rejects_flat_ratio() {
        assert!(cassini_radius(0.0, 1.0, 1.0).is_err());
        assert!(cassini_radius(0.0, 1.0, 0.5).is_err());
        assert!(cassini_radius(0.0, -1.0, 2.0).is_err());
    }

    #[test]
    fn constructor_validation() {
        assert!(BoundaryGeometry::annulus(1.0, 0.5).is_err());
        assert!(BoundaryGeometry::annulus(0.0, 1.0).is_err());
        assert!(BoundaryGeometry::cassini_oval(1.0, 0.9).is_err());
        // the Cauchy arc must be a strict sub-interval of [0, 2π)
        let kind = BoundaryKind::UnitDisk;
        assert!(BoundaryGeometry::with_cauchy_arc(kind, 0.0, TWO_PI).is_err());
        assert!(BoundaryGeometry::with_cauchy_arc(kind, 1.0, 0.5).is_err());
        assert!(BoundaryGeometry::with_cauchy_arc(kind, -0.1, 1.0).is_err());
        assert!(BoundaryGeometry::with_cauchy_arc(kind, 0.5, 4.0).is_ok());
    }

    #[test]
    fn cassini_tends_to_circle_for_large_ratio() {
        // |r(θ; a, b) − b| ≤ a²/b once b/a is large.
        let (a, b) = (1.0, 100.0);
        for k in 0..200 {
            let theta = TWO_PI * k as f64 / 200.0;
            let r = cassini_radius(theta, a, b).unwrap();
            assert!((r - b).abs() <= a * a / b, "theta={theta}, r={r}");
        }
    }

    #[test]
    fn disk_normal_is_radial() {
        let geom = BoundaryGeometry::unit_disk();
        let (p, n) = geom.point_and_normal(0.0, BoundaryComponent::Outer).unwrap();
        assert_relative_eq!(p.x, 1.0);
        assert_relative_eq!(p.y, 0.0);
        assert_relative_eq!(n.x, 1.0);
        assert_relative_eq!(n.y, 0.0);
    }

    #[test]
    fn cassini_normal_at_symmetry_axis() {
        let geom = BoundaryGeometry::cassini_oval(1.0, 1.01).unwrap();
        let (_, n) = geom.point_and_normal(0.0, BoundaryComponent::Outer).unwrap();
        assert_relative_eq!(n.x, 1.0, epsilon = 1e-12);
        assert_relative_eq!(n.y, 0.0, epsilon = 1e-12);
    }

    /// Finite-difference tangent, rotated −90°, as an oracle for the normal.
    fn fd_normal(geom: &BoundaryGeometry, theta: f64, which: BoundaryComponent) -> Vector2<f64> {
        let h = 1e-6;
        let (p_plus, _) = geom.point_and_normal(theta + h, which).unwrap();
        let (p_minus, _) = geom.point_and_normal(theta - h, which).unwrap();
        let t = (p_plus - p_minus) / (2.0 * h);
        Vector2::new(t.y, -t.x).normalize()
    }

    #[test]
    fn cassini_normal_matches_finite_difference_tangent() {
        let geom = BoundaryGeometry::cassini_oval(1.0, 1.01).unwrap();
        let (_, n) = geom
            .point_and_normal(PI / 6.0, BoundaryComponent::Outer)
            .unwrap();
        let fd = fd_normal(&geom, PI / 6.0, BoundaryComponent::Outer);
        assert!((n - fd).norm() < 1e-5);
    }

    #[test]
    fn normals_match_rotated_tangent_on_all_geometries() {
        let geoms = [
            BoundaryGeometry::unit_disk(),
            BoundaryGeometry::cassini_oval(1.0, 1.01).unwrap(),
            BoundaryGeometry::annulus(0.5, 1.0).unwrap(),
        ];
        let mut rng = SplitMix64::new(0x9e37);
        for geom in &geoms {
            for _ in 0..100 {
                let theta = 0.02 + (TWO_PI - 0.04) * rng.next_f64();
                let (_, n) = geom.point_and_normal(theta, BoundaryComponent::Outer).unwrap();
                let fd = fd_normal(geom, theta, BoundaryComponent::Outer);
                assert!((n - fd).norm() < 1e-5, "outer normal at theta={theta}");
                assert_relative_eq!(n.norm(), 1.0, epsilon = 1e-12);
            }
        }
        // Inner annulus boundary: outward from the domain means toward the
        // center, the negated rotated tangent of the CCW parametrization.
        let annulus = BoundaryGeometry::annulus(0.5, 1.0).unwrap();
        for _ in 0..100 {
            let theta = 0.02 + (TWO_PI - 0.04) * rng.next_f64();
            let (_, n) = annulus.point_and_normal(theta, BoundaryComponent::Inner).unwrap();
            let fd = fd_normal(&annulus, theta, BoundaryComponent::Inner);
            assert!((n + fd).norm() < 1e-5, "inner normal at theta={theta}");
        }
    }

    #[test]
    fn inner_component_rejected_on_disk() {
        let geom = BoundaryGeometry::unit_disk();
        assert!(geom.point_and_normal(0.0, BoundaryComponent::Inner).is_err());
    }

    #[test]
    fn single_collocation_point_sits_mid_arc() {
        let geom = BoundaryGeometry::unit_disk();
        let pts = distribute_points(&geom, 1, 4, SourceRadii::Single(3.2), None).unwrap();
        let (p, _) = pts.collocation[0];
        assert_relative_eq!(p.x, (PI / 4.0).cos(), epsilon = 1e-15);
        assert_relative_eq!(p.y, (PI / 4.0).sin(), epsilon = 1e-15);
    }

    #[test]
    fn four_sources_on_circle() {
        let geom = BoundaryGeometry::unit_disk();
        let pts = distribute_points(&geom, 1, 4, SourceRadii::Single(3.2), None).unwrap();
        let expected = [PI / 4.0, 3.0 * PI / 4.0, 5.0 * PI / 4.0, 7.0 * PI / 4.0];
        for (src, angle) in pts.sources.iter().zip(expected) {
            assert_relative_eq!(src.x, 3.2 * angle.cos(), epsilon = 1e-12);
            assert_relative_eq!(src.y, 3.2 * angle.sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn collocation_angles_equally_spaced() {
        let geom = BoundaryGeometry::unit_disk();
        let m = 37;
        let pts = distribute_points(&geom, m, 8, SourceRadii::Single(3.0), None).unwrap();
        assert_eq!(pts.collocation_count(), m);
        assert_eq!(pts.source_count(), 8);
        let spacing = TWO_PI / (4.0 * m as f64);
        for w in pts.collocation.windows(2) {
            let a0 = w[0].0.y.atan2(w[0].0.x);
            let a1 = w[1].0.y.atan2(w[1].0.x);
            assert_relative_eq!(a1 - a0, spacing, epsilon = 1e-12);
        }
    }

    #[test]
    fn reference_disk_configuration_invariants() {
        // The (R, M, N) = (3.2, 600, 28) layout used throughout the disk runs.
        let geom = BoundaryGeometry::unit_disk();
        let pts = distribute_points(&geom, 600, 28, SourceRadii::Single(3.2), None).unwrap();
        assert_eq!(pts.collocation_count(), 600);
        assert_eq!(pts.source_count(), 28);
        for &(p, n) in &pts.collocation {
            assert!((p.coords.norm() - 1.0).abs() < 1e-12);
            assert!((n.norm() - 1.0).abs() < 1e-12);
            assert!(p.x > 0.0 && p.y > 0.0, "collocation stays on the quarter arc");
        }
        for s in &pts.sources {
            assert!(s.coords.norm() > 1.0);
            assert_relative_eq!(s.coords.norm(), 3.2, epsilon = 1e-12);
        }
    }

    #[test]
    fn annulus_source_split() {
        let geom = BoundaryGeometry::annulus(0.5, 1.0).unwrap();
        let radii = SourceRadii::Pair { outer: 3.2, inner: 0.4 };
        let pts = distribute_points(&geom, 10, 7, radii, None).unwrap();
        let outer: Vec<_> = pts.sources.iter().filter(|s| s.coords.norm() > 1.0).collect();
        let inner: Vec<_> = pts.sources.iter().filter(|s| s.coords.norm() < 0.5).collect();
        assert_eq!(outer.len(), 4); // ceil(7/2)
        assert_eq!(inner.len(), 3); // floor(7/2)
        assert_eq!(outer.len() + inner.len(), pts.source_count());
    }

    #[test]
    fn sources_inside_domain_rejected() {
        let geom = BoundaryGeometry::unit_disk();
        assert!(distribute_points(&geom, 4, 4, SourceRadii::Single(0.9), None).is_err());
        assert!(distribute_points(&geom, 4, 4, SourceRadii::Single(1.0), None).is_err());
        let cass = BoundaryGeometry::cassini_oval(1.0, 1.01).unwrap();
        // max radius is sqrt(1 + 1.01²) ≈ 1.42
        assert!(distribute_points(&cass, 4, 4, SourceRadii::Single(1.3), None).is_err());
        let ann = BoundaryGeometry::annulus(0.5, 1.0).unwrap();
        let bad_inner = SourceRadii::Pair { outer: 3.2, inner: 0.6 };
        assert!(distribute_points(&ann, 4, 4, bad_inner, None).is_err());
    }

    #[test]
    fn exp_trig_trace_values() {
        let sol = ExactSolution::ExpTrig;
        assert_relative_eq!(sol.value(Point2::new(0.0, 0.0)).unwrap(), 1.0);
        let grad = sol.gradient(Point2::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(grad.dot(&Vector2::new(1.0, 0.0)), 0.0);
    }

    #[test]
    fn dipole_trace_value() {
        let sol = ExactSolution::Dipole { offset: 0.2 };
        let f = sol.value(Point2::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(f, 0.8f64.ln() - 1.2f64.ln(), max_relative = 1e-14);
    }

    #[test]
    fn inverse_radial_on_axis() {
        let sol = ExactSolution::InverseRadial;
        assert_relative_eq!(sol.value(Point2::new(0.0, 1.0)).unwrap(), 0.0);
        let g = sol.gradient(Point2::new(0.0, 1.0)).unwrap();
        assert_relative_eq!(g.dot(&Vector2::new(0.0, 1.0)), 0.0);
    }

    #[test]
    fn singularity_guard_rejects() {
        let sol = ExactSolution::Dipole { offset: 0.2 };
        assert!(sol.value(Point2::new(0.2, 0.0)).is_err());
        assert!(sol.value(Point2::new(0.2 + 5e-11, 0.0)).is_err());
        assert!(ExactSolution::InverseRadial.value(Point2::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn exact_trace_matches_direct_evaluation() {
        let geom = BoundaryGeometry::unit_disk();
        let pts = distribute_points(&geom, 13, 6, SourceRadii::Single(3.0), None).unwrap();
        let sol = ExactSolution::ExpTrig;
        let (f, g) = exact_trace(&sol, &pts).unwrap();
        for (i, &(p, n)) in pts.collocation.iter().enumerate() {
            assert_relative_eq!(f[i], sol.value(p).unwrap());
            assert_relative_eq!(g[i], sol.gradient(p).unwrap().dot(&n));
        }
    }

    /// Five-point discrete Laplacian; small for every harmonic variant.
    #[test]
    fn variants_are_discretely_harmonic() {
        let h = 1e-4;
        let variants = [
            ExactSolution::ExpTrig,
            ExactSolution::Dipole { offset: 0.2 },
            ExactSolution::InverseRadial,
            ExactSolution::SineCosh { frequency: 2, decay: 1.0 },
        ];
        let mut rng = SplitMix64::new(0x5eed);
        for sol in variants {
            let mut tested = 0;
            while tested < 100 {
                let x = 2.0 * rng.next_f64() - 1.0;
                let y = 2.0 * rng.next_f64() - 1.0;
                let p = Point2::new(x, y);
                // keep clear of the poles so the 4th derivative stays tame
                let near_sing = match sol {
                    ExactSolution::Dipole { offset } => {
                        (p - Point2::new(offset, 0.0)).norm() < 0.2
                            || (p - Point2::new(-offset, 0.0)).norm() < 0.2
                    }
                    ExactSolution::InverseRadial => p.coords.norm() < 0.3,
                    _ => false,
                };
                if near_sing {
                    continue;
                }
                tested += 1;
                let u = |q: Point2<f64>| sol.value(q).unwrap();
                let lap = (u(Point2::new(x + h, y))
                    + u(Point2::new(x - h, y))
                    + u(Point2::new(x, y + h))
                    + u(Point2::new(x, y - h))
                    - 4.0 * u(p))
                    / (h * h);
                assert!(lap.abs() < 1e-4, "laplacian {lap} at ({x}, {y}) for {sol:?}");
            }
        }
    }

    #[test]
    fn instability_small_frequency() {
        let (sup_f, _) = instability_demo(1, 1.0, 1000).unwrap();
        assert_relative_eq!(sup_f, 1f64.sin(), max_relative = 1e-12);
    }

    #[test]
    fn instability_grid_supremum() {
        // Frozen from an independent grid evaluation (1000×1000 over [0,1]²).
        let (sup_f, sup_u) = instability_demo(10, 1.0, 1000).unwrap();
        assert!(sup_f <= 0.1 + 1e-15);
        assert_relative_eq!(sup_u, 1101.3229610602416, max_relative = 1e-10);
        assert!(sup_u >= 1101.3);
    }

    #[test]
    fn instability_data_bound() {
        for n in [1u32, 3, 7, 20] {
            let (sup_f, _) = instability_demo(n, 2.0, 200).unwrap();
            assert!(sup_f <= (n as f64).powf(-2.0) + 1e-15);
        }
    }
}
