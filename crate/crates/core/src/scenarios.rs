//! Built-in immersions with closed-form jets and normal frames.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::diffgeo::{ChartBounds, MetricField};
use crate::error::{GeometryError, Result};
use crate::manifolds::{Euclidean, StereographicSphere};
use crate::submanifold::Immersion;

pub const SCENARIO_NAMES: &[&str] = &["circle", "helix", "linear", "great-circle-s3", "sphere-r4"];

pub fn scenario_by_name(name: &str) -> Result<Arc<dyn Immersion>> {
    let s: Arc<dyn Immersion> = match name {
        "circle" => Arc::new(Circle::new()),
        "helix" => Arc::new(Helix::new(1.0, 0.5)),
        "linear" => Arc::new(LinearSubspace::new(1, 3)),
        "great-circle-s3" => Arc::new(GreatCircleS3::new()),
        "sphere-r4" => Arc::new(SphereInR4::new()),
        _ => return Err(GeometryError::UnknownScenario(name.to_string())),
    };
    Ok(s)
}

/// One-line description for `list-scenarios`.
pub fn describe(name: &str) -> &'static str {
    match name {
        "circle" => "unit circle in flat R^2, outward normal (codim 1)",
        "helix" => "unit-speed circular helix in flat R^3, Frenet normal/binormal (codim 2)",
        "linear" => "coordinate line R^1 in flat R^3 (totally geodesic control)",
        "great-circle-s3" => "great circle in the unit S^3, stereographic chart, parallel normals (codim 2)",
        "sphere-r4" => "unit S^2 in flat R^4 via spherical angles, radial and e4 normals (codim 2)",
        _ => "",
    }
}

fn col(xs: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(xs)
}

fn cols(n: usize, columns: &[&[f64]]) -> DMatrix<f64> {
    DMatrix::from_fn(n, columns.len(), |r, c| columns[c][r])
}

/// `f(t) = (cos t, sin t)` with `n = (cos t, sin t)`.
pub struct Circle {
    ambient: Arc<dyn MetricField>,
    domain: ChartBounds,
}

impl Circle {
    pub fn new() -> Self {
        Self {
            ambient: Arc::new(Euclidean::new(2)),
            domain: ChartBounds::new(vec![-PI], vec![PI]),
        }
    }
}

impl Default for Circle {
    fn default() -> Self {
        Self::new()
    }
}

impl Immersion for Circle {
    fn name(&self) -> &str {
        "circle"
    }
    fn constant_curvature(&self) -> Option<f64> {
        Some(0.0)
    }
    fn ambient(&self) -> Arc<dyn MetricField> {
        self.ambient.clone()
    }
    fn base_dim(&self) -> usize {
        1
    }
    fn domain(&self) -> &ChartBounds {
        &self.domain
    }
    fn position(&self, y: &DVector<f64>) -> DVector<f64> {
        let (s, c) = y[0].sin_cos();
        col(&[c, s])
    }
    fn jacobian(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let (s, c) = y[0].sin_cos();
        cols(2, &[&[-s, c]])
    }
    fn second_partials(&self, y: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let (s, c) = y[0].sin_cos();
        vec![cols(2, &[&[-c, -s]])]
    }
    fn normal_frame(&self, y: &DVector<f64>) -> Option<DMatrix<f64>> {
        let (s, c) = y[0].sin_cos();
        Some(cols(2, &[&[c, s]]))
    }
    fn normal_frame_derivative(&self, y: &DVector<f64>, _a: usize) -> Option<DMatrix<f64>> {
        let (s, c) = y[0].sin_cos();
        Some(cols(2, &[&[-s, c]]))
    }
    fn normal_frame_second_derivative(&self, y: &DVector<f64>, _a: usize, _b: usize) -> Option<DMatrix<f64>> {
        let (s, c) = y[0].sin_cos();
        Some(cols(2, &[&[-c, -s]]))
    }
}

/// Arc-length helix of radius `r` and pitch `h`; normals are the Frenet
/// principal normal and binormal.
pub struct Helix {
    pub radius: f64,
    pub pitch: f64,
    ambient: Arc<dyn MetricField>,
    domain: ChartBounds,
}

impl Helix {
    pub fn new(radius: f64, pitch: f64) -> Self {
        Self {
            radius,
            pitch,
            ambient: Arc::new(Euclidean::new(3)),
            domain: ChartBounds::new(vec![-5.0], vec![5.0]),
        }
    }

    fn speed(&self) -> f64 {
        self.radius.hypot(self.pitch)
    }

    pub fn curvature(&self) -> f64 {
        self.radius / (self.speed() * self.speed())
    }

    pub fn torsion(&self) -> f64 {
        self.pitch / (self.speed() * self.speed())
    }

    /// Unit tangent at arc length `s`.
    pub fn tangent(&self, s: f64) -> DVector<f64> {
        let c = self.speed();
        let (sn, cs) = (s / c).sin_cos();
        col(&[-self.radius / c * sn, self.radius / c * cs, self.pitch / c])
    }

    fn normal(&self, s: f64) -> [f64; 3] {
        let (sn, cs) = (s / self.speed()).sin_cos();
        [-cs, -sn, 0.0]
    }

    fn binormal(&self, s: f64) -> [f64; 3] {
        let c = self.speed();
        let (sn, cs) = (s / c).sin_cos();
        [self.pitch / c * sn, -self.pitch / c * cs, self.radius / c]
    }
}

impl Immersion for Helix {
    fn name(&self) -> &str {
        "helix"
    }
    fn constant_curvature(&self) -> Option<f64> {
        Some(0.0)
    }
    fn ambient(&self) -> Arc<dyn MetricField> {
        self.ambient.clone()
    }
    fn base_dim(&self) -> usize {
        1
    }
    fn domain(&self) -> &ChartBounds {
        &self.domain
    }
    fn position(&self, y: &DVector<f64>) -> DVector<f64> {
        let c = self.speed();
        let (sn, cs) = (y[0] / c).sin_cos();
        col(&[self.radius * cs, self.radius * sn, self.pitch * y[0] / c])
    }
    fn jacobian(&self, y: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::from_column_slice(3, 1, self.tangent(y[0]).as_slice())
    }
    fn second_partials(&self, y: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let k = self.curvature();
        let n = self.normal(y[0]);
        vec![cols(3, &[&[k * n[0], k * n[1], k * n[2]]])]
    }
    fn normal_frame(&self, y: &DVector<f64>) -> Option<DMatrix<f64>> {
        Some(cols(3, &[&self.normal(y[0]), &self.binormal(y[0])]))
    }
    fn normal_frame_derivative(&self, y: &DVector<f64>, _a: usize) -> Option<DMatrix<f64>> {
        // N' = −κT + τB, B' = −τN
        let (k, tau) = (self.curvature(), self.torsion());
        let t = self.tangent(y[0]);
        let b = col(&self.binormal(y[0]));
        let n = col(&self.normal(y[0]));
        let dn = t * -k + b * tau;
        let db = n * -tau;
        Some(DMatrix::from_columns(&[dn, db]))
    }
    fn normal_frame_second_derivative(&self, y: &DVector<f64>, _a: usize, _b: usize) -> Option<DMatrix<f64>> {
        // N'' = −κ(κN) + τ(−τN), B'' = −τ(−κT + τB)
        let (k, tau) = (self.curvature(), self.torsion());
        let t = self.tangent(y[0]);
        let b = col(&self.binormal(y[0]));
        let n = col(&self.normal(y[0]));
        let ddn = &n * -(k * k + tau * tau);
        let ddb = (t * -k + b * tau) * -tau;
        Some(DMatrix::from_columns(&[ddn, ddb]))
    }
}

/// `R^m ⊂ R^n` as the first `m` coordinates.
pub struct LinearSubspace {
    m: usize,
    ambient: Arc<dyn MetricField>,
    domain: ChartBounds,
}

impl LinearSubspace {
    pub fn new(m: usize, n: usize) -> Self {
        assert!(m < n);
        Self {
            m,
            ambient: Arc::new(Euclidean::new(n)),
            domain: ChartBounds::cube(m, 5.0),
        }
    }

    fn n(&self) -> usize {
        self.ambient.dim()
    }
}

impl Immersion for LinearSubspace {
    fn name(&self) -> &str {
        "linear"
    }
    fn constant_curvature(&self) -> Option<f64> {
        Some(0.0)
    }
    fn ambient(&self) -> Arc<dyn MetricField> {
        self.ambient.clone()
    }
    fn base_dim(&self) -> usize {
        self.m
    }
    fn domain(&self) -> &ChartBounds {
        &self.domain
    }
    fn position(&self, y: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(self.n(), |r, _| if r < self.m { y[r] } else { 0.0 })
    }
    fn jacobian(&self, _y: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(self.n(), self.m, |r, a| if r == a { 1.0 } else { 0.0 })
    }
    fn second_partials(&self, _y: &DVector<f64>) -> Vec<DMatrix<f64>> {
        vec![DMatrix::zeros(self.n(), self.m); self.m]
    }
    fn normal_frame(&self, _y: &DVector<f64>) -> Option<DMatrix<f64>> {
        let (n, m) = (self.n(), self.m);
        Some(DMatrix::from_fn(n, n - m, |r, x| if r == m + x { 1.0 } else { 0.0 }))
    }
    fn normal_frame_derivative(&self, _y: &DVector<f64>, _a: usize) -> Option<DMatrix<f64>> {
        Some(DMatrix::zeros(self.n(), self.n() - self.m))
    }
    fn normal_frame_second_derivative(&self, _y: &DVector<f64>, _a: usize, _b: usize) -> Option<DMatrix<f64>> {
        Some(DMatrix::zeros(self.n(), self.n() - self.m))
    }
}

/// The great circle `x(y) = (tan(y/2), 0, 0)` of the unit `S³` in
/// stereographic coordinates, parametrised by arc length. The normals
/// `((1+s²)/2) e₂`, `((1+s²)/2) e₃` are parallel along it.
pub struct GreatCircleS3 {
    ambient: Arc<dyn MetricField>,
    domain: ChartBounds,
}

impl GreatCircleS3 {
    pub fn new() -> Self {
        Self {
            ambient: Arc::new(StereographicSphere::new(3)),
            domain: ChartBounds::new(vec![-2.0], vec![2.0]),
        }
    }
}

impl Default for GreatCircleS3 {
    fn default() -> Self {
        Self::new()
    }
}

impl Immersion for GreatCircleS3 {
    fn name(&self) -> &str {
        "great-circle-s3"
    }
    fn constant_curvature(&self) -> Option<f64> {
        Some(1.0)
    }
    fn ambient(&self) -> Arc<dyn MetricField> {
        self.ambient.clone()
    }
    fn base_dim(&self) -> usize {
        1
    }
    fn domain(&self) -> &ChartBounds {
        &self.domain
    }
    fn position(&self, y: &DVector<f64>) -> DVector<f64> {
        col(&[(y[0] / 2.0).tan(), 0.0, 0.0])
    }
    fn jacobian(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let s = (y[0] / 2.0).tan();
        cols(3, &[&[(1.0 + s * s) / 2.0, 0.0, 0.0]])
    }
    fn second_partials(&self, y: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let s = (y[0] / 2.0).tan();
        vec![cols(3, &[&[s * (1.0 + s * s) / 2.0, 0.0, 0.0]])]
    }
    fn normal_frame(&self, y: &DVector<f64>) -> Option<DMatrix<f64>> {
        let s = (y[0] / 2.0).tan();
        let c = (1.0 + s * s) / 2.0;
        Some(cols(3, &[&[0.0, c, 0.0], &[0.0, 0.0, c]]))
    }
    fn normal_frame_derivative(&self, y: &DVector<f64>, _a: usize) -> Option<DMatrix<f64>> {
        let s = (y[0] / 2.0).tan();
        let d = s * (1.0 + s * s) / 2.0;
        Some(cols(3, &[&[0.0, d, 0.0], &[0.0, 0.0, d]]))
    }
    fn normal_frame_second_derivative(&self, y: &DVector<f64>, _a: usize, _b: usize) -> Option<DMatrix<f64>> {
        // d/dy [s(1+s²)/2] = (1+3s²)(1+s²)/4
        let s = (y[0] / 2.0).tan();
        let dd = (1.0 + 3.0 * s * s) * (1.0 + s * s) / 4.0;
        Some(cols(3, &[&[0.0, dd, 0.0], &[0.0, 0.0, dd]]))
    }
}

/// Unit `S²` in `R⁴` via `(θ, φ) ↦ (sinθ cosφ, sinθ sinφ, cosθ, 0)`, with the
/// outward radial normal and `e₄`.
pub struct SphereInR4 {
    ambient: Arc<dyn MetricField>,
    domain: ChartBounds,
}

impl SphereInR4 {
    pub fn new() -> Self {
        Self {
            ambient: Arc::new(Euclidean::new(4)),
            domain: ChartBounds::new(vec![0.0, -PI], vec![PI, PI]),
        }
    }
}

impl Default for SphereInR4 {
    fn default() -> Self {
        Self::new()
    }
}

impl Immersion for SphereInR4 {
    fn name(&self) -> &str {
        "sphere-r4"
    }
    fn constant_curvature(&self) -> Option<f64> {
        Some(0.0)
    }
    fn ambient(&self) -> Arc<dyn MetricField> {
        self.ambient.clone()
    }
    fn base_dim(&self) -> usize {
        2
    }
    fn domain(&self) -> &ChartBounds {
        &self.domain
    }
    fn position(&self, y: &DVector<f64>) -> DVector<f64> {
        let (st, ct) = y[0].sin_cos();
        let (sp, cp) = y[1].sin_cos();
        col(&[st * cp, st * sp, ct, 0.0])
    }
    fn jacobian(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let (st, ct) = y[0].sin_cos();
        let (sp, cp) = y[1].sin_cos();
        cols(4, &[&[ct * cp, ct * sp, -st, 0.0], &[-st * sp, st * cp, 0.0, 0.0]])
    }
    fn second_partials(&self, y: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let (st, ct) = y[0].sin_cos();
        let (sp, cp) = y[1].sin_cos();
        let tt = [-st * cp, -st * sp, -ct, 0.0];
        let tp = [-ct * sp, ct * cp, 0.0, 0.0];
        let pp = [-st * cp, -st * sp, 0.0, 0.0];
        vec![cols(4, &[&tt, &tp]), cols(4, &[&tp, &pp])]
    }
    fn normal_frame(&self, y: &DVector<f64>) -> Option<DMatrix<f64>> {
        let p = self.position(y);
        Some(DMatrix::from_columns(&[p, col(&[0.0, 0.0, 0.0, 1.0])]))
    }
    fn normal_frame_derivative(&self, y: &DVector<f64>, a: usize) -> Option<DMatrix<f64>> {
        let b = self.jacobian(y).column(a).into_owned();
        Some(DMatrix::from_columns(&[b, DVector::zeros(4)]))
    }
    fn normal_frame_second_derivative(&self, y: &DVector<f64>, a: usize, b: usize) -> Option<DMatrix<f64>> {
        let bb = self.second_partials(y)[a].column(b).into_owned();
        Some(DMatrix::from_columns(&[bb, DVector::zeros(4)]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffgeo::{christoffel_default, ChartPoint};
    use crate::submanifold::{gauss_weingarten, immersion_jet, induced_objects, normal_frame, wb_derivative_normal};
    use approx::assert_abs_diff_eq;

    struct FdOnly<'a>(&'a dyn Immersion);

    impl Immersion for FdOnly<'_> {
        fn name(&self) -> &str {
            self.0.name()
        }
        fn ambient(&self) -> Arc<dyn MetricField> {
            self.0.ambient()
        }
        fn base_dim(&self) -> usize {
            self.0.base_dim()
        }
        fn domain(&self) -> &ChartBounds {
            self.0.domain()
        }
        fn position(&self, y: &DVector<f64>) -> DVector<f64> {
            self.0.position(y)
        }
    }

    fn sample_y(f: &dyn Immersion) -> DVector<f64> {
        let d = f.domain();
        DVector::from_fn(f.base_dim(), |a, _| d.lower[a] + 0.37 * (d.upper[a] - d.lower[a]))
    }

    #[test]
    fn analytic_jets_match_finite_differences() {
        for name in SCENARIO_NAMES {
            let f = scenario_by_name(name).unwrap();
            let y = sample_y(f.as_ref());
            let fd = FdOnly(f.as_ref());
            assert_abs_diff_eq!(f.jacobian(&y), fd.jacobian(&y), epsilon = 1e-8);
            for (a, b) in f.second_partials(&y).iter().zip(fd.second_partials(&y)) {
                assert_abs_diff_eq!(a.clone(), b, epsilon = 1e-6);
            }
            let h = 1e-5;
            for a in 0..f.base_dim() {
                let mut yp = y.clone();
                let mut ym = y.clone();
                yp[a] += h;
                ym[a] -= h;
                let fd_dn = (f.normal_frame(&yp).unwrap() - f.normal_frame(&ym).unwrap()) / (2.0 * h);
                assert_abs_diff_eq!(f.normal_frame_derivative(&y, a).unwrap(), fd_dn, epsilon = 1e-8);
                for b in 0..f.base_dim() {
                    let mut yp = y.clone();
                    let mut ym = y.clone();
                    yp[b] += h;
                    ym[b] -= h;
                    let fd_ddn = (f.normal_frame_derivative(&yp, a).unwrap()
                        - f.normal_frame_derivative(&ym, a).unwrap())
                        / (2.0 * h);
                    assert_abs_diff_eq!(
                        f.normal_frame_second_derivative(&y, a, b).unwrap(),
                        fd_ddn,
                        epsilon = 1e-8
                    );
                }
            }
        }
    }

    #[test]
    fn frames_are_orthonormal_and_normal() {
        for name in SCENARIO_NAMES {
            let f = scenario_by_name(name).unwrap();
            let y = sample_y(f.as_ref());
            let jet = immersion_jet(f.as_ref(), &y).unwrap();
            let g = f.ambient().metric(&jet.x);
            let frame = normal_frame(f.as_ref(), &jet).unwrap();
            let gram = frame.vectors.transpose() * &g * &frame.vectors;
            assert_abs_diff_eq!(gram, DMatrix::identity(frame.codim(), frame.codim()), epsilon = 1e-12);
            assert_abs_diff_eq!((jet.b.transpose() * &g * &frame.vectors).norm(), 0.0, epsilon = 1e-12);
        }
    }

    fn geometry(name: &str, y: &[f64]) -> (crate::submanifold::ImmersionJet, crate::submanifold::NormalFrame, crate::submanifold::SecondFundamentalForm, Vec<DMatrix<f64>>) {
        let f = scenario_by_name(name).unwrap();
        let y = DVector::from_column_slice(y);
        let jet = immersion_jet(f.as_ref(), &y).unwrap();
        let ambient = f.ambient();
        let g = ambient.metric(&jet.x);
        let gamma = christoffel_default(ambient.as_ref(), &ChartPoint(jet.x.clone())).unwrap();
        let frame = normal_frame(f.as_ref(), &jet).unwrap();
        let sff = gauss_weingarten(&jet, &frame, &g, &gamma).unwrap();
        let m = wb_derivative_normal(&jet, &frame, &sff, &gamma, name).unwrap();
        (jet, frame, sff, m)
    }

    #[test]
    fn circle_second_fundamental_form() {
        let t = 0.9f64;
        let (_, _, sff, m) = geometry("circle", &[t]);
        assert_abs_diff_eq!(sff.h[0][(0, 0)], -1.0, epsilon = 1e-14);
        // ∇̄_t n = s
        assert_abs_diff_eq!(m[0].column(0).into_owned(), col(&[-t.sin(), t.cos()]), epsilon = 1e-14);
    }

    #[test]
    fn helix_matches_frenet_serret() {
        let helix = Helix::new(1.0, 0.5);
        let (k, tau) = (helix.curvature(), helix.torsion());
        let s = 1.3;
        let (_, _, sff, m) = geometry("helix", &[s]);
        assert_abs_diff_eq!(sff.h[0][(0, 0)], k, epsilon = 1e-14);
        assert_abs_diff_eq!(sff.h[1][(0, 0)], 0.0, epsilon = 1e-14);
        let conn = sff.normal_connection.as_ref().unwrap();
        // Γ_{t,normal}^{binormal} = τ, skew
        assert_abs_diff_eq!(conn[0][(1, 0)], tau, epsilon = 1e-14);
        assert_abs_diff_eq!(conn[0][(0, 1)], -tau, epsilon = 1e-14);
        assert_abs_diff_eq!(m[0].column(0).into_owned(), helix.tangent(s) * -k, epsilon = 1e-14);
        assert_abs_diff_eq!(m[0].column(1).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn linear_and_great_circle_are_totally_geodesic() {
        for (name, y) in [("linear", 0.7), ("great-circle-s3", 0.8)] {
            let (_, _, sff, m) = geometry(name, &[y]);
            assert!(sff.h.iter().all(|h| h.amax() < 1e-9), "{name}");
            assert!(m[0].amax() < 1e-9, "{name}");
            assert!(sff.normal_connection.unwrap()[0].amax() < 1e-9, "{name}");
        }
    }

    #[test]
    fn sphere_induced_metric_and_weingarten() {
        let theta = 1.1f64;
        let f = scenario_by_name("sphere-r4").unwrap();
        let jet = immersion_jet(f.as_ref(), &col(&[theta, 0.4])).unwrap();
        let induced = induced_objects(&jet, f.ambient().as_ref()).unwrap();
        assert_abs_diff_eq!(induced.metric[(0, 0)], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(induced.metric[(1, 1)], theta.sin().powi(2), epsilon = 1e-14);
        assert_abs_diff_eq!(induced.christoffel.get(0, 1, 1), -theta.sin() * theta.cos(), epsilon = 1e-12);
        let (jet, _, sff, m) = geometry("sphere-r4", &[theta, 0.4]);
        // g(A_η X, Y) = g(η, H(X,Y)) and M_{ax} = −A_{η_x} δ_a
        for z in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let lhs = m[a].column(z).dot(&jet.b.column(b));
                    assert_abs_diff_eq!(lhs, -sff.h[z][(a, b)], epsilon = 1e-12);
                }
            }
        }
        assert_abs_diff_eq!(sff.h[0][(0, 0)], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn unknown_scenario() {
        assert!(matches!(scenario_by_name("torus"), Err(GeometryError::UnknownScenario(_))));
    }
}
