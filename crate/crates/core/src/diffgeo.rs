//! Single-chart Riemannian geometry: metrics, Levi-Civita connection
//! coefficients and the Riemann tensor, with finite differences wherever an
//! analytic derivative is not supplied.
//!
//! Curvature follows `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z` and the
//! four-argument form `R(X,Y,Z,W) = g(R(X,Y)Z, W)`. With this convention the
//! unit sphere has `R(X,Y,Z,W) = g(Y,Z)g(X,W) − g(X,Z)g(Y,W)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeometryError, Result};

/// Relative step for first derivatives: `h = 1e-5 · max(1, |x|)`.
pub const FIRST_DERIVATIVE_STEP: f64 = 1e-5;
/// Step for derivatives of quantities that are themselves finite differences.
pub const NESTED_DERIVATIVE_STEP: f64 = 1e-4;
/// Relative disagreement allowed between the `h` and `2h` derivative estimates.
pub const DERIVATIVE_NOISE_TOLERANCE: f64 = 1e-5;
/// `|det g| < DEGENERACY_TOLERANCE · scale^n` is treated as singular.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Axis-aligned coordinate box of a chart. Infinite bounds are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ChartBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len(), "bounds must have equal length");
        Self { lower, upper }
    }

    pub fn unbounded(dim: usize) -> Self {
        Self::new(vec![f64::NEG_INFINITY; dim], vec![f64::INFINITY; dim])
    }

    pub fn cube(dim: usize, half_width: f64) -> Self {
        Self::new(vec![-half_width; dim], vec![half_width; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn check(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        for (index, &value) in x.iter().enumerate() {
            if !value.is_finite() {
                return Err(GeometryError::NonFinite("chart coordinates"));
            }
            let (lower, upper) = (self.lower[index], self.upper[index]);
            if value < lower || value > upper {
                return Err(GeometryError::OutOfChart {
                    index,
                    value,
                    lower,
                    upper,
                });
            }
        }
        Ok(())
    }

    /// Maps a point of the unit cube into the box shrunk by `margin` (a
    /// fraction of each side) on both ends.
    pub fn interior_point(&self, unit: &[f64], margin: f64) -> DVector<f64> {
        DVector::from_iterator(
            self.dim(),
            (0..self.dim()).map(|i| {
                let (lo, hi) = (self.lower[i], self.upper[i]);
                let width = hi - lo;
                lo + width * (margin + (1.0 - 2.0 * margin) * unit[i])
            }),
        )
    }
}

/// Coordinates of a point in a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint(pub DVector<f64>);

impl ChartPoint {
    pub fn new(coords: &[f64]) -> Self {
        Self(DVector::from_column_slice(coords))
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }
}

impl From<DVector<f64>> for ChartPoint {
    fn from(v: DVector<f64>) -> Self {
        Self(v)
    }
}

/// A (pseudo-)Riemannian metric on a single chart.
pub trait MetricField: Send + Sync {
    fn dim(&self) -> usize;

    fn bounds(&self) -> &ChartBounds;

    /// Raw metric matrix `g_rs(x)`; no bounds checking.
    fn metric(&self, x: &DVector<f64>) -> DMatrix<f64>;

    /// Analytic `∂_k g_rs(x)`, if the field knows it.
    fn metric_derivative(&self, _x: &DVector<f64>, _k: usize) -> Option<DMatrix<f64>> {
        None
    }

    /// Closed-form Christoffel symbols, used only as an independent oracle.
    fn analytic_christoffel(&self, _x: &DVector<f64>) -> Option<Christoffel> {
        None
    }

    /// True when evaluating the metric already involves finite differences,
    /// so derivatives of it must use the coarser nested step.
    fn nested_differences(&self) -> bool {
        false
    }
}

/// Connection coefficients `Γ^r_{st}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    n: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, s: usize, t: usize) -> f64 {
        self.data[(r * self.n + s) * self.n + t]
    }

    #[inline]
    pub fn set(&mut self, r: usize, s: usize, t: usize, value: f64) {
        self.data[(r * self.n + s) * self.n + t] = value;
    }

    /// `Γ^r_{st} X^s Y^t`.
    pub fn contract(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.n;
        DVector::from_fn(n, |r, _| {
            let mut acc = 0.0;
            for s in 0..n {
                if x[s] == 0.0 {
                    continue;
                }
                for t in 0..n {
                    acc += self.get(r, s, t) * x[s] * y[t];
                }
            }
            acc
        })
    }

    /// The matrix `C^r_t = u^s Γ^r_{st}`.
    pub fn contract_first(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |r, t| (0..n).map(|s| u[s] * self.get(r, s, t)).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Fully covariant Riemann tensor `R_{rstw} = g(R(e_r,e_s)e_t, e_w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    n: usize,
    data: Vec<f64>,
}

impl CurvatureTensor {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n.pow(4)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, s: usize, t: usize, w: usize) -> f64 {
        let n = self.n;
        self.data[((r * n + s) * n + t) * n + w]
    }

    #[inline]
    fn set(&mut self, r: usize, s: usize, t: usize, w: usize, value: f64) {
        let n = self.n;
        self.data[((r * n + s) * n + t) * n + w] = value;
    }

    /// `R(X,Y,Z,W)`.
    pub fn eval(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
        w: &DVector<f64>,
    ) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for r in 0..n {
            for s in 0..n {
                let xy = x[r] * y[s];
                if xy == 0.0 {
                    continue;
                }
                for t in 0..n {
                    for q in 0..n {
                        acc += self.get(r, s, t, q) * xy * z[t] * w[q];
                    }
                }
            }
        }
        acc
    }

    /// Sectional curvature of the plane spanned by coordinate directions `i`, `j`.
    pub fn sectional(&self, g: &DMatrix<f64>, i: usize, j: usize) -> f64 {
        let area = g[(i, i)] * g[(j, j)] - g[(i, j)] * g[(i, j)];
        self.get(i, j, j, i) / area
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }
}

/// Symmetrized metric matrix at `x` after bounds and finiteness checks.
pub fn metric_at(g: &dyn MetricField, x: &ChartPoint) -> Result<DMatrix<f64>> {
    g.bounds().check(x.coords())?;
    let m = g.metric(x.coords());
    if m.nrows() != g.dim() || m.ncols() != g.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: g.dim(),
            found: m.nrows(),
        });
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(GeometryError::NonFinite("metric"));
    }
    Ok(symmetrize(&m))
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Inverse of a metric matrix, rejecting near-singular input.
pub fn invert_metric(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = g.nrows();
    let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let det = g.clone().lu().determinant();
    let threshold = DEGENERACY_TOLERANCE * scale.powi(n as i32);
    if !det.is_finite() || det.abs() < threshold {
        return Err(GeometryError::SingularMetric { det, threshold });
    }
    g.clone()
        .try_inverse()
        .ok_or(GeometryError::SingularMetric { det, threshold })
}

fn default_step(base: f64, coord: f64) -> f64 {
    base * coord.abs().max(1.0)
}

/// Central differences of a matrix-valued function along coordinate `k`,
/// returned at step `h` and at `2h`.
fn central_pair<F>(f: &F, x: &DVector<f64>, k: usize, h: f64) -> (DMatrix<f64>, DMatrix<f64>)
where
    F: Fn(&DVector<f64>) -> DMatrix<f64>,
{
    let shifted = |delta: f64| {
        let mut y = x.clone();
        y[k] += delta;
        f(&y)
    };
    let d1 = (shifted(h) - shifted(-h)) / (2.0 * h);
    let d2 = (shifted(2.0 * h) - shifted(-2.0 * h)) / (4.0 * h);
    (d1, d2)
}

/// Coordinate derivative `∂_k f(x)` by central differences with the
/// step/double-step noise detector. `base_step` is the relative step.
pub fn checked_partial<F>(f: &F, x: &DVector<f64>, k: usize, base_step: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&DVector<f64>) -> DMatrix<f64>,
{
    if !(base_step > 0.0) || !base_step.is_finite() {
        return Err(GeometryError::InvalidStep(base_step));
    }
    let h = default_step(base_step, x[k]);
    let (d1, d2) = central_pair(f, x, k, h);
    let scale = d1.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let discrepancy = (&d1 - &d2).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tolerance = DERIVATIVE_NOISE_TOLERANCE * scale;
    if !discrepancy.is_finite() || discrepancy > tolerance {
        return Err(GeometryError::DerivativeNoise {
            discrepancy,
            tolerance,
        });
    }
    Ok(d1)
}

/// All coordinate derivatives `∂_k g` at `x`, analytic when available.
fn metric_partials(g: &dyn MetricField, x: &DVector<f64>, step: f64) -> Result<Vec<DMatrix<f64>>> {
    let eval = |y: &DVector<f64>| symmetrize(&g.metric(y));
    (0..g.dim())
        .map(|k| match g.metric_derivative(x, k) {
            Some(d) => Ok(symmetrize(&d)),
            None => checked_partial(&eval, x, k, step),
        })
        .collect()
}

fn christoffel_from_partials(
    ginv: &DMatrix<f64>,
    dg: &[DMatrix<f64>],
) -> Christoffel {
    let n = ginv.nrows();
    let mut gamma = Christoffel::zeros(n);
    for s in 0..n {
        for t in s..n {
            // lowered: Γ_{w,st} = ½(∂_s g_wt + ∂_t g_ws − ∂_w g_st)
            let lowered: Vec<f64> = (0..n)
                .map(|w| 0.5 * (dg[s][(w, t)] + dg[t][(w, s)] - dg[w][(s, t)]))
                .collect();
            for r in 0..n {
                let value: f64 = (0..n).map(|w| ginv[(r, w)] * lowered[w]).sum();
                gamma.set(r, s, t, value);
                gamma.set(r, t, s, value);
            }
        }
    }
    gamma
}

/// Levi-Civita coefficients at `x`. Uses the field's analytic `∂g` when it
/// has one, otherwise central differences with relative step `step`.
pub fn christoffel_at(g: &dyn MetricField, x: &ChartPoint, step: f64) -> Result<Christoffel> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(GeometryError::InvalidStep(step));
    }
    let gm = metric_at(g, x)?;
    let ginv = invert_metric(&gm)?;
    let dg = metric_partials(g, x.coords(), step)?;
    Ok(christoffel_from_partials(&ginv, &dg))
}

/// Christoffel symbols without bounds checks; used at stencil points.
pub(crate) fn christoffel_raw(g: &dyn MetricField, x: &DVector<f64>, step: f64) -> Result<Christoffel> {
    let gm = symmetrize(&g.metric(x));
    let ginv = invert_metric(&gm)?;
    let dg = metric_partials(g, x, step)?;
    Ok(christoffel_from_partials(&ginv, &dg))
}

fn first_step(g: &dyn MetricField) -> f64 {
    if g.nested_differences() {
        NESTED_DERIVATIVE_STEP
    } else {
        FIRST_DERIVATIVE_STEP
    }
}

/// Christoffel symbols with the step appropriate for `g`.
pub fn christoffel_default(g: &dyn MetricField, x: &ChartPoint) -> Result<Christoffel> {
    christoffel_at(g, x, first_step(g))
}

/// Riemann tensor at `x`, lowered with `g`. Derivatives of the Christoffel
/// symbols use nested central differences with step 1e-4.
pub fn riemann_at(g: &dyn MetricField, x: &ChartPoint) -> Result<CurvatureTensor> {
    let n = g.dim();
    let gm = metric_at(g, x)?;
    let inner = first_step(g);
    let gamma = christoffel_raw(g, x.coords(), inner)?;
    // ∂_k Γ^r_{st} stored as n matrices per k: column-stacked (r, s*n+t)
    let flat = |y: &DVector<f64>| -> DMatrix<f64> {
        match christoffel_raw(g, y, inner) {
            Ok(c) => DMatrix::from_fn(n, n * n, |r, st| c.get(r, st / n, st % n)),
            Err(_) => DMatrix::from_element(n, n * n, f64::NAN),
        }
    };
    let mut dgamma = Vec::with_capacity(n);
    for k in 0..n {
        dgamma.push(checked_partial(&flat, x.coords(), k, NESTED_DERIVATIVE_STEP)?);
    }
    let dg = |k: usize, r: usize, s: usize, t: usize| dgamma[k][(r, s * n + t)];

    // R^r_{stw} = ∂_s Γ^r_{tw} − ∂_t Γ^r_{sw} + Γ^r_{sp}Γ^p_{tw} − Γ^r_{tp}Γ^p_{sw}
    // is the r-component of R(∂_s,∂_t)∂_w.
    let mut upper = vec![0.0; n.pow(4)];
    let idx = |r: usize, s: usize, t: usize, w: usize| ((r * n + s) * n + t) * n + w;
    for r in 0..n {
        for s in 0..n {
            for t in 0..n {
                for w in 0..n {
                    let mut v = dg(s, r, t, w) - dg(t, r, s, w);
                    for p in 0..n {
                        v += gamma.get(r, s, p) * gamma.get(p, t, w)
                            - gamma.get(r, t, p) * gamma.get(p, s, w);
                    }
                    upper[idx(r, s, t, w)] = v;
                }
            }
        }
    }
    let mut tensor = CurvatureTensor::zeros(n);
    for s in 0..n {
        for t in 0..n {
            for w in 0..n {
                for q in 0..n {
                    let v: f64 = (0..n).map(|r| gm[(q, r)] * upper[idx(r, s, t, w)]).sum();
                    tensor.set(s, t, w, q, v);
                }
            }
        }
    }
    Ok(tensor)
}

/// `(∇_dir X)(x) = dir^s ∂_s X + Γ(dir, X)`, the directional derivative taken
/// by central differences along `dir`.
pub fn covariant_derivative_field<F>(
    g: &dyn MetricField,
    field: F,
    direction: &DVector<f64>,
    x: &ChartPoint,
) -> Result<DVector<f64>>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let gamma = christoffel_default(g, x)?;
    let p = x.coords();
    let h = default_step(FIRST_DERIVATIVE_STEP, p.amax());
    let along = |s: f64| field(&(p + direction * s));
    let derivative = (along(h) - along(-h)) / (2.0 * h);
    let value = field(p);
    let out = derivative + gamma.contract(direction, &value);
    if out.iter().any(|v| !v.is_finite()) {
        return Err(GeometryError::NonFinite("covariant derivative"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::{Euclidean, RoundSphere2, StereographicSphere};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    /// The round S² chart without its analytic derivative, forcing the
    /// finite-difference path.
    struct NumericSphere(RoundSphere2);

    impl MetricField for NumericSphere {
        fn dim(&self) -> usize {
            2
        }
        fn bounds(&self) -> &ChartBounds {
            self.0.bounds()
        }
        fn metric(&self, x: &DVector<f64>) -> DMatrix<f64> {
            self.0.metric(x)
        }
    }

    #[test]
    fn flat_metric_is_identity() {
        let e = Euclidean::new(2);
        let g = metric_at(&e, &ChartPoint::new(&[0.3, -1.2])).unwrap();
        assert_eq!(g, DMatrix::identity(2, 2));
    }

    #[test]
    fn round_sphere_metric_at_equator() {
        let s = RoundSphere2::new();
        let g = metric_at(&s, &ChartPoint::new(&[FRAC_PI_2, 0.0])).unwrap();
        assert_abs_diff_eq!(g, DMatrix::identity(2, 2), epsilon = 1e-15);
    }

    #[test]
    fn stereographic_metric_at_origin() {
        let s = StereographicSphere::new(2);
        let g = metric_at(&s, &ChartPoint::new(&[0.0, 0.0])).unwrap();
        assert_eq!(g, DMatrix::identity(2, 2) * 4.0);
    }

    #[test]
    fn out_of_chart_is_rejected() {
        let s = RoundSphere2::new();
        let err = metric_at(&s, &ChartPoint::new(&[-0.5, 0.0])).unwrap_err();
        assert!(matches!(err, GeometryError::OutOfChart { index: 0, .. }));
    }

    #[test]
    fn flat_christoffels_vanish() {
        let e = Euclidean::new(3);
        let gamma = christoffel_at(&e, &ChartPoint::new(&[1.0, 2.0, 3.0]), 1e-5).unwrap();
        assert_eq!(gamma.max_abs(), 0.0);
    }

    #[test]
    fn sphere_christoffels_match_closed_form_on_fd_path() {
        let s = NumericSphere(RoundSphere2::new());
        let gamma = christoffel_at(&s, &ChartPoint::new(&[FRAC_PI_4, 0.3]), 1e-5).unwrap();
        // oracle: Γ^θ_{φφ} = −sinθcosθ, Γ^φ_{θφ} = cotθ
        assert_abs_diff_eq!(gamma.get(0, 1, 1), -0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(gamma.get(1, 0, 1), 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(gamma.get(1, 1, 0), 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(gamma.get(0, 0, 0), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn tiny_step_trips_noise_detector() {
        let s = NumericSphere(RoundSphere2::new());
        let err = christoffel_at(&s, &ChartPoint::new(&[1.0, 0.3]), 1e-14).unwrap_err();
        assert!(matches!(err, GeometryError::DerivativeNoise { .. }));
    }

    #[test]
    fn non_positive_step_is_rejected() {
        let s = RoundSphere2::new();
        let err = christoffel_at(&s, &ChartPoint::new(&[1.0, 0.3]), 0.0).unwrap_err();
        assert_eq!(err, GeometryError::InvalidStep(0.0));
    }

    #[test]
    fn singular_metric_is_rejected() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(invert_metric(&g), Err(GeometryError::SingularMetric { .. })));
    }

    #[test]
    fn flat_curvature_vanishes() {
        let e = Euclidean::new(3);
        let r = riemann_at(&e, &ChartPoint::new(&[0.1, 0.2, 0.3])).unwrap();
        assert_eq!(r.max_abs(), 0.0);
    }

    #[test]
    fn unit_sphere_sectional_curvature_is_one() {
        let s = RoundSphere2::new();
        let x = ChartPoint::new(&[1.1, 0.4]);
        let r = riemann_at(&s, &x).unwrap();
        let g = metric_at(&s, &x).unwrap();
        assert_abs_diff_eq!(r.sectional(&g, 0, 1), 1.0, epsilon = 1e-4);
    }

    #[test]
    fn stereographic_three_sphere_has_unit_curvature() {
        let s = StereographicSphere::new(3);
        let x = ChartPoint::new(&[0.2, -0.4, 0.5]);
        let r = riemann_at(&s, &x).unwrap();
        let g = metric_at(&s, &x).unwrap();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert_abs_diff_eq!(r.sectional(&g, i, j), 1.0, epsilon = 1e-4);
        }
    }

    #[test]
    fn covariant_derivative_examples() {
        let e = Euclidean::new(2);
        let x = ChartPoint::new(&[0.4, 0.7]);
        let e1 = DVector::from_column_slice(&[1.0, 0.0]);
        let constant =
            covariant_derivative_field(&e, |_| DVector::from_column_slice(&[2.0, -1.0]), &e1, &x)
                .unwrap();
        assert_abs_diff_eq!(constant.norm(), 0.0, epsilon = 1e-12);
        let position = covariant_derivative_field(&e, |p| p.clone(), &e1, &x).unwrap();
        assert_abs_diff_eq!(position, e1, epsilon = 1e-9);
    }

    #[test]
    fn circle_tangent_derivative_is_inward_normal() {
        // s(p) = (−p₂, p₁)/|p| restricted to the unit circle, derivative along s
        let e = Euclidean::new(2);
        let t = 0.8f64;
        let x = ChartPoint::new(&[t.cos(), t.sin()]);
        let s = DVector::from_column_slice(&[-t.sin(), t.cos()]);
        let field = |p: &DVector<f64>| {
            let r = p.norm();
            DVector::from_column_slice(&[-p[1] / r, p[0] / r])
        };
        let d = covariant_derivative_field(&e, field, &s, &x).unwrap();
        assert_abs_diff_eq!(d, DVector::from_column_slice(&[-t.cos(), -t.sin()]), epsilon = 1e-8);
    }
}
