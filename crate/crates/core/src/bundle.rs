//! The tangent bundle `TN` as a `2n`-dimensional chart `(x^r, u^r)`.
//!
//! Horizontal and vertical lifts, the connection map `K`, the coordinate
//! matrix of a g-natural metric, and its Levi-Civita connection computed
//! numerically from that matrix.

use nalgebra::{DMatrix, DVector};

use crate::diffgeo::{
    christoffel_at, christoffel_raw, symmetrize, ChartBounds, ChartPoint, Christoffel,
    MetricField, FIRST_DERIVATIVE_STEP, NESTED_DERIVATIVE_STEP,
};
use crate::error::{GeometryError, Result};
use crate::gnatural::GNaturalMetric;

/// A point `(x, u)` of `TN`.
#[derive(Debug, Clone, PartialEq)]
pub struct BundlePoint {
    pub base: DVector<f64>,
    pub fiber: DVector<f64>,
}

impl BundlePoint {
    pub fn new(base: DVector<f64>, fiber: DVector<f64>) -> Self {
        assert_eq!(base.len(), fiber.len(), "fiber must live in T_xN");
        Self { base, fiber }
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// `(x¹..xⁿ, u¹..uⁿ)`.
    pub fn coords(&self) -> DVector<f64> {
        let n = self.dim();
        DVector::from_fn(2 * n, |i, _| if i < n { self.base[i] } else { self.fiber[i - n] })
    }

    pub fn from_coords(coords: &DVector<f64>) -> Self {
        let n = coords.len() / 2;
        Self {
            base: coords.rows(0, n).into_owned(),
            fiber: coords.rows(n, n).into_owned(),
        }
    }
}

/// Components `(Z^r, Z̄^r)` in the coordinate basis `(∂/∂x^r, ∂/∂u^r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleVector(pub DVector<f64>);

impl BundleVector {
    pub fn from_parts(horizontal: &DVector<f64>, vertical: &DVector<f64>) -> Self {
        let n = horizontal.len();
        Self(DVector::from_fn(2 * n, |i, _| {
            if i < n {
                horizontal[i]
            } else {
                vertical[i - n]
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.0.len() / 2
    }

    /// The `∂/∂x` components.
    pub fn x_part(&self) -> DVector<f64> {
        self.0.rows(0, self.dim()).into_owned()
    }

    /// The `∂/∂u` components.
    pub fn u_part(&self) -> DVector<f64> {
        self.0.rows(self.dim(), self.dim()).into_owned()
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(GeometryError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `X^v = X^r ∂/∂u^r`.
pub fn vertical_lift(x: &DVector<f64>, p: &BundlePoint) -> Result<BundleVector> {
    check_dim(p.dim(), x.len())?;
    Ok(BundleVector::from_parts(&DVector::zeros(p.dim()), x))
}

/// `X^h = X^r ∂/∂x^r − u^s X^t Γ^r_{st} ∂/∂u^r`.
pub fn horizontal_lift(x: &DVector<f64>, p: &BundlePoint, gamma: &Christoffel) -> Result<BundleVector> {
    check_dim(p.dim(), x.len())?;
    check_dim(p.dim(), gamma.dim())?;
    let correction = gamma.contract(&p.fiber, x);
    Ok(BundleVector::from_parts(x, &(-correction)))
}

/// `X^h + Y^v`.
pub fn lift(h: &DVector<f64>, v: &DVector<f64>, p: &BundlePoint, gamma: &Christoffel) -> Result<BundleVector> {
    let mut z = horizontal_lift(h, p, gamma)?;
    z.0 += vertical_lift(v, p)?.0;
    Ok(z)
}

/// `(dπ(Z), K(Z))` with `K(Z) = (Z̄^r + u^s Z^t Γ^r_{st}) ∂_r`.
pub fn split_tangent(z: &BundleVector, p: &BundlePoint, gamma: &Christoffel) -> (DVector<f64>, DVector<f64>) {
    let horizontal = z.x_part();
    let connector = z.u_part() + gamma.contract(&p.fiber, &horizontal);
    (horizontal, connector)
}

/// Base Christoffel symbols at a bundle point, with the step suited to the base.
pub fn base_christoffel(metric: &GNaturalMetric, x: &DVector<f64>) -> Result<Christoffel> {
    christoffel_raw(metric.base.as_ref(), x, base_step(metric.base.as_ref(), x))
}

fn base_step(base: &dyn MetricField, x: &DVector<f64>) -> f64 {
    if base.metric_derivative(x, 0).is_some() {
        FIRST_DERIVATIVE_STEP
    } else if base.nested_differences() {
        NESTED_DERIVATIVE_STEP
    } else {
        FIRST_DERIVATIVE_STEP
    }
}

/// Matrix of `G` in the coordinate basis `(∂/∂x, ∂/∂u)` at `p`.
pub fn bundle_metric_matrix(metric: &GNaturalMetric, p: &BundlePoint) -> Result<DMatrix<f64>> {
    let gamma = base_christoffel(metric, &p.base)?;
    bundle_metric_with(metric, p, &gamma)
}

pub(crate) fn bundle_metric_with(
    metric: &GNaturalMetric,
    p: &BundlePoint,
    gamma: &Christoffel,
) -> Result<DMatrix<f64>> {
    let n = p.dim();
    let g = symmetrize(&metric.base.metric(&p.base));
    let blocks = metric.lift_blocks(&g, &p.fiber)?;
    let mut lifted = DMatrix::zeros(2 * n, 2 * n);
    lifted.view_mut((0, 0), (n, n)).copy_from(&blocks.hh);
    lifted.view_mut((0, n), (n, n)).copy_from(&blocks.hv);
    lifted.view_mut((n, 0), (n, n)).copy_from(&blocks.hv.transpose());
    lifted.view_mut((n, n), (n, n)).copy_from(&blocks.vv);
    // ∂/∂x^r = (∂_r)^h + u^s Γ^w_{sr} (∂_w)^v, ∂/∂u^r = (∂_r)^v
    let mut jacobian = DMatrix::identity(2 * n, 2 * n);
    jacobian
        .view_mut((n, 0), (n, n))
        .copy_from(&gamma.contract_first(&p.fiber));
    Ok(symmetrize(&(jacobian.transpose() * lifted * jacobian)))
}

/// `G` viewed as a metric field on the `2n`-dimensional chart of `TN`.
pub struct BundleMetricField<'a> {
    metric: &'a GNaturalMetric,
    bounds: ChartBounds,
}

impl<'a> BundleMetricField<'a> {
    pub fn new(metric: &'a GNaturalMetric) -> Self {
        let n = metric.dim();
        let base = metric.base.bounds();
        let mut lower = base.lower.clone();
        let mut upper = base.upper.clone();
        lower.extend(std::iter::repeat_n(f64::NEG_INFINITY, n));
        upper.extend(std::iter::repeat_n(f64::INFINITY, n));
        Self {
            metric,
            bounds: ChartBounds::new(lower, upper),
        }
    }
}

impl MetricField for BundleMetricField<'_> {
    fn dim(&self) -> usize {
        2 * self.metric.dim()
    }

    fn bounds(&self) -> &ChartBounds {
        &self.bounds
    }

    fn metric(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let p = BundlePoint::from_coords(x);
        bundle_metric_matrix(self.metric, &p)
            .unwrap_or_else(|_| DMatrix::from_element(self.dim(), self.dim(), f64::NAN))
    }

    fn nested_differences(&self) -> bool {
        // the lifts inside G use Γ of the base, itself a difference quotient
        // unless the base supplies ∂g
        let probe = DVector::zeros(self.metric.dim());
        self.metric.base.metric_derivative(&probe, 0).is_none()
    }
}

/// Christoffel symbols `Γ̃` of `(TN, G)` at `p`.
pub fn bundle_christoffel(metric: &GNaturalMetric, p: &BundlePoint) -> Result<Christoffel> {
    let field = BundleMetricField::new(metric);
    let step = if field.nested_differences() {
        NESTED_DERIVATIVE_STEP
    } else {
        FIRST_DERIVATIVE_STEP
    };
    christoffel_at(&field, &ChartPoint(p.coords()), step)
}

/// `∇̃_{Z₁}Z₂` given the value of `Z₂` at `p` and its derivative along a curve
/// through `p` with velocity `Z₁`.
pub fn connection_from_derivative(
    gamma: &Christoffel,
    z1: &BundleVector,
    z2: &BundleVector,
    dz2: &DVector<f64>,
) -> BundleVector {
    BundleVector(dz2 + gamma.contract(&z1.0, &z2.0))
}

/// `(∇̃_{Z₁}Z₂)(p)` for a vector field `Z₂` on the `TN` chart. The directional
/// derivative is a central difference along the chart line `p + s Z₁`.
pub fn ambient_connection<F>(
    metric: &GNaturalMetric,
    p: &BundlePoint,
    z1: &BundleVector,
    z2: F,
) -> Result<BundleVector>
where
    F: Fn(&BundlePoint) -> BundleVector,
{
    let gamma = bundle_christoffel(metric, p)?;
    let coords = p.coords();
    let h = FIRST_DERIVATIVE_STEP * coords.amax().max(1.0);
    let at = |s: f64| z2(&BundlePoint::from_coords(&(&coords + &z1.0 * s))).0;
    let derivative = (at(h) - at(-h)) / (2.0 * h);
    let value = z2(p);
    let out = connection_from_derivative(&gamma, z1, &value, &derivative);
    if out.0.iter().any(|v| !v.is_finite()) {
        return Err(GeometryError::NonFinite("ambient connection"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gnatural::{gnat_metric_eval, preset_family, LiftPair, WeightFamily};
    use crate::manifolds::{Euclidean, RoundSphere2};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;
    use std::sync::Arc;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    fn sphere_metric(name: &str) -> GNaturalMetric {
        GNaturalMetric::new(Arc::new(RoundSphere2::new()), preset_family(name).unwrap(), 20.0).unwrap()
    }

    #[test]
    fn lift_examples() {
        let p = BundlePoint::new(v(&[0.0, 0.0]), v(&[0.3, 0.4]));
        assert_eq!(vertical_lift(&v(&[1.0, 0.0]), &p).unwrap().0, v(&[0.0, 0.0, 1.0, 0.0]));
        assert_eq!(vertical_lift(&v(&[0.0, 0.0]), &p).unwrap().0, DVector::zeros(4));
        assert!(matches!(
            vertical_lift(&v(&[1.0]), &p),
            Err(GeometryError::DimensionMismatch { .. })
        ));
        let flat = Christoffel::zeros(2);
        assert_eq!(
            horizontal_lift(&v(&[1.0, 0.0]), &p, &flat).unwrap().0,
            v(&[1.0, 0.0, 0.0, 0.0])
        );
        let t = 0.7f64;
        let circle = BundlePoint::new(v(&[t.cos(), t.sin()]), v(&[t.cos(), t.sin()]) * 1.5);
        let s = v(&[-t.sin(), t.cos()]);
        let n = v(&[t.cos(), t.sin()]);
        assert_eq!(horizontal_lift(&s, &circle, &flat).unwrap().0, v(&[-t.sin(), t.cos(), 0.0, 0.0]));
        assert_eq!(vertical_lift(&n, &circle).unwrap().0, v(&[0.0, 0.0, t.cos(), t.sin()]));
    }

    #[test]
    fn sphere_horizontal_lift_uses_christoffels() {
        let sphere = RoundSphere2::new();
        let x = v(&[FRAC_PI_4, 0.2]);
        let gamma = sphere.analytic_christoffel(&x).unwrap();
        let e_phi = v(&[0.0, 1.0]);
        let p = BundlePoint::new(x, e_phi.clone());
        let z = horizontal_lift(&e_phi, &p, &gamma).unwrap();
        // −Γ^θ_{φφ} = +½ in the θ slot, −Γ^φ_{φφ} = 0 in the φ slot
        assert_abs_diff_eq!(z.0, v(&[0.0, 1.0, 0.5, 0.0]), epsilon = 1e-15);
    }

    #[test]
    fn split_inverts_lifts() {
        let sphere = RoundSphere2::new();
        let x = v(&[1.0, -0.4]);
        let gamma = sphere.analytic_christoffel(&x).unwrap();
        let p = BundlePoint::new(x, v(&[0.3, -1.1]));
        let (a, b) = (v(&[0.7, 2.0]), v(&[-1.3, 0.25]));
        let (h, k) = split_tangent(&vertical_lift(&b, &p).unwrap(), &p, &gamma);
        assert_eq!((h, k), (DVector::zeros(2), b.clone()));
        let (h, k) = split_tangent(&horizontal_lift(&a, &p, &gamma).unwrap(), &p, &gamma);
        assert_abs_diff_eq!(h, a.clone(), epsilon = 1e-15);
        assert_abs_diff_eq!(k, DVector::zeros(2), epsilon = 1e-14);
        let (h, k) = split_tangent(&lift(&a, &b, &p, &gamma).unwrap(), &p, &gamma);
        assert_abs_diff_eq!(h, a, epsilon = 1e-10);
        assert_abs_diff_eq!(k, b, epsilon = 1e-10);
    }

    #[test]
    fn flat_sasaki_matrix_is_identity() {
        let metric =
            GNaturalMetric::new(Arc::new(Euclidean::new(3)), preset_family("sasaki").unwrap(), 10.0)
                .unwrap();
        let p = BundlePoint::new(v(&[0.1, 0.2, 0.3]), v(&[1.0, -2.0, 0.5]));
        assert_eq!(bundle_metric_matrix(&metric, &p).unwrap(), DMatrix::identity(6, 6));
    }

    #[test]
    fn flat_constant_family_has_block_form() {
        let family = WeightFamily::constants("c", [2.0, 0.5, 1.0], [0.0; 3]);
        let metric = GNaturalMetric::new(Arc::new(Euclidean::new(2)), family, 10.0).unwrap();
        let p = BundlePoint::new(v(&[0.1, 0.2]), v(&[-0.4, 0.9]));
        let m = bundle_metric_matrix(&metric, &p).unwrap();
        let i = DMatrix::<f64>::identity(2, 2);
        let mut expected = DMatrix::zeros(4, 4);
        expected.view_mut((0, 0), (2, 2)).copy_from(&(&i * 3.0));
        expected.view_mut((0, 2), (2, 2)).copy_from(&(&i * 0.5));
        expected.view_mut((2, 0), (2, 2)).copy_from(&(&i * 0.5));
        expected.view_mut((2, 2), (2, 2)).copy_from(&(&i * 2.0));
        assert_eq!(m, expected);
    }

    #[test]
    fn sphere_matrix_reproduces_lift_pairings() {
        for family in ["sasaki", "cheeger-gromoll"] {
            let metric = sphere_metric(family);
            let x = v(&[FRAC_PI_4, 0.3]);
            let p = BundlePoint::new(x.clone(), v(&[1.0, 0.0]));
            let gamma = RoundSphere2::new().analytic_christoffel(&x).unwrap();
            let m = bundle_metric_matrix(&metric, &p).unwrap();
            let pairs = [
                (v(&[1.0, 0.5]), v(&[0.0, -1.0])),
                (v(&[-0.3, 0.0]), v(&[2.0, 0.7])),
                (v(&[0.0, 1.0]), v(&[0.0, 0.0])),
            ];
            for (h1, v1) in &pairs {
                for (h2, v2) in &pairs {
                    let z1 = lift(h1, v1, &p, &gamma).unwrap();
                    let z2 = lift(h2, v2, &p, &gamma).unwrap();
                    let direct = gnat_metric_eval(
                        &metric,
                        &x,
                        &p.fiber,
                        &LiftPair::new(h1.clone(), v1.clone()),
                        &LiftPair::new(h2.clone(), v2.clone()),
                    )
                    .unwrap();
                    assert_abs_diff_eq!(z1.0.dot(&(&m * &z2.0)), direct, epsilon = 1e-10);
                }
            }
            // G(∂/∂x^φ, ∂/∂u^θ) = a₂-block (0 here) + vertical correction u^sΓ^w_{sφ} g_{wθ}·a₁
            let w = metric.family.values(1.0).unwrap();
            let expected = w.a1() * gamma.get(0, 0, 1) + w.b1() * gamma.get(0, 0, 1);
            assert_abs_diff_eq!(m[(1, 2)], expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn riemannian_families_give_positive_definite_matrices() {
        for family in ["sasaki", "cheeger-gromoll", "coupled"] {
            let metric = sphere_metric(family);
            for i in 0..50 {
                let s = i as f64 / 50.0;
                let x = v(&[0.4 + 2.2 * s, -2.0 + 4.0 * s]);
                let u = v(&[2.0 * (7.0 * s).sin(), 1.5 * (3.0 * s).cos()]);
                let m = bundle_metric_matrix(&metric, &BundlePoint::new(x, u)).unwrap();
                assert!(m.cholesky().is_some(), "{family} at sample {i}");
            }
        }
    }

    #[test]
    fn pseudo_family_matrix_is_invertible_with_split_signature() {
        let metric = GNaturalMetric::new(
            Arc::new(Euclidean::new(2)),
            preset_family("null-vertical").unwrap(),
            10.0,
        )
        .unwrap();
        let p = BundlePoint::new(v(&[0.2, 0.1]), v(&[0.5, 1.0]));
        let m = bundle_metric_matrix(&metric, &p).unwrap();
        let eig = m.symmetric_eigen().eigenvalues;
        let positive = eig.iter().filter(|e| **e > 1e-9).count();
        let negative = eig.iter().filter(|e| **e < -1e-9).count();
        assert_eq!((positive, negative), (2, 2));
    }

    #[test]
    fn flat_sasaki_connection_vanishes() {
        let metric =
            GNaturalMetric::new(Arc::new(Euclidean::new(2)), preset_family("sasaki").unwrap(), 10.0)
                .unwrap();
        let p = BundlePoint::new(v(&[0.1, 0.2]), v(&[0.3, 0.4]));
        let z1 = BundleVector(v(&[1.0, 0.0, 0.0, 0.0]));
        let constant = |_: &BundlePoint| BundleVector(v(&[0.0, 1.0, 0.0, 0.0]));
        let out = ambient_connection(&metric, &p, &z1, constant).unwrap();
        assert_abs_diff_eq!(out.0.norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn sphere_connection_is_torsion_free_on_coordinate_fields() {
        let metric = sphere_metric("sasaki");
        let p = BundlePoint::new(v(&[1.0, 0.3]), v(&[0.6, -0.8]));
        for i in 0..4 {
            for j in 0..4 {
                let ei = BundleVector(DVector::from_fn(4, |k, _| if k == i { 1.0 } else { 0.0 }));
                let ej = BundleVector(DVector::from_fn(4, |k, _| if k == j { 1.0 } else { 0.0 }));
                let (ei2, ej2) = (ei.clone(), ej.clone());
                let a = ambient_connection(&metric, &p, &ei, move |_| ej2.clone()).unwrap();
                let b = ambient_connection(&metric, &p, &ej, move |_| ei2.clone()).unwrap();
                assert_abs_diff_eq!((a.0 - b.0).norm(), 0.0, epsilon = 1e-4);
            }
        }
    }

    #[test]
    fn sphere_connection_is_metric_compatible() {
        let metric = sphere_metric("cheeger-gromoll");
        let p = BundlePoint::new(v(&[1.2, -0.5]), v(&[0.4, 0.9]));
        let y = |q: &BundlePoint| BundleVector(v(&[q.base[1], 1.0, q.fiber[0], -0.3]));
        let z = |q: &BundlePoint| BundleVector(v(&[0.5, q.base[0] * q.fiber[1], 1.0, 0.2]));
        let d = BundleVector(v(&[0.3, -0.7, 1.1, 0.4]));
        let pair = |q: &BundlePoint| {
            let m = bundle_metric_matrix(&metric, q).unwrap();
            y(q).0.dot(&(m * z(q).0))
        };
        let h = 1e-5;
        let c = p.coords();
        let lhs = (pair(&BundlePoint::from_coords(&(&c + &d.0 * h)))
            - pair(&BundlePoint::from_coords(&(&c - &d.0 * h))))
            / (2.0 * h);
        let m = bundle_metric_matrix(&metric, &p).unwrap();
        let dy = ambient_connection(&metric, &p, &d, y).unwrap();
        let dz = ambient_connection(&metric, &p, &d, z).unwrap();
        let rhs = dy.0.dot(&(&m * z(&p).0)) + y(&p).0.dot(&(&m * dz.0));
        assert!((lhs - rhs).abs() < 1e-5 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
    }
}
