//! Per-point ingredients shared by the closed forms and their numeric sides.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::bundle::{bundle_christoffel, bundle_metric_matrix, split_tangent, BundleVector};
use crate::diffgeo::{riemann_at, ChartPoint, Christoffel, CurvatureTensor};
use crate::error::{GeometryError, Result};
use crate::gnatural::{gnat_metric_eval, GNaturalMetric, LiftPair, WeightValues};
use crate::normal_lift::{
    coordinate_frame, lift_connection_table, lift_point, lm_normal_space, normal_projector, LiftFrame,
    NormalLiftPoint,
};
use crate::submanifold::Immersion;

/// Step of the five-point stencils used for fields along `M` and along fibers.
pub const STENCIL_STEP: f64 = 1e-3;

const OFFSETS: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];
const WEIGHTS: [f64; 4] = [1.0, -8.0, 8.0, -1.0];

fn five_point(values: &[DVector<f64>; 4], h: f64) -> DVector<f64> {
    let mut acc = &values[0] * WEIGHTS[0];
    for k in 1..4 {
        acc += &values[k] * WEIGHTS[k];
    }
    acc / (12.0 * h)
}

/// One normal of `LM` extended to a field: `ν(y, v) = P(y, v) ν₀` with `P`
/// the projector onto the normal space.
#[derive(Debug, Clone)]
pub struct NormalField {
    pub nu: BundleVector,
    pub h: DVector<f64>,
    pub v: DVector<f64>,
    /// `∇_{δ_a} H`.
    pub dh: Vec<DVector<f64>>,
    /// `∇_{δ_a} V`.
    pub dv: Vec<DVector<f64>>,
    /// Chart derivative of `ν` along each frame coordinate `(y^a, v^x)`.
    pub d_true: Vec<DVector<f64>>,
    /// Chart derivative of `E(y, v) = H(y)^h + V(y)^v` (parts frozen in `v`).
    pub d_frozen: Vec<DVector<f64>>,
}

/// Stencil neighbours of a point along one base direction.
struct Neighbours {
    points: [NormalLiftPoint; 4],
    projectors: [DMatrix<f64>; 4],
}

#[derive(Debug, Clone)]
pub struct PointContext {
    pub point: NormalLiftPoint,
    pub weights: WeightValues,
    pub frame: LiftFrame,
    /// `G` as a `2n × 2n` chart matrix.
    pub gm: DMatrix<f64>,
    pub tilde_gamma: Christoffel,
    /// `nabla[α][β] = ∇̃_{∂_α}∂_β`.
    pub nabla: Vec<Vec<BundleVector>>,
    /// Unsigned `R(X,Y,Z,W) = g(R(X,Y)Z, W)` of the ambient metric.
    pub curvature: CurvatureTensor,
    /// `∇_{δ_a} δ_b`.
    pub ddelta: Vec<Vec<DVector<f64>>>,
    /// `∇_{δ_a} M_b`.
    pub dm: Vec<Vec<DVector<f64>>>,
    /// `∇_{δ_a} N_b`.
    pub dn: Vec<Vec<DVector<f64>>>,
    /// `∇_{δ_a} η_x`.
    pub deta: Vec<Vec<DVector<f64>>>,
    pub normals: Vec<NormalField>,
    metric: GNaturalMetric,
}

impl PointContext {
    pub fn new(metric: &GNaturalMetric, scenario: Arc<dyn Immersion>, y: &DVector<f64>, v: &DVector<f64>) -> Result<Self> {
        let point = lift_point(scenario.clone(), y, v)?;
        let weights = point.weights(metric)?;
        let bp = point.bundle_point();
        let gm = bundle_metric_matrix(metric, &bp)?;
        let tilde_gamma = bundle_christoffel(metric, &bp)?;
        let frame = coordinate_frame(&point);
        let nabla = lift_connection_table(&point, &tilde_gamma)?;
        let ambient = scenario.ambient();
        let curvature = riemann_at(ambient.as_ref(), &ChartPoint(point.x.clone()))?;
        let (m, k) = (point.m(), point.codim());

        let mut neighbours = Vec::with_capacity(m);
        for a in 0..m {
            let mut pts = Vec::with_capacity(4);
            let mut projs = Vec::with_capacity(4);
            for o in OFFSETS {
                let mut ys = y.clone();
                ys[a] += o * STENCIL_STEP;
                pts.push(lift_point(scenario.clone(), &ys, v)?);
                projs.push(normal_projector(metric, &scenario, &ys, v)?);
            }
            neighbours.push(Neighbours {
                points: pts.try_into().expect("four stencil points"),
                projectors: projs.try_into().expect("four stencil projectors"),
            });
        }
        let mut fiber_projectors = Vec::with_capacity(k);
        for x in 0..k {
            let mut projs = Vec::with_capacity(4);
            for o in OFFSETS {
                let mut vs = v.clone();
                vs[x] += o * STENCIL_STEP;
                projs.push(normal_projector(metric, &scenario, y, &vs)?);
            }
            let arr: [DMatrix<f64>; 4] = projs.try_into().expect("four stencil projectors");
            fiber_projectors.push(arr);
        }

        let covariant = |a: usize, value: &DVector<f64>, f: &dyn Fn(&NormalLiftPoint) -> DVector<f64>| {
            let nb = &neighbours[a];
            let vals = [f(&nb.points[0]), f(&nb.points[1]), f(&nb.points[2]), f(&nb.points[3])];
            five_point(&vals, STENCIL_STEP) + point.gamma.contract(&point.delta(a), value)
        };

        let mut ddelta = vec![Vec::with_capacity(m); m];
        let mut dm = vec![Vec::with_capacity(m); m];
        let mut dn = vec![Vec::with_capacity(m); m];
        let mut deta = vec![Vec::with_capacity(k); m];
        let derivs = point
            .frame
            .derivatives
            .as_ref()
            .ok_or_else(|| GeometryError::MissingFrameDerivative(scenario.name().to_string()))?;
        for a in 0..m {
            for b in 0..m {
                ddelta[a].push(point.jet.second(a, b) + point.gamma.contract(&point.delta(a), &point.delta(b)));
                dm[a].push(covariant(a, &point.m_vec(b), &|q: &NormalLiftPoint| q.m_vec(b)));
                dn[a].push(covariant(a, &point.n_vec(b), &|q: &NormalLiftPoint| q.n_vec(b)));
            }
            for x in 0..k {
                let eta = point.eta(x);
                deta[a].push(derivs[a].column(x).into_owned() + point.gamma.contract(&point.delta(a), &eta));
            }
        }

        let space = lm_normal_space(metric, &frame, &point)?;
        let mut normals = Vec::with_capacity(space.basis.len());
        for basis in &space.basis {
            let nu0 = &basis.vector.0;
            let mut dh = Vec::with_capacity(m);
            let mut dv = Vec::with_capacity(m);
            let mut d_true = Vec::with_capacity(m + k);
            for nb in &neighbours {
                let nus: Vec<DVector<f64>> = nb.projectors.iter().map(|p| p * nu0).collect();
                let mut hs = Vec::with_capacity(4);
                let mut vs = Vec::with_capacity(4);
                for (q, nu) in nb.points.iter().zip(&nus) {
                    let (hq, vq) = split_tangent(&BundleVector(nu.clone()), &q.bundle_point(), &q.gamma);
                    hs.push(hq);
                    vs.push(vq);
                }
                let hs: [DVector<f64>; 4] = hs.try_into().expect("four values");
                let vs: [DVector<f64>; 4] = vs.try_into().expect("four values");
                let nus: [DVector<f64>; 4] = nus.try_into().expect("four values");
                let a = d_true.len();
                dh.push(five_point(&hs, STENCIL_STEP) + point.gamma.contract(&point.delta(a), &basis.h));
                dv.push(five_point(&vs, STENCIL_STEP) + point.gamma.contract(&point.delta(a), &basis.v));
                d_true.push(five_point(&nus, STENCIL_STEP));
            }
            let mut d_frozen = d_true.clone();
            for (x, projs) in fiber_projectors.iter().enumerate() {
                let vals = [&projs[0] * nu0, &projs[1] * nu0, &projs[2] * nu0, &projs[3] * nu0];
                d_true.push(five_point(&vals, STENCIL_STEP));
                // K-part of H^h is -Γ(u, H); moving along the fiber only changes u
                let n = point.n();
                let mut dz = DVector::zeros(2 * n);
                let shift = -point.gamma.contract(&point.eta(x), &basis.h);
                dz.rows_mut(n, n).copy_from(&shift);
                d_frozen.push(dz);
            }
            normals.push(NormalField {
                nu: basis.vector.clone(),
                h: basis.h.clone(),
                v: basis.v.clone(),
                dh,
                dv,
                d_true,
                d_frozen,
            });
        }

        Ok(Self {
            point,
            weights,
            frame,
            gm,
            tilde_gamma,
            nabla,
            curvature,
            ddelta,
            dm,
            dn,
            deta,
            normals,
            metric: metric.clone(),
        })
    }

    pub fn m(&self) -> usize {
        self.point.m()
    }

    pub fn codim(&self) -> usize {
        self.point.codim()
    }

    pub fn g(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        self.point.dot(a, b)
    }

    /// `M_a + N_a = ∇_{δ_a} u`.
    pub fn w(&self, a: usize) -> DVector<f64> {
        self.point.m_vec(a) + self.point.n_vec(a)
    }

    /// `∇_{δ_a}(M_b + N_b) = ∇_{δ_a}∇_{δ_b} u`.
    pub fn dw(&self, a: usize, b: usize) -> DVector<f64> {
        &self.dm[a][b] + &self.dn[a][b]
    }

    /// `G(Z₁, Z₂)` through the chart matrix.
    pub fn big_g(&self, z1: &DVector<f64>, z2: &DVector<f64>) -> f64 {
        z1.dot(&(&self.gm * z2))
    }

    /// `G(H₁^h + V₁^v, H₂^h + V₂^v)` through the weight blocks.
    pub fn pair(&self, h1: &DVector<f64>, v1: &DVector<f64>, h2: &DVector<f64>, v2: &DVector<f64>) -> Result<f64> {
        gnat_metric_eval(
            &self.metric,
            &self.point.x,
            &self.point.u,
            &LiftPair::new(h1.clone(), v1.clone()),
            &LiftPair::new(h2.clone(), v2.clone()),
        )
    }

    /// `∇̃_{∂_α} ν` for the projector-extended normal field.
    pub fn nabla_normal(&self, field: &NormalField, alpha: usize) -> DVector<f64> {
        &field.d_true[alpha] + self.tilde_gamma.contract(&self.frame.vectors[alpha].0, &field.nu.0)
    }

    /// `∇̃_{∂_α}(H^h + V^v)` with `H`, `V` depending on `y` only.
    pub fn nabla_frozen(&self, field: &NormalField, alpha: usize) -> DVector<f64> {
        &field.d_frozen[alpha] + self.tilde_gamma.contract(&self.frame.vectors[alpha].0, &field.nu.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gnatural::preset_family;
    use crate::scenarios::scenario_by_name;

    fn ctx(name: &str, family: &str, y: &[f64], v: &[f64]) -> PointContext {
        let s = scenario_by_name(name).unwrap();
        let metric = GNaturalMetric::new(s.ambient(), preset_family(family).unwrap(), 16.0).unwrap();
        PointContext::new(&metric, s, &DVector::from_column_slice(y), &DVector::from_column_slice(v)).unwrap()
    }

    #[test]
    fn five_point_is_exact_on_quartics() {
        let f = |s: f64| DVector::from_element(1, 3.0 * s.powi(4) - s.powi(3) + 2.0 * s);
        let vals = [f(-2e-3), f(-1e-3), f(1e-3), f(2e-3)];
        assert!((five_point(&vals, 1e-3)[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn frozen_and_true_fields_agree_along_base_directions() {
        let c = ctx("helix", "cheeger-gromoll", &[0.4], &[0.7, -0.2]);
        for nf in &c.normals {
            assert_eq!(nf.d_true[0], nf.d_frozen[0]);
            assert_eq!(nf.dh.len(), 1);
        }
    }

    #[test]
    fn nabla_of_w_matches_analytic_derivative_for_circle() {
        // circle: W = v s, so ∇_t W = v ∇_t s = -v n
        let c = ctx("circle", "sasaki", &[0.3], &[1.5]);
        let n = c.point.eta(0);
        let expected = -&n * 1.5;
        assert!((c.dw(0, 0) - expected).amax() < 1e-8);
        assert!((&c.deta[0][0] - DVector::from_column_slice(&[-(0.3f64).sin(), 0.3f64.cos()])).amax() < 1e-12);
    }

    #[test]
    fn normal_fields_stay_normal_along_stencil_directions() {
        // d/dα G(∂_β, ν) = G(∇̃_α ∂_β, ν) + G(∂_β, ∇̃_α ν) and G(∂_β, ν) ≡ 0
        let c = ctx("sphere-r4", "sasaki", &[1.1, 0.4], &[0.6, 0.8]);
        for nf in &c.normals {
            for alpha in 0..c.frame.len() {
                for beta in 0..c.frame.len() {
                    let r = c.big_g(&c.nabla[alpha][beta].0, &nf.nu.0)
                        + c.big_g(&c.frame.vectors[beta].0, &c.nabla_normal(nf, alpha));
                    assert!(r.abs() < 1e-6, "{alpha} {beta}: {r}");
                }
            }
        }
    }
}
