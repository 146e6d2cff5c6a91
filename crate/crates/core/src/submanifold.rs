//! Isometric immersions `M → N`: jets, induced geometry, normal frames, the
//! second fundamental form and the normal connection.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::diffgeo::{
    christoffel_default, invert_metric, symmetrize, ChartBounds, ChartPoint, Christoffel,
    MetricField,
};
use crate::error::{GeometryError, Result};

const JET_STEP: f64 = 1e-5;
const NESTED_JET_STEP: f64 = 1e-4;
const RANK_TOLERANCE: f64 = 1e-9;

/// A parametrised submanifold `y ↦ x(y)` of a charted ambient manifold.
///
/// Only `position` is required; the jets fall back to central differences.
/// Normal frames are optional: without one the frame is completed pointwise and
/// nothing downstream that needs its derivative is available.
pub trait Immersion: Send + Sync {
    fn name(&self) -> &str;

    fn ambient(&self) -> Arc<dyn MetricField>;

    /// `m = dim M`.
    fn base_dim(&self) -> usize;

    /// Parameter domain of `y`.
    fn domain(&self) -> &ChartBounds;

    fn position(&self, y: &DVector<f64>) -> DVector<f64>;

    /// Sectional curvature of the ambient space when it is constant.
    fn constant_curvature(&self) -> Option<f64> {
        None
    }

    /// `B_a^r`, an `n×m` matrix.
    fn jacobian(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let n = self.ambient().dim();
        let m = self.base_dim();
        let mut b = DMatrix::zeros(n, m);
        for a in 0..m {
            let h = JET_STEP * y[a].abs().max(1.0);
            let mut yp = y.clone();
            let mut ym = y.clone();
            yp[a] += h;
            ym[a] -= h;
            b.set_column(a, &((self.position(&yp) - self.position(&ym)) / (2.0 * h)));
        }
        b
    }

    /// `B_{a.b}^r`: entry `a` is the `n×m` matrix with columns `∂_a∂_b x`.
    fn second_partials(&self, y: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let m = self.base_dim();
        (0..m)
            .map(|a| {
                let h = NESTED_JET_STEP * y[a].abs().max(1.0);
                let mut yp = y.clone();
                let mut ym = y.clone();
                yp[a] += h;
                ym[a] -= h;
                (self.jacobian(&yp) - self.jacobian(&ym)) / (2.0 * h)
            })
            .collect()
    }

    /// Analytic orthonormal normal frame `N_x^r` as columns.
    fn normal_frame(&self, _y: &DVector<f64>) -> Option<DMatrix<f64>> {
        None
    }

    /// `∂_a N_x^r` as columns.
    fn normal_frame_derivative(&self, _y: &DVector<f64>, _a: usize) -> Option<DMatrix<f64>> {
        None
    }

    /// `∂_a∂_b N_x^r` as columns. Defaults to differencing the analytic first
    /// derivative.
    fn normal_frame_second_derivative(
        &self,
        y: &DVector<f64>,
        a: usize,
        b: usize,
    ) -> Option<DMatrix<f64>> {
        let h = NESTED_JET_STEP * y[b].abs().max(1.0);
        let mut yp = y.clone();
        let mut ym = y.clone();
        yp[b] += h;
        ym[b] -= h;
        let plus = self.normal_frame_derivative(&yp, a)?;
        let minus = self.normal_frame_derivative(&ym, a)?;
        Some((plus - minus) / (2.0 * h))
    }
}

/// Position, Jacobian and second partials of an immersion at `y`.
#[derive(Debug, Clone)]
pub struct ImmersionJet {
    pub y: DVector<f64>,
    pub x: DVector<f64>,
    pub b: DMatrix<f64>,
    pub bb: Vec<DMatrix<f64>>,
}

impl ImmersionJet {
    pub fn m(&self) -> usize {
        self.b.ncols()
    }

    pub fn n(&self) -> usize {
        self.b.nrows()
    }

    /// `B_{a.b}` as an `n`-vector.
    pub fn second(&self, a: usize, b: usize) -> DVector<f64> {
        self.bb[a].column(b).into_owned()
    }
}

pub fn immersion_jet(f: &dyn Immersion, y: &DVector<f64>) -> Result<ImmersionJet> {
    if y.len() != f.base_dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: f.base_dim(),
            found: y.len(),
        });
    }
    f.domain().check(y)?;
    let x = f.position(y);
    let b = f.jacobian(y);
    let bb = f.second_partials(y);
    if x.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(GeometryError::NonFinite("immersion jet"));
    }
    let m = f.base_dim();
    let rank = b.clone().svd(false, false).rank(RANK_TOLERANCE);
    if rank < m || m >= x.len() {
        return Err(GeometryError::RankDeficient {
            expected: m,
            found: rank,
        });
    }
    Ok(ImmersionJet { y: y.clone(), x, b, bb })
}

/// Induced metric `g_ab` and its Christoffel symbols `Γ^c_ab`.
#[derive(Debug, Clone)]
pub struct InducedGeometry {
    pub metric: DMatrix<f64>,
    pub christoffel: Christoffel,
}

pub fn induced_objects(jet: &ImmersionJet, ambient: &dyn MetricField) -> Result<InducedGeometry> {
    let g = symmetrize(&ambient.metric(&jet.x));
    let gamma = christoffel_default(ambient, &ChartPoint(jet.x.clone()))?;
    induced_with(jet, &g, &gamma)
}

fn induced_with(jet: &ImmersionJet, g: &DMatrix<f64>, gamma: &Christoffel) -> Result<InducedGeometry> {
    let m = jet.m();
    let metric = symmetrize(&(jet.b.transpose() * g * &jet.b));
    let inv = invert_metric(&metric)?;
    // B_r^c = g^{cd} B_d^t g_tr
    let dual = &inv * jet.b.transpose() * g;
    let mut christoffel = Christoffel::zeros(m);
    for a in 0..m {
        for b in a..m {
            let ba = jet.b.column(a).into_owned();
            let bbv = jet.b.column(b).into_owned();
            let w = jet.second(a, b) + gamma.contract(&ba, &bbv);
            let c = &dual * w;
            for k in 0..m {
                christoffel.set(k, a, b, c[k]);
                christoffel.set(k, b, a, c[k]);
            }
        }
    }
    Ok(InducedGeometry { metric, christoffel })
}

/// Orthonormal normal vectors `η_x` (columns) and, when known, `∂_a N_x`.
#[derive(Debug, Clone)]
pub struct NormalFrame {
    pub vectors: DMatrix<f64>,
    pub derivatives: Option<Vec<DMatrix<f64>>>,
}

impl NormalFrame {
    pub fn codim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn eta(&self, x: usize) -> DVector<f64> {
        self.vectors.column(x).into_owned()
    }
}

pub fn normal_frame(f: &dyn Immersion, jet: &ImmersionJet) -> Result<NormalFrame> {
    let g = symmetrize(&f.ambient().metric(&jet.x));
    match f.normal_frame(&jet.y) {
        Some(vectors) => {
            let m = jet.m();
            let derivatives = (0..m)
                .map(|a| f.normal_frame_derivative(&jet.y, a))
                .collect::<Option<Vec<_>>>();
            Ok(NormalFrame { vectors, derivatives })
        }
        None => Ok(NormalFrame {
            vectors: orthonormal_completion(&jet.b, &g)?,
            derivatives: None,
        }),
    }
}

/// `g`-orthonormal vectors spanning the complement of the columns of `b`.
/// Candidates are coordinate vectors, taken greedily by largest residual so
/// the choice is deterministic.
pub fn orthonormal_completion(b: &DMatrix<f64>, g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (n, m) = b.shape();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    // g-orthonormalise the tangent columns first
    for a in 0..m {
        let mut w = b.column(a).into_owned();
        for e in &basis {
            let c = e.dot(&(g * &w));
            w -= e * c;
        }
        let norm = w.dot(&(g * &w)).sqrt();
        if !(norm > RANK_TOLERANCE) {
            return Err(GeometryError::RankDeficient { expected: m, found: a });
        }
        basis.push(w / norm);
    }
    let mut normals = Vec::new();
    let mut used = vec![false; n];
    while normals.len() < n - m {
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for (i, taken) in used.iter().enumerate() {
            if *taken {
                continue;
            }
            let mut w = DVector::zeros(n);
            w[i] = 1.0;
            for e in basis.iter().chain(normals.iter()) {
                let c = e.dot(&(g * &w));
                w -= e * c;
            }
            let norm = w.dot(&(g * &w)).max(0.0).sqrt();
            if best.as_ref().is_none_or(|(_, _, b)| norm > *b) {
                best = Some((i, w, norm));
            }
        }
        match best {
            Some((i, w, norm)) if norm > RANK_TOLERANCE => {
                used[i] = true;
                normals.push(w / norm);
            }
            _ => {
                return Err(GeometryError::RankDeficient {
                    expected: n - m,
                    found: normals.len(),
                })
            }
        }
    }
    Ok(DMatrix::from_columns(&normals))
}

/// Second fundamental form `h_ab^z`, shape operators and normal connection.
#[derive(Debug, Clone)]
pub struct SecondFundamentalForm {
    /// `h[z][(a,b)]`.
    pub h: Vec<DMatrix<f64>>,
    /// `shape[z][(c,a)] = g^{cb} h_ab^z`.
    pub shape: Vec<DMatrix<f64>>,
    /// `normal_connection[a][(x,y)] = Γ_{ay}^x`; present when the frame has derivatives.
    pub normal_connection: Option<Vec<DMatrix<f64>>>,
}

impl SecondFundamentalForm {
    /// `H(δ_a, δ_b) = h_ab^z η_z`.
    pub fn vector(&self, frame: &NormalFrame, a: usize, b: usize) -> DVector<f64> {
        let mut out = DVector::zeros(frame.vectors.nrows());
        for (z, hz) in self.h.iter().enumerate() {
            out += frame.eta(z) * hz[(a, b)];
        }
        out
    }
}

pub fn gauss_weingarten(
    jet: &ImmersionJet,
    frame: &NormalFrame,
    g: &DMatrix<f64>,
    gamma: &Christoffel,
) -> Result<SecondFundamentalForm> {
    let m = jet.m();
    let k = frame.codim();
    let induced = induced_with(jet, g, gamma)?;
    let inv = invert_metric(&induced.metric)?;
    let mut h = vec![DMatrix::zeros(m, m); k];
    for a in 0..m {
        for b in a..m {
            let ba = jet.b.column(a).into_owned();
            let bbv = jet.b.column(b).into_owned();
            let mut w = jet.second(a, b) + gamma.contract(&ba, &bbv);
            for c in 0..m {
                w -= jet.b.column(c) * induced.christoffel.get(c, a, b);
            }
            let gw = g * w;
            for z in 0..k {
                let value = frame.eta(z).dot(&gw);
                h[z][(a, b)] = value;
                h[z][(b, a)] = value;
            }
        }
    }
    let shape = h.iter().map(|hz| &inv * hz).collect();
    let normal_connection = frame.derivatives.as_ref().map(|derivs| {
        (0..m)
            .map(|a| {
                let ba = jet.b.column(a).into_owned();
                let mut table = DMatrix::zeros(k, k);
                for y in 0..k {
                    let w = derivs[a].column(y).into_owned() + gamma.contract(&ba, &frame.eta(y));
                    let gw = g * w;
                    for x in 0..k {
                        table[(x, y)] = frame.eta(x).dot(&gw);
                    }
                }
                table
            })
            .collect()
    });
    Ok(SecondFundamentalForm {
        h,
        shape,
        normal_connection,
    })
}

/// `M_{ax} = ∂_a N_x + Γ(B_a, N_x) − Γ_{ax}^y N_y`, the tangential part of
/// `∇̄_a η_x`. Returns `out[a]` with columns indexed by `x`.
pub fn wb_derivative_normal(
    jet: &ImmersionJet,
    frame: &NormalFrame,
    sff: &SecondFundamentalForm,
    gamma: &Christoffel,
    scenario: &str,
) -> Result<Vec<DMatrix<f64>>> {
    let derivs = frame
        .derivatives
        .as_ref()
        .ok_or_else(|| GeometryError::MissingFrameDerivative(scenario.to_string()))?;
    let conn = sff
        .normal_connection
        .as_ref()
        .ok_or_else(|| GeometryError::MissingFrameDerivative(scenario.to_string()))?;
    let (n, m, k) = (jet.n(), jet.m(), frame.codim());
    Ok((0..m)
        .map(|a| {
            let ba = jet.b.column(a).into_owned();
            let mut out = DMatrix::zeros(n, k);
            for x in 0..k {
                let mut w = derivs[a].column(x).into_owned() + gamma.contract(&ba, &frame.eta(x));
                for y in 0..k {
                    w -= frame.eta(y) * conn[a][(y, x)];
                }
                out.set_column(x, &w);
            }
            out
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::Euclidean;
    use approx::assert_abs_diff_eq;

    /// Unit circle relying on every finite-difference default.
    struct PlainCircle {
        ambient: Arc<dyn MetricField>,
        domain: ChartBounds,
    }

    impl PlainCircle {
        fn new() -> Self {
            Self {
                ambient: Arc::new(Euclidean::new(2)),
                domain: ChartBounds::new(vec![-3.0], vec![3.0]),
            }
        }
    }

    impl Immersion for PlainCircle {
        fn name(&self) -> &str {
            "plain-circle"
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
            DVector::from_column_slice(&[y[0].cos(), y[0].sin()])
        }
    }

    #[test]
    fn finite_difference_jets_of_the_circle() {
        let c = PlainCircle::new();
        let t = 0.4f64;
        let jet = immersion_jet(&c, &DVector::from_element(1, t)).unwrap();
        assert_abs_diff_eq!(jet.b[(0, 0)], -t.sin(), epsilon = 1e-9);
        assert_abs_diff_eq!(jet.b[(1, 0)], t.cos(), epsilon = 1e-9);
        assert_abs_diff_eq!(jet.second(0, 0)[0], -t.cos(), epsilon = 1e-6);
        let induced = induced_objects(&jet, c.ambient().as_ref()).unwrap();
        assert_abs_diff_eq!(induced.metric[(0, 0)], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(induced.christoffel.get(0, 0, 0), 0.0, epsilon = 1e-6);
    }

    #[test]
    fn completion_is_orthonormal_and_deterministic() {
        let b = DMatrix::from_column_slice(3, 1, &[1.0, 1.0, 0.0]);
        let g = DMatrix::from_diagonal(&DVector::from_column_slice(&[1.0, 2.0, 3.0]));
        let n1 = orthonormal_completion(&b, &g).unwrap();
        let n2 = orthonormal_completion(&b, &g).unwrap();
        assert_eq!(n1, n2);
        let gram = n1.transpose() * &g * &n1;
        assert_abs_diff_eq!(gram, DMatrix::identity(2, 2), epsilon = 1e-12);
        assert_abs_diff_eq!((b.transpose() * &g * &n1).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn completion_rejects_dependent_columns() {
        let b = DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 2.0, 0.0, 0.0]);
        assert!(matches!(
            orthonormal_completion(&b, &DMatrix::identity(3, 3)),
            Err(GeometryError::RankDeficient { .. })
        ));
    }

    #[test]
    fn pointwise_frame_has_no_derivative() {
        let c = PlainCircle::new();
        let jet = immersion_jet(&c, &DVector::from_element(1, 0.2)).unwrap();
        let frame = normal_frame(&c, &jet).unwrap();
        assert!(frame.derivatives.is_none());
        let g = DMatrix::identity(2, 2);
        let gamma = Christoffel::zeros(2);
        let sff = gauss_weingarten(&jet, &frame, &g, &gamma).unwrap();
        assert!(sff.normal_connection.is_none());
        assert!(matches!(
            wb_derivative_normal(&jet, &frame, &sff, &gamma, "plain-circle"),
            Err(GeometryError::MissingFrameDerivative(_))
        ));
        // |h₁₁| = 1 whatever orientation the completion picked
        assert_abs_diff_eq!(sff.h[0][(0, 0)].abs(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn out_of_domain_parameter_is_rejected() {
        let c = PlainCircle::new();
        assert!(matches!(
            immersion_jet(&c, &DVector::from_element(1, 5.0)),
            Err(GeometryError::OutOfChart { .. })
        ));
    }
}
