//! The lift `f̃(y, v) = (x(y), v^x N_x(y))` of the normal bundle of `M` into `TN`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::bundle::{
    base_christoffel, bundle_christoffel, bundle_metric_matrix, bundle_metric_with,
    horizontal_lift, split_tangent, vertical_lift, BundlePoint, BundleVector,
};
use crate::diffgeo::{symmetrize, Christoffel, DEGENERACY_TOLERANCE};
use crate::error::{GeometryError, Result};
use crate::gnatural::{GNaturalMetric, WeightValues};
use crate::submanifold::{
    gauss_weingarten, immersion_jet, normal_frame, wb_derivative_normal, Immersion, ImmersionJet,
    NormalFrame, SecondFundamentalForm,
};

const NULL_SPACE_TOLERANCE: f64 = 1e-10;

/// A point `(y, v)` of the normal bundle together with everything the
/// submanifold side knows about it.
#[derive(Clone)]
pub struct NormalLiftPoint {
    pub scenario: Arc<dyn Immersion>,
    pub y: DVector<f64>,
    pub v: DVector<f64>,
    /// `x(y)`.
    pub x: DVector<f64>,
    /// `u = v^x η_x`.
    pub u: DVector<f64>,
    /// `g(u, u)`.
    pub t: f64,
    pub g: DMatrix<f64>,
    /// Christoffel symbols of the ambient metric at `x`.
    pub gamma: Christoffel,
    pub jet: ImmersionJet,
    pub frame: NormalFrame,
    pub sff: SecondFundamentalForm,
    /// `M_{ax}`: `mtab[a]` has columns indexed by `x`.
    pub mtab: Vec<DMatrix<f64>>,
}

impl std::fmt::Debug for NormalLiftPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NormalLiftPoint")
            .field("scenario", &self.scenario.name())
            .field("y", &self.y.as_slice())
            .field("v", &self.v.as_slice())
            .field("t", &self.t)
            .finish()
    }
}

impl NormalLiftPoint {
    pub fn m(&self) -> usize {
        self.jet.m()
    }

    pub fn n(&self) -> usize {
        self.jet.n()
    }

    pub fn codim(&self) -> usize {
        self.frame.codim()
    }

    pub fn bundle_point(&self) -> BundlePoint {
        BundlePoint::new(self.x.clone(), self.u.clone())
    }

    pub fn delta(&self, a: usize) -> DVector<f64> {
        self.jet.b.column(a).into_owned()
    }

    pub fn eta(&self, x: usize) -> DVector<f64> {
        self.frame.eta(x)
    }

    /// `M_a = v^z M_{az}`, tangent to `M`.
    pub fn m_vec(&self, a: usize) -> DVector<f64> {
        &self.mtab[a] * &self.v
    }

    /// `N_a = v^z Γ_{az}^y η_y`, normal to `M`.
    pub fn n_vec(&self, a: usize) -> DVector<f64> {
        let conn = self.sff.normal_connection.as_ref().expect("lift points carry a normal connection");
        &self.frame.vectors * (&conn[a] * &self.v)
    }

    /// `∇_{δ_a} u` computed directly as `∂_a(N v) + Γ(B_a, u)`.
    pub fn nabla_u(&self, a: usize) -> DVector<f64> {
        let derivs = self.frame.derivatives.as_ref().expect("lift points carry frame derivatives");
        &derivs[a] * &self.v + self.gamma.contract(&self.delta(a), &self.u)
    }

    pub fn dot(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.dot(&(&self.g * b))
    }

    pub fn weights(&self, metric: &GNaturalMetric) -> Result<WeightValues> {
        metric.family.values(self.t)
    }
}

pub fn lift_point(scenario: Arc<dyn Immersion>, y: &DVector<f64>, v: &DVector<f64>) -> Result<NormalLiftPoint> {
    let jet = immersion_jet(scenario.as_ref(), y)?;
    let ambient = scenario.ambient();
    let frame = normal_frame(scenario.as_ref(), &jet)?;
    if v.len() != frame.codim() {
        return Err(GeometryError::DimensionMismatch {
            expected: frame.codim(),
            found: v.len(),
        });
    }
    let g = symmetrize(&ambient.metric(&jet.x));
    let gamma = crate::diffgeo::christoffel_default(ambient.as_ref(), &crate::diffgeo::ChartPoint(jet.x.clone()))?;
    let sff = gauss_weingarten(&jet, &frame, &g, &gamma)?;
    let mtab = wb_derivative_normal(&jet, &frame, &sff, &gamma, scenario.name())?;
    let u = &frame.vectors * v;
    let t = u.dot(&(&g * &u));
    Ok(NormalLiftPoint {
        scenario,
        y: y.clone(),
        v: v.clone(),
        x: jet.x.clone(),
        u,
        t,
        g,
        gamma,
        jet,
        frame,
        sff,
        mtab,
    })
}

/// Tangent frame of `LM`: `∂_a` for `a < m`, then `∂_x`.
#[derive(Debug, Clone)]
pub struct LiftFrame {
    pub vectors: Vec<BundleVector>,
    pub m: usize,
}

impl LiftFrame {
    /// `2n × n` matrix of chart components.
    pub fn matrix(&self) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = self.vectors.iter().map(|z| z.0.clone()).collect();
        DMatrix::from_columns(&cols)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// `∂_a = δ_a^h + M_a^v + N_a^v`, `∂_x = η_x^v`.
pub fn lift_frame(p: &NormalLiftPoint) -> Result<LiftFrame> {
    let bp = p.bundle_point();
    let mut vectors = Vec::with_capacity(p.n());
    for a in 0..p.m() {
        let mut z = horizontal_lift(&p.delta(a), &bp, &p.gamma)?;
        z.0 += vertical_lift(&(p.m_vec(a) + p.n_vec(a)), &bp)?.0;
        vectors.push(z);
    }
    for x in 0..p.codim() {
        vectors.push(vertical_lift(&p.eta(x), &bp)?);
    }
    Ok(LiftFrame { vectors, m: p.m() })
}

/// `∂f̃/∂y^a = (B_a, v^z ∂_a N_z)` and `∂f̃/∂v^x = (0, N_x)`, straight from the
/// chart expression of `f̃`.
pub fn coordinate_frame(p: &NormalLiftPoint) -> LiftFrame {
    let derivs = p.frame.derivatives.as_ref().expect("lift points carry frame derivatives");
    let n = p.n();
    let mut vectors = Vec::with_capacity(n);
    for (a, da) in derivs.iter().enumerate() {
        vectors.push(BundleVector::from_parts(&p.delta(a), &(da * &p.v)));
    }
    for x in 0..p.codim() {
        vectors.push(BundleVector::from_parts(&DVector::zeros(n), &p.eta(x)));
    }
    LiftFrame { vectors, m: p.m() }
}

/// `∂_α∂_β f̃` in `TN` chart components (frame order as in [`LiftFrame`]).
pub fn frame_second_derivative(p: &NormalLiftPoint, alpha: usize, beta: usize) -> Result<DVector<f64>> {
    let (m, n) = (p.m(), p.n());
    let zero = DVector::zeros(n);
    let out = match (alpha < m, beta < m) {
        (true, true) => {
            let dd = p
                .scenario
                .normal_frame_second_derivative(&p.y, alpha, beta)
                .ok_or_else(|| GeometryError::MissingFrameDerivative(p.scenario.name().to_string()))?;
            BundleVector::from_parts(&p.jet.second(alpha, beta), &(dd * &p.v)).0
        }
        (true, false) | (false, true) => {
            let (a, x) = if alpha < m { (alpha, beta - m) } else { (beta, alpha - m) };
            let derivs = p.frame.derivatives.as_ref().expect("lift points carry frame derivatives");
            BundleVector::from_parts(&zero, &derivs[a].column(x).into_owned()).0
        }
        (false, false) => DVector::zeros(2 * n),
    };
    Ok(out)
}

/// Gram matrix of the frame under `G`; may be indefinite.
pub fn lm_induced_metric(metric: &GNaturalMetric, frame: &LiftFrame, p: &NormalLiftPoint) -> Result<DMatrix<f64>> {
    let gm = bundle_metric_with(metric, &p.bundle_point(), &p.gamma)?;
    let z = frame.matrix();
    Ok(symmetrize(&(z.transpose() * gm * z)))
}

/// A normal vector of `LM` with its horizontal and vertical parts.
#[derive(Debug, Clone)]
pub struct NormalVector {
    pub vector: BundleVector,
    /// `dπ(ν)`.
    pub h: DVector<f64>,
    /// `K(ν)`.
    pub v: DVector<f64>,
}

/// Basis of the `G`-orthogonal complement of `T(LM)` at `p`.
#[derive(Debug, Clone)]
pub struct NormalSpace {
    pub basis: Vec<NormalVector>,
}

impl NormalSpace {
    pub fn matrix(&self) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = self.basis.iter().map(|nu| nu.vector.0.clone()).collect();
        DMatrix::from_columns(&cols)
    }
}

/// Null space of `Zᵀ G` (an `n × 2n` system) from the SVD of its zero-padded
/// square form; the right singular vectors of the `n` smallest singular values
/// span it.
pub fn null_space_of(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (rows, cols) = a.shape();
    let mut square = DMatrix::zeros(cols, cols);
    square.view_mut((0, 0), (rows, cols)).copy_from(a);
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let largest = svd.singular_values[order[0]].max(f64::MIN_POSITIVE);
    let rank = order
        .iter()
        .take_while(|&&i| svd.singular_values[i] > NULL_SPACE_TOLERANCE * largest)
        .count();
    if rank != rows {
        return Err(GeometryError::RankDeficient {
            expected: rows,
            found: rank,
        });
    }
    let basis: Vec<DVector<f64>> = order[rows..]
        .iter()
        .map(|&i| v_t.row(i).transpose().into_owned())
        .collect();
    Ok(DMatrix::from_columns(&basis))
}

pub fn lm_normal_space(metric: &GNaturalMetric, frame: &LiftFrame, p: &NormalLiftPoint) -> Result<NormalSpace> {
    let bp = p.bundle_point();
    let gm = bundle_metric_with(metric, &bp, &p.gamma)?;
    let system = frame.matrix().transpose() * gm;
    let null = null_space_of(&system)?;
    let basis = null
        .column_iter()
        .map(|c| {
            let vector = BundleVector(c.into_owned());
            let (h, v) = split_tangent(&vector, &bp, &p.gamma);
            NormalVector { vector, h, v }
        })
        .collect();
    Ok(NormalSpace { basis })
}

/// Euclidean (chart) orthogonal projector onto the `G`-normal space of `LM`
/// at `f̃(y, v)`. Applied to a fixed vector it gives a normal field that is
/// smooth in `(y, v)`, unlike an SVD basis.
pub fn normal_projector(
    metric: &GNaturalMetric,
    scenario: &Arc<dyn Immersion>,
    y: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<DMatrix<f64>> {
    let jet = immersion_jet(scenario.as_ref(), y)?;
    let frame = normal_frame(scenario.as_ref(), &jet)?;
    let derivs = frame
        .derivatives
        .as_ref()
        .ok_or_else(|| GeometryError::MissingFrameDerivative(scenario.name().to_string()))?;
    let n = jet.n();
    let mut cols = Vec::with_capacity(n);
    for (a, da) in derivs.iter().enumerate() {
        cols.push(BundleVector::from_parts(&jet.b.column(a).into_owned(), &(da * v)).0);
    }
    for x in 0..frame.codim() {
        cols.push(BundleVector::from_parts(&DVector::zeros(n), &frame.eta(x)).0);
    }
    let z = DMatrix::from_columns(&cols);
    let u = &frame.vectors * v;
    let gamma = base_christoffel(metric, &jet.x)?;
    let gm = bundle_metric_with(metric, &BundlePoint::new(jet.x.clone(), u), &gamma)?;
    let a = z.transpose() * gm;
    let aat = &a * a.transpose();
    let inv = aat
        .clone()
        .try_inverse()
        .ok_or(GeometryError::RankDeficient { expected: n, found: 0 })?;
    Ok(DMatrix::identity(2 * n, 2 * n) - a.transpose() * inv * a)
}

/// The spanning set `η_y^h`, `δ_a^v − (a₁/A)(∇_{δ_a} u)^h` of the normal space
/// for families with `a₂ = b₂ = 0`.
pub fn special_normal_basis(metric: &GNaturalMetric, p: &NormalLiftPoint) -> Result<Vec<BundleVector>> {
    if !metric.family.has_decoupled_blocks() {
        return Err(GeometryError::FamilyConstraint(
            "the special normal basis needs a2 = b2 = 0 identically".into(),
        ));
    }
    let w = p.weights(metric)?;
    if w.big_a().abs() < DEGENERACY_TOLERANCE {
        return Err(GeometryError::FamilyConstraint(format!(
            "A = a1 + a3 vanishes at t = {}",
            p.t
        )));
    }
    let bp = p.bundle_point();
    let ratio = w.a1() / w.big_a();
    let mut out = Vec::with_capacity(p.n());
    for x in 0..p.codim() {
        out.push(horizontal_lift(&p.eta(x), &bp, &p.gamma)?);
    }
    for a in 0..p.m() {
        let mut z = vertical_lift(&p.delta(a), &bp)?;
        z.0 -= horizontal_lift(&(p.m_vec(a) + p.n_vec(a)), &bp, &p.gamma)?.0 * ratio;
        out.push(z);
    }
    Ok(out)
}

/// `∇̃_{∂_α}∂_β` and the second fundamental form `H̃(∂_α, ∂_β)` of `LM`.
#[derive(Debug, Clone)]
pub struct LiftSecondFundamental {
    /// `nabla[α][β] = ∇̃_{∂_α}∂_β`.
    pub nabla: Vec<Vec<BundleVector>>,
    /// `h[α][β] = H̃(∂_α, ∂_β)`.
    pub h: Vec<Vec<BundleVector>>,
    /// `components[α][β][i] = G(H̃(∂_α,∂_β), ν_i)` for the normal basis.
    pub components: Vec<Vec<Vec<f64>>>,
}

/// `∇̃_{∂_α}∂_β` for all frame pairs; needs only the ambient connection.
pub fn lift_connection_table(
    p: &NormalLiftPoint,
    tilde_gamma: &Christoffel,
) -> Result<Vec<Vec<BundleVector>>> {
    let frame = coordinate_frame(p);
    let n = frame.len();
    let mut table = Vec::with_capacity(n);
    for alpha in 0..n {
        let mut row = Vec::with_capacity(n);
        for beta in 0..n {
            let d2 = frame_second_derivative(p, alpha, beta)?;
            let value = d2 + tilde_gamma.contract(&frame.vectors[alpha].0, &frame.vectors[beta].0);
            row.push(BundleVector(value));
        }
        table.push(row);
    }
    Ok(table)
}

pub fn lm_second_fundamental(metric: &GNaturalMetric, p: &NormalLiftPoint) -> Result<LiftSecondFundamental> {
    let bp = p.bundle_point();
    let gm = bundle_metric_matrix(metric, &bp)?;
    let tilde_gamma = bundle_christoffel(metric, &bp)?;
    let frame = coordinate_frame(p);
    let z = frame.matrix();
    let gram = symmetrize(&(z.transpose() * &gm * &z));
    let det = gram.determinant();
    let scale = gram.amax().max(1.0);
    if det.abs() < DEGENERACY_TOLERANCE * scale.powi(gram.nrows() as i32) {
        return Err(GeometryError::DegenerateInducedMetric { det });
    }
    let lu = gram.lu();
    let normals = lm_normal_space(metric, &frame, p)?;
    let nabla = lift_connection_table(p, &tilde_gamma)?;
    let n = frame.len();
    let mut h = Vec::with_capacity(n);
    let mut components = Vec::with_capacity(n);
    for row in &nabla {
        let mut h_row = Vec::with_capacity(n);
        let mut c_row = Vec::with_capacity(n);
        for w in row {
            let rhs = z.transpose() * (&gm * &w.0);
            let coeffs = lu
                .solve(&rhs)
                .ok_or(GeometryError::DegenerateInducedMetric { det })?;
            let normal = &w.0 - &z * coeffs;
            let gn = &gm * &normal;
            c_row.push(normals.basis.iter().map(|nu| nu.vector.0.dot(&gn)).collect());
            h_row.push(BundleVector(normal));
        }
        h.push(h_row);
        components.push(c_row);
    }
    Ok(LiftSecondFundamental { nabla, h, components })
}
