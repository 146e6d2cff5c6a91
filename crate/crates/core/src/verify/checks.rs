//! The residual suites. Each check appends entries (or skips) for one sample
//! point to a [`Recorder`].

use nalgebra::{DMatrix, DVector};

use super::closed_forms::{self as cf, Terms};
use super::context::{NormalField, PointContext};
use super::Recorder;
use crate::bundle::lift;
use crate::gnatural::GNaturalMetric;
use crate::normal_lift::{frame_second_derivative, lift_frame, special_normal_basis};

const HYPERSURFACE: &str = "hypersurface: needs codim M > 1";
/// Below this a weight value or weight combination counts as zero.
const WEIGHT_EPS: f64 = 1e-12;
/// Smallest singular value of a unit-column matrix treated as nonzero.
const RANK_FLOOR: f64 = 1e-8;

fn label(parts: &[(&str, usize)]) -> String {
    parts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

fn slot(c: &PointContext, alpha: usize) -> (&'static str, usize) {
    let m = c.m();
    if alpha < m {
        ("a", alpha)
    } else {
        ("x", alpha - m)
    }
}

/// `G(∇̃_{∂_α}∂_β, ν) + G(∇̃_{∂_α}ν, ∂_β)` for every frame pair and normal.
pub fn residual_pair(c: &PointContext, rec: &mut Recorder) {
    let m = c.m();
    let n = c.frame.len();
    for (i, f) in c.normals.iter().enumerate() {
        for alpha in 0..n {
            let dnu = c.nabla_normal(f, alpha);
            for beta in 0..n {
                let base = match (alpha < m, beta < m) {
                    (false, false) => "consistency.vert-vert",
                    (false, true) => "consistency.vert-base",
                    (true, false) => "consistency.base-vert",
                    (true, true) => "consistency.base-base",
                };
                let shape = c.big_g(&c.nabla[alpha][beta].0, &f.nu.0);
                let weingarten = c.big_g(&dnu, &c.frame.vectors[beta].0);
                let (ka, ia) = slot(c, alpha);
                let (kb, ib) = slot(c, beta);
                let l = format!("nu={i},{ka}{ia},{kb}{ib}");
                rec.record(base, &l, shape + weingarten, shape.abs().max(weingarten.abs()));
            }
        }
    }
}

/// Displays and consequences that carry no curvature term.
pub fn displays_unsigned(c: &PointContext, rec: &mut Recorder) {
    let (m, k) = (c.m(), c.codim());
    for (i, f) in c.normals.iter().enumerate() {
        for x in 0..k {
            for y in 0..k {
                let l = label(&[("nu", i), ("x", x), ("y", y)]);
                let lhs = c.big_g(&c.nabla[m + x][m + y].0, &f.nu.0);
                rec.compare("display.vert-vert", &l, &cf::display_vert_vert(c, f, x, y), lhs);
                let lhs = c.big_g(&c.nabla_frozen(f, m + x), &c.frame.vectors[m + y].0);
                rec.compare("display.vert-vert-partner", &l, &cf::display_vert_vert_partner(c, f, x, y), lhs);
                rec.vanish("consequence.vert-vert", &l, &cf::consequence_vert_vert(c, f, x, y));
            }
            for a in 0..m {
                let l = label(&[("nu", i), ("x", x), ("a", a)]);
                rec.vanish("consequence.vert-base", &l, &cf::consequence_vert_base(c, f, x, a));
                match cf::consequence_base_vert(c, f, a, x) {
                    Ok(t) => rec.vanish("consequence.base-vert", &l, &t),
                    Err(e) => rec.skip("consequence.base-vert", e.to_string()),
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                let l = label(&[("nu", i), ("a", a), ("b", b)]);
                rec.vanish("consequence.base-base", &l, &cf::consequence_base_base(c, f, a, b));
            }
        }
    }
}

/// Displays carrying curvature terms, evaluated with curvature sign `sigma`.
pub fn displays_signed(c: &PointContext, rec: &mut Recorder, sigma: f64) {
    let (m, k) = (c.m(), c.codim());
    for (i, f) in c.normals.iter().enumerate() {
        for x in 0..k {
            for a in 0..m {
                let l = label(&[("nu", i), ("x", x), ("a", a)]);
                let lhs = c.big_g(&c.nabla[m + x][a].0, &f.nu.0);
                rec.compare("display.vert-base", &l, &cf::display_vert_base(c, f, x, a, sigma), lhs);
                let lhs = c.big_g(&c.nabla_frozen(f, m + x), &c.frame.vectors[a].0);
                rec.compare("display.vert-base-partner", &l, &cf::display_vert_base_partner(c, f, x, a, sigma), lhs);
                let lhs = c.big_g(&c.nabla_frozen(f, a), &c.frame.vectors[m + x].0);
                rec.compare("display.base-vert-partner", &l, &cf::display_base_vert_partner(c, f, a, x, sigma), lhs);
            }
        }
        for a in 0..m {
            for b in 0..m {
                let l = label(&[("nu", i), ("a", a), ("b", b)]);
                let lhs = c.big_g(&c.nabla[a][b].0, &f.nu.0);
                rec.compare("display.base-base", &l, &cf::display_base_base(c, f, a, b, sigma), lhs);
                let lhs = c.big_g(&c.nabla_frozen(f, a), &c.frame.vectors[b].0);
                rec.compare("display.base-base-partner", &l, &cf::display_base_base_partner(c, f, a, b, sigma), lhs);
            }
        }
    }
}

/// `S = a₂H + a₁V + g(u, b₂H+b₁V)u`.
fn s_vector(c: &PointContext, f: &NormalField) -> DVector<f64> {
    let w = &c.weights;
    let u = &c.point.u;
    let x = &f.h * w.b2() + &f.v * w.b1();
    &f.h * w.a2() + &f.v * w.a1() + u * c.g(u, &x)
}

/// `g(X, S)` as its three terms.
fn dot_s(c: &PointContext, f: &NormalField, x: &DVector<f64>) -> Terms {
    let w = &c.weights;
    let u = &c.point.u;
    let xb = &f.h * w.b2() + &f.v * w.b1();
    let mut t = Terms::new();
    t.push(w.a2() * c.g(x, &f.h));
    t.push(w.a1() * c.g(x, &f.v));
    t.push(c.g(u, &xb) * c.g(u, x));
    t
}

/// `g(X, ∇_{δ_a}S)` expanded; the weights are constant along `M` because
/// `t = |v|²` is.
fn dot_ds(c: &PointContext, f: &NormalField, a: usize, x: &DVector<f64>) -> Terms {
    let w = &c.weights;
    let u = &c.point.u;
    let du = c.w(a);
    let xb = &f.h * w.b2() + &f.v * w.b1();
    let dxb = &f.dh[a] * w.b2() + &f.dv[a] * w.b1();
    let mut t = Terms::new();
    t.push(w.a2() * c.g(x, &f.dh[a]));
    t.push(w.a1() * c.g(x, &f.dv[a]));
    t.push(c.g(&du, &xb) * c.g(u, x));
    t.push(c.g(u, &dxb) * c.g(u, x));
    t.push(c.g(u, &xb) * c.g(&du, x));
    t
}

fn pair_terms(c: &PointContext, pairs: &[(f64, &DVector<f64>, &DVector<f64>)]) -> Terms {
    let mut t = Terms::new();
    for (k, x, y) in pairs {
        t.push(k * c.g(x, y));
    }
    t
}

/// The normal-vector identity suite.
pub fn check_normal_identities(c: &PointContext, rec: &mut Recorder) {
    if c.point.v.amax() == 0.0 {
        rec.skip("normal.*", "needs u != 0");
        return;
    }
    let (m, k) = (c.m(), c.codim());
    let w = &c.weights;
    let u = &c.point.u;
    for (i, f) in c.normals.iter().enumerate() {
        let (h, v) = (&f.h, &f.v);
        let nu = [("nu", i)];
        rec.vanish("normal.u-s", &label(&nu), &dot_s(c, f, u));
        for x in 0..k {
            let l = label(&[("nu", i), ("x", x)]);
            rec.vanish("normal.eta-s", &l, &dot_s(c, f, &c.point.eta(x)));
        }
        for a in 0..m {
            let la = label(&[("nu", i), ("a", a)]);
            let (da, ma, na) = (c.point.delta(a), c.point.m_vec(a), c.point.n_vec(a));
            rec.vanish("normal.n-s", &la, &dot_s(c, f, &na));
            rec.vanish("normal.u-ds", &la, &dot_ds(c, f, a, u));
            rec.vanish("normal.du-s", &la, &dot_s(c, f, &c.w(a)));
            rec.vanish("normal.delta-weights", &la, &pair_terms(c, &[(w.big_a(), &da, h), (w.a2(), &da, v)]));
            rec.vanish("normal.m-weights", &la, &pair_terms(c, &[(w.a2(), &ma, h), (w.a1(), &ma, v)]));
            rec.vanish(
                "normal.delta-weight-derivatives",
                &la,
                &pair_terms(c, &[(w.big_a_prime(), &da, h), (w.da[1], &da, v)]),
            );
            rec.vanish(
                "normal.m-weight-derivatives",
                &la,
                &pair_terms(c, &[(w.da[1], &ma, h), (w.da[0], &ma, v)]),
            );
            for x in 0..k {
                let l = label(&[("nu", i), ("a", a), ("x", x)]);
                let eta = c.point.eta(x);
                rec.vanish("normal.deta-s", &l, &dot_s(c, f, &c.deta[a][x]));
                rec.vanish("normal.eta-ds", &l, &dot_ds(c, f, a, &eta));
            }
            for b in 0..m {
                let l = label(&[("nu", i), ("a", a), ("b", b)]);
                let (db, mb, nb) = (c.point.delta(b), c.point.m_vec(b), c.point.n_vec(b));
                rec.vanish("normal.n-ds", &l, &dot_ds(c, f, a, &nb));
                rec.vanish("normal.dn-s", &l, &dot_s(c, f, &c.dn[a][b]));
                rec.vanish("normal.mm", &l, &pair_terms(c, &[(1.0, &mb, &ma), (1.0, u, &c.dm[a][b])]));
                rec.vanish("normal.m-delta", &l, &pair_terms(c, &[(1.0, &mb, &da), (1.0, u, &c.ddelta[b][a])]));
                for x in 0..k {
                    let l = label(&[("nu", i), ("a", a), ("b", b), ("x", x)]);
                    let eta = c.point.eta(x);
                    rec.vanish(
                        "normal.eta-delta",
                        &l,
                        &pair_terms(c, &[(1.0, &c.deta[a][x], &db), (1.0, &eta, &c.ddelta[a][b])]),
                    );
                }
            }
        }
        if k < 2 {
            continue;
        }
        let lin = |ch: f64, cv: f64, x: &DVector<f64>| pair_terms(c, &[(ch, x, h), (cv, x, v)]);
        let l = label(&nu);
        rec.vanish("normal.x-u", &l, &lin(w.b2(), w.b1(), u));
        rec.vanish("normal.y-u", &l, &lin(w.db[1], w.db[0], u));
        rec.vanish("normal.z-u", &l, &lin(w.da[1], w.da[0], u));
        for x in 0..k {
            let l = label(&[("nu", i), ("x", x)]);
            let eta = c.point.eta(x);
            rec.vanish("normal.x-eta", &l, &lin(w.b2(), w.b1(), &eta));
            rec.vanish("normal.y-eta", &l, &lin(w.db[1], w.db[0], &eta));
            rec.vanish("normal.z-eta", &l, &lin(w.da[1], w.da[0], &eta));
            rec.vanish("normal.eta-a", &l, &lin(w.a2(), w.a1(), &eta));
        }
        let s = s_vector(c, f);
        let reduced = h * w.a2() + v * w.a1();
        let d = &s - &reduced;
        let norm = |z: &DVector<f64>| c.g(z, z).max(0.0).sqrt();
        rec.record("normal.s-reduced", &l, norm(&d), norm(&s).max(norm(&reduced)));
    }
    if k < 2 {
        for name in [
            "normal.x-u",
            "normal.x-eta",
            "normal.y-eta",
            "normal.y-u",
            "normal.z-eta",
            "normal.z-u",
            "normal.eta-a",
            "normal.s-reduced",
        ] {
            rec.skip(name, HYPERSURFACE);
        }
    }
}

/// Tangency of the `H` and `V` parts of every normal when `a₂b₁ − a₁b₂ ≠ 0`.
pub fn check_tangency(c: &PointContext, rec: &mut Recorder) {
    if c.codim() < 2 {
        rec.skip("tangency.*", HYPERSURFACE);
        return;
    }
    let w = &c.weights;
    let det = w.a2() * w.b1() - w.a1() * w.b2();
    if det.abs() < 1e-10 {
        rec.skip("tangency.*", "a2 b1 - a1 b2 = 0 for this family");
        return;
    }
    for (i, f) in c.normals.iter().enumerate() {
        let nh = c.g(&f.h, &f.h).max(0.0).sqrt();
        let nv = c.g(&f.v, &f.v).max(0.0).sqrt();
        for x in 0..c.codim() {
            let l = label(&[("nu", i), ("x", x)]);
            let eta = c.point.eta(x);
            rec.record("tangency.h", &l, c.g(&f.h, &eta), nh);
            rec.record("tangency.v", &l, c.g(&f.v, &eta), nv);
        }
    }
}

/// The explicit normal of the circle lift whose parts are not tangent.
pub fn check_circle_counterexample(metric: &GNaturalMetric, c: &PointContext, rec: &mut Recorder) {
    const NAMES: &str = "counterexample.circle.*";
    if c.point.scenario.name() != "circle" {
        rec.skip(NAMES, "defined for the circle scenario only");
        return;
    }
    if !metric.family.b.iter().all(|b| b.is_zero()) {
        rec.skip(NAMES, "needs b1 = b2 = b3 = 0");
        return;
    }
    let w = &c.weights;
    let vv = c.point.v[0];
    let (a1, a2, big_a) = (w.a1(), w.a2(), w.big_a());
    if a2.abs() < WEIGHT_EPS {
        rec.skip(NAMES, "needs a2 != 0");
        return;
    }
    if (big_a + vv * a2).abs() < WEIGHT_EPS {
        rec.skip(NAMES, "needs A + v a2 != 0");
        return;
    }
    let (gamma, delta) = (1.0, 1.0);
    let alpha = -(a2 + vv * a1) / (big_a + vv * a2) * gamma;
    let beta = -a1 / a2 * delta;
    let s = c.point.delta(0);
    let n = c.point.eta(0);
    let h = &s * alpha + &n * beta;
    let v = &s * gamma + &n * delta;
    let z = match lift(&h, &v, &c.point.bundle_point(), &c.point.gamma) {
        Ok(z) => z,
        Err(e) => {
            rec.skip(NAMES, e.to_string());
            return;
        }
    };
    let gz = &c.gm * &z.0;
    let elementwise_scale = |col: &DVector<f64>| col.component_mul(&gz).amax();
    let dt = &c.frame.vectors[0].0;
    let dv = &c.frame.vectors[1].0;
    rec.record("counterexample.circle.dt", "", dt.dot(&gz), elementwise_scale(dt));
    rec.record("counterexample.circle.dv", "", dv.dot(&gz), elementwise_scale(dv));
    if a1.abs() < WEIGHT_EPS {
        rec.skip("counterexample.circle.normal-parts", "a1 = 0 forces beta = 0");
        return;
    }
    let parts = (c.g(&h, &n) - beta).abs() + (c.g(&v, &n) - delta).abs();
    rec.record("counterexample.circle.normal-parts", "", parts, 0.0);
}

fn orthonormal_columns(m: &DMatrix<f64>) -> DMatrix<f64> {
    m.clone().qr().q()
}

/// The spanning set for `a₂ = b₂ = 0` families against the computed normal space.
pub fn check_special_basis(metric: &GNaturalMetric, c: &PointContext, rec: &mut Recorder) {
    let basis = match special_normal_basis(metric, &c.point) {
        Ok(b) => b,
        Err(e) => {
            rec.skip("special-basis.*", e.to_string());
            return;
        }
    };
    for (i, s) in basis.iter().enumerate() {
        let gs = &c.gm * &s.0;
        for (alpha, z) in c.frame.vectors.iter().enumerate() {
            let (k, j) = slot(c, alpha);
            let l = format!("s={i},{k}={j}");
            rec.record("special-basis.orthogonality", &l, z.0.dot(&gs), z.0.component_mul(&gs).amax());
        }
    }
    let normals = DMatrix::from_columns(&c.normals.iter().map(|f| f.nu.0.clone()).collect::<Vec<_>>());
    let q = orthonormal_columns(&normals);
    for (i, s) in basis.iter().enumerate() {
        let norm = s.0.norm();
        let off = &s.0 - &q * (q.transpose() * &s.0);
        rec.record("special-basis.span", &format!("s={i}"), off.norm() / norm, 0.0);
    }
    let cols: Vec<DVector<f64>> = basis.iter().map(|s| &s.0 / s.0.norm()).collect();
    let sv = DMatrix::from_columns(&cols).singular_values();
    let smallest = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let rank_gap = if smallest > RANK_FLOOR { 0.0 } else { 1.0 };
    rec.record("special-basis.span", "rank", rank_gap, 0.0);
}

/// Closed forms for `G(ν, H̃)` against the numerical connection; curvature sign `sigma`.
pub fn check_closed_forms(c: &PointContext, rec: &mut Recorder, sigma: f64) {
    if c.codim() < 2 {
        rec.skip("sff.*", HYPERSURFACE);
        return;
    }
    let (m, k) = (c.m(), c.codim());
    for (i, f) in c.normals.iter().enumerate() {
        for x in 0..k {
            for y in 0..k {
                let l = label(&[("nu", i), ("x", x), ("y", y)]);
                let lhs = c.big_g(&c.nabla[m + x][m + y].0, &f.nu.0);
                rec.compare("sff.vert-vert", &l, &cf::sff_vert_vert(c, f, x, y), lhs);
            }
            for a in 0..m {
                let l = label(&[("nu", i), ("x", x), ("a", a)]);
                let lhs = c.big_g(&c.nabla[m + x][a].0, &f.nu.0);
                rec.compare("sff.vert-base", &l, &cf::sff_vert_base(c, f, x, a, sigma), lhs);
            }
        }
        for a in 0..m {
            for b in 0..m {
                let l = label(&[("nu", i), ("a", a), ("b", b)]);
                let lhs = c.big_g(&c.nabla[a][b].0, &f.nu.0);
                let third = cf::sff_base_base(c, f, a, b, sigma);
                rec.compare("sff.base-base", &l, &third, lhs);
                match cf::sff_base_base_rewritten(c, f, a, b, sigma) {
                    Ok(alt) => rec.record(
                        "sff.base-base-rewritten",
                        &l,
                        alt.value() - third.value(),
                        alt.scale().max(third.scale()),
                    ),
                    Err(e) => rec.skip("sff.base-base-rewritten", e.to_string()),
                }
            }
        }
    }
}

/// Totally geodesic vertical distribution and mixed totally geodesic clauses.
pub fn check_geodesic_distributions(metric: &GNaturalMetric, c: &PointContext, rec: &mut Recorder) {
    if c.codim() < 2 {
        rec.skip("geodesic.*", HYPERSURFACE);
        return;
    }
    let (m, k) = (c.m(), c.codim());
    for x in 0..k {
        for y in 0..k {
            let l = label(&[("x", x), ("y", y)]);
            match (
                frame_second_derivative(&c.point, m + x, m + y),
                frame_second_derivative(&c.point, m + y, m + x),
            ) {
                (Ok(p), Ok(q)) => rec.record("geodesic.involutive", &l, (p - q).amax(), 0.0),
                (Err(e), _) | (_, Err(e)) => rec.skip("geodesic.involutive", e.to_string()),
            }
        }
    }
    let w = &c.weights;
    let fam = &metric.family;
    let mixed = |rec: &mut Recorder, base: &str| {
        for (i, f) in c.normals.iter().enumerate() {
            for x in 0..k {
                for a in 0..m {
                    let l = label(&[("nu", i), ("x", x), ("a", a)]);
                    rec.record(base, &l, c.big_g(&c.nabla[m + x][a].0, &f.nu.0), 0.0);
                }
            }
        }
    };
    if w.b2().abs() < WEIGHT_EPS && w.da[1].abs() < WEIGHT_EPS {
        for (i, f) in c.normals.iter().enumerate() {
            for x in 0..k {
                for y in 0..k {
                    let l = label(&[("nu", i), ("x", x), ("y", y)]);
                    rec.record("geodesic.vertical", &l, c.big_g(&c.nabla[m + x][m + y].0, &f.nu.0), 0.0);
                }
            }
        }
    } else {
        rec.skip("geodesic.vertical", "needs b2 = a2' = 0");
    }
    if fam.a[0].is_zero() && fam.b[1].is_zero() && fam.a[1].is_constant() && w.a2().abs() > WEIGHT_EPS {
        mixed(rec, "geodesic.mixed-flat-weights");
    } else {
        rec.skip("geodesic.mixed-flat-weights", "needs a1 = 0, b2 = 0, a2 = const != 0");
    }
    if c.point.scenario.constant_curvature().is_none() {
        rec.skip("geodesic.mixed-constant-curvature", "ambient curvature is not known to be constant");
    } else if fam.b[1].is_zero() && fam.a[1].is_constant() {
        mixed(rec, "geodesic.mixed-constant-curvature");
    } else {
        rec.skip("geodesic.mixed-constant-curvature", "needs a2' = 0, b2 = 0");
    }
}

/// Frame assembled from lifts against the chart derivative of the lift, and
/// `∇_{δ_a}u = M_a + N_a`.
pub fn check_lift(c: &PointContext, rec: &mut Recorder) {
    match lift_frame(&c.point) {
        Ok(assembled) => {
            for (alpha, (z, d)) in assembled.vectors.iter().zip(&c.frame.vectors).enumerate() {
                let (k, j) = slot(c, alpha);
                rec.record("lift.frame-consistency", &format!("{k}={j}"), (&z.0 - &d.0).amax(), d.0.amax());
            }
        }
        Err(e) => rec.skip("lift.frame-consistency", e.to_string()),
    }
    for a in 0..c.m() {
        let direct = c.point.nabla_u(a);
        let split = c.w(a);
        rec.record("lift.nabla-u-split", &format!("a={a}"), (&direct - &split).amax(), direct.amax());
    }
}
