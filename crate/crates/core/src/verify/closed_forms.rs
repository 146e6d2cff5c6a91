//! Term-by-term evaluation of the closed-form expressions for
//! `G(∇̃_{∂_α}∂_β, ν)`, `G(∇̃_{∂_α}ν, ∂_β)` and the identities derived from them.
//!
//! Index conventions: `x, y` index normals of `M` (fiber coordinates), `a, b`
//! index coordinates of `M`. `sigma` multiplies every curvature term.

use nalgebra::DVector;

use super::context::{NormalField, PointContext};
use crate::error::Result;

/// A sum kept as its terms so that residuals can be judged against the
/// largest one.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Terms(Vec<f64>);

impl Terms {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, term: f64) {
        self.0.push(term);
    }

    pub fn value(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn scale(&self) -> f64 {
        self.0.iter().fold(0.0, |m, t| m.max(t.abs()))
    }

    pub fn terms(&self) -> &[f64] {
        &self.0
    }
}

/// Shorthands for one `(point, normal)` pair.
struct Ing<'a> {
    c: &'a PointContext,
    f: &'a NormalField,
    sigma: f64,
    u: &'a DVector<f64>,
}

impl<'a> Ing<'a> {
    fn new(c: &'a PointContext, f: &'a NormalField, sigma: f64) -> Self {
        Self { c, f, sigma, u: &c.point.u }
    }
    fn g(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        self.c.g(a, b)
    }
    fn r(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>, w: &DVector<f64>) -> f64 {
        self.sigma * self.c.curvature.eval(x, y, z, w)
    }
    fn eta(&self, x: usize) -> DVector<f64> {
        self.c.point.eta(x)
    }
    fn delta(&self, a: usize) -> DVector<f64> {
        self.c.point.delta(a)
    }
    fn mv(&self, a: usize) -> DVector<f64> {
        self.c.point.m_vec(a)
    }
    fn nv(&self, a: usize) -> DVector<f64> {
        self.c.point.n_vec(a)
    }
    fn h(&self) -> &DVector<f64> {
        &self.f.h
    }
    fn v(&self) -> &DVector<f64> {
        &self.f.v
    }
    fn lin(&self, ch: f64, cv: f64) -> DVector<f64> {
        self.h() * ch + self.v() * cv
    }
}

/// `G(∇̃_{∂_x}∂_y, H^h+V^v)`.
pub fn display_vert_vert(c: &PointContext, f: &NormalField, x: usize, y: usize) -> Terms {
    let i = Ing::new(c, f, 1.0);
    let w = &c.weights;
    let (a1p, a2p, b1p, b2p) = (w.da[0], w.da[1], w.db[0], w.db[1]);
    let (b1, b2) = (w.b1(), w.b2());
    let (ex, ey, u, h, v) = (i.eta(x), i.eta(y), i.u, i.h(), i.v());
    let mut t = Terms::new();
    t.push(b2 * i.g(&ex, &ey) * i.g(u, h));
    t.push((b1 - a1p) * i.g(&ex, &ey) * i.g(u, v));
    t.push(a1p * i.g(&ex, v) * i.g(u, &ey));
    t.push(a1p * i.g(&ey, v) * i.g(u, &ex));
    t.push((a2p + b2 / 2.0) * (i.g(&ex, h) * i.g(u, &ey) + i.g(&ey, h) * i.g(u, &ex)));
    t.push(i.g(u, &ex) * i.g(u, &ey) * i.g(u, &i.lin(2.0 * b2p, b1p)));
    t
}

/// `G(∇̃_{∂_x}(H^h+V^v), ∂_y)`.
pub fn display_vert_vert_partner(c: &PointContext, f: &NormalField, x: usize, y: usize) -> Terms {
    let i = Ing::new(c, f, 1.0);
    let w = &c.weights;
    let (a1p, a2p, b1p) = (w.da[0], w.da[1], w.db[0]);
    let (b1, b2) = (w.b1(), w.b2());
    let (ex, ey, u, h, v) = (i.eta(x), i.eta(y), i.u, i.h(), i.v());
    let mut t = Terms::new();
    t.push((b1 - a1p) * i.g(&ex, v) * i.g(u, &ey));
    t.push(a1p * i.g(&ey, v) * i.g(u, &ex));
    t.push(a1p * i.g(&ex, &ey) * i.g(u, v));
    t.push((a2p - b2 / 2.0) * (i.g(&ey, h) * i.g(u, &ex) - i.g(&ex, h) * i.g(u, &ey)));
    t.push(b1p * i.g(u, &ex) * i.g(u, &ey) * i.g(u, v));
    t
}

/// `g(u,η_x)g(η_y,T) − g(u,η_y)g(η_x,T)` with `T = (b₁′−2a₁′)V + (b₂′−2a₂′)H`.
pub fn consequence_vert_vert(c: &PointContext, f: &NormalField, x: usize, y: usize) -> Terms {
    let i = Ing::new(c, f, 1.0);
    let w = &c.weights;
    let tt = i.lin(w.db[1] - 2.0 * w.da[1], w.db[0] - 2.0 * w.da[0]);
    let (ex, ey, u) = (i.eta(x), i.eta(y), i.u);
    let mut t = Terms::new();
    t.push(i.g(u, &ex) * i.g(&ey, &tt));
    t.push(-i.g(u, &ey) * i.g(&ex, &tt));
    t
}

/// `G(∇̃_{∂_x}∂_a, H^h+V^v)`.
pub fn display_vert_base(c: &PointContext, f: &NormalField, x: usize, a: usize, sigma: f64) -> Terms {
    let i = Ing::new(c, f, sigma);
    let w = &c.weights;
    let (a1p, a2p, b1p, b2p) = (w.da[0], w.da[1], w.db[0], w.db[1]);
    let (a1, b1, b2, ap) = (w.a1(), w.b1(), w.b2(), w.big_a_prime());
    let (ex, da, na, u, h, v) = (i.eta(x), i.delta(a), i.nv(a), i.u, i.h(), i.v());
    let wa = c.w(a);
    let mut t = Terms::new();
    t.push(-0.5 * a1 * i.r(h, &da, u, &ex));
    t.push(ap * i.g(h, &da) * i.g(u, &ex));
    t.push((a2p - b2 / 2.0) * i.g(v, &da) * i.g(u, &ex));
    t.push((b1 - a1p) * i.g(u, v) * i.g(&na, &ex));
    t.push(b2 * i.g(u, h) * i.g(&na, &ex));
    t.push(a1p * i.g(u, &ex) * i.g(v, &wa));
    t.push(a1p * i.g(u, &na) * i.g(v, &ex));
    t.push((a2p + b2 / 2.0) * (i.g(h, &wa) * i.g(u, &ex) + i.g(h, &ex) * i.g(u, &na)));
    t.push(i.g(u, &i.lin(2.0 * b2p, b1p)) * i.g(u, &ex) * i.g(u, &na));
    t
}

/// `G(∇̃_{∂_x}(H^h+V^v), ∂_a)`.
pub fn display_vert_base_partner(c: &PointContext, f: &NormalField, x: usize, a: usize, sigma: f64) -> Terms {
    let i = Ing::new(c, f, sigma);
    let w = &c.weights;
    let (a1p, a2p, b1p) = (w.da[0], w.da[1], w.db[0]);
    let (a1, b1, b2, ap) = (w.a1(), w.b1(), w.b2(), w.big_a_prime());
    let (ex, da, na, u, h, v) = (i.eta(x), i.delta(a), i.nv(a), i.u, i.h(), i.v());
    let wa = c.w(a);
    let mut t = Terms::new();
    t.push(0.5 * a1 * i.r(h, &da, u, &ex));
    t.push((b1 - a1p) * i.g(u, &na) * i.g(v, &ex));
    t.push(a1p * i.g(u, &ex) * i.g(v, &wa));
    t.push(a1p * i.g(u, v) * i.g(&na, &ex));
    t.push((a2p + b2 / 2.0) * i.g(u, &ex) * i.g(v, &da));
    t.push((a2p - b2 / 2.0) * (i.g(h, &wa) * i.g(u, &ex) - i.g(h, &ex) * i.g(u, &na)));
    t.push(ap * i.g(h, &da) * i.g(u, &ex));
    t.push(b1p * i.g(u, &ex) * i.g(u, &na) * i.g(u, v));
    t
}

/// The identity obtained by adding the two mixed displays.
pub fn consequence_vert_base(c: &PointContext, f: &NormalField, x: usize, a: usize) -> Terms {
    let i = Ing::new(c, f, 1.0);
    let w = &c.weights;
    let (ex, da, na, u) = (i.eta(x), i.delta(a), i.nv(a), i.u);
    let wa = c.w(a);
    let mut t = Terms::new();
    t.push(i.g(u, &i.lin(w.b2(), w.b1())) * i.g(&na, &ex));
    t.push(2.0 * i.g(u, &ex) * i.g(&i.lin(w.big_a_prime(), w.da[1]), &da));
    t.push(2.0 * i.g(u, &ex) * i.g(&i.lin(w.da[1], w.da[0]), &wa));
    t.push(i.g(u, &na) * i.g(&i.lin(w.b2(), w.b1()), &ex));
    t.push(i.g(u, &na) * 2.0 * i.g(u, &ex) * i.g(&i.lin(w.db[1], w.db[0]), u));
    t
}

/// `G((∇_{δ_a}η_x)^v, H^h+V^v)`.
pub fn consequence_base_vert(c: &PointContext, f: &NormalField, a: usize, x: usize) -> Result<Terms> {
    let i = Ing::new(c, f, 1.0);
    let w = &c.weights;
    let d = &c.deta[a][x];
    let u = i.u;
    let mut t = Terms::new();
    t.push(w.a2() * i.g(d, i.h()));
    t.push(w.b2() * i.g(d, u) * i.g(i.h(), u));
    t.push(w.a1() * i.g(d, i.v()));
    t.push(w.b1() * i.g(d, u) * i.g(i.v(), u));
    // same quantity through the metric blocks, as a guard on the expansion
    let zero = DVector::zeros(d.len());
    let direct = c.pair(&zero, d, i.h(), i.v())?;
    debug_assert!((direct - t.value()).abs() <= 1e-9 * t.scale().max(1.0));
    Ok(t)
}

/// `G(∇̃_{∂_a}(H^h+V^v), ∂_x)`.
pub fn display_base_vert_partner(c: &PointContext, f: &NormalField, a: usize, x: usize, sigma: f64) -> Terms {
    let i = Ing::new(c, f, sigma);
    let w = &c.weights;
    let (a1p, a2p, b1p) = (w.da[0], w.da[1], w.db[0]);
    let (a1, a2, b1, b2, ap) = (w.a1(), w.a2(), w.b1(), w.b2(), w.big_a_prime());
    let (ex, da, na, u, h, v) = (i.eta(x), i.delta(a), i.nv(a), i.u, i.h(), i.v());
    let wa = c.w(a);
    let (dh, dv) = (&f.dh[a], &f.dv[a]);
    let mut t = Terms::new();
    t.push(0.5 * a1 * i.r(h, &da, u, &ex));
    t.push(a1 * i.g(&ex, dv));
    t.push(b1 * i.g(u, &ex) * i.g(u, dv));
    t.push(a2 * i.g(&ex, dh));
    t.push(b2 * i.g(u, &ex) * i.g(u, dh));
    t.push(-ap * i.g(u, &ex) * i.g(h, &da));
    t.push((b1 - a1p) * i.g(u, &ex) * i.g(v, &wa));
    t.push(a1p * i.g(u, &na) * i.g(v, &ex));
    t.push(a1p * i.g(u, v) * i.g(&na, &ex));
    t.push(
        (a2p - b2 / 2.0)
            * (i.g(h, &ex) * i.g(u, &na) - i.g(h, &wa) * i.g(u, &ex) - i.g(u, &ex) * i.g(v, &da)),
    );
    t.push(b1p * i.g(u, v) * i.g(u, &na) * i.g(u, &ex));
    t
}

/// Curvature terms shared by the base-base displays:
/// `a₂R(H,δ_b,u,δ_a) + ½a₁[R(H,δ_a,u,W_b) + R(H,δ_b,u,W_a) + R(u,V,δ_a,δ_b)]`.
fn base_base_curvature(i: &Ing, a: usize, b: usize) -> [f64; 4] {
    let w = &i.c.weights;
    let (da, db, u, h, v) = (i.delta(a), i.delta(b), i.u, i.h(), i.v());
    let (wa, wb) = (i.c.w(a), i.c.w(b));
    [
        w.a2() * i.r(h, &db, u, &da),
        0.5 * w.a1() * i.r(h, &da, u, &wb),
        0.5 * w.a1() * i.r(h, &db, u, &wa),
        0.5 * w.a1() * i.r(u, v, &da, &db),
    ]
}

/// `G(∇̃_{∂_a}∂_b, H^h+V^v)`.
pub fn display_base_base(c: &PointContext, f: &NormalField, a: usize, b: usize, sigma: f64) -> Terms {
    let i = Ing::new(c, f, sigma);
    let w = &c.weights;
    let (a1, a2, b1, b2) = (w.a1(), w.a2(), w.b1(), w.b2());
    let (big_a, big_b, ap) = (w.big_a(), w.big_b(), w.big_a_prime());
    let (a1p, a2p, b1p, b2p) = (w.da[0], w.da[1], w.db[0], w.db[1]);
    let (da, db, u, h, v) = (i.delta(a), i.delta(b), i.u, i.h(), i.v());
    let (ma, mb, na, nb) = (i.mv(a), i.mv(b), i.nv(a), i.nv(b));
    let (wa, wb) = (c.w(a), c.w(b));
    let ddab = &c.ddelta[a][b];
    let dwab = c.dw(a, b);
    let mut t = Terms::new();
    for r in base_base_curvature(&i, a, b) {
        t.push(-r);
    }
    t.push(i.g(&i.lin(big_a, a2), ddab));
    t.push(i.g(&i.lin(big_b, b2), u) * i.g(u, ddab));
    t.push(0.5 * big_b * i.g(h, u) * (i.g(&ma, &db) + i.g(&mb, &da)));
    t.push(i.g(&i.lin(a2, a1), &dwab));
    t.push(i.g(&i.lin(b2, b1), u) * i.g(u, &dwab));
    t.push(i.g(&i.lin(b2, b1 - a1p), u) * (i.g(&ma, &mb) + i.g(&na, &nb)));
    t.push(ap * (i.g(h, &da) * i.g(u, &nb) + i.g(h, &db) * i.g(u, &na) - i.g(v, u) * i.g(&da, &db)));
    t.push(a1p * i.g(u, &na) * i.g(v, &wb));
    t.push(a1p * i.g(u, &nb) * i.g(v, &wa));
    t.push(
        (a2p - b2 / 2.0)
            * (i.g(u, &nb) * i.g(v, &da) + i.g(u, &na) * i.g(v, &db)
                - i.g(u, v) * (i.g(&mb, &da) + i.g(&ma, &db))),
    );
    t.push((a2p + b2 / 2.0) * (i.g(h, &wa) * i.g(u, &nb) + i.g(h, &wb) * i.g(u, &na)));
    t.push(i.g(u, &i.lin(2.0 * b2p, b1p)) * i.g(u, &na) * i.g(u, &nb));
    t
}

/// `G(∇̃_{∂_a}(H^h+V^v), ∂_b)`.
pub fn display_base_base_partner(c: &PointContext, f: &NormalField, a: usize, b: usize, sigma: f64) -> Terms {
    let i = Ing::new(c, f, sigma);
    let w = &c.weights;
    let (a1, a2, b1, b2) = (w.a1(), w.a2(), w.b1(), w.b2());
    let (big_a, big_b, ap) = (w.big_a(), w.big_b(), w.big_a_prime());
    let (a1p, a2p, b1p) = (w.da[0], w.da[1], w.db[0]);
    let (da, db, u, h, v) = (i.delta(a), i.delta(b), i.u, i.h(), i.v());
    let (ma, mb, na, nb) = (i.mv(a), i.mv(b), i.nv(a), i.nv(b));
    let (wa, wb) = (c.w(a), c.w(b));
    let (dh, dv) = (&f.dh[a], &f.dv[a]);
    let mut t = Terms::new();
    for r in base_base_curvature(&i, a, b) {
        t.push(r);
    }
    t.push(big_a * i.g(&db, dh));
    t.push(a2 * i.g(&db, dv));
    t.push(a2 * i.g(&wb, dh));
    t.push(a1 * i.g(&wb, dv));
    t.push(0.5 * big_b * i.g(h, u) * (i.g(&ma, &db) - i.g(&mb, &da)));
    t.push(i.g(u, &nb) * (b2 * i.g(u, dh) + b1 * i.g(u, dv)));
    t.push(ap * (-i.g(h, &da) * i.g(u, &nb) + i.g(h, &db) * i.g(u, &na) + i.g(v, u) * i.g(&da, &db)));
    t.push((b1 - a1p) * i.g(u, &nb) * i.g(v, &wa));
    t.push(a1p * i.g(u, &na) * i.g(v, &wb));
    t.push(a1p * i.g(v, u) * (i.g(&ma, &mb) + i.g(&na, &nb)));
    t.push((a2p - b2 / 2.0) * (i.g(u, v) * i.g(&mb, &da) - i.g(u, &nb) * i.g(v, &da)));
    t.push((a2p + b2 / 2.0) * (i.g(u, v) * i.g(&ma, &db) + i.g(u, &na) * i.g(v, &db)));
    t.push((a2p - b2 / 2.0) * (-i.g(h, &wa) * i.g(u, &nb) + i.g(h, &wb) * i.g(u, &na)));
    t.push(b1p * i.g(u, v) * i.g(u, &na) * i.g(u, &nb));
    t
}

/// The identity obtained by adding the two base-base displays.
pub fn consequence_base_base(c: &PointContext, f: &NormalField, a: usize, b: usize) -> Terms {
    let i = Ing::new(c, f, 1.0);
    let w = &c.weights;
    let (a1, a2, b1, b2) = (w.a1(), w.a2(), w.b1(), w.b2());
    let (big_a, big_b, ap) = (w.big_a(), w.big_b(), w.big_a_prime());
    let (a1p, a2p, b1p, b2p) = (w.da[0], w.da[1], w.db[0], w.db[1]);
    let (db, u) = (i.delta(b), i.u);
    let (ma, mb, na, nb) = (i.mv(a), i.mv(b), i.nv(a), i.nv(b));
    let (wa, wb) = (c.w(a), c.w(b));
    let (dh, dv) = (&f.dh[a], &f.dv[a]);
    let ddab = &c.ddelta[a][b];
    let dwab = c.dw(a, b);
    let bh = i.lin(big_b, b2);
    let xb = i.lin(b2, b1);
    let mut t = Terms::new();
    t.push(i.g(&i.lin(big_a, a2), ddab));
    t.push(i.g(&bh, u) * i.g(u, ddab));
    t.push(i.g(&i.lin(a2, a1), &dwab));
    t.push(a2 * i.g(&wb, dh));
    t.push(a1 * i.g(&wb, dv));
    t.push(big_a * i.g(&db, dh));
    t.push(a2 * i.g(&db, dv));
    t.push(i.g(&bh, u) * i.g(&ma, &db));
    t.push(i.g(u, &xb) * i.g(u, &dwab));
    t.push(i.g(u, &nb) * (b1 * i.g(u, dv) + b2 * i.g(u, dh) + i.g(&xb, &wa)));
    t.push(i.g(u, &xb) * (i.g(&ma, &mb) + i.g(&na, &nb)));
    t.push(
        2.0 * i.g(u, &na)
            * (i.g(&i.lin(ap, a2p), &db) + i.g(&i.lin(a2p, a1p), &wb) + i.g(u, &nb) * i.g(&i.lin(b2p, b1p), u)),
    );
    t
}

/// Closed form for `G(ν, H̃(∂_x, ∂_y))`.
pub fn sff_vert_vert(c: &PointContext, f: &NormalField, x: usize, y: usize) -> Terms {
    let i = Ing::new(c, f, 1.0);
    let w = &c.weights;
    let (ex, ey, u, h) = (i.eta(x), i.eta(y), i.u, i.h());
    let mut t = Terms::new();
    t.push(w.b2() / 2.0 * i.g(u, &ex) * i.g(h, &ey));
    t.push(w.b2() / 2.0 * i.g(u, &ey) * i.g(h, &ex));
    t.push(w.da[1] * i.g(&ex, &ey) * i.g(h, u));
    t.push(w.db[1] * i.g(u, &ex) * i.g(u, &ey) * i.g(h, u));
    t
}

/// Closed form for `G(ν, H̃(∂_x, ∂_a))`.
pub fn sff_vert_base(c: &PointContext, f: &NormalField, x: usize, a: usize, sigma: f64) -> Terms {
    let i = Ing::new(c, f, sigma);
    let w = &c.weights;
    let (ex, da, na, u, h, v) = (i.eta(x), i.delta(a), i.nv(a), i.u, i.h(), i.v());
    let wa = c.w(a);
    let b2 = w.b2();
    let mut t = Terms::new();
    // g[H, R(u,η_x)δ_a] = R(u, η_x, δ_a, H)
    t.push(0.5 * w.a1() * i.r(u, &ex, &da, h));
    t.push(b2 / 2.0 * i.g(u, &na) * i.g(h, &ex));
    t.push(b2 / 2.0 * i.g(u, &ex) * i.g(h, &wa));
    t.push(w.da[1] * i.g(&na, &ex) * i.g(h, u));
    t.push(w.db[1] * i.g(u, &ex) * i.g(u, &na) * i.g(h, u));
    t.push(-b2 / 2.0 * i.g(u, &ex) * i.g(v, &da));
    t
}

/// Terms shared by the two base-base forms after their first line:
/// `−½b₂[…] + g[H, b₂/2 g(u,N_a)W_b + b₂/2 g(u,N_b)W_a] + b₂′g(u,H)g(u,N_a)g(u,N_b)`.
fn base_base_tail(i: &Ing, a: usize, b: usize, t: &mut Terms) {
    let w = &i.c.weights;
    let b2 = w.b2();
    let (da, db, u, h, v) = (i.delta(a), i.delta(b), i.u, i.h(), i.v());
    let (na, nb) = (i.nv(a), i.nv(b));
    let (wa, wb) = (i.c.w(a), i.c.w(b));
    t.push(-0.5 * b2 * (i.g(u, &na) * i.g(v, &db) + i.g(u, &nb) * i.g(v, &da)));
    t.push(b2 / 2.0 * i.g(u, &na) * i.g(h, &wb));
    t.push(b2 / 2.0 * i.g(u, &nb) * i.g(h, &wa));
    t.push(w.db[1] * i.g(u, h) * i.g(u, &na) * i.g(u, &nb));
}

/// `A′g(δ_a,δ_b) + a₁′(g(M_a,M_b)+g(N_a,N_b)) + 2a₂g(M_a,δ_b)`.
fn base_base_bracket(i: &Ing, a: usize, b: usize) -> f64 {
    let w = &i.c.weights;
    let (da, db) = (i.delta(a), i.delta(b));
    let (ma, mb, na, nb) = (i.mv(a), i.mv(b), i.nv(a), i.nv(b));
    w.big_a_prime() * i.g(&da, &db) + w.da[0] * (i.g(&ma, &mb) + i.g(&na, &nb)) + 2.0 * w.a2() * i.g(&ma, &db)
}

/// Closed form for `G(ν, H̃(∂_a, ∂_b))`.
pub fn sff_base_base(c: &PointContext, f: &NormalField, a: usize, b: usize, sigma: f64) -> Terms {
    let i = Ing::new(c, f, sigma);
    let w = &c.weights;
    let mut t = Terms::new();
    t.push(i.g(&i.lin(w.big_a(), w.a2()), &c.ddelta[a][b]));
    for r in base_base_curvature(&i, a, b) {
        t.push(-r);
    }
    t.push(i.g(&i.lin(w.a2(), w.a1()), &c.dw(a, b)));
    t.push(-i.g(i.u, i.v()) * base_base_bracket(&i, a, b));
    base_base_tail(&i, a, b, &mut t);
    t
}

/// The rewritten form of [`sff_base_base`], starting from
/// `G[H^h+V^v, (∇_{δ_a}δ_b)^h + (∇_{δ_a}∇_{δ_b}u)^v]`.
pub fn sff_base_base_rewritten(c: &PointContext, f: &NormalField, a: usize, b: usize, sigma: f64) -> Result<Terms> {
    let i = Ing::new(c, f, sigma);
    let w = &c.weights;
    let u = i.u;
    let dwab = c.dw(a, b);
    let mut t = Terms::new();
    t.push(c.pair(i.h(), i.v(), &c.ddelta[a][b], &dwab)?);
    t.push(-i.g(&i.lin(w.big_b(), w.b2()), u) * i.g(u, &dwab));
    for r in base_base_curvature(&i, a, b) {
        t.push(-r);
    }
    t.push(i.g(u, i.v()) * base_base_bracket(&i, a, b));
    base_base_tail(&i, a, b, &mut t);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gnatural::{preset_family, GNaturalMetric};
    use crate::scenarios::scenario_by_name;

    fn ctx(name: &str, family: &str, y: &[f64], v: &[f64]) -> PointContext {
        let s = scenario_by_name(name).unwrap();
        let metric = GNaturalMetric::new(s.ambient(), preset_family(family).unwrap(), 16.0).unwrap();
        PointContext::new(&metric, s, &DVector::from_column_slice(y), &DVector::from_column_slice(v)).unwrap()
    }

    fn zero_field(c: &PointContext) -> NormalField {
        let mut f = c.normals[0].clone();
        f.h.fill(0.0);
        f.v.fill(0.0);
        f.dh.iter_mut().for_each(|d| d.fill(0.0));
        f.dv.iter_mut().for_each(|d| d.fill(0.0));
        f
    }

    #[test]
    fn zero_candidate_gives_zero_everywhere() {
        let c = ctx("helix", "cheeger-gromoll", &[0.2], &[0.5, 0.4]);
        let f = zero_field(&c);
        let vals = [
            display_vert_vert(&c, &f, 0, 1).value(),
            display_vert_vert_partner(&c, &f, 0, 1).value(),
            display_vert_base(&c, &f, 0, 0, 1.0).value(),
            display_vert_base_partner(&c, &f, 1, 0, 1.0).value(),
            display_base_vert_partner(&c, &f, 0, 1, 1.0).value(),
            display_base_base(&c, &f, 0, 0, 1.0).value(),
            display_base_base_partner(&c, &f, 0, 0, 1.0).value(),
            sff_vert_vert(&c, &f, 0, 1).value(),
            sff_vert_base(&c, &f, 1, 0, 1.0).value(),
            sff_base_base(&c, &f, 0, 0, 1.0).value(),
            sff_base_base_rewritten(&c, &f, 0, 0, 1.0).unwrap().value(),
        ];
        for v in vals {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn flat_sasaki_vertical_display_vanishes() {
        let c = ctx("helix", "sasaki", &[0.7], &[1.0, -0.3]);
        for f in &c.normals {
            for x in 0..2 {
                for y in 0..2 {
                    assert_eq!(display_vert_vert(&c, f, x, y).value(), 0.0);
                }
            }
        }
    }

    #[test]
    fn terms_track_scale() {
        let mut t = Terms::new();
        t.push(3.0);
        t.push(-5.0);
        assert_eq!(t.value(), -2.0);
        assert_eq!(t.scale(), 5.0);
    }
}
