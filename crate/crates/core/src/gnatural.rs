//! g-natural metrics on the tangent bundle.
//!
//! A g-natural metric is fixed by six scalar functions `a₁,a₂,a₃,b₁,b₂,b₃` of
//! `t = g(u,u)`. On lifts at `(x,u)`:
//!
//! ```text
//! G(X^h,Y^h) = A g(X,Y) + B g(X,u)g(Y,u)        A = a₁+a₃, B = b₁+b₃
//! G(X^h,Y^v) = a₂ g(X,Y) + b₂ g(X,u)g(Y,u)
//! G(X^v,Y^v) = a₁ g(X,Y) + b₁ g(X,u)g(Y,u)
//! ```
//!
//! Weights are polynomials or ratios of polynomials in `t`, so their
//! derivatives are exact.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::diffgeo::MetricField;
use crate::error::{GeometryError, Result};

/// Zero tolerance for the non-degeneracy conditions.
pub const CLASSIFY_ZERO_TOLERANCE: f64 = 1e-10;
/// Default number of uniform samples used by [`classify`].
pub const CLASSIFY_SAMPLES: usize = 128;

/// Polynomial in `t` with ascending coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn constant(c: f64) -> Self {
        Self(vec![c])
    }

    pub fn zero() -> Self {
        Self(vec![0.0])
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Self::zero();
        }
        Self(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().skip(1).all(|&c| c == 0.0)
    }
}

/// One weight function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum WeightFn {
    Poly(Polynomial),
    Rational {
        numerator: Polynomial,
        denominator: Polynomial,
    },
}

impl WeightFn {
    pub fn constant(c: f64) -> Self {
        WeightFn::Poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn poly(coefficients: &[f64]) -> Self {
        WeightFn::Poly(Polynomial(coefficients.to_vec()))
    }

    pub fn rational(numerator: &[f64], denominator: &[f64]) -> Self {
        WeightFn::Rational {
            numerator: Polynomial(numerator.to_vec()),
            denominator: Polynomial(denominator.to_vec()),
        }
    }

    /// Value and first derivative at `t`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        match self {
            WeightFn::Poly(p) => Ok((p.eval(t), p.derivative().eval(t))),
            WeightFn::Rational {
                numerator,
                denominator,
            } => {
                let q = denominator.eval(t);
                if q.abs() < 1e-14 {
                    return Err(GeometryError::VanishingDenominator(t));
                }
                let p = numerator.eval(t);
                let dp = numerator.derivative().eval(t);
                let dq = denominator.derivative().eval(t);
                Ok((p / q, (dp * q - p * dq) / (q * q)))
            }
        }
    }

    /// Identically zero as a function.
    pub fn is_zero(&self) -> bool {
        match self {
            WeightFn::Poly(p) => p.is_zero(),
            WeightFn::Rational { numerator, .. } => numerator.is_zero(),
        }
    }

    /// Constant as a function (zero derivative everywhere).
    pub fn is_constant(&self) -> bool {
        match self {
            WeightFn::Poly(p) => p.is_constant(),
            WeightFn::Rational {
                numerator,
                denominator,
            } => numerator.is_zero() || (numerator.is_constant() && denominator.is_constant()),
        }
    }
}

/// The six weight functions `(a₁,a₂,a₃,b₁,b₂,b₃)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightFamily {
    pub name: String,
    pub a: [WeightFn; 3],
    pub b: [WeightFn; 3],
}

/// Raw weight values and derivatives at one `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightValues {
    pub t: f64,
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub da: [f64; 3],
    pub db: [f64; 3],
}

impl WeightValues {
    pub fn a1(&self) -> f64 {
        self.a[0]
    }
    pub fn a2(&self) -> f64 {
        self.a[1]
    }
    pub fn a3(&self) -> f64 {
        self.a[2]
    }
    pub fn b1(&self) -> f64 {
        self.b[0]
    }
    pub fn b2(&self) -> f64 {
        self.b[1]
    }
    pub fn b3(&self) -> f64 {
        self.b[2]
    }
    pub fn big_a(&self) -> f64 {
        self.a[0] + self.a[2]
    }
    pub fn big_b(&self) -> f64 {
        self.b[0] + self.b[2]
    }
    pub fn big_a_prime(&self) -> f64 {
        self.da[0] + self.da[2]
    }
    pub fn big_b_prime(&self) -> f64 {
        self.db[0] + self.db[2]
    }
}

/// Invariants derived from the weights at one `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedWeights {
    pub big_a: f64,
    pub big_b: f64,
    pub big_a_prime: f64,
    pub big_b_prime: f64,
    /// `a(t) = a₁(a₁+a₃) − a₂²`
    pub a: f64,
    /// `F_j(t) = a_j + t b_j`
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    /// `F(t) = F₁(F₁+F₃) − F₂²`
    pub f: f64,
}

impl WeightFamily {
    pub fn new(name: impl Into<String>, a: [WeightFn; 3], b: [WeightFn; 3]) -> Self {
        Self {
            name: name.into(),
            a,
            b,
        }
    }

    /// Constant weights.
    pub fn constants(name: impl Into<String>, a: [f64; 3], b: [f64; 3]) -> Self {
        Self::new(
            name,
            a.map(WeightFn::constant),
            b.map(WeightFn::constant),
        )
    }

    pub fn values(&self, t: f64) -> Result<WeightValues> {
        if t < 0.0 || !t.is_finite() {
            return Err(GeometryError::NegativeArgument(t));
        }
        let mut out = WeightValues {
            t,
            a: [0.0; 3],
            b: [0.0; 3],
            da: [0.0; 3],
            db: [0.0; 3],
        };
        for j in 0..3 {
            (out.a[j], out.da[j]) = self.a[j].eval(t)?;
            (out.b[j], out.db[j]) = self.b[j].eval(t)?;
        }
        Ok(out)
    }

    /// `a₂ ≡ 0` and `b₂ ≡ 0` as functions.
    pub fn has_decoupled_blocks(&self) -> bool {
        self.a[1].is_zero() && self.b[1].is_zero()
    }

    /// `b₂ ≡ 0` and `a₂′ ≡ 0`.
    pub fn has_vertical_geodesic_weights(&self) -> bool {
        self.b[1].is_zero() && self.a[1].is_constant()
    }
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

pub fn derived_from_values(w: &WeightValues) -> DerivedWeights {
    let t = w.t;
    let f1 = w.a[0] + t * w.b[0];
    let f2 = w.a[1] + t * w.b[1];
    let f3 = w.a[2] + t * w.b[2];
    DerivedWeights {
        big_a: w.big_a(),
        big_b: w.big_b(),
        big_a_prime: w.big_a_prime(),
        big_b_prime: w.big_b_prime(),
        a: w.a[0] * (w.a[0] + w.a[2]) - w.a[1] * w.a[1],
        f1,
        f2,
        f3,
        f: f1 * (f1 + f3) - f2 * f2,
    }
}

pub fn derived_weights(family: &WeightFamily, t: f64) -> Result<DerivedWeights> {
    Ok(derived_from_values(&family.values(t)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Degenerate,
    PseudoRiemannian,
    Riemannian,
}

/// Classifies a family on `[0, t_max]` from `samples` uniform grid points.
pub fn classify(family: &WeightFamily, t_max: f64, samples: usize, dim_base: usize) -> Classification {
    let samples = samples.max(2);
    let mut riemannian = true;
    let mut sign_a = 0.0f64;
    let mut sign_f = 0.0f64;
    for i in 0..=samples {
        let t = t_max * i as f64 / samples as f64;
        let Ok(w) = family.values(t) else {
            return Classification::Degenerate;
        };
        let d = derived_from_values(&w);
        if d.a.abs() < CLASSIFY_ZERO_TOLERANCE || (sign_a != 0.0 && d.a.signum() != sign_a) {
            return Classification::Degenerate;
        }
        sign_a = d.a.signum();
        if dim_base > 1 {
            if d.f.abs() < CLASSIFY_ZERO_TOLERANCE || (sign_f != 0.0 && d.f.signum() != sign_f) {
                return Classification::Degenerate;
            }
            sign_f = d.f.signum();
            riemannian &= d.a > 0.0 && d.f > 0.0 && w.a1() > 0.0 && d.f1 > 0.0;
        } else {
            riemannian &= d.a > 0.0 && w.a1() > 0.0;
        }
    }
    if riemannian {
        Classification::Riemannian
    } else {
        Classification::PseudoRiemannian
    }
}

/// Named weight families. Names are matched case-insensitively.
pub const PRESET_NAMES: &[&str] = &[
    "sasaki",
    "cheeger-gromoll",
    "null-vertical",
    "coupled",
    "decoupled",
    "example-s1",
];

/// Looks up a preset by name.
pub fn preset_family(name: &str) -> Result<WeightFamily> {
    let family = match name.to_ascii_lowercase().as_str() {
        "sasaki" => WeightFamily::constants("sasaki", [1.0, 0.0, 0.0], [0.0; 3]),
        "cheeger-gromoll" => {
            // a₁ = b₁ = 1/(1+t), a₁+a₃ = 1, b₁+b₃ = 1
            let inv = WeightFn::rational(&[1.0], &[1.0, 1.0]);
            let rest = WeightFn::rational(&[0.0, 1.0], &[1.0, 1.0]);
            WeightFamily::new(
                "cheeger-gromoll",
                [inv.clone(), WeightFn::zero(), rest.clone()],
                [inv, WeightFn::zero(), rest],
            )
        }
        "null-vertical" => null_vertical(1.0, [WeightFn::zero(), WeightFn::zero(), WeightFn::zero()]),
        // a₂b₁ − a₁b₂ = 1, Riemannian with a(t) = 1
        "coupled" => WeightFamily::constants("coupled", [1.0, 1.0, 1.0], [1.0, 0.0, 0.0]),
        // a₂b₁ − a₁b₂ = 0
        "decoupled" => WeightFamily::constants("decoupled", [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]),
        // b_j = 0 family of the circle counterexample
        "example-s1" => WeightFamily::constants("example-s1", [1.0, 1.0, 1.0], [0.0; 3]),
        _ => return Err(GeometryError::UnknownPreset(name.to_string())),
    };
    Ok(family)
}

/// `a₂ = b₂ = 0` with user-supplied `a₁, a₃, b₁, b₃`.
pub fn kaluza_klein_style(a1: WeightFn, a3: WeightFn, b1: WeightFn, b3: WeightFn) -> WeightFamily {
    WeightFamily::new(
        "kaluza-klein-style",
        [a1, WeightFn::zero(), a3],
        [b1, WeightFn::zero(), b3],
    )
}

/// `a₁ = 0`, `b₂ = 0`, `a₂ = const ≠ 0`; `rest = [a₃, b₁, b₃]`.
pub fn null_vertical(a2: f64, rest: [WeightFn; 3]) -> WeightFamily {
    let [a3, b1, b3] = rest;
    WeightFamily::new(
        "null-vertical",
        [WeightFn::zero(), WeightFn::constant(a2), a3],
        [b1, WeightFn::zero(), b3],
    )
}

/// A g-natural metric over a base manifold.
#[derive(Clone)]
pub struct GNaturalMetric {
    pub base: Arc<dyn MetricField>,
    pub family: WeightFamily,
}

impl fmt::Debug for GNaturalMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GNaturalMetric")
            .field("dim", &self.base.dim())
            .field("family", &self.family.name)
            .finish()
    }
}

/// The three `n×n` blocks of `G` in the lift basis `(∂_r^h, ∂_r^v)`.
#[derive(Debug, Clone)]
pub struct LiftBlocks {
    pub hh: DMatrix<f64>,
    pub hv: DMatrix<f64>,
    pub vv: DMatrix<f64>,
}

impl GNaturalMetric {
    /// Builds the metric, rejecting families that degenerate on `[0, t_max]`.
    pub fn new(base: Arc<dyn MetricField>, family: WeightFamily, t_max: f64) -> Result<Self> {
        if classify(&family, t_max, CLASSIFY_SAMPLES, base.dim()) == Classification::Degenerate {
            let (a, f) = (0..=CLASSIFY_SAMPLES)
                .map(|i| t_max * i as f64 / CLASSIFY_SAMPLES as f64)
                .filter_map(|t| derived_weights(&family, t).ok())
                .map(|d| (d.a, d.f))
                .fold((f64::INFINITY, f64::INFINITY), |(ma, mf), (a, f)| {
                    (ma.min(a.abs()), mf.min(f.abs()))
                });
            return Err(GeometryError::DegenerateWeights { t: t_max, a, f });
        }
        Ok(Self { base, family })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Lift-basis blocks at `x` with fiber `u`.
    pub fn lift_blocks(&self, g: &DMatrix<f64>, u: &DVector<f64>) -> Result<LiftBlocks> {
        let gu = g * u;
        let t = u.dot(&gu);
        let w = self.family.values(t.max(0.0))?;
        let d = derived_from_values(&w);
        let outer = &gu * gu.transpose();
        let nondegenerate = if self.dim() > 1 {
            d.a.abs() >= CLASSIFY_ZERO_TOLERANCE && d.f.abs() >= CLASSIFY_ZERO_TOLERANCE
        } else {
            d.a.abs() >= CLASSIFY_ZERO_TOLERANCE
        };
        if !nondegenerate {
            return Err(GeometryError::DegenerateWeights { t, a: d.a, f: d.f });
        }
        Ok(LiftBlocks {
            hh: g * w.big_a() + &outer * w.big_b(),
            hv: g * w.a2() + &outer * w.b2(),
            vv: g * w.a1() + &outer * w.b1(),
        })
    }
}

/// A tangent vector of `TN` given by its horizontal and vertical parts.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftPair {
    pub horizontal: DVector<f64>,
    pub vertical: DVector<f64>,
}

impl LiftPair {
    pub fn new(horizontal: DVector<f64>, vertical: DVector<f64>) -> Self {
        Self {
            horizontal,
            vertical,
        }
    }
}

/// `G_(x,u)(Z₁, Z₂)` for `Z_i = X_i^h + Y_i^v`.
pub fn gnat_metric_eval(
    metric: &GNaturalMetric,
    x: &DVector<f64>,
    u: &DVector<f64>,
    z1: &LiftPair,
    z2: &LiftPair,
) -> Result<f64> {
    let g = metric.base.metric(x);
    let blocks = metric.lift_blocks(&g, u)?;
    Ok(pair_with_blocks(&blocks, z1, z2))
}

pub(crate) fn pair_with_blocks(blocks: &LiftBlocks, z1: &LiftPair, z2: &LiftPair) -> f64 {
    // averaging both orders makes the result symmetric bit-for-bit
    0.5 * (ordered_pair(blocks, z1, z2) + ordered_pair(blocks, z2, z1))
}

fn ordered_pair(blocks: &LiftBlocks, z1: &LiftPair, z2: &LiftPair) -> f64 {
    let (x1, y1, x2, y2) = (&z1.horizontal, &z1.vertical, &z2.horizontal, &z2.vertical);
    x1.dot(&(&blocks.hh * x2))
        + x1.dot(&(&blocks.hv * y2))
        + y1.dot(&(&blocks.hv * x2))
        + y1.dot(&(&blocks.vv * y2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::Euclidean;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn sasaki_derived_weights() {
        for t in [0.0, 0.5, 7.0] {
            let d = derived_weights(&preset_family("sasaki").unwrap(), t).unwrap();
            assert_eq!((d.a, d.f, d.big_a, d.big_b), (1.0, 1.0, 1.0, 0.0));
        }
    }

    #[test]
    fn cheeger_gromoll_at_one() {
        let family = preset_family("cheeger-gromoll").unwrap();
        let w = family.values(1.0).unwrap();
        assert_abs_diff_eq!(w.a1(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w.b1(), 0.5, epsilon = 1e-15);
        let d = derived_from_values(&w);
        assert_abs_diff_eq!(d.big_a, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.big_b, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.a, 0.5, epsilon = 1e-15);
        // A and B are constant, so their derivatives cancel exactly
        assert_abs_diff_eq!(d.big_a_prime, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn substituted_family() {
        let family = WeightFamily::constants("w", [2.0, 1.0, 0.0], [0.0; 3]);
        let d = derived_weights(&family, 3.0).unwrap();
        assert_eq!((d.a, d.f1, d.f2, d.f3, d.f), (3.0, 2.0, 1.0, 0.0, 3.0));
    }

    #[test]
    fn negative_t_is_rejected() {
        let family = preset_family("sasaki").unwrap();
        assert_eq!(
            derived_weights(&family, -1.0).unwrap_err(),
            GeometryError::NegativeArgument(-1.0)
        );
    }

    #[test]
    fn vanishing_denominator_is_reported() {
        let family = WeightFamily::new(
            "pole",
            [WeightFn::rational(&[1.0], &[-1.0, 1.0]), WeightFn::zero(), WeightFn::zero()],
            [WeightFn::zero(), WeightFn::zero(), WeightFn::zero()],
        );
        assert_eq!(
            derived_weights(&family, 1.0).unwrap_err(),
            GeometryError::VanishingDenominator(1.0)
        );
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify(&preset_family("sasaki").unwrap(), 10.0, 128, 2),
            Classification::Riemannian
        );
        assert_eq!(
            classify(&preset_family("cheeger-gromoll").unwrap(), 10.0, 128, 2),
            Classification::Riemannian
        );
        let pseudo = WeightFamily::constants("p", [0.0, 1.0, 0.0], [0.0; 3]);
        assert_eq!(classify(&pseudo, 10.0, 128, 2), Classification::PseudoRiemannian);
        let degenerate = WeightFamily::constants("d", [1.0, 1.0, 0.0], [0.0; 3]);
        assert_eq!(classify(&degenerate, 10.0, 128, 2), Classification::Degenerate);
    }

    #[test]
    fn sign_change_of_f_is_degenerate() {
        // F = (1 − t)(1 + t) crosses zero at t = 1 while a(t) = 1 stays positive
        let family = WeightFamily::new(
            "crossing",
            [WeightFn::constant(1.0), WeightFn::zero(), WeightFn::zero()],
            [WeightFn::constant(-1.0), WeightFn::zero(), WeightFn::constant(2.0)],
        );
        assert_eq!(classify(&family, 3.0, 128, 2), Classification::Degenerate);
        // one-dimensional bases only look at a(t)
        assert_eq!(classify(&family, 3.0, 128, 1), Classification::Riemannian);
    }

    #[test]
    fn presets() {
        let s = preset_family("sasaki").unwrap();
        assert_eq!(s.values(2.0).unwrap().a, [1.0, 0.0, 0.0]);
        assert_eq!(s.values(2.0).unwrap().b, [0.0; 3]);
        let th = null_vertical(2.0, [WeightFn::zero(), WeightFn::zero(), WeightFn::zero()]);
        let w = th.values(1.0).unwrap();
        assert_eq!((w.a, w.b), ([0.0, 2.0, 0.0], [0.0; 3]));
        assert_eq!(derived_from_values(&w).a, -4.0);
        assert!(matches!(preset_family("nope"), Err(GeometryError::UnknownPreset(_))));
        assert!(preset_family("Cheeger-Gromoll").unwrap().has_decoupled_blocks());
    }

    #[test]
    fn metric_eval_examples() {
        let base: Arc<dyn MetricField> = Arc::new(Euclidean::new(2));
        let sasaki = GNaturalMetric::new(base.clone(), preset_family("sasaki").unwrap(), 10.0).unwrap();
        let x = v(&[0.1, 0.2]);
        let u = v(&[0.7, -0.3]);
        let xh = LiftPair::new(v(&[1.0, 2.0]), v(&[0.0, 0.0]));
        let yv = LiftPair::new(v(&[0.0, 0.0]), v(&[-1.0, 0.5]));
        let yh = LiftPair::new(v(&[-1.0, 0.5]), v(&[0.0, 0.0]));
        assert_eq!(gnat_metric_eval(&sasaki, &x, &u, &xh, &yv).unwrap(), 0.0);
        assert_eq!(gnat_metric_eval(&sasaki, &x, &u, &xh, &yh).unwrap(), 0.0);

        let cg = GNaturalMetric::new(base.clone(), preset_family("cheeger-gromoll").unwrap(), 10.0)
            .unwrap();
        let u = v(&[1.0, 0.0]);
        let uv = LiftPair::new(v(&[0.0, 0.0]), u.clone());
        assert_abs_diff_eq!(gnat_metric_eval(&cg, &x, &u, &uv, &uv).unwrap(), 1.0, epsilon = 1e-15);

        let w = WeightFamily::constants("w", [2.0, 1.0, 0.0], [0.0, 0.0, 0.0]);
        let metric = GNaturalMetric::new(base, w, 10.0).unwrap();
        let u = v(&[3f64.sqrt(), 0.0]);
        let uh = LiftPair::new(u.clone(), v(&[0.0, 0.0]));
        // A·3 + B·9 with A = 2, B = 0
        assert_abs_diff_eq!(gnat_metric_eval(&metric, &x, &u, &uh, &uh).unwrap(), 6.0, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_family_is_rejected_at_construction() {
        let base: Arc<dyn MetricField> = Arc::new(Euclidean::new(2));
        let family = WeightFamily::constants("d", [1.0, 1.0, 0.0], [0.0; 3]);
        assert!(matches!(
            GNaturalMetric::new(base, family, 4.0),
            Err(GeometryError::DegenerateWeights { .. })
        ));
    }

    fn coupled_metric() -> GNaturalMetric {
        let base: Arc<dyn MetricField> = Arc::new(Euclidean::new(3));
        let family = WeightFamily::new(
            "poly",
            [WeightFn::poly(&[1.0, 0.5]), WeightFn::poly(&[0.3, -0.1]), WeightFn::poly(&[2.0])],
            [WeightFn::poly(&[0.2]), WeightFn::poly(&[0.1, 0.05]), WeightFn::poly(&[0.4])],
        );
        GNaturalMetric { base, family }
    }

    prop_compose! {
        fn vec3()(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0) -> DVector<f64> {
            v(&[a, b, c])
        }
    }

    proptest! {
        #[test]
        fn metric_is_symmetric(u in vec3(), x1 in vec3(), y1 in vec3(), x2 in vec3(), y2 in vec3()) {
            let m = coupled_metric();
            let x = v(&[0.0, 0.0, 0.0]);
            let z1 = LiftPair::new(x1, y1);
            let z2 = LiftPair::new(x2, y2);
            let a = gnat_metric_eval(&m, &x, &u, &z1, &z2).unwrap();
            let b = gnat_metric_eval(&m, &x, &u, &z2, &z1).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn metric_is_bilinear(u in vec3(), x1 in vec3(), y1 in vec3(), x2 in vec3(), y2 in vec3(),
                              x3 in vec3(), y3 in vec3(), s in -3.0f64..3.0) {
            let m = coupled_metric();
            let x = v(&[0.0, 0.0, 0.0]);
            let z1 = LiftPair::new(x1.clone(), y1.clone());
            let z2 = LiftPair::new(x2.clone(), y2.clone());
            let z3 = LiftPair::new(x3, y3);
            let combo = LiftPair::new(&x1 * s + &x2, &y1 * s + &y2);
            let lhs = gnat_metric_eval(&m, &x, &u, &combo, &z3).unwrap();
            let rhs = s * gnat_metric_eval(&m, &x, &u, &z1, &z3).unwrap()
                + gnat_metric_eval(&m, &x, &u, &z2, &z3).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }

        #[test]
        fn f_j_matches_composed_polynomial(t in 0.0f64..20.0) {
            let m = coupled_metric();
            let d = derived_weights(&m.family, t).unwrap();
            // a₂ + t b₂ = 0.3 − 0.1t + t(0.1 + 0.05t) as one polynomial
            let composed = Polynomial(vec![0.3, 0.0, 0.05]).eval(t);
            prop_assert!((d.f2 - composed).abs() <= 1e-12 * (1.0 + composed.abs()));
        }
    }
}
