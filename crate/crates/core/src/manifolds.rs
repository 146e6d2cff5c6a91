//! Ambient manifolds used by the built-in scenarios.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::diffgeo::{ChartBounds, Christoffel, MetricField};

/// Flat `R^n` in Cartesian coordinates.
#[derive(Debug, Clone)]
pub struct Euclidean {
    bounds: ChartBounds,
}

impl Euclidean {
    pub fn new(n: usize) -> Self {
        Self {
            bounds: ChartBounds::cube(n, 10.0),
        }
    }
}

impl MetricField for Euclidean {
    fn dim(&self) -> usize {
        self.bounds.dim()
    }

    fn bounds(&self) -> &ChartBounds {
        &self.bounds
    }

    fn metric(&self, _x: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::identity(self.dim(), self.dim())
    }

    fn metric_derivative(&self, _x: &DVector<f64>, _k: usize) -> Option<DMatrix<f64>> {
        Some(DMatrix::zeros(self.dim(), self.dim()))
    }

    fn analytic_christoffel(&self, _x: &DVector<f64>) -> Option<Christoffel> {
        Some(Christoffel::zeros(self.dim()))
    }
}

/// Unit round `S²` in spherical angles `(θ, φ)`: `g = dθ² + sin²θ dφ²`.
#[derive(Debug, Clone)]
pub struct RoundSphere2 {
    bounds: ChartBounds,
}

impl RoundSphere2 {
    pub fn new() -> Self {
        Self {
            bounds: ChartBounds::new(vec![0.0, -PI], vec![PI, PI]),
        }
    }
}

impl Default for RoundSphere2 {
    fn default() -> Self {
        Self::new()
    }
}

impl MetricField for RoundSphere2 {
    fn dim(&self) -> usize {
        2
    }

    fn bounds(&self) -> &ChartBounds {
        &self.bounds
    }

    fn metric(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let s = x[0].sin();
        DMatrix::from_diagonal(&DVector::from_column_slice(&[1.0, s * s]))
    }

    fn metric_derivative(&self, x: &DVector<f64>, k: usize) -> Option<DMatrix<f64>> {
        let mut d = DMatrix::zeros(2, 2);
        if k == 0 {
            d[(1, 1)] = 2.0 * x[0].sin() * x[0].cos();
        }
        Some(d)
    }

    fn analytic_christoffel(&self, x: &DVector<f64>) -> Option<Christoffel> {
        let (s, c) = x[0].sin_cos();
        let mut gamma = Christoffel::zeros(2);
        gamma.set(0, 1, 1, -s * c);
        gamma.set(1, 0, 1, c / s);
        gamma.set(1, 1, 0, c / s);
        Some(gamma)
    }
}

/// Unit `S^n` in stereographic coordinates: `g = 4/(1+|x|²)² δ`.
#[derive(Debug, Clone)]
pub struct StereographicSphere {
    bounds: ChartBounds,
}

impl StereographicSphere {
    pub fn new(n: usize) -> Self {
        Self {
            bounds: ChartBounds::cube(n, 2.0),
        }
    }

    fn conformal_factor(x: &DVector<f64>) -> f64 {
        let q = 1.0 + x.norm_squared();
        4.0 / (q * q)
    }

    /// Gradient of the log-conformal factor `φ = ln 2 − ln(1+|x|²)`.
    fn log_gradient(x: &DVector<f64>) -> DVector<f64> {
        let q = 1.0 + x.norm_squared();
        x * (-2.0 / q)
    }
}

impl MetricField for StereographicSphere {
    fn dim(&self) -> usize {
        self.bounds.dim()
    }

    fn bounds(&self) -> &ChartBounds {
        &self.bounds
    }

    fn metric(&self, x: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::identity(self.dim(), self.dim()) * Self::conformal_factor(x)
    }

    fn metric_derivative(&self, x: &DVector<f64>, k: usize) -> Option<DMatrix<f64>> {
        let dphi = Self::log_gradient(x);
        Some(self.metric(x) * (2.0 * dphi[k]))
    }

    fn analytic_christoffel(&self, x: &DVector<f64>) -> Option<Christoffel> {
        let n = self.dim();
        let dphi = Self::log_gradient(x);
        let mut gamma = Christoffel::zeros(n);
        for r in 0..n {
            for s in 0..n {
                for t in 0..n {
                    let mut v = 0.0;
                    if r == s {
                        v += dphi[t];
                    }
                    if r == t {
                        v += dphi[s];
                    }
                    if s == t {
                        v -= dphi[r];
                    }
                    gamma.set(r, s, t, v);
                }
            }
        }
        Some(gamma)
    }
}
