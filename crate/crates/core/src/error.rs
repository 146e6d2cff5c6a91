use thiserror::Error;

/// Errors raised by the geometry engine.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("coordinate {index} = {value} lies outside the chart interval [{lower}, {upper}]")]
    OutOfChart {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("metric matrix is singular (|det| = {det:e} below {threshold:e})")]
    SingularMetric { det: f64, threshold: f64 },
    #[error("finite-difference step must be positive, got {0}")]
    InvalidStep(f64),
    #[error("derivative noise: step and double-step estimates differ by {discrepancy:e} (tolerance {tolerance:e})")]
    DerivativeNoise { discrepancy: f64, tolerance: f64 },
    #[error("weight functions are evaluated on t >= 0, got t = {0}")]
    NegativeArgument(f64),
    #[error("rational weight has a vanishing denominator at t = {0}")]
    VanishingDenominator(f64),
    #[error("g-natural metric degenerates at t = {t}: a(t) = {a:e}, F(t) = {f:e}")]
    DegenerateWeights { t: f64, a: f64, f: f64 },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("rank deficiency: expected rank {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("scenario `{0}` provides no analytic normal-frame derivative")]
    MissingFrameDerivative(String),
    #[error("induced metric on the lifted submanifold is degenerate (det = {det:e})")]
    DegenerateInducedMetric { det: f64 },
    #[error("family violates a required constraint: {0}")]
    FamilyConstraint(String),
    #[error("candidate is not normal: residual {0:e}")]
    NotNormal(f64),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
