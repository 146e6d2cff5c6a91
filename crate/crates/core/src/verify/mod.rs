//! Closed forms for the second fundamental form of the normal lift, the
//! residual suites that tie them to the numerical connection, and the
//! scenario runner.

pub mod catalog;
pub mod checks;
pub mod closed_forms;
pub mod config;
pub mod context;
pub mod report;
pub mod runner;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
pub use catalog::{lookup, IdentitySpec, ToleranceClass, IDENTITIES};
pub use context::{NormalField, PointContext};
pub use report::{Entry, IdentityReport, PointInfo, RunInfo, Skip, Summary};
pub use runner::{run, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub algebraic: f64,
    pub analytic: f64,
    pub connection: f64,
    pub frame: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: 1e-10,
            analytic: 1e-6,
            connection: 1e-3,
            frame: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn for_class(&self, class: ToleranceClass) -> f64 {
        match class {
            ToleranceClass::Algebraic => self.algebraic,
            ToleranceClass::Analytic => self.analytic,
            ToleranceClass::Connection => self.connection,
            ToleranceClass::Frame => self.frame,
            ToleranceClass::Exact => 0.0,
        }
    }
}

/// Global sign applied to every curvature term of the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignToggle {
    Plus,
    Minus,
    /// Pick whichever sign gives the smaller total curvature-sensitive residual.
    Auto,
}

impl SignToggle {
    pub fn sigma(self) -> Option<f64> {
        match self {
            Self::Plus => Some(1.0),
            Self::Minus => Some(-1.0),
            Self::Auto => None,
        }
    }
}

impl FromStr for SignToggle {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plus" | "+" => Ok(Self::Plus),
            "minus" | "-" => Ok(Self::Minus),
            "auto" => Ok(Self::Auto),
            _ => Err(GeometryError::Config(format!("unknown sign toggle {s:?}; expected auto, plus or minus"))),
        }
    }
}

impl fmt::Display for SignToggle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Plus => "plus",
            Self::Minus => "minus",
            Self::Auto => "auto",
        })
    }
}

/// Collects entries for one sample point.
#[derive(Debug, Clone)]
pub struct Recorder {
    pub tolerances: Tolerances,
    pub point_index: usize,
    pub point: PointInfo,
    pub entries: Vec<Entry>,
    pub skipped: Vec<Skip>,
}

impl Recorder {
    pub fn new(tolerances: Tolerances, point_index: usize, point: PointInfo) -> Self {
        Self {
            tolerances,
            point_index,
            point,
            entries: Vec::new(),
            skipped: Vec::new(),
        }
    }

    /// Records `residual` against the catalogued tolerance of `base`.
    pub fn record(&mut self, base: &str, label: &str, residual: f64, scale: f64) {
        let spec = lookup(base).unwrap_or_else(|| panic!("identity {base} is not catalogued"));
        let identity = if label.is_empty() {
            base.to_string()
        } else {
            format!("{base}[{label}]")
        };
        if !residual.is_finite() || !scale.is_finite() {
            self.skip(&identity, "non-finite residual");
            return;
        }
        let tolerance = self.tolerances.for_class(spec.class);
        self.entries.push(Entry {
            identity,
            paper_ref: spec.formula.to_string(),
            point: self.point.clone(),
            residual,
            scale,
            tolerance,
            pass: Entry::passes(residual, scale, tolerance),
            point_index: self.point_index,
        });
    }

    /// Records `closed − numeric`.
    pub fn compare(&mut self, base: &str, label: &str, closed: &closed_forms::Terms, numeric: f64) {
        let scale = closed.scale().max(numeric.abs());
        self.record(base, label, closed.value() - numeric, scale);
    }

    /// Records a sum that should vanish.
    pub fn vanish(&mut self, base: &str, label: &str, terms: &closed_forms::Terms) {
        self.record(base, label, terms.value(), terms.scale());
    }

    pub fn skip(&mut self, identity: &str, reason: impl Into<String>) {
        self.skipped.push(Skip {
            identity: identity.to_string(),
            reason: reason.into(),
        });
    }
}
