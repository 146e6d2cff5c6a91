//! TOML run configuration.
//!
//! ```toml
//! scenario = "helix"          # or "all"
//! points = 10
//! seed = 7
//! sign_toggle = "auto"        # auto | plus | minus
//!
//! [family]
//! name = "my-family"
//! # either a preset ...
//! # preset = "cheeger-gromoll"
//! # ... or coefficient lists in ascending degree; a coefficient is a
//! # number or a [numerator, denominator] pair; omitted weights are zero
//! a1 = [1]
//! a2 = [[1, 2]]               # 1/2
//! a3 = [0, 1]                 # t
//! b1 = { numerator = [1], denominator = [1, 1] }   # 1/(1+t)
//!
//! [chart]                     # sampling box for y, inside the scenario domain
//! lower = [-1.0]
//! upper = [1.0]
//!
//! [fiber]
//! radii = [0.3, 1.0, 2.0]
//!
//! [tolerances]                # any subset
//! algebraic = 1e-10
//! analytic = 1e-6
//! connection = 1e-3
//! frame = 1e-8
//! ```

use std::path::Path;

use serde::Deserialize;

use super::Tolerances;
use crate::error::{GeometryError, Result};
use crate::gnatural::{preset_family, WeightFamily, WeightFn};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Number(f64),
    Ratio([f64; 2]),
}

impl Coefficient {
    pub fn value(self) -> Result<f64> {
        match self {
            Self::Number(x) => Ok(x),
            Self::Ratio([_, 0.0]) => Err(GeometryError::Config("zero denominator in coefficient".into())),
            Self::Ratio([n, d]) => Ok(n / d),
        }
    }
}

fn values(cs: &[Coefficient]) -> Result<Vec<f64>> {
    cs.iter().map(|c| c.value()).collect()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Polynomial(Vec<Coefficient>),
    Rational {
        numerator: Vec<Coefficient>,
        denominator: Vec<Coefficient>,
    },
}

impl WeightSpec {
    pub fn build(&self) -> Result<WeightFn> {
        match self {
            Self::Polynomial(c) => Ok(WeightFn::poly(&values(c)?)),
            Self::Rational { numerator, denominator } => {
                let den = values(denominator)?;
                if den.iter().all(|d| *d == 0.0) {
                    return Err(GeometryError::Config("denominator polynomial is zero".into()));
                }
                Ok(WeightFn::rational(&values(numerator)?, &den))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub preset: Option<String>,
    pub name: Option<String>,
    pub a1: Option<WeightSpec>,
    pub a2: Option<WeightSpec>,
    pub a3: Option<WeightSpec>,
    pub b1: Option<WeightSpec>,
    pub b2: Option<WeightSpec>,
    pub b3: Option<WeightSpec>,
}

impl FamilySpec {
    pub fn build(&self) -> Result<WeightFamily> {
        let weights = [&self.a1, &self.a2, &self.a3, &self.b1, &self.b2, &self.b3];
        if let Some(preset) = &self.preset {
            if weights.iter().any(|w| w.is_some()) {
                return Err(GeometryError::Config("give either a preset or coefficient lists, not both".into()));
            }
            let mut family = preset_family(preset)?;
            if let Some(name) = &self.name {
                family.name = name.clone();
            }
            return Ok(family);
        }
        let build = |w: &Option<WeightSpec>| w.as_ref().map_or(Ok(WeightFn::zero()), |s| s.build());
        Ok(WeightFamily::new(
            self.name.clone().unwrap_or_else(|| "custom".into()),
            [build(&self.a1)?, build(&self.a2)?, build(&self.a3)?],
            [build(&self.b1)?, build(&self.b2)?, build(&self.b3)?],
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSpec {
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    pub algebraic: Option<f64>,
    pub analytic: Option<f64>,
    pub connection: Option<f64>,
    pub frame: Option<f64>,
}

impl ToleranceSpec {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            algebraic: self.algebraic.unwrap_or(base.algebraic),
            analytic: self.analytic.unwrap_or(base.analytic),
            connection: self.connection.unwrap_or(base.connection),
            frame: self.frame.unwrap_or(base.frame),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<String>,
    pub points: Option<usize>,
    pub seed: Option<u64>,
    pub sign_toggle: Option<String>,
    #[serde(default)]
    pub family: FamilySpec,
    pub chart: Option<ChartSpec>,
    pub fiber: Option<FiberSpec>,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| GeometryError::Config(e.to_string()))?;
        if let Some(f) = &cfg.fiber {
            if f.radii.is_empty() || f.radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
                return Err(GeometryError::Config("fiber radii must be positive".into()));
            }
        }
        if let Some(c) = &cfg.chart {
            if c.lower.len() != c.upper.len() || c.lower.iter().zip(&c.upper).any(|(l, u)| !(l < u)) {
                return Err(GeometryError::Config("chart bounds need lower < upper componentwise".into()));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GeometryError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_coefficients_and_rationals() {
        let cfg = ConfigFile::parse(
            r#"
            scenario = "helix"
            [family]
            name = "mix"
            a1 = [1]
            a2 = [[1, 2]]
            a3 = [0, 1.5]
            b1 = { numerator = [1], denominator = [1, 1] }
            [fiber]
            radii = [0.5]
            [tolerances]
            connection = 2e-3
            "#,
        )
        .unwrap();
        let fam = cfg.family.build().unwrap();
        let w = fam.values(1.0).unwrap();
        assert_eq!(fam.name, "mix");
        assert_eq!(w.a, [1.0, 0.5, 1.5]);
        assert_eq!(w.b, [0.5, 0.0, 0.0]);
        assert_eq!(w.db[0], -0.25);
        let tol = cfg.tolerances.apply(Tolerances::default());
        assert_eq!((tol.connection, tol.analytic), (2e-3, 1e-6));
    }

    #[test]
    fn preset_and_rejections() {
        let cfg = ConfigFile::parse("[family]\npreset = \"sasaki\"").unwrap();
        assert_eq!(cfg.family.build().unwrap().name, "sasaki");
        assert!(ConfigFile::parse("[family]\npreset = \"sasaki\"\na1 = [1]").unwrap().family.build().is_err());
        assert!(ConfigFile::parse("[family]\na1 = [[1, 0]]").unwrap().family.build().is_err());
        assert!(ConfigFile::parse("[fiber]\nradii = [0.0]").is_err());
        assert!(ConfigFile::parse("colour = 1").is_err());
        assert!(ConfigFile::parse("[chart]\nlower = [1]\nupper = [0]").is_err());
    }
}
