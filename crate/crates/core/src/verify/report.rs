//! Report entries, JSON round-tripping and a plain-text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub scenario: String,
    pub family: String,
    pub seed: u64,
    pub sign_toggle: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointInfo {
    pub y: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub identity: String,
    pub paper_ref: String,
    pub point: PointInfo,
    pub residual: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip)]
    pub point_index: usize,
}

impl Entry {
    /// `|residual| ≤ tolerance · max(1, scale)`.
    pub fn passes(residual: f64, scale: f64, tolerance: f64) -> bool {
        residual.abs() <= tolerance * scale.max(1.0)
    }

    /// Identity name without the bracketed index suffix.
    pub fn base_name(&self) -> &str {
        base_name(&self.identity)
    }
}

pub fn base_name(identity: &str) -> &str {
    identity.split('[').next().unwrap_or(identity)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Skip {
    pub identity: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub skipped: Vec<Skip>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub run: RunInfo,
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

/// Per-identity aggregate used by the text rendering.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroupStats {
    pub total: usize,
    pub passed: usize,
    /// Largest `|residual| / (tolerance · max(1, scale))`.
    pub worst_ratio: f64,
    pub worst_residual: f64,
}

impl IdentityReport {
    pub fn new(run: RunInfo) -> Self {
        Self {
            run,
            entries: Vec::new(),
            summary: Summary {
                total: 0,
                passed: 0,
                skipped: Vec::new(),
            },
        }
    }

    /// Sorts entries and skips and recomputes the summary.
    pub fn finalize(&mut self) {
        self.entries
            .sort_by(|a, b| a.identity.cmp(&b.identity).then(a.point_index.cmp(&b.point_index)));
        self.summary.skipped.sort();
        self.summary.skipped.dedup();
        self.summary.total = self.entries.len();
        self.summary.passed = self.entries.iter().filter(|e| e.pass).count();
    }

    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn entries_for<'a>(&'a self, base: &'a str) -> impl Iterator<Item = &'a Entry> + 'a {
        self.entries.iter().filter(move |e| e.base_name() == base)
    }

    pub fn groups(&self) -> BTreeMap<String, GroupStats> {
        let mut out: BTreeMap<String, GroupStats> = BTreeMap::new();
        for e in &self.entries {
            let s = out.entry(e.base_name().to_string()).or_default();
            s.total += 1;
            if e.pass {
                s.passed += 1;
            }
            let denom = e.tolerance * e.scale.max(1.0);
            let ratio = if denom > 0.0 {
                e.residual.abs() / denom
            } else if e.residual == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            if ratio > s.worst_ratio {
                s.worst_ratio = ratio;
                s.worst_residual = e.residual;
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| GeometryError::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GeometryError::Config(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let r = &self.run;
        let _ = writeln!(
            out,
            "scenario {}  family {}  seed {}  sign {}",
            r.scenario, r.family, r.seed, r.sign_toggle
        );
        let _ = writeln!(out, "{:<48} {:>7} {:>7} {:>12} {:>10}", "identity", "passed", "total", "worst", "ratio");
        for (name, s) in self.groups() {
            let _ = writeln!(
                out,
                "{:<48} {:>7} {:>7} {:>12.3e} {:>10.3e}{}",
                name,
                s.passed,
                s.total,
                s.worst_residual,
                s.worst_ratio,
                if s.passed == s.total { "" } else { "  FAIL" }
            );
        }
        if !self.summary.skipped.is_empty() {
            let _ = writeln!(out, "skipped:");
            for s in &self.summary.skipped {
                let _ = writeln!(out, "  {}: {}", s.identity, s.reason);
            }
        }
        let _ = writeln!(out, "passed {} of {}", self.summary.passed, self.summary.total);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(identity: &str, index: usize, residual: f64) -> Entry {
        Entry {
            identity: identity.into(),
            paper_ref: "x = 0".into(),
            point: PointInfo { y: vec![0.5], v: vec![1.0] },
            residual,
            scale: 2.0,
            tolerance: 1e-3,
            pass: Entry::passes(residual, 2.0, 1e-3),
            point_index: index,
        }
    }

    #[test]
    fn pass_rule_is_relative_above_unit_scale() {
        assert!(Entry::passes(1.5e-3, 2.0, 1e-3));
        assert!(!Entry::passes(1.5e-3, 0.5, 1e-3));
        assert!(Entry::passes(0.0, 0.0, 0.0));
        assert!(!Entry::passes(1e-300, 0.0, 0.0));
    }

    #[test]
    fn finalize_sorts_and_counts() {
        let mut r = IdentityReport::new(RunInfo {
            scenario: "circle".into(),
            family: "sasaki".into(),
            seed: 1,
            sign_toggle: "plus".into(),
        });
        r.entries.push(entry("b", 1, 0.0));
        r.entries.push(entry("b", 0, 1.0));
        r.entries.push(entry("a[x=0]", 3, 0.0));
        r.summary.skipped.push(Skip { identity: "z".into(), reason: "r".into() });
        r.summary.skipped.push(Skip { identity: "z".into(), reason: "r".into() });
        r.finalize();
        let order: Vec<_> = r.entries.iter().map(|e| (e.identity.as_str(), e.point_index)).collect();
        assert_eq!(order, [("a[x=0]", 3), ("b", 0), ("b", 1)]);
        assert_eq!((r.summary.total, r.summary.passed, r.summary.skipped.len()), (3, 2, 1));
        assert_eq!(r.groups()["b"].passed, 1);
        assert_eq!(r.entries[0].base_name(), "a");
    }

    #[test]
    fn json_round_trip_keeps_schema_fields() {
        let mut r = IdentityReport::new(RunInfo {
            scenario: "helix".into(),
            family: "sasaki".into(),
            seed: 9,
            sign_toggle: "auto:plus".into(),
        });
        r.entries.push(entry("a", 0, 1e-5));
        r.finalize();
        let json = r.to_json().unwrap();
        for key in ["run", "entries", "summary", "paper_ref", "point", "residual", "scale", "tolerance", "pass", "skipped"] {
            assert!(json.contains(&format!("\"{key}\"")), "{key}");
        }
        assert!(!json.contains("point_index"));
        let back = IdentityReport::from_json(&json).unwrap();
        assert_eq!(back.entries[0].residual, 1e-5);
        assert!(r.to_text().contains("passed 1 of 1"));
    }
}
