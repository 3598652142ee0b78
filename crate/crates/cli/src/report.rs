use serde::Serialize;

use crate::config::ScenarioConfig;

/// One pass/fail invariant with its measured value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value ≤ tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }

    /// Passes when `value ≥ -tolerance`.
    pub fn nonnegative(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            passed: value >= -tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KmsCheck {
    pub contact: String,
    pub omega: f64,
    pub beta: f64,
    pub downward: f64,
    pub upward: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationCheck {
    pub levels: usize,
    pub top_population: f64,
    pub guard: f64,
    pub passed: bool,
}

/// Present in every report; fields a mode cannot measure stay `null`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct LawAudit {
    pub first_law_residual: Option<f64>,
    pub second_law_min_sigma: Option<f64>,
    pub kms: Vec<KmsCheck>,
    pub truncation: Vec<TruncationCheck>,
    pub checks: Vec<Check>,
}

impl LawAudit {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
            && self.kms.iter().all(|k| k.passed)
            && self.truncation.iter().all(|t| t.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} = {:.3e} (tolerance {:.1e})", c.name, c.value, c.tolerance))
            .collect();
        out.extend(
            self.kms
                .iter()
                .filter(|k| !k.passed)
                .map(|k| format!("KMS violated on `{}` at omega = {}", k.contact, k.omega)),
        );
        out.extend(
            self.truncation
                .iter()
                .filter(|t| !t.passed)
                .map(|t| format!("top-level population {:.3e} at N = {}", t.top_population, t.levels)),
        );
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub toolkit: &'static str,
    pub version: &'static str,
    pub wall_time_s: f64,
    pub threads: Option<usize>,
}

impl Provenance {
    pub fn new(wall_time_s: f64, threads: Option<usize>) -> Self {
        Self {
            toolkit: "qfridge",
            version: env!("CARGO_PKG_VERSION"),
            wall_time_s,
            threads,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub mode: &'static str,
    pub units: &'static str,
    /// Resolved configuration; re-running it reproduces the run.
    pub config: ScenarioConfig,
    pub results: serde_json::Value,
    pub law_audit: LawAudit,
    pub passed: bool,
    pub warnings: Vec<String>,
    pub provenance: Provenance,
}
