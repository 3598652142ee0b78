//! CSV tables and the JSON report. Tables open with a units comment line.

use std::fs;
use std::path::{Path, PathBuf};

use qfridge_core::cooling::CoolingSample;

use crate::error::CliError;
use crate::report::RunReport;
use crate::run::SweepRow;

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const REPORT_FILE: &str = "report.json";

pub const TRAJECTORY_UNITS: &str =
    "# units: hbar = k_B = 1; t [1/E], T_c [E], omega_c [E], lambda [E], J_c [E^2]";
pub const SWEEP_UNITS: &str =
    "# units: hbar = k_B = 1; d [-], kappa [-], zeta [-], residual [-], t0 [1/E], t_final [1/E], T_final [E]";

fn with_header(units: &str, body: Vec<u8>) -> Result<String, CliError> {
    let body = String::from_utf8(body).map_err(|e| CliError::Output(e.to_string()))?;
    Ok(format!("{units}\n{body}"))
}

pub fn trajectory_csv(samples: &[CoolingSample]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "T_c", "omega_c", "lambda", "J_c"])?;
    for s in samples {
        w.write_record([s.t, s.t_c, s.omega_c, s.lambda, s.j_c].map(|v| v.to_string()))?;
    }
    with_header(TRAJECTORY_UNITS, w.into_inner().map_err(|e| CliError::Output(e.to_string()))?)
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    if rows.is_empty() {
        w.write_record(SweepRow::HEADER)?;
    }
    with_header(SWEEP_UNITS, w.into_inner().map_err(|e| CliError::Output(e.to_string()))?)
}

/// Writes whatever the run produced into `dir`, returning the paths written.
pub fn write_all(
    dir: &Path,
    report: &RunReport,
    trajectory: Option<&[CoolingSample]>,
    sweep: Option<&[SweepRow]>,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if let Some(samples) = trajectory {
        let p = dir.join(TRAJECTORY_FILE);
        fs::write(&p, trajectory_csv(samples)?)?;
        written.push(p);
    }
    if let Some(rows) = sweep {
        let p = dir.join(SWEEP_FILE);
        fs::write(&p, sweep_csv(rows)?)?;
        written.push(p);
    }
    let p = dir.join(REPORT_FILE);
    fs::write(&p, serde_json::to_string_pretty(report)? + "\n")?;
    written.push(p);
    Ok(written)
}
