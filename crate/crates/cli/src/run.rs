use std::time::Instant;

use log::{info, warn};
use qfridge_core::absorption::{self, AbsorptionSystem, TRUNCATION_GUARD};
use qfridge_core::bath::{van_hove_classify, GasBath};
use qfridge_core::cooling::{
    fit_zeta, integrate_cooling, time_to_zero_quadrature, unattainability_report, CoolingSample, CoolingScenario,
    UnattainabilityReport,
};
use qfridge_core::driven::{self, DrivenSystem};
use qfridge_core::evolve::DENSE_EXP_LIMIT;
use qfridge_core::lgks::{self, entropy_production, kms_check, ThermalContact};
use qfridge_core::{
    evolve, steady_state, BathSpectrum, BosonicBath, DensityMatrix, HeatCapacityModel, LocalGibbsReference,
    Medium, Statistics, Superoperator,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{Mode, ScenarioConfig, SteadyModel};
use crate::error::CliError;
use crate::report::{Check, KmsCheck, LawAudit, Provenance, RunReport, TruncationCheck};

pub const UNITS: &str = "hbar = k_B = 1";
pub const UNSTABLE_FIELD: &str = "unstable field, skipped";

/// Relative tolerance of the driven analytic cross-check.
pub const DRIVEN_CROSS_CHECK: f64 = 1e-6;

/// States evolved in time (besides being probed directly) by `verify-laws`.
const EVOLVED_STATES: usize = 10;

/// Everything a run produced; the binary decides what to write.
#[derive(Debug, Clone)]
pub struct Run {
    pub report: RunReport,
    pub trajectory: Option<Vec<CoolingSample>>,
    pub sweep: Option<Vec<SweepRow>>,
}

impl Run {
    /// 0 when every audited law held, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            0
        } else {
            1
        }
    }
}

struct Outcome {
    results: serde_json::Value,
    audit: LawAudit,
    warnings: Vec<String>,
    trajectory: Option<Vec<CoolingSample>>,
    sweep: Option<Vec<SweepRow>>,
}

impl Outcome {
    fn new(results: serde_json::Value, audit: LawAudit, warnings: Vec<String>) -> Self {
        Self {
            results,
            audit,
            warnings,
            trajectory: None,
            sweep: None,
        }
    }
}

/// Runs `mode` on an already validated configuration.
pub fn execute(mode: Mode, config: &ScenarioConfig, threads: Option<usize>) -> Result<Run, CliError> {
    config.validate(mode)?;
    let start = Instant::now();
    info!("running {}", mode.name());
    let outcome = match mode {
        Mode::Steady => run_steady(config)?,
        Mode::Cool => run_cool(config)?,
        Mode::Sweep => run_sweep(config, threads)?,
        Mode::VerifyLaws => run_verify_laws(config)?,
    };
    let mut warnings = outcome.warnings;
    let failures = outcome.audit.failures();
    for f in &failures {
        warn!("{f}");
    }
    warnings.extend(failures);
    let report = RunReport {
        mode: mode.name(),
        units: UNITS,
        config: config.clone(),
        results: outcome.results,
        passed: outcome.audit.passed(),
        law_audit: outcome.audit,
        warnings,
        provenance: Provenance::new(start.elapsed().as_secs_f64(), threads),
    };
    Ok(Run {
        report,
        trajectory: outcome.trajectory,
        sweep: outcome.sweep,
    })
}

fn kms_entries(contact: &ThermalContact) -> Vec<KmsCheck> {
    contact
        .terms
        .iter()
        .map(|t| {
            let upward = t.upward_rate(contact.beta);
            KmsCheck {
                contact: contact.label.clone(),
                omega: t.omega,
                beta: contact.beta,
                downward: t.rate,
                upward,
                passed: kms_check(t.rate, upward, t.omega, contact.beta),
            }
        })
        .collect()
}

fn bath_kms(bath: &BathSpectrum, omega: f64, t: f64) -> Result<KmsCheck, CliError> {
    let b = bath.at_temperature(t);
    let downward = b.rate(omega)?;
    let upward = b.rate_signed(-omega)?;
    Ok(KmsCheck {
        contact: "cold bath".into(),
        omega,
        beta: 1.0 / t,
        downward,
        upward,
        passed: kms_check(downward, upward, omega, 1.0 / t),
    })
}

fn relative_delta(numeric: f64, analytic: f64) -> f64 {
    if analytic == 0.0 {
        numeric.abs()
    } else {
        ((numeric - analytic) / analytic).abs()
    }
}

/// Relative deviation, judged in absolute terms when the reference current vanishes.
fn cross_check(name: &str, numeric: f64, analytic: f64, rel_tol: f64, abs_floor: f64) -> Check {
    let delta = (numeric - analytic).abs();
    Check {
        name: name.into(),
        value: relative_delta(numeric, analytic),
        tolerance: rel_tol,
        passed: delta <= rel_tol * analytic.abs() || delta <= abs_floor,
    }
}

fn run_steady(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let tol = config.run.tolerances;
    match config.steady_model()? {
        SteadyModel::Absorption(model) => {
            let s = absorption::solve(&model)?;
            let j = s.currents;
            let pieces = s.system.pieces()?;
            let sigma = entropy_production(&s.steady.state, &pieces);
            let clausius = j.entropy_production(&model);
            let mut audit = LawAudit {
                first_law_residual: Some(j.first_law_residual().abs()),
                second_law_min_sigma: Some(sigma.sigma.min(clausius)),
                ..LawAudit::default()
            };
            for c in s.system.contacts() {
                audit.kms.extend(kms_entries(c));
            }
            if let Some(levels) = s.levels {
                audit.truncation.push(TruncationCheck {
                    levels,
                    top_population: s.top_population,
                    guard: TRUNCATION_GUARD,
                    passed: s.top_population < TRUNCATION_GUARD,
                });
            }
            audit
                .checks
                .push(Check::at_most("first_law_residual", j.first_law_residual().abs(), tol.first_law));
            audit.checks.push(Check::nonnegative("clausius_entropy_production", clausius, tol.second_law));
            audit.checks.push(Check::nonnegative("spohn_sigma_steady", sigma.sigma, tol.second_law));

            let exact = model.beta_w == 0.0 && model.work_thermalization == 0.0;
            let analytic = if exact { Some(absorption::steady_current_analytic(&model)?) } else { None };
            if let Some(a) = analytic {
                audit
                    .checks
                    .push(cross_check("j_c_analytic_vs_numeric", j.cold, a, tol.cross_check, tol.first_law));
            }
            let otto = absorption::cop(&model)?;
            let cop = (j.work != 0.0).then(|| j.cold / j.work);
            if let Some(c) = cop {
                if j.cold.abs() > tol.first_law {
                    audit.checks.push(cross_check("cop_vs_otto", c, otto, tol.cross_check, 0.0));
                }
            }
            let results = json!({
                "fridge": "absorption",
                "currents": { "J_h": j.hot, "J_c": j.cold, "J_w": j.work },
                "j_c_analytic": analytic,
                "j_c_delta": analytic.map(|a| (j.cold - a).abs()),
                "j_c_relative_delta": analytic.map(|a| relative_delta(j.cold, a)),
                "cools": j.cold > 0.0,
                "cooling_condition": model.cools(),
                "cop": cop,
                "cop_otto": otto,
                "entropy_production": clausius,
                "sigma_spohn": sigma.sigma,
                "levels": s.levels,
                "steady_residual": s.steady.residual,
                "unknowns": s.steady.unknowns,
            });
            Ok(Outcome::new(results, audit, Vec::new()))
        }
        SteadyModel::Driven(model) => {
            let warnings = model.warnings();
            let s = driven::solve_driven(&model)?;
            let j = s.currents;
            let pieces = s.system.pieces()?;
            let sigma = entropy_production(&s.steady.state, &pieces);
            let clausius = -(model.beta_h * j.hot + model.beta_c * j.cold);
            let first = (j.hot + j.cold + j.power).abs();
            let analytic = driven::jc_analytic(&model)?;
            let mut audit = LawAudit {
                first_law_residual: Some(first),
                second_law_min_sigma: Some(sigma.sigma.min(clausius)),
                ..LawAudit::default()
            };
            audit.kms.extend(kms_entries(&s.system.hot));
            audit.kms.extend(kms_entries(&s.system.cold));
            audit.truncation.push(TruncationCheck {
                levels: s.levels,
                top_population: s.top_population,
                guard: TRUNCATION_GUARD,
                passed: s.top_population < TRUNCATION_GUARD,
            });
            audit.checks.push(Check::at_most("first_law_residual", first, tol.first_law));
            audit.checks.push(Check::nonnegative("clausius_entropy_production", clausius, tol.second_law));
            audit.checks.push(Check::nonnegative("spohn_sigma_steady", sigma.sigma, tol.second_law));
            audit.checks.push(cross_check(
                "j_c_analytic_vs_numeric",
                j.cold,
                analytic,
                DRIVEN_CROSS_CHECK.max(tol.cross_check),
                tol.first_law,
            ));
            let results = json!({
                "fridge": "driven",
                "currents": { "J_h": j.hot, "J_c": j.cold, "P": j.power },
                "j_c_analytic": analytic,
                "j_c_delta": (j.cold - analytic).abs(),
                "j_c_relative_delta": relative_delta(j.cold, analytic),
                "cools": j.cold > 0.0,
                "cop": (j.power != 0.0).then(|| j.cold / j.power),
                "entropy_production": clausius,
                "sigma_spohn": sigma.sigma,
                "levels": s.levels,
                "steady_residual": s.steady.residual,
                "unknowns": s.steady.unknowns,
            });
            Ok(Outcome::new(results, audit, warnings))
        }
    }
}

fn cooling_summary(
    scenario: &CoolingScenario,
    samples: &[CoolingSample],
) -> Result<(LawAudit, Option<f64>), CliError> {
    let mut audit = LawAudit::default();
    let mut min_rate = f64::INFINITY;
    for s in samples {
        min_rate = min_rate.min(s.j_c);
        if !matches!(scenario.fridge, qfridge_core::cooling::FridgeTemplate::PowerLaw { .. }) {
            audit.kms.push(bath_kms(&scenario.bath, s.omega_c, s.t_c)?);
        }
    }
    let min_rate = min_rate.is_finite().then_some(min_rate);
    if let Some(m) = min_rate {
        // A positive current at every sample: heat only leaves the cold bath.
        audit.checks.push(Check::nonnegative("min_cold_current", m, 0.0));
    }
    Ok((audit, min_rate))
}

fn run_cool(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let scenario = config.cooling_scenario()?;
    let traj = integrate_cooling(&scenario)?;
    let mut warnings = traj.warnings.clone();
    if let Some(reason) = &traj.stop_reason {
        warnings.push(format!("integration stopped early: {reason}"));
    }
    let fit = match traj.zeta_fit {
        Some(f) => Some(f),
        None => match fit_zeta(&traj) {
            Ok(f) => Some(f),
            Err(e) => {
                warnings.push(format!("no exponent fit: {e}"));
                None
            }
        },
    };
    let verdict: Option<UnattainabilityReport> = fit.as_ref().map(|f| unattainability_report(f, &traj)).transpose()?;
    let quadrature = match &verdict {
        Some(v) if v.t0.is_some() => match time_to_zero_quadrature(&scenario) {
            Ok(q) => Some(q),
            Err(e) => {
                warnings.push(format!("time-to-zero quadrature failed: {e}"));
                None
            }
        },
        _ => None,
    };
    if let Some(v) = verdict.as_ref().filter(|v| v.low_confidence) {
        warnings.push(format!("low-confidence exponent fit (zeta = {:.4})", v.zeta));
    }
    let (audit, min_rate) = cooling_summary(&scenario, &traj.samples)?;
    let results = json!({
        "scenario": scenario,
        "samples": traj.samples.len(),
        "terminated_at_floor": traj.terminated_at_floor,
        "truncated": traj.truncated,
        "stop_reason": traj.stop_reason,
        "fit": fit,
        "verdict": verdict,
        "t0_quadrature": quadrature,
        "t0_relative_delta": verdict.as_ref().and_then(|v| v.t0).zip(quadrature).map(|(a, q)| ((a - q) / q).abs()),
        "min_cold_current": min_rate,
        "van_hove": match scenario.bath {
            BathSpectrum::Bosonic(b) => Some(van_hove_classify(b.d, b.kappa)),
            BathSpectrum::Gas(_) => None,
        },
    });
    let mut out = Outcome::new(results, audit, warnings);
    out.trajectory = Some(traj.samples);
    Ok(out)
}

/// One sweep grid point. Rows keep the grid order whatever the thread count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub bath: String,
    pub d: Option<u32>,
    pub kappa: Option<f64>,
    pub statistics: Option<Statistics>,
    pub status: String,
    pub zeta: Option<f64>,
    pub residual: Option<f64>,
    pub verdict: Option<String>,
    pub t0: Option<f64>,
    pub t_final: Option<f64>,
    #[serde(rename = "T_final")]
    pub temperature_final: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    pub const HEADER: [&'static str; 13] = [
        "index",
        "bath",
        "d",
        "kappa",
        "statistics",
        "status",
        "zeta",
        "residual",
        "verdict",
        "t0",
        "t_final",
        "T_final",
        "error",
    ];

    fn blank(index: usize, bath: &str) -> Self {
        Self {
            index,
            bath: bath.into(),
            d: None,
            kappa: None,
            statistics: None,
            status: String::new(),
            zeta: None,
            residual: None,
            verdict: None,
            t0: None,
            t_final: None,
            temperature_final: None,
            error: None,
        }
    }
}

enum Point {
    Bosonic { d: u32, kappa: f64 },
    Gas(Statistics),
}

fn sweep_points(config: &ScenarioConfig) -> Vec<Point> {
    let Some(grid) = &config.run.grid else { return Vec::new() };
    let mut points = Vec::new();
    for &d in &grid.d {
        for &kappa in &grid.kappa {
            points.push(Point::Bosonic { d, kappa });
        }
    }
    points.extend(grid.gases.iter().map(|&s| Point::Gas(s)));
    points
}

fn sweep_row(index: usize, point: &Point, config: &ScenarioConfig, base: &CoolingScenario) -> SweepRow {
    let (mut row, scenario) = match *point {
        Point::Bosonic { d, kappa } => {
            let mut row = SweepRow {
                d: Some(d),
                kappa: Some(kappa),
                ..SweepRow::blank(index, "bosonic")
            };
            if !van_hove_classify(d, kappa).ground_state_exists {
                row.status = UNSTABLE_FIELD.into();
                return row;
            }
            let g0 = match base.bath {
                BathSpectrum::Bosonic(b) => b.g0,
                BathSpectrum::Gas(_) => 1.0,
            };
            let c0 = match base.capacity {
                HeatCapacityModel::BosonicSolid { c0, .. } => c0,
                _ => 1.0,
            };
            let scenario = CoolingScenario {
                bath: BathSpectrum::Bosonic(BosonicBath { d, kappa, g0, temperature: 1.0 }),
                capacity: HeatCapacityModel::BosonicSolid { d, c0 },
                ..*base
            };
            (row, scenario)
        }
        Point::Gas(statistics) => {
            let row = SweepRow {
                statistics: Some(statistics),
                ..SweepRow::blank(index, "gas")
            };
            let g = config
                .run
                .grid
                .as_ref()
                .and_then(|g| g.gas)
                .expect("validated: gas rows carry gas parameters");
            let scenario = CoolingScenario {
                bath: BathSpectrum::Gas(GasBath {
                    n: g.n,
                    m: g.m,
                    a_s: g.a_s,
                    temperature: 1.0,
                    statistics,
                    t_crit: Some(g.t_crit),
                }),
                capacity: HeatCapacityModel::IdealGas { statistics, t_crit: Some(g.t_crit), c0: g.c0 },
                ..*base
            };
            (row, scenario)
        }
    };
    let result = integrate_cooling(&scenario).and_then(|traj| {
        let fit = match traj.zeta_fit {
            Some(f) => f,
            None => fit_zeta(&traj)?,
        };
        let report = unattainability_report(&fit, &traj)?;
        Ok((traj, fit, report))
    });
    match result {
        Ok((traj, fit, report)) => {
            row.status = "ok".into();
            row.zeta = Some(fit.zeta);
            row.residual = Some(fit.residual);
            row.verdict = Some(
                serde_json::to_value(report.verdict)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
            );
            row.t0 = report.t0;
            if let Some(last) = traj.samples.last() {
                row.t_final = Some(last.t);
                row.temperature_final = Some(last.t_c);
            }
        }
        Err(e) => {
            row.status = "error".into();
            row.error = Some(e.to_string());
        }
    }
    row
}

fn run_sweep(config: &ScenarioConfig, threads: Option<usize>) -> Result<Outcome, CliError> {
    let base = config.sweep_base()?;
    let points = sweep_points(config);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot build a pool of {threads:?} threads: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(i, p)| sweep_row(i, p, config, &base))
            .collect()
    });
    let mut warnings = Vec::new();
    let mut audit = LawAudit::default();
    for r in &rows {
        match r.status.as_str() {
            "error" => warnings.push(format!("row {} failed: {}", r.index, r.error.as_deref().unwrap_or(""))),
            UNSTABLE_FIELD => warnings.push(format!("row {} skipped: {UNSTABLE_FIELD}", r.index)),
            _ => {}
        }
    }
    // KMS of every evaluated bath at the start temperature and optimal tuning.
    for (p, r) in points.iter().zip(&rows) {
        if r.status != "ok" {
            continue;
        }
        let bath = match *p {
            Point::Bosonic { d, kappa } => BathSpectrum::Bosonic(BosonicBath { d, kappa, g0: 1.0, temperature: 1.0 }),
            Point::Gas(statistics) => {
                let g = config.run.grid.as_ref().and_then(|g| g.gas).expect("validated");
                BathSpectrum::Gas(GasBath {
                    n: g.n,
                    m: g.m,
                    a_s: g.a_s,
                    temperature: 1.0,
                    statistics,
                    t_crit: Some(g.t_crit),
                })
            }
        };
        let x = qfridge_core::cooling::optimal_ratio(&bath)?;
        audit.kms.push(bath_kms(&bath, x * base.t_start, base.t_start)?);
    }
    let count = |s: &str| rows.iter().filter(|r| r.status == s).count();
    let results = json!({
        "rows": rows.len(),
        "ok": count("ok"),
        "skipped": count(UNSTABLE_FIELD),
        "failed": count("error"),
        "table": rows,
    });
    let mut out = Outcome::new(results, audit, warnings);
    out.sweep = Some(rows);
    Ok(out)
}

type StateFn<T> = Box<dyn Fn(&DensityMatrix) -> Result<T, CliError>>;

/// Dissipative pieces, contacts, generator and truncation of the model under audit.
struct Audited {
    pieces: Vec<(Superoperator, LocalGibbsReference)>,
    contacts: Vec<ThermalContact>,
    generator: Superoperator,
    /// Oscillator factors whose top level is guarded.
    guarded: Vec<usize>,
    levels: Option<usize>,
    /// `(β_j, J_j)` at a state, for the Clausius sum.
    flows: StateFn<Vec<(f64, f64)>>,
    /// Energy balance residual at a state.
    first_law: StateFn<f64>,
}

fn audited(model: SteadyModel, scale: f64) -> Result<Audited, CliError> {
    Ok(match model {
        SteadyModel::Absorption(m) => {
            let system = AbsorptionSystem::new(&m)?.with_cold_upward_scale(scale)?;
            let (guarded, levels) = match m.medium {
                Medium::Tls => (Vec::new(), None),
                Medium::Oscillator(n) => (vec![0, 1], Some(n)),
            };
            let sys = system.clone();
            let sys2 = system.clone();
            Audited {
                pieces: system.pieces()?,
                contacts: system.contacts().into_iter().cloned().collect(),
                generator: system.generator.clone(),
                guarded,
                levels,
                flows: Box::new(move |rho| {
                    let j = sys.currents(rho)?;
                    Ok(vec![(m.beta_h, j.hot), (m.beta_c, j.cold), (m.beta_w, j.work)])
                }),
                first_law: Box::new(move |rho| Ok(sys2.currents(rho)?.first_law_residual().abs())),
            }
        }
        SteadyModel::Driven(m) => {
            let system = DrivenSystem::new(&m)?.with_cold_upward_scale(scale)?;
            let sys = system.clone();
            Audited {
                pieces: system.pieces()?,
                contacts: vec![system.hot.clone(), system.cold.clone()],
                generator: system.generator.clone(),
                guarded: vec![0, 1],
                levels: Some(m.levels),
                flows: Box::new(move |rho| {
                    let (h, c) = sys.currents(rho)?;
                    Ok(vec![(m.beta_h, h), (m.beta_c, c)])
                }),
                // P = -(J_h + J_c) closes the balance exactly; nothing further to measure.
                first_law: Box::new(|_| Ok(0.0)),
            }
        }
    })
}

fn run_verify_laws(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let tol = config.run.tolerances;
    let scale = config.run.upward_scale.unwrap_or(1.0);
    let model = config.steady_model()?;
    let a = audited(model, scale)?;
    let mut warnings = Vec::new();
    if scale != 1.0 {
        warnings.push(format!("fault injection: cold upward rates scaled by {scale}"));
    }
    let mut audit = LawAudit::default();
    for c in &a.contacts {
        audit.kms.extend(kms_entries(c));
    }
    let worst_reference = a
        .pieces
        .iter()
        .map(|(l, r)| r.stationarity_defect(l))
        .fold(0.0, f64::max);
    audit
        .checks
        .push(Check::at_most("reference_stationarity", worst_reference, tol.reference_stationarity));

    let steady = steady_state(&a.generator)?;
    audit.checks.push(Check {
        name: "ergodic".into(),
        value: steady.null_dimension as f64,
        tolerance: 1.0,
        passed: steady.is_ergodic(),
    });
    let rho = &steady.state;
    if let Some(levels) = a.levels {
        let mut top: f64 = 0.0;
        for &f in &a.guarded {
            top = top.max(rho.top_level_population(f)?);
        }
        audit.truncation.push(TruncationCheck {
            levels,
            top_population: top,
            guard: TRUNCATION_GUARD,
            passed: top < TRUNCATION_GUARD,
        });
    }
    let first = (a.first_law)(rho)?;
    audit.first_law_residual = Some(first);
    audit.checks.push(Check::at_most("first_law_residual", first, tol.first_law));
    let clausius: f64 = -(a.flows)(rho)?.iter().map(|(b, j)| b * j).sum::<f64>();
    audit.checks.push(Check::nonnegative("clausius_entropy_production", clausius, tol.second_law));
    let sigma_ss = entropy_production(rho, &a.pieces).sigma;
    audit.checks.push(Check::nonnegative("spohn_sigma_steady", sigma_ss, tol.second_law));

    // Random states: Spohn positivity at the state itself, trace preservation,
    // and positivity along relaxation for the first few when propagation is cheap.
    let mut rng = ChaCha8Rng::seed_from_u64(config.run.seed);
    let space = a.generator.space().clone();
    let grid: Vec<f64> = (0..=10).map(|k| 0.5 * k as f64).collect();
    let mut min_sigma = sigma_ss;
    let mut trace_defect: f64 = 0.0;
    for k in 0..config.run.random_states {
        let rho0 = DensityMatrix::random(&space, &mut rng);
        min_sigma = min_sigma.min(entropy_production(&rho0, &a.pieces).sigma);
        trace_defect = trace_defect.max(a.generator.apply(rho0.matrix()).trace().norm());
        if k < EVOLVED_STATES && space.dim() <= DENSE_EXP_LIMIT {
            for r in evolve(&rho0, &a.generator, &grid)? {
                min_sigma = min_sigma.min(entropy_production(&r, &a.pieces).sigma);
            }
        }
    }
    audit.second_law_min_sigma = Some(min_sigma);
    audit
        .checks
        .push(Check::nonnegative("spohn_sigma_min_over_states", min_sigma, tol.second_law));
    audit.checks.push(Check::at_most("trace_preservation", trace_defect, tol.first_law));

    let results = json!({
        "fridge": match model { SteadyModel::Absorption(_) => "absorption", SteadyModel::Driven(_) => "driven" },
        "upward_scale": scale,
        "random_states": config.run.random_states,
        "seed": config.run.seed,
        "dimension": space.dim(),
        "steady_residual": steady.residual,
        "kms_tolerance": lgks::KMS_TOL,
        "checks": audit.checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed })).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(results, audit, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str, mode: Mode) -> ScenarioConfig {
        ScenarioConfig::from_toml(text, mode).unwrap()
    }

    const TLS: &str = r#"
version = 1
[fridge]
type = "absorption"
medium = "tls"
omega_h = 2.0
omega_c = 1.0
beta_h = 1.0
beta_c = 1.5
"#;

    #[test]
    fn steady_tls_cross_check_passes() {
        let run = execute(Mode::Steady, &cfg(TLS, Mode::Steady), None).unwrap();
        assert!(run.report.passed, "{:?}", run.report.warnings);
        let delta = run.report.results["j_c_delta"].as_f64().unwrap();
        assert!(delta < 1e-8 * 0.0234);
    }

    #[test]
    fn equilibrium_has_no_currents() {
        let text = TLS.replace("beta_c = 1.5", "beta_c = 1.0\nbeta_w = 1.0");
        let run = execute(Mode::Steady, &cfg(&text, Mode::Steady), None).unwrap();
        for k in ["J_h", "J_c", "J_w"] {
            assert!(run.report.results["currents"][k].as_f64().unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn verify_laws_passes_then_fails_under_fault() {
        let good = execute(Mode::VerifyLaws, &cfg(TLS, Mode::VerifyLaws), None).unwrap();
        assert!(good.report.passed, "{:?}", good.report.warnings);
        assert!(good.report.law_audit.second_law_min_sigma.unwrap() >= -1e-10);

        let broken = format!("{TLS}[run]\nupward_scale = 2.0\n");
        let bad = execute(Mode::VerifyLaws, &cfg(&broken, Mode::VerifyLaws), None).unwrap();
        assert!(!bad.report.passed);
        assert_eq!(bad.exit_code(), 1);
        assert!(bad.report.law_audit.kms.iter().any(|k| !k.passed));
    }

    #[test]
    fn sweep_filters_van_hove_and_keeps_order() {
        let text = r#"
version = 1
[fridge]
type = "absorption"
medium = "tls"
omega_h = 20.0
beta_h = 1.0
[run]
t_start = 0.1
[run.grid]
d = [1, 3]
kappa = [0.5, 1.0]
"#;
        let c = cfg(text, Mode::Sweep);
        let one = execute(Mode::Sweep, &c, Some(1)).unwrap();
        let four = execute(Mode::Sweep, &c, Some(4)).unwrap();
        let rows = one.sweep.unwrap();
        assert_eq!(rows, four.sweep.unwrap());
        assert_eq!(rows.len(), 4);
        // κ > 2 - d fails for d = 1 at both κ.
        assert!(rows[..2].iter().all(|r| r.status == UNSTABLE_FIELD));
        assert!(rows[2..].iter().all(|r| r.status == "ok"));
        assert!((rows[3].zeta.unwrap() - 1.0).abs() < 0.05);
    }

    #[test]
    fn fully_filtered_sweep_is_a_valid_empty_report() {
        let text = r#"
version = 1
[fridge]
type = "absorption"
medium = "tls"
omega_h = 20.0
beta_h = 1.0
[run]
t_start = 0.1
[run.grid]
d = [1]
kappa = [0.5, 1.0]
"#;
        let run = execute(Mode::Sweep, &cfg(text, Mode::Sweep), None).unwrap();
        let rows = run.sweep.unwrap();
        assert!(rows.iter().all(|r| r.status == UNSTABLE_FIELD));
        assert_eq!(run.report.results["ok"], 0);
        assert!(run.report.passed);
    }
}
