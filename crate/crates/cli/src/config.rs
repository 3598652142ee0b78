//! Scenario files: one TOML document per run, unknown keys rejected.
//!
//! ```toml
//! version = 1
//!
//! [fridge]
//! type = "absorption"
//! medium = "tls"
//! omega_h = 2.0
//! omega_c = 1.0
//! beta_h = 1.0
//! beta_c = 1.5
//!
//! [run]
//! seed = 7
//! ```

use std::path::{Path, PathBuf};

use qfridge_core::absorption::{AbsorptionModel, Medium, DEFAULT_LEVELS};
use qfridge_core::cooling::{CoolingScenario, CurrentSource, FridgeTemplate, TuningPolicy, SAMPLES_PER_DECADE};
use qfridge_core::driven::{DrivenModel, DrivenRates};
use qfridge_core::{BathSpectrum, HeatCapacityModel, Statistics};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

fn one() -> f64 {
    1.0
}

fn default_levels() -> usize {
    DEFAULT_LEVELS
}

fn default_samples() -> usize {
    SAMPLES_PER_DECADE
}

fn default_random_states() -> usize {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub version: u32,
    #[serde(default)]
    pub fridge: Option<FridgeConfig>,
    #[serde(default)]
    pub bath: BathConfig,
    #[serde(default)]
    pub run: RunConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Refrigerator parameters. Cold-side fields (`omega_c`, `beta_c`, `lambda`,
/// `gamma_c`) are needed by steady-state modes and ignored when cooling,
/// where the tuning policy and the instantaneous temperature set them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FridgeConfig {
    Absorption {
        medium: Medium,
        omega_h: f64,
        #[serde(default)]
        omega_c: Option<f64>,
        beta_h: f64,
        #[serde(default)]
        beta_c: Option<f64>,
        #[serde(default)]
        beta_w: f64,
        #[serde(default = "one")]
        gamma_h: f64,
        /// Constant cold rate; when absent the bath spectrum (or 1) is used.
        #[serde(default)]
        gamma_c: Option<f64>,
        #[serde(default = "one")]
        gamma_w: f64,
        #[serde(default)]
        delta_h: f64,
        #[serde(default)]
        delta_c: f64,
        #[serde(default)]
        work_thermalization: f64,
    },
    Driven {
        omega_h: f64,
        #[serde(default)]
        omega_c: Option<f64>,
        #[serde(default)]
        lambda: Option<f64>,
        beta_h: f64,
        #[serde(default)]
        beta_c: Option<f64>,
        #[serde(default = "one")]
        gamma_h: f64,
        #[serde(default)]
        gamma_c: Option<f64>,
        #[serde(default = "default_levels")]
        levels: usize,
    },
    /// Synthetic `J_c = coefficient · T^exponent`, cooling modes only.
    PowerLaw { coefficient: f64, exponent: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    #[serde(default)]
    pub spectrum: Option<BathSpectrum>,
    #[serde(default)]
    pub capacity: Option<HeatCapacityModel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Steady,
    Cool,
    Sweep,
    VerifyLaws,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Steady => "steady",
            Mode::Cool => "cool",
            Mode::Sweep => "sweep",
            Mode::VerifyLaws => "verify-laws",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional; when present it must match the subcommand.
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub t_start: Option<f64>,
    #[serde(default)]
    pub t_floor: Option<f64>,
    #[serde(default)]
    pub tuning: TuningPolicy,
    #[serde(default)]
    pub source: CurrentSource,
    #[serde(default = "default_samples")]
    pub samples_per_decade: usize,
    #[serde(default)]
    pub grid: Option<SweepGrid>,
    /// Random states in the entropy-production sweep of `verify-laws`.
    #[serde(default = "default_random_states")]
    pub random_states: usize,
    /// Multiplies the cold contact's upward rates; anything but 1 breaks
    /// detailed balance on purpose.
    #[serde(default)]
    pub upward_scale: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: None,
            seed: 0,
            t_start: None,
            t_floor: None,
            tuning: TuningPolicy::default(),
            source: CurrentSource::default(),
            samples_per_decade: SAMPLES_PER_DECADE,
            grid: None,
            random_states: default_random_states(),
            upward_scale: None,
            tolerances: Tolerances::default(),
        }
    }
}

/// Parameter grid of a sweep. Bosonic rows cover `d × kappa`; each entry of
/// `gases` adds one ideal-gas row using `gas` for the bath parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    #[serde(default)]
    pub d: Vec<u32>,
    #[serde(default)]
    pub kappa: Vec<f64>,
    #[serde(default)]
    pub gases: Vec<Statistics>,
    #[serde(default)]
    pub gas: Option<GasParameters>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasParameters {
    pub n: f64,
    pub m: f64,
    pub a_s: f64,
    pub t_crit: f64,
    #[serde(default = "one")]
    pub c0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "tol_first")]
    pub first_law: f64,
    #[serde(default = "tol_second")]
    pub second_law: f64,
    #[serde(default = "tol_kms")]
    pub kms: f64,
    #[serde(default = "tol_cross")]
    pub cross_check: f64,
    #[serde(default = "tol_reference")]
    pub reference_stationarity: f64,
}

fn tol_first() -> f64 {
    1e-10
}
fn tol_second() -> f64 {
    1e-10
}
fn tol_kms() -> f64 {
    qfridge_core::lgks::KMS_TOL
}
fn tol_cross() -> f64 {
    1e-8
}
fn tol_reference() -> f64 {
    1e-10
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            first_law: tol_first(),
            second_law: tol_second(),
            kms: tol_kms(),
            cross_check: tol_cross(),
            reference_stationarity: tol_reference(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output directory; `--out` overrides it. Defaults to the working directory.
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

/// A fully specified refrigerator for the steady-state modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SteadyModel {
    Absorption(AbsorptionModel),
    Driven(DrivenModel),
}

impl ScenarioConfig {
    /// Parses and validates for `mode`.
    pub fn from_toml(text: &str, mode: Mode) -> Result<Self, CliError> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate(mode)?;
        Ok(cfg)
    }

    pub fn load(path: &Path, mode: Mode) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text, mode)
    }

    /// Checks everything `mode` will use before any computation.
    pub fn validate(&self, mode: Mode) -> Result<(), CliError> {
        if let Some(m) = self.run.mode {
            if m != mode {
                return Err(CliError::Config(format!(
                    "config declares mode `{}` but `{}` was requested",
                    m.name(),
                    mode.name()
                )));
            }
        }
        if self.version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.version
            )));
        }
        if let Some(s) = self.bath.spectrum {
            s.validate().map_err(CliError::from_core_config)?;
        }
        if let Some(c) = self.bath.capacity {
            c.validate().map_err(CliError::from_core_config)?;
        }
        match mode {
            Mode::Steady | Mode::VerifyLaws => {
                self.steady_model()?;
            }
            Mode::Cool => {
                self.cooling_scenario()?.validate().map_err(CliError::from_core_config)?;
            }
            Mode::Sweep => {
                let grid = self
                    .run
                    .grid
                    .as_ref()
                    .ok_or_else(|| CliError::Config("sweep mode needs [run.grid]".into()))?;
                if !grid.gases.is_empty() && grid.gas.is_none() {
                    return Err(CliError::Config("gas rows need [run.grid.gas] parameters".into()));
                }
                if !grid.kappa.is_empty() && grid.d.is_empty() {
                    return Err(CliError::Config("run.grid.kappa given without run.grid.d".into()));
                }
                self.sweep_base()?.validate().map_err(CliError::from_core_config)?;
            }
        }
        let t = &self.run.tolerances;
        for (name, v) in [
            ("first_law", t.first_law),
            ("second_law", t.second_law),
            ("kms", t.kms),
            ("cross_check", t.cross_check),
            ("reference_stationarity", t.reference_stationarity),
        ] {
            if !(v > 0.0) {
                return Err(CliError::Config(format!("tolerance {name} = {v} must be positive")));
            }
        }
        if let Some(s) = self.run.upward_scale {
            if !(s >= 0.0) || !s.is_finite() {
                return Err(CliError::Config(format!("upward_scale = {s} must be finite and nonnegative")));
            }
        }
        Ok(())
    }

    fn fridge(&self) -> Result<FridgeConfig, CliError> {
        self.fridge.ok_or_else(|| CliError::Config("missing [fridge] section".into()))
    }

    /// Builds the steady-state model; cold rates come from `gamma_c`, else
    /// from the bath spectrum at the cold temperature, else default to 1.
    pub fn steady_model(&self) -> Result<SteadyModel, CliError> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| CliError::Config(format!("steady modes need fridge.{name}")))
        };
        let model = match self.fridge()? {
            FridgeConfig::Absorption {
                medium,
                omega_h,
                omega_c,
                beta_h,
                beta_c,
                beta_w,
                gamma_h,
                gamma_c,
                gamma_w,
                delta_h,
                delta_c,
                work_thermalization,
            } => {
                let omega_c = need(omega_c, "omega_c")?;
                let beta_c = need(beta_c, "beta_c")?;
                let gamma_c = match (gamma_c, self.bath.spectrum) {
                    (Some(g), _) => g,
                    (None, Some(spec)) => spec
                        .at_temperature(1.0 / beta_c)
                        .rate(omega_c)
                        .map_err(CliError::from_core_config)?,
                    (None, None) => 1.0,
                };
                let model = AbsorptionModel {
                    medium,
                    omega_h,
                    omega_c,
                    gamma_h,
                    gamma_c,
                    gamma_w,
                    beta_h,
                    beta_c,
                    beta_w,
                    delta_h,
                    delta_c,
                    work_thermalization,
                };
                model.validate().map_err(CliError::from_core_config)?;
                SteadyModel::Absorption(model)
            }
            FridgeConfig::Driven { omega_h, omega_c, lambda, beta_h, beta_c, gamma_h, gamma_c, levels } => {
                let omega_c = need(omega_c, "omega_c")?;
                let lambda = need(lambda, "lambda")?;
                let beta_c = need(beta_c, "beta_c")?;
                let cold = |w: f64| -> Result<f64, CliError> {
                    match (gamma_c, self.bath.spectrum) {
                        (Some(g), _) => Ok(g),
                        (None, Some(spec)) => spec.at_temperature(1.0 / beta_c).rate(w).map_err(CliError::from_core_config),
                        (None, None) => Ok(1.0),
                    }
                };
                if !(omega_c > lambda) {
                    return Err(CliError::Config(format!("need omega_c > lambda, got {omega_c} and {lambda}")));
                }
                let rates = DrivenRates::Constant {
                    h_plus: gamma_h,
                    h_minus: gamma_h,
                    c_plus: cold(omega_c + lambda)?,
                    c_minus: cold(omega_c - lambda)?,
                };
                let model = DrivenModel {
                    levels,
                    ..DrivenModel::new(omega_h, omega_c, lambda, beta_h, beta_c, rates)
                };
                model.validate().map_err(CliError::from_core_config)?;
                SteadyModel::Driven(model)
            }
            FridgeConfig::PowerLaw { .. } => {
                return Err(CliError::Config("power-law fridges only support cooling modes".into()))
            }
        };
        Ok(model)
    }

    fn template(&self) -> Result<FridgeTemplate, CliError> {
        Ok(match self.fridge()? {
            FridgeConfig::Absorption { medium, omega_h, beta_h, gamma_h, gamma_w, .. } => {
                FridgeTemplate::Absorption { medium, omega_h, beta_h, gamma_h, gamma_w }
            }
            FridgeConfig::Driven { omega_h, beta_h, gamma_h, levels, .. } => {
                FridgeTemplate::Driven { omega_h, beta_h, gamma_h, levels }
            }
            FridgeConfig::PowerLaw { coefficient, exponent } => FridgeTemplate::PowerLaw { coefficient, exponent },
        })
    }

    fn scenario_with(&self, bath: BathSpectrum, capacity: HeatCapacityModel) -> Result<CoolingScenario, CliError> {
        let t_start = self
            .run
            .t_start
            .ok_or_else(|| CliError::Config("cooling modes need run.t_start".into()))?;
        Ok(CoolingScenario {
            tuning: self.run.tuning,
            t_floor: self.run.t_floor,
            source: self.run.source,
            samples_per_decade: self.run.samples_per_decade,
            ..CoolingScenario::new(self.template()?, bath, capacity, t_start)
        })
    }

    pub fn cooling_scenario(&self) -> Result<CoolingScenario, CliError> {
        let bath = self
            .bath
            .spectrum
            .ok_or_else(|| CliError::Config("cooling needs bath.spectrum".into()))?;
        let capacity = self
            .bath
            .capacity
            .ok_or_else(|| CliError::Config("cooling needs bath.capacity".into()))?;
        self.scenario_with(bath, capacity)
    }

    /// Sweep rows replace bath and capacity; this template carries the rest.
    pub fn sweep_base(&self) -> Result<CoolingScenario, CliError> {
        let bath = self.bath.spectrum.unwrap_or(BathSpectrum::Bosonic(qfridge_core::BosonicBath {
            d: 3,
            kappa: 1.0,
            g0: 1.0,
            temperature: 1.0,
        }));
        let capacity = self
            .bath
            .capacity
            .unwrap_or(HeatCapacityModel::BosonicSolid { d: 3, c0: 1.0 });
        self.scenario_with(bath, capacity)
    }
}
