//! Cooling a finite cold bath: `c_V(T) dT/dt = -J_c(T)` with the refrigerator
//! retuned at every temperature, the low-temperature exponent `ζ` of
//! `dT/dt ~ -T^ζ`, and the resulting verdict on reaching `T = 0`.
//!
//! Tuning is quasistatic: the current at each instant is the stationary
//! current of the refrigerator at the instantaneous `(ω_c, λ, T_c)`.

use serde::{Deserialize, Serialize};

use crate::absorption::{self, AbsorptionModel, Medium, DEFAULT_LEVELS};
use crate::bath::{heat_capacity, BathSpectrum, BosonicBath, HeatCapacityModel};
use crate::driven::{self, DrivenModel, DrivenRates};
use crate::error::{invalid, Error, Result};
use crate::numerics::bessel::k1e;
use crate::numerics::ode::Dopri5;
use crate::numerics::quad::Quadrature;
use crate::numerics::roots::{bisect, golden_max};

pub const SAMPLES_PER_DECADE: usize = 40;
pub const MIN_FIT_SAMPLES: usize = 20;
/// `|ζ - 1|` below this is read as an exponential approach.
pub const EXPONENTIAL_BAND: f64 = 0.05;
/// Fits with an RMS log-residual above this are flagged low-confidence.
pub const LOW_CONFIDENCE_RESIDUAL: f64 = 0.1;

/// Largest `ω_c/T_c` considered by numerical optimisation.
const MAX_RATIO: f64 = 60.0;

fn one() -> f64 {
    1.0
}

fn default_levels() -> usize {
    DEFAULT_LEVELS
}

/// The refrigerator with its hot side fixed; the cold side follows the tuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FridgeTemplate {
    Absorption {
        medium: Medium,
        omega_h: f64,
        beta_h: f64,
        #[serde(default = "one")]
        gamma_h: f64,
        #[serde(default = "one")]
        gamma_w: f64,
    },
    Driven {
        omega_h: f64,
        beta_h: f64,
        #[serde(default = "one")]
        gamma_h: f64,
        #[serde(default = "default_levels")]
        levels: usize,
    },
    /// `J_c = coefficient · T^exponent`, independent of tuning.
    PowerLaw { coefficient: f64, exponent: f64 },
}

/// How `(ω_c, λ)` follow the cold temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TuningPolicy {
    /// `ω_c = x*·T` with the optimal ratio of the bath; `λ = r·T`, `r`
    /// defaulting to `x*/2`.
    Optimal {
        #[serde(default)]
        lambda_ratio: Option<f64>,
    },
    /// `ω_c = omega_ratio·T`, `λ = lambda_ratio·T`.
    Ratio {
        omega_ratio: f64,
        #[serde(default)]
        lambda_ratio: Option<f64>,
    },
    /// Maximises the current itself at each temperature, over `ω_c` and,
    /// for the driven refrigerator, over `λ`.
    NumericOpt,
}

impl Default for TuningPolicy {
    fn default() -> Self {
        TuningPolicy::Optimal { lambda_ratio: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurrentSource {
    /// Asymptotic `ω_c γ_c e^{-ω_c/T_c}` (summed over sidebands when driven).
    #[default]
    LowTemperature,
    /// Closed-form stationary current with the work bath infinitely hot.
    FullAnalytic,
    /// Stationary state of the full generator. Slow.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoolingScenario {
    pub fridge: FridgeTemplate,
    pub bath: BathSpectrum,
    pub capacity: HeatCapacityModel,
    #[serde(default)]
    pub tuning: TuningPolicy,
    pub t_start: f64,
    /// Defaults to `t_start / 1000`.
    #[serde(default)]
    pub t_floor: Option<f64>,
    #[serde(default)]
    pub source: CurrentSource,
    #[serde(default = "default_samples")]
    pub samples_per_decade: usize,
}

fn default_samples() -> usize {
    SAMPLES_PER_DECADE
}

impl CoolingScenario {
    pub fn new(fridge: FridgeTemplate, bath: BathSpectrum, capacity: HeatCapacityModel, t_start: f64) -> Self {
        Self {
            fridge,
            bath,
            capacity,
            tuning: TuningPolicy::default(),
            t_start,
            t_floor: None,
            source: CurrentSource::default(),
            samples_per_decade: SAMPLES_PER_DECADE,
        }
    }

    pub fn floor(&self) -> f64 {
        self.t_floor.unwrap_or(self.t_start / 1000.0)
    }

    pub fn validate(&self) -> Result<()> {
        let floor = self.floor();
        if !(floor > 0.0) || !(self.t_start > floor) || !self.t_start.is_finite() {
            return Err(invalid(
                "t_start",
                format!("need t_start > t_floor > 0, got {} and {floor}", self.t_start),
            ));
        }
        if self.samples_per_decade < 2 {
            return Err(invalid("samples_per_decade", "at least 2 samples per decade"));
        }
        self.capacity.validate()?;
        self.bath.at_temperature(self.t_start).validate()?;
        match self.fridge {
            FridgeTemplate::Absorption { omega_h, beta_h, gamma_h, gamma_w, .. } => {
                if !(omega_h > 0.0 && beta_h > 0.0 && gamma_h > 0.0 && gamma_w > 0.0) {
                    return Err(invalid("fridge", "omega_h, beta_h and rates must be positive"));
                }
                if self.t_start * beta_h > 1.0 {
                    return Err(invalid("t_start", "cold bath must start no hotter than the hot bath"));
                }
            }
            FridgeTemplate::Driven { omega_h, beta_h, gamma_h, levels } => {
                if !(omega_h > 0.0 && beta_h > 0.0 && gamma_h > 0.0) || levels < 2 {
                    return Err(invalid("fridge", "omega_h, beta_h, gamma_h must be positive, levels >= 2"));
                }
            }
            FridgeTemplate::PowerLaw { coefficient, exponent } => {
                if !(coefficient > 0.0) || !exponent.is_finite() {
                    return Err(invalid("fridge", "power-law coefficient must be positive"));
                }
            }
        }
        if let TuningPolicy::Ratio { omega_ratio, .. } = self.tuning {
            if !(omega_ratio > 0.0) {
                return Err(invalid("omega_ratio", format!("{omega_ratio} must be positive")));
            }
        }
        Ok(())
    }
}

/// Root of `(d+κ)(1 - e^{-x}) = x`, the `x = ω_c/T_c` maximising
/// `x^{d+κ}/(e^x - 1)`.
pub fn optimal_frequency_ratio(bath: &BosonicBath) -> Result<f64> {
    let s = bath.d as f64 + bath.kappa;
    if !(s > 1.0) {
        return Err(invalid("kappa", format!("d + kappa = {s} must exceed 1")));
    }
    let f = |x: f64| s * -(-x).exp_m1() - x;
    let x = bisect(f, 1e-12, s, 1e-15)?;
    if f(x).abs() >= 1e-10 {
        return Err(Error::Root(format!("residual {:.3e} at x = {x}", f(x))));
    }
    let g = |x: f64| s * x.ln() - x.exp_m1().ln();
    let h = 1e-3 * x;
    if g(x + h) + g(x - h) - 2.0 * g(x) >= 0.0 {
        return Err(Error::Root(format!("x = {x} is not a maximum")));
    }
    Ok(x)
}

/// `x` maximising `x² K₁(x/2) e^{-x/2}`, the shape of the gas-bath current at
/// fixed temperature.
pub fn optimal_gas_ratio() -> f64 {
    golden_max(|x| 2.0 * x.ln() + k1e(0.5 * x).ln() - x, 1e-3, MAX_RATIO, 1e-12)
}

/// Optimal `ω_c/T_c` for a cold bath.
pub fn optimal_ratio(bath: &BathSpectrum) -> Result<f64> {
    match bath {
        BathSpectrum::Bosonic(b) => optimal_frequency_ratio(b),
        BathSpectrum::Gas(_) => Ok(optimal_gas_ratio()),
    }
}

/// Cold-side parameters at one temperature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tuning {
    pub omega_c: f64,
    pub lambda: f64,
}

/// Cold current for the scenario at temperature `t` and the given tuning.
pub fn current_at(scenario: &CoolingScenario, t: f64, tuning: Tuning) -> Result<f64> {
    Ok(evaluate(scenario, t, tuning)?.0)
}

/// Current and whether a low-temperature formula was used outside its regime.
fn evaluate(scenario: &CoolingScenario, t: f64, tuning: Tuning) -> Result<(f64, bool)> {
    let bath = scenario.bath.at_temperature(t);
    let Tuning { omega_c, lambda } = tuning;
    match scenario.fridge {
        FridgeTemplate::PowerLaw { coefficient, exponent } => Ok((coefficient * t.powf(exponent), false)),
        FridgeTemplate::Absorption { medium, omega_h, beta_h, gamma_h, gamma_w } => {
            let model = AbsorptionModel {
                gamma_h,
                gamma_w,
                gamma_c: bath.rate(omega_c)?,
                ..AbsorptionModel::new(medium, omega_h, omega_c, beta_h, 1.0 / t)
            };
            match scenario.source {
                CurrentSource::LowTemperature => {
                    let low = absorption::low_t_current(&model, |w, _| bath.rate(w))?;
                    Ok((low.current, low.regime_warning))
                }
                CurrentSource::FullAnalytic => Ok((absorption::steady_current_analytic(&model)?, false)),
                CurrentSource::Numeric => Ok((absorption::solve(&model)?.currents.cold, false)),
            }
        }
        FridgeTemplate::Driven { omega_h, beta_h, gamma_h, levels } => {
            let rates = DrivenRates::Constant {
                h_plus: gamma_h,
                h_minus: gamma_h,
                c_plus: bath.rate(omega_c + lambda)?,
                c_minus: bath.rate(omega_c - lambda)?,
            };
            let model = DrivenModel {
                levels,
                ..DrivenModel::new(omega_h, omega_c, lambda, beta_h, 1.0 / t, rates)
            };
            match scenario.source {
                CurrentSource::LowTemperature => {
                    let low = driven::jc_low_t_driven(&model)?;
                    Ok((low.current, low.regime_warning))
                }
                CurrentSource::FullAnalytic => Ok((driven::jc_analytic(&model)?, false)),
                CurrentSource::Numeric => Ok((driven::solve_driven(&model)?.currents.cold, false)),
            }
        }
    }
}

/// Cold-side parameters chosen by the scenario's tuning policy at temperature `t`.
pub fn tune(scenario: &CoolingScenario, t: f64) -> Result<Tuning> {
    let driven = matches!(scenario.fridge, FridgeTemplate::Driven { .. });
    let fixed = |x: f64, r: Option<f64>| -> Result<Tuning> {
        let lambda = if driven {
            let r = r.unwrap_or(0.5 * x);
            if !(r > 0.0 && r < x) {
                return Err(invalid("lambda_ratio", format!("{r} must lie in (0, {x})")));
            }
            r * t
        } else {
            0.0
        };
        Ok(Tuning { omega_c: x * t, lambda })
    };
    match scenario.tuning {
        TuningPolicy::Optimal { lambda_ratio } => {
            if let FridgeTemplate::PowerLaw { .. } = scenario.fridge {
                return Ok(Tuning { omega_c: 0.0, lambda: 0.0 });
            }
            fixed(optimal_ratio(&scenario.bath)?, lambda_ratio)
        }
        TuningPolicy::Ratio { omega_ratio, lambda_ratio } => fixed(omega_ratio, lambda_ratio),
        TuningPolicy::NumericOpt => numeric_tuning(scenario, t),
    }
}

fn numeric_tuning(scenario: &CoolingScenario, t: f64) -> Result<Tuning> {
    let j = |omega_c: f64, lambda: f64| current_at(scenario, t, Tuning { omega_c, lambda }).unwrap_or(f64::NEG_INFINITY);
    let tol = 1e-8;
    match scenario.fridge {
        FridgeTemplate::PowerLaw { .. } => Ok(Tuning { omega_c: 0.0, lambda: 0.0 }),
        FridgeTemplate::Absorption { omega_h, .. } => {
            let hi = MAX_RATIO.min(omega_h / t * (1.0 - 1e-9));
            let x = golden_max(|x| j(x * t, 0.0), 1e-6, hi, tol);
            Ok(Tuning { omega_c: x * t, lambda: 0.0 })
        }
        FridgeTemplate::Driven { omega_h, .. } => {
            let hi = MAX_RATIO.min(omega_h / t * (1.0 - 1e-9));
            // For each ω_c the best λ ∈ (0, ω_c), then the best ω_c.
            let best_r = |x: f64| golden_max(|r| j(x * t, r * x * t), 1e-6, 1.0 - 1e-6, tol);
            let x = golden_max(|x| j(x * t, best_r(x) * x * t), 1e-6, hi, tol);
            let r = best_r(x);
            Ok(Tuning { omega_c: x * t, lambda: r * x * t })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoolingSample {
    pub t: f64,
    pub t_c: f64,
    pub omega_c: f64,
    pub lambda: f64,
    pub j_c: f64,
    pub c_v: f64,
}

impl CoolingSample {
    /// `-dT/dt = J_c / c_V`.
    pub fn cooling_rate(&self) -> f64 {
        self.j_c / self.c_v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFit {
    pub zeta: f64,
    /// `ln A` in `-dT/dt = A T^ζ`.
    pub intercept: f64,
    /// RMS deviation of `ln(-dT/dt)` from the fitted line.
    pub residual: f64,
    /// Temperature range `(low, high)` of the fit window.
    pub window: (f64, f64),
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoolingTrajectory {
    pub samples: Vec<CoolingSample>,
    pub terminated_at_floor: bool,
    /// Integration stopped early; see `stop_reason`.
    pub truncated: bool,
    pub stop_reason: Option<String>,
    pub zeta_fit: Option<ExponentFit>,
    pub warnings: Vec<String>,
}

/// Integrates `dt/du = -c_V(T) T / J_c(T)` in `u = ln T` from `T_start`
/// towards `T_floor`, sampling uniformly in `u`.
pub fn integrate_cooling(scenario: &CoolingScenario) -> Result<CoolingTrajectory> {
    scenario.validate()?;
    let t0 = scenario.t_start;
    let floor = scenario.floor();
    let mut warnings = Vec::new();
    let mut note = |w: bool, t: f64| {
        if w && warnings.is_empty() {
            warnings.push(format!(
                "low-temperature current outside gamma_c << gamma_h from T_c = {t:.3e}"
            ));
        }
    };

    let sample = |t: f64, time: f64| -> Result<(CoolingSample, bool)> {
        let tuning = tune(scenario, t)?;
        let (j_c, w) = evaluate(scenario, t, tuning)?;
        Ok((
            CoolingSample {
                t: time,
                t_c: t,
                omega_c: tuning.omega_c,
                lambda: tuning.lambda,
                j_c,
                c_v: heat_capacity(&scenario.capacity, t),
            },
            w,
        ))
    };

    let (first, w) = sample(t0, 0.0)?;
    if !(first.j_c > 0.0) {
        return Err(Error::NoCooling(first.j_c));
    }
    note(w, t0);

    let decades = (t0 / floor).log10();
    let n = (scenario.samples_per_decade as f64 * decades).ceil().max(1.0) as usize;
    let (u0, u1) = (t0.ln(), floor.ln());
    let du = (u1 - u0) / n as f64;
    let ode = Dopri5 {
        rtol: 1e-10,
        atol: 1e-300,
        max_steps: 100_000,
    };
    let rhs = |u: f64, _: &f64| -> Result<f64> {
        let t = u.exp();
        let j = current_at(scenario, t, tune(scenario, t)?)?;
        if !(j > 0.0) {
            return Err(Error::NoCooling(j));
        }
        Ok(-heat_capacity(&scenario.capacity, t) * t / j)
    };

    let mut samples = vec![first];
    let mut truncated = false;
    let mut stop_reason = None;
    let mut time = 0.0;
    for k in 1..=n {
        let (ua, ub) = (u0 + du * (k - 1) as f64, if k == n { u1 } else { u0 + du * k as f64 });
        match ode.integrate(rhs, ua, time, ub) {
            Ok((t_new, _)) => time = t_new,
            Err(e) => {
                truncated = true;
                stop_reason = Some(format!("stopped below T_c = {:.6e}: {e}", ua.exp()));
                break;
            }
        }
        let t = ub.exp();
        match sample(t, time) {
            Ok((s, w)) if s.j_c > 0.0 => {
                note(w, t);
                samples.push(s);
            }
            Ok((s, _)) => {
                truncated = true;
                stop_reason = Some(format!("cooling current {:.3e} <= 0 at T_c = {t:.6e}", s.j_c));
                break;
            }
            Err(e) => {
                truncated = true;
                stop_reason = Some(format!("current evaluation failed at T_c = {t:.6e}: {e}"));
                break;
            }
        }
    }

    let mut trajectory = CoolingTrajectory {
        terminated_at_floor: !truncated,
        truncated,
        stop_reason,
        samples,
        zeta_fit: None,
        warnings,
    };
    match fit_zeta(&trajectory) {
        Ok(fit) => trajectory.zeta_fit = Some(fit),
        Err(e) => trajectory.warnings.push(format!("no exponent fit: {e}")),
    }
    Ok(trajectory)
}

/// Least-squares slope of `ln(-dT/dt)` against `ln T` over the coldest decade
/// of the trajectory, with `dT/dt` taken from the ODE right side.
pub fn fit_zeta(trajectory: &CoolingTrajectory) -> Result<ExponentFit> {
    let coldest = trajectory
        .samples
        .last()
        .ok_or(Error::FitWindow { found: 0, required: MIN_FIT_SAMPLES })?
        .t_c;
    let top = 10.0 * coldest * (1.0 + 1e-12);
    let points: Vec<(f64, f64)> = trajectory
        .samples
        .iter()
        .filter(|s| s.t_c <= top)
        .map(|s| (s.t_c.ln(), s.cooling_rate().ln()))
        .collect();
    if points.len() < MIN_FIT_SAMPLES {
        return Err(Error::FitWindow {
            found: points.len(),
            required: MIN_FIT_SAMPLES,
        });
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(invalid("trajectory", "non-finite cooling rate in fit window"));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let zeta = sxy / sxx;
    let intercept = my - zeta * mx;
    let residual = (points
        .iter()
        .map(|p| (p.1 - intercept - zeta * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min).exp();
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max).exp();
    Ok(ExponentFit {
        zeta,
        intercept,
        residual,
        window: (lo, hi),
        samples: points.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExponentialApproach,
    PowerLawApproach,
    FiniteTimeZero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnattainabilityReport {
    pub verdict: Verdict,
    pub statement: String,
    pub zeta: f64,
    /// Time at which the fitted law reaches `T = 0` (finite-time verdicts only):
    /// integrated time to the coldest sample plus `T^{1-ζ}/(A(1-ζ))`.
    pub t0: Option<f64>,
    pub low_confidence: bool,
}

pub fn unattainability_report(fit: &ExponentFit, trajectory: &CoolingTrajectory) -> Result<UnattainabilityReport> {
    let last = trajectory
        .samples
        .last()
        .ok_or(Error::FitWindow { found: 0, required: MIN_FIT_SAMPLES })?;
    let zeta = fit.zeta;
    let a = fit.intercept.exp();
    let (verdict, statement, t0) = if (zeta - 1.0).abs() <= EXPONENTIAL_BAND {
        (
            Verdict::ExponentialApproach,
            format!("III-law satisfied; exponential approach T(t) ~ e^(-a t), a = {a:.6e}"),
            None,
        )
    } else if zeta > 1.0 {
        (
            Verdict::PowerLawApproach,
            format!(
                "III-law satisfied; power-law approach T(t) ~ t^(-1/(zeta-1)) = t^({:.4})",
                -1.0 / (zeta - 1.0)
            ),
            None,
        )
    } else {
        let tail = last.t_c.powf(1.0 - zeta) / (a * (1.0 - zeta));
        let t0 = last.t + tail;
        (
            Verdict::FiniteTimeZero,
            format!("III-law violated; T reaches 0 at finite t0 = {t0:.6e}"),
            Some(t0),
        )
    };
    Ok(UnattainabilityReport {
        verdict,
        statement,
        zeta,
        t0,
        low_confidence: fit.residual > LOW_CONFIDENCE_RESIDUAL,
    })
}

/// `∫₀^{T_start} c_V/J_c dT` by quadrature of the scenario itself; finite
/// only when the cooling rate vanishes slower than `T` as `T → 0`.
pub fn time_to_zero_quadrature(scenario: &CoolingScenario) -> Result<f64> {
    scenario.validate()?;
    let u0 = scenario.t_start.ln();
    // T = e^{u0 - v}, dT = -T dv
    let integrand = |v: f64| {
        let t = (u0 - v).exp();
        match tune(scenario, t).and_then(|tuning| current_at(scenario, t, tuning)) {
            Ok(j) if j > 0.0 => heat_capacity(&scenario.capacity, t) * t / j,
            _ => f64::NAN,
        }
    };
    Quadrature::with_rel_tol(1e-8).integrate_to_infinity(integrand, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{GasBath, Statistics};

    fn boson(d: u32, kappa: f64) -> BathSpectrum {
        BathSpectrum::Bosonic(BosonicBath { d, kappa, g0: 1.0, temperature: 1.0 })
    }

    fn solid(d: u32) -> HeatCapacityModel {
        HeatCapacityModel::BosonicSolid { d, c0: 1.0 }
    }

    fn tls_fridge() -> FridgeTemplate {
        FridgeTemplate::Absorption {
            medium: Medium::Tls,
            omega_h: 20.0,
            beta_h: 1.0,
            gamma_h: 1.0,
            gamma_w: 1.0,
        }
    }

    fn power_law(c: f64, p: f64, c_v: HeatCapacityModel) -> CoolingScenario {
        CoolingScenario::new(FridgeTemplate::PowerLaw { coefficient: c, exponent: p }, boson(3, 1.0), c_v, 1.0)
    }

    fn zeta_of(s: &CoolingScenario) -> f64 {
        integrate_cooling(s).unwrap().zeta_fit.unwrap().zeta
    }

    #[test]
    fn optimal_ratio_oracle() {
        for (s, x) in [
            (1.5, 0.874217465798717),
            (2.0, 1.5936242600400399),
            (2.5, 2.231611884023023),
            (3.0, 2.8214393721220787),
            (4.0, 3.920690394872886),
            (5.0, 4.965114231744277),
        ] {
            let b = BosonicBath { d: 1, kappa: s - 1.0, g0: 1.0, temperature: 1.0 };
            assert!((optimal_frequency_ratio(&b).unwrap() - x).abs() < 1e-12, "s = {s}");
        }
        let near_one = BosonicBath { d: 1, kappa: 1e-4, g0: 1.0, temperature: 1.0 };
        assert!(optimal_frequency_ratio(&near_one).unwrap() < 1e-3);
        let bad = BosonicBath { d: 1, kappa: 0.0, g0: 1.0, temperature: 1.0 };
        assert!(optimal_frequency_ratio(&bad).is_err());
    }

    #[test]
    fn synthetic_exponential_solution() {
        // J = c T², c_V = c' T → T(t) = T₀ e^{-(c/c')t}
        let (c, cp) = (0.7, 1.3);
        let s = power_law(c, 2.0, HeatCapacityModel::Custom { exponent: 1.0, c0: cp });
        let traj = integrate_cooling(&s).unwrap();
        assert!(traj.terminated_at_floor && !traj.truncated);
        for p in &traj.samples {
            let exact = (-(c / cp) * p.t).exp();
            assert!(((p.t_c - exact) / exact).abs() < 1e-6);
        }
        let fit = traj.zeta_fit.unwrap();
        assert!((fit.zeta - 1.0).abs() < 1e-3);
        assert!((fit.intercept.exp() - c / cp).abs() < 1e-3 * c / cp);
        let report = unattainability_report(&fit, &traj).unwrap();
        assert_eq!(report.verdict, Verdict::ExponentialApproach);
        assert!(report.statement.starts_with("III-law satisfied; exponential approach"));
    }

    #[test]
    fn samples_are_log_spaced_and_monotone() {
        let s = power_law(1.0, 2.5, solid(1));
        let traj = integrate_cooling(&s).unwrap();
        assert_eq!(traj.samples.len(), 3 * SAMPLES_PER_DECADE + 1);
        for w in traj.samples.windows(2) {
            assert!(w[1].t > w[0].t && w[1].t_c < w[0].t_c);
            let ratio = w[0].t_c / w[1].t_c;
            assert!((ratio - 10f64.powf(1.0 / SAMPLES_PER_DECADE as f64)).abs() < 1e-9);
        }
        assert!((traj.samples.last().unwrap().t_c - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn synthetic_fit_is_exact() {
        // dT/dt = -T^1.5 with c_V = 1
        let s = power_law(1.0, 1.5, HeatCapacityModel::Custom { exponent: 0.0, c0: 1.0 });
        let fit = integrate_cooling(&s).unwrap().zeta_fit.unwrap();
        assert!((fit.zeta - 1.5).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert_eq!(fit.samples, SAMPLES_PER_DECADE + 1);
        assert!((fit.window.1 / fit.window.0 - 10.0).abs() < 1e-9);
    }

    #[test]
    fn finite_time_zero_for_slow_decay() {
        // ζ = 1/2, c = c' = 1, T₀ = 1 → t₀ = ∫₀¹ T^{-1/2} dT = 2
        let s = power_law(1.0, 0.5, HeatCapacityModel::Custom { exponent: 0.0, c0: 1.0 });
        let traj = integrate_cooling(&s).unwrap();
        let fit = traj.zeta_fit.unwrap();
        let report = unattainability_report(&fit, &traj).unwrap();
        assert_eq!(report.verdict, Verdict::FiniteTimeZero);
        assert!((report.t0.unwrap() - 2.0).abs() < 1e-6);
        assert!((time_to_zero_quadrature(&s).unwrap() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn power_law_verdict_above_one() {
        let s = power_law(1.0, 3.0, HeatCapacityModel::Custom { exponent: 1.0, c0: 1.0 });
        let traj = integrate_cooling(&s).unwrap();
        let report = unattainability_report(traj.zeta_fit.as_ref().unwrap(), &traj).unwrap();
        assert_eq!(report.verdict, Verdict::PowerLawApproach);
        assert!(report.t0.is_none() && !report.low_confidence);
    }

    #[test]
    fn bosonic_exponent_equals_kappa() {
        for d in [1, 3] {
            for kappa in [1.0, 1.5, 2.0] {
                let s = CoolingScenario::new(tls_fridge(), boson(d, kappa), solid(d), 0.1);
                let z = zeta_of(&s);
                assert!((z - kappa).abs() < 1e-6, "d = {d}, kappa = {kappa}: zeta = {z}");
            }
        }
    }

    #[test]
    fn full_formula_reaches_the_same_exponent() {
        let base = CoolingScenario {
            source: CurrentSource::FullAnalytic,
            ..CoolingScenario::new(tls_fridge(), boson(3, 1.0), solid(3), 0.1)
        };
        let tls = zeta_of(&base);
        let osc = zeta_of(&CoolingScenario {
            fridge: FridgeTemplate::Absorption {
                medium: Medium::Oscillator(12),
                omega_h: 20.0,
                beta_h: 1.0,
                gamma_h: 1.0,
                gamma_w: 1.0,
            },
            ..base
        });
        let drv = zeta_of(&CoolingScenario {
            fridge: FridgeTemplate::Driven { omega_h: 20.0, beta_h: 1.0, gamma_h: 1.0, levels: 12 },
            ..base
        });
        assert!((tls - 1.0).abs() < 0.05);
        assert!((tls - osc).abs() < 0.05 && (tls - drv).abs() < 0.05);
    }

    #[test]
    fn gas_baths_give_three_halves() {
        for statistics in [Statistics::Bose, Statistics::Fermi] {
            let gas = BathSpectrum::Gas(GasBath {
                n: 1e-3,
                m: 1.0,
                a_s: 0.01,
                temperature: 1.0,
                statistics,
                t_crit: Some(1.0),
            });
            let capacity = HeatCapacityModel::IdealGas { statistics, t_crit: Some(1.0), c0: 1.0 };
            let s = CoolingScenario::new(tls_fridge(), gas, capacity, 0.1);
            let z = zeta_of(&s);
            assert!((z - 1.5).abs() < 0.05, "{statistics:?}: zeta = {z}");
        }
    }

    #[test]
    fn tuned_frequency_is_a_local_maximum() {
        // x* is exact for the asymptotic current; for the full formula it is
        // the T → 0 limit of the optimum, so that case is probed colder.
        for (scenario, t_top) in [
            (CoolingScenario::new(tls_fridge(), boson(3, 1.0), solid(3), 0.1), 0.1),
            (
                CoolingScenario {
                    source: CurrentSource::FullAnalytic,
                    ..CoolingScenario::new(tls_fridge(), boson(1, 2.0), solid(1), 0.1)
                },
                1e-2,
            ),
        ] {
            for k in 0..10 {
                let t = t_top * 10f64.powf(-0.3 * k as f64);
                let tuned = tune(&scenario, t).unwrap();
                let j = current_at(&scenario, t, tuned).unwrap();
                for f in [0.95, 1.05] {
                    let moved = Tuning { omega_c: tuned.omega_c * f, ..tuned };
                    assert!(current_at(&scenario, t, moved).unwrap() <= j);
                }
            }
        }
    }

    #[test]
    fn numeric_tuning_finds_the_optimal_ratio() {
        let s = CoolingScenario {
            tuning: TuningPolicy::NumericOpt,
            ..CoolingScenario::new(tls_fridge(), boson(3, 1.0), solid(3), 0.1)
        };
        let x = tune(&s, 0.01).unwrap().omega_c / 0.01;
        assert!((x - 3.920690394872886).abs() < 1e-5);
        let d = CoolingScenario {
            fridge: FridgeTemplate::Driven { omega_h: 20.0, beta_h: 1.0, gamma_h: 1.0, levels: 12 },
            ..s
        };
        let tuned = tune(&d, 0.01).unwrap();
        let j = current_at(&d, 0.01, tuned).unwrap();
        let default = tune(&CoolingScenario { tuning: TuningPolicy::default(), ..d }, 0.01).unwrap();
        assert!(j >= current_at(&d, 0.01, default).unwrap());
        assert!(tuned.lambda > 0.0 && tuned.lambda < tuned.omega_c);
    }

    #[test]
    fn third_law_violating_coupling_reaches_zero() {
        let s = CoolingScenario::new(tls_fridge(), boson(3, 0.5), solid(3), 0.1);
        let traj = integrate_cooling(&s).unwrap();
        let fit = traj.zeta_fit.unwrap();
        assert!((fit.zeta - 0.5).abs() < 1e-6);
        let report = unattainability_report(&fit, &traj).unwrap();
        assert_eq!(report.verdict, Verdict::FiniteTimeZero);
        let quad = time_to_zero_quadrature(&s).unwrap();
        assert!(((report.t0.unwrap() - quad) / quad).abs() < 1e-6);
    }

    #[test]
    fn empty_cooling_window_is_rejected() {
        // ω_c/T_c = 30 exceeds ω_h/T_h = 20: the fridge heats the cold bath.
        let s = CoolingScenario {
            tuning: TuningPolicy::Ratio { omega_ratio: 30.0, lambda_ratio: None },
            source: CurrentSource::FullAnalytic,
            ..CoolingScenario::new(tls_fridge(), boson(3, 1.0), solid(3), 0.1)
        };
        assert!(matches!(integrate_cooling(&s), Err(Error::NoCooling(_))));
    }

    #[test]
    fn scenario_validation() {
        let mut s = power_law(1.0, 2.0, solid(1));
        s.t_floor = Some(2.0);
        assert!(s.validate().is_err());
        let hot = CoolingScenario::new(tls_fridge(), boson(3, 1.0), solid(3), 2.0);
        assert!(hot.validate().is_err());
        let bad_r = CoolingScenario {
            fridge: FridgeTemplate::Driven { omega_h: 20.0, beta_h: 1.0, gamma_h: 1.0, levels: 12 },
            tuning: TuningPolicy::Optimal { lambda_ratio: Some(5.0) },
            ..CoolingScenario::new(tls_fridge(), boson(3, 1.0), solid(3), 0.1)
        };
        assert!(tune(&bad_r, 0.1).is_err());
    }

    #[test]
    fn scenario_from_toml_like_json() {
        let json = r#"{
            "fridge": {"type": "driven", "omega_h": 20.0, "beta_h": 1.0},
            "bath": {"type": "bosonic", "d": 3, "kappa": 1.0},
            "capacity": {"kind": "bosonic-solid", "d": 3},
            "tuning": {"policy": "optimal", "lambda_ratio": 1.0},
            "t_start": 0.1,
            "source": "full-analytic"
        }"#;
        let s: CoolingScenario = serde_json::from_str(json).unwrap();
        assert_eq!(s.floor(), 1e-4);
        assert!(s.validate().is_ok());
        let bad = json.replace("\"t_start\"", "\"t_begin\"");
        assert!(serde_json::from_str::<CoolingScenario>(&bad).is_err());
    }
}
