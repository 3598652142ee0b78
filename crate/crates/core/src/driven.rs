//! Periodically driven refrigerator: two oscillators `ω_h a†a + ω_c b†b`
//! with a resonant exchange drive `λ(e^{-iΩt} a†b + h.c.)`, `Ω = ω_h - ω_c`.
//!
//! In the interaction picture the drive splits the modes into normal modes
//! `d_± = (a ± b)/√2` seen by each bath at shifted frequencies `ω ± λ`. The
//! state space used here is a product of truncated `d_+` and `d_-` Fock
//! spaces, on which the time-independent generator is a sum of commuting
//! single-mode thermalisers.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::absorption::{DEFAULT_LEVELS, MAX_LEVELS, TRUNCATION_GUARD};
use crate::bath::BathSpectrum;
use crate::error::{invalid, Error, Result};
use crate::lgks::{self, LocalGibbsReference, ThermalContact, ThermalTerm};
use crate::linalg;
use crate::operator::{ladder, number, DensityMatrix, Operator};
use crate::space::{Factor, HilbertSpace};
use crate::steady::{steady_state, SteadyState};
use crate::superop::Superoperator;

/// Below this `λ/ω_c` the two sidebands are poorly separated; a warning is
/// emitted. The value is a heuristic, not a derived bound.
pub const SIDEBAND_SEPARATION_WARNING: f64 = 0.1;

/// Relaxation rates at the four shifted frequencies `ω_{h,c} ± λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DrivenRates {
    Constant {
        h_plus: f64,
        h_minus: f64,
        c_plus: f64,
        c_minus: f64,
    },
    /// Rates read off bath spectra at the model temperatures.
    Spectra { hot: BathSpectrum, cold: BathSpectrum },
}

impl DrivenRates {
    pub fn uniform(gamma: f64) -> Self {
        DrivenRates::Constant {
            h_plus: gamma,
            h_minus: gamma,
            c_plus: gamma,
            c_minus: gamma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrivenModel {
    pub omega_h: f64,
    pub omega_c: f64,
    pub lambda: f64,
    pub beta_h: f64,
    pub beta_c: f64,
    pub rates: DrivenRates,
    /// Starting truncation of each normal mode; doubled until the guard passes.
    #[serde(default = "default_levels")]
    pub levels: usize,
}

fn default_levels() -> usize {
    DEFAULT_LEVELS
}

/// `γ` at `(ω_h^+, ω_h^-, ω_c^+, ω_c^-)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SidebandRates {
    pub h_plus: f64,
    pub h_minus: f64,
    pub c_plus: f64,
    pub c_minus: f64,
}

impl DrivenModel {
    pub fn new(omega_h: f64, omega_c: f64, lambda: f64, beta_h: f64, beta_c: f64, rates: DrivenRates) -> Self {
        Self {
            omega_h,
            omega_c,
            lambda,
            beta_h,
            beta_c,
            rates,
            levels: DEFAULT_LEVELS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(invalid("lambda", format!("{} must be nonnegative", self.lambda)));
        }
        if !(self.omega_c > self.lambda) || !self.omega_c.is_finite() {
            return Err(invalid(
                "omega_c",
                format!("need omega_c > lambda, got omega_c = {}, lambda = {}", self.omega_c, self.lambda),
            ));
        }
        if !(self.omega_h > self.omega_c) || !self.omega_h.is_finite() {
            return Err(invalid("omega_h", format!("{} must exceed omega_c", self.omega_h)));
        }
        for (name, b) in [("beta_h", self.beta_h), ("beta_c", self.beta_c)] {
            if !(b > 0.0) || !b.is_finite() {
                return Err(invalid(name, format!("{b} must be positive and finite")));
            }
        }
        if self.levels < 2 {
            return Err(invalid("levels", format!("{} < 2", self.levels)));
        }
        match self.rates {
            DrivenRates::Constant { h_plus, h_minus, c_plus, c_minus } => {
                for v in [h_plus, h_minus, c_plus, c_minus] {
                    if !(v >= 0.0) || !v.is_finite() {
                        return Err(Error::NegativeRate(v));
                    }
                }
            }
            DrivenRates::Spectra { hot, cold } => {
                hot.validate()?;
                cold.validate()?;
            }
        }
        Ok(())
    }

    pub fn omega_h_plus(&self) -> f64 {
        self.omega_h + self.lambda
    }

    pub fn omega_h_minus(&self) -> f64 {
        self.omega_h - self.lambda
    }

    pub fn omega_c_plus(&self) -> f64 {
        self.omega_c + self.lambda
    }

    pub fn omega_c_minus(&self) -> f64 {
        self.omega_c - self.lambda
    }

    /// Drive frequency, fixed to resonance.
    pub fn drive_frequency(&self) -> f64 {
        self.omega_h - self.omega_c
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.drive_frequency()
    }

    pub fn sideband_rates(&self) -> Result<SidebandRates> {
        match self.rates {
            DrivenRates::Constant { h_plus, h_minus, c_plus, c_minus } => Ok(SidebandRates {
                h_plus,
                h_minus,
                c_plus,
                c_minus,
            }),
            DrivenRates::Spectra { hot, cold } => {
                let hot = hot.at_temperature(1.0 / self.beta_h);
                let cold = cold.at_temperature(1.0 / self.beta_c);
                Ok(SidebandRates {
                    h_plus: hot.rate(self.omega_h_plus())?,
                    h_minus: hot.rate(self.omega_h_minus())?,
                    c_plus: cold.rate(self.omega_c_plus())?,
                    c_minus: cold.rate(self.omega_c_minus())?,
                })
            }
        }
    }

    /// Non-fatal diagnostics about the validity of the sideband picture.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.lambda < SIDEBAND_SEPARATION_WARNING * self.omega_c {
            out.push(format!(
                "lambda/omega_c = {:.3} < {SIDEBAND_SEPARATION_WARNING}: sidebands are not well separated",
                self.lambda / self.omega_c
            ));
        }
        out
    }
}

/// Normal modes and the original modes expressed through them.
#[derive(Debug, Clone)]
pub struct FloquetModes {
    pub space: HilbertSpace,
    pub d_plus: Operator,
    pub d_minus: Operator,
    pub a: Operator,
    pub b: Operator,
    pub omega_h_plus: f64,
    pub omega_h_minus: f64,
    pub omega_c_plus: f64,
    pub omega_c_minus: f64,
}

pub fn floquet_modes(model: &DrivenModel) -> Result<FloquetModes> {
    model.validate()?;
    for w in model.warnings() {
        warn!("{w}");
    }
    let space = HilbertSpace::new(vec![Factor::Oscillator(model.levels), Factor::Oscillator(model.levels)])?;
    let d_plus = ladder(&space, 0)?;
    let d_minus = ladder(&space, 1)?;
    let a = &(&d_plus + &d_minus) * FRAC_1_SQRT_2;
    let b = &(&d_plus - &d_minus) * FRAC_1_SQRT_2;
    Ok(FloquetModes {
        space,
        d_plus,
        d_minus,
        a,
        b,
        omega_h_plus: model.omega_h_plus(),
        omega_h_minus: model.omega_h_minus(),
        omega_c_plus: model.omega_c_plus(),
        omega_c_minus: model.omega_c_minus(),
    })
}

/// Generator pieces and contacts of one model at a fixed truncation.
#[derive(Debug, Clone)]
pub struct DrivenSystem {
    pub model: DrivenModel,
    pub modes: FloquetModes,
    pub n_plus: Operator,
    pub n_minus: Operator,
    pub hot: ThermalContact,
    pub cold: ThermalContact,
    pub generator: Superoperator,
}

impl DrivenSystem {
    pub fn new(model: &DrivenModel) -> Result<Self> {
        let modes = floquet_modes(model)?;
        let r = model.sideband_rates()?;
        let n_plus = number(&modes.space, 0)?;
        let n_minus = number(&modes.space, 1)?;
        // The ¼γ([d, ρd†] + … + h.c.) form is a Lindblad dissipator at rate γ/2.
        let contact = |label: &str, beta: f64, w_plus: f64, w_minus: f64, g_plus: f64, g_minus: f64| {
            ThermalContact::new(label, beta)
                .with_term(ThermalTerm::new(modes.d_plus.clone(), w_plus, 0.5 * g_plus, &n_plus * w_plus))
                .with_term(ThermalTerm::new(modes.d_minus.clone(), w_minus, 0.5 * g_minus, &n_minus * w_minus))
        };
        let hot = contact("hot", model.beta_h, modes.omega_h_plus, modes.omega_h_minus, r.h_plus, r.h_minus);
        let cold = contact("cold", model.beta_c, modes.omega_c_plus, modes.omega_c_minus, r.c_plus, r.c_minus);
        let generator = lgks::build_thermal_generator(&hot)?.try_add(&lgks::build_thermal_generator(&cold)?)?;
        Ok(Self {
            model: *model,
            modes,
            n_plus,
            n_minus,
            hot,
            cold,
            generator,
        })
    }

    /// Multiplies every upward rate of the cold contact by `scale`, breaking
    /// detailed balance when `scale != 1`. For fault-injection runs.
    pub fn with_cold_upward_scale(mut self, scale: f64) -> Result<Self> {
        for t in &mut self.cold.terms {
            t.upward_scale = scale;
        }
        self.generator = lgks::build_thermal_generator(&self.hot)?.try_add(&lgks::build_thermal_generator(&self.cold)?)?;
        Ok(self)
    }

    /// `(L_h^+, L_h^-, L_c^+, L_c^-)` with their Gibbs-like references.
    pub fn pieces(&self) -> Result<Vec<(Superoperator, LocalGibbsReference)>> {
        let mut out = lgks::local_generators(&self.hot)?;
        out.extend(lgks::local_generators(&self.cold)?);
        Ok(out)
    }

    /// `(J_h, J_c)` in the logarithmic form, summed over sidebands.
    pub fn currents(&self, rho: &DensityMatrix) -> Result<(f64, f64)> {
        let pieces = self.pieces()?;
        let mut j = [0.0; 2];
        for (k, (l, r)) in pieces.iter().enumerate() {
            j[k / 2] += lgks::heat_current(l, rho, r)?;
        }
        Ok((j[0], j[1]))
    }
}

pub fn build_driven_generator(model: &DrivenModel) -> Result<Superoperator> {
    Ok(DrivenSystem::new(model)?.generator)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrivenCurrents {
    pub hot: f64,
    pub cold: f64,
    /// `P = -(J_h + J_c)`, power delivered by the drive.
    pub power: f64,
}

#[derive(Debug, Clone)]
pub struct DrivenSteady {
    pub system: DrivenSystem,
    pub steady: SteadyState,
    pub currents: DrivenCurrents,
    pub levels: usize,
    pub top_population: f64,
}

/// Steady state with truncation escalation on the normal-mode top levels.
pub fn solve_driven(model: &DrivenModel) -> Result<DrivenSteady> {
    let mut m = *model;
    loop {
        let system = DrivenSystem::new(&m)?;
        let steady = steady_state(&system.generator)?;
        if !steady.is_ergodic() {
            return Err(Error::NonErgodic(steady.null_dimension));
        }
        let top = steady
            .state
            .top_level_population(0)?
            .max(steady.state.top_level_population(1)?);
        if top >= TRUNCATION_GUARD {
            if 2 * m.levels > MAX_LEVELS {
                return Err(Error::TruncationGuard {
                    population: top,
                    levels: m.levels,
                });
            }
            m.levels *= 2;
            continue;
        }
        let (hot, cold) = system.currents(&steady.state)?;
        return Ok(DrivenSteady {
            levels: m.levels,
            currents: DrivenCurrents {
                hot,
                cold,
                power: lgks::averaged_power(&[hot, cold]),
            },
            system,
            steady,
            top_population: top,
        });
    }
}

/// `(J_h, J_c, P)` at the numerical steady state.
pub fn currents_numeric_driven(model: &DrivenModel) -> Result<(f64, f64, f64)> {
    let s = solve_driven(model)?;
    Ok((s.currents.hot, s.currents.cold, s.currents.power))
}

fn bose(beta: f64, omega: f64) -> f64 {
    1.0 / (beta * omega).exp_m1()
}

/// Closed-form cold current, one term per sideband.
pub fn jc_analytic(model: &DrivenModel) -> Result<f64> {
    model.validate()?;
    let r = model.sideband_rates()?;
    let term = |wc: f64, wh: f64, gh: f64, gc: f64| {
        let num = bose(model.beta_c, wc) - bose(model.beta_h, wh);
        let den = 1.0 / (gh * -(-model.beta_h * wh).exp_m1()) + 1.0 / (gc * -(-model.beta_c * wc).exp_m1());
        wc * num / den
    };
    Ok(0.5
        * (term(model.omega_c_minus(), model.omega_h_minus(), r.h_minus, r.c_minus)
            + term(model.omega_c_plus(), model.omega_h_plus(), r.h_plus, r.c_plus)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrivenLowTemperatureCurrent {
    pub current: f64,
    /// `γ_c^± > 0.1 γ_h^±` for either sideband.
    pub regime_warning: bool,
}

/// `½[ω_c^+ γ_c^+ e^{-ω_c^+/T_c} + ω_c^- γ_c^- e^{-ω_c^-/T_c}]`.
pub fn jc_low_t_driven(model: &DrivenModel) -> Result<DrivenLowTemperatureCurrent> {
    model.validate()?;
    let r = model.sideband_rates()?;
    let regime_warning = r.c_plus > 0.1 * r.h_plus || r.c_minus > 0.1 * r.h_minus;
    let wp = model.omega_c_plus();
    let wm = model.omega_c_minus();
    Ok(DrivenLowTemperatureCurrent {
        current: 0.5 * (wp * r.c_plus * (-model.beta_c * wp).exp() + wm * r.c_minus * (-model.beta_c * wm).exp()),
        regime_warning,
    })
}

/// Lab-frame state `U(t) ρ U(t)†` with `U(t) = e^{-iH₀t} e^{-iVt}`,
/// `H₀ = ω_h a†a + ω_c b†b`, `V = λ(a†b + ab†)`.
pub fn lab_frame_state(rho_interaction: &DensityMatrix, model: &DrivenModel, t: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0) {
        return Err(invalid("t", format!("{t} must be nonnegative")));
    }
    let space = rho_interaction.space();
    let levels = match space.factors() {
        [Factor::Oscillator(n), Factor::Oscillator(m)] if n == m => *n,
        _ => return Err(Error::InvalidSpace("expected a two-normal-mode space".into())),
    };
    let modes = floquet_modes(&DrivenModel { levels, ..*model })?;
    let n_a = modes.a.adjoint().dot(&modes.a);
    let n_b = modes.b.adjoint().dot(&modes.b);
    let h0 = &(&n_a * model.omega_h) + &(&n_b * model.omega_c);
    let v = &(&modes.a.adjoint().dot(&modes.b) + &modes.a.dot(&modes.b.adjoint())) * model.lambda;
    let u = linalg::unitary_propagator(h0.matrix(), t) * linalg::unitary_propagator(v.matrix(), t);
    let out = &u * rho_interaction.matrix() * u.adjoint();
    DensityMatrix::from_raw(space, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::BosonicBath;
    use crate::lgks::gibbs_state;

    fn reference() -> DrivenModel {
        DrivenModel::new(3.0, 1.0, 0.5, 0.5, 1.0, DrivenRates::uniform(1.0))
    }

    #[test]
    fn sideband_frequencies() {
        let m = floquet_modes(&reference()).unwrap();
        assert_eq!(
            (m.omega_h_plus, m.omega_h_minus, m.omega_c_plus, m.omega_c_minus),
            (3.5, 2.5, 1.5, 0.5)
        );
        // a = (d_+ + d_-)/√2 and vacuum normalisation of d_±.
        let rebuilt = &(&m.d_plus + &m.d_minus) * FRAC_1_SQRT_2;
        assert!((&rebuilt - &m.a).norm() < 1e-15);
        let vac = DensityMatrix::basis_state(&m.space, 0).unwrap();
        assert!((vac.expectation(&m.d_plus.dot(&m.d_plus.adjoint())) - 1.0).abs() < 1e-15);
        assert!((vac.expectation(&m.d_minus.dot(&m.d_minus.adjoint())) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reference_current() {
        let jc = jc_analytic(&reference()).unwrap();
        assert!((jc - 0.0953665919338155).abs() < 1e-15);
        let s = solve_driven(&reference()).unwrap();
        assert!(((s.currents.cold - jc) / jc).abs() < 1e-6);
        assert!(s.currents.power > 0.0);
        assert!(s.currents.hot * reference().beta_h + s.currents.cold * reference().beta_c <= 1e-10);
    }

    #[test]
    fn single_sideband_relaxes_to_its_reference() {
        let model = DrivenModel {
            rates: DrivenRates::Constant { h_plus: 0.0, h_minus: 0.0, c_plus: 1.0, c_minus: 0.0 },
            ..reference()
        };
        let sys = DrivenSystem::new(&model).unwrap();
        let pieces = sys.pieces().unwrap();
        let (l, r) = &pieces[2];
        assert!(r.stationarity_defect(l) < 1e-12);
        let expected = gibbs_state(&(&sys.n_plus * 1.5), 1.0).unwrap();
        assert!(r.state.trace_distance(&expected) < 1e-14);
    }

    #[test]
    fn matched_sideband_temperatures_carry_no_current() {
        // Both sidebands at equal effective temperature needs λ = 0 and β_c ω_c = β_h ω_h.
        let flat = DrivenModel::new(3.0, 1.0, 0.0, 0.5, 1.5, DrivenRates::uniform(1.0));
        assert!(jc_analytic(&flat).unwrap().abs() < 1e-15);
        assert!(!flat.warnings().is_empty());
        // At the λ → ω_c boundary the lower sideband's prefactor vanishes.
        let edge = DrivenModel { lambda: 1.0 - 1e-9, ..reference() };
        let upper_only = 0.5 * 2.0 * (bose(1.0, 2.0) - bose(0.5, 4.0))
            / (1.0 / -(-0.5f64 * 4.0).exp_m1() + 1.0 / -(-2.0f64).exp_m1());
        assert!((jc_analytic(&edge).unwrap() - upper_only).abs() < 1e-8);
    }

    #[test]
    fn steady_state_is_a_product_of_mode_states() {
        let s = solve_driven(&reference()).unwrap();
        let rho = s.steady.state.matrix();
        let d = rho.nrows();
        let mut off = 0.0f64;
        for j in 0..d {
            for i in 0..d {
                if i != j {
                    off = off.max(rho[(i, j)].norm());
                }
            }
        }
        assert!(off < 1e-10);
    }

    #[test]
    fn equal_temperatures_still_obey_the_second_law() {
        let model = DrivenModel::new(3.0, 1.0, 0.5, 1.0, 1.0, DrivenRates::uniform(1.0));
        let s = solve_driven(&model).unwrap();
        assert!(s.currents.hot + s.currents.cold <= 1e-10);
        assert!(s.currents.power >= -1e-10);
    }

    #[test]
    fn sidebands_decouple_without_a_cold_bath() {
        let model = DrivenModel {
            rates: DrivenRates::Constant { h_plus: 1.0, h_minus: 1.0, c_plus: 0.0, c_minus: 0.0 },
            ..reference()
        };
        let (jh, jc, p) = currents_numeric_driven(&model).unwrap();
        assert!(jh.abs() < 1e-12 && jc.abs() < 1e-12 && p.abs() < 1e-12);
    }

    #[test]
    fn lab_frame_steady_state_is_periodic() {
        let cold = DrivenModel::new(3.0, 1.0, 0.5, 1.0, 4.0, DrivenRates::uniform(1.0));
        let s = solve_driven(&cold).unwrap();
        let model = DrivenModel { levels: s.levels, ..cold };
        let rho = &s.steady.state;
        let at0 = lab_frame_state(rho, &model, 0.0).unwrap();
        assert!(at0.trace_distance(rho) < 1e-12);
        let t = 0.37;
        let x = lab_frame_state(rho, &model, t).unwrap();
        let y = lab_frame_state(rho, &model, t + model.period()).unwrap();
        assert!(x.trace_distance(&y) < 1e-9);
        // Original-mode occupations do not oscillate.
        let modes = &s.system.modes;
        let n_a = modes.a.adjoint().dot(&modes.a);
        assert!((x.expectation(&n_a) - rho.expectation(&n_a)).abs() < 1e-10);
    }

    #[test]
    fn low_temperature_asymptote() {
        let mut previous = f64::INFINITY;
        let mut t_c = 0.1;
        for _ in 0..8 {
            let g = 1e-3 * t_c;
            let model = DrivenModel::new(30.0, 5.0 * t_c, 2.0 * t_c, 1.0, 1.0 / t_c, DrivenRates::Constant {
                h_plus: 1.0,
                h_minus: 1.0,
                c_plus: g,
                c_minus: g,
            });
            let ratio = jc_low_t_driven(&model).unwrap().current / jc_analytic(&model).unwrap();
            let err = (ratio - 1.0).abs();
            assert!(err < previous);
            previous = err;
            t_c *= 0.5;
        }
        assert!(previous < 1e-4);
    }

    #[test]
    fn spectra_rates_and_validation() {
        let bath = BathSpectrum::Bosonic(BosonicBath { d: 3, kappa: 1.0, g0: 1.0, temperature: 1.0 });
        let model = DrivenModel { rates: DrivenRates::Spectra { hot: bath, cold: bath }, ..reference() };
        let r = model.sideband_rates().unwrap();
        let cold = bath.at_temperature(1.0);
        assert_eq!(r.c_minus, cold.rate(0.5).unwrap());
        assert!(jc_analytic(&model).unwrap().is_finite());

        assert!(DrivenModel { lambda: 1.0, ..reference() }.validate().is_err());
        assert!(DrivenModel { lambda: -0.1, ..reference() }.validate().is_err());
    }
}
