//! Absorption refrigerator: two modes `ω_h a†a + ω_c b†b` coupled to a hot
//! bath through `a`, a cold bath through `b`, and a very hot work bath
//! through the exchange `a b†`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::lgks::{self, LocalGibbsReference, ThermalContact, ThermalTerm};
use crate::operator::{ladder, number, DensityMatrix, Operator};
use crate::space::{Factor, HilbertSpace};
use crate::steady::{steady_state, SteadyState};
use crate::superop::Superoperator;

/// Default oscillator truncation before escalation.
pub const DEFAULT_LEVELS: usize = 12;

/// Largest truncation the escalation will try.
pub const MAX_LEVELS: usize = 48;

/// Top-Fock-level population above which a truncated run is rejected.
pub const TRUNCATION_GUARD: f64 = 1e-10;

/// Working-medium statistics. The oscillator carries its starting truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Medium {
    Tls,
    Oscillator(usize),
}

impl Medium {
    /// `+1` for two-level systems, `-1` for oscillators.
    pub fn epsilon(&self) -> f64 {
        match self {
            Medium::Tls => 1.0,
            Medium::Oscillator(_) => -1.0,
        }
    }

    fn space(&self) -> Result<HilbertSpace> {
        match *self {
            Medium::Tls => HilbertSpace::new(vec![Factor::Tls, Factor::Tls]),
            Medium::Oscillator(n) => HilbertSpace::new(vec![Factor::Oscillator(n), Factor::Oscillator(n)]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsorptionModel {
    pub medium: Medium,
    pub omega_h: f64,
    pub omega_c: f64,
    pub gamma_h: f64,
    pub gamma_c: f64,
    pub gamma_w: f64,
    pub beta_h: f64,
    pub beta_c: f64,
    #[serde(default)]
    pub beta_w: f64,
    #[serde(default)]
    pub delta_h: f64,
    #[serde(default)]
    pub delta_c: f64,
    /// Rate of the optional terms thermalising each mode at the work-bath
    /// temperature, which make the work generator ergodic on its own. Off by default.
    #[serde(default)]
    pub work_thermalization: f64,
}

impl AbsorptionModel {
    /// Unit rates, no dephasing, infinitely hot work bath.
    pub fn new(medium: Medium, omega_h: f64, omega_c: f64, beta_h: f64, beta_c: f64) -> Self {
        Self {
            medium,
            omega_h,
            omega_c,
            gamma_h: 1.0,
            gamma_c: 1.0,
            gamma_w: 1.0,
            beta_h,
            beta_c,
            beta_w: 0.0,
            delta_h: 0.0,
            delta_c: 0.0,
            work_thermalization: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Medium::Oscillator(n) = self.medium {
            if n < 2 {
                return Err(invalid("medium", format!("oscillator truncation {n} < 2")));
            }
        }
        if !(self.omega_c > 0.0) || !self.omega_c.is_finite() {
            return Err(invalid("omega_c", format!("{} must be positive", self.omega_c)));
        }
        if !(self.omega_h > self.omega_c) || !self.omega_h.is_finite() {
            return Err(invalid("omega_h", format!("{} must exceed omega_c = {}", self.omega_h, self.omega_c)));
        }
        for (name, v) in [
            ("gamma_h", self.gamma_h),
            ("gamma_c", self.gamma_c),
            ("gamma_w", self.gamma_w),
            ("delta_h", self.delta_h),
            ("delta_c", self.delta_c),
            ("work_thermalization", self.work_thermalization),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(invalid(name, format!("{v} must be a finite nonnegative rate")));
            }
        }
        if !(self.beta_w >= 0.0) || !(self.beta_h >= self.beta_w) || !(self.beta_c >= self.beta_h) || !self.beta_c.is_finite() {
            return Err(invalid(
                "beta",
                format!(
                    "need beta_c >= beta_h >= beta_w >= 0, got ({}, {}, {})",
                    self.beta_c, self.beta_h, self.beta_w
                ),
            ));
        }
        Ok(())
    }

    pub fn epsilon(&self) -> f64 {
        self.medium.epsilon()
    }

    /// Whether the cooling condition `ω_c/ω_h < T_c/T_h` holds.
    pub fn cools(&self) -> bool {
        self.beta_c * self.omega_c > self.beta_h * self.omega_h
    }
}

/// Operators, contacts and full generator of one model at a fixed truncation.
#[derive(Debug, Clone)]
pub struct AbsorptionSystem {
    pub model: AbsorptionModel,
    pub space: HilbertSpace,
    pub hamiltonian: Operator,
    pub n_h: Operator,
    pub n_c: Operator,
    pub hot: ThermalContact,
    pub cold: ThermalContact,
    pub work: ThermalContact,
    pub generator: Superoperator,
}

impl AbsorptionSystem {
    pub fn new(model: &AbsorptionModel) -> Result<Self> {
        model.validate()?;
        let space = model.medium.space()?;
        let a = ladder(&space, 0)?;
        let b = ladder(&space, 1)?;
        let n_h = number(&space, 0)?;
        let n_c = number(&space, 1)?;
        let e_h = &n_h * model.omega_h;
        let e_c = &n_c * model.omega_c;
        let hamiltonian = &e_h + &e_c;

        let hot = ThermalContact::new("hot", model.beta_h)
            .with_term(ThermalTerm::new(a.clone(), model.omega_h, model.gamma_h, e_h))
            .with_dephasing(n_h.clone(), model.delta_h);
        let cold = ThermalContact::new("cold", model.beta_c)
            .with_term(ThermalTerm::new(b.clone(), model.omega_c, model.gamma_c, e_c))
            .with_dephasing(n_c.clone(), model.delta_c);
        let mut work = ThermalContact::new("work", model.beta_w).with_term(ThermalTerm::new(
            a.dot(&b.adjoint()),
            model.omega_h - model.omega_c,
            model.gamma_w,
            hamiltonian.clone(),
        ));
        if model.work_thermalization > 0.0 {
            work = work
                .with_term(ThermalTerm::new(a, model.omega_h, model.work_thermalization, hamiltonian.clone()))
                .with_term(ThermalTerm::new(b, model.omega_c, model.work_thermalization, hamiltonian.clone()));
        }

        let mut generator = Superoperator::hamiltonian(hamiltonian.clone());
        for contact in [&hot, &cold, &work] {
            generator = generator.try_add(&lgks::build_thermal_generator(contact)?)?;
        }
        Ok(Self {
            model: *model,
            space,
            hamiltonian,
            n_h,
            n_c,
            hot,
            cold,
            work,
            generator,
        })
    }

    /// Multiplies every upward rate of the cold contact by `scale`, breaking
    /// detailed balance when `scale != 1`. For fault-injection runs.
    pub fn with_cold_upward_scale(mut self, scale: f64) -> Result<Self> {
        for t in &mut self.cold.terms {
            t.upward_scale = scale;
        }
        let mut generator = Superoperator::hamiltonian(self.hamiltonian.clone());
        for contact in [&self.hot, &self.cold, &self.work] {
            generator = generator.try_add(&lgks::build_thermal_generator(contact)?)?;
        }
        self.generator = generator;
        Ok(self)
    }

    pub fn contacts(&self) -> [&ThermalContact; 3] {
        [&self.hot, &self.cold, &self.work]
    }

    /// Dissipative part of each contact (no Hamiltonian), in hot, cold, work order.
    pub fn contact_generators(&self) -> Result<[Superoperator; 3]> {
        Ok([
            lgks::build_thermal_generator(&self.hot)?,
            lgks::build_thermal_generator(&self.cold)?,
            lgks::build_thermal_generator(&self.work)?,
        ])
    }

    /// All local pieces with their reference states.
    pub fn pieces(&self) -> Result<Vec<(Superoperator, LocalGibbsReference)>> {
        let mut out = Vec::new();
        for c in self.contacts() {
            out.extend(lgks::local_generators(c)?);
        }
        Ok(out)
    }

    /// Energy-form currents `Tr[(L_j ρ) H]` into the system from each bath.
    pub fn currents(&self, rho: &DensityMatrix) -> Result<Currents> {
        let [lh, lc, lw] = self.contact_generators()?;
        Ok(Currents {
            hot: lgks::heat_current_energy(&lh, rho, &self.hamiltonian),
            cold: lgks::heat_current_energy(&lc, rho, &self.hamiltonian),
            work: lgks::heat_current_energy(&lw, rho, &self.hamiltonian),
        })
    }

    /// Largest top-level population over oscillator factors (zero for TLS media).
    pub fn truncation_population(&self, rho: &DensityMatrix) -> Result<f64> {
        match self.model.medium {
            Medium::Tls => Ok(0.0),
            Medium::Oscillator(_) => Ok(rho.top_level_population(0)?.max(rho.top_level_population(1)?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Currents {
    pub hot: f64,
    pub cold: f64,
    pub work: f64,
}

impl Currents {
    pub fn first_law_residual(&self) -> f64 {
        self.hot + self.cold + self.work
    }

    /// `-Σ β_j J_j`; the work term drops out when `β_w = 0`.
    pub fn entropy_production(&self, model: &AbsorptionModel) -> f64 {
        -(model.beta_h * self.hot + model.beta_c * self.cold + model.beta_w * self.work)
    }
}

#[derive(Debug, Clone)]
pub struct AbsorptionSteady {
    pub system: AbsorptionSystem,
    pub steady: SteadyState,
    pub currents: Currents,
    /// Oscillator truncation actually used.
    pub levels: Option<usize>,
    pub top_population: f64,
}

/// Steady state and currents, doubling the oscillator truncation until the
/// top-level population falls below [`TRUNCATION_GUARD`].
pub fn solve(model: &AbsorptionModel) -> Result<AbsorptionSteady> {
    let mut m = *model;
    loop {
        let system = AbsorptionSystem::new(&m)?;
        let steady = steady_state(&system.generator)?;
        if !steady.is_ergodic() {
            return Err(Error::NonErgodic(steady.null_dimension));
        }
        let top = system.truncation_population(&steady.state)?;
        match m.medium {
            Medium::Oscillator(n) if top >= TRUNCATION_GUARD => {
                if 2 * n > MAX_LEVELS {
                    return Err(Error::TruncationGuard { population: top, levels: n });
                }
                m.medium = Medium::Oscillator(2 * n);
            }
            medium => {
                let currents = system.currents(&steady.state)?;
                return Ok(AbsorptionSteady {
                    system,
                    steady,
                    currents,
                    levels: match medium {
                        Medium::Oscillator(n) => Some(n),
                        Medium::Tls => None,
                    },
                    top_population: top,
                });
            }
        }
    }
}

pub fn build_absorption_liouvillian(model: &AbsorptionModel) -> Result<Superoperator> {
    Ok(AbsorptionSystem::new(model)?.generator)
}

/// `(J_h, J_c, J_w)` at the numerical steady state.
pub fn currents_numeric(model: &AbsorptionModel) -> Result<(f64, f64, f64)> {
    let s = solve(model)?;
    Ok((s.currents.hot, s.currents.cold, s.currents.work))
}

fn require_hot_work_bath(model: &AbsorptionModel) -> Result<()> {
    if model.beta_w != 0.0 {
        return Err(invalid(
            "beta_w",
            "the closed-form current needs an infinitely hot work bath (beta_w = 0)",
        ));
    }
    Ok(())
}

/// Thermal occupation `(e^{βω} + ε)^{-1}`.
pub fn occupation(beta: f64, omega: f64, epsilon: f64) -> f64 {
    1.0 / ((beta * omega).exp() + epsilon)
}

/// Closed-form stationary cold current for `β_w = 0`.
pub fn steady_current_analytic(model: &AbsorptionModel) -> Result<f64> {
    model.validate()?;
    require_hot_work_bath(model)?;
    let eps = model.epsilon();
    let AbsorptionModel { omega_h, omega_c, gamma_h, gamma_c, gamma_w, beta_h, beta_c, .. } = *model;
    let num = occupation(beta_c, omega_c, eps) - occupation(beta_h, omega_h, eps);
    let k_h = gamma_h * (1.0 + eps * (-beta_h * omega_h).exp());
    let k_c = gamma_c * (1.0 + eps * (-beta_c * omega_c).exp());
    Ok(omega_c * gamma_w * num / (1.0 + gamma_w * (1.0 / k_h + 1.0 / k_c)))
}

/// Right-hand side of the closed mean-occupation equations (`β_w = 0`, so the
/// nonlinear exchange term vanishes).
pub fn mean_value_rhs(n_h: f64, n_c: f64, model: &AbsorptionModel) -> Result<(f64, f64)> {
    model.validate()?;
    require_hot_work_bath(model)?;
    let upper = if model.medium == Medium::Tls { 1.0 } else { f64::INFINITY };
    for (name, n) in [("n_h", n_h), ("n_c", n_c)] {
        if !(n >= 0.0 && n <= upper) {
            return Err(invalid(name, format!("occupation {n} out of range")));
        }
    }
    let eps = model.epsilon();
    let bh = (-model.beta_h * model.omega_h).exp();
    let bc = (-model.beta_c * model.omega_c).exp();
    let dh = -model.gamma_h * (1.0 + eps * bh) * n_h + model.gamma_h * bh + model.gamma_w * (n_c - n_h);
    let dc = -model.gamma_c * (1.0 + eps * bc) * n_c + model.gamma_c * bc + model.gamma_w * (n_h - n_c);
    Ok((dh, dc))
}

/// Fixed point of [`mean_value_rhs`] by a 2×2 linear solve.
pub fn mean_value_fixed_point(model: &AbsorptionModel) -> Result<(f64, f64)> {
    model.validate()?;
    require_hot_work_bath(model)?;
    let eps = model.epsilon();
    let bh = (-model.beta_h * model.omega_h).exp();
    let bc = (-model.beta_c * model.omega_c).exp();
    let k_h = model.gamma_h * (1.0 + eps * bh);
    let k_c = model.gamma_c * (1.0 + eps * bc);
    let g = model.gamma_w;
    // [k_h + g, -g; -g, k_c + g] (n_h, n_c) = (γ_h bh, γ_c bc)
    let (a11, a12, a21, a22) = (k_h + g, -g, -g, k_c + g);
    let (r1, r2) = (model.gamma_h * bh, model.gamma_c * bc);
    let det = a11 * a22 - a12 * a21;
    Ok(((r1 * a22 - a12 * r2) / det, (a11 * r2 - a21 * r1) / det))
}

/// `ω_c / (ω_h - ω_c)`.
pub fn cop(model: &AbsorptionModel) -> Result<f64> {
    if !(model.omega_h > model.omega_c) {
        return Err(invalid("omega_h", "COP needs omega_h > omega_c"));
    }
    Ok(model.omega_c / (model.omega_h - model.omega_c))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowTemperatureCurrent {
    pub current: f64,
    pub gamma_c: f64,
    /// `γ_c > 0.1 γ_h`: the asymptotic form is outside its regime.
    pub regime_warning: bool,
}

/// `ω_c γ_c e^{-ω_c/T_c}` with `γ_c` supplied as a function of `(ω_c, T_c)`.
pub fn low_t_current(model: &AbsorptionModel, gamma_c_of: impl Fn(f64, f64) -> Result<f64>) -> Result<LowTemperatureCurrent> {
    model.validate()?;
    let t_c = 1.0 / model.beta_c;
    let gamma_c = gamma_c_of(model.omega_c, t_c)?;
    let regime_warning = gamma_c > 0.1 * model.gamma_h;
    Ok(LowTemperatureCurrent {
        current: model.omega_c * gamma_c * (-model.beta_c * model.omega_c).exp(),
        gamma_c,
        regime_warning,
    })
}
