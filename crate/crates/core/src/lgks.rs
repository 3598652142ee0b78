//! Thermal generators in detailed-balance form and the thermodynamic
//! functionals built on them: local heat currents, entropy production and
//! averaged power.
//!
//! Sign convention: a heat current is positive when heat flows from the bath
//! into the system.

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::operator::{DensityMatrix, Operator};
use crate::superop::Superoperator;

/// Relative tolerance of [`kms_check`].
pub const KMS_TOL: f64 = 1e-12;

/// One Bohr-frequency component of a bath coupling.
///
/// `jump` lowers the energy of `reference` by `omega`; the reference
/// Hamiltonian fixes the local Gibbs state used in the logarithmic current.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalTerm {
    pub jump: Operator,
    pub omega: f64,
    pub rate: f64,
    pub reference: Operator,
    /// Multiplies the upward rate. `1.0` is detailed balance; anything else
    /// breaks it and exists for fault-injection runs.
    pub upward_scale: f64,
}

impl ThermalTerm {
    pub fn new(jump: Operator, omega: f64, rate: f64, reference: Operator) -> Self {
        Self {
            jump,
            omega,
            rate,
            reference,
            upward_scale: 1.0,
        }
    }

    pub fn upward_rate(&self, beta: f64) -> f64 {
        self.rate * (-beta * self.omega).exp() * self.upward_scale
    }

    /// `‖[H_ref, A] + ω A‖`, zero when the jump is an eigenoperator of its reference.
    pub fn bohr_defect(&self) -> f64 {
        let comm = self.reference.commutator(&self.jump);
        (&comm + &self.jump.scale(self.omega)).norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalContact {
    pub label: String,
    /// Inverse temperature; `0` encodes an infinitely hot bath.
    pub beta: f64,
    pub terms: Vec<ThermalTerm>,
    /// Pure dephasing channels `(jump, rate)` carried by this contact. They
    /// commute with the reference Hamiltonians and carry no heat.
    pub dephasing: Vec<(Operator, f64)>,
}

impl ThermalContact {
    pub fn new(label: impl Into<String>, beta: f64) -> Self {
        Self {
            label: label.into(),
            beta,
            terms: Vec::new(),
            dephasing: Vec::new(),
        }
    }

    pub fn with_term(mut self, term: ThermalTerm) -> Self {
        self.terms.push(term);
        self
    }

    pub fn with_dephasing(mut self, jump: Operator, rate: f64) -> Self {
        self.dephasing.push((jump, rate));
        self
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return Err(invalid("beta", format!("{} is not a finite nonnegative number", self.beta)));
        }
        let Some(first) = self.terms.first() else {
            return Err(invalid("terms", format!("contact `{}` has no terms", self.label)));
        };
        let space = first.jump.space();
        for t in &self.terms {
            if !(t.omega > 0.0) || !t.omega.is_finite() {
                return Err(invalid("omega", format!("{} must be positive", t.omega)));
            }
            if t.rate < 0.0 || !t.rate.is_finite() {
                return Err(Error::NegativeRate(t.rate));
            }
            if !(t.upward_scale >= 0.0) {
                return Err(invalid("upward_scale", format!("{}", t.upward_scale)));
            }
            if t.jump.space() != space || t.reference.space() != space {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    found: t.jump.dim(),
                });
            }
        }
        for (jump, rate) in &self.dephasing {
            if jump.space() != space {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    found: jump.dim(),
                });
            }
            if *rate < 0.0 {
                return Err(Error::NegativeRate(*rate));
            }
        }
        Ok(())
    }

    /// Whether every upward/downward pair satisfies [`kms_check`].
    pub fn detailed_balance_holds(&self) -> bool {
        self.terms
            .iter()
            .all(|t| kms_check(t.rate, t.upward_rate(self.beta), t.omega, self.beta))
    }
}

/// `Σ_terms γ D[A] + γ e^{-βω} D[A†]` plus the contact's dephasing channels.
pub fn build_thermal_generator(contact: &ThermalContact) -> Result<Superoperator> {
    contact.validate()?;
    let mut l = Superoperator::zero(contact.terms[0].jump.space());
    for t in &contact.terms {
        l.push_channel(t.jump.clone(), t.rate)?;
        l.push_channel(t.jump.adjoint(), t.upward_rate(contact.beta))?;
    }
    for (jump, rate) in &contact.dephasing {
        l.push_channel(jump.clone(), *rate)?;
    }
    Ok(l)
}

/// One generator piece per term, each paired with the Gibbs state of that
/// term's reference Hamiltonian. Dephasing rides on the first piece.
pub fn local_generators(contact: &ThermalContact) -> Result<Vec<(Superoperator, LocalGibbsReference)>> {
    contact.validate()?;
    let mut out = Vec::with_capacity(contact.terms.len());
    for (k, t) in contact.terms.iter().enumerate() {
        let mut l = Superoperator::zero(t.jump.space());
        l.push_channel(t.jump.clone(), t.rate)?;
        l.push_channel(t.jump.adjoint(), t.upward_rate(contact.beta))?;
        if k == 0 {
            for (jump, rate) in &contact.dephasing {
                l.push_channel(jump.clone(), *rate)?;
            }
        }
        let r = LocalGibbsReference::new(&contact.label, contact.beta, 1.0, &t.reference)?;
        out.push((l, r));
    }
    Ok(out)
}

/// Gibbs-like state `exp(-β·scale·H_ref)/Z` of one local generator piece.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalGibbsReference {
    pub label: String,
    pub beta: f64,
    pub scale: f64,
    pub state: DensityMatrix,
    /// `ln ρ̃`, evaluated from the spectrum of `H_ref` so it stays finite
    /// even when populations underflow.
    pub log_state: CMatrix,
}

impl LocalGibbsReference {
    pub fn new(label: &str, beta: f64, scale: f64, h_ref: &Operator) -> Result<Self> {
        let b = beta * scale;
        let state = gibbs_state(h_ref, b)?;
        let (vals, _) = linalg::hermitian_eigen(h_ref.matrix());
        let emin = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let log_z: f64 = vals.iter().map(|e| (-b * (e - emin)).exp()).sum::<f64>().ln();
        let log_state = linalg::hermitian_function(h_ref.matrix(), |e| -b * (e - emin) - log_z);
        Ok(Self {
            label: label.to_string(),
            beta,
            scale,
            state,
            log_state,
        })
    }

    /// `‖L ρ̃‖`, which should vanish for the piece this reference belongs to.
    pub fn stationarity_defect(&self, generator: &Superoperator) -> f64 {
        linalg::frobenius(&generator.apply(self.state.matrix()))
    }

    pub fn verify(&self, generator: &Superoperator, tol: f64) -> Result<()> {
        let defect = self.stationarity_defect(generator);
        if defect > tol {
            Err(invalid(
                "reference",
                format!("`{}` reference is not stationary (defect {defect:.3e})", self.label),
            ))
        } else {
            Ok(())
        }
    }
}

/// `exp(-βH)/Z` with the spectrum shifted by its minimum before exponentiation.
pub fn gibbs_state(h: &Operator, beta: f64) -> Result<DensityMatrix> {
    let herm = h.hermiticity_error();
    if herm > 1e-12 {
        return Err(Error::NotHermitian(herm));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(invalid("beta", format!("{beta}")));
    }
    let (vals, _) = linalg::hermitian_eigen(h.matrix());
    let emin = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let unnormalised = linalg::hermitian_function(h.matrix(), |e| (-beta * (e - emin)).exp());
    DensityMatrix::from_raw(h.space(), &unnormalised)
}

/// `|γ₋ - e^{-βω} γ₊| ≤ 1e-12 · γ₊`.
pub fn kms_check(gamma_pos: f64, gamma_neg: f64, omega: f64, beta: f64) -> bool {
    (gamma_neg - (-beta * omega).exp() * gamma_pos).abs() <= KMS_TOL * gamma_pos
}

/// `Re Tr[(L ρ) X]`.
fn trace_against(generator: &Superoperator, rho: &DensityMatrix, x: &CMatrix) -> f64 {
    let lr = generator.apply(rho.matrix());
    let mut acc = c(0.0);
    for i in 0..lr.nrows() {
        for j in 0..lr.ncols() {
            acc += lr[(i, j)] * x[(j, i)];
        }
    }
    acc.re
}

/// `-Tr[(L ρ) ln ρ̃]`, the entropy flux `β J` of one piece; finite also at `β = 0`.
pub fn entropy_flux(generator: &Superoperator, rho: &DensityMatrix, reference: &LocalGibbsReference) -> f64 {
    -trace_against(generator, rho, &reference.log_state)
}

/// `J = -T Tr[(L ρ) ln ρ̃]`.
pub fn heat_current(generator: &Superoperator, rho: &DensityMatrix, reference: &LocalGibbsReference) -> Result<f64> {
    if reference.beta == 0.0 {
        return Err(Error::InfiniteTemperature);
    }
    Ok(entropy_flux(generator, rho, reference) / reference.beta)
}

/// `J = Tr[(L ρ) H]`.
pub fn heat_current_energy(generator: &Superoperator, rho: &DensityMatrix, h: &Operator) -> f64 {
    trace_against(generator, rho, h.matrix())
}

/// `Tr[(L ρ)(ln ρ - ln ρ̃)]`, non-positive for any state (Spohn).
pub fn spohn_term(generator: &Superoperator, rho: &DensityMatrix, reference: &LocalGibbsReference) -> (f64, bool) {
    let (log_rho, floored) = rho.log();
    let diff = log_rho - &reference.log_state;
    (trace_against(generator, rho, &diff), floored)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyProduction {
    /// `σ = dS/dt - Σ β_j J_j`.
    pub sigma: f64,
    /// `dS/dt = -Tr[(L ρ) ln ρ]`.
    pub entropy_rate: f64,
    /// `Σ β_j J_j`.
    pub flux: f64,
    /// Whether eigenvalues of `ρ` were floored before taking the logarithm.
    pub regularized: bool,
}

/// Entropy production of `ρ` under the sum of the given pieces.
///
/// Hamiltonian parts drop out of `dS/dt`, so only the dissipative pieces are needed.
pub fn entropy_production(rho: &DensityMatrix, pieces: &[(Superoperator, LocalGibbsReference)]) -> EntropyProduction {
    let (log_rho, regularized) = rho.log();
    let mut entropy_rate = 0.0;
    let mut flux = 0.0;
    for (l, r) in pieces {
        entropy_rate -= trace_against(l, rho, &log_rho);
        flux += entropy_flux(l, rho, r);
    }
    EntropyProduction {
        sigma: entropy_rate - flux,
        entropy_rate,
        flux,
        regularized,
    }
}

/// `P = -Σ_j J_j`.
pub fn averaged_power(steady_currents: &[f64]) -> f64 {
    -steady_currents.iter().sum::<f64>()
}
