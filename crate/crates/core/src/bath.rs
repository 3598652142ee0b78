//! Relaxation-rate spectra `γ(ω, T)` of the cold bath, heat-capacity models
//! and the ground-state (van Hove) classification of bosonic couplings.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numerics::bessel::k1e;
use crate::numerics::quad::Quadrature;

/// Bosonic field in `d` dimensions with form factor `|g(ω)|² ∝ ω^κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BosonicBath {
    pub d: u32,
    pub kappa: f64,
    #[serde(default = "one")]
    pub g0: f64,
    /// Overridden by the contact temperature wherever the bath is attached.
    #[serde(default = "one")]
    pub temperature: f64,
}

fn one() -> f64 {
    1.0
}

impl BosonicBath {
    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(invalid("d", "spatial dimension must be at least 1"));
        }
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(invalid("kappa", format!("{} must be positive", self.kappa)));
        }
        if !(self.g0 > 0.0) || !self.g0.is_finite() {
            return Err(invalid("g0", format!("{} must be positive", self.g0)));
        }
        positive("temperature", self.temperature)
    }

    /// `κ + d - 1`, the low-frequency exponent of the rate at zero temperature.
    pub fn exponent(&self) -> f64 {
        self.kappa + self.d as f64 - 1.0
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("{v} must be positive and finite")))
    }
}

/// `γ(ω) = g0 ω^{κ+d-1} / (1 - e^{-ω/T})` for `ω > 0`.
pub fn bosonic_rate(bath: &BosonicBath, omega: f64) -> Result<f64> {
    bath.validate()?;
    positive("omega", omega)?;
    Ok(bath.g0 * omega.powf(bath.exponent()) / -(-omega / bath.temperature).exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistics {
    Bose,
    Fermi,
}

/// Dilute gas scattering off the working medium with a constant s-wave T-matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasBath {
    pub n: f64,
    pub m: f64,
    pub a_s: f64,
    /// Overridden by the contact temperature wherever the bath is attached.
    #[serde(default = "one")]
    pub temperature: f64,
    pub statistics: Statistics,
    /// Condensation temperature (Bose) or Fermi temperature (Fermi).
    #[serde(default)]
    pub t_crit: Option<f64>,
}

impl GasBath {
    pub fn validate(&self) -> Result<()> {
        positive("n", self.n)?;
        positive("m", self.m)?;
        positive("a_s", self.a_s)?;
        positive("temperature", self.temperature)?;
        if let Some(tc) = self.t_crit {
            positive("t_crit", tc)?;
        }
        Ok(())
    }

    /// Density of particles that take part in scattering.
    ///
    /// Below a Bose condensation temperature only the excited fraction
    /// `(T/T_crit)^{3/2}` counts; below the Fermi temperature only the
    /// thermal shell `T/T_F`.
    pub fn effective_density(&self) -> f64 {
        match self.t_crit {
            Some(tc) if self.temperature < tc => {
                let r = self.temperature / tc;
                match self.statistics {
                    Statistics::Bose => self.n * r.powf(1.5),
                    Statistics::Fermi => self.n * r,
                }
            }
            _ => self.n,
        }
    }
}

/// Closed form `(4π)⁴ (β/2πm)^{1/2} a_s² n ω K₁(βω/2) e^{βω/2}`, using the
/// effective density.
pub fn gas_rate_closed(bath: &GasBath, omega: f64) -> Result<f64> {
    bath.validate()?;
    positive("omega", omega)?;
    let beta = 1.0 / bath.temperature;
    let prefactor = (4.0 * PI).powi(4) * (beta / (2.0 * PI * bath.m)).sqrt() * bath.a_s * bath.a_s;
    Ok(prefactor * bath.effective_density() * omega * k1e(0.5 * beta * omega))
}

/// Direct quadrature of the golden-rule rate
/// `2π n (4π a_s/m)² ∫d³p f_T(p) 4π m p'`, `p' = √(p² + 2mω)`,
/// with a normalised Maxwell distribution `f_T`.
pub fn gas_rate_numeric(bath: &GasBath, omega: f64) -> Result<f64> {
    bath.validate()?;
    positive("omega", omega)?;
    let m = bath.m;
    let beta = 1.0 / bath.temperature;
    // Momenta in units of the thermal momentum √(2m/β): f_T d³p → π^{-3/2} e^{-u²} d³u.
    let p_th = (2.0 * m / beta).sqrt();
    let shell = 2.0 * m * omega / (p_th * p_th);
    let radial = Quadrature::with_rel_tol(1e-11).integrate(
        |u| 4.0 * PI * u * u * (-u * u).exp() * (u * u + shell).sqrt(),
        0.0,
        40.0,
    )?;
    let momentum_average = p_th * radial / PI.powf(1.5);
    let t_matrix = 4.0 * PI * bath.a_s / m;
    Ok(2.0 * PI * bath.effective_density() * t_matrix * t_matrix * 4.0 * PI * m * momentum_average)
}

/// A cold-bath rate model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum BathSpectrum {
    Bosonic(BosonicBath),
    Gas(GasBath),
}

impl BathSpectrum {
    pub fn temperature(&self) -> f64 {
        match self {
            BathSpectrum::Bosonic(b) => b.temperature,
            BathSpectrum::Gas(g) => g.temperature,
        }
    }

    pub fn at_temperature(&self, t: f64) -> Self {
        match *self {
            BathSpectrum::Bosonic(b) => BathSpectrum::Bosonic(BosonicBath { temperature: t, ..b }),
            BathSpectrum::Gas(g) => BathSpectrum::Gas(GasBath { temperature: t, ..g }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BathSpectrum::Bosonic(b) => b.validate(),
            BathSpectrum::Gas(g) => g.validate(),
        }
    }

    /// Downward (emission into the bath) rate at `ω > 0`.
    pub fn rate(&self, omega: f64) -> Result<f64> {
        match self {
            BathSpectrum::Bosonic(b) => bosonic_rate(b, omega),
            BathSpectrum::Gas(g) => gas_rate_closed(g, omega),
        }
    }

    /// Rate at either sign of `ω`; negative frequencies (absorption from the
    /// bath) follow the closed forms continued to `ω < 0`.
    pub fn rate_signed(&self, omega: f64) -> Result<f64> {
        if omega > 0.0 {
            return self.rate(omega);
        }
        let w = -omega;
        let t = self.temperature();
        match self {
            // g0 |ω|^{κ+d-1} n̄(|ω|)
            BathSpectrum::Bosonic(b) => {
                let up = bosonic_rate(b, w)?;
                Ok(up * (-w / t).exp())
            }
            // |ω| K₁(β|ω|/2) e^{βω/2} = |ω| K₁e(β|ω|/2) e^{-β|ω|}
            BathSpectrum::Gas(g) => Ok(gas_rate_closed(g, w)? * (-w / t).exp()),
        }
    }
}

/// Heat capacity `c_V(T)` of the cold bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum HeatCapacityModel {
    /// `c0 T^d`.
    BosonicSolid {
        d: u32,
        #[serde(default = "one")]
        c0: f64,
    },
    /// Constant `c0` above `t_crit`; `c0 (T/T_crit)^{3/2}` (Bose) or
    /// `c0 T/T_F` (Fermi) below.
    IdealGas {
        statistics: Statistics,
        #[serde(default)]
        t_crit: Option<f64>,
        #[serde(default = "one")]
        c0: f64,
    },
    /// `c0 T^exponent`.
    Custom {
        exponent: f64,
        #[serde(default = "one")]
        c0: f64,
    },
}

impl HeatCapacityModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            HeatCapacityModel::BosonicSolid { d, c0 } => {
                if d < 1 {
                    return Err(invalid("d", "spatial dimension must be at least 1"));
                }
                positive("c0", c0)
            }
            HeatCapacityModel::IdealGas { t_crit, c0, .. } => {
                if let Some(tc) = t_crit {
                    positive("t_crit", tc)?;
                }
                positive("c0", c0)
            }
            HeatCapacityModel::Custom { exponent, c0 } => {
                if !exponent.is_finite() {
                    return Err(invalid("exponent", "must be finite"));
                }
                positive("c0", c0)
            }
        }
    }
}

pub fn heat_capacity(model: &HeatCapacityModel, t: f64) -> f64 {
    match *model {
        HeatCapacityModel::BosonicSolid { d, c0 } => c0 * t.powi(d as i32),
        HeatCapacityModel::IdealGas { statistics, t_crit, c0 } => match t_crit {
            Some(tc) if t < tc => match statistics {
                Statistics::Bose => c0 * (t / tc).powf(1.5),
                Statistics::Fermi => c0 * t / tc,
            },
            _ => c0,
        },
        HeatCapacityModel::Custom { exponent, c0 } => c0 * t.powf(exponent),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VanHove {
    /// `κ > 2 - d`.
    pub ground_state_exists: bool,
    /// `κ > 1 - d`.
    pub e0_finite: bool,
    /// `κ ≥ 1`.
    pub third_law_compatible: bool,
}

pub fn van_hove_classify(d: u32, kappa: f64) -> VanHove {
    let d = d as f64;
    VanHove {
        ground_state_exists: kappa > 2.0 - d,
        e0_finite: kappa > 1.0 - d,
        third_law_compatible: kappa >= 1.0,
    }
}
