//! Benchmarks for `qfridge-core`; see `benches/`.
//!
//! Shared fixtures live here so benches and ad-hoc profiling use the same models.

use qfridge_core::absorption::{AbsorptionModel, Medium};
use qfridge_core::cooling::{CoolingScenario, FridgeTemplate};
use qfridge_core::driven::{DrivenModel, DrivenRates};
use qfridge_core::{BathSpectrum, BosonicBath, HeatCapacityModel};

pub fn tls_fridge() -> AbsorptionModel {
    AbsorptionModel::new(Medium::Tls, 2.0, 1.0, 1.0, 1.5)
}

pub fn oscillator_fridge(levels: usize) -> AbsorptionModel {
    AbsorptionModel::new(Medium::Oscillator(levels), 2.0, 1.0, 1.0, 1.5)
}

pub fn driven_fridge(levels: usize) -> DrivenModel {
    DrivenModel {
        levels,
        ..DrivenModel::new(30.0, 1.0, 0.3, 1.0, 5.0, DrivenRates::uniform(1.0))
    }
}

pub fn phonon_cooling(kappa: f64) -> CoolingScenario {
    CoolingScenario::new(
        FridgeTemplate::Absorption {
            medium: Medium::Tls,
            omega_h: 20.0,
            beta_h: 1.0,
            gamma_h: 1.0,
            gamma_w: 1.0,
        },
        BathSpectrum::Bosonic(BosonicBath { d: 3, kappa, g0: 1.0, temperature: 1.0 }),
        HeatCapacityModel::BosonicSolid { d: 3, c0: 1.0 },
        0.1,
    )
}
