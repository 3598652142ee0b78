use qfridge_core::bath::{van_hove_classify, BathSpectrum, BosonicBath, GasBath, HeatCapacityModel, Statistics};
use qfridge_core::cooling::{
    integrate_cooling, time_to_zero_quadrature, unattainability_report, CoolingScenario, CurrentSource,
    FridgeTemplate, Verdict,
};
use qfridge_core::Medium;

fn absorption(medium: Medium) -> FridgeTemplate {
    FridgeTemplate::Absorption { medium, omega_h: 20.0, beta_h: 1.0, gamma_h: 1.0, gamma_w: 1.0 }
}

fn bosonic(d: u32, kappa: f64) -> (BathSpectrum, HeatCapacityModel) {
    (
        BathSpectrum::Bosonic(BosonicBath { d, kappa, g0: 1.0, temperature: 1.0 }),
        HeatCapacityModel::BosonicSolid { d, c0: 1.0 },
    )
}

fn zeta(s: &CoolingScenario) -> f64 {
    integrate_cooling(s).unwrap().zeta_fit.expect("fit").zeta
}

#[test]
fn exponent_does_not_depend_on_fridge_or_medium() {
    let (bath, capacity) = bosonic(3, 1.5);
    let base = CoolingScenario {
        source: CurrentSource::FullAnalytic,
        ..CoolingScenario::new(absorption(Medium::Tls), bath, capacity, 0.1)
    };
    let tls = zeta(&base);
    let osc = zeta(&CoolingScenario { fridge: absorption(Medium::Oscillator(12)), ..base });
    let drv = zeta(&CoolingScenario {
        fridge: FridgeTemplate::Driven { omega_h: 20.0, beta_h: 1.0, gamma_h: 1.0, levels: 12 },
        ..base
    });
    assert!((tls - 1.5).abs() < 0.05, "tls {tls}");
    assert!((tls - osc).abs() < 0.05, "osc {osc}");
    assert!((tls - drv).abs() < 0.05, "driven {drv}");
}

#[test]
fn numeric_steady_currents_follow_the_same_law() {
    // Few samples per decade keep the full steady-state solves cheap.
    let (bath, capacity) = bosonic(3, 1.0);
    let s = CoolingScenario {
        source: CurrentSource::Numeric,
        samples_per_decade: 20,
        t_floor: Some(1e-3),
        ..CoolingScenario::new(absorption(Medium::Tls), bath, capacity, 0.1)
    };
    let z = zeta(&s);
    assert!((z - 1.0).abs() < 0.05, "zeta {z}");
}

#[test]
fn fermi_gas_gives_three_halves() {
    let gas = BathSpectrum::Gas(GasBath {
        n: 1e-2,
        m: 2.0,
        a_s: 0.05,
        temperature: 1.0,
        statistics: Statistics::Fermi,
        t_crit: Some(0.5),
    });
    let capacity = HeatCapacityModel::IdealGas { statistics: Statistics::Fermi, t_crit: Some(0.5), c0: 3.0 };
    let s = CoolingScenario::new(absorption(Medium::Tls), gas, capacity, 0.05);
    let traj = integrate_cooling(&s).unwrap();
    let fit = traj.zeta_fit.unwrap();
    assert!((fit.zeta - 1.5).abs() < 0.05);
    let report = unattainability_report(&fit, &traj).unwrap();
    assert_eq!(report.verdict, Verdict::PowerLawApproach);
}

#[test]
fn unattainability_boundary_at_kappa_one() {
    let (bath, capacity) = bosonic(3, 1.0);
    let s = CoolingScenario::new(absorption(Medium::Tls), bath, capacity, 0.1);
    let traj = integrate_cooling(&s).unwrap();
    let report = unattainability_report(traj.zeta_fit.as_ref().unwrap(), &traj).unwrap();
    assert_eq!(report.verdict, Verdict::ExponentialApproach);

    let (bath, capacity) = bosonic(3, 0.5);
    let s = CoolingScenario::new(absorption(Medium::Tls), bath, capacity, 0.1);
    let traj = integrate_cooling(&s).unwrap();
    let report = unattainability_report(traj.zeta_fit.as_ref().unwrap(), &traj).unwrap();
    assert_eq!(report.verdict, Verdict::FiniteTimeZero);
    let quad = time_to_zero_quadrature(&s).unwrap();
    assert!(((report.t0.unwrap() - quad) / quad).abs() < 1e-2);
    assert!(!van_hove_classify(3, 0.5).third_law_compatible);
}
