use qfridge_core::absorption::{self, AbsorptionModel, AbsorptionSystem, Medium};
use qfridge_core::driven::{self, DrivenModel, DrivenRates, DrivenSystem};
use qfridge_core::lgks::entropy_production;
use qfridge_core::{evolve, DensityMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_absorption(rng: &mut ChaCha8Rng, medium: Medium) -> AbsorptionModel {
    let omega_c = rng.random_range(0.5..2.0);
    let omega_h = omega_c + rng.random_range(0.5..3.0);
    let beta_h = rng.random_range(0.2..1.5);
    let beta_c = beta_h * rng.random_range(1.0..3.0);
    AbsorptionModel {
        gamma_h: rng.random_range(0.2..2.0),
        gamma_c: rng.random_range(0.2..2.0),
        gamma_w: rng.random_range(0.2..2.0),
        beta_w: beta_h * rng.random_range(0.0..1.0),
        ..AbsorptionModel::new(medium, omega_h, omega_c, beta_h, beta_c)
    }
}

#[test]
fn absorption_steady_states_obey_first_and_second_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let model = random_absorption(&mut rng, Medium::Tls);
        let s = absorption::solve(&model).unwrap();
        assert!(s.currents.first_law_residual() <= 1e-10);
        assert!(s.currents.entropy_production(&model) >= -1e-10);
    }
}

#[test]
fn absorption_cop_is_otto_value_whenever_it_cools() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 10 {
        let model = random_absorption(&mut rng, Medium::Tls);
        let (_, j_c, j_w) = absorption::currents_numeric(&model).unwrap();
        if j_c.abs() < 1e-9 {
            continue;
        }
        let ratio = j_c / j_w;
        let otto = absorption::cop(&model).unwrap();
        assert!(((ratio - otto) / otto).abs() < 1e-8);
        checked += 1;
    }
}

#[test]
fn entropy_production_stays_nonnegative_along_relaxation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let model = AbsorptionModel {
        beta_w: 0.1,
        ..AbsorptionModel::new(Medium::Tls, 2.0, 1.0, 1.0, 1.5)
    };
    let system = AbsorptionSystem::new(&model).unwrap();
    let pieces = system.pieces().unwrap();
    let grid: Vec<f64> = (0..=20).map(|k| 0.25 * k as f64).collect();
    for _ in 0..10 {
        let rho0 = DensityMatrix::random(&system.space, &mut rng);
        for rho in evolve(&rho0, &system.generator, &grid).unwrap() {
            assert!(entropy_production(&rho, &pieces).sigma >= -1e-10);
        }
    }
}

#[test]
fn driven_fridge_in_cooling_regime() {
    let model = DrivenModel::new(4.0, 1.0, 0.3, 1.0, 2.0, DrivenRates::uniform(1.0));
    let s = driven::solve_driven(&model).unwrap();
    let analytic = driven::jc_analytic(&model).unwrap();
    assert!(s.currents.cold > 0.0);
    assert!(((s.currents.cold - analytic) / analytic).abs() < 1e-6);
    assert!(model.beta_h * s.currents.hot + model.beta_c * s.currents.cold <= 1e-10);
    assert!(s.currents.power > 0.0);

    let system = DrivenSystem::new(&DrivenModel { levels: s.levels, ..model }).unwrap();
    let pieces = system.pieces().unwrap();
    let sigma = entropy_production(&s.steady.state, &pieces).sigma;
    assert!(sigma >= -1e-10);
}

#[test]
fn dephasing_leaves_the_cold_current_unchanged() {
    let base = AbsorptionModel::new(Medium::Tls, 2.0, 1.0, 1.0, 1.5);
    let reference = absorption::currents_numeric(&base).unwrap().1;
    for delta_h in [0.0, 1.0, 10.0] {
        for delta_c in [0.0, 1.0, 10.0] {
            let model = AbsorptionModel { delta_h, delta_c, ..base };
            let j_c = absorption::currents_numeric(&model).unwrap().1;
            assert!((j_c - reference).abs() < 1e-10);
        }
    }
}
