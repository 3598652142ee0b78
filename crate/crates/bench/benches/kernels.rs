use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qfridge_bench::{driven_fridge, oscillator_fridge, phonon_cooling, tls_fridge};
use qfridge_core::absorption::{self, AbsorptionSystem};
use qfridge_core::cooling::integrate_cooling;
use qfridge_core::driven::{self, DrivenSystem};
use qfridge_core::numerics::bessel::{k1, k1e};
use qfridge_core::steady_state;

fn steady(c: &mut Criterion) {
    let mut g = c.benchmark_group("steady_state");
    let tls = AbsorptionSystem::new(&tls_fridge()).unwrap();
    g.bench_function("absorption_tls", |b| b.iter(|| steady_state(black_box(&tls.generator)).unwrap()));
    let osc = AbsorptionSystem::new(&oscillator_fridge(12)).unwrap();
    g.bench_function("absorption_oscillator_12", |b| b.iter(|| steady_state(black_box(&osc.generator)).unwrap()));
    let drv = DrivenSystem::new(&driven_fridge(12)).unwrap();
    g.bench_function("driven_12", |b| b.iter(|| steady_state(black_box(&drv.generator)).unwrap()));
    g.sample_size(10);
    let drv24 = DrivenSystem::new(&driven_fridge(24)).unwrap();
    g.bench_function("driven_24", |b| b.iter(|| steady_state(black_box(&drv24.generator)).unwrap()));
    g.finish();
}

fn currents(c: &mut Criterion) {
    let model = tls_fridge();
    c.bench_function("absorption_closed_form", |b| {
        b.iter(|| absorption::steady_current_analytic(black_box(&model)).unwrap())
    });
    let d = driven_fridge(12);
    c.bench_function("driven_closed_form", |b| b.iter(|| driven::jc_analytic(black_box(&d)).unwrap()));
}

fn bessel(c: &mut Criterion) {
    let xs: Vec<f64> = (0..64).map(|k| 0.01 * 1.2f64.powi(k)).collect();
    c.bench_function("k1_64_points", |b| b.iter(|| xs.iter().map(|&x| k1(black_box(x))).sum::<f64>()));
    c.bench_function("k1e_64_points", |b| b.iter(|| xs.iter().map(|&x| k1e(black_box(x))).sum::<f64>()));
}

fn cooling(c: &mut Criterion) {
    let mut g = c.benchmark_group("cooling");
    for kappa in [0.5, 1.0, 2.0] {
        let s = phonon_cooling(kappa);
        g.bench_function(format!("integrate_kappa_{kappa}"), |b| b.iter(|| integrate_cooling(black_box(&s)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, steady, currents, bessel, cooling);
criterion_main!(benches);
