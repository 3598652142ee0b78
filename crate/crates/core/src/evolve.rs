//! Propagation `ρ(t) = e^{L t} ρ(0)` on a time grid.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::numerics::ode::Dopri5;
use crate::operator::DensityMatrix;
use crate::superop::Superoperator;

/// Largest `d²` for which the dense exponential is used under [`Propagation::Auto`].
pub const DENSE_EXP_LIMIT: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Propagation {
    /// Dense exponential for small spaces, Runge–Kutta otherwise.
    #[default]
    Auto,
    /// `exp(L Δt)` by scaling and squaring, cached per distinct step.
    Exponential,
    /// Matrix-free Dormand–Prince with the given relative tolerance.
    RungeKutta { rtol: f64 },
}

pub fn evolve(rho0: &DensityMatrix, l: &Superoperator, t_grid: &[f64]) -> Result<Vec<DensityMatrix>> {
    evolve_with(rho0, l, t_grid, Propagation::Auto)
}

pub fn evolve_with(
    rho0: &DensityMatrix,
    l: &Superoperator,
    t_grid: &[f64],
    method: Propagation,
) -> Result<Vec<DensityMatrix>> {
    if rho0.space() != l.space() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            found: rho0.space().dim(),
        });
    }
    if let Some(&t0) = t_grid.first() {
        if t0 < 0.0 || !t0.is_finite() {
            return Err(Error::Integration(format!("grid starts at {t0}")));
        }
    }
    if t_grid.windows(2).any(|w| !(w[1] >= w[0]) || !w[1].is_finite()) {
        return Err(Error::Integration("time grid must be nondecreasing".into()));
    }
    let d = l.dim();
    let method = match method {
        Propagation::Auto if d * d <= DENSE_EXP_LIMIT => Propagation::Exponential,
        Propagation::Auto => Propagation::RungeKutta { rtol: 1e-9 },
        m => m,
    };

    let mut out = Vec::with_capacity(t_grid.len());
    let mut current = rho0.matrix().clone();
    let mut t = 0.0;
    match method {
        Propagation::Exponential => {
            let dense = l.matrix();
            let mut cache: Vec<(f64, CMatrix)> = Vec::new();
            for &target in t_grid {
                let dt = target - t;
                if dt > 0.0 {
                    let prop = match cache.iter().find(|(s, _)| *s == dt) {
                        Some((_, p)) => p.clone(),
                        None => {
                            let p = (&dense * c(dt)).exp();
                            cache.push((dt, p.clone()));
                            p
                        }
                    };
                    let v = prop * linalg::vectorize(&current);
                    current = linalg::unvectorize(&v, d);
                }
                t = target;
                out.push(DensityMatrix::from_raw(l.space(), &current)?);
            }
        }
        Propagation::RungeKutta { rtol } => {
            let solver = Dopri5::with_tolerances(rtol, rtol * 1e-3);
            for &target in t_grid {
                if target > t {
                    let (next, _) = solver.integrate(|_, x: &CMatrix| Ok(l.apply(x)), t, current, target)?;
                    current = next;
                }
                t = target;
                out.push(DensityMatrix::from_raw(l.space(), &current)?);
            }
        }
        Propagation::Auto => unreachable!("resolved above"),
    }
    Ok(out)
}
