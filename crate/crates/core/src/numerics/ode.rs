//! Adaptive Dormand–Prince 5(4) integration.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// State vectors the integrator can combine linearly.
pub trait OdeState: Clone {
    /// `self + Σ cᵢ·vᵢ`
    fn combine(&self, terms: &[(f64, &Self)]) -> Self;
    /// RMS of `err` in units of `atol + rtol·max(|a|, |b|)`.
    fn scaled_rms(err: &Self, a: &Self, b: &Self, rtol: f64, atol: f64) -> f64;
}

impl OdeState for f64 {
    fn combine(&self, terms: &[(f64, &Self)]) -> Self {
        terms.iter().fold(*self, |acc, (c, v)| acc + c * **v)
    }

    fn scaled_rms(err: &Self, a: &Self, b: &Self, rtol: f64, atol: f64) -> f64 {
        err.abs() / (atol + rtol * a.abs().max(b.abs()))
    }
}

impl OdeState for Vec<f64> {
    fn combine(&self, terms: &[(f64, &Self)]) -> Self {
        let mut out = self.clone();
        for (c, v) in terms {
            for (o, x) in out.iter_mut().zip(v.iter()) {
                *o += c * x;
            }
        }
        out
    }

    fn scaled_rms(err: &Self, a: &Self, b: &Self, rtol: f64, atol: f64) -> f64 {
        let n = err.len().max(1) as f64;
        let sum: f64 = err
            .iter()
            .zip(a.iter().zip(b.iter()))
            .map(|(e, (x, y))| (e / (atol + rtol * x.abs().max(y.abs()))).powi(2))
            .sum();
        (sum / n).sqrt()
    }
}

impl OdeState for CMatrix {
    fn combine(&self, terms: &[(f64, &Self)]) -> Self {
        let mut out = self.clone();
        for (c, v) in terms {
            if *c != 0.0 {
                out.zip_apply(*v, |o, x| *o += x * *c);
            }
        }
        out
    }

    fn scaled_rms(err: &Self, a: &Self, b: &Self, rtol: f64, atol: f64) -> f64 {
        let n = err.len().max(1) as f64;
        let sum: f64 = err
            .iter()
            .zip(a.iter().zip(b.iter()))
            .map(|(e, (x, y)): (&Complex64, (&Complex64, &Complex64))| {
                let sc = atol + rtol * x.norm().max(y.norm());
                (e.norm() / sc).powi(2)
            })
            .sum();
        (sum / n).sqrt()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// b - b* (fifth minus embedded fourth order weights)
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

impl Dopri5 {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    /// Integrates `y' = f(t, y)` from `t0` to `t1` (either direction).
    pub fn integrate<S, F>(&self, mut f: F, t0: f64, y0: S, t1: f64) -> Result<(S, Stats)>
    where
        S: OdeState,
        F: FnMut(f64, &S) -> Result<S>,
    {
        let mut stats = Stats::default();
        if t1 == t0 {
            return Ok((y0, stats));
        }
        let dir = (t1 - t0).signum();
        let span = (t1 - t0).abs();
        let mut h = span / 16.0;
        let h_min = span * 1e-14;
        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y)?;
        while (t1 - t) * dir > 0.0 {
            if stats.accepted + stats.rejected >= self.max_steps {
                return Err(Error::Integration(format!("step budget exhausted at t = {t}")));
            }
            let last = h >= (t1 - t).abs();
            if last {
                h = (t1 - t).abs();
            }
            let hs = h * dir;
            let y2 = y.combine(&[(hs * A2[0], &k1)]);
            let k2 = f(t + C[1] * hs, &y2)?;
            let y3 = y.combine(&[(hs * A3[0], &k1), (hs * A3[1], &k2)]);
            let k3 = f(t + C[2] * hs, &y3)?;
            let y4 = y.combine(&[(hs * A4[0], &k1), (hs * A4[1], &k2), (hs * A4[2], &k3)]);
            let k4 = f(t + C[3] * hs, &y4)?;
            let y5 = y.combine(&[
                (hs * A5[0], &k1),
                (hs * A5[1], &k2),
                (hs * A5[2], &k3),
                (hs * A5[3], &k4),
            ]);
            let k5 = f(t + C[4] * hs, &y5)?;
            let y6 = y.combine(&[
                (hs * A6[0], &k1),
                (hs * A6[1], &k2),
                (hs * A6[2], &k3),
                (hs * A6[3], &k4),
                (hs * A6[4], &k5),
            ]);
            let k6 = f(t + C[5] * hs, &y6)?;
            let y_new = y.combine(&[
                (hs * B[0], &k1),
                (hs * B[2], &k3),
                (hs * B[3], &k4),
                (hs * B[4], &k5),
                (hs * B[5], &k6),
            ]);
            let k7 = f(t + hs, &y_new)?;
            let zero = y.combine(&[(-1.0, &y)]);
            let err = zero.combine(&[
                (hs * E[0], &k1),
                (hs * E[2], &k3),
                (hs * E[3], &k4),
                (hs * E[4], &k5),
                (hs * E[5], &k6),
                (hs * E[6], &k7),
            ]);
            let en = S::scaled_rms(&err, &y, &y_new, self.rtol, self.atol);
            if !en.is_finite() {
                return Err(Error::Integration(format!("non-finite error estimate at t = {t}")));
            }
            if en <= 1.0 {
                t = if last { t1 } else { t + hs };
                y = y_new;
                k1 = k7;
                stats.accepted += 1;
                let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
                h *= fac;
            } else {
                stats.rejected += 1;
                h *= (0.9 * en.powf(-0.2)).clamp(0.1, 1.0);
                if h < h_min {
                    return Err(Error::Integration(format!("step size underflow at t = {t}")));
                }
            }
        }
        Ok((y, stats))
    }
}
