//! Stationary states from the null space of a Lindblad generator.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::operator::DensityMatrix;
use crate::superop::Superoperator;

/// Singular values below this fraction of the largest count as null directions.
pub const NULL_THRESHOLD: f64 = 1e-9;

/// Required residual `‖L ρ‖ / ‖L‖`.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Largest block solved densely.
pub const MAX_UNKNOWNS: usize = 4096;

/// Below this many full-space unknowns the whole matrix is used, so null
/// directions outside the charge-neutral block are still detected.
const FULL_SOLVE_LIMIT: usize = 1024;

/// Blocks larger than this are solved by LU with the trace condition
/// replacing one equation instead of by SVD.
pub const SVD_LIMIT: usize = 1024;

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub state: DensityMatrix,
    /// Number of singular values below [`NULL_THRESHOLD`] (relative).
    pub null_dimension: usize,
    /// `‖L ρ‖ / ‖L‖` (Frobenius norms).
    pub residual: f64,
    /// Size of the block that was solved.
    pub unknowns: usize,
}

impl SteadyState {
    pub fn is_ergodic(&self) -> bool {
        self.null_dimension == 1
    }
}

/// Null-space solve by singular-value decomposition.
///
/// The smallest right-singular vector is reshaped into a matrix, Hermitised
/// and normalised. When several singular values fall below the threshold the
/// generator is reported as non-ergodic and the null-space element with the
/// largest trace is returned.
pub fn steady_state(l: &Superoperator) -> Result<SteadyState> {
    let d = l.dim();
    let basis: Vec<(usize, usize)> = if d * d <= FULL_SOLVE_LIMIT {
        (0..d).flat_map(|j| (0..d).map(move |i| (i, j))).collect()
    } else {
        l.zero_charge_sector()
    };
    if basis.len() > MAX_UNKNOWNS {
        return Err(Error::TooLarge(basis.len()));
    }
    let m = l.restricted_matrix(&basis);
    let norm = linalg::frobenius(&m);
    if norm == 0.0 {
        return Err(Error::NonErgodic(basis.len()));
    }
    let (null_vectors, null_dimension) = if basis.len() > SVD_LIMIT {
        (vec![trace_constrained_solve(&m, &basis)?], 1)
    } else {
        null_space(&m)
    };

    // Trace functional restricted to the block; pick the null combination maximising it.
    let trace_weights: Vec<Complex64> = basis
        .iter()
        .map(|&(i, j)| if i == j { c(1.0) } else { c(0.0) })
        .collect();
    let mut v = CVector::zeros(basis.len());
    for nv in &null_vectors {
        let t: Complex64 = nv.iter().zip(&trace_weights).map(|(a, w)| a * w).sum();
        v += nv * t.conj();
    }
    let mut raw = CMatrix::zeros(d, d);
    for (p, &(i, j)) in basis.iter().enumerate() {
        raw[(i, j)] = v[p];
    }
    let state = match DensityMatrix::from_raw(l.space(), &raw) {
        Ok(s) => s,
        Err(_) if null_dimension > 1 => return Err(Error::NonErgodic(null_dimension)),
        Err(e) => return Err(e),
    };
    let applied = l.apply(state.matrix());
    let residual = linalg::frobenius(&applied) / norm;
    if residual > RESIDUAL_TOL {
        return Err(Error::NoNullVector {
            residual,
            tolerance: RESIDUAL_TOL,
        });
    }
    Ok(SteadyState {
        state,
        null_dimension,
        residual,
        unknowns: basis.len(),
    })
}

/// Solves `M x = 0` with one equation replaced by `Tr x = 1`. A singular
/// replaced system means the null space is not one-dimensional.
fn trace_constrained_solve(m: &CMatrix, basis: &[(usize, usize)]) -> Result<CVector> {
    let n = m.nrows();
    let pivot_row = basis
        .iter()
        .position(|&(i, j)| i == j)
        .ok_or(Error::NonErgodic(0))?;
    let mut rhs = CVector::zeros(n);
    rhs[pivot_row] = c(1.0);
    let is_diag: Vec<bool> = basis.iter().map(|&(i, j)| i == j).collect();
    if m.iter().all(|z| z.im == 0.0) {
        let mut r = DMatrix::from_fn(n, n, |i, j| m[(i, j)].re);
        for (col, &d) in is_diag.iter().enumerate() {
            r[(pivot_row, col)] = if d { 1.0 } else { 0.0 };
        }
        let b = nalgebra::DVector::from_fn(n, |i, _| rhs[i].re);
        let x = r.lu().solve(&b).ok_or(Error::NonErgodic(2))?;
        Ok(CVector::from_iterator(n, x.iter().map(|&v| c(v))))
    } else {
        let mut a = m.clone();
        for (col, &d) in is_diag.iter().enumerate() {
            a[(pivot_row, col)] = c(if d { 1.0 } else { 0.0 });
        }
        a.lu().solve(&rhs).ok_or(Error::NonErgodic(2))
    }
}

/// Right-singular vectors spanning the numerical null space (at least one).
fn null_space(m: &CMatrix) -> (Vec<CVector>, usize) {
    let real = m.iter().all(|z| z.im == 0.0);
    // Real blocks (population-only sectors) use the cheaper real SVD.
    let (sv, rows): (Vec<f64>, Vec<CVector>) = if real {
        let r = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re);
        let svd = r.svd(false, true);
        let vt = svd.v_t.expect("requested");
        let rows = (0..vt.nrows())
            .map(|k| CVector::from_iterator(vt.ncols(), vt.row(k).iter().map(|&x| c(x))))
            .collect();
        (svd.singular_values.iter().copied().collect(), rows)
    } else {
        let svd = m.clone().svd(false, true);
        let vt = svd.v_t.expect("requested");
        let rows = (0..vt.nrows())
            .map(|k| CVector::from_iterator(vt.ncols(), vt.row(k).iter().map(|z| z.conj())))
            .collect();
        (svd.singular_values.iter().copied().collect(), rows)
    };
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[a].total_cmp(&sv[b]));
    let null: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&k| sv[k] < NULL_THRESHOLD * smax)
        .collect();
    let dim = null.len();
    let picked = if null.is_empty() { vec![order[0]] } else { null };
    (picked.into_iter().map(|k| rows[k].clone()).collect(), dim)
}
