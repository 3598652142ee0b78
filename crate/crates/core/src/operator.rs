//! Operators and density matrices on a [`HilbertSpace`].

use std::ops::{Add, Mul, Sub};

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::space::{Factor, HilbertSpace};

/// Tolerances of the density-matrix invariants.
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Eigenvalues below this contribute nothing to entropies and are floored in logarithms.
pub const EIGEN_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: HilbertSpace,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { space, matrix })
    }

    pub fn zeros(space: &HilbertSpace) -> Self {
        let d = space.dim();
        Self {
            space: space.clone(),
            matrix: CMatrix::zeros(d, d),
        }
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        let d = space.dim();
        Self {
            space: space.clone(),
            matrix: CMatrix::identity(d, d),
        }
    }

    pub fn from_diagonal(space: &HilbertSpace, diag: &[f64]) -> Result<Self> {
        if diag.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: diag.len(),
            });
        }
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| c(x)));
        Ok(Self {
            space: space.clone(),
            matrix: CMatrix::from_diagonal(&v),
        })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space.clone(),
            matrix: linalg::adjoint(&self.matrix),
        }
    }

    pub fn dot(&self, other: &Operator) -> Self {
        debug_assert_eq!(self.space, other.space);
        Self {
            space: self.space.clone(),
            matrix: linalg::mul(&self.matrix, &other.matrix),
        }
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        &self.dot(other) - &other.dot(self)
    }

    pub fn anticommutator(&self, other: &Operator) -> Self {
        &self.dot(other) + &other.dot(self)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            space: self.space.clone(),
            matrix: &self.matrix * c(s),
        }
    }

    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.matrix)
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::hermiticity_error(&self.matrix)
    }

    pub fn norm(&self) -> f64 {
        linalg::frobenius(&self.matrix)
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        debug_assert_eq!(self.space, rhs.space);
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        debug_assert_eq!(self.space, rhs.space);
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self.scale(rhs)
    }
}

/// Embeds a single-factor matrix into the full space, identities elsewhere.
pub fn embed(space: &HilbertSpace, factor_index: usize, local: &CMatrix) -> Result<Operator> {
    space.check_factor(factor_index)?;
    let expected = space.factors()[factor_index].dim();
    if local.nrows() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: local.nrows(),
        });
    }
    let mut out = CMatrix::identity(1, 1);
    for (k, f) in space.factors().iter().enumerate() {
        let piece = if k == factor_index {
            local.clone()
        } else {
            CMatrix::identity(f.dim(), f.dim())
        };
        out = out.kronecker(&piece);
    }
    Operator::new(space.clone(), out)
}

/// Lowering operator of factor `factor_index`: σ⁻ for a two-level system,
/// the truncated annihilation matrix (√k at `(k-1, k)`) for an oscillator.
pub fn ladder(space: &HilbertSpace, factor_index: usize) -> Result<Operator> {
    space.check_factor(factor_index)?;
    let d = space.factors()[factor_index].dim();
    let mut local = CMatrix::zeros(d, d);
    for k in 1..d {
        let amp = match space.factors()[factor_index] {
            Factor::Tls => 1.0,
            Factor::Oscillator(_) => (k as f64).sqrt(),
        };
        local[(k - 1, k)] = c(amp);
    }
    embed(space, factor_index, &local)
}

/// Number operator `a†a` of one factor.
pub fn number(space: &HilbertSpace, factor_index: usize) -> Result<Operator> {
    let levels = space.levels(factor_index)?;
    let diag: Vec<f64> = levels.iter().map(|&l| l as f64).collect();
    Operator::from_diagonal(space, &diag)
}

/// A validated state: Hermitian, unit trace and positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        let herm = op.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("Hermiticity error {herm:.3e}")));
        }
        let tr = op.trace();
        if (tr - c(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let rho = Self(op);
        let min = rho.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("eigenvalue {min:.3e}")));
        }
        Ok(rho)
    }

    /// Hermitises and renormalises before validating; for numerically produced states.
    pub fn from_raw(space: &HilbertSpace, raw: &CMatrix) -> Result<Self> {
        let h = linalg::hermitize(raw);
        let tr = linalg::trace(&h).re;
        if !(tr.abs() > f64::MIN_POSITIVE) {
            return Err(Error::InvalidState("zero trace".into()));
        }
        Self::new(Operator::new(space.clone(), h * c(1.0 / tr))?)
    }

    pub fn maximally_mixed(space: &HilbertSpace) -> Self {
        let d = space.dim() as f64;
        Self(Operator::identity(space).scale(1.0 / d))
    }

    pub fn basis_state(space: &HilbertSpace, index: usize) -> Result<Self> {
        if index >= space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: index,
            });
        }
        let mut m = CMatrix::zeros(space.dim(), space.dim());
        m[(index, index)] = c(1.0);
        Self::new(Operator::new(space.clone(), m)?)
    }

    /// Random full-rank state `G G† / Tr(G G†)` with a complex Gaussian `G`.
    pub fn random<R: Rng + ?Sized>(space: &HilbertSpace, rng: &mut R) -> Self {
        let d = space.dim();
        let g = CMatrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let m = &g * g.adjoint();
        Self::from_raw(space, &m).expect("Wishart matrices are valid states")
    }

    pub fn operator(&self) -> &Operator {
        &self.0
    }

    pub fn matrix(&self) -> &CMatrix {
        self.0.matrix()
    }

    pub fn space(&self) -> &HilbertSpace {
        self.0.space()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let (vals, _) = linalg::hermitian_eigen(self.matrix());
        vals.iter().copied().collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `Re Tr(ρ O)`.
    pub fn expectation(&self, op: &Operator) -> f64 {
        let m = self.matrix();
        let o = op.matrix();
        let mut acc = c(0.0);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                acc += m[(i, j)] * o[(j, i)];
            }
        }
        acc.re
    }

    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = self.matrix() - other.matrix();
        let (vals, _) = linalg::hermitian_eigen(&diff);
        0.5 * vals.iter().map(|v| v.abs()).sum::<f64>()
    }

    /// `ln ρ` with eigenvalues floored at [`EIGEN_FLOOR`]; the flag reports whether the floor bit.
    pub fn log(&self) -> (CMatrix, bool) {
        let (vals, _) = linalg::hermitian_eigen(self.matrix());
        let floored = vals.iter().any(|&v| v < EIGEN_FLOOR);
        (
            linalg::hermitian_function(self.matrix(), |v| v.max(EIGEN_FLOOR).ln()),
            floored,
        )
    }

    /// Population of the highest level of factor `factor_index`.
    pub fn top_level_population(&self, factor_index: usize) -> Result<f64> {
        let levels = self.space().levels(factor_index)?;
        let top = self.space().factors()[factor_index].dim() - 1;
        Ok(levels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == top)
            .map(|(i, _)| self.matrix()[(i, i)].re)
            .sum())
    }
}

/// `S = -Tr ρ ln ρ` (k_B = 1).
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .filter(|&p| p > EIGEN_FLOOR)
        .map(|p| -p * p.ln())
        .sum::<f64>()
        .max(0.0)
}
