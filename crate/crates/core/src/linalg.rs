//! Dense complex matrix helpers shared by the operator and solver modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Largest entry of `m - m†`.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for_tile_pairs(m.nrows(), |i, j| {
        worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
    });
    worst
}

const TILE: usize = 32;

/// Visits every `(i, j)` with `i ≤ j` in cache-sized tiles, so that both
/// `m[(i, j)]` and `m[(j, i)]` stay resident.
fn for_tile_pairs(n: usize, mut f: impl FnMut(usize, usize)) {
    for jb in (0..n).step_by(TILE) {
        for ib in (0..=jb).step_by(TILE) {
            for j in jb..(jb + TILE).min(n) {
                for i in ib..(ib + TILE).min(j + 1) {
                    f(i, j);
                }
            }
        }
    }
}

/// Conjugate transpose, tiled.
pub fn adjoint(m: &CMatrix) -> CMatrix {
    let (r, cn) = m.shape();
    if r != cn {
        return m.adjoint();
    }
    let mut out = CMatrix::zeros(r, r);
    for_tile_pairs(r, |i, j| {
        out[(i, j)] = m[(j, i)].conj();
        out[(j, i)] = m[(i, j)].conj();
    });
    out
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(m.nrows(), m.ncols());
    for_tile_pairs(m.nrows(), |i, j| {
        let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        out[(i, j)] = v;
        out[(j, i)] = v.conj();
    });
    out
}

/// Eigen-decomposition of a Hermitian matrix: real eigenvalues and unitary eigenvectors.
///
/// Diagonal input (common for stationary states of phase-covariant
/// generators) skips the dense decomposition.
fn is_diagonal(m: &CMatrix) -> bool {
    let n = m.nrows();
    (0..n).all(|j| (0..n).all(|i| i == j || m[(i, j)] == c(0.0)))
}

pub fn hermitian_eigen(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let n = m.nrows();
    if is_diagonal(m) {
        return (
            DVector::from_iterator(n, (0..n).map(|i| m[(i, i)].re)),
            CMatrix::identity(n, n),
        );
    }
    let eig = hermitize(m).symmetric_eigen();
    (eig.eigenvalues, eig.eigenvectors)
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    if is_diagonal(m) {
        let n = m.nrows();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            out[(i, i)] = c(f(m[(i, i)].re));
        }
        return out;
    }
    let (vals, vecs) = hermitian_eigen(m);
    let mut scaled = vecs.clone();
    for (k, v) in vals.iter().enumerate() {
        let fv = c(f(*v));
        for z in scaled.column_mut(k).iter_mut() {
            *z *= fv;
        }
    }
    &scaled * vecs.adjoint()
}

/// `exp(-i H t)` for Hermitian `H`.
pub fn unitary_propagator(h: &CMatrix, t: f64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(h);
    let mut scaled = vecs.clone();
    for (k, v) in vals.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -v * t);
        for z in scaled.column_mut(k).iter_mut() {
            *z *= phase;
        }
    }
    &scaled * vecs.adjoint()
}

/// Column-stacking vectorisation: entry `(i, j)` lands at `i + j·n`.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_column_slice(n, n, v.as_slice())
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Square matrix stored by columns as `(row, value)` lists of nonzero entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    cols: Vec<Vec<(usize, Complex64)>>,
}

impl SparseMatrix {
    pub fn from_dense(m: &CMatrix) -> Self {
        let n = m.nrows();
        let cols = (0..n)
            .map(|j| {
                (0..n)
                    .filter_map(|i| {
                        let v = m[(i, j)];
                        (v != c(0.0)).then_some((i, v))
                    })
                    .collect()
            })
            .collect();
        Self { n, cols }
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, cols: vec![Vec::new(); n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn scaled(mut self, alpha: Complex64) -> Self {
        for col in &mut self.cols {
            for (_, v) in col.iter_mut() {
                *v *= alpha;
            }
        }
        self
    }

    /// `self + alpha · other`, dropping exact zeros.
    pub fn add_scaled(&self, other: &SparseMatrix, alpha: Complex64) -> Self {
        let mut acc = vec![c(0.0); self.n];
        let mut touched = Vec::new();
        let cols = (0..self.n)
            .map(|j| {
                for &(i, v) in &self.cols[j] {
                    if acc[i] == c(0.0) {
                        touched.push(i);
                    }
                    acc[i] += v;
                }
                for &(i, v) in &other.cols[j] {
                    if acc[i] == c(0.0) {
                        touched.push(i);
                    }
                    acc[i] += alpha * v;
                }
                Self::drain(&mut acc, &mut touched)
            })
            .collect();
        Self { n: self.n, cols }
    }

    /// Sparse product `self · other`.
    pub fn mul_sparse(&self, other: &SparseMatrix) -> Self {
        let mut acc = vec![c(0.0); self.n];
        let mut touched = Vec::new();
        let cols = other
            .cols
            .iter()
            .map(|col| {
                for &(k, b) in col {
                    for &(i, a) in &self.cols[k] {
                        if acc[i] == c(0.0) {
                            touched.push(i);
                        }
                        acc[i] += a * b;
                    }
                }
                Self::drain(&mut acc, &mut touched)
            })
            .collect();
        Self { n: self.n, cols }
    }

    fn drain(acc: &mut [Complex64], touched: &mut Vec<usize>) -> Vec<(usize, Complex64)> {
        touched.sort_unstable();
        touched.dedup();
        let out = touched
            .iter()
            .filter_map(|&i| {
                let v = std::mem::replace(&mut acc[i], c(0.0));
                (v != c(0.0)).then_some((i, v))
            })
            .collect();
        touched.clear();
        out
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// Nonzero entries `(row, value)` of column `j`.
    pub fn column(&self, j: usize) -> &[(usize, Complex64)] {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.cols[j]
            .iter()
            .find(|(r, _)| *r == i)
            .map_or(c(0.0), |(_, v)| *v)
    }

    pub fn adjoint(&self) -> Self {
        let mut cols = vec![Vec::new(); self.n];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                cols[i].push((j, v.conj()));
            }
        }
        Self { n: self.n, cols }
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.n, self.n);
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                out[(i, j)] += v;
            }
        }
        out
    }

    /// `self · x`.
    pub fn mul_dense(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.n, x.ncols());
        for j in 0..x.ncols() {
            let src = x.column(j);
            let mut dst = out.column_mut(j);
            for (k, col) in self.cols.iter().enumerate() {
                let xk = src[k];
                if xk == c(0.0) {
                    continue;
                }
                for &(i, v) in col {
                    dst[i] += v * xk;
                }
            }
        }
        out
    }

    /// `x · self`.
    pub fn dense_mul(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(x.nrows(), self.n);
        for (j, col) in self.cols.iter().enumerate() {
            let mut target = out.column_mut(j);
            for &(i, v) in col {
                target.axpy(v, &x.column(i), c(1.0));
            }
        }
        out
    }
}

/// `a · b`, exploiting sparsity of `b` when it is mostly zero.
pub fn mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let sb = SparseMatrix::from_dense(b);
    if 4 * sb.nnz() < b.len() {
        sb.dense_mul(a)
    } else {
        a * b
    }
}
