//! Lindblad generators `L ρ = -i[H, ρ] + Σ γ (A ρ A† - ½{A†A, ρ})` (ħ = 1).
//!
//! A [`Superoperator`] keeps the Hamiltonian and the jump channels rather than
//! the `d² × d²` matrix. The dense column-stacked matrix is materialised on
//! demand, either in full or restricted to the block of a conserved charge
//! (see [`Superoperator::zero_charge_sector`]), which is what keeps two-mode
//! oscillator problems tractable.

use std::ops::Add;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, SparseMatrix, I};
use crate::operator::Operator;
use crate::space::HilbertSpace;

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub jump: Operator,
    pub rate: f64,
    sparse: SparseMatrix,
    sparse_adjoint: SparseMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    space: HilbertSpace,
    hamiltonian: Operator,
    channels: Vec<Channel>,
    /// `G = -iH - ½ Σ γ A†A`, so that `L X = G X + X G† + Σ γ A X A†`.
    g: SparseMatrix,
    g_adjoint: SparseMatrix,
}

/// Generator with Hamiltonian `h` and one Lindblad channel per `(A, γ)`.
pub fn liouvillian_matrix(h: &Operator, dissipator_terms: &[(Operator, f64)]) -> Result<Superoperator> {
    let mut l = Superoperator::hamiltonian(h.clone());
    for (jump, rate) in dissipator_terms {
        l.push_channel(jump.clone(), *rate)?;
    }
    Ok(l)
}

impl Superoperator {
    pub fn zero(space: &HilbertSpace) -> Self {
        Self::hamiltonian(Operator::zeros(space))
    }

    pub fn hamiltonian(h: Operator) -> Self {
        let mut out = Self {
            space: h.space().clone(),
            g: SparseMatrix::zeros(h.dim()),
            g_adjoint: SparseMatrix::zeros(h.dim()),
            hamiltonian: h,
            channels: Vec::new(),
        };
        out.refresh();
        out
    }

    fn refresh(&mut self) {
        let mut g = SparseMatrix::from_dense(self.hamiltonian.matrix()).scaled(-I);
        for ch in &self.channels {
            let ada = ch.sparse_adjoint.mul_sparse(&ch.sparse);
            g = g.add_scaled(&ada, c(-0.5 * ch.rate));
        }
        self.g = g;
        self.g_adjoint = self.g.adjoint();
    }

    pub fn dissipator(jump: Operator, rate: f64) -> Result<Self> {
        let mut l = Self::zero(jump.space());
        l.push_channel(jump, rate)?;
        Ok(l)
    }

    pub fn push_channel(&mut self, jump: Operator, rate: f64) -> Result<()> {
        if jump.space() != &self.space {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                found: jump.dim(),
            });
        }
        if rate < 0.0 || !rate.is_finite() {
            return Err(Error::NegativeRate(rate));
        }
        if rate > 0.0 {
            let sparse = SparseMatrix::from_dense(jump.matrix());
            let sparse_adjoint = sparse.adjoint();
            self.channels.push(Channel {
                jump,
                rate,
                sparse,
                sparse_adjoint,
            });
            self.refresh();
        }
        Ok(())
    }

    /// Sum of two generators on the same space.
    pub fn try_add(&self, other: &Superoperator) -> Result<Superoperator> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                found: other.space.dim(),
            });
        }
        let mut out = self.clone();
        out.hamiltonian = &out.hamiltonian + &other.hamiltonian;
        out.channels.extend(other.channels.iter().cloned());
        out.refresh();
        Ok(out)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn hamiltonian_part(&self) -> &Operator {
        &self.hamiltonian
    }

    /// Applies the generator to a matrix (no validation of the input).
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = self.g.mul_dense(rho) + self.g_adjoint.dense_mul(rho);
        for ch in &self.channels {
            out += ch.sparse_adjoint.dense_mul(&ch.sparse.mul_dense(rho)) * c(ch.rate);
        }
        out
    }

    /// Heisenberg-picture adjoint `L†(X) = i[H, X] + Σ γ (A† X A - ½{A†A, X})`.
    pub fn adjoint_apply(&self, x: &CMatrix) -> CMatrix {
        let mut out = self.g_adjoint.mul_dense(x) + self.g.dense_mul(x);
        for ch in &self.channels {
            out += ch.sparse.dense_mul(&ch.sparse_adjoint.mul_dense(x)) * c(ch.rate);
        }
        out
    }

    /// `‖L†(1)‖`: zero exactly when the identity is a left null vector.
    pub fn trace_defect(&self) -> f64 {
        let id = CMatrix::identity(self.dim(), self.dim());
        linalg::frobenius(&self.adjoint_apply(&id))
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        self.trace_defect() <= tol
    }

    /// Dense column-stacked matrix of shape `d² × d²`.
    pub fn matrix(&self) -> CMatrix {
        let d = self.dim();
        let basis: Vec<(usize, usize)> =
            (0..d).flat_map(|j| (0..d).map(move |i| (i, j))).collect();
        self.restricted_matrix(&basis)
    }

    /// Matrix of the generator on the span of `|i⟩⟨j|` for the listed pairs.
    ///
    /// Exact only when that span is invariant, as for [`Self::zero_charge_sector`].
    pub fn restricted_matrix(&self, basis: &[(usize, usize)]) -> CMatrix {
        let d = self.dim();
        let n = basis.len();
        let mut position = vec![usize::MAX; d * d];
        for (p, &(i, j)) in basis.iter().enumerate() {
            position[i + j * d] = p;
        }
        let mut m = CMatrix::zeros(n, n);
        let mut add = |k: usize, l: usize, col: usize, v: Complex64| {
            let row = position[k + l * d];
            if row != usize::MAX {
                m[(row, col)] += v;
            }
        };
        // ⟨k| L(|i⟩⟨j|) |l⟩ = G_ki δ_jl + δ_ik conj(G_lj) + Σ γ A_ki conj(A_lj)
        for (col, &(i, j)) in basis.iter().enumerate() {
            for &(k, v) in self.g.column(i) {
                add(k, j, col, v);
            }
            for &(l, v) in self.g.column(j) {
                add(i, l, col, v.conj());
            }
            for ch in &self.channels {
                for &(k, aki) in ch.sparse.column(i) {
                    for &(l, alj) in ch.sparse.column(j) {
                        add(k, l, col, aki * alj.conj() * c(ch.rate));
                    }
                }
            }
        }
        m
    }

    /// Per-factor level counts that every term of the generator conserves.
    ///
    /// A factor's number operator `Q` qualifies when `[H, Q] = 0` and each
    /// jump satisfies `[Q, A] = q_A A`; then `L` commutes with `[Q, ·]`.
    pub fn conserved_charges(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for f in 0..self.space.factors().len() {
            let q = self.space.levels(f).expect("factor in range");
            if respects(self.hamiltonian.matrix(), &q, true)
                && self
                    .channels
                    .iter()
                    .all(|ch| respects(ch.jump.matrix(), &q, false))
            {
                out.push(q);
            }
        }
        out
    }

    /// Pairs `(i, j)` whose basis states carry equal values of every conserved
    /// charge, in column-stacking order. A unique stationary state lives here.
    pub fn zero_charge_sector(&self) -> Vec<(usize, usize)> {
        let charges = self.conserved_charges();
        let d = self.dim();
        (0..d)
            .flat_map(|j| (0..d).map(move |i| (i, j)))
            .filter(|&(i, j)| charges.iter().all(|q| q[i] == q[j]))
            .collect()
    }
}

/// Whether `m` shifts the charge `q` by a single fixed amount (zero when `neutral`).
fn respects(m: &CMatrix, q: &[usize], neutral: bool) -> bool {
    let scale = m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    if scale == 0.0 {
        return true;
    }
    let mut shift: Option<i64> = if neutral { Some(0) } else { None };
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if m[(i, j)].norm() > 1e-14 * scale {
                let s = q[i] as i64 - q[j] as i64;
                match shift {
                    None => shift = Some(s),
                    Some(prev) if prev != s => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

impl Add for &Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: &Superoperator) -> Superoperator {
        self.try_add(rhs).expect("generators on the same space")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unvectorize, vectorize};
    use crate::operator::{ladder, number, DensityMatrix};
    use crate::space::Factor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn decay_qubit() -> Superoperator {
        let s = HilbertSpace::tls();
        Superoperator::dissipator(ladder(&s, 0).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn pure_decay_of_excited_state() {
        let l = decay_qubit();
        let rho = DensityMatrix::basis_state(l.space(), 1).unwrap();
        let d = l.apply(rho.matrix());
        assert!((d[(1, 1)] - c(-1.0)).norm() < 1e-15);
        assert!((d[(0, 0)] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn dense_matrix_matches_matrix_free_apply() {
        let s = HilbertSpace::new(vec![Factor::Tls, Factor::Oscillator(3)]).unwrap();
        let a = ladder(&s, 0).unwrap();
        let b = ladder(&s, 1).unwrap();
        let h = &number(&s, 0).unwrap() * 2.0;
        let coupling = a.dot(&b.adjoint());
        let l = liouvillian_matrix(&h, &[(a.clone(), 0.7), (coupling, 0.3), (b.adjoint(), 0.2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho = DensityMatrix::random(&s, &mut rng);
        let via_matrix = unvectorize(&(l.matrix() * vectorize(rho.matrix())), s.dim());
        assert!((via_matrix - l.apply(rho.matrix())).norm() < 1e-13);
    }

    #[test]
    fn identity_is_left_null_vector() {
        let l = decay_qubit();
        let m = l.matrix();
        let id = vectorize(&CMatrix::identity(2, 2));
        let left = id.adjoint() * m;
        assert!(left.norm() < 1e-14);
        assert!(l.is_trace_preserving(1e-14));
    }

    #[test]
    fn rejects_negative_rate_and_foreign_space() {
        let s = HilbertSpace::tls();
        let a = ladder(&s, 0).unwrap();
        assert!(matches!(
            Superoperator::dissipator(a.clone(), -1.0),
            Err(Error::NegativeRate(_))
        ));
        let other = HilbertSpace::oscillator(3).unwrap();
        let h = Operator::zeros(&other);
        assert!(liouvillian_matrix(&h, &[(a, 1.0)]).is_err());
    }

    #[test]
    fn charges_detected_for_phase_covariant_generators() {
        let s = HilbertSpace::new(vec![Factor::Oscillator(3), Factor::Oscillator(3)]).unwrap();
        let a = ladder(&s, 0).unwrap();
        let b = ladder(&s, 1).unwrap();
        let l = liouvillian_matrix(&number(&s, 0).unwrap(), &[(a.dot(&b.adjoint()), 1.0)]).unwrap();
        assert_eq!(l.conserved_charges().len(), 2);
        assert_eq!(l.zero_charge_sector().len(), 9);

        // a + b breaks both single-mode charges.
        let mixed = liouvillian_matrix(&Operator::zeros(&s), &[(&a + &b, 1.0)]).unwrap();
        assert!(mixed.conserved_charges().is_empty());
    }
}
