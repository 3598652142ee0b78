//! Tensor-product Hilbert spaces built from two-level systems and truncated
//! oscillators.
//!
//! Basis states are ordered with the first factor most significant, matching
//! `A ⊗ B` Kronecker products.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One tensor factor of a [`HilbertSpace`].
///
/// A two-level system realises anticommuting ladder operators (a a† + a† a = 1),
/// a truncated oscillator realises bosonic ones on its first `N - 1` levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Factor {
    Tls,
    Oscillator(usize),
}

impl Factor {
    pub fn dim(&self) -> usize {
        match *self {
            Factor::Tls => 2,
            Factor::Oscillator(n) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    factors: Vec<Factor>,
    dim: usize,
}

impl HilbertSpace {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpace("no factors".into()));
        }
        for f in &factors {
            if let Factor::Oscillator(n) = f {
                if *n < 2 {
                    return Err(Error::InvalidSpace(format!(
                        "oscillator truncation {n} < 2"
                    )));
                }
            }
        }
        let dim = factors.iter().map(Factor::dim).product();
        Ok(Self { factors, dim })
    }

    pub fn tls() -> Self {
        Self::new(vec![Factor::Tls]).expect("valid")
    }

    pub fn oscillator(levels: usize) -> Result<Self> {
        Self::new(vec![Factor::Oscillator(levels)])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Stride of factor `index` in the flattened basis.
    pub(crate) fn stride(&self, index: usize) -> usize {
        self.factors[index + 1..].iter().map(Factor::dim).product()
    }

    pub(crate) fn check_factor(&self, index: usize) -> Result<()> {
        if index >= self.factors.len() {
            Err(Error::InvalidFactor {
                index,
                factors: self.factors.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Level of factor `index` in every basis state.
    pub fn levels(&self, index: usize) -> Result<Vec<usize>> {
        self.check_factor(index)?;
        let stride = self.stride(index);
        let d = self.factors[index].dim();
        Ok((0..self.dim).map(|i| (i / stride) % d).collect())
    }

    /// Same factor layout with every oscillator truncation replaced by `levels`.
    pub fn with_oscillator_levels(&self, levels: usize) -> Result<Self> {
        Self::new(
            self.factors
                .iter()
                .map(|f| match f {
                    Factor::Oscillator(_) => Factor::Oscillator(levels),
                    Factor::Tls => Factor::Tls,
                })
                .collect(),
        )
    }

    pub fn has_oscillator(&self) -> bool {
        self.factors
            .iter()
            .any(|f| matches!(f, Factor::Oscillator(_)))
    }
}
