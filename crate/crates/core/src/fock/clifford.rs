use num_complex::Complex64;

use super::basis::{FockOperator, FockSpace};
use crate::linalg::{CMat, CVec};
use crate::modes::{ModeBasis, TruncatedOperator};
use crate::{Error, Result};

/// Monomial `z · v₁ v₂ ⋯ v_k` in the Clifford algebra of the real space `V`.
#[derive(Clone, Debug)]
pub struct CliffordWord {
    pub coeff: Complex64,
    pub vectors: Vec<CVec>,
}

impl CliffordWord {
    /// Fails unless every vector is Σ-fixed.
    pub fn new(basis: &ModeBasis, coeff: Complex64, vectors: Vec<CVec>) -> Result<Self> {
        for v in &vectors {
            let d = (basis.sigma(v) - v).norm();
            if d > 1e-10 {
                return Err(Error::Shape(format!("Clifford generator is not real (defect {d:.3e})")));
            }
        }
        Ok(Self { coeff, vectors })
    }

    pub fn scalar(coeff: Complex64) -> Self {
        Self { coeff, vectors: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.vectors.len()
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut vectors = self.vectors.clone();
        vectors.extend(other.vectors.iter().cloned());
        Self { coeff: self.coeff * other.coeff, vectors }
    }

    /// `(z v₁⋯v_k)* = z̄ v_k⋯v₁`.
    pub fn adjoint(&self) -> Self {
        Self { coeff: self.coeff.conj(), vectors: self.vectors.iter().rev().cloned().collect() }
    }

    pub fn represent(&self, space: &FockSpace) -> FockOperator {
        let d = space.dim();
        let mut m = CMat::identity(d, d) * self.coeff;
        for v in &self.vectors {
            m *= space.clifford_matrix(v);
        }
        space.operator(m)
    }
}

/// `θ_g`, replacing every generator `v` by `g v`.
pub fn bogoliubov(word: &CliffordWord, g: &TruncatedOperator) -> Result<CliffordWord> {
    g.require_orthogonal()?;
    Ok(CliffordWord {
        coeff: word.coeff,
        vectors: word.vectors.iter().map(|v| &g.matrix * v).collect(),
    })
}
