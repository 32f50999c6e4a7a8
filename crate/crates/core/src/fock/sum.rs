use serde::{Deserialize, Serialize};

use super::basis::{parity_of, FockOperator, FockSpace, FockVector, Parity};
use crate::linalg::{c64, hs_norm, max_abs_diff, CMat, CVec};
use crate::{Error, Result};

/// `F(L₁) ⊗ F(L₂) → F(L₁ ⊕ L₂)`, `w₁ ⊗ w₂ ↦ w₁ ∧ w₂`. The frame of `sum` must
/// be the concatenation of the two frames, which must sit in orthogonal
/// blocks (`L₁ ⊕ ΣL₁ ⟂ L₂ ⊕ ΣL₂`). The tensor index is `i₁·dim₂ + i₂`.
pub fn fock_sum_iso(s1: &FockSpace, s2: &FockSpace, sum: &FockSpace) -> Result<SumIsomorphism> {
    let b1 = block(s1);
    let b2 = block(s2);
    if b1.nrows() != b2.nrows() || hs_norm(&(b1.adjoint() * &b2)) > 1e-10 {
        return Err(Error::NonOrthogonalBlocks);
    }
    let (m1, m2) = (s1.frame.dim(), s2.frame.dim());
    if sum.frame.dim() != m1 + m2
        || max_abs_diff(&sum.frame.cols.columns(0, m1).into_owned(), &s1.frame.cols) > 1e-12
        || max_abs_diff(&sum.frame.cols.columns(m1, m2).into_owned(), &s2.frame.cols) > 1e-12
    {
        return Err(Error::Shape("sum frame is not the concatenation of the summands".into()));
    }
    let (d1, d2) = (s1.dim(), s2.dim());
    let mut m = CMat::zeros(sum.dim(), d1 * d2);
    for i1 in 0..d1 {
        for i2 in 0..d2 {
            // every index of the first factor precedes every shifted index of
            // the second, so the wedge is already in order
            let mask = s1.basis.subset(i1) | s2.basis.subset(i2) << m1;
            if let Some(r) = sum.basis.index_of(mask) {
                m[(r, i1 * d2 + i2)] = c64(1.0, 0.0);
            }
        }
    }
    Ok(SumIsomorphism { left_dim: d1, right_dim: d2, codomain: sum.basis.clone(), matrix: m })
}

/// Matrix of [`fock_sum_iso`] from the tensor product (index `i₁·dim₂ + i₂`)
/// into the exterior algebra of the sum.
#[derive(Clone, Debug)]
pub struct SumIsomorphism {
    pub left_dim: usize,
    pub right_dim: usize,
    pub codomain: std::sync::Arc<super::FockBasis>,
    pub matrix: CMat,
}

fn block(s: &FockSpace) -> CMat {
    let cols = &s.frame.cols;
    let bar = s.frame.conj_cols();
    let mut b = CMat::zeros(cols.nrows(), 2 * cols.ncols());
    b.columns_mut(0, cols.ncols()).copy_from(cols);
    b.columns_mut(cols.ncols(), cols.ncols()).copy_from(&bar);
    b
}

/// Graded tensor action `π₁(v₁) ⊗ 1 + Γ₁ ⊗ π₂(v₂)` where `Γ₁ = (−1)^{deg}` on
/// the first factor. `v` is an ambient vector; each factor only sees its own
/// block.
pub fn graded_tensor_rep(s1: &FockSpace, s2: &FockSpace, v: &CVec) -> CMat {
    let p1 = s1.clifford_matrix(v);
    let p2 = s2.clifford_matrix(v);
    let d1 = s1.dim();
    let gamma = CMat::from_fn(d1, d1, |r, c| {
        if r == c {
            c64(if s1.basis.degree(r) % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    p1.kronecker(&CMat::identity(s2.dim(), s2.dim())) + gamma.kronecker(&p2)
}

pub fn parity(w: &FockVector) -> Parity {
    w.parity()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GradingBehaviour {
    Preserving,
    Reversing,
    Mixed,
}

/// Whether `t` maps every basis vector to one of the same parity, of the
/// opposite parity, or neither.
pub fn intertwiner_parity(t: &FockOperator, tol: f64) -> GradingBehaviour {
    let (mut keep, mut flip) = (true, true);
    for c in 0..t.domain.dim() {
        let col = t.matrix.column(c).into_owned();
        let p = parity_of(&t.codomain, &col, tol);
        let src_even = t.domain.degree(c) % 2 == 0;
        match p {
            Parity::Even => {
                keep &= src_even;
                flip &= !src_even;
            }
            Parity::Odd => {
                keep &= !src_even;
                flip &= src_even;
            }
            Parity::Mixed => {
                keep = false;
                flip = false;
            }
            Parity::Zero => {}
        }
    }
    match (keep, flip) {
        (true, _) => GradingBehaviour::Preserving,
        (false, true) => GradingBehaviour::Reversing,
        _ => GradingBehaviour::Mixed,
    }
}
