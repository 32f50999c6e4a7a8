use super::basis::{FockBasis, FockOperator, FockSpace};
use crate::linalg::{minor, unitarity_defect, CMat};
use crate::modes::TruncatedOperator;
use crate::{Error, Result};

/// Exterior power of `ov`: the entry at `(J, I)` is the minor `det ov[J, I]`.
/// Maps `l_I ↦ (ov l)_I` expressed in the target basis.
pub fn compound(ov: &CMat, src: &FockBasis, dst: &FockBasis) -> CMat {
    let mut m = CMat::zeros(dst.dim(), src.dim());
    for c in 0..src.dim() {
        let cols = src.members(c);
        for r in 0..dst.dim() {
            if dst.degree(r) != cols.len() {
                continue;
            }
            m[(r, c)] = minor(ov, &dst.members(r), &cols);
        }
    }
    m
}

/// `Λ_g : F(L) → F(K)` for `K = gL`, written in `K`'s own frame, so that
/// `l_{i₁} ∧ … ↦ (g l_{i₁}) ∧ …`.
pub fn lambda_g(g: &TruncatedOperator, src: &FockSpace, dst: &FockSpace) -> Result<FockOperator> {
    g.require_orthogonal()?;
    let ov = dst.frame.cols.adjoint() * &g.matrix * &src.frame.cols;
    let d = unitarity_defect(&ov);
    if d > 1e-9 {
        // the target frame does not span gL
        return Err(Error::NonOrthogonal(d));
    }
    Ok(FockOperator::new(
        src.basis.clone(),
        dst.basis.clone(),
        compound(&ov, &src.basis, &dst.basis),
    ))
}

impl FockSpace {
    /// `F(gL)` with frame `g·l_i`, sharing the cap.
    pub fn image(&self, g: &TruncatedOperator) -> Result<FockSpace> {
        let frame = self.frame.image(g)?;
        Ok(FockSpace { frame, basis: self.basis.clone() })
    }
}
