use super::{LagrangianFrame, TruncatedOperator};
use crate::linalg::{c64, hs_norm, identity, inv_sqrt_pd, max_abs_diff, op_norm, CMat};
use crate::{Error, Result};

/// Largest admissible condition number of `C_g` before `Z_g` is refused.
pub const ZG_COND_BOUND: f64 = 1e8;

/// `C_g = ½(g − JgJ)` commutes with `J`, `A_g = ½(g + JgJ)` anticommutes.
pub fn decompose_ca(g: &CMat, j: &CMat) -> (CMat, CMat) {
    let jgj = j * g * j;
    let half = c64(0.5, 0.0);
    ((g - &jgj) * half, (g + &jgj) * half)
}

fn require_complete(frame: &LagrangianFrame) -> Result<()> {
    if !frame.is_complete() {
        return Err(Error::NotLagrangian(0.0));
    }
    Ok(())
}

/// `Z_g = −A_g C_g⁻¹`.
pub fn zg(g: &TruncatedOperator, frame: &LagrangianFrame) -> Result<TruncatedOperator> {
    g.require_orthogonal()?;
    require_complete(frame)?;
    let (c, a) = decompose_ca(&g.matrix, &frame.j);
    // ‖C_g‖ ≤ 1 for orthogonal g, so the condition number is at least 1/σ_min
    let smin = crate::linalg::min_singular_value(&c);
    if smin * ZG_COND_BOUND < 1.0 {
        return Err(Error::SingularC(smin));
    }
    let cinv = c.try_inverse().ok_or(Error::SingularC(smin))?;
    Ok(TruncatedOperator::new(g.basis, -(a * cinv)))
}

/// How far `z` is from `Sym(Σ(L))`: skew-adjoint, real, anticommuting with `J`.
pub fn sym_defect(z: &CMat, frame: &LagrangianFrame) -> f64 {
    let skew = hs_norm(&(z + z.adjoint()));
    let real = frame.basis.reality_defect(z);
    let anti = hs_norm(&(&frame.j * z + z * &frame.j));
    skew.max(real).max(anti)
}

/// `w = (1 − z)(1 + z*z)^{−1/2}`, a right inverse of [`zg`].
pub fn retract(z: &CMat, frame: &LagrangianFrame) -> Result<TruncatedOperator> {
    require_complete(frame)?;
    let d = sym_defect(z, frame);
    if d > 1e-9 {
        return Err(Error::NotSym(d));
    }
    let n = z.nrows();
    let s = inv_sqrt_pd(&(identity(n) + z.adjoint() * z));
    Ok(TruncatedOperator::new(frame.basis, (identity(n) - z) * s))
}

/// Unitary part of the polar decomposition of `X = 1 − KJ`; conjugates `J`
/// to `K` and is the identity when they agree.
pub fn canonical_conjugator(
    j: &TruncatedOperator,
    k: &TruncatedOperator,
) -> Result<TruncatedOperator> {
    let dist = op_norm(&(&k.matrix - &j.matrix));
    if dist >= 2.0 - 1e-9 {
        return Err(Error::TooFar(dist));
    }
    let n = j.matrix.nrows();
    let x = identity(n) - &k.matrix * &j.matrix;
    let g = &x * inv_sqrt_pd(&(x.adjoint() * &x));
    let out = TruncatedOperator::new(j.basis, g);
    debug_assert!(max_abs_diff(&(&out.matrix * &j.matrix), &(&k.matrix * &out.matrix)) < 1e-8);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{default_finite_lagrangian, standard_lagrangian, ModeBasis};

    fn frame() -> LagrangianFrame {
        standard_lagrangian(ModeBasis::new(2, 0), &default_finite_lagrangian(2)).unwrap()
    }

    #[test]
    fn identity_and_j() {
        let f = frame();
        let one = identity(2);
        let (c, a) = decompose_ca(&one, &f.j);
        assert!(max_abs_diff(&c, &one) < 1e-15 && hs_norm(&a) < 1e-15);
        let (c, a) = decompose_ca(&f.j, &f.j);
        assert!(max_abs_diff(&c, &f.j) < 1e-15 && hs_norm(&a) < 1e-15);
    }

    #[test]
    fn swapping_l_and_conjugate_is_singular() {
        // on ℝ², reflection across the x-axis maps L to ΣL
        let f = frame();
        let refl = CMat::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)]);
        let g = TruncatedOperator::new(f.basis, refl);
        assert!(matches!(zg(&g, &f), Err(Error::SingularC(_))));
    }

    #[test]
    fn conjugator_of_equal_structures_is_identity() {
        let f = frame();
        let j = f.j_operator();
        let g = canonical_conjugator(&j, &j).unwrap();
        assert!(max_abs_diff(&g.matrix, &identity(2)) < 1e-14);
        let minus = TruncatedOperator::new(f.basis, -&f.j);
        assert!(matches!(canonical_conjugator(&j, &minus), Err(Error::TooFar(_))));
    }
}
