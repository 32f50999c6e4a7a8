use super::{ModeBasis, TruncatedOperator};
use crate::linalg::{c64, hs_norm, identity, unitarity_defect, CMat, CVec, I};
use crate::{Error, Result};

const FRAME_TOL: f64 = 1e-10;

/// Orthonormal columns spanning an isotropic subspace `L` (so `L ⟂ ΣL`).
/// A frame is complete when `L ⊕ ΣL` is the whole truncated space; only then
/// is `J` a unitary structure.
#[derive(Clone, Debug)]
pub struct LagrangianFrame {
    pub basis: ModeBasis,
    pub cols: CMat,
    /// `i` on `L`, `−i` on `ΣL`, zero on the rest.
    pub j: CMat,
}

impl LagrangianFrame {
    /// Frame of a complete Lagrangian.
    pub fn new(basis: ModeBasis, cols: CMat) -> Result<Self> {
        let f = Self::isotropic(basis, cols)?;
        if 2 * f.dim() != basis.dim() {
            return Err(Error::NotLagrangian(0.0));
        }
        Ok(f)
    }

    /// Frame of an isotropic subspace, not necessarily half-dimensional.
    pub fn isotropic(basis: ModeBasis, cols: CMat) -> Result<Self> {
        if cols.nrows() != basis.dim() {
            return Err(Error::Shape(format!("frame has {} rows, basis {}", cols.nrows(), basis.dim())));
        }
        let d = unitarity_defect(&cols);
        if d > FRAME_TOL {
            return Err(Error::NonOrthogonal(d));
        }
        let bar = basis.sigma_cols(&cols);
        let overlap = hs_norm(&(cols.adjoint() * &bar));
        if overlap > FRAME_TOL {
            return Err(Error::NotLagrangian(overlap));
        }
        let j = (&cols * cols.adjoint() - &bar * bar.adjoint()) * I;
        Ok(Self { basis, cols, j })
    }

    pub fn dim(&self) -> usize {
        self.cols.ncols()
    }

    pub fn is_complete(&self) -> bool {
        2 * self.dim() == self.basis.dim()
    }

    pub fn col(&self, i: usize) -> CVec {
        self.cols.column(i).into_owned()
    }

    /// Columns `Σl_i`.
    pub fn conj_cols(&self) -> CMat {
        self.basis.sigma_cols(&self.cols)
    }

    /// Frame `g·L`; fails unless `g` is orthogonal.
    pub fn image(&self, g: &TruncatedOperator) -> Result<Self> {
        g.require_orthogonal()?;
        Self::isotropic(self.basis, &g.matrix * &self.cols)
    }

    pub fn j_operator(&self) -> TruncatedOperator {
        TruncatedOperator::new(self.basis, self.j.clone())
    }
}

/// `(ê_{2k} + i ê_{2k+1}) / √2`, the standard isotropic half-basis of ℂⁿ.
pub fn default_finite_lagrangian(n: usize) -> CMat {
    assert!(n % 2 == 0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = CMat::zeros(n, n / 2);
    for k in 0..n / 2 {
        m[(2 * k, k)] = c64(s, 0.0);
        m[(2 * k + 1, k)] = c64(0.0, s);
    }
    m
}

/// `L = L_finite ⊗ e^{0} ⊕ ℂⁿ ⊗ span{e^{iqt} : 0 < q ≤ Q}`.
pub fn standard_lagrangian(basis: ModeBasis, l_finite: &CMat) -> Result<LagrangianFrame> {
    let n = basis.n;
    if l_finite.nrows() != n || l_finite.ncols() != n / 2 {
        return Err(Error::Shape(format!("finite Lagrangian must be {}x{}", n, n / 2)));
    }
    // conjugation on ℂⁿ is coordinatewise, so isotropy means lᵀl = 0
    let overlap = hs_norm(&(l_finite.transpose() * l_finite));
    if overlap > FRAME_TOL {
        return Err(Error::NotLagrangian(overlap));
    }
    let fin = crate::linalg::gram_schmidt(l_finite);
    let m = n * basis.cutoff + n / 2;
    let mut cols = CMat::zeros(basis.dim(), m);
    let z0 = basis.index(0, 0);
    cols.view_mut((z0, 0), (n, n / 2)).copy_from(&fin);
    let mut c = n / 2;
    for q in 1..=basis.cutoff as i64 {
        for a in 0..n {
            cols[(basis.index(q, a), c)] = c64(1.0, 0.0);
            c += 1;
        }
    }
    LagrangianFrame::new(basis, cols)
}

/// `P = ½(1 − iJ)`, the orthogonal projection onto `L`.
pub fn projector_pl(frame: &LagrangianFrame) -> TruncatedOperator {
    let d = frame.basis.dim();
    TruncatedOperator::new(frame.basis, (identity(d) - &frame.j * I) * c64(0.5, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn dimensions() {
        let f0 = standard_lagrangian(ModeBasis::new(2, 0), &default_finite_lagrangian(2)).unwrap();
        assert_eq!(f0.dim(), 1);
        let f1 = standard_lagrangian(ModeBasis::new(2, 1), &default_finite_lagrangian(2)).unwrap();
        assert_eq!(f1.dim(), 3);
        let f2 = standard_lagrangian(ModeBasis::new(4, 2), &default_finite_lagrangian(4)).unwrap();
        assert_eq!(f2.dim(), 10);
    }

    #[test]
    fn j_is_a_unitary_structure() {
        let b = ModeBasis::new(4, 1);
        let f = standard_lagrangian(b, &default_finite_lagrangian(4)).unwrap();
        let d = b.dim();
        assert!(max_abs_diff(&(&f.j * &f.j), &(-identity(d))) < 1e-14);
        assert!(b.reality_defect(&f.j) < 1e-14);
        assert!(unitarity_defect(&f.j) < 1e-14);
        let p = projector_pl(&f).matrix;
        assert!(max_abs_diff(&(&p * &p), &p) < 1e-14);
        assert!(max_abs_diff(&(&p + b.conjugate_op(&p)), &identity(d)) < 1e-14);
        assert!(max_abs_diff(&(&p * &f.cols), &f.cols) < 1e-14);
        assert!(hs_norm(&(&p * f.conj_cols())) < 1e-14);
    }

    #[test]
    fn real_plane_is_rejected() {
        let mut l = CMat::zeros(2, 1);
        l[(0, 0)] = c64(1.0, 0.0);
        let err = standard_lagrangian(ModeBasis::new(2, 0), &l).unwrap_err();
        assert!(matches!(err, Error::NotLagrangian(_)));
    }
}
