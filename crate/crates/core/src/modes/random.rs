//! Seeded random operators used by the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{LagrangianFrame, ModeBasis, TruncatedOperator};
use crate::linalg::{c64, expm, CMat, CVec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn complex_vector(len: usize, rng: &mut impl Rng) -> CVec {
    CVec::from_fn(len, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Random Σ-fixed vector, i.e. an element of the real space `V`.
pub fn real_vector(basis: ModeBasis, rng: &mut impl Rng) -> CVec {
    let u = complex_vector(basis.dim(), rng);
    (&u + basis.sigma(&u)) * c64(0.5, 0.0)
}

/// Real skew-adjoint generator whose Fourier blocks `(p, q)` vanish for
/// `|p − q| > band`, normalised to Hilbert-Schmidt norm `scale`.
pub fn real_skew(basis: ModeBasis, band: usize, scale: f64, rng: &mut impl Rng) -> CMat {
    let d = basis.dim();
    let mut r = complex_matrix(d, d, rng);
    for i in 0..d {
        for j in 0..d {
            if basis.mode(i).0.abs_diff(basis.mode(j).0) as usize > band {
                r[(i, j)] = c64(0.0, 0.0);
            }
        }
    }
    let skew = &r - r.adjoint();
    let x = (&skew + basis.conjugate_op(&skew)) * c64(0.5, 0.0);
    let n = crate::linalg::hs_norm(&x);
    if n == 0.0 {
        x
    } else {
        x * c64(scale / n, 0.0)
    }
}

/// `exp(X)` for a random finite-band real skew `X`; exactly orthogonal on the
/// truncated space.
pub fn orthogonal(basis: ModeBasis, band: usize, scale: f64, rng: &mut impl Rng) -> TruncatedOperator {
    TruncatedOperator::new(basis, expm(&real_skew(basis, band, scale, rng)))
}

/// Random element of `U(V_J)`: the exponential of the `J`-commuting part.
pub fn unitary_vj(frame: &LagrangianFrame, scale: f64, rng: &mut impl Rng) -> TruncatedOperator {
    let x = real_skew(frame.basis, 2 * frame.basis.cutoff, scale, rng);
    let xc = (&x - &frame.j * &x * &frame.j) * c64(0.5, 0.0);
    TruncatedOperator::new(frame.basis, expm(&xc))
}

/// Random element of `Sym(Σ(L))` with Hilbert-Schmidt norm `scale`.
pub fn sym(frame: &LagrangianFrame, scale: f64, rng: &mut impl Rng) -> CMat {
    let x = real_skew(frame.basis, 2 * frame.basis.cutoff, 1.0, rng);
    let z = (&x + &frame.j * &x * &frame.j) * c64(0.5, 0.0);
    let n = crate::linalg::hs_norm(&z);
    z * c64(scale / n, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_defect;
    use crate::modes::{default_finite_lagrangian, standard_lagrangian, sym_defect};

    #[test]
    fn generated_operators_have_their_structure() {
        let mut r = rng(3);
        let b = ModeBasis::new(4, 2);
        let g = orthogonal(b, 1, 0.7, &mut r);
        assert!(g.orthogonal);
        let f = standard_lagrangian(b, &default_finite_lagrangian(4)).unwrap();
        let u = unitary_vj(&f, 0.5, &mut r);
        assert!(u.orthogonal);
        assert!(crate::linalg::hs_norm(&(&u.matrix * &f.j - &f.j * &u.matrix)) < 1e-12);
        let z = sym(&f, 0.3, &mut r);
        assert!(sym_defect(&z, &f) < 1e-12);
        let v = real_vector(b, &mut r);
        assert!((b.sigma(&v) - &v).norm() < 1e-15);
        assert!(unitarity_defect(&g.matrix) < 1e-12);
    }
}
