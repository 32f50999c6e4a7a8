use num_complex::Complex64;

use super::basis::{insertion_sign, FockOperator, FockSpace, FockVector};
use crate::linalg::{CMat, CVec, SparseMat};

impl FockSpace {
    /// Bare wedge `l_i ∧ ·`; output above the cap is discarded.
    pub fn creator(&self, i: usize) -> FockOperator {
        let mut alpha = vec![Complex64::new(0.0, 0.0); self.frame.dim()];
        alpha[i] = Complex64::new(1.0, 0.0);
        self.operator(self.ladder(&alpha, &vec![Complex64::new(0.0, 0.0); alpha.len()]))
    }

    /// Contraction `l_i ⌟ ·`, the adjoint of [`FockSpace::creator`].
    pub fn annihilator(&self, i: usize) -> FockOperator {
        let mut beta = vec![Complex64::new(0.0, 0.0); self.frame.dim()];
        beta[i] = Complex64::new(1.0, 0.0);
        self.operator(self.ladder(&vec![Complex64::new(0.0, 0.0); beta.len()], &beta))
    }

    /// `Σ_i α_i c(l_i) + β_i a(l_i)`.
    fn ladder(&self, alpha: &[Complex64], beta: &[Complex64]) -> CMat {
        let b = &self.basis;
        let d = b.dim();
        let mut m = CMat::zeros(d, d);
        for col in 0..d {
            let s = b.subset(col);
            for i in 0..b.modes {
                let bit = 1u64 << i;
                if s & bit == 0 {
                    if alpha[i].norm_sqr() != 0.0 {
                        if let Some(row) = b.index_of(s | bit) {
                            m[(row, col)] += alpha[i] * insertion_sign(s, i);
                        }
                    }
                } else if beta[i].norm_sqr() != 0.0 {
                    let row = b.index_of(s & !bit).expect("lower degree is present");
                    m[(row, col)] += beta[i] * insertion_sign(s, i);
                }
            }
        }
        m
    }

    /// Complex-linear extension of the Fock representation,
    /// `π(w) = √2 c(P w) + √2 a(P Σ w)`. For real `w` it is self-adjoint and
    /// `π(w)Ω = √2 P w`.
    pub fn clifford_rep(&self, w: &CVec) -> FockOperator {
        self.operator(self.clifford_matrix(w))
    }

    pub fn clifford_matrix(&self, w: &CVec) -> CMat {
        let s2 = std::f64::consts::SQRT_2;
        let alpha: Vec<Complex64> = (0..self.frame.dim())
            .map(|i| self.frame.cols.column(i).dotc(w) * s2)
            .collect();
        let bar = self.frame.conj_cols();
        let beta: Vec<Complex64> = (0..self.frame.dim()).map(|i| bar.column(i).dotc(w) * s2).collect();
        self.ladder(&alpha, &beta)
    }

    /// `π(e_k)` for every ambient basis vector `e_k`.
    pub fn clifford_generators(&self) -> Vec<CMat> {
        let d = self.frame.basis.dim();
        (0..d)
            .map(|k| {
                let mut e = CVec::zeros(d);
                e[k] = Complex64::new(1.0, 0.0);
                self.clifford_matrix(&e)
            })
            .collect()
    }

    pub fn clifford_sparse(&self, w: &CVec) -> SparseMat {
        SparseMat::from_dense(&self.clifford_matrix(w))
    }

    /// [`FockSpace::clifford_generators`] in sparse form.
    pub fn sparse_generators(&self) -> Vec<SparseMat> {
        let d = self.frame.basis.dim();
        (0..d)
            .map(|k| {
                let mut e = CVec::zeros(d);
                e[k] = Complex64::new(1.0, 0.0);
                self.clifford_sparse(&e)
            })
            .collect()
    }

    /// `l_i ∧ v` together with the norm of the part lost to the cap.
    pub fn create_on(&self, i: usize, v: &FockVector) -> (FockVector, f64) {
        let full = FockVector::basis_vector(self.basis.clone(), &[i]);
        full.wedge(v)
    }
}

/// `B(v, w) = ⟨v, Σw⟩`, the complex-bilinear extension of the real inner
/// product; the Clifford relation reads `π(v)π(w) + π(w)π(v) = 2B(v, w)`.
pub fn bilinear(basis: &crate::modes::ModeBasis, v: &CVec, w: &CVec) -> Complex64 {
    crate::linalg::inner(v, &basis.sigma(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, hs_norm, max_abs_diff};
    use crate::modes::{default_finite_lagrangian, random, standard_lagrangian, ModeBasis};

    fn space(n: usize, q: usize, cap: usize) -> FockSpace {
        let f = standard_lagrangian(ModeBasis::new(n, q), &default_finite_lagrangian(n)).unwrap();
        FockSpace::new(f, cap)
    }

    #[test]
    fn creator_and_annihilator_basics() {
        let s = space(2, 1, 3);
        let om = s.vacuum();
        let l0 = FockVector::basis_vector(s.basis.clone(), &[0]);
        assert_eq!(s.creator(0).apply(&om).amps, l0.amps);
        let l01 = FockVector::basis_vector(s.basis.clone(), &[0, 1]);
        let l1 = FockVector::basis_vector(s.basis.clone(), &[1]);
        assert_eq!(s.annihilator(0).apply(&l01).amps, l1.amps);
        let a = s.annihilator(2).matrix;
        assert!(hs_norm(&(&a * &a)) == 0.0);
        assert_eq!(s.annihilator(1).matrix, s.creator(1).matrix.adjoint());
    }

    #[test]
    fn pi_of_l_plus_conjugate_on_vacuum() {
        let s = space(2, 1, 3);
        let l = s.frame.col(1);
        let v = &l + s.frame.basis.sigma(&l);
        let out = s.clifford_rep(&v).apply(&s.vacuum());
        let expect = FockVector::basis_vector(s.basis.clone(), &[1]).scale(c64(2f64.sqrt(), 0.0));
        assert!((out.amps - expect.amps).norm() < 1e-14);
    }

    #[test]
    fn clifford_relation_below_cap() {
        let s = space(4, 1, 4);
        let mut r = random::rng(11);
        let b = s.frame.basis;
        let keep = s.basis.up_to_degree(3);
        for _ in 0..20 {
            let v = random::real_vector(b, &mut r);
            let w = random::real_vector(b, &mut r);
            let pv = s.clifford_matrix(&v);
            let pw = s.clifford_matrix(&w);
            assert!(max_abs_diff(&pv, &pv.adjoint()) < 1e-13);
            let anti = &pv * &pw + &pw * &pv;
            let target = bilinear(&b, &v, &w) * 2.0;
            for &c in &keep {
                for rr in 0..s.dim() {
                    let want = if rr == c { target } else { c64(0.0, 0.0) };
                    assert!((anti[(rr, c)] - want).norm() < 1e-12);
                }
            }
        }
    }
}
