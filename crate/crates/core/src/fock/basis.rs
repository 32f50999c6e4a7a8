use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{CMat, CVec};
use crate::modes::LagrangianFrame;

/// Subsets of `{0, …, m−1}` of size at most `cap`, ordered by size and then
/// lexicographically. Subset `S` stands for `l_{s₁} ∧ … ∧ l_{s_k}`, `s₁ < … < s_k`.
#[derive(Clone, Debug)]
pub struct FockBasis {
    pub modes: usize,
    pub cap: usize,
    subsets: Vec<u64>,
    lookup: HashMap<u64, usize>,
}

fn combinations(m: usize, k: usize, out: &mut Vec<u64>) {
    fn rec(start: usize, m: usize, left: usize, acc: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..=(m - left) {
            rec(i + 1, m, left - 1, acc | (1 << i), out);
        }
    }
    rec(0, m, k, 0, out);
}

impl FockBasis {
    pub fn new(modes: usize, cap: usize) -> Self {
        assert!(modes < 64, "at most 63 modes");
        let cap = cap.min(modes);
        let mut subsets = Vec::new();
        for k in 0..=cap {
            combinations(modes, k, &mut subsets);
        }
        let lookup = subsets.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Self { modes, cap, subsets, lookup }
    }

    pub fn dim(&self) -> usize {
        self.subsets.len()
    }

    pub fn subset(&self, idx: usize) -> u64 {
        self.subsets[idx]
    }

    pub fn members(&self, idx: usize) -> Vec<usize> {
        let s = self.subsets[idx];
        (0..self.modes).filter(|i| s >> i & 1 == 1).collect()
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.subsets[idx].count_ones() as usize
    }

    pub fn index_of(&self, subset: u64) -> Option<usize> {
        self.lookup.get(&subset).copied()
    }

    /// Indices of basis vectors with degree at most `k`.
    pub fn up_to_degree(&self, k: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) <= k).collect()
    }
}

/// Sign of moving `l_i` past the members of `s` below `i`.
pub(crate) fn insertion_sign(s: u64, i: usize) -> f64 {
    if (s & ((1u64 << i) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign of `l_S ∧ l_T` relative to `l_{S∪T}`: the number of pairs
/// `(s, t)` with `s > t`.
pub(crate) fn merge_sign(s: u64, t: u64) -> f64 {
    let mut inversions = 0u32;
    let mut rest = t;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (s >> j >> 1).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
    Zero,
}

/// Amplitudes on a [`FockBasis`]. Since frames are orthonormal the Grammian
/// inner product is the plain Hermitian one on amplitudes.
#[derive(Clone, Debug)]
pub struct FockVector {
    pub basis: Arc<FockBasis>,
    pub amps: CVec,
}

impl FockVector {
    pub fn zeros(basis: Arc<FockBasis>) -> Self {
        let d = basis.dim();
        Self { basis, amps: CVec::zeros(d) }
    }

    pub fn vacuum(basis: Arc<FockBasis>) -> Self {
        let mut v = Self::zeros(basis);
        v.amps[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// `l_S` for a subset given by its members.
    pub fn basis_vector(basis: Arc<FockBasis>, members: &[usize]) -> Self {
        let mask = members.iter().fold(0u64, |m, i| m | 1 << i);
        let idx = basis.index_of(mask).expect("subset within the degree cap");
        let mut v = Self::zeros(basis);
        v.amps[idx] = Complex64::new(1.0, 0.0);
        v
    }

    /// `⟨self, other⟩`, linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        crate::linalg::inner(&self.amps, &other.amps)
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self { basis: self.basis.clone(), amps: &self.amps * z }
    }

    pub fn normalized(&self) -> Self {
        self.scale(Complex64::new(1.0 / self.norm(), 0.0))
    }

    /// `self ∧ other`, dropping components above the cap; returns the norm of
    /// what was dropped.
    pub fn wedge(&self, other: &Self) -> (Self, f64) {
        let b = &self.basis;
        let mut out = Self::zeros(b.clone());
        let mut tail_sq = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let s = b.subset(i);
            for (j, c) in other.amps.iter().enumerate() {
                let t = b.subset(j);
                if c.norm_sqr() == 0.0 || s & t != 0 {
                    continue;
                }
                let z = a * c * merge_sign(s, t);
                match b.index_of(s | t) {
                    Some(k) => out.amps[k] += z,
                    None => tail_sq += z.norm_sqr(),
                }
            }
        }
        (out, tail_sq.sqrt())
    }

    pub fn parity(&self) -> Parity {
        parity_of(&self.basis, &self.amps, 1e-12)
    }
}

pub(crate) fn parity_of(basis: &FockBasis, amps: &CVec, tol: f64) -> Parity {
    let (mut even, mut odd) = (0.0, 0.0);
    for (i, a) in amps.iter().enumerate() {
        if basis.degree(i) % 2 == 0 {
            even += a.norm_sqr();
        } else {
            odd += a.norm_sqr();
        }
    }
    let scale = (even + odd).sqrt();
    match (even.sqrt() > tol * scale.max(1.0), odd.sqrt() > tol * scale.max(1.0)) {
        (false, false) => Parity::Zero,
        (true, false) => Parity::Even,
        (false, true) => Parity::Odd,
        (true, true) => Parity::Mixed,
    }
}

/// Dense matrix between two Fock spaces.
#[derive(Clone, Debug)]
pub struct FockOperator {
    pub domain: Arc<FockBasis>,
    pub codomain: Arc<FockBasis>,
    pub matrix: CMat,
}

impl FockOperator {
    pub fn new(domain: Arc<FockBasis>, codomain: Arc<FockBasis>, matrix: CMat) -> Self {
        assert_eq!(matrix.shape(), (codomain.dim(), domain.dim()));
        Self { domain, codomain, matrix }
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        FockVector { basis: self.codomain.clone(), amps: &self.matrix * &v.amps }
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.codomain.clone(), self.domain.clone(), self.matrix.adjoint())
    }

    pub fn compose(&self, inner: &Self) -> Self {
        Self::new(inner.domain.clone(), self.codomain.clone(), &self.matrix * &inner.matrix)
    }

    pub fn unitarity_defect(&self) -> f64 {
        crate::linalg::unitarity_defect(&self.matrix)
    }

    pub fn is_unitary(&self) -> bool {
        self.matrix.is_square() && self.unitarity_defect() < 1e-9
    }
}

/// A Lagrangian frame together with its degree-capped exterior algebra.
#[derive(Clone, Debug)]
pub struct FockSpace {
    pub frame: LagrangianFrame,
    pub basis: Arc<FockBasis>,
}

impl FockSpace {
    pub fn new(frame: LagrangianFrame, cap: usize) -> Self {
        let basis = Arc::new(FockBasis::new(frame.dim(), cap));
        Self { frame, basis }
    }

    /// The full exterior algebra, no cap.
    pub fn full(frame: LagrangianFrame) -> Self {
        let m = frame.dim();
        Self::new(frame, m)
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn vacuum(&self) -> FockVector {
        FockVector::vacuum(self.basis.clone())
    }

    pub fn operator(&self, matrix: CMat) -> FockOperator {
        FockOperator::new(self.basis.clone(), self.basis.clone(), matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_order_and_size() {
        let b = FockBasis::new(4, 2);
        assert_eq!(b.dim(), 1 + 4 + 6);
        assert_eq!(b.subset(0), 0);
        assert_eq!(b.members(1), vec![0]);
        assert_eq!(b.members(5), vec![0, 1]);
        assert_eq!(b.members(10), vec![2, 3]);
        assert_eq!(FockBasis::new(5, 5).dim(), 32);
    }

    #[test]
    fn wedge_signs() {
        let b = Arc::new(FockBasis::new(3, 3));
        let l0 = FockVector::basis_vector(b.clone(), &[0]);
        let l1 = FockVector::basis_vector(b.clone(), &[1]);
        let (a, _) = l1.wedge(&l0);
        let (c, _) = l0.wedge(&l1);
        assert_eq!(a.amps, -c.amps.clone());
        assert_eq!(c.amps, FockVector::basis_vector(b.clone(), &[0, 1]).amps);
        let (sq, _) = l0.wedge(&l0);
        assert_eq!(sq.norm(), 0.0);
        assert_eq!(c.parity(), Parity::Even);
        assert_eq!(l1.parity(), Parity::Odd);
    }
}
