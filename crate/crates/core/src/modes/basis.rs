use serde::{Deserialize, Serialize};

use crate::linalg::{CMat, CVec};

/// Orthonormal basis `ê_a e^{iqt}`, `0 ≤ a < n`, `|q| ≤ Q`, ordered
/// lexicographically in `(q, a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeBasis {
    pub n: usize,
    pub cutoff: usize,
}

impl ModeBasis {
    pub fn new(n: usize, cutoff: usize) -> Self {
        assert!(n >= 2 && n % 2 == 0, "fiber dimension must be even");
        Self { n, cutoff }
    }

    pub fn dim(&self) -> usize {
        self.n * (2 * self.cutoff + 1)
    }

    pub fn index(&self, q: i64, a: usize) -> usize {
        debug_assert!(q.unsigned_abs() as usize <= self.cutoff && a < self.n);
        (q + self.cutoff as i64) as usize * self.n + a
    }

    /// `(q, a)` of a basis index.
    pub fn mode(&self, idx: usize) -> (i64, usize) {
        ((idx / self.n) as i64 - self.cutoff as i64, idx % self.n)
    }

    pub fn contains(&self, q: i64) -> bool {
        q.unsigned_abs() as usize <= self.cutoff
    }

    /// Index of the conjugate mode `(−q, a)`.
    pub fn conj_index(&self, idx: usize) -> usize {
        let (q, a) = self.mode(idx);
        self.index(-q, a)
    }

    /// `(Σv)[q, a] = conj(v[−q, a])`.
    pub fn sigma(&self, v: &CVec) -> CVec {
        CVec::from_fn(self.dim(), |i, _| v[self.conj_index(i)].conj())
    }

    /// Σ applied to every column.
    pub fn sigma_cols(&self, m: &CMat) -> CMat {
        CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(self.conj_index(i), j)].conj())
    }

    /// `Σ T Σ`, the complex conjugate operator.
    pub fn conjugate_op(&self, t: &CMat) -> CMat {
        CMat::from_fn(t.nrows(), t.ncols(), |i, j| {
            t[(self.conj_index(i), self.conj_index(j))].conj()
        })
    }

    /// `max |ΣTΣ − T|`; zero for operators coming from `V`.
    pub fn reality_defect(&self, t: &CMat) -> f64 {
        crate::linalg::max_abs_diff(&self.conjugate_op(t), t)
    }

    /// Indices of the modes with `|q| ≤ window`, in basis order.
    pub fn window_indices(&self, window: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.mode(i).0.unsigned_abs() as usize <= window).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn indexing_round_trip() {
        let b = ModeBasis::new(4, 2);
        assert_eq!(b.dim(), 20);
        for i in 0..b.dim() {
            let (q, a) = b.mode(i);
            assert_eq!(b.index(q, a), i);
            assert_eq!(b.conj_index(b.conj_index(i)), i);
        }
    }

    #[test]
    fn sigma_is_an_involution() {
        let b = ModeBasis::new(2, 1);
        let v = CVec::from_fn(b.dim(), |i, _| c64(i as f64, 1.0 - i as f64));
        assert_eq!(b.sigma(&b.sigma(&v)), v);
    }
}
