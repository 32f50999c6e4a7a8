//! Small dense complex linear-algebra helpers shared by every module.
//!
//! Everything here works on `nalgebra` dynamic matrices of `Complex64`. The
//! sizes in this crate are small (at most a few hundred rows), so all
//! decompositions are dense and direct.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Frobenius (Hilbert-Schmidt) norm.
pub fn hs_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hilbert-Schmidt inner product `tr(a* b)`, conjugate-linear in `a`.
pub fn hs_inner(a: &CMat, b: &CMat) -> Complex64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Smallest singular value of a square matrix.
pub fn min_singular_value(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Inner product `<x, y>` linear in the first slot, `sum x_i conj(y_i)`.
pub fn inner(x: &CVec, y: &CVec) -> Complex64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_fn(h: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let n = h.nrows();
    let sym = (h + h.adjoint()) * c64(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut d = CMat::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = c64(f(eig.eigenvalues[i]), 0.0);
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Square root of a positive semidefinite Hermitian matrix.
pub fn sqrt_psd(h: &CMat) -> CMat {
    hermitian_fn(h, |x| x.max(0.0).sqrt())
}

/// Inverse square root of a positive definite Hermitian matrix.
pub fn inv_sqrt_pd(h: &CMat) -> CMat {
    hermitian_fn(h, |x| 1.0 / x.sqrt())
}

/// Null space of `a` (columns form an orthonormal basis) together with the
/// full list of singular values, ascending. A singular value counts as zero
/// when it is below `tol * max(1, largest singular value)`.
pub fn null_space(a: &CMat, tol: f64) -> (CMat, Vec<f64>) {
    let (r, c) = a.shape();
    // nalgebra's thin SVD only returns a full right factor when rows >= cols.
    let padded = if r < c {
        let mut p = CMat::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    let scale = sv.iter().cloned().fold(1.0, f64::max);
    let mut cols = Vec::new();
    for (k, s) in sv.iter().enumerate() {
        if *s <= tol * scale {
            cols.push(v_t.row(k).adjoint());
        }
    }
    let mut sorted = sv.clone();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let basis = if cols.is_empty() {
        CMat::zeros(c, 0)
    } else {
        CMat::from_columns(&cols)
    };
    (basis, sorted)
}

/// Orthonormal basis for the column span of `a`, computed from the SVD so
/// that rank-deficient inputs are handled; columns with singular value below
/// `tol` are dropped.
pub fn orthonormal_span(a: &CMat, tol: f64) -> CMat {
    if a.ncols() == 0 {
        return a.clone();
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let keep: Vec<CVec> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > tol)
        .map(|(k, _)| u.column(k).into_owned())
        .collect();
    if keep.is_empty() {
        CMat::zeros(a.nrows(), 0)
    } else {
        CMat::from_columns(&keep)
    }
}

/// Gram-Schmidt on the columns in order (keeps the flag of the leading
/// columns, unlike [`orthonormal_span`]).
pub fn gram_schmidt(a: &CMat) -> CMat {
    let mut out: Vec<CVec> = Vec::with_capacity(a.ncols());
    for j in 0..a.ncols() {
        let mut v = a.column(j).into_owned();
        for _ in 0..2 {
            for q in &out {
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let n = v.norm();
        assert!(n > 1e-12, "gram_schmidt: dependent columns");
        out.push(v / c64(n, 0.0));
    }
    CMat::from_columns(&out)
}

/// `max |m* m - 1|` entrywise.
pub fn unitarity_defect(m: &CMat) -> f64 {
    let g = m.adjoint() * m;
    let n = g.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((g[(i, j)] - target).norm());
        }
    }
    worst
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Determinant of the submatrix with the given (sorted) rows and columns.
pub fn minor(m: &CMat, rows: &[usize], cols: &[usize]) -> Complex64 {
    debug_assert_eq!(rows.len(), cols.len());
    match rows.len() {
        0 => ONE,
        1 => m[(rows[0], cols[0])],
        2 => {
            m[(rows[0], cols[0])] * m[(rows[1], cols[1])]
                - m[(rows[0], cols[1])] * m[(rows[1], cols[0])]
        }
        k => CMat::from_fn(k, k, |i, j| m[(rows[i], cols[j])]).determinant(),
    }
}

/// Matrix exponential.
pub fn expm(m: &CMat) -> CMat {
    m.clone().exp()
}

/// Phase of a nonzero complex number as a unit complex number.
pub fn unit_phase(z: Complex64) -> Complex64 {
    let n = z.norm();
    if n == 0.0 {
        ONE
    } else {
        z / n
    }
}

/// Column-compressed sparse matrix for the Clifford generators, whose
/// columns hold at most one entry per mode.
#[derive(Clone, Debug)]
pub struct SparseMat {
    pub nrows: usize,
    pub ncols: usize,
    cols: Vec<Vec<(usize, Complex64)>>,
}

impl SparseMat {
    /// Keeps the entries that are not exactly zero.
    pub fn from_dense(m: &CMat) -> Self {
        let cols = (0..m.ncols())
            .map(|c| m.column(c).iter().enumerate().filter(|(_, z)| **z != ZERO).map(|(r, z)| (r, *z)).collect())
            .collect();
        Self { nrows: m.nrows(), ncols: m.ncols(), cols }
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn mul_vec(&self, v: &CVec) -> CVec {
        let mut out = CVec::zeros(self.nrows);
        for (c, col) in self.cols.iter().enumerate() {
            let x = v[c];
            if x != ZERO {
                for &(r, z) in col {
                    out[r] += z * x;
                }
            }
        }
        out
    }

    /// `self · d`.
    pub fn mul_dense(&self, d: &CMat) -> CMat {
        let mut out = CMat::zeros(self.nrows, d.ncols());
        for j in 0..d.ncols() {
            for (c, col) in self.cols.iter().enumerate() {
                let x = d[(c, j)];
                if x != ZERO {
                    for &(r, z) in col {
                        out[(r, j)] += z * x;
                    }
                }
            }
        }
        out
    }

    /// `d · self`.
    pub fn dense_mul(&self, d: &CMat) -> CMat {
        let mut out = CMat::zeros(d.nrows(), self.ncols);
        for (c, col) in self.cols.iter().enumerate() {
            let mut target = out.column_mut(c);
            for &(r, z) in col {
                target.axpy(z, &d.column(r), ONE);
            }
        }
        out
    }

    /// Dense `Σ_k conj(a_kr) a_kc`, i.e. `self* · self`.
    pub fn gram(&self) -> CMat {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, z) in col {
                rows[r].push((c, z));
            }
        }
        let mut out = CMat::zeros(self.ncols, self.ncols);
        for row in &rows {
            for &(a, za) in row {
                for &(b, zb) in row {
                    out[(a, b)] += za.conj() * zb;
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> CMat {
        let mut out = CMat::zeros(self.nrows, self.ncols);
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, z) in col {
                out[(r, c)] += z;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_rank_one() {
        let a = CMat::from_row_slice(2, 3, &[ONE, ONE, ZERO, ONE, ONE, ZERO]);
        let (ns, _) = null_space(&a, 1e-12);
        assert_eq!(ns.ncols(), 2);
        assert!(hs_norm(&(&a * &ns)) < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        let b = CMat::from_fn(4, 4, |i, j| c64((i + 2 * j) as f64 * 0.1, (i as f64 - j as f64) * 0.05));
        let h = b.adjoint() * &b + identity(4);
        let s = sqrt_psd(&h);
        assert!(max_abs_diff(&(&s * &s), &h) < 1e-12);
        let r = inv_sqrt_pd(&h);
        assert!(max_abs_diff(&(&r * &h * &r), &identity(4)) < 1e-12);
    }

    #[test]
    fn minor_matches_determinant() {
        let m = CMat::from_fn(3, 3, |i, j| c64((i * 3 + j) as f64, (i as f64) - 0.5 * j as f64));
        let full = m.clone().determinant();
        assert!((minor(&m, &[0, 1, 2], &[0, 1, 2]) - full).norm() < 1e-10);
    }

    #[test]
    fn sparse_products_match_dense() {
        let m = CMat::from_fn(4, 3, |i, j| if (i + j) % 2 == 0 { c64(i as f64 + 1.0, j as f64) } else { ZERO });
        let d = CMat::from_fn(3, 2, |i, j| c64(0.5 * i as f64, 1.0 - j as f64));
        let e = CMat::from_fn(5, 4, |i, j| c64(i as f64 - j as f64, 0.25));
        let s = SparseMat::from_dense(&m);
        assert_eq!(s.nnz(), 6);
        assert!(max_abs_diff(&s.mul_dense(&d), &(&m * &d)) < 1e-14);
        assert!(max_abs_diff(&s.dense_mul(&e), &(&e * &m)) < 1e-14);
        assert!(max_abs_diff(&s.gram(), &(m.adjoint() * &m)) < 1e-14);
        let v = d.column(0).into_owned();
        assert!((s.mul_vec(&v) - &m * &v).norm() < 1e-14);
        assert_eq!(s.to_dense(), m);
    }

    #[test]
    fn expm_of_skew_is_unitary() {
        let x = CMat::from_fn(5, 5, |i, j| c64((i as f64 - j as f64) * 0.3, 0.1 * (i + j) as f64));
        let skew = (&x - x.adjoint()) * c64(0.5, 0.0);
        assert!(unitarity_defect(&expm(&skew)) < 1e-12);
    }
}
