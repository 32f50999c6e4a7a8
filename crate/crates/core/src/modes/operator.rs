use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::ModeBasis;
use crate::linalg::{c64, hs_norm, unitarity_defect, CMat};
use crate::quatgeom::{so4_of_quat, Quaternion, SampledLoop};
use crate::{Error, Result};

/// Fourier mass allowed to escape the window before a multiplication operator
/// stops counting as orthogonal.
pub const LEAKAGE_TOL: f64 = 1e-8;
const FLAG_TOL: f64 = 1e-10;

/// Complex matrix on a [`ModeBasis`] plus the two structural flags.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    pub basis: ModeBasis,
    pub matrix: CMat,
    /// Commutes with Σ, i.e. comes from an operator on `V`.
    pub real: bool,
    pub orthogonal: bool,
}

impl TruncatedOperator {
    pub fn new(basis: ModeBasis, matrix: CMat) -> Self {
        assert_eq!(matrix.shape(), (basis.dim(), basis.dim()));
        let real = basis.reality_defect(&matrix) < FLAG_TOL;
        let orthogonal = real && unitarity_defect(&matrix) < FLAG_TOL;
        Self { basis, matrix, real, orthogonal }
    }

    pub fn identity(basis: ModeBasis) -> Self {
        Self::new(basis, CMat::identity(basis.dim(), basis.dim()))
    }

    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.basis, other.basis);
        Self::new(self.basis, &self.matrix * &other.matrix)
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.basis, self.matrix.adjoint())
    }

    pub fn require_orthogonal(&self) -> Result<()> {
        if !self.orthogonal {
            let d = unitarity_defect(&self.matrix).max(self.basis.reality_defect(&self.matrix));
            return Err(Error::NonOrthogonal(d));
        }
        Ok(())
    }
}

/// One serialised Fourier coefficient `σ_q = re + i·im`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub q: i64,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

/// Band-limited loop `σ(t) = Σ_q σ_q e^{iqt}` of real `n×n` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierLoop {
    pub n: usize,
    pub coeffs: BTreeMap<i64, CMat>,
}

impl FourierLoop {
    pub fn constant(a: DMatrix<f64>) -> Self {
        let n = a.nrows();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, a.map(|x| c64(x, 0.0)));
        Self { n, coeffs }
    }

    /// `t ↦` rotation by angle `t·winding` in the `(a, b)` plane.
    pub fn plane_rotation(n: usize, a: usize, b: usize, winding: i64) -> Self {
        let mut c0 = CMat::identity(n, n);
        c0[(a, a)] = c64(0.0, 0.0);
        c0[(b, b)] = c64(0.0, 0.0);
        let mut cp = CMat::zeros(n, n);
        cp[(a, a)] = c64(0.5, 0.0);
        cp[(b, b)] = c64(0.5, 0.0);
        cp[(a, b)] = c64(0.0, 0.5);
        cp[(b, a)] = c64(0.0, -0.5);
        let cm = cp.map(|z| z.conj());
        let mut coeffs = BTreeMap::new();
        if winding == 0 {
            coeffs.insert(0, CMat::identity(n, n));
        } else {
            coeffs.insert(0, c0);
            coeffs.insert(winding, cp);
            coeffs.insert(-winding, cm);
        }
        Self { n, coeffs }
    }

    /// Coefficients of real samples `σ(2πk/N)` via the FFT; entries below
    /// `1e-14` are dropped.
    pub fn from_samples(samples: &[DMatrix<f64>]) -> Result<Self> {
        let len = samples.len();
        if len < 8 || !len.is_power_of_two() {
            return Err(Error::SampleCount(len));
        }
        let n = samples[0].nrows();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(len);
        let mut by_slot = vec![CMat::zeros(n, n); len];
        for r in 0..n {
            for c in 0..n {
                let mut buf: Vec<Complex64> = samples.iter().map(|m| c64(m[(r, c)], 0.0)).collect();
                fft.process(&mut buf);
                for (k, z) in buf.iter().enumerate() {
                    by_slot[k][(r, c)] = z / len as f64;
                }
            }
        }
        let mut coeffs = BTreeMap::new();
        let half = len as i64 / 2;
        for (k, m) in by_slot.into_iter().enumerate() {
            let q = if (k as i64) <= half { k as i64 } else { k as i64 - len as i64 };
            if q == half {
                // Nyquist slot is ambiguous; a band-limited input leaves it empty.
                if hs_norm(&m) > 1e-10 {
                    return Err(Error::BandTooWide { leakage: hs_norm(&m) });
                }
                continue;
            }
            if hs_norm(&m) > 1e-14 {
                coeffs.insert(q, m);
            }
        }
        Ok(Self { n, coeffs })
    }

    /// Loop of left multiplications by a sampled unit-quaternion loop.
    pub fn from_quaternion_loop(lp: &SampledLoop<Quaternion>) -> Result<Self> {
        let mats = lp
            .values
            .iter()
            .map(|u| {
                let m = so4_of_quat(*u)?;
                Ok(DMatrix::from_fn(4, 4, |r, c| m[(r, c)]))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_samples(&mats)
    }

    pub fn band(&self) -> usize {
        self.coeffs.keys().map(|q| q.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn coeff(&self, q: i64) -> CMat {
        self.coeffs.get(&q).cloned().unwrap_or_else(|| CMat::zeros(self.n, self.n))
    }

    pub fn eval(&self, t: f64) -> DMatrix<f64> {
        let mut acc = CMat::zeros(self.n, self.n);
        for (q, m) in &self.coeffs {
            acc += m * Complex64::from_polar(1.0, *q as f64 * t);
        }
        acc.map(|z| z.re)
    }

    /// Pointwise product `(στ)(t) = σ(t)τ(t)`.
    pub fn product(&self, other: &Self) -> Self {
        let mut coeffs: BTreeMap<i64, CMat> = BTreeMap::new();
        for (p, a) in &self.coeffs {
            for (q, b) in &other.coeffs {
                let e = coeffs.entry(p + q).or_insert_with(|| CMat::zeros(self.n, self.n));
                *e += a * b;
            }
        }
        coeffs.retain(|_, m| hs_norm(m) > 1e-14);
        Self { n: self.n, coeffs }
    }

    /// Largest deviation of `σ(t)ᵀσ(t)` from the identity on a grid fine
    /// enough to resolve the band.
    pub fn orthogonality_defect(&self) -> f64 {
        let grid = 8 * (self.band() + 1);
        (0..grid)
            .map(|k| {
                let m = self.eval(2.0 * std::f64::consts::PI * k as f64 / grid as f64);
                (m.transpose() * &m - DMatrix::identity(self.n, self.n)).abs().max()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_entries(&self) -> Vec<CoeffEntry> {
        self.coeffs
            .iter()
            .map(|(q, m)| CoeffEntry {
                q: *q,
                re: (0..self.n).map(|r| (0..self.n).map(|c| m[(r, c)].re).collect()).collect(),
                im: Some((0..self.n).map(|r| (0..self.n).map(|c| m[(r, c)].im).collect()).collect()),
            })
            .collect()
    }

    pub fn from_entries(entries: &[CoeffEntry]) -> Result<Self> {
        let n = entries.first().map(|e| e.re.len()).ok_or_else(|| Error::Config("empty loop".into()))?;
        let mut coeffs = BTreeMap::new();
        for e in entries {
            let im = e.im.clone().unwrap_or_else(|| vec![vec![0.0; n]; n]);
            if e.re.len() != n || im.len() != n || e.re.iter().chain(&im).any(|row| row.len() != n) {
                return Err(Error::Config(format!("coefficient at q={} is not {n}x{n}", e.q)));
            }
            let m = CMat::from_fn(n, n, |r, c| c64(e.re[r][c], im[r][c]));
            *coeffs.entry(e.q).or_insert_with(|| CMat::zeros(n, n)) += m;
        }
        let lp = Self { n, coeffs };
        // a real loop needs σ_{−q} = conj(σ_q)
        for (q, m) in &lp.coeffs {
            let partner = lp.coeff(-q).map(|z| z.conj());
            if crate::linalg::max_abs_diff(m, &partner) > 1e-12 {
                return Err(Error::Config(format!("coefficients at ±{q} are not conjugate")));
            }
        }
        Ok(lp)
    }
}

#[derive(Clone, Debug)]
pub struct MultiplicationOperator {
    pub op: TruncatedOperator,
    /// Frobenius norm of the Fourier blocks dropped by the window.
    pub leakage: f64,
}

/// Block `(p, q)` equals `σ_{p−q}`; blocks landing outside `|p| ≤ Q` are
/// dropped and their mass reported as leakage.
pub fn multiplication_operator(
    basis: ModeBasis,
    sigma: &FourierLoop,
    strict: bool,
) -> Result<MultiplicationOperator> {
    if sigma.n != basis.n {
        return Err(Error::Shape(format!("loop is {0}x{0}, basis fiber {1}", sigma.n, basis.n)));
    }
    let n = basis.n;
    let cut = basis.cutoff as i64;
    let mut m = CMat::zeros(basis.dim(), basis.dim());
    let mut leak_sq = 0.0;
    for q in -cut..=cut {
        for (s, block) in &sigma.coeffs {
            let p = q + s;
            if basis.contains(p) {
                let (r0, c0) = (basis.index(p, 0), basis.index(q, 0));
                m.view_mut((r0, c0), (n, n)).copy_from(block);
            } else {
                leak_sq += block.iter().map(|z| z.norm_sqr()).sum::<f64>();
            }
        }
    }
    let leakage = leak_sq.sqrt();
    if strict && leakage > LEAKAGE_TOL {
        return Err(Error::BandTooWide { leakage });
    }
    // without leakage the truncated operator inherits orthogonality from the
    // loop, so the dense unitarity check of `TruncatedOperator::new` is skipped
    let real = basis.reality_defect(&m) < FLAG_TOL;
    let orthogonal = real && sigma.orthogonality_defect() < FLAG_TOL && leakage < LEAKAGE_TOL;
    let op = TruncatedOperator { basis, matrix: m, real, orthogonal };
    Ok(MultiplicationOperator { op, leakage })
}

/// `‖[J, g]‖₂`.
pub fn hs_commutator_norm(j: &CMat, g: &CMat) -> f64 {
    // J is block diagonal with at most n entries per column
    let sj = crate::linalg::SparseMat::from_dense(j);
    hs_norm(&(sj.mul_dense(g) - sj.dense_mul(g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn constant_loop_is_block_diagonal() {
        let basis = ModeBasis::new(2, 2);
        let a = DMatrix::from_row_slice(2, 2, &[0.6, -0.8, 0.8, 0.6]);
        let mo = multiplication_operator(basis, &FourierLoop::constant(a.clone()), true).unwrap();
        assert_eq!(mo.leakage, 0.0);
        assert!(mo.op.orthogonal);
        for q in -2..=2 {
            let i = basis.index(q, 0);
            let blk = mo.op.matrix.view((i, i), (2, 2)).into_owned();
            assert!(max_abs_diff(&blk, &a.map(|x| c64(x, 0.0))) < 1e-15);
        }
    }

    #[test]
    fn rotation_loop_blocks_and_leakage() {
        let basis = ModeBasis::new(2, 1);
        let rot = FourierLoop::plane_rotation(2, 0, 1, 1);
        assert!(rot.orthogonality_defect() < 1e-14);
        let mo = multiplication_operator(basis, &rot, false).unwrap();
        assert!(mo.leakage > 0.1);
        assert!(!mo.op.orthogonal);
        assert!(mo.op.real);
        assert!(multiplication_operator(basis, &rot, true).is_err());
        // block (1, 0) is σ₁, block (1, -1) vanishes
        let b10 = mo.op.matrix.view((basis.index(1, 0), basis.index(0, 0)), (2, 2)).into_owned();
        assert!(max_abs_diff(&b10, &rot.coeff(1)) < 1e-15);
        let b1m = mo.op.matrix.view((basis.index(1, 0), basis.index(-1, 0)), (2, 2)).into_owned();
        assert!(hs_norm(&b1m) < 1e-15);
    }

    #[test]
    fn fft_recovers_rotation_coefficients() {
        let rot = FourierLoop::plane_rotation(4, 1, 3, 1);
        let samples: Vec<_> = (0..16).map(|k| rot.eval(2.0 * std::f64::consts::PI * k as f64 / 16.0)).collect();
        let back = FourierLoop::from_samples(&samples).unwrap();
        assert_eq!(back.band(), 1);
        for q in -1..=1 {
            assert!(max_abs_diff(&back.coeff(q), &rot.coeff(q)) < 1e-14);
        }
    }

    #[test]
    fn entries_round_trip() {
        let rot = FourierLoop::plane_rotation(2, 0, 1, 2);
        assert_eq!(FourierLoop::from_entries(&rot.to_entries()).unwrap(), rot);
    }
}
