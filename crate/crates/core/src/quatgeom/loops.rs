use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::sphere::{rotate_r_s4, theta_tilde_n, theta_tilde_s, HPair, S4Point};
use super::Quaternion;
use crate::{Error, Result};

/// Values a loop can take, viewed as vectors of real components.
pub trait LoopValue: Copy {
    const DIM: usize;
    fn components(&self) -> Vec<f64>;
    fn from_components(c: &[f64]) -> Self;
}

impl LoopValue for Quaternion {
    const DIM: usize = 4;
    fn components(&self) -> Vec<f64> {
        self.to_array().to_vec()
    }
    fn from_components(c: &[f64]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

impl LoopValue for S4Point {
    const DIM: usize = 5;
    fn components(&self) -> Vec<f64> {
        self.to_array().to_vec()
    }
    fn from_components(c: &[f64]) -> Self {
        S4Point { z: Quaternion::new(c[0], c[1], c[2], c[3]), y: c[4] }
    }
}

impl LoopValue for HPair {
    const DIM: usize = 8;
    fn components(&self) -> Vec<f64> {
        let mut v = self.q0.components();
        v.extend(self.q1.components());
        v
    }
    fn from_components(c: &[f64]) -> Self {
        HPair::new(Quaternion::from_components(&c[..4]), Quaternion::from_components(&c[4..8]))
    }
}

/// A loop sampled at `s_k = 2πk/N`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampledLoop<T> {
    pub values: Vec<T>,
}

impl<T: LoopValue> SampledLoop<T> {
    pub fn from_fn(samples: usize, f: impl Fn(f64) -> Result<T>) -> Result<Self> {
        check_samples(samples)?;
        let values = (0..samples).map(|k| f(param(k, samples))).collect::<Result<_>>()?;
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn params(&self) -> Vec<f64> {
        (0..self.len()).map(|k| param(k, self.len())).collect()
    }
}

fn param(k: usize, n: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

fn check_samples(n: usize) -> Result<()> {
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::SampleCount(n));
    }
    Ok(())
}

/// `c_q = N⁻¹ Σ_k v(s_k) e^{-i q s_k}` per real component, for
/// `q ∈ (-N/2, N/2]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourierCoefficients {
    pub samples: usize,
    pub dim: usize,
    /// `coeffs[k][c]`, `k` in FFT order.
    coeffs: Vec<Vec<Complex64>>,
}

impl FourierCoefficients {
    fn slot(&self, q: i64) -> Option<usize> {
        let n = self.samples as i64;
        if q <= -n / 2 || q > n / 2 {
            return None;
        }
        Some(q.rem_euclid(n) as usize)
    }

    /// Coefficient vector at frequency `q` (zero outside the resolved range).
    pub fn coeff(&self, q: i64) -> Vec<Complex64> {
        match self.slot(q) {
            Some(k) => self.coeffs[k].clone(),
            None => vec![Complex64::new(0.0, 0.0); self.dim],
        }
    }

    pub fn frequencies(&self) -> impl Iterator<Item = i64> {
        let n = self.samples as i64;
        (-n / 2 + 1)..=(n / 2)
    }

    /// Largest `|q|` whose coefficient exceeds `tol`.
    pub fn band(&self, tol: f64) -> usize {
        self.frequencies()
            .filter(|&q| self.coeff(q).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() > tol)
            .map(|q| q.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// Real samples recovered by the inverse transform.
    pub fn inverse(&self) -> Vec<Vec<f64>> {
        let n = self.samples;
        let mut planner = FftPlanner::new();
        let ifft = planner.plan_fft_inverse(n);
        let mut out = vec![vec![0.0; self.dim]; n];
        for c in 0..self.dim {
            let mut buf: Vec<Complex64> = self.coeffs.iter().map(|row| row[c]).collect();
            ifft.process(&mut buf);
            for k in 0..n {
                out[k][c] = buf[k].re;
            }
        }
        out
    }
}

pub fn fourier_of_loop<T: LoopValue>(lp: &SampledLoop<T>) -> Result<FourierCoefficients> {
    let n = lp.len();
    check_samples(n)?;
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); T::DIM]; n];
    let rows: Vec<Vec<f64>> = lp.values.iter().map(|v| v.components()).collect();
    for c in 0..T::DIM {
        let mut buf: Vec<Complex64> = rows.iter().map(|r| Complex64::new(r[c], 0.0)).collect();
        fft.process(&mut buf);
        for k in 0..n {
            coeffs[k][c] = buf[k] / n as f64;
        }
    }
    Ok(FourierCoefficients { samples: n, dim: T::DIM, coeffs })
}

fn check_unit(x: Quaternion) -> Result<()> {
    let n = x.norm();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NonUnit(n));
    }
    Ok(())
}

/// `β_x(s) = (1+x)/2 + cos s (1-x)/2 + sin s |(1-x)/2| N`.
pub fn beta_at(x: Quaternion, s: f64) -> S4Point {
    let plus = (Quaternion::ONE + x).scale(0.5);
    let minus = (Quaternion::ONE - x).scale(0.5);
    S4Point { z: plus + minus.scale(s.cos()), y: s.sin() * minus.norm() }
}

pub fn beta_loop(x: Quaternion, samples: usize) -> Result<SampledLoop<S4Point>> {
    check_unit(x)?;
    SampledLoop::from_fn(samples, |s| Ok(beta_at(x, s)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `η_i`, built from the chart missing `N`; its hole is `x = i`.
    PlusI,
    /// `η_{-i}`, built from the chart missing `S`; its hole is `x = -i`.
    MinusI,
}

pub fn eta_at(x: Quaternion, side: Side, s: f64) -> Result<HPair> {
    let p = rotate_r_s4(beta_at(x, s));
    match side {
        Side::PlusI => theta_tilde_n(p).map_err(|_| Error::ChartHole("eta_i")),
        Side::MinusI => theta_tilde_s(p).map_err(|_| Error::ChartHole("eta_-i")),
    }
}

pub fn eta_section(x: Quaternion, side: Side, samples: usize) -> Result<SampledLoop<HPair>> {
    check_unit(x)?;
    let hole = match side {
        Side::PlusI => Quaternion::I,
        Side::MinusI => -Quaternion::I,
    };
    if x.dist(hole) < 1e-12 {
        return Err(Error::ChartHole(if side == Side::PlusI { "eta_i" } else { "eta_-i" }));
    }
    SampledLoop::from_fn(samples, |s| eta_at(x, side, s))
}

/// `r(x)(s) = ρ(π_ℍ(R(β_x(s))))`.
pub fn transition_at(x: Quaternion, s: f64) -> Result<Quaternion> {
    rotate_r_s4(beta_at(x, s)).z.normalize()
}

pub fn transition_loop_r(x: Quaternion, samples: usize) -> Result<SampledLoop<Quaternion>> {
    check_unit(x)?;
    SampledLoop::from_fn(samples, |s| transition_at(x, s))
}
