use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `a + b i + c j + d k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub const fn real(a: f64) -> Self {
        Self::new(a, 0.0, 0.0, 0.0)
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn conj(self) -> Self {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sqr(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// `q̄ / |q|²`; `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        let n = self.norm_sqr();
        (n > 0.0).then(|| self.conj().scale(1.0 / n))
    }

    /// `q / |q|`, the map ρ.
    pub fn normalize(self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-12 {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, q: Self) -> Self {
        let p = self;
        Self::new(
            p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
            p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
            p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
            p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

/// Matrix of `h ↦ u h` on ℍ ≅ ℝ⁴ in the basis `1, i, j, k`.
pub fn so4_of_quat(u: Quaternion) -> Result<Matrix4<f64>> {
    let n = u.norm();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NonUnit(n));
    }
    let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let mut m = Matrix4::zeros();
    for (col, e) in basis.iter().enumerate() {
        let img = (u * *e).to_array();
        for row in 0..4 {
            m[(row, col)] = img[row];
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_relations() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        assert_eq!(i * j, k);
        assert_eq!(i * j * k, Quaternion::real(-1.0));
        assert_eq!(j * i, -k);
        let p = Quaternion::new(2.0, 3.0, 0.0, 0.0);
        assert_eq!(p * p.conj(), Quaternion::real(13.0));
    }

    #[test]
    fn left_multiplication_by_i() {
        let m = so4_of_quat(Quaternion::I).unwrap();
        // columns are images of 1, i, j, k: i, -1, k, -j
        let expected = Matrix4::new(
            0.0, -1.0, 0.0, 0.0, //
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, -1.0, //
            0.0, 0.0, 1.0, 0.0,
        );
        assert_eq!(m, expected);
        assert!(so4_of_quat(Quaternion::new(1.0, 1.0, 0.0, 0.0)).is_err());
    }
}
