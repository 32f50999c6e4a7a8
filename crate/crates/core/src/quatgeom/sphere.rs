use serde::{Deserialize, Serialize};

use super::Quaternion;
use crate::{Error, Result};

const SPHERE_TOL: f64 = 1e-12;

/// Point `(z, y)` of `S⁴ ⊂ ℍ ⊕ ℝ`. `N = (0, 1)`, `S = (0, -1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct S4Point {
    pub z: Quaternion,
    pub y: f64,
}

impl S4Point {
    pub const NORTH: Self = Self { z: Quaternion::ZERO, y: 1.0 };
    pub const SOUTH: Self = Self { z: Quaternion::ZERO, y: -1.0 };

    pub fn new(z: Quaternion, y: f64) -> Result<Self> {
        let defect = (z.norm_sqr() + y * y - 1.0).abs();
        if defect > SPHERE_TOL {
            return Err(Error::NotOnSphere(defect));
        }
        Ok(Self { z, y })
    }

    /// Radially project a nonzero vector of ℝ⁵ onto the sphere.
    pub fn project(z: Quaternion, y: f64) -> Self {
        let n = (z.norm_sqr() + y * y).sqrt();
        Self { z: z.scale(1.0 / n), y: y / n }
    }

    pub fn to_array(self) -> [f64; 5] {
        let [a, b, c, d] = self.z.to_array();
        [a, b, c, d, self.y]
    }

    pub fn dist(self, other: Self) -> f64 {
        (self.z.dist(other.z).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// Vector of ℍ², with ℍ acting on the right for projective classes and on the
/// left for the transition functions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HPair {
    pub q0: Quaternion,
    pub q1: Quaternion,
}

impl HPair {
    pub fn new(q0: Quaternion, q1: Quaternion) -> Self {
        Self { q0, q1 }
    }

    pub fn norm(self) -> f64 {
        (self.q0.norm_sqr() + self.q1.norm_sqr()).sqrt()
    }

    pub fn left_mul(self, u: Quaternion) -> Self {
        Self::new(u * self.q0, u * self.q1)
    }

    pub fn right_mul(self, w: Quaternion) -> Self {
        Self::new(self.q0 * w, self.q1 * w)
    }

    pub fn dist(self, other: Self) -> f64 {
        (self.q0.dist(other.q0).powi(2) + self.q1.dist(other.q1).powi(2)).sqrt()
    }
}

/// Point of ℍP¹ stored as a unit pair whose first nonzero coordinate is real
/// positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HP1Point {
    pair: HPair,
}

impl HP1Point {
    pub fn new(q0: Quaternion, q1: Quaternion) -> Result<Self> {
        let n = HPair::new(q0, q1).norm();
        if n < 1e-300 {
            return Err(Error::ZeroQuaternion);
        }
        let mut p = HPair::new(q0.scale(1.0 / n), q1.scale(1.0 / n));
        // right-multiply by the inverse phase of the leading coordinate
        let lead = if p.q0.norm() > 1e-12 { p.q0 } else { p.q1 };
        p = p.right_mul(lead.conj().scale(1.0 / lead.norm()));
        Ok(Self { pair: p })
    }

    pub fn pair(&self) -> HPair {
        self.pair
    }

    /// `1 - |⟨p, q⟩_ℍ|`, zero iff the two lines coincide. Stable even where
    /// the leading coordinate is tiny and the normal form is ill-conditioned.
    pub fn distance(&self, other: &Self) -> f64 {
        let (p, q) = (self.pair, other.pair);
        let ip = p.q0.conj() * q.q0 + p.q1.conj() * q.q1;
        (1.0 - ip.norm()).max(0.0)
    }
}

pub fn stereo_north(p: S4Point) -> Result<Quaternion> {
    if (1.0 - p.y).abs() < SPHERE_TOL {
        return Err(Error::Pole("north"));
    }
    Ok(p.z.scale(1.0 / (1.0 - p.y)))
}

pub fn stereo_south(p: S4Point) -> Result<Quaternion> {
    if (1.0 + p.y).abs() < SPHERE_TOL {
        return Err(Error::Pole("south"));
    }
    Ok(p.z.conj().scale(1.0 / (1.0 + p.y)))
}

/// `(z, y) ↦ (1 - y, z)` normalised; a lift of `θ` defined away from `N`.
pub fn theta_tilde_n(p: S4Point) -> Result<HPair> {
    let v = HPair::new(Quaternion::real(1.0 - p.y), p.z);
    let n = v.norm();
    if n < 1e-9 {
        return Err(Error::Pole("north"));
    }
    Ok(HPair::new(v.q0.scale(1.0 / n), v.q1.scale(1.0 / n)))
}

/// `(z, y) ↦ (z̄, 1 + y)` normalised; a lift of `θ` defined away from `S`.
pub fn theta_tilde_s(p: S4Point) -> Result<HPair> {
    let v = HPair::new(p.z.conj(), Quaternion::real(1.0 + p.y));
    let n = v.norm();
    if n < 1e-9 {
        return Err(Error::Pole("south"));
    }
    Ok(HPair::new(v.q0.scale(1.0 / n), v.q1.scale(1.0 / n)))
}

/// The diffeomorphism `S⁴ → ℍP¹`, using whichever chart is far from its pole.
pub fn theta_s4_to_hp1(p: S4Point) -> HP1Point {
    let v = if p.y <= 0.0 { theta_tilde_n(p) } else { theta_tilde_s(p) }
        .expect("chosen chart is away from its pole");
    HP1Point::new(v.q0, v.q1).expect("unit pair")
}

/// Quarter turn in the `(i, y)` plane, `(i, 0) ↦ (0, 1) ↦ (-i, 0)`, fixing
/// the `1, j, k` components.
pub fn rotate_r_s4(p: S4Point) -> S4Point {
    let z = Quaternion::new(p.z.a, -p.y, p.z.c, p.z.d);
    S4Point { z, y: p.z.b }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charts_on_easy_points() {
        assert_eq!(stereo_north(S4Point::SOUTH).unwrap(), Quaternion::ZERO);
        let p = S4Point::new(Quaternion::ONE, 0.0).unwrap();
        assert_eq!(stereo_north(p).unwrap(), Quaternion::ONE);
        assert!(matches!(stereo_north(S4Point::NORTH), Err(Error::Pole(_))));
        assert!(matches!(stereo_south(S4Point::SOUTH), Err(Error::Pole(_))));
    }

    #[test]
    fn theta_at_poles() {
        let s = theta_s4_to_hp1(S4Point::SOUTH).pair();
        assert!(s.dist(HPair::new(Quaternion::ONE, Quaternion::ZERO)) < 1e-15);
        let n = theta_s4_to_hp1(S4Point::NORTH).pair();
        assert!(n.dist(HPair::new(Quaternion::ZERO, Quaternion::ONE)) < 1e-15);
    }

    #[test]
    fn rotation_moves_i_to_north() {
        let p = S4Point::new(Quaternion::I, 0.0).unwrap();
        assert!(rotate_r_s4(p).dist(S4Point::NORTH) < 1e-15);
        let q = S4Point::new(Quaternion::J, 0.0).unwrap();
        assert_eq!(rotate_r_s4(q), q);
        assert!(rotate_r_s4(S4Point::NORTH).dist(S4Point::new(-Quaternion::I, 0.0).unwrap()) < 1e-15);
    }
}
