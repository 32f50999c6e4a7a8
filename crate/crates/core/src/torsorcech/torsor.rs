use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fock::FockVector;
use crate::{Error, Result};

/// Identifies the torsor an element lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TorsorTag {
    Named(String),
    Tensor(Box<TorsorTag>, Box<TorsorTag>),
    Dual(Box<TorsorTag>),
}

impl TorsorTag {
    pub fn named(s: &str) -> Self {
        Self::Named(s.to_string())
    }

    /// `T*`, with `T** = T`.
    pub fn dual(&self) -> Self {
        match self {
            Self::Dual(inner) => (**inner).clone(),
            other => Self::Dual(Box::new(other.clone())),
        }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self::Tensor(Box::new(self.clone()), Box::new(other.clone()))
    }
}

impl std::fmt::Display for TorsorTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Named(s) => write!(f, "{s}"),
            Self::Tensor(a, b) => write!(f, "({a} ⊗ {b})"),
            Self::Dual(a) => write!(f, "{a}*"),
        }
    }
}

/// An element of a U(1)-torsor, recorded by its phase against a fixed
/// reference element of that torsor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseElement {
    pub value: Complex64,
    pub tag: TorsorTag,
}

impl PhaseElement {
    pub fn new(value: Complex64, tag: TorsorTag) -> Result<Self> {
        let n = value.norm();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnit(n));
        }
        Ok(Self { value, tag })
    }

    pub fn from_angle(angle: f64, tag: TorsorTag) -> Self {
        Self { value: Complex64::from_polar(1.0, angle), tag }
    }

    /// `z · t`.
    pub fn act(&self, z: Complex64) -> Self {
        Self { value: self.value * z, tag: self.tag.clone() }
    }
}

fn same_tag(a: &TorsorTag, b: &TorsorTag) -> Result<()> {
    if a != b {
        return Err(Error::TagMismatch(a.to_string(), b.to_string()));
    }
    Ok(())
}

/// `z_{ts}` with `t = z_{ts} s`.
pub fn torsor_pair(t: &PhaseElement, s: &PhaseElement) -> Result<Complex64> {
    same_tag(&t.tag, &s.tag)?;
    Ok(t.value * s.value.conj())
}

pub fn torsor_tensor(t: &PhaseElement, s: &PhaseElement) -> PhaseElement {
    PhaseElement { value: t.value * s.value, tag: t.tag.tensor(&s.tag) }
}

/// `t*`, so that `(zt)* = z̄ t*`.
pub fn torsor_dual(t: &PhaseElement) -> PhaseElement {
    PhaseElement { value: t.value.conj(), tag: t.tag.dual() }
}

/// Canonical map `s* ⊗ t ↦ z_{ts}`.
pub fn evaluate_dual(s_star: &PhaseElement, t: &PhaseElement) -> Result<Complex64> {
    same_tag(&s_star.tag, &t.tag.dual())?;
    Ok(s_star.value * t.value)
}

/// `⟨f ⊗ t, g ⊗ u⟩ = ⟨f, g⟩ ⟨t, u⟩` with `⟨t, u⟩ = z_{tu}`.
pub fn rep_tensor_torsor(
    f: &FockVector,
    t: &PhaseElement,
    g: &FockVector,
    u: &PhaseElement,
) -> Result<Complex64> {
    Ok(f.inner(g) * torsor_pair(t, u)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_and_duals() {
        let tag = TorsorTag::named("T");
        let t = PhaseElement::from_angle(0.3, tag.clone());
        let z = Complex64::from_polar(1.0, 1.1);
        assert!((torsor_pair(&t, &t).unwrap() - 1.0).norm() < 1e-15);
        assert!((torsor_pair(&t.act(z), &t).unwrap() - z).norm() < 1e-15);
        assert!((evaluate_dual(&torsor_dual(&t), &t).unwrap() - 1.0).norm() < 1e-15);
        assert_eq!(torsor_dual(&torsor_dual(&t)), t);
        let zt = torsor_dual(&t.act(z));
        assert!((zt.value - z.conj() * torsor_dual(&t).value).norm() < 1e-15);
        let other = PhaseElement::from_angle(0.0, TorsorTag::named("S"));
        assert!(matches!(torsor_pair(&t, &other), Err(Error::TagMismatch(_, _))));
    }
}
