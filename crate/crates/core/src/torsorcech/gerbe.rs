use std::collections::BTreeMap;

use num_complex::Complex64;

use super::cochain::{CechCochain, CochainValue};
use super::cover::IndexedCover;
use super::torsor::{torsor_pair, PhaseElement, TorsorTag};
use super::winding::unwrap_phases;
use crate::fock::relative_phase;
use crate::linalg::{identity, max_abs_diff, CMat};
use crate::{Error, Result};
use std::sync::Arc;

/// Fibrewise structure of a bundle gerbe `P → Y^[2]` as far as the DD class
/// needs it: multiplication `P_(a,b) ⊗ P_(b,c) → P_(a,c)`, inverses, and the
/// U(1) pairing on each fibre.
pub trait Gerbe {
    type Section: Clone;

    fn multiply(&self, ab: &Self::Section, bc: &Self::Section) -> Result<Self::Section>;

    fn inverse(&self, ab: &Self::Section) -> Self::Section;

    /// `z` with `s = z t`.
    fn pair(&self, s: &Self::Section, t: &Self::Section) -> Result<Complex64>;

    /// Distance of a section of `P_(a,a)` from the identity.
    fn identity_defect(&self, aa: &Self::Section) -> f64;
}

/// The canonical trivial gerbe `P_(a,b) = T_a ⊗ T_b*` built from a U(1)
/// torsor bundle `T`. Multiplication contracts the middle `T_b* ⊗ T_b`.
#[derive(Clone, Copy, Debug, Default)]
pub struct PhaseGerbe;

fn split(tag: &TorsorTag) -> Result<(TorsorTag, TorsorTag)> {
    match tag {
        TorsorTag::Tensor(a, b) => match &**b {
            TorsorTag::Dual(inner) => Ok(((**a).clone(), (**inner).clone())),
            _ => Err(Error::TagMismatch(tag.to_string(), "a ⊗ b*".into())),
        },
        _ => Err(Error::TagMismatch(tag.to_string(), "a ⊗ b*".into())),
    }
}

impl PhaseGerbe {
    /// `t ⊗ s*`.
    pub fn section(t: &PhaseElement, s: &PhaseElement) -> PhaseElement {
        PhaseElement { value: t.value * s.value.conj(), tag: t.tag.tensor(&s.tag.dual()) }
    }
}

impl Gerbe for PhaseGerbe {
    type Section = PhaseElement;

    fn multiply(&self, ab: &PhaseElement, bc: &PhaseElement) -> Result<PhaseElement> {
        let (a, b) = split(&ab.tag)?;
        let (b2, c) = split(&bc.tag)?;
        if b != b2 {
            return Err(Error::TagMismatch(b.to_string(), b2.to_string()));
        }
        Ok(PhaseElement { value: ab.value * bc.value, tag: a.tensor(&c.dual()) })
    }

    fn inverse(&self, ab: &PhaseElement) -> PhaseElement {
        let (a, b) = split(&ab.tag).expect("gerbe section tag");
        PhaseElement { value: ab.value.conj(), tag: b.tensor(&a.dual()) }
    }

    fn pair(&self, s: &PhaseElement, t: &PhaseElement) -> Result<Complex64> {
        torsor_pair(s, t)
    }

    fn identity_defect(&self, aa: &PhaseElement) -> f64 {
        match split(&aa.tag) {
            Ok((a, b)) if a == b => (aa.value - 1.0).norm(),
            _ => f64::INFINITY,
        }
    }
}

/// Fibres are the intertwiner torsors between Fock representations;
/// a section over `(a, b)` is a unitary from `F_b` to `F_a` and
/// multiplication is composition.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntertwinerGerbe;

impl Gerbe for IntertwinerGerbe {
    type Section = CMat;

    fn multiply(&self, ab: &CMat, bc: &CMat) -> Result<CMat> {
        if ab.ncols() != bc.nrows() {
            return Err(Error::Shape(format!("{}x{} ∘ {}x{}", ab.nrows(), ab.ncols(), bc.nrows(), bc.ncols())));
        }
        Ok(ab * bc)
    }

    fn inverse(&self, ab: &CMat) -> CMat {
        ab.adjoint()
    }

    fn pair(&self, s: &CMat, t: &CMat) -> Result<Complex64> {
        if s.shape() != t.shape() {
            return Err(Error::Shape("intertwiners of different shapes".into()));
        }
        Ok(relative_phase(s, t))
    }

    fn identity_defect(&self, aa: &CMat) -> f64 {
        if aa.nrows() != aa.ncols() {
            return f64::INFINITY;
        }
        max_abs_diff(aa, &identity(aa.nrows()))
    }
}

/// Sections `σ_ij` sampled at the points of `U_i ∩ U_j` (cover order).
pub type SectionTable<S> = BTreeMap<(i64, i64), Vec<S>>;

const INVERSE_TOL: f64 = 1e-9;

/// DD cocycle `g_ijk` from `m(σ_ij ⊗ σ_jk) = g_ijk σ_ik`. Sections for
/// `i < j` are required; a supplied `σ_ji` must be the inverse of `σ_ij`,
/// a missing one is taken to be.
pub fn dd_cocycle<G: Gerbe>(
    gerbe: &G,
    cover: Arc<IndexedCover>,
    sections: &SectionTable<G::Section>,
) -> Result<CechCochain> {
    let mut full: SectionTable<G::Section> = BTreeMap::new();
    for t in cover.nerve(1) {
        let (i, j) = (t[0], t[1]);
        let n = cover.intersection(&t).len();
        let ij = sections.get(&(i, j)).ok_or_else(|| Error::NerveIncomplete(t.clone()))?;
        if ij.len() != n {
            return Err(Error::GridMismatch(format!("σ{t:?} has {} samples for {n} points", ij.len())));
        }
        let ji = match sections.get(&(j, i)) {
            Some(ji) => {
                if ji.len() != n {
                    return Err(Error::GridMismatch(format!("σ({j}, {i}) has {} samples", ji.len())));
                }
                let mut worst: f64 = 0.0;
                for (a, b) in ij.iter().zip(ji) {
                    worst = worst.max(gerbe.identity_defect(&gerbe.multiply(a, b)?));
                }
                if worst > INVERSE_TOL {
                    return Err(Error::InverseConvention((i, j), worst));
                }
                ji.clone()
            }
            None => ij.iter().map(|s| gerbe.inverse(s)).collect(),
        };
        full.insert((i, j), ij.clone());
        full.insert((j, i), ji);
    }
    let at = |i: i64, j: i64, p: usize| -> &G::Section {
        let pts = cover.intersection(&[i, j]);
        let k = pts.binary_search(&p).expect("point of a sub-intersection");
        &full[&(i, j)][k]
    };
    let mut entries = BTreeMap::new();
    for t in cover.nerve(2) {
        let (i, j, k) = (t[0], t[1], t[2]);
        let mut angles = Vec::new();
        for p in cover.intersection(&t) {
            let prod = gerbe.multiply(at(i, j, p), at(j, k, p))?;
            angles.push(gerbe.pair(&prod, at(i, k, p))?.arg());
        }
        entries.insert(t, CochainValue::Sampled(unwrap_phases(&angles)));
    }
    Ok(CechCochain { cover, degree: 2, entries })
}

#[cfg(test)]
mod tests {
    use super::super::cochain::cech_coboundary;
    use super::*;
    use rand::Rng;

    fn cover() -> Arc<IndexedCover> {
        let mut sets = BTreeMap::new();
        sets.insert(0, (0..14).collect());
        sets.insert(1, (5..20).collect());
        sets.insert(2, (9..24).chain(0..3).collect());
        sets.insert(3, (11..18).collect());
        Arc::new(IndexedCover::new("gerbe-test", 24, sets))
    }

    fn eta(i: i64, p: usize) -> PhaseElement {
        PhaseElement::from_angle(0.37 * (i as f64 + 1.0) * p as f64 + i as f64, TorsorTag::named("T"))
    }

    fn trivial_sections(c: &IndexedCover) -> SectionTable<PhaseElement> {
        let mut s = BTreeMap::new();
        for t in c.nerve(1) {
            let v = c.intersection(&t).iter().map(|p| PhaseGerbe::section(&eta(t[0], *p), &eta(t[1], *p))).collect();
            s.insert((t[0], t[1]), v);
        }
        s
    }

    #[test]
    fn canonical_trivial_gerbe_has_trivial_cocycle() {
        let c = cover();
        let g = dd_cocycle(&PhaseGerbe, c.clone(), &trivial_sections(&c)).unwrap();
        assert!(!g.entries.is_empty());
        assert!(g.identity_defect().unwrap() < 1e-12);
    }

    #[test]
    fn rescaling_changes_by_coboundary() {
        let c = cover();
        let mut rng = crate::modes::random::rng(11);
        let h = CechCochain::from_fn(c.clone(), 1, |_, pts| {
            super::super::cochain::CochainValue::Sampled(pts.iter().map(|_| rng.gen_range(-3.0..3.0)).collect())
        });
        let mut s = trivial_sections(&c);
        for ((i, j), v) in s.iter_mut() {
            let a = h.angles_at(&[*i, *j]).unwrap();
            for (x, ang) in v.iter_mut().zip(a) {
                *x = x.act(Complex64::from_polar(1.0, ang));
            }
        }
        let g = dd_cocycle(&PhaseGerbe, c.clone(), &s).unwrap();
        let dh = cech_coboundary(&h).unwrap();
        assert!(g.distance(&dh).unwrap() < 1e-12);
        assert!(cech_coboundary(&g).unwrap().identity_defect().unwrap() < 1e-12);
    }

    #[test]
    fn inverse_convention_is_enforced() {
        let c = cover();
        let mut s = trivial_sections(&c);
        let bad: Vec<PhaseElement> = s[&(0, 1)].iter().map(|x| PhaseGerbe.inverse(x).act(Complex64::new(0.0, 1.0))).collect();
        s.insert((1, 0), bad);
        assert!(matches!(dd_cocycle(&PhaseGerbe, c, &s), Err(Error::InverseConvention((0, 1), _))));
    }
}
