use std::collections::BTreeMap;
use std::sync::Arc;

use super::cochain::{cech_coboundary, CechCochain, CochainValue};
use super::cover::IndexedCover;
use super::winding::wrap_angle;
use crate::{Error, Result};

/// Heights of the sample rows of `ΣX = X × [−1, 1] / ends`, excluding the
/// two cone points. Row 2 is `X` itself.
pub const LEVELS: [f64; 5] = [-0.75, -0.375, 0.0, 0.375, 0.75];
const EQUATOR_ROW: usize = 2;
/// Row shared by `U^Σ_{−1}` and the extruded sets.
const LOWER_ROW: usize = 1;

const SUPPORT_TOL: f64 = 1e-10;

/// The suspension cover `U^Σ` of `ΣX` built from a cover `U` of `X`,
/// together with the sub-covers `r_{−1}^* U^Σ`, `r_1^* U^Σ` (the two cones)
/// and `U^Σ ∩ X`, all sharing the index set `{±1} ∪ I`.
///
/// Point numbering: 0 is the bottom cone point, `1 + row·N + x` is `x ∈ X`
/// at height `LEVELS[row]`, and `1 + 5N` is the top cone point.
#[derive(Clone, Debug)]
pub struct SuspensionCover {
    pub base: Arc<IndexedCover>,
    pub sigma: Arc<IndexedCover>,
    pub lower: Arc<IndexedCover>,
    pub upper: Arc<IndexedCover>,
    pub equator: Arc<IndexedCover>,
}

impl SuspensionCover {
    pub fn point(&self, row: usize, x: usize) -> usize {
        1 + row * self.base.n_points + x
    }

    /// Row and base point of a non-cone point.
    pub fn locate(&self, p: usize) -> Option<(usize, usize)> {
        let n = self.base.n_points;
        if p == 0 || p > LEVELS.len() * n {
            return None;
        }
        Some(((p - 1) / n, (p - 1) % n))
    }

    fn in_lower_cone(&self, p: usize) -> bool {
        p == 0 || matches!(self.locate(p), Some((r, _)) if r <= EQUATOR_ROW)
    }
}

/// Caps `U^Σ_{−1} = {t < −1/4}`, `U^Σ_1 = {t > 1/4}` and extruded sets
/// `U^Σ_j = U_j × (−1/2, 1/2)`. The base cover may not use the indices ±1.
pub fn build_suspension_cover(base: &IndexedCover) -> Result<SuspensionCover> {
    for r in [-1, 1] {
        if base.contains_index(r) {
            return Err(Error::ReservedIndex(r));
        }
    }
    let n = base.n_points;
    let total = 2 + LEVELS.len() * n;
    let pt = |row: usize, x: usize| 1 + row * n + x;
    let rows = |pred: &dyn Fn(f64) -> bool| -> Vec<usize> {
        (0..LEVELS.len()).filter(|r| pred(LEVELS[*r])).collect()
    };
    let mut sets = BTreeMap::new();
    let mut bottom = vec![0];
    for r in rows(&|t| t < -0.25) {
        bottom.extend((0..n).map(|x| pt(r, x)));
    }
    let mut top = vec![total - 1];
    for r in rows(&|t| t > 0.25) {
        top.extend((0..n).map(|x| pt(r, x)));
    }
    sets.insert(-1, bottom);
    sets.insert(1, top);
    let middle = rows(&|t| t.abs() < 0.5);
    for (j, pts) in &base.sets {
        let ext = middle.iter().flat_map(|r| pts.iter().map(move |x| pt(*r, *x))).collect();
        sets.insert(*j, ext);
    }
    let sigma = IndexedCover::new(&format!("Σ{}", base.name), total, sets);
    let lower_pts: Vec<usize> = std::iter::once(0).chain((0..=EQUATOR_ROW).flat_map(|r| (0..n).map(move |x| pt(r, x)))).collect();
    let upper_pts: Vec<usize> =
        (EQUATOR_ROW..LEVELS.len()).flat_map(|r| (0..n).map(move |x| pt(r, x))).chain(std::iter::once(total - 1)).collect();
    let eq_pts: Vec<usize> = (0..n).map(|x| pt(EQUATOR_ROW, x)).collect();
    Ok(SuspensionCover {
        lower: Arc::new(sigma.restrict(&format!("{}|C-", sigma.name), &lower_pts)),
        upper: Arc::new(sigma.restrict(&format!("{}|C+", sigma.name), &upper_pts)),
        equator: Arc::new(sigma.restrict(&format!("{}|X", sigma.name), &eq_pts)),
        sigma: Arc::new(sigma),
        base: Arc::new(base.clone()),
    })
}

fn pack(angles: Vec<f64>) -> CochainValue {
    match angles.first() {
        Some(a) if angles.iter().all(|b| b == a) => CochainValue::Const(*a),
        _ => CochainValue::Sampled(angles),
    }
}

/// The connecting map applied to a 1-cocycle `h` on `U`: extend `h` over the
/// lower cone as `w_{−1}` (constant in height, 1 on tuples with ±1), take
/// `w_1 = 1`, and glue `δw_{−1}` and `δw_1` into a 2-cocycle on `U^Σ`.
/// The result is `h_jk` on `(−1, j, k)` and 1 elsewhere.
pub fn suspension_forward(sc: &SuspensionCover, h: &CechCochain) -> Result<CechCochain> {
    if h.degree != 1 || *h.cover != *sc.base {
        return Err(Error::GridMismatch("expected a 1-cochain on the base cover".into()));
    }
    let w = CechCochain::from_fn(sc.lower.clone(), 1, |t, pts| {
        if t.iter().any(|i| i.abs() == 1) {
            return CochainValue::Const(0.0);
        }
        let base_pts = sc.base.intersection(t);
        let a = h.angles_at(t).expect("h covers the base nerve");
        pack(
            pts.iter()
                .map(|p| {
                    let (_, x) = sc.locate(*p).expect("extruded points are not cone points");
                    a[base_pts.binary_search(&x).expect("point of U_t")]
                })
                .collect(),
        )
    });
    let dw = cech_coboundary(&w)?;
    let mut entries = BTreeMap::new();
    for t in sc.sigma.nerve(2) {
        let pts = sc.sigma.intersection(&t);
        let low: Vec<usize> = pts.iter().cloned().filter(|p| sc.in_lower_cone(*p)).collect();
        let low_vals = if low.is_empty() { Vec::new() } else { dw.angles_on(&t, &low)? };
        let mut k = 0;
        let angles = pts
            .iter()
            .map(|p| {
                if sc.in_lower_cone(*p) {
                    k += 1;
                    low_vals[k - 1]
                } else {
                    0.0
                }
            })
            .collect();
        entries.insert(t, pack(angles));
    }
    Ok(CechCochain { cover: sc.sigma.clone(), degree: 2, entries })
}

/// Inverse of [`suspension_forward`] on 2-cocycles supported on tuples of
/// type `(−1, i, j)`: `h_ij(x) = g_{−1ij}` read at `x` on the lowest row of
/// the extruded sets.
pub fn suspension_partial_inverse(sc: &SuspensionCover, g: &CechCochain) -> Result<CechCochain> {
    if g.degree != 2 || *g.cover != *sc.sigma {
        return Err(Error::GridMismatch("expected a 2-cochain on the suspension cover".into()));
    }
    for t in sc.sigma.nerve(2) {
        let caps = t.iter().filter(|i| i.abs() == 1).count();
        let lower_type = caps == 1 && t.contains(&-1);
        if lower_type {
            continue;
        }
        let worst = g.angles_at(&t)?.into_iter().fold(0.0f64, |m, a| m.max(wrap_angle(a).abs()));
        if worst > SUPPORT_TOL {
            return Err(Error::SupportShape(format!("g{t:?} is not 1 (phase {worst:.3e})")));
        }
    }
    let mut entries = BTreeMap::new();
    for t in sc.base.nerve(1) {
        let (i, j) = (t[0], t[1]);
        let xs = sc.base.intersection(&t);
        let pts: Vec<usize> = xs.iter().map(|x| sc.point(LOWER_ROW, *x)).collect();
        let vals = g.angles_on(&[-1, i, j], &pts)?;
        entries.insert(t, pack(vals));
    }
    Ok(CechCochain { cover: sc.base.clone(), degree: 1, entries })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::super::winding::winding_degree;
    use super::*;

    fn full_circle_cover(n: usize) -> IndexedCover {
        // two sets covering the whole circle and two half arcs
        let mut sets = BTreeMap::new();
        sets.insert(2, (0..n).collect());
        sets.insert(3, (0..n).collect());
        sets.insert(4, (0..n / 2 + 2).collect());
        sets.insert(5, (n / 2..n).chain(0..2).collect());
        IndexedCover::new("circle4", n, sets)
    }

    /// A cocycle with `h_23 = e^{is}`, which winds once around the overlap.
    fn winding_cocycle(cover: Arc<IndexedCover>) -> CechCochain {
        let n = cover.n_points as f64;
        CechCochain::from_fn(cover, 1, |t, pts| {
            let s = |p: &usize| 2.0 * PI * *p as f64 / n;
            let phase: Vec<f64> = pts.iter().map(s).collect();
            match (t[0], t[1]) {
                (2, 3) => CochainValue::Sampled(phase),
                (3, 4) | (3, 5) => CochainValue::Sampled(phase.iter().map(|a| -a).collect()),
                _ => CochainValue::Const(0.0),
            }
        })
    }

    #[test]
    fn cover_shape() {
        let base = IndexedCover::circle(16, 2, 2, 2);
        let sc = build_suspension_cover(&base).unwrap();
        assert_eq!(sc.sigma.indices(), vec![-1, 1, 2, 3]);
        assert!(sc.sigma.intersection(&[-1, 1]).is_empty());
        assert!(!sc.sigma.nerve(2).iter().any(|t| t.contains(&-1) && t.contains(&1)));
        assert!(sc.equator.intersection(&[-1]).is_empty());
        let all: usize = (0..sc.sigma.n_points).filter(|p| sc.sigma.sets.values().any(|s| s.contains(p))).count();
        assert_eq!(all, sc.sigma.n_points);
        let mut bad = base.clone();
        bad.sets.insert(1, vec![0]);
        assert!(matches!(build_suspension_cover(&bad), Err(Error::ReservedIndex(1))));
    }

    #[test]
    fn trivial_and_round_trip() {
        let base = full_circle_cover(32);
        let sc = build_suspension_cover(&base).unwrap();
        let one = CechCochain::identity(sc.sigma.clone(), 2);
        assert!(suspension_partial_inverse(&sc, &one).unwrap().is_identity(0.0).unwrap());

        let h = winding_cocycle(sc.base.clone());
        assert!(cech_coboundary(&h).unwrap().identity_defect().unwrap() < 1e-12);
        let g = suspension_forward(&sc, &h).unwrap();
        assert!(cech_coboundary(&g).unwrap().identity_defect().unwrap() < 1e-12);
        let back = suspension_partial_inverse(&sc, &g).unwrap();
        assert!(back.distance(&h).unwrap() < 1e-12);
        assert!(suspension_forward(&sc, &back).unwrap().distance(&g).unwrap() < 1e-12);
        assert_eq!(winding_degree(&back.values_at(&[2, 3]).unwrap()).unwrap(), 1);
        assert_eq!(winding_degree(&back.values_at(&[3, 2]).unwrap()).unwrap(), -1);
    }

    #[test]
    fn unexpected_support_is_rejected() {
        let base = IndexedCover::circle(16, 2, 2, 2);
        let sc = build_suspension_cover(&base).unwrap();
        let g = CechCochain::from_fn(sc.sigma.clone(), 2, |t, _| {
            CochainValue::Const(if t.contains(&1) { 0.3 } else { 0.0 })
        });
        assert!(matches!(suspension_partial_inverse(&sc, &g), Err(Error::SupportShape(_))));
    }
}
