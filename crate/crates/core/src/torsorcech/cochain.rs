use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cover::IndexedCover;
use super::winding::{unwrap_phases, wrap_angle};
use crate::{Error, Result};

/// A U(1)-valued function on one intersection, stored as an angle. Sampled
/// data has one angle per intersection point, in point order.
#[derive(Clone, Debug, PartialEq)]
pub enum CochainValue {
    Const(f64),
    Sampled(Vec<f64>),
}

impl CochainValue {
    fn angles(&self, n: usize) -> Vec<f64> {
        match self {
            Self::Const(a) => vec![*a; n],
            Self::Sampled(v) => v.clone(),
        }
    }
}

/// Sign of the permutation sorting `tuple`, or `None` if it repeats an index.
fn sort_sign(tuple: &[i64]) -> Option<(Vec<i64>, f64)> {
    let mut v = tuple.to_vec();
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Alternating Čech `p`-cochain with values in U(1)-valued functions. Entries
/// are keyed by increasing tuples; other orders are recovered by alternation.
#[derive(Clone, Debug)]
pub struct CechCochain {
    pub cover: Arc<IndexedCover>,
    pub degree: usize,
    pub entries: BTreeMap<Vec<i64>, CochainValue>,
}

impl CechCochain {
    /// Fills every nerve tuple from `f(tuple, intersection points)`.
    pub fn from_fn(
        cover: Arc<IndexedCover>,
        degree: usize,
        mut f: impl FnMut(&[i64], &[usize]) -> CochainValue,
    ) -> Self {
        let mut entries = BTreeMap::new();
        for t in cover.nerve(degree) {
            let pts = cover.intersection(&t);
            entries.insert(t.clone(), f(&t, &pts));
        }
        Self { cover, degree, entries }
    }

    pub fn identity(cover: Arc<IndexedCover>, degree: usize) -> Self {
        Self::from_fn(cover, degree, |_, _| CochainValue::Const(0.0))
    }

    /// Angles on `U_tuple`, one per intersection point, for a tuple in any
    /// order.
    pub fn angles_at(&self, tuple: &[i64]) -> Result<Vec<f64>> {
        let pts = self.cover.intersection(tuple);
        let Some((sorted, sign)) = sort_sign(tuple) else {
            return Ok(vec![0.0; pts.len()]);
        };
        if pts.is_empty() {
            return Ok(Vec::new());
        }
        let v = self.entries.get(&sorted).ok_or_else(|| Error::NerveIncomplete(sorted.clone()))?;
        let a = v.angles(pts.len());
        if a.len() != pts.len() {
            return Err(Error::GridMismatch(format!("{sorted:?}: {} samples for {} points", a.len(), pts.len())));
        }
        Ok(a.into_iter().map(|x| sign * x).collect())
    }

    /// Angles of `tuple` restricted to `points`, a subset of its intersection.
    pub fn angles_on(&self, tuple: &[i64], points: &[usize]) -> Result<Vec<f64>> {
        let pts = self.cover.intersection(tuple);
        let a = self.angles_at(tuple)?;
        points
            .iter()
            .map(|p| {
                pts.binary_search(p)
                    .map(|k| a[k])
                    .map_err(|_| Error::GridMismatch(format!("point {p} not in U{tuple:?}")))
            })
            .collect()
    }

    pub fn values_at(&self, tuple: &[i64]) -> Result<Vec<Complex64>> {
        Ok(self.angles_at(tuple)?.into_iter().map(|a| Complex64::from_polar(1.0, a)).collect())
    }

    /// The same function data read on a cover whose sets are subsets of
    /// ours (same point numbering).
    pub fn restrict_to(&self, sub: Arc<IndexedCover>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for t in sub.nerve(self.degree) {
            let pts = sub.intersection(&t);
            let v = match self.entries.get(&t) {
                Some(CochainValue::Const(a)) => CochainValue::Const(*a),
                _ => CochainValue::Sampled(self.angles_on(&t, &pts)?),
            };
            entries.insert(t, v);
        }
        Ok(Self { cover: sub, degree: self.degree, entries })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    /// Pointwise inverse.
    pub fn inverse(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| {
                let w = match v {
                    CochainValue::Const(a) => CochainValue::Const(-a),
                    CochainValue::Sampled(s) => CochainValue::Sampled(s.iter().map(|a| -a).collect()),
                };
                (k.clone(), w)
            })
            .collect();
        Self { cover: self.cover.clone(), degree: self.degree, entries }
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.degree != other.degree || self.cover != other.cover {
            return Err(Error::GridMismatch("cochains live on different covers or degrees".into()));
        }
        let mut entries = BTreeMap::new();
        for t in self.cover.nerve(self.degree) {
            let v = match (self.entries.get(&t), other.entries.get(&t)) {
                (Some(CochainValue::Const(a)), Some(CochainValue::Const(b))) => CochainValue::Const(f(*a, *b)),
                _ => {
                    let a = self.angles_at(&t)?;
                    let b = other.angles_at(&t)?;
                    CochainValue::Sampled(a.iter().zip(&b).map(|(x, y)| f(*x, *y)).collect())
                }
            };
            entries.insert(t, v);
        }
        Ok(Self { cover: self.cover.clone(), degree: self.degree, entries })
    }

    /// Largest distance from 1 over all tuples and sample points.
    pub fn identity_defect(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for t in self.cover.nerve(self.degree) {
            for a in self.angles_at(&t)? {
                worst = worst.max(wrap_angle(a).abs());
            }
        }
        Ok(worst)
    }

    pub fn is_identity(&self, tol: f64) -> Result<bool> {
        Ok(self.identity_defect()? <= tol)
    }

    /// Largest pointwise phase difference, modulo 2π.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.zip(other, |a, b| a - b)?.identity_defect()
    }

    pub fn to_file(&self) -> CochainFile {
        let entries = self
            .entries
            .iter()
            .map(|(t, v)| match v {
                CochainValue::Const(a) => EntryFile { tuple: t.clone(), kind: "const".into(), data: vec![*a] },
                CochainValue::Sampled(s) => EntryFile { tuple: t.clone(), kind: "circle".into(), data: s.clone() },
            })
            .collect();
        CochainFile { cover: self.cover.name.clone(), degree: self.degree, entries }
    }

    pub fn from_file(cover: Arc<IndexedCover>, file: &CochainFile) -> Result<Self> {
        if file.cover != cover.name {
            return Err(Error::GridMismatch(format!("cochain is on cover {}, not {}", file.cover, cover.name)));
        }
        let mut entries = BTreeMap::new();
        for e in &file.entries {
            let Some((sorted, sign)) = sort_sign(&e.tuple) else {
                continue;
            };
            if sorted.len() != file.degree + 1 {
                return Err(Error::GridMismatch(format!("tuple {:?} has wrong length", e.tuple)));
            }
            let v = match e.kind.as_str() {
                "const" if e.data.len() == 1 => CochainValue::Const(sign * e.data[0]),
                "circle" => {
                    // unwrap so that stored data is branch-cut free whatever the file holds
                    let a = unwrap_phases(&e.data);
                    CochainValue::Sampled(a.into_iter().map(|x| sign * x).collect())
                }
                k => return Err(Error::Config(format!("unknown entry kind {k:?}"))),
            };
            entries.insert(sorted, v);
        }
        let c = Self { cover, degree: file.degree, entries };
        for t in c.cover.nerve(c.degree) {
            c.angles_at(&t)?;
        }
        Ok(c)
    }
}

/// Serialized form of a cochain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CochainFile {
    pub cover: String,
    pub degree: usize,
    pub entries: Vec<EntryFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryFile {
    pub tuple: Vec<i64>,
    pub kind: String,
    pub data: Vec<f64>,
}

/// `(δc)_{i0…i(p+1)} = Π_k c(i0…î_k…i(p+1))^{(−1)^k}`, restricted pointwise.
pub fn cech_coboundary(c: &CechCochain) -> Result<CechCochain> {
    let cover = c.cover.clone();
    let mut entries = BTreeMap::new();
    for t in cover.nerve(c.degree + 1) {
        let pts = cover.intersection(&t);
        let mut all_const = true;
        let mut acc = vec![0.0; pts.len()];
        for k in 0..t.len() {
            let mut face = t.clone();
            face.remove(k);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            if !matches!(c.entries.get(&face), Some(CochainValue::Const(_))) {
                all_const = false;
            }
            for (a, v) in acc.iter_mut().zip(c.angles_on(&face, &pts)?) {
                *a += sign * v;
            }
        }
        let v = if all_const && !acc.is_empty() { CochainValue::Const(acc[0]) } else { CochainValue::Sampled(acc) };
        entries.insert(t, v);
    }
    Ok(CechCochain { cover, degree: c.degree + 1, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn three_sets() -> Arc<IndexedCover> {
        let mut sets = BTreeMap::new();
        sets.insert(0, (0..12).collect());
        sets.insert(1, (4..20).collect());
        sets.insert(2, (8..24).chain(0..2).collect());
        sets.insert(3, (10..16).collect());
        Arc::new(IndexedCover::new("four", 24, sets))
    }

    #[test]
    fn two_set_coboundary() {
        let cover = Arc::new(IndexedCover::circle(16, 2, 3, 0));
        let h = CechCochain::from_fn(cover.clone(), 0, |t, pts| {
            CochainValue::Sampled(pts.iter().map(|p| (t[0] as f64 + 1.0) * *p as f64 * 0.1).collect())
        });
        let d = cech_coboundary(&h).unwrap();
        let pts = cover.intersection(&[0, 1]);
        let got = d.angles_at(&[0, 1]).unwrap();
        for (k, p) in pts.iter().enumerate() {
            assert!((got[k] - (2.0 - 1.0) * *p as f64 * 0.1).abs() < 1e-12);
        }
        let back = d.angles_at(&[1, 0]).unwrap();
        assert!((back[0] + got[0]).abs() < 1e-15);
    }

    #[test]
    fn delta_delta_is_one() {
        let cover = three_sets();
        let mut rng = crate::modes::random::rng(3);
        for p in 0..2 {
            let c = CechCochain::from_fn(cover.clone(), p, |_, pts| {
                CochainValue::Sampled(pts.iter().map(|_| rng.gen_range(-3.0..3.0)).collect())
            });
            let dd = cech_coboundary(&cech_coboundary(&c).unwrap()).unwrap();
            assert!(!dd.entries.is_empty());
            assert!(dd.identity_defect().unwrap() < 1e-12);
        }
        let one = CechCochain::identity(cover, 1);
        assert!(cech_coboundary(&one).unwrap().is_identity(0.0).unwrap());
    }

    #[test]
    fn missing_entry_is_reported() {
        let cover = three_sets();
        let mut c = CechCochain::identity(cover, 1);
        c.entries.remove(&vec![0, 1]);
        assert!(matches!(cech_coboundary(&c), Err(Error::NerveIncomplete(_))));
    }

    #[test]
    fn json_round_trip() {
        let cover = three_sets();
        let c = CechCochain::from_fn(cover.clone(), 1, |t, pts| {
            if t[0] == 0 {
                CochainValue::Const(0.5)
            } else {
                CochainValue::Sampled(pts.iter().map(|p| *p as f64 * 0.01).collect())
            }
        });
        let s = serde_json::to_string(&c.to_file()).unwrap();
        let back = CechCochain::from_file(cover, &serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back.entries, c.entries);
    }
}
