use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// A finite cover of a sampled space: each index names a subset of the
/// sample points `0..n_points`. Only intersections enter the Čech formulas,
/// so the nerve is read off from the point sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedCover {
    pub name: String,
    pub n_points: usize,
    /// Sorted, deduplicated point lists.
    pub sets: BTreeMap<i64, Vec<usize>>,
}

impl IndexedCover {
    pub fn new(name: &str, n_points: usize, sets: BTreeMap<i64, Vec<usize>>) -> Self {
        let sets = sets
            .into_iter()
            .map(|(k, mut v)| {
                v.sort_unstable();
                v.dedup();
                v.retain(|p| *p < n_points);
                (k, v)
            })
            .collect();
        Self { name: name.to_string(), n_points, sets }
    }

    /// Cover of a circle sampled at `n_points` by `k` arcs. Arc `a` starts
    /// at `a·n/k` and runs `n/k + overlap` points. Indices start at `first`.
    pub fn circle(n_points: usize, k: usize, overlap: usize, first: i64) -> Self {
        let mut sets = BTreeMap::new();
        let step = n_points / k;
        for a in 0..k {
            let start = a * step;
            let pts = (0..step + overlap).map(|d| (start + d) % n_points).collect();
            sets.insert(first + a as i64, pts);
        }
        Self::new(&format!("circle{n_points}x{k}"), n_points, sets)
    }

    pub fn indices(&self) -> Vec<i64> {
        self.sets.keys().cloned().collect()
    }

    pub fn contains_index(&self, i: i64) -> bool {
        self.sets.contains_key(&i)
    }

    /// Points of `U_{i0} ∩ … ∩ U_{ip}` in increasing order; empty for an
    /// unknown index.
    pub fn intersection(&self, tuple: &[i64]) -> Vec<usize> {
        let mut it = tuple.iter();
        let Some(first) = it.next() else {
            return (0..self.n_points).collect();
        };
        let Some(mut acc) = self.sets.get(first).cloned() else {
            return Vec::new();
        };
        for i in it {
            let Some(s) = self.sets.get(i) else {
                return Vec::new();
            };
            acc.retain(|p| s.binary_search(p).is_ok());
        }
        acc
    }

    /// Increasing `(p+1)`-tuples of distinct indices with nonempty
    /// intersection.
    pub fn nerve(&self, p: usize) -> Vec<Vec<i64>> {
        let idx = self.indices();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(p + 1);
        self.extend_nerve(&idx, 0, p + 1, &mut cur, &mut out);
        out
    }

    fn extend_nerve(&self, idx: &[i64], from: usize, len: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for k in from..idx.len() {
            cur.push(idx[k]);
            // nonempty tuples have nonempty subtuples, so prune early
            if !self.intersection(cur).is_empty() {
                self.extend_nerve(idx, k + 1, len, cur, out);
            }
            cur.pop();
        }
    }

    /// Same index set with every open set cut down to `points`.
    pub fn restrict(&self, name: &str, points: &[usize]) -> Self {
        let mut keep = points.to_vec();
        keep.sort_unstable();
        let sets = self
            .sets
            .iter()
            .map(|(k, v)| (*k, v.iter().cloned().filter(|p| keep.binary_search(p).is_ok()).collect()))
            .collect();
        Self::new(name, self.n_points, sets)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_nerve() {
        let c = IndexedCover::circle(32, 4, 2, 2);
        assert_eq!(c.indices(), vec![2, 3, 4, 5]);
        let n1 = c.nerve(1);
        assert_eq!(n1, vec![vec![2, 3], vec![2, 5], vec![3, 4], vec![4, 5]]);
        assert!(c.nerve(2).is_empty());
        assert_eq!(c.intersection(&[2, 3]), vec![8, 9]);
        assert_eq!(c.intersection(&[3, 2]), vec![8, 9]);
        assert_eq!(c.intersection(&[5, 2]), vec![0, 1]);
    }
}
