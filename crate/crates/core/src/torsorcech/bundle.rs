use crate::{Error, Result};

/// A U(1)-valued function on the fibre product `Y^[p]` of a sampled
/// submersion `Y → M` whose fibres all have `fiber` points. Angles are stored
/// row-major in `(base, y_1, …, y_p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleCochain {
    pub base: usize,
    pub fiber: usize,
    pub arity: usize,
    pub angles: Vec<f64>,
}

impl BundleCochain {
    pub fn from_fn(base: usize, fiber: usize, arity: usize, mut f: impl FnMut(usize, &[usize]) -> f64) -> Self {
        let per = fiber.pow(arity as u32);
        let mut angles = Vec::with_capacity(base * per);
        let mut ys = vec![0; arity];
        for b in 0..base {
            for flat in 0..per {
                decode(flat, fiber, &mut ys);
                angles.push(f(b, &ys));
            }
        }
        Self { base, fiber, arity, angles }
    }

    fn check(&self) -> Result<()> {
        if self.angles.len() != self.base * self.fiber.pow(self.arity as u32) {
            return Err(Error::GridMismatch(format!(
                "{} samples for {} base points and {}^{} fibre tuples",
                self.angles.len(),
                self.base,
                self.fiber,
                self.arity
            )));
        }
        Ok(())
    }

    pub fn at(&self, b: usize, ys: &[usize]) -> f64 {
        let per = self.fiber.pow(self.arity as u32);
        self.angles[b * per + encode(ys, self.fiber)]
    }
}

fn decode(mut flat: usize, fiber: usize, ys: &mut [usize]) {
    for y in ys.iter_mut().rev() {
        *y = flat % fiber;
        flat /= fiber;
    }
}

fn encode(ys: &[usize], fiber: usize) -> usize {
    ys.iter().fold(0, |acc, y| acc * fiber + y)
}

/// `δ(g) = Π_{i=1}^{p} (g ∘ π̂_i)^{(−1)^{i−1}}` where `π̂_i` forgets the
/// `i`-th factor, taking `g` on `Y^[p−1]` to `Y^[p]`.
pub fn delta_bundle_cochain(g: &BundleCochain) -> Result<BundleCochain> {
    g.check()?;
    if g.fiber == 0 {
        return Err(Error::GridMismatch("empty fibre".into()));
    }
    let p = g.arity + 1;
    let mut face = vec![0; g.arity];
    Ok(BundleCochain::from_fn(g.base, g.fiber, p, |b, ys| {
        let mut acc = 0.0;
        for i in 0..p {
            let mut k = 0;
            for (m, y) in ys.iter().enumerate() {
                if m != i {
                    face[k] = *y;
                    k += 1;
                }
            }
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * g.at(b, &face);
        }
        acc
    }))
}
