use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Representative of `a` in `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Continuous lift of a sequence of angles.
pub fn unwrap_phases(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len());
    for (k, a) in angles.iter().enumerate() {
        if k == 0 {
            out.push(*a);
        } else {
            let prev: f64 = out[k - 1];
            out.push(prev + wrap_angle(a - prev));
        }
    }
    out
}

/// Degree of a closed sampled circle map; every step, including the closing
/// one, must be below `max_step`.
pub fn winding_degree_with_step(values: &[Complex64], max_step: f64) -> Result<i64> {
    let n = values.len();
    if n == 0 {
        return Ok(0);
    }
    let mut total = 0.0;
    for k in 0..n {
        let step = (values[(k + 1) % n] * values[k].conj()).arg();
        if step.abs() >= max_step {
            return Err(Error::Refine(step.abs()));
        }
        total += step;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

pub fn winding_degree(values: &[Complex64]) -> Result<i64> {
    winding_degree_with_step(values, PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        (0..n).map(|k| f(2.0 * PI * k as f64 / n as f64)).collect()
    }

    #[test]
    fn basic_degrees() {
        assert_eq!(winding_degree(&circle(16, |_| Complex64::new(0.0, 1.0))).unwrap(), 0);
        assert_eq!(winding_degree(&circle(16, |s| Complex64::from_polar(1.0, s))).unwrap(), 1);
        assert_eq!(winding_degree(&circle(64, |s| Complex64::from_polar(1.0, -3.0 * s))).unwrap(), -3);
        assert!(matches!(
            winding_degree(&circle(8, |s| Complex64::from_polar(1.0, 4.0 * s))),
            Err(Error::Refine(_))
        ));
        let f = circle(64, |s| Complex64::from_polar(1.0, 2.0 * s + 0.3 * s.sin()));
        let g = circle(64, |s| Complex64::from_polar(1.0, -s + 0.2 * (3.0 * s).cos()));
        let fg: Vec<Complex64> = f.iter().zip(&g).map(|(a, b)| a * b).collect();
        assert_eq!(winding_degree(&fg).unwrap(), winding_degree(&f).unwrap() + winding_degree(&g).unwrap());
    }

    #[test]
    fn unwrap_is_continuous() {
        let raw: Vec<f64> = (0..40).map(|k| wrap_angle(0.4 * k as f64)).collect();
        let u = unwrap_phases(&raw);
        for k in 0..40 {
            assert!((u[k] - 0.4 * k as f64).abs() < 1e-12);
        }
    }
}
