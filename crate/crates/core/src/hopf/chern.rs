use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Family};
use super::fiber::{FiberContext, FiberGerbeData};
use crate::linalg::{inner, CVec};
use crate::torsorcech::winding_degree_with_step;
use crate::{Error, Result};

/// One equator sweep at a fixed cutoff and sample count.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub cutoff: usize,
    pub equator_samples: usize,
    pub equator_theta: f64,
    /// Winding of `h` where `ψ_N = h ψ_S` on the equator.
    pub degree: i64,
    pub transition: Vec<Complex64>,
    /// `⟨ψ_canonical, ψ_N⟩` where the canonical intertwiner exists.
    pub canonical_phase: Vec<Option<Complex64>>,
    /// `⟨ψ_canonical, ψ_S⟩`.
    pub canonical_phase_south: Vec<Option<Complex64>>,
    pub points: Vec<FiberGerbeData>,
    pub degenerate: Vec<usize>,
    pub max_phase_step: f64,
    pub attempts: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub cutoff: usize,
    pub equator_samples: usize,
    pub equator_theta: f64,
    pub degree: Option<i64>,
    pub error: Option<String>,
    pub accepted: usize,
    pub degenerate: usize,
    pub max_residual: Option<f64>,
    pub min_sigma_c: Option<f64>,
    pub max_phase_step: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerateRecord {
    pub cutoff: usize,
    pub equator_samples: usize,
    pub index: usize,
    pub theta: f64,
    pub phi: f64,
    pub sigma_min_c: f64,
}

#[derive(Clone, Debug)]
pub struct ChernReport {
    pub family: Family,
    /// Degree of the first successful run.
    pub degree: Option<i64>,
    /// Every run succeeded with the same degree.
    pub stable: bool,
    pub rows: Vec<ConvergenceRow>,
    pub degenerate_points: Vec<DegenerateRecord>,
    pub runs: Vec<RunOutcome>,
}

/// Parallel transport of a vacuum along the meridian at `phi` from `theta0`
/// to `theta1`: each new vacuum is phased to overlap positively with the
/// previous one.
fn transport(ctx: &FiberContext, start: &CVec, theta0: f64, theta1: f64, phi: f64, cfg: &ExperimentConfig) -> Result<CVec> {
    let mut psi = start.clone();
    for k in 1..=cfg.meridian_steps {
        let theta = theta0 + (theta1 - theta0) * k as f64 / cfg.meridian_steps as f64;
        let mut next = ctx.vacuum_at(theta, phi)?;
        let ov = inner(&next, &psi);
        if ov.norm() < cfg.min_overlap {
            return Err(Error::Refine((1.0 - ov.norm()).acos()));
        }
        next *= ov.conj() / ov.norm();
        psi = next;
    }
    Ok(psi)
}

fn sweep(
    ctx: &FiberContext,
    samples: usize,
    theta_e: f64,
    cfg: &ExperimentConfig,
) -> Result<Vec<(CVec, CVec, FiberGerbeData)>> {
    let north = ctx.vacuum_at(0.0, 0.0)?;
    let south = ctx.vacuum_at(PI, 0.0)?;
    (0..samples)
        .into_par_iter()
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / samples as f64;
            let n = transport(ctx, &north, 0.0, theta_e, phi, cfg)?;
            let s = transport(ctx, &south, PI, theta_e, phi, cfg)?;
            Ok((n, s, ctx.fiber(theta_e, phi)?))
        })
        .collect()
}

/// Transition function and degree for one `(cutoff, samples)` pair. If the
/// equator meets points where `C_g` is singular, the equator is moved by
/// `equator_epsilon` and the sweep retried.
pub fn run_once(family: Family, cutoff: usize, samples: usize, cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let ctx = FiberContext::new(family, cutoff, cfg)?;
    let mut attempt = 0;
    loop {
        let theta_e = FRAC_PI_2 + attempt as f64 * cfg.equator_epsilon;
        let data = sweep(&ctx, samples, theta_e, cfg)?;
        let degenerate: Vec<usize> = data.iter().enumerate().filter(|(_, d)| d.2.degenerate).map(|(k, _)| k).collect();
        if !degenerate.is_empty() && attempt < cfg.max_retries {
            attempt += 1;
            continue;
        }
        let mut transition = Vec::with_capacity(samples);
        let mut canonical_phase = Vec::with_capacity(samples);
        let mut canonical_phase_south = Vec::with_capacity(samples);
        let unit = |c: &CVec, v: &CVec| {
            let z = inner(c, v);
            z / z.norm()
        };
        let mut points = Vec::with_capacity(samples);
        for (n, s, f) in data {
            let h = inner(&n, &s);
            if (h.norm() - 1.0).abs() > cfg.residual_tol {
                // the two caps disagree on the vacuum line
                return Err(Error::NonConverged((h.norm() - 1.0).abs()));
            }
            transition.push(h / h.norm());
            canonical_phase.push(f.canonical_vacuum.as_ref().map(|c| unit(c, &n)));
            canonical_phase_south.push(f.canonical_vacuum.as_ref().map(|c| unit(c, &s)));
            points.push(f);
        }
        let max_phase_step = (0..samples)
            .map(|k| (transition[(k + 1) % samples] * transition[k].conj()).arg().abs())
            .fold(0.0, f64::max);
        let degree = winding_degree_with_step(&transition, cfg.max_phase_step)?;
        return Ok(RunOutcome {
            cutoff,
            equator_samples: samples,
            equator_theta: theta_e,
            degree,
            transition,
            canonical_phase,
            canonical_phase_south,
            points,
            degenerate,
            max_phase_step,
            attempts: attempt + 1,
        });
    }
}

/// Runs every `(cutoff, equator samples)` pair of the configuration. Runs
/// that need a finer grid are recorded, and the whole computation fails with
/// `Refine` only if none succeeds.
pub fn chern_of_q(cfg: &ExperimentConfig) -> Result<ChernReport> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut runs = Vec::new();
    let mut degenerate_points = Vec::new();
    let mut first_err = None;
    for &cutoff in &cfg.cutoffs {
        for &samples in &cfg.equator_samples {
            match run_once(cfg.family, cutoff, samples, cfg) {
                Ok(run) => {
                    rows.push(ConvergenceRow {
                        cutoff,
                        equator_samples: samples,
                        equator_theta: run.equator_theta,
                        degree: Some(run.degree),
                        error: None,
                        accepted: run.points.iter().filter(|p| p.accepted(cfg.residual_tol)).count(),
                        degenerate: run.degenerate.len(),
                        max_residual: run.points.iter().filter_map(|p| p.residual).reduce(f64::max),
                        min_sigma_c: run.points.iter().map(|p| p.sigma_min_c).reduce(f64::min),
                        max_phase_step: Some(run.max_phase_step),
                    });
                    for &k in &run.degenerate {
                        let p = &run.points[k];
                        degenerate_points.push(DegenerateRecord {
                            cutoff,
                            equator_samples: samples,
                            index: k,
                            theta: p.theta,
                            phi: p.phi,
                            sigma_min_c: p.sigma_min_c,
                        });
                    }
                    runs.push(run);
                }
                Err(e @ Error::Refine(_)) => {
                    rows.push(ConvergenceRow {
                        cutoff,
                        equator_samples: samples,
                        equator_theta: FRAC_PI_2,
                        degree: None,
                        error: Some(e.to_string()),
                        accepted: 0,
                        degenerate: 0,
                        max_residual: None,
                        min_sigma_c: None,
                        max_phase_step: None,
                    });
                    first_err.get_or_insert(e);
                }
                Err(e) => return Err(e),
            }
        }
    }
    if runs.is_empty() {
        return Err(first_err.unwrap_or(Error::Config("no runs configured".into())));
    }
    let degree = runs.first().map(|r| r.degree);
    let stable = runs.len() == rows.len() && runs.iter().all(|r| Some(r.degree) == degree);
    Ok(ChernReport { family: cfg.family, degree, stable, rows, degenerate_points, runs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(family: Family) -> ExperimentConfig {
        ExperimentConfig {
            family,
            cutoffs: vec![3],
            equator_samples: vec![32],
            meridian_steps: 12,
            ..Default::default()
        }
    }

    #[test]
    fn null_family_has_degree_zero() {
        let r = chern_of_q(&small(Family::Null)).unwrap();
        assert_eq!(r.degree, Some(0));
        assert!(r.stable);
        let run = &r.runs[0];
        assert!(run.transition.iter().all(|h| (h - 1.0).norm() < 1e-10));
        assert!(run.points.iter().all(|p| p.accepted(1e-8)));
    }

    #[test]
    fn synthetic_family_winds_once() {
        let r = chern_of_q(&small(Family::Synthetic)).unwrap();
        assert_eq!(r.degree.map(i64::abs), Some(1));
    }

    #[test]
    fn degree_splits_through_the_canonical_family() {
        let cfg = small(Family::Synthetic);
        let run = run_once(Family::Synthetic, 0, 32, &cfg).unwrap();
        let north: Vec<Complex64> = run.canonical_phase.iter().map(|c| c.unwrap()).collect();
        let south: Vec<Complex64> = run.canonical_phase_south.iter().map(|c| c.unwrap()).collect();
        // with the canonical family on both caps the transition is trivial
        let same: Vec<Complex64> = north.iter().map(|c| c * c.conj()).collect();
        assert_eq!(winding_degree_with_step(&same, PI).unwrap(), 0);
        // ψ_N = ā c and ψ_S = b̄ c give h = ā b
        let dn = winding_degree_with_step(&north, PI).unwrap();
        let ds = winding_degree_with_step(&south, PI).unwrap();
        assert_eq!(run.degree, ds - dn);
    }
}
