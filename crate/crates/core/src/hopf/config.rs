use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which family of Lagrangians over the 2-sphere to analyse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `r(x) ≡ 1`, the trivial bundle.
    Null,
    /// `x ↦ e^{φK} e^{θY} L` on `ℝ⁴`, which wraps the Lagrangian
    /// Grassmannian once.
    Synthetic,
    /// The transition loops `r(x)`.
    Main,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: Family,
    /// Fibre dimension; the loops act on `ℍ = ℝ⁴`.
    pub n: usize,
    pub cutoffs: Vec<usize>,
    pub equator_samples: Vec<usize>,
    pub loop_samples: usize,
    pub meridian_steps: usize,
    /// Fock degree cap; `None` means all active modes, the only exact choice.
    pub degree_cap: Option<usize>,
    pub cond_bound: f64,
    pub residual_tol: f64,
    /// Smallest overlap accepted between vacua at adjacent meridian points.
    pub min_overlap: f64,
    /// Largest phase step accepted along the equator.
    pub max_phase_step: f64,
    /// Latitude shift applied when the equator meets degenerate points.
    pub equator_epsilon: f64,
    pub max_retries: usize,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            family: Family::Main,
            n: 4,
            cutoffs: vec![4, 8],
            equator_samples: vec![256, 512],
            loop_samples: 64,
            meridian_steps: 24,
            degree_cap: None,
            cond_bound: 1e8,
            residual_tol: 1e-8,
            min_overlap: 0.5,
            max_phase_step: std::f64::consts::FRAC_PI_2,
            equator_epsilon: 0.05,
            max_retries: 2,
            out_dir: None,
        }
    }
}

/// Width of the window `|q| ≤ ACTIVE_WINDOW` that carries all the structure;
/// equal to the Fourier band of `r(x)`.
pub const ACTIVE_WINDOW: usize = 1;

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Active modes of the window Lagrangian, `n·ACTIVE_WINDOW + n/2` (or
    /// `n/2` for the synthetic family, which has no loop modes).
    pub fn active_modes(&self) -> usize {
        match self.family {
            Family::Synthetic => self.n / 2,
            _ => self.n * ACTIVE_WINDOW + self.n / 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n != 4 {
            return bad(format!("fibre dimension must be 4, got {}", self.n));
        }
        if self.cutoffs.is_empty() || self.equator_samples.is_empty() {
            return bad("need at least one cutoff and one equator sample count".into());
        }
        if self.family != Family::Synthetic {
            // g⁻¹W ∩ L sits in |q| ≤ 2·band, which needs a further band of room
            if let Some(q) = self.cutoffs.iter().find(|q| **q < 3 * ACTIVE_WINDOW) {
                return bad(format!("cutoff {q} is below three times the loop band"));
            }
        }
        for s in self.equator_samples.iter().chain([&self.loop_samples]) {
            if *s < 8 || !s.is_power_of_two() {
                return bad(format!("sample count {s} is not a power of two >= 8"));
            }
        }
        if self.meridian_steps == 0 {
            return bad("meridian_steps must be positive".into());
        }
        if let Some(d) = self.degree_cap {
            if d < self.active_modes() {
                return bad(format!("degree cap {d} is below the {} active modes", self.active_modes()));
            }
        }
        if !(self.cond_bound > 1.0 && self.residual_tol > 0.0) {
            return bad("cond_bound must exceed 1 and residual_tol be positive".into());
        }
        if !(self.min_overlap > 0.0 && self.min_overlap < 1.0) {
            return bad("min_overlap must lie in (0, 1)".into());
        }
        if !(self.max_phase_step > 0.0 && self.max_phase_step <= std::f64::consts::PI) {
            return bad("max_phase_step must lie in (0, π]".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_parse() {
        ExperimentConfig::default().validate().unwrap();
        let c = ExperimentConfig::from_json(r#"{"family": "null", "cutoffs": [4]}"#).unwrap();
        assert_eq!(c.family, Family::Null);
        assert_eq!(c.equator_samples, vec![256, 512]);
        assert!(ExperimentConfig::from_json(r#"{"cutoffs": [2]}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"loop_samples": 48}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"bogus": 1}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"degree_cap": 3}"#).is_err());
    }
}
