use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::chern::{ChernReport, ConvergenceRow, DegenerateRecord};
use super::config::Family;
use crate::torsorcech::unwrap_phases;
use crate::Result;

pub const CSV_HEADER: &str = "cutoff,equator_samples,index,theta,phi,x_a,x_b,x_c,x_d,band,commutator_hs,leakage,\
sigma_min_c,degenerate,residual,canonical_overlap,transition_re,transition_im";

/// Contents of `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub family: Family,
    pub degree: Option<i64>,
    pub abs_degree: Option<u64>,
    pub stable: bool,
    /// How the sign of `degree` is to be read.
    pub sign_convention: String,
    pub seed: Option<u64>,
    pub convergence: Vec<ConvergenceRow>,
    pub degenerate_points: Vec<DegenerateRecord>,
}

const SIGN_CONVENTION: &str = "degree = winding of h over phi, where psi_N = h psi_S on the equator; \
psi_N, psi_S are vacua parallel-transported from x = +1 and x = -1; the class of h^-1 is the connecting-map image";

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.12e}")).unwrap_or_default()
}

/// Writes `diagnostics.csv`, `summary.json` and `phase.txt` into `out` and
/// returns the summary. Output depends only on the report and the seed.
pub fn emit_report(report: &ChernReport, out: &Path, seed: Option<u64>) -> Result<Summary> {
    fs::create_dir_all(out)?;
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for run in &report.runs {
        for (k, p) in run.points.iter().enumerate() {
            let h = run.transition[k];
            writeln!(
                csv,
                "{},{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{},{:.12e},{:.12e},{:.12e},{},{},{},{:.12e},{:.12e}",
                run.cutoff,
                run.equator_samples,
                k,
                p.theta,
                p.phi,
                p.x.a,
                p.x.b,
                p.x.c,
                p.x.d,
                p.band,
                p.commutator_hs,
                p.leakage,
                p.sigma_min_c,
                p.degenerate as u8,
                opt(p.residual),
                opt(p.canonical_overlap),
                h.re,
                h.im
            )
            .expect("writing to a String");
        }
    }
    fs::write(out.join("diagnostics.csv"), csv)?;

    let mut phase = String::from("# phi transition_phase canonical_phase_north canonical_phase_south (unwrapped, rad)\n");
    if let Some(run) = report.runs.first() {
        writeln!(phase, "# cutoff {} equator_samples {} equator_theta {:.12e}", run.cutoff, run.equator_samples, run.equator_theta)
            .expect("writing to a String");
        let h = unwrap_phases(&run.transition.iter().map(|z| z.arg()).collect::<Vec<_>>());
        let unwrap_opt = |v: &[Option<num_complex::Complex64>]| -> Vec<Option<f64>> {
            let raw: Vec<f64> = v.iter().map(|z| z.map_or(0.0, |z| z.arg())).collect();
            unwrap_phases(&raw).into_iter().zip(v).map(|(a, z)| z.map(|_| a)).collect()
        };
        let cn = unwrap_opt(&run.canonical_phase);
        let cs = unwrap_opt(&run.canonical_phase_south);
        for (k, p) in run.points.iter().enumerate() {
            let f = |v: Option<f64>| v.map(|x| format!("{x:.12e}")).unwrap_or_else(|| "nan".into());
            writeln!(phase, "{:.12e} {:.12e} {} {}", p.phi, h[k], f(cn[k]), f(cs[k])).expect("writing to a String");
        }
    }
    fs::write(out.join("phase.txt"), phase)?;

    let summary = Summary {
        family: report.family,
        degree: report.degree,
        abs_degree: report.degree.map(|d| d.unsigned_abs()),
        stable: report.stable,
        sign_convention: SIGN_CONVENTION.into(),
        seed,
        convergence: report.rows.clone(),
        degenerate_points: report.degenerate_points.clone(),
    };
    fs::write(out.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    Ok(summary)
}

pub fn read_summary(path: &Path) -> Result<Summary> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::super::{chern_of_q, ExperimentConfig};
    use super::*;

    #[test]
    fn empty_run_writes_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let report = ChernReport {
            family: Family::Null,
            degree: None,
            stable: false,
            rows: vec![],
            degenerate_points: vec![],
            runs: vec![],
        };
        let s = emit_report(&report, dir.path(), None).unwrap();
        let csv = fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
        assert_eq!(csv, format!("{CSV_HEADER}\n"));
        assert_eq!(read_summary(&dir.path().join("summary.json")).unwrap(), s);
    }

    #[test]
    fn phase_column_has_no_jumps() {
        let cfg = ExperimentConfig {
            family: Family::Synthetic,
            cutoffs: vec![0],
            equator_samples: vec![32],
            meridian_steps: 12,
            ..Default::default()
        };
        let report = chern_of_q(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let s = emit_report(&report, dir.path(), Some(3)).unwrap();
        assert_eq!(read_summary(&dir.path().join("summary.json")).unwrap(), s);
        let text = fs::read_to_string(dir.path().join("phase.txt")).unwrap();
        let col: Vec<f64> = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
            .collect();
        assert_eq!(col.len(), 32);
        assert!(col.windows(2).all(|w| (w[1] - w[0]).abs() < std::f64::consts::PI));
        let total = col[31] - col[0];
        assert!((total.abs() - 2.0 * std::f64::consts::PI).abs() < 2.0 * std::f64::consts::PI / 16.0 + 1e-9);
    }
}
