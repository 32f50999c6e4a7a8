use std::path::{Path, PathBuf};

use fockgerbe::fock::{
    brute_force_implementer, implementer as canonical_implementer, intertwiner, intertwiner_residual, lambda_g,
    relative_phase, FockSpace, KRONECKER_MAX_DIM,
};
use fockgerbe::hopf::{chern_of_q, emit_report, window_lagrangian, ExperimentConfig};
use fockgerbe::linalg::{max_abs_diff, min_singular_value, unitarity_defect, CMat};
use fockgerbe::modes::{
    canonical_conjugator, default_finite_lagrangian, hs_commutator_norm, multiplication_operator,
    standard_lagrangian, CoeffEntry, FourierLoop, LagrangianFrame, ModeBasis, TruncatedOperator,
};
use fockgerbe::torsorcech::{
    build_suspension_cover, cech_coboundary, dd_cocycle, suspension_forward, suspension_partial_inverse,
    winding_degree, CechCochain, CochainFile, IndexedCover, PhaseElement, PhaseGerbe, SectionTable, TorsorTag,
};
use fockgerbe::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::Cli;

fn read_json<T: for<'de> Deserialize<'de>>(path: Option<&PathBuf>, what: &str) -> Result<T> {
    let path = path.ok_or_else(|| Error::Config(format!("{what} needs --config FILE")))?;
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Prints `value` and, with `--out`, writes it to `<out>/<name>`.
fn emit(value: &Value, out: Option<&Path>, name: &str) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    println!("{text}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(name), text + "\n")?;
    }
    Ok(())
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LoopInput {
    Entries(Vec<CoeffEntry>),
    Wrapped { coeffs: Vec<CoeffEntry> },
}

pub fn implementer(cli: &Cli) -> Result<u8> {
    let input: LoopInput = read_json(cli.config.as_ref(), "implementer")?;
    let entries = match input {
        LoopInput::Entries(e) | LoopInput::Wrapped { coeffs: e } => e,
    };
    let sigma = FourierLoop::from_entries(&entries)?;
    let defect = sigma.orthogonality_defect();
    if defect > 1e-8 {
        return Err(Error::NonOrthogonal(defect));
    }
    let n = sigma.n;
    let band = sigma.band();
    let cutoff = cli.cutoff.unwrap_or((3 * band).max(1));
    let basis = ModeBasis::new(n, cutoff);
    let fin = default_finite_lagrangian(n);
    let frame = standard_lagrangian(basis, &fin)?;
    let mo = multiplication_operator(basis, &sigma, cli.strict)?;
    let comm = hs_commutator_norm(&frame.j, &mo.op.matrix);
    let mut report = json!({
        "n": n,
        "band": band,
        "cutoff": cutoff,
        "seed": cli.seed,
        "leakage": mo.leakage,
        "commutator_hs": comm,
    });
    let obj = report.as_object_mut().unwrap();

    if mo.op.orthogonal {
        let cap = cli.degree.unwrap_or(frame.dim()).min(frame.dim());
        let space = FockSpace::new(frame.clone(), cap);
        let imp = match canonical_implementer(&mo.op, &space) {
            Ok(imp) => (imp.op, imp.residual, "canonical"),
            Err(Error::SingularC(_)) => {
                let op = brute_force_implementer(&mo.op, &space)?;
                let r = fockgerbe::fock::intertwining_residual(&space, &mo.op.matrix, &op.matrix);
                (op, r, "oracle")
            }
            Err(e) => return Err(e),
        };
        let (u, residual, how) = imp;
        obj.insert("mode".into(), json!("truncated"));
        obj.insert("method".into(), json!(how));
        obj.insert("fock_dim".into(), json!(space.dim()));
        obj.insert("degree_cap".into(), json!(cap));
        obj.insert("residual".into(), json!(residual));
        obj.insert("unitarity_defect".into(), json!(u.unitarity_defect()));
        obj.insert("vacuum_overlap".into(), json!(pair(u.matrix[(0, 0)])));
        if space.dim() <= 4 * KRONECKER_MAX_DIM && how == "canonical" {
            let oracle = brute_force_implementer(&mo.op, &space)?;
            obj.insert("oracle_defect".into(), json!(max_abs_diff(&oracle.matrix, &u.matrix)));
        }
        if comm < 1e-10 {
            // g preserves L, so U is Λ_g up to a phase; writing Λ_g in L's
            // own frame puts both in the same basis
            let lam = lambda_g(&mo.op, &space, &space)?;
            let z = relative_phase(&u.matrix, &lam.matrix);
            obj.insert("lambda_phase".into(), json!(pair(z)));
            obj.insert("lambda_defect".into(), json!(max_abs_diff(&u.matrix, &(&lam.matrix * z))));
        }
        let ok = residual <= fockgerbe::fock::RESIDUAL_TOL;
        emit(&report, cli.out.as_deref(), "implementer.json")?;
        return Ok(if ok { 0 } else { 1 });
    }

    // g does not preserve the truncated space: use the exact window reduction
    let m = window_lagrangian(&frame, &mo.op.matrix, band)?;
    let frame_w = standard_lagrangian(ModeBasis::new(n, band), &fin)?;
    let cap = cli.degree.unwrap_or(frame_w.dim()).min(frame_w.dim());
    let space = FockSpace::new(frame_w.clone(), cap);
    let sigma_c = min_singular_value(&(frame_w.cols.adjoint() * &m.cols));
    let (gw, how) = match canonical_conjugator(&frame_w.j_operator(), &m.j_operator()) {
        Ok(gw) => (gw, "canonical"),
        Err(Error::TooFar(_)) => (frame_map(&frame_w, &m), "frame"),
        Err(e) => return Err(e),
    };
    let dst = space.image(&gw)?;
    let t = intertwiner(&gw, &space, &dst)?;
    let residual = intertwiner_residual(&t, &space, &dst);
    obj.insert("mode".into(), json!("window"));
    obj.insert("method".into(), json!(how));
    obj.insert("window_modes".into(), json!(frame_w.dim()));
    obj.insert("fock_dim".into(), json!(space.dim()));
    obj.insert("degree_cap".into(), json!(cap));
    obj.insert("sigma_min_c".into(), json!(sigma_c));
    obj.insert("residual".into(), json!(residual));
    obj.insert("unitarity_defect".into(), json!(unitarity_defect(&t.matrix)));
    obj.insert("vacuum_overlap".into(), json!(pair(t.matrix[(0, 0)])));
    let ok = residual <= fockgerbe::fock::RESIDUAL_TOL;
    emit(&report, cli.out.as_deref(), "implementer.json")?;
    Ok(if ok { 0 } else { 1 })
}

/// The real unitary with `l_i ↦ m_i` and `Σl_i ↦ Σm_i`, used when `J` and
/// `K` are too far apart for the canonical conjugator.
fn frame_map(src: &LagrangianFrame, dst: &LagrangianFrame) -> TruncatedOperator {
    let full = |f: &LagrangianFrame| {
        let bar = f.conj_cols();
        let mut m = CMat::zeros(f.basis.dim(), 2 * f.dim());
        m.columns_mut(0, f.dim()).copy_from(&f.cols);
        m.columns_mut(f.dim(), f.dim()).copy_from(&bar);
        m
    };
    TruncatedOperator::new(src.basis, full(dst) * full(src).adjoint())
}

#[derive(Deserialize)]
struct SectionInput {
    i: i64,
    j: i64,
    /// One angle per point of `U_i ∩ U_j`, or a single constant.
    angles: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DdInput {
    cover: IndexedCover,
    sections: Vec<SectionInput>,
}

fn point_tag(i: i64) -> TorsorTag {
    TorsorTag::Named(format!("P{i}"))
}

pub fn dd(cli: &Cli) -> Result<u8> {
    let input: DdInput = read_json(cli.config.as_ref(), "dd")?;
    let cover = std::sync::Arc::new(input.cover);
    let mut table = SectionTable::new();
    let gerbe = PhaseGerbe;
    for s in &input.sections {
        let pts = cover.intersection(&[s.i, s.j]);
        let angles = match s.angles.len() {
            1 => vec![s.angles[0]; pts.len()],
            k if k == pts.len() => s.angles.clone(),
            k => {
                return Err(Error::Shape(format!(
                    "section ({}, {}) has {k} angles for {} points",
                    s.i,
                    s.j,
                    pts.len()
                )))
            }
        };
        let secs = angles
            .iter()
            .map(|&a| {
                let t = PhaseElement::from_angle(a, point_tag(s.i));
                PhaseGerbe::section(&t, &PhaseElement::from_angle(0.0, point_tag(s.j)))
            })
            .collect();
        table.insert((s.i, s.j), secs);
    }
    let g = dd_cocycle(&gerbe, cover, &table)?;
    let coboundary = cech_coboundary(&g)?;
    let report = json!({
        "seed": cli.seed,
        "cocycle": g.to_file(),
        "identity_defect": g.identity_defect()?,
        "coboundary_defect": coboundary.identity_defect()?,
    });
    emit(&report, cli.out.as_deref(), "dd.json")?;
    Ok(0)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuspendInput {
    cover: IndexedCover,
    cochain: CochainFile,
}

#[derive(Serialize)]
struct LoopWinding {
    tuple: Vec<i64>,
    degree: i64,
}

/// Windings of the entries of a 1-cochain whose intersection is the whole
/// base circle, i.e. genuine loops.
fn loop_windings(h: &CechCochain) -> Result<Vec<LoopWinding>> {
    let mut out = Vec::new();
    for tuple in h.cover.nerve(1) {
        let pts = h.cover.intersection(&tuple);
        if pts.len() != h.cover.n_points {
            continue;
        }
        let angles = h.angles_at(&tuple)?;
        let values: Vec<Complex64> = angles.iter().map(|a| Complex64::from_polar(1.0, *a)).collect();
        out.push(LoopWinding { tuple, degree: winding_degree(&values)? });
    }
    Ok(out)
}

pub fn suspend(cli: &Cli) -> Result<u8> {
    let input: SuspendInput = read_json(cli.config.as_ref(), "suspend")?;
    let base = input.cover;
    let susp = build_suspension_cover(&base)?;
    let report = match input.cochain.degree {
        1 => {
            let h = CechCochain::from_file(std::sync::Arc::new(base), &input.cochain)?;
            let g = suspension_forward(&susp, &h)?;
            let back = suspension_partial_inverse(&susp, &g)?;
            json!({
                "seed": cli.seed,
                "direction": "forward",
                "suspension_cover": &*susp.sigma,
                "cocycle": g.to_file(),
                "coboundary_defect": cech_coboundary(&g)?.identity_defect()?,
                "round_trip_distance": back.distance(&h)?,
                "windings": loop_windings(&h)?,
            })
        }
        2 => {
            let g = CechCochain::from_file(susp.sigma.clone(), &input.cochain)?;
            let h = suspension_partial_inverse(&susp, &g)?;
            json!({
                "seed": cli.seed,
                "direction": "inverse",
                "cochain": h.to_file(),
                "windings": loop_windings(&h)?,
            })
        }
        d => return Err(Error::Config(format!("suspend takes a 1- or 2-cochain, got degree {d}"))),
    };
    emit(&report, cli.out.as_deref(), "suspend.json")?;
    Ok(0)
}

pub fn hopf(cli: &Cli) -> Result<u8> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::from_json(&std::fs::read_to_string(p)?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(q) = cli.cutoff {
        cfg.cutoffs = vec![q];
    }
    if let Some(s) = cli.samples {
        cfg.equator_samples = vec![s];
    }
    if cli.degree.is_some() {
        cfg.degree_cap = cli.degree;
    }
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("hopf-out"));
    cfg.validate()?;
    let report = chern_of_q(&cfg)?;
    let summary = emit_report(&report, &out, Some(cli.seed))?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    if !report.stable {
        eprintln!("degree is not stable across the convergence grid");
        return Ok(1);
    }
    if cli.strict && !report.degenerate_points.is_empty() {
        eprintln!("{} degenerate point(s) under --strict", report.degenerate_points.len());
        return Ok(1);
    }
    Ok(0)
}
