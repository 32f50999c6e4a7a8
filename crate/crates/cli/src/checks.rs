//! Invariant suites behind `fockgerbe check`. Every check reduces to one
//! measured defect compared against a fixed tolerance.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use fockgerbe::fock::{
    bilinear, brute_force_implementer, implementer, lambda_g, relative_phase, FockSpace,
};
use fockgerbe::linalg::{c64, hs_norm, identity, max_abs_diff};
use fockgerbe::modes::{
    decompose_ca, default_finite_lagrangian, random, retract, standard_lagrangian, sym_defect, zg, ModeBasis,
};
use fockgerbe::quatgeom::{beta_at, eta_at, stereo_north, stereo_south, transition_at, Quaternion, S4Point, Side};
use fockgerbe::torsorcech::{
    build_suspension_cover, cech_coboundary, dd_cocycle, evaluate_dual, suspension_forward,
    suspension_partial_inverse, torsor_dual, torsor_pair, winding_degree, CechCochain, CochainValue, IndexedCover,
    PhaseElement, PhaseGerbe, SectionTable, TorsorTag,
};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Cli, Suite};

#[derive(Serialize)]
struct Check {
    name: String,
    value: f64,
    tol: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.value <= self.tol
    }
}

struct Ctx {
    rng: ChaCha8Rng,
    trials: usize,
    cap: usize,
    out: Vec<Check>,
}

impl Ctx {
    fn record(&mut self, name: &str, value: f64, tol: f64) {
        // NaN counts as a failure
        let value = if value.is_nan() { f64::INFINITY } else { value };
        self.out.push(Check { name: name.to_string(), value, tol });
    }
}

pub fn run(suite: Suite, cli: &Cli) -> u8 {
    let mut ctx = Ctx {
        rng: random::rng(cli.seed),
        trials: cli.samples.unwrap_or(8).max(1),
        cap: cli.degree.unwrap_or(4),
        out: Vec::new(),
    };
    let suites: &[Suite] = match suite {
        Suite::All => &[Suite::Geom, Suite::Clifford, Suite::Modes, Suite::Torsor, Suite::Cech],
        s => std::slice::from_ref(match s {
            Suite::Geom => &Suite::Geom,
            Suite::Clifford => &Suite::Clifford,
            Suite::Modes => &Suite::Modes,
            Suite::Torsor => &Suite::Torsor,
            _ => &Suite::Cech,
        }),
    };
    for s in suites {
        match s {
            Suite::Geom => geom(&mut ctx),
            Suite::Clifford => clifford(&mut ctx),
            Suite::Modes => modes(&mut ctx),
            Suite::Torsor => torsor(&mut ctx),
            Suite::Cech => cech(&mut ctx),
            Suite::All => unreachable!(),
        }
    }
    for c in &ctx.out {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        println!("{tag} {} {:.3e} (tol {:.0e})", c.name, c.value, c.tol);
    }
    let failures: Vec<&Check> = ctx.out.iter().filter(|c| !c.passed()).collect();
    let summary = serde_json::json!({ "seed": cli.seed, "checks": ctx.out.len(), "failures": failures });
    println!("{summary}");
    if failures.is_empty() {
        0
    } else {
        1
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if q.norm() > 0.1 {
            return q.scale(1.0 / q.norm());
        }
    }
}

fn geom(ctx: &mut Ctx) {
    let mut ends: f64 = 0.0;
    let mut eta: f64 = 0.0;
    let mut chart: f64 = 0.0;
    let mut band: f64 = 0.0;
    for _ in 0..ctx.trials {
        let x = random_unit(&mut ctx.rng);
        ends = ends.max(beta_at(x, 0.0).dist(S4Point { z: Quaternion::ONE, y: 0.0 }));
        ends = ends.max(beta_at(x, PI).dist(S4Point { z: x, y: 0.0 }));
        for k in 0..16 {
            let s = 2.0 * PI * k as f64 / 16.0;
            // η_i = r · η_{−i} wherever both sections are defined
            if let (Ok(a), Ok(b), Ok(r)) = (eta_at(x, Side::PlusI, s), eta_at(x, Side::MinusI, s), transition_at(x, s)) {
                eta = eta.max(a.dist(b.left_mul(r)));
            }
        }
        // φ_S⁻¹(u) = (2ū, 1 − |u|²) / (1 + |u|²), and φ_N ∘ φ_S⁻¹ = u⁻¹
        let u = random_unit(&mut ctx.rng).scale(ctx.rng.gen_range(0.2..3.0));
        let d = 1.0 + u.norm_sqr();
        let p = S4Point { z: u.conj().scale(2.0 / d), y: (1.0 - u.norm_sqr()) / d };
        chart = chart.max(stereo_south(p).map(|v| v.dist(u)).unwrap_or(f64::INFINITY));
        chart = chart.max(stereo_north(p).map(|v| v.dist(u.inverse().unwrap())).unwrap_or(f64::INFINITY));
        // on span{1, j, k} the transition loop has Fourier band one
        let y = Quaternion::new(x.a, 0.0, x.c, x.d);
        let y = y.scale(1.0 / y.norm());
        for k in 0..16 {
            let s = 2.0 * PI * k as f64 / 16.0;
            let plus = (Quaternion::ONE + y).scale(0.5);
            let minus = (Quaternion::ONE - y).scale(0.5);
            let want = plus + minus.scale(s.cos()) - Quaternion::I.scale(s.sin() * minus.norm());
            band = band.max(transition_at(y, s).map(|v| v.dist(want)).unwrap_or(f64::INFINITY));
        }
    }
    let mut minus_one: f64 = 0.0;
    for k in 0..32 {
        let s = 2.0 * PI * k as f64 / 32.0;
        let r = transition_at(-Quaternion::ONE, s).map(|v| v.dist(Quaternion::new(s.cos(), -s.sin(), 0.0, 0.0)));
        minus_one = minus_one.max(r.unwrap_or(f64::INFINITY));
    }
    ctx.record("geom.beta_endpoints", ends, 1e-12);
    ctx.record("geom.eta_transition", eta, 1e-10);
    ctx.record("geom.chart_inverse", chart, 1e-12);
    ctx.record("geom.r_band_one", band, 1e-12);
    ctx.record("geom.r_minus_one", minus_one, 1e-12);
}

fn clifford(ctx: &mut Ctx) {
    for n in [2, 4] {
        for q in [0, 1] {
            let frame = standard_lagrangian(ModeBasis::new(n, q), &default_finite_lagrangian(n)).unwrap();
            let space = FockSpace::new(frame.clone(), ctx.cap.min(frame.dim()));
            let keep = space.basis.up_to_degree(ctx.cap.saturating_sub(1));
            let mut anti: f64 = 0.0;
            let mut herm: f64 = 0.0;
            for _ in 0..ctx.trials {
                let v = random::real_vector(frame.basis, &mut ctx.rng);
                let w = random::real_vector(frame.basis, &mut ctx.rng);
                let pv = space.clifford_matrix(&v);
                let pw = space.clifford_matrix(&w);
                herm = herm.max(max_abs_diff(&pv, &pv.adjoint()));
                let ac = &pv * &pw + &pw * &pv;
                let b = bilinear(&frame.basis, &v, &w) * 2.0;
                for &c in &keep {
                    for r in 0..space.dim() {
                        let want = if r == c { b } else { c64(0.0, 0.0) };
                        anti = anti.max((ac[(r, c)] - want).norm());
                    }
                }
            }
            ctx.record(&format!("clifford.anticommutator[n={n},Q={q}]"), anti, 1e-12);
            ctx.record(&format!("clifford.self_adjoint[n={n},Q={q}]"), herm, 1e-12);
        }
    }
}

fn modes(ctx: &mut Ctx) {
    let frame = standard_lagrangian(ModeBasis::new(2, 1), &default_finite_lagrangian(2)).unwrap();
    let basis = frame.basis;
    let d = basis.dim();
    let space = FockSpace::full(frame.clone());
    let (mut ca, mut round, mut sym) = (0.0f64, 0.0f64, 0.0f64);
    let (mut lam, mut oracle, mut hom) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..ctx.trials {
        let g = random::orthogonal(basis, 1, 0.7, &mut ctx.rng);
        let (c, a) = decompose_ca(&g.matrix, &frame.j);
        ca = ca.max(max_abs_diff(&(c.adjoint() * &c + a.adjoint() * &a), &identity(d)));
        ca = ca.max(hs_norm(&(c.adjoint() * &a + a.adjoint() * &c)));
        match zg(&g, &frame) {
            Ok(z) => {
                sym = sym.max(sym_defect(&z.matrix, &frame));
                let w = retract(&z.matrix, &frame).and_then(|w| zg(&w, &frame));
                round = round.max(w.map(|z2| max_abs_diff(&z2.matrix, &z.matrix)).unwrap_or(f64::INFINITY));
            }
            Err(_) => round = f64::INFINITY,
        }
        let g2 = random::orthogonal(basis, 1, 0.7, &mut ctx.rng);
        let s1 = space.image(&g).unwrap();
        let s21 = s1.image(&g2).unwrap();
        let composed = lambda_g(&g, &space, &s1)
            .and_then(|l1| Ok(lambda_g(&g2, &s1, &s21)?.compose(&l1)))
            .and_then(|l21| Ok(max_abs_diff(&l21.matrix, &lambda_g(&g2.compose(&g), &space, &s21)?.matrix)));
        lam = lam.max(composed.unwrap_or(f64::INFINITY));
        let r = implementer(&g, &space)
            .and_then(|u| Ok(max_abs_diff(&u.op.matrix, &brute_force_implementer(&g, &space)?.matrix)));
        oracle = oracle.max(r.unwrap_or(f64::INFINITY));
        // U_{g₂g₁} = z U_{g₂} U_{g₁} with |z| = 1
        let r = (|| -> fockgerbe::Result<f64> {
            let u1 = implementer(&g, &space)?.op.matrix;
            let u2 = implementer(&g2, &space)?.op.matrix;
            let u21 = implementer(&g2.compose(&g), &space)?.op.matrix;
            let prod = &u2 * &u1;
            let z = relative_phase(&u21, &prod);
            Ok(max_abs_diff(&u21, &(prod * z)).max((z.norm() - 1.0).abs()))
        })();
        hom = hom.max(r.unwrap_or(f64::INFINITY));
    }
    ctx.record("modes.c_a_identities", ca, 1e-12);
    ctx.record("modes.zg_is_sym", sym, 1e-10);
    ctx.record("modes.zg_retract_round_trip", round, 1e-10);
    ctx.record("modes.lambda_composition", lam, 1e-10);
    ctx.record("modes.implementer_matches_oracle", oracle, 1e-8);
    ctx.record("modes.implementer_projective", hom, 1e-8);
}

fn torsor(ctx: &mut Ctx) {
    let tag = TorsorTag::named("T");
    let (mut act, mut dual, mut mismatch) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..ctx.trials {
        let t = PhaseElement::from_angle(ctx.rng.gen_range(-PI..PI), tag.clone());
        let z = Complex64::from_polar(1.0, ctx.rng.gen_range(-PI..PI));
        let moved = t.act(z);
        act = act.max(torsor_pair(&moved, &t).map(|w| (w - z).norm()).unwrap_or(f64::INFINITY));
        let star = torsor_dual(&t);
        dual = dual.max(evaluate_dual(&star, &t).map(|w| (w - 1.0).norm()).unwrap_or(f64::INFINITY));
        dual = dual.max((torsor_dual(&star).value - t.value).norm());
        if torsor_dual(&star).tag != t.tag {
            dual = f64::INFINITY;
        }
        let other = PhaseElement::from_angle(0.0, TorsorTag::named("S"));
        if torsor_pair(&t, &other).is_ok() {
            mismatch = 1.0;
        }
    }
    ctx.record("torsor.pairing_recovers_action", act, 1e-12);
    ctx.record("torsor.dual_laws", dual, 1e-12);
    ctx.record("torsor.tag_mismatch_rejected", mismatch, 0.0);
}

fn random_cover(rng: &mut ChaCha8Rng) -> Arc<IndexedCover> {
    let n = 24;
    let mut sets = BTreeMap::new();
    for i in 0..4 {
        let mut pts: Vec<usize> = (0..4).collect();
        pts.extend((4..n).filter(|_| rng.gen_bool(0.5)));
        sets.insert(i, pts);
    }
    Arc::new(IndexedCover::new("random", n, sets))
}

fn random_cochain(cover: Arc<IndexedCover>, degree: usize, rng: &mut ChaCha8Rng) -> CechCochain {
    CechCochain::from_fn(cover, degree, |_, pts| {
        CochainValue::Sampled(pts.iter().map(|_| rng.gen_range(-PI..PI)).collect())
    })
}

fn cech(ctx: &mut Ctx) {
    let (mut dd2, mut trivial, mut rescale) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..ctx.trials {
        let cover = random_cover(&mut ctx.rng);
        for p in 0..2 {
            let c = random_cochain(cover.clone(), p, &mut ctx.rng);
            let r = cech_coboundary(&c).and_then(|d| cech_coboundary(&d)).and_then(|dd| dd.identity_defect());
            dd2 = dd2.max(r.unwrap_or(f64::INFINITY));
        }
        let eta = random_cochain(cover.clone(), 0, &mut ctx.rng);
        let h = random_cochain(cover.clone(), 1, &mut ctx.rng);
        let mut canonical: SectionTable<PhaseElement> = SectionTable::new();
        let mut scaled: SectionTable<PhaseElement> = SectionTable::new();
        for t in cover.nerve(1) {
            let (ei, ej) = (eta.angles_at(&t[..1]).unwrap(), eta.angles_at(&t[1..]).unwrap());
            let pts = cover.intersection(&t);
            let on_i = cover.intersection(&t[..1]);
            let on_j = cover.intersection(&t[1..]);
            let ha = h.angles_at(&t).unwrap();
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (k, p) in pts.iter().enumerate() {
                let ti = PhaseElement::from_angle(ei[on_i.binary_search(p).unwrap()], TorsorTag::named("T"));
                let tj = PhaseElement::from_angle(ej[on_j.binary_search(p).unwrap()], TorsorTag::named("T"));
                let s = PhaseGerbe::section(&ti, &tj);
                b.push(s.act(Complex64::from_polar(1.0, ha[k])));
                a.push(s);
            }
            canonical.insert((t[0], t[1]), a);
            scaled.insert((t[0], t[1]), b);
        }
        trivial = trivial.max(
            dd_cocycle(&PhaseGerbe, cover.clone(), &canonical)
                .and_then(|g| g.identity_defect())
                .unwrap_or(f64::INFINITY),
        );
        let r = dd_cocycle(&PhaseGerbe, cover.clone(), &scaled).and_then(|g| g.distance(&cech_coboundary(&h)?));
        rescale = rescale.max(r.unwrap_or(f64::INFINITY));
    }
    ctx.record("cech.delta_squared", dd2, 1e-12);
    ctx.record("cech.canonical_gerbe_trivial", trivial, 1e-12);
    ctx.record("cech.rescaling_is_coboundary", rescale, 1e-12);

    // suspension round trip on a cover whose sets 2, 3 are the whole circle
    let n = 32;
    let mut sets = BTreeMap::new();
    sets.insert(2, (0..n).collect());
    sets.insert(3, (0..n).collect());
    sets.insert(4, (0..n / 2 + 2).collect());
    sets.insert(5, (n / 2..n).collect());
    let base = IndexedCover::new("circle", n, sets);
    let mut worst: f64 = 0.0;
    let mut winding_ok = true;
    for _ in 0..ctx.trials {
        let k: i64 = ctx.rng.gen_range(-3..=3);
        let sc = build_suspension_cover(&base).unwrap();
        let h = CechCochain::from_fn(sc.base.clone(), 1, |t, pts| {
            let phase: Vec<f64> = pts.iter().map(|p| 2.0 * PI * k as f64 * *p as f64 / n as f64).collect();
            match (t[0], t[1]) {
                (2, 3) => CochainValue::Sampled(phase),
                (3, 4) | (3, 5) => CochainValue::Sampled(phase.iter().map(|a| -a).collect()),
                _ => CochainValue::Const(0.0),
            }
        });
        let r = suspension_forward(&sc, &h).and_then(|g| {
            let back = suspension_partial_inverse(&sc, &g)?;
            let w = winding_degree(&back.values_at(&[2, 3])?)?;
            winding_ok &= w == k;
            Ok(back.distance(&h)?.max(cech_coboundary(&g)?.identity_defect()?))
        });
        worst = worst.max(r.unwrap_or(f64::INFINITY));
    }
    ctx.record("cech.suspension_round_trip", worst, 1e-12);
    ctx.record("cech.suspension_winding", if winding_ok { 0.0 } else { 1.0 }, 0.0);

    let mut wind = 0.0f64;
    for _ in 0..ctx.trials {
        let k: i64 = ctx.rng.gen_range(-5..=5);
        let shift = ctx.rng.gen_range(-PI..PI);
        let v: Vec<Complex64> =
            (0..64).map(|p| Complex64::from_polar(1.0, shift + 2.0 * PI * k as f64 * p as f64 / 64.0)).collect();
        wind = wind.max(winding_degree(&v).map(|w| (w - k).abs() as f64).unwrap_or(f64::INFINITY));
    }
    ctx.record("cech.winding_of_exponentials", wind, 0.0);
}
