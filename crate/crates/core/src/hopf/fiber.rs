use super::config::{ExperimentConfig, Family, ACTIVE_WINDOW};
use crate::fock::{intertwiner, intertwiner_residual, FockSpace};
use crate::linalg::{
    c64, expm, hs_norm, inner, min_singular_value, CMat, CVec, SparseMat,
};
use crate::modes::{
    canonical_conjugator, default_finite_lagrangian, hs_commutator_norm, multiplication_operator, standard_lagrangian,
    FourierLoop, LagrangianFrame, ModeBasis,
};
use crate::quatgeom::{transition_loop_r, Quaternion, SampledLoop};
use crate::{Error, Result};

/// Fourier blocks below this norm are FFT roundoff and are discarded.
const COEFF_FLOOR: f64 = 1e-12;
const NULL_TOL: f64 = 1e-10;
const KERNEL_TOL: f64 = 1e-9;
/// Eigenvalues of `P_W P_{gV} P_W` this close to one count as `gL ∩ W`.
const WINDOW_TOL: f64 = 1e-8;

/// `cos θ + sin θ (cos φ j + sin φ k)`: the 2-sphere in `span{1, j, k}` with
/// poles `±1`.
pub fn sphere_point(theta: f64, phi: f64) -> Quaternion {
    Quaternion::new(theta.cos(), 0.0, theta.sin() * phi.cos(), theta.sin() * phi.sin())
}

/// Everything computed at one point of the sphere.
#[derive(Clone, Debug)]
pub struct FiberGerbeData {
    pub theta: f64,
    pub phi: f64,
    pub x: Quaternion,
    pub band: usize,
    /// `‖[J, g]‖₂` on the truncated space.
    pub commutator_hs: f64,
    /// Fourier mass of `g` dropped by the truncation.
    pub leakage: f64,
    /// `σ_min(C_g)`, read off as the smallest singular value of `L* gL`.
    pub sigma_min_c: f64,
    pub degenerate: bool,
    /// Residual of the canonical intertwiner; absent at degenerate points.
    pub residual: Option<f64>,
    /// `|⟨ψ_canonical, ψ_kernel⟩|`, which is 1 when the torsor is a line.
    pub canonical_overlap: Option<f64>,
    /// Window part of `g(x)L`.
    pub frame: LagrangianFrame,
    /// Unit vacuum of `g(x)L` in `F(L ∩ W)`, phase by convention.
    pub vacuum: CVec,
    /// `T*Ω` for the canonical intertwiner `T`.
    pub canonical_vacuum: Option<CVec>,
}

impl FiberGerbeData {
    pub fn accepted(&self, tol: f64) -> bool {
        !self.degenerate
            && self.residual.is_some_and(|r| r <= tol)
            && self.canonical_overlap.is_some_and(|o| (o - 1.0).abs() <= tol)
    }
}

/// `g(x)L ∩ W` together with the loop data it came from.
#[derive(Clone, Debug)]
pub struct WindowImage {
    pub frame: LagrangianFrame,
    pub band: usize,
    /// Fourier mass dropped by the truncation.
    pub leakage: f64,
    /// The truncated operator `g(x)`.
    pub g: CMat,
}

/// Shared, point-independent data for one family at one cutoff.
#[derive(Clone, Debug)]
pub struct FiberContext {
    pub family: Family,
    pub cutoff: usize,
    pub window: ModeBasis,
    pub frame_w: LagrangianFrame,
    pub space: FockSpace,
    big: Option<LagrangianFrame>,
    loop_samples: usize,
    cond_bound: f64,
}

/// Generator of the rotation taking `e_a` towards `e_b`.
fn rotation_generator(a: usize, b: usize, angle: f64) -> CMat {
    let mut k = CMat::zeros(4, 4);
    k[(b, a)] = c64(angle, 0.0);
    k[(a, b)] = c64(-angle, 0.0);
    k
}

/// Left multiplication by `1`, as a loop.
fn constant_loop(samples: usize) -> Result<SampledLoop<Quaternion>> {
    SampledLoop::from_fn(samples, |_| Ok(Quaternion::ONE))
}

/// Kernel of `N = 2·(number operator)` on `m` modes through the exact
/// projector `Π_k (1 − N/2k)`, applied to `Ω` or, if `Ω` is nearly
/// orthogonal to the kernel, to every basis vector. `None` when the result
/// fails the kernel check.
fn number_projection(n: &SparseMat, m: usize) -> Option<CVec> {
    let d = n.nrows;
    let project = |mut x: CMat| {
        for k in 1..=m {
            let nx = n.mul_dense(&x);
            x -= nx * c64(1.0 / (2 * k) as f64, 0.0);
        }
        x
    };
    let mut start = CMat::zeros(d, 1);
    start[(0, 0)] = c64(1.0, 0.0);
    let mut v = project(start).column(0).into_owned();
    if v.norm() < 0.1 {
        let all = project(CMat::identity(d, d));
        let best = (0..d).max_by(|a, b| all.column(*a).norm().total_cmp(&all.column(*b).norm()))?;
        v = all.column(best).into_owned();
    }
    let norm = v.norm();
    if norm < 1e-3 {
        return None;
    }
    v /= c64(norm, 0.0);
    (n.mul_vec(&v).norm() <= KERNEL_TOL).then_some(v)
}

/// Phase convention for vacua: `⟨ψ, Ω⟩ > 0`, or the largest entry real
/// positive when that overlap vanishes.
fn fix_vector_phase(v: &mut CVec) {
    let z = v[0];
    let pivot = if z.norm() > 1e-9 {
        z
    } else {
        let big = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        *v.iter().find(|z| z.norm() >= big * (1.0 - 1e-9)).unwrap()
    };
    *v *= pivot.conj() / pivot.norm();
}

impl FiberContext {
    pub fn new(family: Family, cutoff: usize, cfg: &ExperimentConfig) -> Result<Self> {
        let n = cfg.n;
        let fin = default_finite_lagrangian(n);
        let window = ModeBasis::new(n, if family == Family::Synthetic { 0 } else { ACTIVE_WINDOW });
        let frame_w = standard_lagrangian(window, &fin)?;
        let big = match family {
            Family::Synthetic => None,
            _ => Some(standard_lagrangian(ModeBasis::new(n, cutoff), &fin)?),
        };
        let cap = cfg.degree_cap.unwrap_or(frame_w.dim()).min(frame_w.dim());
        let space = FockSpace::new(frame_w.clone(), cap);
        Ok(Self { family, cutoff, window, frame_w, space, big, loop_samples: cfg.loop_samples, cond_bound: cfg.cond_bound })
    }

    /// Window part of `g(x)L` with `x = sphere_point(θ, φ)`.
    pub fn lagrangian(&self, theta: f64, phi: f64) -> Result<WindowImage> {
        let Some(big) = &self.big else {
            // e^{φK} preserves L and ΣL and turns l₀ by a phase; e^{πY} maps L to ΣL
            let g = expm(&rotation_generator(0, 1, phi)) * expm(&rotation_generator(1, 3, theta));
            let frame = LagrangianFrame::new(self.window, &g * &self.frame_w.cols)?;
            return Ok(WindowImage { frame, band: 0, leakage: 0.0, g });
        };
        let lp = match self.family {
            Family::Null => constant_loop(self.loop_samples)?,
            _ => transition_loop_r(sphere_point(theta, phi), self.loop_samples)?,
        };
        let mut sigma = FourierLoop::from_quaternion_loop(&lp)?;
        let mut dropped = 0.0;
        sigma.coeffs.retain(|_, m| {
            let h = hs_norm(m);
            if h <= COEFF_FLOOR {
                dropped += h * h;
            }
            h > COEFF_FLOOR
        });
        if sigma.band() > ACTIVE_WINDOW {
            let extra: f64 = sigma.coeffs.iter().filter(|(q, _)| q.unsigned_abs() as usize > ACTIVE_WINDOW).map(|(_, m)| hs_norm(m)).sum();
            return Err(Error::BandTooWide { leakage: extra });
        }
        let mo = multiplication_operator(big.basis, &sigma, false)?;
        let frame = window_lagrangian(big, &mo.op.matrix, ACTIVE_WINDOW)?;
        let leakage = (mo.leakage.powi(2) + dropped).sqrt();
        Ok(WindowImage { frame, band: sigma.band(), leakage, g: mo.op.matrix })
    }

    /// `‖[J, g]‖₂` on the space `g` acts on.
    fn commutator(&self, g: &CMat) -> f64 {
        let j = self.big.as_ref().map_or(&self.frame_w.j, |b| &b.j);
        hs_commutator_norm(j, g)
    }

    /// Unit vector spanning the common kernel of `π(m̄)` for `m` in the
    /// frame, i.e. the vacuum line of that Lagrangian.
    pub fn vacuum(&self, frame: &LagrangianFrame) -> Result<CVec> {
        let d = self.space.dim();
        let m = frame.dim();
        let mut normal = CMat::zeros(d, d);
        for j in 0..m {
            normal += self.space.clifford_sparse(&self.window.sigma(&frame.col(j))).gram();
        }
        // Σ π(m̄_j)*π(m̄_j) is twice the number operator of the frame, so
        // without a cap its spectrum is exactly {0, 2, …, 2m}
        if self.space.basis.cap >= m {
            if let Some(mut v) = number_projection(&SparseMat::from_dense(&normal), m) {
                fix_vector_phase(&mut v);
                return Ok(v);
            }
        }
        let eig = normal.symmetric_eigen();
        let top = eig.eigenvalues.iter().cloned().fold(1.0, f64::max);
        let null: Vec<usize> = (0..d).filter(|k| eig.eigenvalues[*k] <= NULL_TOL * top).collect();
        if null.len() != 1 {
            return Err(Error::DegenerateSolution(null.len()));
        }
        let mut v = eig.eigenvectors.column(null[0]).into_owned();
        fix_vector_phase(&mut v);
        Ok(v)
    }

    pub fn vacuum_at(&self, theta: f64, phi: f64) -> Result<CVec> {
        self.vacuum(&self.lagrangian(theta, phi)?.frame)
    }

    /// Full diagnostics including the canonical intertwiner.
    pub fn fiber(&self, theta: f64, phi: f64) -> Result<FiberGerbeData> {
        let WindowImage { frame, band, leakage, g } = self.lagrangian(theta, phi)?;
        let commutator_hs = self.commutator(&g);
        let vacuum = self.vacuum(&frame)?;
        let sigma_min_c = min_singular_value(&(self.frame_w.cols.adjoint() * &frame.cols));
        let degenerate = sigma_min_c * self.cond_bound < 1.0;
        let (residual, canonical_overlap, canonical_vacuum) = if degenerate {
            (None, None, None)
        } else {
            let gw = canonical_conjugator(&self.frame_w.j_operator(), &frame.j_operator())?;
            let dst = self.space.image(&gw)?;
            let t = intertwiner(&gw, &self.space, &dst)?;
            let res = intertwiner_residual(&t, &self.space, &dst);
            let psi = t.matrix.adjoint().column(0).into_owned();
            let ov = inner(&psi, &vacuum).norm();
            (Some(res), Some(ov), Some(psi))
        };
        Ok(FiberGerbeData {
            theta,
            phi,
            x: sphere_point(theta, phi),
            band,
            commutator_hs,
            leakage,
            sigma_min_c,
            degenerate,
            residual,
            canonical_overlap,
            frame,
            vacuum,
            canonical_vacuum,
        })
    }
}

/// `gL ∩ W` for the window `W = {|q| ≤ band}`, given the standard frame `L`
/// at cutoff `Q ≥ 3·band` and the truncated multiplication operator `g` of a
/// loop of Fourier band `band`. Outside `W` the two Lagrangians agree, so the
/// result is a Lagrangian of `W` with `n·band + n/2` modes.
pub fn window_lagrangian(frame: &LagrangianFrame, g: &CMat, band: usize) -> Result<LagrangianFrame> {
    let basis = frame.basis;
    let n = basis.n;
    if basis.cutoff < 3 * band {
        return Err(Error::Config(format!("cutoff {} is below three times the band {band}", basis.cutoff)));
    }
    // columns of L supported in |q| ≤ Q − band are mapped isometrically, and
    // they span every v ∈ L with gv ∈ W; so gL ∩ W is the eigenvalue-one
    // eigenspace of P_W P_{gV} P_W on W
    let keep = n / 2 + n * (basis.cutoff - band);
    let inside = basis.window_indices(band);
    let rows = CMat::from_fn(inside.len(), basis.dim(), |r, c| g[(inside[r], c)]);
    let gv = rows * frame.cols.columns(0, keep);
    let eig = (&gv * gv.adjoint()).symmetric_eigen();
    let mut order: Vec<usize> = (0..inside.len()).collect();
    order.sort_by(|a, b| eig.eigenvalues[*b].total_cmp(&eig.eigenvalues[*a]));
    let m = n * band + n / 2;
    let found = order.iter().filter(|k| eig.eigenvalues[**k] >= 1.0 - WINDOW_TOL).count();
    if found != m {
        return Err(Error::DegenerateSolution(found));
    }
    let cols = CMat::from_fn(inside.len(), m, |r, c| eig.eigenvectors[(r, order[c])]);
    LagrangianFrame::new(ModeBasis::new(n, band), cols)
}

/// Fibre data of the main family at a point `x` of the sphere in
/// `span{1, j, k}`.
pub fn fiber_transition(x: Quaternion, cutoff: usize, cfg: &ExperimentConfig) -> Result<FiberGerbeData> {
    let norm = x.norm();
    if (norm - 1.0).abs() > 1e-10 || x.b.abs() > 1e-10 {
        return Err(Error::NotOnSphere((norm - 1.0).abs().max(x.b.abs())));
    }
    let theta = x.a.clamp(-1.0, 1.0).acos();
    let phi = x.d.atan2(x.c);
    FiberContext::new(Family::Main, cutoff, cfg)?.fiber(theta, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn identity_at_north_pole() {
        let cfg = ExperimentConfig::default();
        let f = fiber_transition(Quaternion::ONE, 4, &cfg).unwrap();
        assert_eq!(f.band, 0);
        assert!(f.commutator_hs < 1e-12);
        assert!((f.sigma_min_c - 1.0).abs() < 1e-12);
        assert!(f.accepted(1e-8));
        let mut e0 = CVec::zeros(f.vacuum.len());
        e0[0] = c64(1.0, 0.0);
        assert!((&f.vacuum - &e0).norm() < 1e-12);
        assert!((f.canonical_vacuum.unwrap() - e0).norm() < 1e-12);
    }

    #[test]
    fn south_pole_commutator_matches_block_formula() {
        // r(−1)(s) = cos s − i sin s, so g has blocks σ₀ = 0 and
        // σ_{±1} = ½(1 ± i·Lᵢ) with Lᵢ left multiplication by i.
        let cfg = ExperimentConfig::default();
        let q = 4;
        let f = fiber_transition(-Quaternion::ONE, q, &cfg).unwrap();
        assert_eq!(f.band, 1);
        let li = crate::quatgeom::so4_of_quat(Quaternion::I).unwrap();
        let li = CMat::from_fn(4, 4, |r, c| c64(li[(r, c)], 0.0));
        let half = c64(0.5, 0.0);
        let s_plus = (CMat::identity(4, 4) + &li * c64(0.0, 1.0)) * half;
        let s_minus = (CMat::identity(4, 4) - &li * c64(0.0, 1.0)) * half;
        // J is i on q > 0, −i on q < 0 and J₀ on the constant modes
        let fin = default_finite_lagrangian(4);
        let bar = fin.map(|z| z.conj());
        let j0 = (&fin * fin.adjoint() - &bar * bar.adjoint()) * c64(0.0, 1.0);
        let i4 = CMat::identity(4, 4) * c64(0.0, 1.0);
        let blk = |jp: &CMat, s: &CMat, jq: &CMat| hs_norm(&(jp * s - s * jq)).powi(2);
        // only blocks touching q = 0 or crossing from −1 to 0 and 0 to 1 fail to commute
        let expected = (blk(&j0, &s_plus, &(-&i4)) + blk(&i4, &s_plus, &j0) + blk(&j0, &s_minus, &i4) + blk(&(-&i4), &s_minus, &j0)).sqrt();
        assert!((f.commutator_hs - expected).abs() < 1e-10, "{} vs {}", f.commutator_hs, expected);
    }

    #[test]
    fn equator_points_are_accepted() {
        let cfg = ExperimentConfig::default();
        for k in 0..4 {
            let phi = k as f64 * 1.3;
            let f = FiberContext::new(Family::Main, 4, &cfg).unwrap().fiber(std::f64::consts::FRAC_PI_2, phi).unwrap();
            assert!(f.residual.unwrap() <= 1e-8, "residual {:?}", f.residual);
            assert!((f.canonical_overlap.unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn window_lagrangian_does_not_depend_on_cutoff() {
        let cfg = ExperimentConfig::default();
        let a = FiberContext::new(Family::Main, 3, &cfg).unwrap().lagrangian(1.1, 0.4).unwrap().frame;
        let b = FiberContext::new(Family::Main, 8, &cfg).unwrap().lagrangian(1.1, 0.4).unwrap().frame;
        let pa = &a.cols * a.cols.adjoint();
        let pb = &b.cols * b.cols.adjoint();
        assert!(max_abs_diff(&pa, &pb) < 1e-10);
    }
}
