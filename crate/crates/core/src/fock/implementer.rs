use num_complex::Complex64;

use super::basis::{FockOperator, FockSpace, FockVector};
use super::lambda::lambda_g;
use super::quadratic::vacuum_vector;
use crate::linalg::{c64, hs_norm, null_space, CMat, CVec};
use crate::modes::TruncatedOperator;
use crate::{Error, Result};

/// Intertwining residual accepted for an implementer.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Fock dimension up to which the oracle solves the full Kronecker system.
pub const KRONECKER_MAX_DIM: usize = 32;

#[derive(Clone, Debug)]
pub struct Implementer {
    pub op: FockOperator,
    /// `UΩ`.
    pub vacuum: FockVector,
    /// `max_k ‖U π(e_k) − π(g e_k) U‖₂`.
    pub residual: f64,
}

/// Columns `U l_I = 2^{−k/2} π(g l_{i₁}) ⋯ π(g l_{i_k}) ψ`.
pub fn transport(space: &FockSpace, g: &CMat, psi: &CVec) -> CMat {
    let gens: Vec<_> = (0..space.frame.dim())
        .map(|i| space.clifford_sparse(&(g * space.frame.cols.column(i))))
        .collect();
    let b = &space.basis;
    let mut u = CMat::zeros(b.dim(), b.dim());
    u.set_column(0, psi);
    let inv_sqrt2 = c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for idx in 1..b.dim() {
        let s = b.subset(idx);
        let first = s.trailing_zeros() as usize;
        let rest = b.index_of(s & (s - 1)).expect("lower degree precedes");
        let col = gens[first].mul_vec(&u.column(rest).into_owned()) * inv_sqrt2;
        u.set_column(idx, &col);
    }
    u
}

pub fn intertwining_residual(space: &FockSpace, g: &CMat, u: &CMat) -> f64 {
    space
        .sparse_generators()
        .iter()
        .enumerate()
        .map(|(k, p)| {
            // π(g e_k), by linearity of π
            let moved = space.clifford_sparse(&g.column(k).into_owned());
            hs_norm(&(p.dense_mul(u) - moved.mul_dense(u)))
        })
        .fold(0.0, f64::max)
}

/// `⟨UΩ, Ω⟩ > 0`; when that overlap vanishes, the largest-magnitude entry of
/// `UΩ` (first one on ties) is made real positive instead.
pub fn fix_phase(u: &mut CMat) {
    let z = u[(0, 0)];
    let pivot = if z.norm() > 1e-9 {
        z
    } else {
        let col = u.column(0);
        let big = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        *col.iter().find(|z| z.norm() >= big * (1.0 - 1e-9)).unwrap()
    };
    *u *= pivot.conj() / pivot.norm();
}

/// Canonical implementer built from the quadratic-exponential vacuum.
pub fn implementer(g: &TruncatedOperator, space: &FockSpace) -> Result<Implementer> {
    g.require_orthogonal()?;
    let vac = vacuum_vector(g, space)?;
    let u = transport(space, &g.matrix, &vac.amps);
    let residual = intertwining_residual(space, &g.matrix, &u);
    if residual > RESIDUAL_TOL {
        return Err(Error::NonConverged(residual));
    }
    Ok(Implementer { op: space.operator(u), vacuum: vac, residual })
}

/// Independent oracle: solve `U π(e_k) = π(g e_k) U` directly. Small spaces use
/// the full Kronecker system; larger ones compute the vacuum as the common
/// kernel of `π(g l̄_j)` and transport it. Either way the solution space must
/// be one-dimensional.
pub fn brute_force_implementer(g: &TruncatedOperator, space: &FockSpace) -> Result<FockOperator> {
    g.require_orthogonal()?;
    let d = space.dim();
    let mut u = if d <= KRONECKER_MAX_DIM {
        kronecker_solution(space, &g.matrix)?
    } else {
        let psi = vacuum_by_kernel(space, &g.matrix)?;
        transport(space, &g.matrix, &psi)
    };
    let scale = hs_norm(&u) / (d as f64).sqrt();
    u /= c64(scale, 0.0);
    fix_phase(&mut u);
    Ok(space.operator(u))
}

fn kronecker_solution(space: &FockSpace, g: &CMat) -> Result<CMat> {
    let gens = space.clifford_generators();
    let d = space.dim();
    let id = CMat::identity(d, d);
    let mut normal = CMat::zeros(d * d, d * d);
    let mut pp = CMat::zeros(d, d);
    let mut gg = CMat::zeros(d, d);
    for (k, p) in gens.iter().enumerate() {
        let mut gk = CMat::zeros(d, d);
        for (j, pj) in gens.iter().enumerate() {
            if g[(j, k)].norm_sqr() != 0.0 {
                gk += pj * g[(j, k)];
            }
        }
        let pbar = p.map(|z| z.conj());
        pp += &pbar * p.transpose();
        gg += gk.adjoint() * &gk;
        normal -= pbar.kronecker(&gk);
        normal -= p.transpose().kronecker(&gk.adjoint());
    }
    normal += pp.kronecker(&id) + id.kronecker(&gg);
    let eig = ((&normal + normal.adjoint()) * c64(0.5, 0.0)).symmetric_eigen();
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let null: Vec<usize> = (0..d * d).filter(|&i| eig.eigenvalues[i] <= 1e-10 * top).collect();
    if null.len() != 1 {
        return Err(Error::DegenerateSolution(null.len()));
    }
    let v = eig.eigenvectors.column(null[0]);
    Ok(CMat::from_fn(d, d, |r, c| v[r + c * d]))
}

/// Common kernel of `π(g l̄_j)`, which must be a single line.
pub fn vacuum_by_kernel(space: &FockSpace, g: &CMat) -> Result<CVec> {
    let bar = space.frame.conj_cols();
    let d = space.dim();
    let m = space.frame.dim();
    let mut stacked = CMat::zeros(m * d, d);
    for j in 0..m {
        let a = space.clifford_matrix(&(g * bar.column(j)));
        stacked.view_mut((j * d, 0), (d, d)).copy_from(&a);
    }
    let (ns, _) = null_space(&stacked, 1e-10);
    if ns.ncols() != 1 {
        return Err(Error::DegenerateSolution(ns.ncols()));
    }
    Ok(ns.column(0).into_owned())
}

/// `T = Λ_g U_g* : F(L) → F(K)` for `K = gL`. Falls back to the oracle when
/// `C_g` is singular.
pub fn intertwiner(g: &TruncatedOperator, src: &FockSpace, dst: &FockSpace) -> Result<FockOperator> {
    let u = match implementer(g, src) {
        Ok(imp) => imp.op,
        Err(Error::SingularC(_)) => brute_force_implementer(g, src)?,
        Err(e) => return Err(e),
    };
    let lam = lambda_g(g, src, dst)?;
    Ok(lam.compose(&u.adjoint()))
}

/// `max_k ‖T π_L(e_k) − π_K(e_k) T‖₂`.
pub fn intertwiner_residual(t: &FockOperator, src: &FockSpace, dst: &FockSpace) -> f64 {
    let a = src.sparse_generators();
    let b = dst.sparse_generators();
    a.iter()
        .zip(&b)
        .map(|(pa, pb)| hs_norm(&(pa.dense_mul(&t.matrix) - pb.mul_dense(&t.matrix))))
        .fold(0.0, f64::max)
}

/// `z` with `a = z b`, from the Hilbert-Schmidt overlap.
pub fn relative_phase(a: &CMat, b: &CMat) -> Complex64 {
    crate::linalg::hs_inner(b, a) / crate::linalg::hs_inner(b, b)
}
