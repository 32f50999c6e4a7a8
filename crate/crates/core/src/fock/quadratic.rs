use num_complex::Complex64;

use super::basis::{FockSpace, FockVector};
use crate::linalg::{c64, CMat};
use crate::modes::{sym_defect, zg, TruncatedOperator};
use crate::{Error, Result};

/// `ζ = √2 Σ_{j<p} ⟨Z l̄_j, l_p⟩ l_j ∧ l_p`, inverse of the isometry `τ`.
pub fn tau_inverse(z: &CMat, space: &FockSpace) -> Result<FockVector> {
    let d = sym_defect(z, &space.frame);
    if d > 1e-9 {
        return Err(Error::NotSym(d));
    }
    if space.basis.cap < 2 && space.frame.dim() >= 2 {
        return Err(Error::Shape("degree cap below 2".into()));
    }
    let m = space.frame.dim();
    let zl = z * space.frame.conj_cols();
    let proj = space.frame.cols.adjoint() * zl; // (p, j) = ⟨Z l̄_j, l_p⟩
    let mut out = FockVector::zeros(space.basis.clone());
    for j in 0..m {
        for p in (j + 1)..m {
            let idx = space.basis.index_of(1 << j | 1 << p).unwrap();
            out.amps[idx] = proj[(p, j)] * std::f64::consts::SQRT_2;
        }
    }
    Ok(out)
}

/// `τ(ζ) = Z_ζ/√2` with `⟨ζ, x ∧ y⟩ = ⟨Z_ζ Σx, y⟩`, extended to `L` by `ΣZΣ`.
pub fn tau(zeta: &FockVector, space: &FockSpace) -> CMat {
    let f = &space.frame;
    let m = f.dim();
    let bar = f.conj_cols();
    let d = f.basis.dim();
    let mut z = CMat::zeros(d, d);
    for j in 0..m {
        let mut img = crate::linalg::CVec::zeros(d);
        for p in 0..m {
            if p == j {
                continue;
            }
            let (lo, hi, sign) = if j < p { (j, p, 1.0) } else { (p, j, -1.0) };
            if let Some(idx) = space.basis.index_of(1 << lo | 1 << hi) {
                img += f.cols.column(p) * (zeta.amps[idx] * sign);
            }
        }
        img /= c64(std::f64::consts::SQRT_2, 0.0);
        let img_bar = f.basis.sigma(&img);
        z += &img * bar.column(j).adjoint();
        z += img_bar * f.cols.column(j).adjoint();
    }
    z
}

/// Hilbert-Schmidt inner product of the restrictions to `ΣL`, the Hilbert
/// structure under which `τ` is isometric.
pub fn sym_inner(z1: &CMat, z2: &CMat, space: &FockSpace) -> Complex64 {
    let bar = space.frame.conj_cols();
    crate::linalg::hs_inner(&(z2 * &bar), &(z1 * &bar))
}

/// `exp(ζ) = Σ_k ζ^{∧k}/k!` for `ζ` of pure degree 2, with the norm of the
/// terms cut by the degree cap.
pub fn quad_exp(zeta: &FockVector) -> (FockVector, f64) {
    let mut total = FockVector::vacuum(zeta.basis.clone());
    let mut term = total.clone();
    let mut tail_sq = 0.0;
    for k in 1..=zeta.basis.modes / 2 {
        let (next, lost) = term.wedge(zeta);
        tail_sq += (lost / k as f64).powi(2);
        term = next.scale(c64(1.0 / k as f64, 0.0));
        if term.norm() == 0.0 && lost == 0.0 {
            break;
        }
        total.amps += &term.amps;
    }
    (total, tail_sq.sqrt())
}

/// Normalised vacuum of `π_L ∘ θ_g`: `exp(ζ_g)/‖exp(ζ_g)‖` with
/// `ζ_g = Σ_{j<p} ⟨Z_g l̄_j, l_p⟩ l_j ∧ l_p = τ⁻¹(Z_g)/√2`.
pub fn vacuum_vector(g: &TruncatedOperator, space: &FockSpace) -> Result<FockVector> {
    let z = zg(g, &space.frame)?;
    let zeta = tau_inverse(&z.matrix, space)?.scale(c64(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    let (v, _) = quad_exp(&zeta);
    Ok(v.normalized())
}
