//! Finite Fourier truncation of `H = L²(S¹, ℂⁿ)` with its real structure Σ,
//! Lagrangian frames, loop multiplication operators and the `C_g / A_g / Z_g`
//! calculus.

mod basis;
mod calculus;
mod lagrangian;
mod operator;
pub mod random;

pub use basis::ModeBasis;
pub use calculus::{
    canonical_conjugator, decompose_ca, retract, sym_defect, zg, ZG_COND_BOUND,
};
pub use lagrangian::{default_finite_lagrangian, projector_pl, standard_lagrangian, LagrangianFrame};
pub use operator::{
    hs_commutator_norm, multiplication_operator, CoeffEntry, FourierLoop, MultiplicationOperator,
    TruncatedOperator, LEAKAGE_TOL,
};
