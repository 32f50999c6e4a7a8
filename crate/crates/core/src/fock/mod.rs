//! Degree-capped exterior algebras over Lagrangian frames and the Fock
//! representation of the Clifford algebra on them: creators, annihilators,
//! Bogoliubov substitution, `Λ_g`, quadratic exponentials, vacuum vectors,
//! implementers, intertwiners and the Fock-sum isomorphism.

mod basis;
mod clifford;
mod implementer;
mod lambda;
mod ops;
mod quadratic;
mod sum;

pub use basis::{FockBasis, FockOperator, FockSpace, FockVector, Parity};
pub use clifford::{bogoliubov, CliffordWord};
pub use implementer::{
    brute_force_implementer, fix_phase, implementer, intertwiner, intertwiner_residual,
    intertwining_residual, relative_phase, transport, vacuum_by_kernel, Implementer,
    KRONECKER_MAX_DIM, RESIDUAL_TOL,
};
pub use lambda::{compound, lambda_g};
pub use ops::bilinear;
pub use quadratic::{quad_exp, sym_inner, tau, tau_inverse, vacuum_vector};
pub use sum::{
    fock_sum_iso, graded_tensor_rep, intertwiner_parity, parity, GradingBehaviour, SumIsomorphism,
};
