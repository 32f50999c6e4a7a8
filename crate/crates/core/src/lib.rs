//! Finite-mode laboratory for Clifford algebras, fermionic Fock spaces,
//! Bogoliubov implementers and the U(1)-torsor / Čech machinery needed to
//! extract Dixmier-Douady cocycles and Chern numbers from intertwiner phases.
//!
//! The crate is organised bottom-up:
//!
//! * [`quatgeom`]: quaternions, S⁴ charts and the explicit loops over S³.
//! * [`modes`]: truncated Fourier model of `L²(S¹, ℂⁿ)`, Lagrangians and the
//!   `C_g / A_g / Z_g` calculus.
//! * [`fock`]: degree-capped exterior algebras, the Fock representation,
//!   vacuum vectors, implementers and intertwiners.
//! * [`torsorcech`]: U(1)-torsors, cochains on finite covers, gerbe cocycles,
//!   the suspension chase and winding numbers.
//! * [`hopf`]: the quaternionic Hopf experiment built from all of the above.

pub mod error;
pub mod fock;
pub mod hopf;
pub mod linalg;
pub mod modes;
pub mod quatgeom;
pub mod torsorcech;

pub use error::{Error, Result};
