//! U(1)-torsors, alternating Čech cochains on finite covers, the
//! Dixmier-Douady cocycle of a bundle gerbe from local sections, coboundaries
//! over fiber products, the suspension chase and winding numbers.
//!
//! Spaces are modelled by finite point samples. An open set is a subset of the
//! sample points, and a U(1)-valued function on an intersection is either a
//! constant phase or one angle per intersection point. Angles are stored
//! unwrapped, so products and quotients never meet a branch cut.

mod bundle;
mod cochain;
mod cover;
mod gerbe;
mod suspension;
mod torsor;
mod winding;

pub use bundle::{delta_bundle_cochain, BundleCochain};
pub use cochain::{cech_coboundary, CechCochain, CochainFile, CochainValue, EntryFile};
pub use cover::IndexedCover;
pub use gerbe::{dd_cocycle, Gerbe, IntertwinerGerbe, PhaseGerbe, SectionTable};
pub use suspension::{
    build_suspension_cover, suspension_forward, suspension_partial_inverse, SuspensionCover,
};
pub use torsor::{
    evaluate_dual, rep_tensor_torsor, torsor_dual, torsor_pair, torsor_tensor, PhaseElement,
    TorsorTag,
};
pub use winding::{unwrap_phases, winding_degree, winding_degree_with_step, wrap_angle};
