//! The quaternionic Hopf experiment: the U(1) bundle `Q → S²` whose fibre
//! over `x` is the torsor of intertwiners between the Fock representations of
//! `L` and `g(x)L`, where `g(x)` multiplies loops in `ℝ⁴ = ℍ` on the left by
//! the transition loop `r(x)`. Its first Chern class is estimated as the
//! winding number of the transition function between two cap
//! trivializations.
//!
//! For `x` in the 2-sphere spanned by `1, j, k` the loop `r(x)` is a
//! trigonometric polynomial of degree one. Then `gL` and `L` agree on all
//! modes with `q ≥ 2`, so both representations factor through the finite
//! window `|q| ≤ 1` and the intertwiner torsor is computed there exactly.
//! The truncation cutoff only enters through the computation of that window.
//!
//! A point of the torsor is represented by a unit vacuum vector of `g(x)L`
//! inside the fixed space `F(L ∩ W)`. The cap trivializations are built by
//! parallel transport of that vector along meridians from the poles `x = ±1`.

mod chern;
mod config;
mod fiber;
mod report;

pub use chern::{chern_of_q, run_once, ChernReport, ConvergenceRow, DegenerateRecord, RunOutcome};
pub use config::{ExperimentConfig, Family};
pub use fiber::{fiber_transition, sphere_point, window_lagrangian, FiberContext, FiberGerbeData, WindowImage};
pub use report::{emit_report, read_summary, Summary, CSV_HEADER};
