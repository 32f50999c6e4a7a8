//! Quaternions and the explicit geometry of S⁴ ≅ ℍP¹: stereographic charts,
//! suspension loops `β_x`, the quarter-turn `R`, the local sections `η_{±i}`
//! and the transition loop `r(x)` whose Fourier data feeds [`crate::modes`].

mod loops;
mod quaternion;
mod sphere;

pub use loops::{
    beta_at, beta_loop, eta_at, eta_section, fourier_of_loop, transition_at, transition_loop_r,
    FourierCoefficients, LoopValue, SampledLoop, Side,
};
pub use quaternion::{so4_of_quat, Quaternion};
pub use sphere::{
    rotate_r_s4, stereo_north, stereo_south, theta_s4_to_hp1, theta_tilde_n, theta_tilde_s,
    HP1Point, HPair, S4Point,
};
