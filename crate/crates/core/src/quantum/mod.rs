//! Bound states of `V(x) = V0 + V1/√(1 - e^{-x/σ})` on the half-line via its
//! reduction to a Heun equation with `ε = -1`.
//!
//! Units: everything is expressed through `s = x/σ` and the single
//! dimensionless strength `λ = 2mσ²/ħ²` (`mass_scale`), so the Schrödinger
//! equation reads `ψ_ss + λ(E - V)ψ = 0`.

pub mod mapping;
pub mod shoot;
pub mod spectrum;
pub mod zero;

pub use mapping::{fundamental_solutions, map_to_heun, potential, HeunMapping, PotentialParams, WaveSolution};
pub use shoot::{shoot, shooting_spectrum};
pub use spectrum::{energy_window, spectrum, spectrum_function, SpectrumResult, DEFAULT_GRID};
pub use zero::{count_bound_states, zero_energy_solution};
