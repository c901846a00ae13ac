//! Generalized-hypergeometric solutions of the general Heun equation.
//!
//! For `ε = -N` the Heun equation admits solutions
//!
//! ```text
//! u = F(1+e_1, .., 1+e_N, α, β; e_1, .., e_N, γ; z)
//! ```
//!
//! whenever the accessory parameter `q` and the auxiliary parameters `e_k`
//! make the reduction polynomial `Π(n)` vanish identically. This crate
//!
//! - defines the equation and an independent numerical-integration oracle
//!   ([`heun`]),
//! - evaluates Frobenius and generalized hypergeometric series ([`series`]),
//! - finds every admissible `(q, e)` and assembles the solutions, including
//!   the `z = 1` family and positive integer `ε` ([`reduction`]),
//! - applies all of it to bound states of the potential
//!   `V0 + V1/√(1 - e^{-x/σ})` ([`quantum`]).
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! fix `f64`, for which all documented tolerances hold.
//!
//! ```
//! use heun_ghf::{solve_reduction, HeunBase, ReductionOptions};
//! use num_complex::Complex;
//!
//! let c = |x: f64| Complex::new(x, 0.0);
//! let base = HeunBase::for_order(c(3.0), c(0.5), c(2.5), c(0.75), 1).unwrap();
//! let report = solve_reduction(&base, 1, &ReductionOptions::default()).unwrap();
//! assert_eq!(report.solutions.len(), 2);
//! ```

// `!(x < y)` is deliberate throughout: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod heun;
pub mod numerics;
pub mod quantum;
pub mod reduction;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use heun::{
    integrate_reference, make_params, ode_residual, ode_residual_scaled, HeunBase, HeunParams, SolutionSample,
};
pub use reduction::{solve_reduction, ReductionOptions, ReductionReport, ReductionSolution};
pub use scalar::{Real, C};
pub use series::{frobenius_coeffs, ghf_eval, ghf_eval_derivs, ghf_ratio, series_derivatives, GhfParams, PowerSeries};

pub type C64 = C<f64>;
pub type HeunBase64 = HeunBase<f64>;
pub type HeunParams64 = HeunParams<f64>;
pub type GhfParams64 = GhfParams<f64>;
pub type PowerSeries64 = PowerSeries<f64>;
pub type ReductionOptions64 = ReductionOptions<f64>;
pub type ReductionReport64 = ReductionReport<f64>;
pub type ReductionSolution64 = ReductionSolution<f64>;
pub type PotentialParams64 = quantum::PotentialParams<f64>;
pub type SpectrumResult64 = quantum::SpectrumResult<f64>;
