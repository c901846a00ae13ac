//! Reduction of the Heun equation with `ε = -N` to a generalized
//! hypergeometric function
//!
//! ```text
//! u = F(1+e_1, .., 1+e_N, α, β; e_1, .., e_N, γ; z).
//! ```

pub mod closed;
pub mod pi;
pub mod solve;
pub mod transform;

pub use closed::{closed_form_n0, closed_form_n1, closed_form_n2};
pub use pi::{pi_coefficients, pi_coefficients_to, pi_eval, pi_expanded, pi_scale};
pub use solve::{
    canonical_sort, conjecture_check, q_polynomial, solve_reduction, solve_reduction_from_starts, ReductionOptions,
    ReductionReport, ReductionSolution, Shortfall,
};
pub use transform::{
    build_solution_at_0, build_solution_at_1, mirror_base, positive_epsilon_transform, solve_positive_epsilon,
    Argument, AssembledSolution, MirroredSolution, PositiveEpsilonSolution, PowerFactor,
};
