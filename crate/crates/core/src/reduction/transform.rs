//! Assembling solutions: the hypergeometric form at `z = 0`, the mirrored
//! form at `z = 1`, and the power transform for positive integer `ε`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{fmt_c, Error, Result};
use crate::heun::{HeunBase, HeunParams};
use crate::reduction::solve::{solve_reduction, ReductionOptions, ReductionReport, ReductionSolution};
use crate::scalar::{near_integer, Real, C};
use crate::series::{ghf_eval_derivs, GhfParams, DEFAULT_N_CAP};

fn one<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

/// `(1+e_1, .., 1+e_N, α, β; e_1, .., e_N, γ)`.
pub fn build_solution_at_0<T: Real>(p: &HeunParams<T>, sol: &ReductionSolution<T>) -> Result<GhfParams<T>> {
    ghf_from(p.alpha(), p.beta(), p.gamma(), sol)
}

fn ghf_from<T: Real>(alpha: C<T>, beta: C<T>, lower: C<T>, sol: &ReductionSolution<T>) -> Result<GhfParams<T>> {
    if sol.degenerate {
        return Err(Error::DegenerateParameters {
            reason: format!(
                "auxiliary parameters {:?} include a nonpositive integer",
                sol.e.iter().map(|&e| fmt_c(e)).collect::<Vec<_>>()
            ),
        });
    }
    let mut num: Vec<C<T>> = sol.e.iter().map(|&e| one::<T>() + e).collect();
    num.push(alpha);
    num.push(beta);
    let mut den = sol.e.clone();
    den.push(lower);
    GhfParams::new(num, den)
}

/// Argument of the hypergeometric function in an assembled solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Argument {
    Z,
    OneMinusZ,
}

/// `(z - point)^exponent` on the principal branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerFactor<T> {
    pub point: C<T>,
    pub exponent: C<T>,
}

/// `prefactor(z) * F(argument(z))`.
#[derive(Clone, Debug, PartialEq)]
pub struct AssembledSolution<T> {
    pub ghf: GhfParams<T>,
    pub argument: Argument,
    pub prefactor: Option<PowerFactor<T>>,
}

impl<T: Real> AssembledSolution<T> {
    pub fn plain(ghf: GhfParams<T>) -> Self {
        Self { ghf, argument: Argument::Z, prefactor: None }
    }

    /// Value and first two `z`-derivatives.
    pub fn eval(&self, z: C<T>, tol: T) -> Result<(C<T>, C<T>, C<T>)> {
        let (w, sign) = match self.argument {
            Argument::Z => (z, one::<T>()),
            Argument::OneMinusZ => (one::<T>() - z, -one::<T>()),
        };
        let d = ghf_eval_derivs(&self.ghf, w, tol, DEFAULT_N_CAP)?;
        let (f, df, ddf) = (d.u, d.du * sign, d.ddu);
        let Some(pf) = self.prefactor else {
            return Ok((f, df, ddf));
        };
        let s = z - pf.point;
        if pf.exponent.is_zero() {
            return Ok((f, df, ddf));
        }
        if s.is_zero() {
            return Err(Error::SingularPoint { z: fmt_c(z), which: "branch point of the prefactor" });
        }
        let k = pf.exponent;
        let g = s.powc(k);
        let g1 = k * g / s;
        let g2 = k * (k - one()) * g / (s * s);
        Ok((g * f, g1 * f + g * df, g2 * f + (g1 + g1) * df + g * ddf))
    }
}

/// A solution about `z = 1` together with the accessory parameter of the
/// original equation it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct MirroredSolution<T> {
    pub q: C<T>,
    /// Solution of the mirrored equation (`a -> 1-a`, `γ <-> δ`,
    /// `q -> αβ - q`).
    pub mirrored: ReductionSolution<T>,
    pub solution: Option<AssembledSolution<T>>,
}

/// Mirrors the base under `z -> 1 - z` (`a -> 1-a`, `γ <-> δ`).
pub fn mirror_base<T: Real>(base: &HeunBase<T>) -> Result<HeunBase<T>> {
    HeunBase::new(one::<T>() - base.a(), base.alpha(), base.beta(), base.delta(), base.gamma())
}

/// Solutions about `z = 1`: the reduction is solved for the mirrored
/// equation and each result is wrapped as
/// `(1+e_1, .., α, β; e_1, .., δ; 1 - z)`. The returned `q` belong to the
/// original equation. Degenerate roots carry no assembled solution.
pub fn build_solution_at_1<T: Real>(
    base: &HeunBase<T>,
    n: usize,
    opts: &ReductionOptions<T>,
) -> Result<(Vec<MirroredSolution<T>>, ReductionReport<T>)> {
    let m = mirror_base(base)?;
    let report = solve_reduction(&m, n, opts)?;
    let ab = base.alpha() * base.beta();
    let out = report
        .solutions
        .iter()
        .map(|s| MirroredSolution {
            q: ab - s.q,
            mirrored: s.clone(),
            solution: ghf_from(base.alpha(), base.beta(), base.delta(), s).ok().map(|ghf| AssembledSolution {
                ghf,
                argument: Argument::OneMinusZ,
                prefactor: None,
            }),
        })
        .collect();
    Ok((out, report))
}

/// For integer `ε >= 2`: `u = (z - a)^(1-ε) w` turns the equation into one
/// with `ε' = 2 - ε`, `α' = α + 1 - ε`, `β' = β + 1 - ε`, the same `γ, δ`,
/// and `q' = q + (1 - ε) γ`. Returns `(1 - ε, transformed parameters)`.
pub fn positive_epsilon_transform<T: Real>(p: &HeunParams<T>) -> Result<(C<T>, HeunParams<T>)> {
    let eps = p.epsilon();
    match near_integer(eps, T::from_f64(1e-10).unwrap()) {
        Some(1) => return Err(Error::ExceptionalEpsilon),
        Some(m) if m >= 2 => {}
        _ => return Err(Error::NonIntegerEpsilon { epsilon: fmt_c(eps) }),
    }
    let s = one::<T>() - eps;
    let base = HeunBase::new(p.a(), p.alpha() + s, p.beta() + s, p.gamma(), p.delta())?;
    Ok((s, base.with_q(p.q() + s * p.gamma())))
}

/// A solution for positive integer `ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveEpsilonSolution<T> {
    /// Accessory parameter of the original equation.
    pub q: C<T>,
    /// Solution of the transformed equation (`ε' = 2 - ε`).
    pub transformed: ReductionSolution<T>,
    pub solution: Option<AssembledSolution<T>>,
}

/// Solves an equation with integer `ε >= 2` through
/// [`positive_epsilon_transform`]; the transformed equation has `N = ε - 2`.
pub fn solve_positive_epsilon<T: Real>(
    base: &HeunBase<T>,
    opts: &ReductionOptions<T>,
) -> Result<(Vec<PositiveEpsilonSolution<T>>, ReductionReport<T>)> {
    // q is irrelevant for the transformed base
    let (shift, tp) = positive_epsilon_transform(&base.with_q(C::zero()))?;
    let n = near_integer(-tp.epsilon(), T::from_f64(1e-10).unwrap()).unwrap_or(0).max(0) as usize;
    let report = solve_reduction(&tp.base(), n, opts)?;
    let out = report
        .solutions
        .iter()
        .map(|s| {
            let q = s.q - shift * base.gamma();
            let solution = ghf_from(tp.alpha(), tp.beta(), tp.gamma(), s).ok().map(|ghf| AssembledSolution {
                ghf,
                argument: Argument::Z,
                prefactor: Some(PowerFactor { point: base.a(), exponent: shift }),
            });
            PositiveEpsilonSolution { q, transformed: s.clone(), solution }
        })
        .collect();
    Ok((out, report))
}
