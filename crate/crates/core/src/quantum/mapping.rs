//! The potential and its reduction to a Heun equation with `ε = -1`.
//!
//! With `s = x/σ`, `λ = 2mσ²/ħ²` and `z = (1 + √(1 - e^{-s}))/2` (so that
//! `e^{-s} = 4z(1-z)`), the substitution `ψ = z^{α₁} (1-z)^{α₂} u` turns
//! `ψ'' + λ(E - V)ψ = 0` into a Heun equation with singularities `0, 1` and
//! `a = 1/2` (the image of `x = 0`), where
//!
//! ```text
//! α₁ = √(λ(V0 - V1 - E)),   α₂ = √(λ(V0 + V1 - E)),
//! α, β = α₁ + α₂ ± 2√(λ(V0 - E)),
//! γ = 1 + 2α₁,  δ = 1 + 2α₂,  ε = -1,  q = (αβ + α₂ - α₁)/2.
//! ```

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::heun::{HeunBase, HeunParams};
use crate::reduction::closed_form_n1;
use crate::reduction::transform::{Argument, AssembledSolution};
use crate::scalar::{lit, Real, C};
use crate::series::GhfParams;

/// Parameters of `V(x) = V0 + V1 / √(1 - e^{-x/σ})` on `x > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialParams<T> {
    pub v0: T,
    pub v1: T,
    pub sigma: T,
    /// `2mσ²/ħ²`.
    pub mass_scale: T,
}

impl<T: Real> PotentialParams<T> {
    pub fn new(v0: T, v1: T, sigma: T, mass_scale: T) -> Result<Self> {
        if !(v0.is_finite() && v1.is_finite()) {
            return Err(Error::InvalidArgument("V0 and V1 must be finite".into()));
        }
        if !(sigma > T::zero() && sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma = {sigma} must be positive")));
        }
        if !(mass_scale > T::zero() && mass_scale.is_finite()) {
            return Err(Error::InvalidArgument(format!("mass_scale = {mass_scale} must be positive")));
        }
        Ok(Self { v0, v1, sigma, mass_scale })
    }

    /// Continuum threshold `lim V = V0 + V1`.
    pub fn threshold(&self) -> T {
        self.v0 + self.v1
    }

    /// The same well shifted so that the threshold sits at zero.
    pub fn shifted_to_threshold(&self) -> Self {
        Self { v0: -self.v1, ..*self }
    }

    /// `V` as a function of `s = x/σ`.
    pub(crate) fn potential_scaled(&self, s: T) -> T {
        self.v0 + self.v1 / (-(-s).exp_m1()).sqrt()
    }
}

/// `V0 + V1 / √(1 - e^{-x/σ})`.
pub fn potential<T: Real>(pp: &PotentialParams<T>, x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::InvalidArgument(format!("the potential is defined for x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(pp.threshold());
    }
    Ok(pp.potential_scaled(x / pp.sigma))
}

/// `z(s) = (1 + √(1 - e^{-s}))/2` for the scaled coordinate `s = x/σ`.
pub fn z_of_s<T: Real>(s: T) -> T {
    let half = lit::<T>(0.5);
    half + half * (-(-s).exp_m1()).sqrt()
}

/// Inverse of [`z_of_s`] on `(1/2, 1)`.
pub fn s_of_z<T: Real>(z: T) -> T {
    -(lit::<T>(4.0) * z * (T::one() - z)).ln()
}

/// `dz/ds = z(1-z)/(2z-1)`.
pub(crate) fn dz_ds<T: Real>(z: T) -> T {
    z * (T::one() - z) / (z + z - T::one())
}

/// Output of [`map_to_heun`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeunMapping<T> {
    pub params: HeunParams<T>,
    pub alpha1: C<T>,
    pub alpha2: C<T>,
    pub sigma: T,
    /// Scaled residual of the `N = 1` accessory-parameter condition.
    pub q_condition_residual: T,
}

impl<T: Real> HeunMapping<T> {
    /// Exponents of the prefactor `z^{α₁} (1-z)^{α₂}`.
    pub fn prefactor_exponents(&self) -> (C<T>, C<T>) {
        (self.alpha1, self.alpha2)
    }

    pub fn z_of_x(&self, x: T) -> T {
        z_of_s(x / self.sigma)
    }

    pub fn x_of_z(&self, z: T) -> T {
        s_of_z(z) * self.sigma
    }
}

/// Tolerance of the postcondition check in [`map_to_heun`].
pub const Q_CONDITION_TOL: f64 = 1e-9;

/// Heun parameters of the Schrödinger equation at energy `E`. Square roots
/// are principal, so `Re α₁, Re α₂ >= 0` and energies above the thresholds
/// give complex exponents.
///
/// The accessory parameter is checked against the closed-form `N = 1`
/// condition; a violation means an algebra error, not bad input.
pub fn map_to_heun<T: Real>(pp: &PotentialParams<T>, energy: T) -> Result<HeunMapping<T>> {
    let lam = pp.mass_scale;
    let sq = |x: T| Complex::new(lam * x, T::zero()).sqrt();
    let alpha1 = sq(pp.v0 - pp.v1 - energy);
    let alpha2 = sq(pp.v0 + pp.v1 - energy);
    let root = sq(pp.v0 - energy);
    let two = lit::<T>(2.0);
    let o = Complex::new(T::one(), T::zero());
    let alpha = alpha1 + alpha2 + root * two;
    let beta = alpha1 + alpha2 - root * two;
    let gamma = o + alpha1 * two;
    let delta = o + alpha2 * two;
    let base = HeunBase::new(Complex::new(lit(0.5), T::zero()), alpha, beta, gamma, delta)?;
    let q = (alpha * beta + alpha2 - alpha1) / two;
    let params = base.with_q(q);
    let poly = closed_form_n1(&base)?;
    let scale: T = poly.coeffs().iter().rev().fold(T::zero(), |acc, c| acc * q.norm() + c.norm());
    let residual = poly.eval(q).norm() / if scale > T::zero() { scale } else { T::one() };
    if !(residual <= lit(Q_CONDITION_TOL)) {
        return Err(Error::QConditionViolated { residual: crate::error::to_f64(residual) });
    }
    Ok(HeunMapping { params, alpha1, alpha2, sigma: pp.sigma, q_condition_residual: residual })
}

/// A Heun solution together with the prefactor that turns it into `ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveSolution<T> {
    /// The Heun solution `u(z)`.
    pub heun: AssembledSolution<T>,
    pub alpha1: C<T>,
    pub alpha2: C<T>,
}

impl<T: Real> WaveSolution<T> {
    /// `ψ = z^{α₁} (1-z)^{α₂} u(z)`.
    pub fn psi(&self, z: C<T>, tol: T) -> Result<C<T>> {
        let (u, _, _) = self.heun.eval(z, tol)?;
        let o = Complex::new(T::one(), T::zero());
        Ok(z.powc(self.alpha1) * (o - z).powc(self.alpha2) * u)
    }
}

/// The pair
///
/// ```text
/// u₁ = ₃F₂(α, β, 1 + αβ/q₃; αβ/q₃, γ; z),
/// u₂ = ₃F₂(α, β, 1 - αβ/q₃; -αβ/q₃, δ; 1 - z),     q₃ = α₂ - α₁,
/// ```
///
/// the first regular at `z = 0`, the second at `z = 1` (the decaying one
/// for bound states).
pub fn fundamental_solutions<T: Real>(
    pp: &PotentialParams<T>,
    energy: T,
) -> Result<(WaveSolution<T>, WaveSolution<T>)> {
    let m = map_to_heun(pp, energy)?;
    let tiny = lit::<T>(1e-12);
    let q3 = m.alpha2 - m.alpha1;
    if q3.norm() <= tiny * (T::one() + m.alpha1.norm()) {
        return Err(Error::DegenerateParameters { reason: "α₁ = α₂ (V1 = 0): q vanishes".into() });
    }
    if m.alpha2.norm() <= tiny {
        return Err(Error::DegenerateParameters {
            reason: "δ = 1 at the threshold energy; use the zero-energy solution".into(),
        });
    }
    let p = &m.params;
    let o = Complex::new(T::one(), T::zero());
    let e = p.alpha() * p.beta() / q3;
    let u1 = GhfParams::new(vec![p.alpha(), p.beta(), o + e], vec![e, p.gamma()])?;
    let u2 = GhfParams::new(vec![p.alpha(), p.beta(), o - e], vec![-e, p.delta()])?;
    let wrap = |ghf, argument| WaveSolution {
        heun: AssembledSolution { ghf, argument, prefactor: None },
        alpha1: m.alpha1,
        alpha2: m.alpha2,
    };
    Ok((wrap(u1, Argument::Z), wrap(u2, Argument::OneMinusZ)))
}
