//! The threshold-energy solution and bound-state counting.
//!
//! In the frame where the threshold is at zero (`V0 = -V1`), `α₂ = 0`,
//! `δ = 1` and `α₁ = √(-2λV1)`. The general solution is
//!
//! ```text
//! ψ = c₁ z^{α₁}  ₃F₂(α₁(1+√2), α₁(1-√2), 1+α₁; α₁, 1+2α₁; z)
//!   + c₂ z^{-α₁} ₃F₂(α₁(√2-1), -α₁(√2+1), 1+α₁; α₁, 1; 1-z),
//! ```
//!
//! with `c₁, c₂` fixed by `ψ(0) = 0`. The number of its zeros on `x > 0`
//! equals the number of bound states.

use log::warn;

use crate::error::{Error, Result};
use crate::numerics::dd::Dd;
use crate::numerics::ode::{dopri5, OdeOptions};
use crate::numerics::root1d::brent;
use crate::quantum::mapping::{dz_ds, s_of_z, z_of_s, PotentialParams};
use crate::quantum::shoot::{far_point, schrodinger_rhs, S_NEAR};
use crate::scalar::{from_usize, lit, Real};

/// Beyond this `z` the solution is continued by integrating the
/// Schrödinger equation instead of summing the series.
pub const Z_SWITCH: f64 = 0.9;

const ODE_TOL: f64 = 1e-11;

/// Largest tolerated ratio of `Σ|terms|` to `|sum|` times the squared unit
/// roundoff of the double-word summation.
const MAX_CANCELLATION: f64 = 1e-10;

/// `Σ c_n x^n` and its derivative for real parameters, summed in
/// double-word arithmetic. The branches of the threshold solution have
/// parameters of opposite signs and size `~√(λ|V1|)`, so their terms grow
/// large and cancel; at `λ|V1| = 90` the `1 - z` branch loses about 14
/// digits at `z = 1/2`.
fn ghf_dd<T: Real>(num: &[Dd<T>], den: &[Dd<T>], x: T) -> Result<(T, T)> {
    let one = Dd::new(T::one());
    let xd = Dd::new(x);
    let tiny = T::epsilon() * T::epsilon();
    let (mut term, mut sum, mut dsum) = (one, one, Dd::new(T::zero()));
    let mut mass = T::one();
    let mut quiet = 0;
    for n in 0..200_000usize {
        let nd = Dd::new(from_usize::<T>(n));
        let mut r = xd / (nd + one);
        for &a in num {
            r = r * (a + nd);
        }
        for &b in den {
            r = r / (b + nd);
        }
        term = term * r;
        let np1 = Dd::new(from_usize::<T>(n + 1));
        sum = sum + term;
        dsum = dsum + term * np1 / xd;
        let t = term.hi.abs();
        mass = mass + t;
        let small = t <= tiny * sum.hi.abs() && (t * from_usize::<T>(n + 1)) <= tiny * dsum.hi.abs();
        quiet = if small { quiet + 1 } else { 0 };
        if quiet >= 3 {
            let cond = mass / sum.hi.abs();
            if !(cond * tiny <= lit(MAX_CANCELLATION)) {
                return Err(Error::PrecisionLoss {
                    what: "threshold-solution series",
                    condition: crate::error::to_f64(cond),
                });
            }
            return Ok((sum.to_scalar(), dsum.to_scalar()));
        }
        if !sum.hi.is_finite() {
            break;
        }
    }
    Err(Error::NoConvergence { cap: 200_000, last_term: crate::error::to_f64(term.hi) })
}

/// `s` up to which the zero-boundary solution cannot vanish: `ψ'' = -λ|V|ψ`
/// with `ψ(0) = 0` has no zero on `(0, b]` while `λ∫₀ᵇ t|V(t)| dt < 1`, and
/// `|V| <= |V1| t^{-1/2}` in the threshold frame. Half of that bound.
fn zero_free_until<T: Real>(pp: &PotentialParams<T>) -> T {
    (lit::<T>(0.75) / (pp.mass_scale * pp.v1.abs())).powf(lit(2.0 / 3.0))
}

struct ZeroEnergy<T> {
    frame: PotentialParams<T>,
    a1: T,
    num1: [Dd<T>; 3],
    den1: [Dd<T>; 2],
    num2: [Dd<T>; 3],
    den2: [Dd<T>; 2],
    /// Branch values at `z = 1/2`, which fix `c₁ : c₂`.
    at_half: (T, T),
    scale: T,
}

impl<T: Real> ZeroEnergy<T> {
    fn new(pp: &PotentialParams<T>) -> Result<Self> {
        if !(pp.v1 < T::zero()) {
            return Err(Error::DegenerateParameters {
                reason: "the threshold-energy solution needs an attractive well (V1 < 0)".into(),
            });
        }
        let d = |x: T| Dd::new(x);
        let one = d(T::one());
        let a1 = (d(lit(2.0)) * d(pp.mass_scale) * d(-pp.v1)).sqrt();
        let r2 = d(lit(2.0)).sqrt();
        let mut ze = Self {
            frame: pp.shifted_to_threshold(),
            a1: a1.to_scalar(),
            num1: [a1 * (one + r2), a1 * (one - r2), one + a1],
            den1: [a1, one + a1 + a1],
            num2: [a1 * (r2 - one), -(a1 * (r2 + one)), one + a1],
            den2: [a1, one],
            at_half: (T::zero(), T::zero()),
            scale: T::one(),
        };
        let half = lit::<T>(0.5);
        ze.at_half = (ghf_dd(&ze.num1, &ze.den1, half)?.0, ghf_dd(&ze.num2, &ze.den2, half)?.0);
        let m = ze.at_half.0.abs().max(ze.at_half.1.abs());
        ze.scale = T::one() / m;
        // the solution keeps one sign near the origin; make it positive there
        let s0 = zero_free_until(pp).min(s_of_z(lit::<T>(Z_SWITCH)));
        if ze.series(z_of_s(s0))?.0 < T::zero() {
            ze.scale = -ze.scale;
        }
        Ok(ze)
    }

    /// `ψ` and `dψ/dz` from the series, for `1/2 <= z <= Z_SWITCH`:
    ///
    /// ```text
    /// ψ ∝ S₂(½) (2z)^{α₁} S₁(z) - S₁(½) (2z)^{-α₁} S₂(1-z)
    /// ```
    ///
    /// with `S₁, S₂` the two hypergeometric sums, which vanishes at `z = 1/2`.
    fn series(&self, z: T) -> Result<(T, T)> {
        let (s1, d1) = ghf_dd(&self.num1, &self.den1, z)?;
        let (s2, d2) = ghf_dd(&self.num2, &self.den2, T::one() - z)?;
        let p = (z + z).powf(self.a1);
        let (a, b) = (self.at_half.1 * p, self.at_half.0 / p);
        let k = self.a1 / z;
        let psi = a * s1 - b * s2;
        let dpsi = a * (d1 + k * s1) + b * (d2 + k * s2);
        Ok((psi * self.scale, dpsi * self.scale))
    }

    fn psi_s(&self, s: T) -> Result<T> {
        Ok(self.series(z_of_s(s))?.0)
    }

    /// `(ψ, dψ/ds)` at the switch point.
    fn switch_state(&self) -> Result<(T, [T; 2])> {
        let z = lit::<T>(Z_SWITCH);
        let (psi, dpsi) = self.series(z)?;
        Ok((s_of_z(z), [psi, dpsi * dz_ds(z)]))
    }

    fn continue_to(&self, s1: T, on_step: impl FnMut(T, &mut [T; 2])) -> Result<[T; 2]> {
        let (s0, y0) = self.switch_state()?;
        integrate(&self.frame, s0, y0, s1, on_step)
    }
}

fn integrate<T: Real>(
    frame: &PotentialParams<T>,
    s0: T,
    y0: [T; 2],
    s1: T,
    on_step: impl FnMut(T, &mut [T; 2]),
) -> Result<[T; 2]> {
    let pts = dopri5(schrodinger_rhs(frame, T::zero()), s0, y0, s1, &OdeOptions::with_tol(lit(ODE_TOL)), on_step)?;
    Ok(pts.last().expect("integration returns its end points").y)
}

/// The threshold-energy solution at `x > 0`, normalized to start positive.
/// For `V0 ≠ -V1` the well is first shifted so that the threshold sits at
/// zero, which leaves the wave functions unchanged.
///
/// Up to `z = Z_SWITCH` the two hypergeometric branches are summed; further
/// out the solution is continued by numerical integration.
pub fn zero_energy_solution<T: Real>(pp: &PotentialParams<T>, x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::InvalidArgument(format!("x = {x} must be positive")));
    }
    let ze = ZeroEnergy::new(pp)?;
    let s = x / pp.sigma;
    if z_of_s(s) <= lit(Z_SWITCH) {
        return ze.psi_s(s);
    }
    Ok(ze.continue_to(s, |_, _| {})?[0])
}

/// Local wave number `√(λ max(0, -V(s)))` in the threshold frame.
fn wave_number<T: Real>(pp: &PotentialParams<T>, s: T) -> T {
    (pp.mass_scale * (-pp.potential_scaled(s)).max(T::zero())).sqrt()
}

/// Number of zeros of [`zero_energy_solution`] on `x > 0`.
///
/// Series region: a grid that starts where a zero first becomes possible,
/// is geometric near the origin and resolves the local wavelength; every
/// sign change is confirmed by a bracketed root search. Continuation region: sign changes between integrator steps. Far
/// field: the solution is linear, so one more zero exists iff it is heading
/// towards the axis.
pub fn count_bound_states<T: Real>(pp: &PotentialParams<T>) -> Result<usize> {
    if !(pp.v1 < T::zero()) {
        return Ok(0);
    }
    match ZeroEnergy::new(pp).and_then(|ze| count_with_series(pp, &ze)) {
        Err(e @ Error::PrecisionLoss { .. }) => {
            warn!("{e}; counting zeros of the integrated solution instead");
            count_by_integration(pp)
        }
        other => other,
    }
}

/// Sign changes between integrator steps from `s0` outwards, plus the
/// far-field zero of the linear tail.
fn count_onwards<T: Real>(frame: &PotentialParams<T>, s0: T, y0: [T; 2]) -> Result<usize> {
    let mut prev = y0[0];
    let mut crossings = 0;
    let y = integrate(frame, s0, y0, far_point(frame), |_, y: &mut [T; 2]| {
        if y[0] != T::zero() {
            if prev != T::zero() && y[0].signum() != prev.signum() {
                crossings += 1;
            }
            prev = y[0];
        }
    })?;
    Ok(crossings + usize::from(y[0] * y[1] < T::zero()))
}

fn count_with_series<T: Real>(pp: &PotentialParams<T>, ze: &ZeroEnergy<T>) -> Result<usize> {
    let frame = &ze.frame;
    let s_switch = s_of_z(lit::<T>(Z_SWITCH));
    let mut count = 0;
    let mut s = zero_free_until(pp).min(s_switch);
    let mut f = ze.psi_s(s)?;
    let pi = T::PI();
    while s < s_switch {
        let k = wave_number(frame, s);
        let h = s.min(lit::<T>(0.05)).min(lit::<T>(0.1) * pi / k);
        let s_next = (s + h).min(s_switch);
        let f_next = ze.psi_s(s_next)?;
        if f_next == T::zero() || f.signum() != f_next.signum() {
            let xtol = lit::<T>(1e-12) * s_next;
            brent(|t| ze.psi_s(t), s, s_next, f, f_next, xtol, 200)?;
            count += 1;
        }
        s = s_next;
        f = f_next;
    }
    let (s0, y0) = ze.switch_state()?;
    Ok(count + count_onwards(frame, s0, y0)?)
}

/// Fallback without the series: start at `S_NEAR` on the local expansion
/// `ψ = s + (4/15)λV1 s^{5/2}` of the solution vanishing at the origin.
fn count_by_integration<T: Real>(pp: &PotentialParams<T>) -> Result<usize> {
    let frame = pp.shifted_to_threshold();
    let s = lit::<T>(S_NEAR);
    let g = pp.mass_scale * pp.v1;
    let y0 = [s + lit::<T>(4.0 / 15.0) * g * s * s * s.sqrt(), T::one() + lit::<T>(2.0 / 3.0) * g * s * s.sqrt()];
    count_onwards(&frame, s, y0)
}
