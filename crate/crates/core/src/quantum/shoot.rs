//! Shooting oracle: direct integration of the Schrödinger equation.

use crate::error::{Error, Result};
use crate::numerics::ode::{dopri5, OdeOptions};
use crate::quantum::mapping::PotentialParams;
use crate::quantum::spectrum::scan_roots;
use crate::scalar::{lit, Real};

/// Inner end point of the shooting integration, in units of `σ`.
pub const S_NEAR: f64 = 1e-6;

const SHOOT_TOL: f64 = 1e-12;

/// Where the tail of the potential is negligible: `λ|V1| e^{-s}` is below
/// `e^{-40}`.
pub(crate) fn far_point<T: Real>(pp: &PotentialParams<T>) -> T {
    lit::<T>(40.0) + (T::one() + pp.mass_scale * pp.v1.abs()).ln()
}

/// `ψ'' = λ (V(s) - E) ψ` as a first-order system in `s = x/σ`.
pub(crate) fn schrodinger_rhs<T: Real>(pp: &PotentialParams<T>, energy: T) -> impl Fn(T, &[T; 2]) -> [T; 2] + '_ {
    move |s, y| [y[1], pp.mass_scale * (pp.potential_scaled(s) - energy) * y[0]]
}

fn check_below_threshold<T: Real>(pp: &PotentialParams<T>, energy: T) -> Result<()> {
    if !(energy < pp.threshold()) {
        return Err(Error::AboveThreshold {
            energy: crate::error::to_f64(energy),
            threshold: crate::error::to_f64(pp.threshold()),
        });
    }
    Ok(())
}

/// Boundary mismatch at `x = 0` of the solution that decays at infinity.
///
/// Integrates inward from the far field, starting on `e^{-κs}`, and returns
/// the linear extrapolation `ψ(0) ≈ ψ(s) - s ψ'(s)` at `s = S_NEAR`
/// divided by `|(ψ, ψ')|`. The state is renormalized after every step, so
/// only the sign and relative size are meaningful; the sign varies
/// continuously with the energy and flips at each eigenvalue.
pub fn shoot<T: Real>(pp: &PotentialParams<T>, energy: T) -> Result<T> {
    check_below_threshold(pp, energy)?;
    let kappa = (pp.mass_scale * (pp.threshold() - energy)).sqrt();
    let s_near = lit::<T>(S_NEAR);
    let pts = dopri5(
        schrodinger_rhs(pp, energy),
        far_point(pp),
        [T::one(), -kappa],
        s_near,
        &OdeOptions::with_tol(lit(SHOOT_TOL)),
        |_, y: &mut [T; 2]| {
            let n = y[0].abs().max(y[1].abs());
            if n > T::zero() {
                y[0] = y[0] / n;
                y[1] = y[1] / n;
            }
        },
    )?;
    let last = pts.last().expect("integration returns its end points");
    let [psi, dpsi] = last.y;
    let norm = psi.abs().max(dpsi.abs());
    Ok((psi - last.t * dpsi) / norm)
}

/// Roots of [`shoot`] on `[e_min, e_max]`, ascending, found by scanning
/// the same grid as the series spectrum and refining each bracket.
pub fn shooting_spectrum<T: Real>(pp: &PotentialParams<T>, e_min: T, e_max: T, grid: usize) -> Result<Vec<T>> {
    check_below_threshold(pp, e_max)?;
    scan_roots(pp, e_min, e_max, grid, |e| shoot(pp, e))
}
