//! The general Heun equation
//!
//! ```text
//! u'' + (γ/z + δ/(z-1) + ε/(z-a)) u' + (αβ z - q) / (z (z-1) (z-a)) u = 0
//! ```
//!
//! with the Fuchsian relation `γ + δ + ε = 1 + α + β`. The exponent `ε` is
//! never supplied by callers; it is always derived from the other five
//! exponent parameters, so the relation holds by construction.

use num_complex::Complex;

use crate::error::{fmt_c, Error, Result};
use crate::numerics::ode::{dopri5, OdeOptions};
use crate::scalar::{lit, Real, C};

/// Heun parameters without the accessory parameter `q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeunBase<T> {
    a: C<T>,
    alpha: C<T>,
    beta: C<T>,
    gamma: C<T>,
    delta: C<T>,
}

/// Full parameter set of a Heun equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeunParams<T> {
    base: HeunBase<T>,
    q: C<T>,
    epsilon: C<T>,
}

fn check_a<T: Real>(a: C<T>) -> Result<()> {
    let tiny = T::epsilon() * lit(16.0);
    if !(a.re.is_finite() && a.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("a = {} is not finite", fmt_c(a))));
    }
    if a.norm() <= tiny {
        return Err(Error::CoincidentSingularities { a: fmt_c(a), with: "z = 0" });
    }
    if (a - C::new(T::one(), T::zero())).norm() <= tiny {
        return Err(Error::CoincidentSingularities { a: fmt_c(a), with: "z = 1" });
    }
    Ok(())
}

impl<T: Real> HeunBase<T> {
    pub fn new(a: C<T>, alpha: C<T>, beta: C<T>, gamma: C<T>, delta: C<T>) -> Result<Self> {
        check_a(a)?;
        Ok(Self { a, alpha, beta, gamma, delta })
    }

    /// Chooses `δ` so that `ε = -n`.
    pub fn for_order(a: C<T>, alpha: C<T>, beta: C<T>, gamma: C<T>, n: usize) -> Result<Self> {
        let delta = C::new(T::one() + crate::scalar::from_usize(n), T::zero()) + alpha + beta - gamma;
        Self::new(a, alpha, beta, gamma, delta)
    }

    pub fn a(&self) -> C<T> {
        self.a
    }
    pub fn alpha(&self) -> C<T> {
        self.alpha
    }
    pub fn beta(&self) -> C<T> {
        self.beta
    }
    pub fn gamma(&self) -> C<T> {
        self.gamma
    }
    pub fn delta(&self) -> C<T> {
        self.delta
    }

    pub fn epsilon(&self) -> C<T> {
        C::new(T::one(), T::zero()) + self.alpha + self.beta - self.gamma - self.delta
    }

    pub fn with_q(&self, q: C<T>) -> HeunParams<T> {
        HeunParams { base: *self, q, epsilon: self.epsilon() }
    }
}

/// Builds a parameter set, deriving `ε = 1 + α + β - γ - δ`.
pub fn make_params<T: Real>(
    a: C<T>,
    alpha: C<T>,
    beta: C<T>,
    gamma: C<T>,
    delta: C<T>,
    q: C<T>,
) -> Result<HeunParams<T>> {
    Ok(HeunBase::new(a, alpha, beta, gamma, delta)?.with_q(q))
}

impl<T: Real> HeunParams<T> {
    pub fn base(&self) -> HeunBase<T> {
        self.base
    }
    pub fn a(&self) -> C<T> {
        self.base.a
    }
    pub fn q(&self) -> C<T> {
        self.q
    }
    pub fn alpha(&self) -> C<T> {
        self.base.alpha
    }
    pub fn beta(&self) -> C<T> {
        self.base.beta
    }
    pub fn gamma(&self) -> C<T> {
        self.base.gamma
    }
    pub fn delta(&self) -> C<T> {
        self.base.delta
    }
    pub fn epsilon(&self) -> C<T> {
        self.epsilon
    }

    /// `(P(z), Q(z))` in `u'' + P u' + Q u = 0`.
    pub fn coefficients(&self, z: C<T>) -> Result<(C<T>, C<T>)> {
        self.check_regular(z)?;
        let one = C::new(T::one(), T::zero());
        let a = self.a();
        let p = self.gamma() / z + self.delta() / (z - one) + self.epsilon / (z - a);
        let q = (self.alpha() * self.beta() * z - self.q) / (z * (z - one) * (z - a));
        Ok((p, q))
    }

    fn check_regular(&self, z: C<T>) -> Result<()> {
        let one = C::new(T::one(), T::zero());
        for (s, which) in [(C::new(T::zero(), T::zero()), "z = 0"), (one, "z = 1"), (self.a(), "z = a")] {
            if z == s {
                return Err(Error::SingularPoint { z: fmt_c(z), which });
            }
        }
        Ok(())
    }
}

/// A point on a solution: position, value and first derivative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolutionSample<T> {
    pub z: C<T>,
    pub u: C<T>,
    pub du: C<T>,
}

/// Left-hand side of the Heun equation at a sample with second derivative
/// `ddu`.
pub fn ode_residual<T: Real>(p: &HeunParams<T>, s: &SolutionSample<T>, ddu: C<T>) -> Result<C<T>> {
    let (pc, qc) = p.coefficients(s.z)?;
    Ok(ddu + pc * s.du + qc * s.u)
}

/// [`ode_residual`] divided by the sum of the magnitudes of its three terms,
/// so that `1e-10` means agreement to ten digits regardless of how large the
/// individual terms are. Returns zero for the zero function.
pub fn ode_residual_scaled<T: Real>(p: &HeunParams<T>, s: &SolutionSample<T>, ddu: C<T>) -> Result<T> {
    let (pc, qc) = p.coefficients(s.z)?;
    let terms = [ddu, pc * s.du, qc * s.u];
    let scale: T = terms.iter().map(|t| t.norm()).sum();
    let r = (terms[0] + terms[1] + terms[2]).norm();
    Ok(if scale == T::zero() { r } else { r / scale })
}

/// Minimum distance a reference integration path keeps from `0`, `1`, `a`.
pub const MIN_PATH_DISTANCE: f64 = 0.05;

fn segment_distance<T: Real>(z0: C<T>, z1: C<T>, s: C<T>) -> T {
    let d = z1 - z0;
    let len2 = d.norm_sqr();
    if len2 == T::zero() {
        return (s - z0).norm();
    }
    let t = ((s - z0) * d.conj()).re / len2;
    let t = t.max(T::zero()).min(T::one());
    (z0 + d * t - s).norm()
}

/// Integrates the Heun equation along the straight segment from `z0` to `z1`
/// with an adaptive Dormand–Prince 5(4) scheme (per-step error `<= tol`,
/// mixed absolute/relative). The returned samples include both endpoints.
pub fn integrate_reference<T: Real>(
    p: &HeunParams<T>,
    z0: C<T>,
    u0: C<T>,
    du0: C<T>,
    z1: C<T>,
    tol: T,
) -> Result<Vec<SolutionSample<T>>> {
    if tol.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let minimum = lit::<T>(MIN_PATH_DISTANCE);
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    for (s, which) in [(zero, "z = 0"), (one, "z = 1"), (p.a(), "z = a")] {
        let d = segment_distance(z0, z1, s);
        if d < minimum {
            return Err(Error::PathTooClose { which, distance: crate::error::to_f64(d), minimum: MIN_PATH_DISTANCE });
        }
    }
    let dz = z1 - z0;
    let opts = OdeOptions::with_tol(tol);
    let pts = dopri5(
        |t: T, y: &[C<T>; 2]| {
            let z = z0 + dz * t;
            // the path avoids all singular points, so this cannot fail
            let (pc, qc) = p.coefficients(z).unwrap_or((zero, zero));
            [y[1] * dz, -(pc * y[1] + qc * y[0]) * dz]
        },
        T::zero(),
        [u0, du0],
        T::one(),
        &opts,
        |_, _| {},
    )?;
    Ok(pts.into_iter().map(|pt| SolutionSample { z: z0 + dz * pt.t, u: pt.y[0], du: pt.y[1] }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{clit, cpair};

    #[test]
    fn epsilon_is_derived() {
        let p = make_params::<f64>(clit(2.0), clit(1.0), clit(2.0), clit(0.5), clit(3.5), clit(4.0)).unwrap();
        assert_eq!(p.epsilon(), clit(0.0));
        let p = make_params::<f64>(clit(2.0), clit(1.0), clit(1.0), clit(1.0), clit(3.0), clit(0.0)).unwrap();
        assert_eq!(p.epsilon(), clit(-1.0));
    }

    #[test]
    fn coincident_singularities_rejected() {
        for a in [0.0, 1.0] {
            let e = make_params::<f64>(clit(a), clit(1.0), clit(1.0), clit(1.0), clit(1.0), clit(0.0));
            assert!(matches!(e, Err(Error::CoincidentSingularities { .. })), "{e:?}");
        }
        assert!(HeunBase::<f64>::for_order(clit(1.0), clit(1.0), clit(1.0), clit(1.0), 2).is_err());
    }

    #[test]
    fn for_order_sets_epsilon() {
        let b = HeunBase::<f64>::for_order(cpair(2.0, 1.0), clit(0.3), cpair(1.0, 2.0), clit(0.7), 4).unwrap();
        assert!((b.epsilon() - clit(-4.0)).norm() < 1e-14);
    }

    #[test]
    fn constant_and_zero_solutions() {
        let p = make_params::<f64>(clit(3.0), clit(0.0), clit(2.0), clit(0.5), clit(1.5), clit(0.0)).unwrap();
        for z in [cpair(0.3, 0.1), clit(-2.0), cpair(5.0, -4.0)] {
            let s = SolutionSample { z, u: clit(1.0), du: clit(0.0) };
            assert_eq!(ode_residual(&p, &s, clit(0.0)).unwrap(), clit(0.0));
            let s = SolutionSample { z, u: clit(0.0), du: clit(0.0) };
            assert_eq!(ode_residual(&p, &s, clit(0.0)).unwrap(), clit(0.0));
        }
    }

    #[test]
    fn singular_points_rejected() {
        let p = make_params::<f64>(clit(3.0), clit(1.0), clit(2.0), clit(0.5), clit(1.5), clit(0.0)).unwrap();
        for z in [0.0, 1.0, 3.0] {
            let s = SolutionSample { z: clit(z), u: clit(1.0), du: clit(0.0) };
            assert!(matches!(ode_residual(&p, &s, clit(0.0)), Err(Error::SingularPoint { .. })));
        }
    }

    #[test]
    fn path_checks() {
        let p = make_params::<f64>(clit(3.0), clit(1.0), clit(2.0), clit(0.5), clit(1.5), clit(0.0)).unwrap();
        let e = integrate_reference(&p, clit(-0.5), clit(1.0), clit(0.0), clit(0.5), 1e-10);
        assert!(matches!(e, Err(Error::PathTooClose { which: "z = 0", .. })));
        let out = integrate_reference(&p, clit(0.1), clit(0.0), clit(0.0), clit(0.6), 1e-10).unwrap();
        assert!(out.len() >= 2);
        assert!(out.iter().all(|s| s.u == clit(0.0) && s.du == clit(0.0)));
        assert_eq!(out.last().unwrap().z, clit(0.6));
    }
}
