//! Closed-form accessory-parameter conditions for `N = 0, 1, 2`.

use num_complex::Complex;

use crate::error::{fmt_c, Error, Result};
use crate::heun::HeunBase;
use crate::numerics::poly::ComplexPoly;
use crate::scalar::{Real, C};

fn require<T: Real>(base: &HeunBase<T>, eps: f64) -> Result<()> {
    let target = Complex::new(T::from_f64(eps).unwrap(), T::zero());
    if (base.epsilon() - target).norm() > T::from_f64(1e-10).unwrap() {
        return Err(Error::EpsilonMismatch { epsilon: fmt_c(base.epsilon()), expected: fmt_c(target) });
    }
    Ok(())
}

/// `t = q - aαβ` as a polynomial in `q`.
fn shifted_q<T: Real>(base: &HeunBase<T>) -> ComplexPoly<T> {
    ComplexPoly::linear(-(base.a() * base.alpha() * base.beta()), Complex::new(T::one(), T::zero()))
}

/// `q - aαβ` (for `ε = 0`).
pub fn closed_form_n0<T: Real>(base: &HeunBase<T>) -> Result<ComplexPoly<T>> {
    require(base, 0.0)?;
    Ok(shifted_q(base))
}

/// `(t + a(1-δ))(t + (a-1)(1-γ)) - a(1-a)(1+α-γ)(1+β-γ)` with
/// `t = q - aαβ` (for `ε = -1`), ascending in `q`.
pub fn closed_form_n1<T: Real>(base: &HeunBase<T>) -> Result<ComplexPoly<T>> {
    require(base, -1.0)?;
    let o: C<T> = Complex::new(T::one(), T::zero());
    let (a, al, be, ga, de) = (base.a(), base.alpha(), base.beta(), base.gamma(), base.delta());
    let t = shifted_q(base);
    let f = (t.clone() + a * (o - de)) * (t + (a - o) * (o - ga));
    Ok(f + (-(a * (o - a) * (o + al - ga) * (o + be - ga))))
}

/// The cubic condition for `ε = -2`:
///
/// ```text
/// (t² + t(4a - 2 - (3+α+β)a + γ) + 2a(a-1)αβ)(t - 2(1+α+β)a - 2 + 2γ)
///     + 2a(a-1)(αβ + 1 + α + β) t,      t = q - aαβ
/// ```
pub fn closed_form_n2<T: Real>(base: &HeunBase<T>) -> Result<ComplexPoly<T>> {
    require(base, -2.0)?;
    let o: C<T> = Complex::new(T::one(), T::zero());
    let two = o + o;
    let (a, al, be, ga) = (base.a(), base.alpha(), base.beta(), base.gamma());
    let t = shifted_q(base);
    let quad = t.clone() * t.clone()
        + t.clone() * (two * two * a - two - (o + two + al + be) * a + ga)
        + two * a * (a - o) * al * be;
    let lin = t.clone() + (-(two * (o + al + be) * a) - two + two * ga);
    Ok(quad * lin + t * (two * a * (a - o) * (al * be + o + al + be)))
}
