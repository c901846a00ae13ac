//! Adaptive Dormand–Prince 5(4) integration for small fixed-size systems.

use std::ops::{Add, Mul, Sub};

use crate::error::{to_f64, Error, Result};
use crate::scalar::{lit, Real, C};

/// Element type of an integrated state vector.
pub trait OdeValue<T: Real>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(self) -> T;
}

impl<T: Real> OdeValue<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn magnitude(self) -> T {
        self.abs()
    }
}

impl<T: Real> OdeValue<T> for C<T> {
    fn zero() -> Self {
        C::new(T::zero(), T::zero())
    }
    fn magnitude(self) -> T {
        self.norm()
    }
}

#[derive(Clone, Debug)]
pub struct OdeOptions<T> {
    pub rtol: T,
    pub atol: T,
    /// Smallest admissible step, relative to `max(1, |t|)`.
    pub h_min: T,
    pub max_steps: usize,
}

impl<T: Real> OdeOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self { rtol: tol, atol: tol, h_min: lit(1e-14), max_steps: 1_000_000 }
    }
}

/// Accepted integration point.
#[derive(Clone, Copy, Debug)]
pub struct OdePoint<T, S, const D: usize> {
    pub t: T,
    pub y: [S; D],
    pub dy: [S; D],
}

// Dormand–Prince tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th minus embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn comb<T: Real, S: OdeValue<T>, const D: usize>(y: &[S; D], h: T, terms: &[(f64, &[S; D])]) -> [S; D] {
    let mut out = *y;
    for &(w, k) in terms {
        if w == 0.0 {
            continue;
        }
        let hw = h * lit::<T>(w);
        for i in 0..D {
            out[i] = out[i] + k[i] * hw;
        }
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `t1` (either direction).
///
/// `on_step` runs after every accepted step and may rescale the state (useful
/// for linear problems with exponential growth). Returned points include both
/// endpoints.
pub fn dopri5<T, S, const D: usize, F, O>(
    mut f: F,
    t0: T,
    y0: [S; D],
    t1: T,
    opts: &OdeOptions<T>,
    mut on_step: O,
) -> Result<Vec<OdePoint<T, S, D>>>
where
    T: Real,
    S: OdeValue<T>,
    F: FnMut(T, &[S; D]) -> [S; D],
    O: FnMut(T, &mut [S; D]),
{
    let span = t1 - t0;
    let mut out = Vec::new();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    out.push(OdePoint { t, y, dy: k1 });
    if span == T::zero() {
        return Ok(out);
    }
    let dir = span.signum();
    let mut h = span.abs() * lit(1e-3);
    let max_h = span.abs();
    let mut steps = 0usize;
    loop {
        let remaining = (t1 - t).abs();
        if remaining <= T::epsilon() * (T::one() + t1.abs()) * lit(4.0) {
            break;
        }
        if steps >= opts.max_steps {
            return Err(Error::StepBudgetExhausted { steps });
        }
        let last = h >= remaining;
        let hs = if last { remaining } else { h } * dir;

        let k2 = f(t + hs * lit(C2), &comb(&y, hs, &[(A21, &k1)]));
        let k3 = f(t + hs * lit(C3), &comb(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + hs * lit(C4), &comb(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + hs * lit(C5), &comb(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + hs, &comb(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = comb(&y, hs, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + hs, &y_new);
        let zero = [S::zero(); D];
        let err = comb(&zero, hs, &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)]);

        let mut en = T::zero();
        let mut finite = true;
        for i in 0..D {
            let sc = opts.atol + opts.rtol * y[i].magnitude().max(y_new[i].magnitude());
            let r = err[i].magnitude() / sc;
            if !r.is_finite() || !y_new[i].magnitude().is_finite() {
                finite = false;
            }
            en = en.max(r);
        }
        if !finite {
            en = lit(1e10);
        }

        if en <= T::one() {
            t = if last { t1 } else { t + hs };
            y = y_new;
            on_step(t, &mut y);
            k1 = f(t, &y);
            out.push(OdePoint { t, y, dy: k1 });
            steps += 1;
            if last {
                break;
            }
        }
        let factor =
            if en == T::zero() { lit(5.0) } else { (lit::<T>(0.9) * en.powf(lit(-0.2))).max(lit(0.2)).min(lit(5.0)) };
        h = (h * factor).min(max_h);
        if h < opts.h_min * T::one().max(t.abs()) {
            return Err(Error::StepSizeUnderflow { t: to_f64(t) });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_full_period() {
        let opts = OdeOptions::with_tol(1e-12);
        let pts =
            dopri5(|_t, y: &[f64; 2]| [y[1], -y[0]], 0.0, [1.0, 0.0], 2.0 * std::f64::consts::PI, &opts, |_, _| {})
                .unwrap();
        let end = pts.last().unwrap();
        assert!((end.y[0] - 1.0).abs() < 1e-9 && end.y[1].abs() < 1e-9);
        assert_eq!(end.t, 2.0 * std::f64::consts::PI);
    }

    #[test]
    fn backwards_complex_exponential() {
        let i = C::new(0.0, 1.0);
        let opts = OdeOptions::with_tol(1e-12);
        let pts = dopri5(|_t, y: &[C<f64>; 1]| [y[0] * i], 1.0, [C::new(1.0, 0.0)], 0.0, &opts, |_, _| {}).unwrap();
        let expected = (-i).exp();
        assert!((pts.last().unwrap().y[0] - expected).norm() < 1e-10);
    }
}
