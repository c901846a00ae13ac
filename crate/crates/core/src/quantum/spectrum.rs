//! Bound-state energies from the condition that the solution decaying at
//! infinity vanishes at `x = 0` (`z = 1/2`):
//!
//! ```text
//! ₃F₂(α, β, 1 - αβ/q₃; -αβ/q₃, δ; 1/2) = 0.
//! ```

use log::{debug, warn};
use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::root1d::brent;
use crate::quantum::mapping::{map_to_heun, PotentialParams};
use crate::quantum::zero::count_bound_states;
use crate::scalar::{from_usize, lit, Real};
use crate::series::{ghf_eval, GhfParams, DEFAULT_N_CAP};

pub const DEFAULT_GRID: usize = 400;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult<T> {
    /// Ascending, all below the threshold.
    pub energies: Vec<T>,
    /// From the zeros of the threshold-energy solution.
    pub bound_state_count: usize,
    pub count_method_agreement: bool,
}

/// Default search window `(E_min, E_max)`.
///
/// Since `1/√(1 - e^{-s}) <= 1 + s^{-1/2}`, the Hamiltonian is bounded below
/// by the half-line problem with `V0 + V1 + V1 s^{-1/2}`, whose ground state
/// lies above `V0 + V1 - (3/4)|V1| (λ|V1|)^{1/3}` by Hardy's inequality. The
/// upper end stays a hair below the threshold.
pub fn energy_window<T: Real>(pp: &PotentialParams<T>) -> (T, T) {
    let thr = pp.threshold();
    let w = pp.v1.abs();
    let depth = lit::<T>(0.75) * w * (pp.mass_scale * w).cbrt();
    let margin = lit::<T>(1e-8) * (T::one() + thr.abs().max(w));
    (thr - depth - margin - lit::<T>(1e-3) * (T::one() + w), thr - margin)
}

/// Left-hand side of the spectral condition at energy `E`.
///
/// Where the hypergeometric parameters are degenerate the equivalent
/// contiguous form `₂F₁(α, β; δ; ½) - q₃/(2δ) ₂F₁(α+1, β+1; δ+1; ½)` is used.
pub fn spectrum_function<T: Real>(pp: &PotentialParams<T>, energy: T) -> Result<T> {
    let m = map_to_heun(pp, energy)?;
    let p = &m.params;
    let q3 = m.alpha2 - m.alpha1;
    if q3.norm() == T::zero() {
        return Err(Error::DegenerateParameters { reason: "α₁ = α₂ (V1 = 0)".into() });
    }
    let o = Complex::new(T::one(), T::zero());
    let half = Complex::new(lit::<T>(0.5), T::zero());
    let tol = T::epsilon();
    let e = -(p.alpha() * p.beta()) / q3;
    let direct = GhfParams::new(vec![p.alpha(), p.beta(), o + e], vec![e, p.delta()])
        .and_then(|g| ghf_eval(&g, half, tol, DEFAULT_N_CAP));
    match direct {
        Ok(v) => Ok(v.value.re),
        Err(err) => {
            debug!("E = {energy}: {err}; using the contiguous form");
            let f = GhfParams::new(vec![p.alpha(), p.beta()], vec![p.delta()])?;
            let g = GhfParams::new(vec![p.alpha() + o, p.beta() + o], vec![p.delta() + o])?;
            let f = ghf_eval(&f, half, tol, DEFAULT_N_CAP)?.value;
            let g = ghf_eval(&g, half, tol, DEFAULT_N_CAP)?.value;
            Ok((f - q3 / (p.delta() * lit::<T>(2.0)) * g).re)
        }
    }
}

/// Energies with `κ = √(threshold - E)` uniformly spaced: bound states
/// accumulate towards the threshold in `E`, but are roughly evenly spread
/// in `κ`. Ascending in `E`.
fn energy_grid<T: Real>(pp: &PotentialParams<T>, e_min: T, e_max: T, grid: usize) -> Vec<T> {
    let thr = pp.threshold();
    let k_hi = (thr - e_min).sqrt();
    let k_lo = (thr - e_max).sqrt();
    let last = from_usize::<T>(grid.max(2) - 1);
    (0..grid.max(2))
        .map(|i| {
            let k = k_hi + (k_lo - k_hi) * from_usize::<T>(i) / last;
            thr - k * k
        })
        .collect()
}

/// Sign changes of `f` on the grid, each refined by Brent's method to
/// `|ΔE| < 1e-10 (1 + |E|)`. Grid points where `f` fails are skipped.
pub(crate) fn scan_roots<T, F>(pp: &PotentialParams<T>, e_min: T, e_max: T, grid: usize, f: F) -> Result<Vec<T>>
where
    T: Real,
    F: Fn(T) -> Result<T> + Sync,
{
    if !(e_min < e_max) {
        return Err(Error::InvalidArgument(format!("empty energy window [{e_min}, {e_max}]")));
    }
    let es = energy_grid(pp, e_min, e_max, grid);
    let vals: Vec<Option<T>> = es
        .par_iter()
        .map(|&e| match f(e) {
            Ok(v) if v.is_finite() => Some(v),
            Ok(_) | Err(_) => {
                warn!("skipping grid energy {e}: evaluation failed");
                None
            }
        })
        .collect();
    let pts: Vec<(T, T)> = es.iter().zip(&vals).filter_map(|(&e, v)| v.map(|v| (e, v))).collect();
    let mut roots = Vec::new();
    for w in pts.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        if fa == T::zero() {
            roots.push(a);
            continue;
        }
        if fa.signum() != fb.signum() && fb != T::zero() {
            let xtol = lit::<T>(1e-10) * (T::one() + a.abs().min(b.abs()));
            roots.push(brent(&f, a, b, fa, fb, xtol, 200)?);
        }
    }
    if let Some(&(e, fe)) = pts.last() {
        if fe == T::zero() {
            roots.push(e);
        }
    }
    Ok(roots)
}

/// Bound-state energies in `[e_min, e_max]`, cross-checked against the
/// zero count of the threshold-energy solution.
pub fn spectrum<T: Real>(pp: &PotentialParams<T>, e_min: T, e_max: T, grid: usize) -> Result<SpectrumResult<T>> {
    if !(e_max < pp.threshold()) {
        return Err(Error::AboveThreshold {
            energy: crate::error::to_f64(e_max),
            threshold: crate::error::to_f64(pp.threshold()),
        });
    }
    let count = count_bound_states(pp)?;
    let energies = if pp.v1 < T::zero() {
        scan_roots(pp, e_min, e_max, grid, |e| spectrum_function(pp, e))?
    } else {
        // V >= V0 + V1 everywhere: nothing binds
        Vec::new()
    };
    let agree = energies.len() == count;
    if !agree {
        warn!("spectrum has {} energies but the zero count is {count}", energies.len());
    }
    Ok(SpectrumResult { energies, bound_state_count: count, count_method_agreement: agree })
}
