//! Damped Newton iteration for square complex systems, with multistart.

use rayon::prelude::*;

use crate::numerics::linalg::Lu;
use crate::scalar::{lit, Real, C};

/// A square holomorphic system `F: C^d -> C^d`.
pub trait NonlinearSystem<T: Real>: Sync {
    fn dim(&self) -> usize;

    fn eval(&self, x: &[C<T>]) -> Vec<C<T>>;

    /// Convergence measure. Defaults to the max-modulus of `F(x)`.
    fn residual(&self, _x: &[C<T>], fx: &[C<T>]) -> T {
        fx.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }
}

/// Adapts a closure into a [`NonlinearSystem`] with the default residual.
pub struct FnSystem<F> {
    pub dim: usize,
    pub f: F,
}

impl<T, F> NonlinearSystem<T> for FnSystem<F>
where
    T: Real,
    F: Fn(&[C<T>]) -> Vec<C<T>> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[C<T>]) -> Vec<C<T>> {
        (self.f)(x)
    }
}

#[derive(Clone, Debug)]
pub struct NewtonOptions<T> {
    pub tol: T,
    pub max_iter: usize,
    /// Step halvings tried when a full step increases the residual.
    pub max_halvings: usize,
    /// Extra full steps taken after convergence while the residual keeps
    /// decreasing.
    pub polish_steps: usize,
}

impl<T: Real> Default for NewtonOptions<T> {
    fn default() -> Self {
        Self { tol: lit(1e-12), max_iter: 200, max_halvings: 30, polish_steps: 3 }
    }
}

#[derive(Clone, Debug)]
pub struct NewtonRoot<T> {
    pub point: Vec<C<T>>,
    pub residual: T,
    pub iterations: usize,
}

fn fd_step<T: Real>() -> T {
    if T::epsilon() < lit(1e-12) {
        lit(1e-7)
    } else {
        T::epsilon().cbrt()
    }
}

/// Central-difference Jacobian, row-major, step `h (1 + |x_j|)`.
pub fn fd_jacobian<T: Real, S: NonlinearSystem<T> + ?Sized>(sys: &S, x: &[C<T>]) -> Vec<C<T>> {
    let d = x.len();
    let h0 = fd_step::<T>();
    let mut jac = vec![C::new(T::zero(), T::zero()); d * d];
    let mut xp = x.to_vec();
    for j in 0..d {
        let h = h0 * (T::one() + x[j].norm());
        let orig = xp[j];
        xp[j] = orig + C::new(h, T::zero());
        let fp = sys.eval(&xp);
        xp[j] = orig - C::new(h, T::zero());
        let fm = sys.eval(&xp);
        xp[j] = orig;
        let inv = T::one() / (h + h);
        for i in 0..d {
            jac[i * d + j] = (fp[i] - fm[i]) * inv;
        }
    }
    jac
}

fn finite<T: Real>(v: &[C<T>]) -> bool {
    v.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// Damped Newton from a single start. Returns `None` unless the residual
/// drops below `opts.tol`.
pub fn newton_solve<T: Real, S: NonlinearSystem<T> + ?Sized>(
    sys: &S,
    start: &[C<T>],
    opts: &NewtonOptions<T>,
) -> Option<NewtonRoot<T>> {
    let d = sys.dim();
    debug_assert_eq!(start.len(), d);
    let mut x = start.to_vec();
    let mut fx = sys.eval(&x);
    if !finite(&fx) {
        return None;
    }
    let mut r = sys.residual(&x, &fx);
    let mut polish_left = opts.polish_steps;
    let mut converged = r < opts.tol;
    for it in 0..opts.max_iter {
        if converged && polish_left == 0 {
            return Some(NewtonRoot { point: x, residual: r, iterations: it });
        }
        let jac = fd_jacobian(sys, &x);
        let Ok(lu) = Lu::factor(&jac, d) else {
            break;
        };
        let rhs: Vec<C<T>> = fx.iter().map(|&c| -c).collect();
        let dx = lu.solve(&rhs);
        if !finite(&dx) {
            break;
        }
        let halvings = if converged { 0 } else { opts.max_halvings };
        let mut lambda = T::one();
        let mut accepted = None;
        for _ in 0..=halvings {
            let cand: Vec<C<T>> = x.iter().zip(&dx).map(|(&a, &b)| a + b * lambda).collect();
            let fc = sys.eval(&cand);
            if finite(&fc) {
                let rc = sys.residual(&cand, &fc);
                if rc < r {
                    accepted = Some((cand, fc, rc));
                    break;
                }
            }
            lambda = lambda * lit(0.5);
        }
        match accepted {
            Some((xn, fn_, rn)) => {
                x = xn;
                fx = fn_;
                r = rn;
                if converged {
                    polish_left -= 1;
                }
                if r < opts.tol {
                    converged = true;
                }
            }
            None => {
                if converged {
                    return Some(NewtonRoot { point: x, residual: r, iterations: it });
                }
                return None;
            }
        }
    }
    converged.then_some(NewtonRoot { point: x, residual: r, iterations: opts.max_iter })
}

/// Runs [`newton_solve`] from every start (in parallel) and returns the
/// converged points in start order.
pub fn newton_multistart<T: Real, S: NonlinearSystem<T>>(
    sys: &S,
    starts: &[Vec<C<T>>],
    opts: &NewtonOptions<T>,
) -> Vec<NewtonRoot<T>> {
    starts.par_iter().map(|s| newton_solve(sys, s, opts)).collect::<Vec<_>>().into_iter().flatten().collect()
}
