//! The reduction polynomial
//!
//! ```text
//! Π(n) = a(α-1+n)(β-1+n) E(n) + Q_(n-1) E(n-1) + (n-1)(γ-2+n) E(n-2),
//! E(n) = ∏ (e_k + n),
//! ```
//!
//! obtained by substituting the two-term ratio of the hypergeometric ansatz
//! into the three-term Frobenius recurrence. The ansatz solves the equation
//! exactly when `Π` vanishes identically in `n`.

use num_complex::Complex;

use crate::heun::HeunParams;
use crate::numerics::poly::{interpolate_integer_nodes, ComplexPoly};
use crate::scalar::{from_usize, Real, C};
use crate::series::recurrence_q;

fn one<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

fn e_product<T: Real>(e: &[C<T>], n: C<T>) -> C<T> {
    e.iter().fold(one(), |acc, &ek| acc * (ek + n))
}

/// The three summands of `Π(n)`.
pub(crate) fn pi_terms<T: Real>(p: &HeunParams<T>, e: &[C<T>], n: C<T>) -> [C<T>; 3] {
    let o = one::<T>();
    let two = o + o;
    [
        p.a() * (p.alpha() + (n - o)) * (p.beta() + (n - o)) * e_product(e, n),
        recurrence_q(p, n - o) * e_product(e, n - o),
        (n - o) * (p.gamma() - two + n) * e_product(e, n - two),
    ]
}

/// `Π(n)` for arbitrary complex `n`.
pub fn pi_eval<T: Real>(p: &HeunParams<T>, e: &[C<T>], n: C<T>) -> C<T> {
    let [x, y, z] = pi_terms(p, e, n);
    x + y + z
}

/// Coefficients `A_0..A_(N+1)` of `Π`, ascending in `n`, from exact
/// interpolation at `n = 0..N+1`.
pub fn pi_coefficients<T: Real>(p: &HeunParams<T>, e: &[C<T>]) -> Vec<C<T>> {
    pi_coefficients_to(p, e, e.len() + 1)
}

/// Coefficients of `Π` up to `n^degree`, interpolated at `n = 0..degree`.
/// With `degree = N + 2` this exposes the (vanishing) top coefficient.
pub fn pi_coefficients_to<T: Real>(p: &HeunParams<T>, e: &[C<T>], degree: usize) -> Vec<C<T>> {
    let values: Vec<C<T>> = (0..=degree).map(|k| pi_eval(p, e, Complex::new(from_usize(k), T::zero()))).collect();
    let mut c = interpolate_integer_nodes(&values).expect("nonempty node set").into_coeffs();
    c.resize(degree + 1, C::new(T::zero(), T::zero()));
    c
}

/// `Π` as a polynomial built by multiplying out the products directly.
/// Independent of [`pi_coefficients`]; used for scaling and as a check.
pub fn pi_expanded<T: Real>(p: &HeunParams<T>, e: &[C<T>]) -> [ComplexPoly<T>; 3] {
    let o = one::<T>();
    let two = o + o;
    let roots: Vec<C<T>> = e.iter().map(|&x| -x).collect();
    let en = ComplexPoly::from_roots(&roots);
    let lin = |c0: C<T>| ComplexPoly::linear(c0, o);
    let first = lin(p.alpha() - o) * lin(p.beta() - o) * en.clone() * p.a();
    // Q_(n-1) = -q - (aδ+ε)(n-1) - (1+a)(γ-2+n)(n-1)
    let nm1 = lin(-o);
    let q = ComplexPoly::constant(-p.q())
        - nm1.clone() * (p.a() * p.delta() + p.epsilon())
        - lin(p.gamma() - two) * nm1.clone() * (o + p.a());
    let second = q * en.shift(-o);
    let third = nm1 * lin(p.gamma() - two) * en.shift(-two);
    [first, second, third]
}

/// Magnitude scale for residuals of `Π`: the largest coefficient of any of
/// its three summands. `Π` itself vanishes at a solution, so its own
/// coefficients cannot serve as a scale.
pub fn pi_scale<T: Real>(p: &HeunParams<T>, e: &[C<T>]) -> T {
    let s = pi_expanded(p, e).iter().map(|t| t.max_coeff_norm()).fold(T::zero(), |m, x| m.max(x));
    if s > T::zero() {
        s
    } else {
        T::one()
    }
}
