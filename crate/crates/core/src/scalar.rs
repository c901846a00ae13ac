//! Scalar abstraction.
//!
//! Every numerical routine in the crate is written against [`Real`], a thin
//! bundle of `num-traits` bounds satisfied by `f32` and `f64`. Complex
//! quantities are `num_complex::Complex<T>` over the same real type.
//!
//! Tolerances quoted throughout the documentation assume `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar usable by the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
}

/// Complex scalar over a [`Real`].
pub type C<T> = Complex<T>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts a count into `T`.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

/// Real number as a complex value.
#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `f64` literal as a complex value.
#[inline]
pub fn clit<T: Real>(x: f64) -> C<T> {
    re(lit(x))
}

/// Complex number from two `f64` parts.
#[inline]
pub fn cpair<T: Real>(re_part: f64, im_part: f64) -> C<T> {
    Complex::new(lit(re_part), lit(im_part))
}

/// Machine epsilon of `T`.
#[inline]
pub fn eps<T: Real>() -> T {
    T::epsilon()
}

/// Returns the integer `m` when `z` lies within `tol` (relative to `1 + |z|`)
/// of a real integer.
pub fn near_integer<T: Real>(z: C<T>, tol: T) -> Option<i64> {
    let r = z.re.round();
    let scale = T::one() + z.norm();
    if (z.re - r).abs() <= tol * scale && z.im.abs() <= tol * scale {
        r.to_i64()
    } else {
        None
    }
}

/// True when `z` is (numerically) zero or a negative integer.
pub fn is_nonpositive_integer<T: Real>(z: C<T>, tol: T) -> bool {
    matches!(near_integer(z, tol), Some(m) if m <= 0)
}

/// Relative distance `|x - y| / max(|x|, |y|, tiny)`.
pub fn rel_diff<T: Real>(x: C<T>, y: C<T>) -> T {
    let d = (x - y).norm();
    let s = x.norm().max(y.norm());
    if s == T::zero() {
        d
    } else {
        d / s
    }
}

/// True when both parts of `z` are finite.
#[inline]
pub fn c_finite<T: Real>(z: C<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
