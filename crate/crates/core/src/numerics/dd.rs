//! Double-word arithmetic (an unevaluated sum `hi + lo`) built on error-free
//! transformations, for residuals in iterative refinement and for series
//! whose terms cancel heavily.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::{Real, C};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd<T> {
    pub hi: T,
    pub lo: T,
}

#[inline]
fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    (s, b - (s - a))
}

impl<T: Real> Dd<T> {
    pub fn new(x: T) -> Self {
        Self { hi: x, lo: T::zero() }
    }

    pub fn to_scalar(self) -> T {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < T::zero() {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= T::zero() {
            return Self::new(T::zero());
        }
        let x = self.hi.sqrt();
        let y = Self::new(x);
        let r = (self - y * y).hi;
        let (hi, lo) = quick_two_sum(x, r / (x + x));
        Self { hi, lo }
    }
}

impl<T: Real> Add for Dd<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl<T: Real> Neg for Dd<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl<T: Real> Sub for Dd<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Mul for Dd<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl<T: Real> Div for Dd<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self - o * Self::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Self::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::new(q3)
    }
}

/// Complex number with double-word parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CDd<T> {
    pub re: Dd<T>,
    pub im: Dd<T>,
}

impl<T: Real> CDd<T> {
    pub fn new(z: C<T>) -> Self {
        Self { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    pub fn real(x: T) -> Self {
        Self::new(Complex::new(x, T::zero()))
    }

    pub fn to_complex(self) -> C<T> {
        Complex::new(self.re.to_scalar(), self.im.to_scalar())
    }

    pub fn is_zero(&self) -> bool {
        self.re.hi == T::zero() && self.im.hi == T::zero()
    }
}

impl<T: Real> Add for CDd<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<T: Real> Sub for CDd<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<T: Real> Neg for CDd<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl<T: Real> Mul for CDd<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl<T: Real> Div for CDd<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = o.re * o.re + o.im * o.im;
        Self { re: (self.re * o.re + self.im * o.im) / d, im: (self.im * o.re - self.re * o.im) / d }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_lost_digits() {
        let x = Dd::new(1.0f64) + Dd::new(1e-20);
        assert_eq!(x.hi, 1.0);
        assert_eq!(x.lo, 1e-20);
        assert_eq!((x - Dd::new(1.0)).to_scalar(), 1e-20);
        // (1 + 2^-30)^2 - 1 - 2^-29 = 2^-60, invisible in plain f64
        let u = Dd::new(1.0 + 2f64.powi(-30));
        let r = u * u - Dd::new(1.0) - Dd::new(2f64.powi(-29));
        assert_eq!(r.to_scalar(), 2f64.powi(-60));
    }

    #[test]
    fn division_and_root() {
        let third = Dd::new(1.0f64) / Dd::new(3.0);
        let back = third * Dd::new(3.0) - Dd::new(1.0);
        assert!(back.to_scalar().abs() < 1e-30);
        let r = Dd::new(2.0f64).sqrt();
        assert!((r * r - Dd::new(2.0)).to_scalar().abs() < 1e-30);
        assert_eq!(Dd::new(-2.0f64).abs().hi, 2.0);
    }

    #[test]
    fn complex_product() {
        let z = CDd::new(Complex::new(1.0f64, 2.0)) * CDd::new(Complex::new(3.0, -1.0));
        assert_eq!(z.to_complex(), Complex::new(5.0, 5.0));
        let back = z / CDd::new(Complex::new(3.0, -1.0));
        assert_eq!(back.to_complex(), Complex::new(1.0, 2.0));
    }
}
