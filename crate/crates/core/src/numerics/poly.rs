//! Dense complex polynomials, root finding and exact interpolation on the
//! integer nodes `0, 1, ..., d`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::dd::Dd;
use crate::scalar::{c_finite, from_usize, lit, Real, C};

/// Polynomial with complex coefficients in ascending-degree order.
///
/// The leading coefficient is nonzero unless the polynomial is the zero
/// polynomial, which is stored as a single zero coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly<T> {
    coeffs: Vec<C<T>>,
}

impl<T: Real> ComplexPoly<T> {
    pub fn new(mut coeffs: Vec<C<T>>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(C::zero());
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![C::zero()])
    }

    pub fn constant(c: C<T>) -> Self {
        Self::new(vec![c])
    }

    /// `c0 + c1 x`
    pub fn linear(c0: C<T>, c1: C<T>) -> Self {
        Self::new(vec![c0, c1])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[C<T>]) -> Self {
        roots.iter().fold(Self::constant(C::one()), |acc, &r| acc * Self::linear(-r, C::one()))
    }

    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C<T>> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> C<T> {
        self.coeffs[self.coeffs.len() - 1]
    }

    /// Largest coefficient modulus.
    pub fn max_coeff_norm(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    pub fn eval(&self, x: C<T>) -> C<T> {
        self.coeffs.iter().rev().fold(C::zero(), |acc, &c| acc * x + c)
    }

    /// Value and first derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, x: C<T>) -> (C<T>, C<T>) {
        let mut p = C::zero();
        let mut dp = C::zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * from_usize::<T>(k)).collect())
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Polynomial `x -> p(x + s)`.
    pub fn shift(&self, s: C<T>) -> Self {
        // repeated synthetic division (Taylor shift)
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let next = c[j + 1];
                c[j] = c[j] + s * next;
            }
        }
        Self::new(c)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let lead = self.leading();
        Ok(Self::new(self.coeffs.iter().map(|&c| c / lead).collect()))
    }

    pub fn roots(&self) -> Result<Vec<C<T>>> {
        poly_roots(self)
    }
}

impl<T: Real> Add for ComplexPoly<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[C<T>], i: usize| v.get(i).copied().unwrap_or_else(C::zero);
        Self::new((0..n).map(|i| get(&self.coeffs, i) + get(&rhs.coeffs, i)).collect())
    }
}

impl<T: Real> Neg for ComplexPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Real> Sub for ComplexPoly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> Mul for ComplexPoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Self::new(out)
    }
}

impl<T: Real> Add<C<T>> for ComplexPoly<T> {
    type Output = Self;
    fn add(self, rhs: C<T>) -> Self {
        self + Self::constant(rhs)
    }
}

impl<T: Real> Mul<C<T>> for ComplexPoly<T> {
    type Output = Self;
    fn mul(self, rhs: C<T>) -> Self {
        self.scale(rhs)
    }
}

/// All complex roots of `p`, with multiplicity.
///
/// Aberth–Ehrlich simultaneous iteration followed by Newton polishing of each
/// root against the original coefficients.
pub fn poly_roots<T: Real>(p: &ComplexPoly<T>) -> Result<Vec<C<T>>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.degree();
    if n == 0 {
        return Err(Error::InvalidArgument("root finding needs degree >= 1".into()));
    }
    let monic = p.monic()?;
    let c = monic.coeffs();
    if n == 1 {
        return Ok(vec![-c[0]]);
    }

    // Fujiwara bound on the root moduli.
    let mut bound = T::zero();
    for (k, ck) in c.iter().enumerate().take(n) {
        let ratio = ck.norm();
        if ratio > T::zero() {
            let e = T::one() / from_usize::<T>(n - k);
            let r = if k == 0 { (ratio / lit(2.0)).powf(e) } else { ratio.powf(e) };
            bound = bound.max(r);
        }
    }
    let radius = (lit::<T>(2.0) * bound).max(lit(1e-3));

    let two_pi = lit::<T>(2.0) * T::PI();
    let mut z: Vec<C<T>> = (0..n)
        .map(|k| {
            let theta = two_pi * from_usize::<T>(k) / from_usize::<T>(n) + lit(0.4);
            Complex::from_polar(radius * lit(0.5), theta)
        })
        .collect();

    let tiny = T::epsilon() * lit(4.0);
    for _ in 0..2000 {
        let mut max_rel = T::zero();
        for i in 0..n {
            let (pv, dpv) = monic.eval_with_derivative(z[i]);
            if pv.is_zero() {
                continue;
            }
            let ratio = pv / dpv;
            let mut sum = C::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if !d.is_zero() {
                        sum = sum + d.inv();
                    }
                }
            }
            let denom = C::<T>::one() - ratio * sum;
            let w = if denom.is_zero() || !c_finite(ratio) { ratio } else { ratio / denom };
            if !c_finite(w) {
                continue;
            }
            z[i] = z[i] - w;
            let rel = w.norm() / (T::one() + z[i].norm());
            max_rel = max_rel.max(rel);
        }
        if max_rel < tiny {
            break;
        }
    }

    // Polish against the unnormalized polynomial.
    for zi in z.iter_mut() {
        let mut best = *zi;
        let mut best_val = p.eval(best).norm();
        for _ in 0..8 {
            let (pv, dpv) = p.eval_with_derivative(best);
            if dpv.is_zero() {
                break;
            }
            let cand = best - pv / dpv;
            let val = p.eval(cand).norm();
            if val < best_val {
                best = cand;
                best_val = val;
            } else {
                break;
            }
        }
        *zi = best;
    }
    merge_multiple_roots(p, &mut z);
    Ok(z)
}

/// Replaces a cluster of approximations to a multiple root by its centroid.
///
/// A k-fold root is only resolved to about `eps^(1/k)` individually, while the
/// centroid is accurate to near machine precision. The replacement is made
/// only when `p` vanishes at the centroid to within rounding error, so close
/// but distinct roots are left alone.
fn merge_multiple_roots<T: Real>(p: &ComplexPoly<T>, z: &mut [C<T>]) {
    let n = z.len();
    let reach = lit::<T>(1e-3);
    let mut group: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if (z[i] - z[j]).norm() <= reach * (T::one() + z[i].norm()) {
                let (gi, gj) = (group[i], group[j]);
                for g in group.iter_mut() {
                    if *g == gj {
                        *g = gi;
                    }
                }
            }
        }
    }
    for g in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| group[i] == g).collect();
        if members.len() < 2 {
            continue;
        }
        let k = from_usize::<T>(members.len());
        let m = members.iter().fold(C::<T>::zero(), |s, &i| s + z[i]) / k;
        let mut scale = T::zero();
        let mut pow = T::one();
        for c in p.coeffs() {
            scale = scale + c.norm() * pow;
            pow = pow * m.norm();
        }
        let rounding = lit::<T>(16.0) * from_usize::<T>(p.degree() + 1) * T::epsilon() * scale;
        if p.eval(m).norm() <= rounding {
            for &i in &members {
                z[i] = m;
            }
        }
    }
}

/// Polynomial of degree `<= d` through `(k, values[k])`, `k = 0..=d`.
///
/// Uses the forward-difference (Newton) form on the integer nodes, which is
/// exact in exact arithmetic and avoids a Vandermonde solve. Differences and
/// the change to the monomial basis are carried in double-word arithmetic:
/// the binomial basis has coefficients of size up to `d!`-ish that cancel in
/// the low-order terms.
pub fn interpolate_integer_nodes<T: Real>(values: &[C<T>]) -> Result<ComplexPoly<T>> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let d = values.len() - 1;
    let mut diffs = Vec::with_capacity(d + 1);
    let mut row: Vec<(Dd<T>, Dd<T>)> = values.iter().map(|v| (Dd::new(v.re), Dd::new(v.im))).collect();
    diffs.push(row[0]);
    for _ in 0..d {
        row = row.windows(2).map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1)).collect();
        diffs.push(row[0]);
    }
    // binomial basis C(n, k) = n (n-1) ... (n-k+1) / k!, real coefficients
    let zero = Dd::new(T::zero());
    let mut out = vec![(zero, zero); d + 1];
    let mut basis = vec![Dd::new(T::one())];
    for (k, &(dr, di)) in diffs.iter().enumerate() {
        for (i, &b) in basis.iter().enumerate() {
            out[i] = (out[i].0 + dr * b, out[i].1 + di * b);
        }
        if k == d {
            break;
        }
        let kk = Dd::new(from_usize::<T>(k));
        let k1 = Dd::new(from_usize::<T>(k + 1));
        let mut next = vec![zero; basis.len() + 1];
        for (i, &b) in basis.iter().enumerate() {
            let scaled = b / k1;
            next[i + 1] = next[i + 1] + scaled;
            next[i] = next[i] - scaled * kk;
        }
        basis = next;
    }
    Ok(ComplexPoly::new(out.into_iter().map(|(r, i)| Complex::new(r.to_scalar(), i.to_scalar())).collect()))
}
