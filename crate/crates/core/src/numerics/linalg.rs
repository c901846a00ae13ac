//! Small dense complex LU factorization with partial pivoting.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Row-major square matrix factorized as `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    n: usize,
    lu: Vec<C<T>>,
    perm: Vec<usize>,
    swaps: usize,
}

impl<T: Real> Lu<T> {
    /// Factorizes `a` (row-major, `n x n`). Fails on an exactly zero pivot.
    pub fn factor(a: &[C<T>], n: usize) -> Result<Self> {
        Self::factor_impl(a, n, None)
    }

    /// Like [`Lu::factor`], but zero pivots are replaced by `floor`, so a
    /// numerically singular matrix still yields a usable factorization (for
    /// inverse iteration).
    pub fn factor_regularized(a: &[C<T>], n: usize, floor: T) -> Self {
        Self::factor_impl(a, n, Some(floor)).expect("regularized factorization cannot fail")
    }

    fn factor_impl(a: &[C<T>], n: usize, floor: Option<T>) -> Result<Self> {
        assert_eq!(a.len(), n * n, "matrix shape");
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, lu[i * n + k].norm()))
                    .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            if pmax == T::zero() || !pmax.is_finite() {
                match floor {
                    Some(f) => lu[k * n + k] = C::new(f, T::zero()),
                    None => return Err(Error::SingularMatrix),
                }
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                if factor.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] = lu[i * n + j] - factor * u;
                }
            }
        }
        Ok(Self { n, lu, perm, swaps })
    }

    pub fn solve(&self, b: &[C<T>]) -> Vec<C<T>> {
        let n = self.n;
        let mut x: Vec<C<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[i * n + j];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[i * n + j];
                x[i] = x[i] - u * x[j];
            }
            x[i] = x[i] / self.lu[i * n + i];
        }
        x
    }

    pub fn det(&self) -> C<T> {
        let d = (0..self.n).fold(C::one(), |acc, i| acc * self.lu[i * self.n + i]);
        if self.swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }
}

/// Determinant of a row-major square matrix (zero for singular input).
pub fn determinant<T: Real>(a: &[C<T>], n: usize) -> C<T> {
    match Lu::factor(a, n) {
        Ok(lu) => lu.det(),
        Err(_) => C::zero(),
    }
}

/// Approximate null vector of a (near-)singular matrix by two sweeps of
/// inverse iteration, normalized to unit max-modulus.
pub fn null_vector<T: Real>(a: &[C<T>], n: usize) -> Vec<C<T>> {
    let scale = a.iter().fold(T::zero(), |m, c| m.max(c.norm()));
    let floor = (scale * T::epsilon()).max(T::min_positive_value());
    let lu = Lu::factor_regularized(a, n, floor);
    let mut v: Vec<C<T>> =
        (0..n).map(|i| C::new(T::one(), T::from_usize(i + 1).unwrap() * T::from_f64(0.1).unwrap())).collect();
    for _ in 0..3 {
        v = lu.solve(&v);
        let m = v.iter().fold(T::zero(), |m, c| m.max(c.norm()));
        if m == T::zero() || !m.is_finite() {
            break;
        }
        v.iter_mut().for_each(|c| *c = *c / m);
    }
    v
}

/// Eigenvalues `λ` of the pencil `det(A - λ B) = 0` for invertible `B`.
///
/// Aberth–Ehrlich iteration on the determinant, using
/// `d/dλ ln det(A - λB) = -tr((A - λB)^-1 B)`; exactly `n` values are
/// returned (with multiplicity).
pub fn pencil_eigenvalues<T: Real>(a: &[C<T>], b: &[C<T>], n: usize) -> Result<Vec<C<T>>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    // crude bound on the spectral radius from B^-1 A
    let lub = Lu::factor(b, n)?;
    let mut radius = T::zero();
    let mut rows = vec![T::zero(); n];
    for j in 0..n {
        let col: Vec<C<T>> = (0..n).map(|i| a[i * n + j]).collect();
        let x = lub.solve(&col);
        for i in 0..n {
            rows[i] = rows[i] + x[i].norm();
        }
    }
    for r in rows {
        radius = radius.max(r);
    }
    let radius = radius.max(T::from_f64(1e-3).unwrap());
    let two_pi = T::from_f64(2.0).unwrap() * T::PI();
    let mut z: Vec<C<T>> = (0..n)
        .map(|k| {
            let th = two_pi * T::from_usize(k).unwrap() / T::from_usize(n).unwrap() + T::from_f64(0.4).unwrap();
            C::from_polar(radius * T::from_f64(0.5).unwrap(), th)
        })
        .collect();
    let tiny = T::epsilon() * T::from_f64(8.0).unwrap();
    let mut m = vec![C::zero(); n * n];
    for _ in 0..500 {
        let mut worst = T::zero();
        for i in 0..n {
            for k in 0..n * n {
                m[k] = a[k] - b[k] * z[i];
            }
            let Ok(lu) = Lu::factor(&m, n) else {
                continue; // landed on an eigenvalue
            };
            let mut tr: C<T> = C::zero();
            for j in 0..n {
                let col: Vec<C<T>> = (0..n).map(|r| b[r * n + j]).collect();
                tr = tr + lu.solve(&col)[j];
            }
            let dlog = -tr;
            if dlog.is_zero() {
                continue;
            }
            let newton = dlog.inv();
            let mut sum: C<T> = C::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if !d.is_zero() {
                        sum = sum + d.inv();
                    }
                }
            }
            let denom = C::<T>::one() - newton * sum;
            let w = if denom.is_zero() { newton } else { newton / denom };
            if !(w.re.is_finite() && w.im.is_finite()) {
                continue;
            }
            z[i] = z[i] - w;
            worst = worst.max(w.norm() / (T::one() + z[i].norm()));
        }
        if worst < tiny {
            break;
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{clit, cpair};

    #[test]
    fn solves_small_system() {
        let a: Vec<C<f64>> = vec![cpair(2.0, 1.0), clit(1.0), clit(-1.0), cpair(0.0, 3.0)];
        let x: Vec<C<f64>> = vec![cpair(1.0, -1.0), clit(2.0)];
        let b = vec![a[0] * x[0] + a[1] * x[1], a[2] * x[0] + a[3] * x[1]];
        let lu = Lu::factor(&a, 2).unwrap();
        let y = lu.solve(&b);
        assert!((y[0] - x[0]).norm() < 1e-14 && (y[1] - x[1]).norm() < 1e-14);
        let det = a[0] * a[3] - a[1] * a[2];
        assert!((lu.det() - det).norm() < 1e-14);
    }

    #[test]
    fn singular_is_reported() {
        let a: Vec<C<f64>> = vec![clit(1.0), clit(2.0), clit(2.0), clit(4.0)];
        assert!(matches!(Lu::factor(&a, 2), Err(Error::SingularMatrix)));
        let v = null_vector(&a, 2);
        let r0 = a[0] * v[0] + a[1] * v[1];
        assert!(r0.norm() < 1e-12);
    }

    #[test]
    fn pencil_of_diagonal_matrices() {
        // det(A - λ B) with A = diag(2, -3, 5i), B = I
        let mut a: Vec<C<f64>> = vec![clit(0.0); 9];
        a[0] = clit(2.0);
        a[4] = clit(-3.0);
        a[8] = cpair(0.0, 5.0);
        let mut b: Vec<C<f64>> = vec![clit(0.0); 9];
        b[0] = clit(1.0);
        b[4] = clit(1.0);
        b[8] = clit(1.0);
        b[1] = clit(0.5); // upper-triangular B keeps the spectrum
        let ev = pencil_eigenvalues(&a, &b, 3).unwrap();
        for target in [clit(2.0), clit(-3.0), cpair(0.0, 5.0)] {
            assert!(ev.iter().any(|z| (z - target).norm() < 1e-12), "{ev:?}");
        }
    }
}
