//! Frobenius series of the Heun equation and generalized hypergeometric
//! series.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{fmt_c, to_f64, Error, Result};
use crate::heun::{HeunBase, HeunParams};
use crate::numerics::dd::CDd;
use crate::scalar::{c_finite, from_usize, lit, near_integer, Real, C};

/// Default term cap for series summation.
pub const DEFAULT_N_CAP: usize = 100_000;

/// Default order up to which [`GhfParams::new`] checks that every
/// coefficient is finite.
pub const DEFAULT_CHECK_ORDER: usize = 200;

/// Truncated series `u = (z - center)^mu * sum c_n (z - center)^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<T> {
    center: C<T>,
    mu: C<T>,
    coeffs: Vec<C<T>>,
    radius: T,
}

impl<T: Real> PowerSeries<T> {
    /// Fails unless `coeffs` is nonempty with `c_0 = 1`.
    pub fn new(center: C<T>, mu: C<T>, coeffs: Vec<C<T>>, radius: T) -> Result<Self> {
        match coeffs.first() {
            None => Err(Error::EmptyInput),
            Some(c0) if *c0 != C::new(T::one(), T::zero()) => {
                Err(Error::InvalidArgument(format!("c_0 = {} but must be 1", fmt_c(*c0))))
            }
            _ => Ok(Self { center, mu, coeffs, radius }),
        }
    }

    pub fn center(&self) -> C<T> {
        self.center
    }
    pub fn mu(&self) -> C<T> {
        self.mu
    }
    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }
    pub fn radius(&self) -> T {
        self.radius
    }
}

fn one<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

fn cn<T: Real>(n: usize) -> C<T> {
    Complex::new(from_usize(n), T::zero())
}

/// Heun equation satisfied by `v` when `u = z^(1-γ) v`.
pub fn second_exponent_params<T: Real>(p: &HeunParams<T>) -> Result<HeunParams<T>> {
    let s = one::<T>() - p.gamma();
    let q = p.q() + s * (p.a() * p.delta() + p.epsilon());
    let base = HeunBase::new(p.a(), p.alpha() + s, p.beta() + s, one::<T>() + one::<T>() - p.gamma(), p.delta())?;
    Ok(base.with_q(q))
}

/// `Q_n = -q - (aδ + ε) n - (1 + a)(γ - 1 + n) n`.
pub fn recurrence_q<T: Real>(p: &HeunParams<T>, n: C<T>) -> C<T> {
    let a = p.a();
    -p.q() - (a * p.delta() + p.epsilon()) * n - (one::<T>() + a) * (p.gamma() + (n - one::<T>())) * n
}

/// `R_n = a n (γ - 1 + n)`.
pub fn recurrence_r<T: Real>(p: &HeunParams<T>, n: C<T>) -> C<T> {
    p.a() * n * (p.gamma() + (n - one::<T>()))
}

/// `P_n = (α + n)(β + n)`.
pub fn recurrence_p<T: Real>(p: &HeunParams<T>, n: C<T>) -> C<T> {
    (p.alpha() + n) * (p.beta() + n)
}

/// Frobenius coefficients about `z = 0` for the exponent `mu ∈ {0, 1 - γ}`,
/// from `R_n c_n + Q_{n-1} c_{n-1} + P_{n-2} c_{n-2} = 0`.
///
/// The `1 - γ` branch reuses the exponent-zero recurrence of the equation for
/// `v = z^(γ-1) u`.
pub fn frobenius_coeffs<T: Real>(p: &HeunParams<T>, mu: C<T>, n_max: usize) -> Result<PowerSeries<T>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let tol = lit::<T>(1e-12);
    let second = one::<T>() - p.gamma();
    let eq = if mu.norm() <= tol {
        *p
    } else if (mu - second).norm() <= tol * (T::one() + second.norm()) {
        second_exponent_params(p)?
    } else {
        return Err(Error::InvalidExponent { mu: fmt_c(mu) });
    };
    let scale = T::one() + eq.a().norm() * (T::one() + eq.gamma().norm());
    let mut c = Vec::with_capacity(n_max + 1);
    c.push(one::<T>());
    for n in 1..=n_max {
        let r = recurrence_r(&eq, cn(n));
        if r.norm() <= T::epsilon() * lit(64.0) * scale * from_usize::<T>(n * n) {
            return Err(Error::ResonantExponent { n });
        }
        let mut rhs = recurrence_q(&eq, cn(n - 1)) * c[n - 1];
        if n >= 2 {
            rhs = rhs + recurrence_p(&eq, cn(n - 2)) * c[n - 2];
        }
        c.push(-rhs / r);
    }
    let radius = T::one().min(p.a().norm());
    Ok(PowerSeries { center: C::zero(), mu, coeffs: c, radius })
}

/// Equation in `w = 1 - z`: singular points `{0, 1, 1 - a}`, with `γ ↔ δ` and
/// `q ↦ αβ - q`.
pub fn mirror_params<T: Real>(p: &HeunParams<T>) -> Result<HeunParams<T>> {
    let base = HeunBase::new(one::<T>() - p.a(), p.alpha(), p.beta(), p.delta(), p.gamma())?;
    Ok(base.with_q(p.alpha() * p.beta() - p.q()))
}

/// Frobenius series about `z = 1`, stored in powers of `z - 1`.
pub fn frobenius_coeffs_at_one<T: Real>(p: &HeunParams<T>, mu: C<T>, n_max: usize) -> Result<PowerSeries<T>> {
    let m = frobenius_coeffs(&mirror_params(p)?, mu, n_max)?;
    let coeffs = m.coeffs.into_iter().enumerate().map(|(n, c)| if n % 2 == 1 { -c } else { c }).collect();
    Ok(PowerSeries { center: one(), mu, coeffs, radius: T::one().min((one::<T>() - p.a()).norm()) })
}

/// Stopping rule shared by all summations: three consecutive terms below
/// `tol` times the partial sum.
struct Stopper {
    quiet: usize,
}

impl Stopper {
    fn new() -> Self {
        Self { quiet: 0 }
    }

    fn push(&mut self, small: bool) -> bool {
        self.quiet = if small { self.quiet + 1 } else { 0 };
        self.quiet >= 3
    }
}

fn small<T: Real>(term: C<T>, sum: C<T>, tol: T) -> bool {
    term.norm() <= tol * sum.norm()
}

/// Value and first two derivatives of a [`PowerSeries`] at `z`.
///
/// Requires `|z - center| < 0.95 radius`. Summation stops by the same rule as
/// [`ghf_eval`] at machine precision; a coefficient list that runs out first
/// is summed in full.
pub fn series_derivatives<T: Real>(ps: &PowerSeries<T>, z: C<T>) -> Result<(C<T>, C<T>, C<T>)> {
    let w = z - ps.center;
    let limit = ps.radius * lit(0.95);
    if !(w.norm() < limit) {
        return Err(Error::OutsideSafeDisk { z: fmt_c(z), center: fmt_c(ps.center), limit: to_f64(limit) });
    }
    let tol = T::epsilon();
    let (mut s0, mut s1, mut s2) = (C::zero(), C::zero(), C::zero());
    let mut stop = Stopper::new();
    // w^n, w^(n-1), w^(n-2)
    let mut pw = one::<T>();
    let mut pw1 = C::zero();
    let mut pw2 = C::zero();
    for (n, &c) in ps.coeffs.iter().enumerate() {
        let t0 = c * pw;
        let t1 = c * pw1 * cn(n);
        let t2 = if n >= 2 { c * pw2 * cn(n * (n - 1)) } else { C::zero() };
        s0 = s0 + t0;
        s1 = s1 + t1;
        s2 = s2 + t2;
        if stop.push(small(t0, s0, tol) && small(t1, s1, tol) && small(t2, s2, tol)) {
            break;
        }
        pw2 = pw1;
        pw1 = if n == 0 { one() } else { pw1 * w };
        pw = pw * w;
    }
    let mu = ps.mu;
    if mu.is_zero() {
        return Ok((s0, s1, s2));
    }
    if w.is_zero() {
        return Err(Error::SingularPoint { z: fmt_c(z), which: "branch point of the series" });
    }
    let f = w.powc(mu);
    let inv = w.inv();
    let u = f * s0;
    let du = f * (s1 + mu * s0 * inv);
    let ddu = f * (s2 + (mu + mu) * s1 * inv + mu * (mu - one()) * s0 * inv * inv);
    Ok((u, du, ddu))
}

/// Numerator and denominator parameters of `rFs(a_1..a_r; b_1..b_s; z)`.
///
/// Pairs with `a_i = b_j + 1` are recognised and evaluated through the
/// pole-free factor `(b_j + n) / b_j` of `(b_j + 1)_n / (b_j)_n`, unless
/// `b_j` is a nonpositive integer: there the conventional reading holds, in
/// which a nonpositive-integer numerator terminates the series before the
/// denominator pole is reached.
#[derive(Clone, Debug, PartialEq)]
pub struct GhfParams<T> {
    numerator: Vec<C<T>>,
    denominator: Vec<C<T>>,
    // indices (numerator, denominator) of unit-shift pairs
    pairs: Vec<(usize, usize)>,
}

fn shift_tol<T: Real>(b: C<T>) -> T {
    lit::<T>(1e-12) * (T::one() + b.norm())
}

impl<T: Real> GhfParams<T> {
    pub fn new(numerator: Vec<C<T>>, denominator: Vec<C<T>>) -> Result<Self> {
        Self::with_order(numerator, denominator, DEFAULT_CHECK_ORDER)
    }

    /// Checks finiteness of every coefficient up to `order`.
    pub fn with_order(numerator: Vec<C<T>>, denominator: Vec<C<T>>, order: usize) -> Result<Self> {
        for (i, x) in numerator.iter().chain(&denominator).enumerate() {
            if !c_finite(*x) {
                return Err(Error::InvalidArgument(format!("parameter {i} is not finite")));
            }
        }
        let mut pairs = Vec::new();
        let mut used_num = vec![false; numerator.len()];
        for (j, &b) in denominator.iter().enumerate() {
            // at nonpositive integers the conventional (terminating) reading
            // of the series applies instead
            if matches!(near_integer(b, lit(1e-12)), Some(m) if m <= 0) {
                continue;
            }
            let hit =
                (0..numerator.len()).find(|&i| !used_num[i] && (numerator[i] - b - one::<T>()).norm() <= shift_tol(b));
            if let Some(i) = hit {
                used_num[i] = true;
                pairs.push((i, j));
            }
        }
        let g = Self { numerator, denominator, pairs };
        g.check(order)?;
        Ok(g)
    }

    pub fn numerator(&self) -> &[C<T>] {
        &self.numerator
    }
    pub fn denominator(&self) -> &[C<T>] {
        &self.denominator
    }

    fn is_paired_num(&self, i: usize) -> bool {
        self.pairs.iter().any(|&(pi, _)| pi == i)
    }
    fn is_paired_den(&self, j: usize) -> bool {
        self.pairs.iter().any(|&(_, pj)| pj == j)
    }

    /// First `n >= 1` at which an unpaired numerator factor `a - 1 + n`
    /// vanishes, i.e. the series is a polynomial of degree `n - 1`.
    fn termination(&self) -> Option<usize> {
        let tol = lit::<T>(1e-12);
        self.numerator
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.is_paired_num(*i))
            .filter_map(|(_, &a)| match near_integer(a, tol) {
                Some(m) if m <= 0 => Some((1 - m) as usize),
                _ => None,
            })
            .min()
    }

    fn check(&self, order: usize) -> Result<()> {
        let tol = lit::<T>(1e-12);
        let stop = self.termination();
        for (j, &b) in self.denominator.iter().enumerate() {
            if self.is_paired_den(j) {
                if b.norm() <= shift_tol(b) {
                    return Err(Error::ZeroDenominator { param: fmt_c(b), n: 0 });
                }
                continue;
            }
            if let Some(m) = near_integer(b, tol) {
                if m <= 0 {
                    let n = (1 - m) as usize;
                    let cancelled = matches!(stop, Some(s) if s < n);
                    if n <= order && !cancelled {
                        return Err(Error::ZeroDenominator { param: fmt_c(b), n });
                    }
                }
            }
        }
        Ok(())
    }

    /// Coefficient ratio excluding the factor contributed by unit-shift
    /// pairs, in double-word arithmetic.
    fn reduced_ratio(&self, n: usize) -> Result<CDd<T>> {
        let n1 = CDd::real(from_usize::<T>(n - 1));
        let mut num = CDd::real(T::one());
        for (i, &a) in self.numerator.iter().enumerate() {
            if !self.is_paired_num(i) {
                num = num * (CDd::new(a) + n1);
            }
        }
        let mut den = CDd::real(from_usize::<T>(n));
        for (j, &b) in self.denominator.iter().enumerate() {
            if !self.is_paired_den(j) {
                let f = CDd::new(b) + n1;
                if f.to_complex().norm() <= shift_tol(b) * T::epsilon().sqrt() {
                    return Err(Error::ZeroDenominator { param: fmt_c(b), n });
                }
                den = den * f;
            }
        }
        Ok(num / den)
    }

    fn pair_factor(&self, n: usize) -> CDd<T> {
        let nn = CDd::real(from_usize::<T>(n));
        self.pairs
            .iter()
            .map(|&(_, j)| {
                let b = CDd::new(self.denominator[j]);
                (b + nn) / b
            })
            .fold(CDd::real(T::one()), |acc, f| acc * f)
    }
}

/// `c_n / c_(n-1) = (1/n) ∏(a_k - 1 + n) / ∏(b_k - 1 + n)`.
///
/// Returns zero once the series has terminated. Fails on a vanishing
/// denominator factor that is not cancelled.
pub fn ghf_ratio<T: Real>(g: &GhfParams<T>, n: usize) -> Result<C<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("ratio index must be at least 1".into()));
    }
    if matches!(g.termination(), Some(s) if s < n) {
        return Ok(C::zero());
    }
    let nn = cn::<T>(n);
    let mut num = one::<T>();
    let mut zeros: Vec<C<T>> = Vec::new();
    for &a in &g.numerator {
        let f = a + cn::<T>(n - 1);
        if f.is_zero() {
            zeros.push(a);
        } else {
            num = num * f;
        }
    }
    let mut den = nn;
    for &b in &g.denominator {
        let f = b + cn::<T>(n - 1);
        if f.is_zero() {
            // identical numerator parameter cancels the factor
            match zeros.iter().position(|&a| a == b) {
                Some(k) => {
                    zeros.swap_remove(k);
                }
                None => return Err(Error::ZeroDenominator { param: fmt_c(b), n }),
            }
        } else {
            den = den * f;
        }
    }
    if !zeros.is_empty() {
        return Ok(C::zero());
    }
    Ok(num / den)
}

/// Result of [`ghf_eval`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhfValue<T> {
    pub value: C<T>,
    pub terms_used: usize,
    /// `|last term| / (1 - |last ratio|)`; infinite when the ratio is not
    /// below one in modulus.
    pub tail_estimate: T,
}

/// Value and derivatives from [`ghf_eval_derivs`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GhfDerivs<T> {
    pub u: C<T>,
    pub du: C<T>,
    pub ddu: C<T>,
    pub terms_used: usize,
}

fn check_disk<T: Real>(g: &GhfParams<T>, z: C<T>) -> Result<()> {
    let r = g.numerator.len();
    let s = g.denominator.len();
    if g.termination().is_some() || r <= s {
        return Ok(());
    }
    if r > s + 1 || !(z.norm() < T::one()) {
        return Err(Error::OutsideSafeDisk { z: fmt_c(z), center: "0".into(), limit: 1.0 });
    }
    Ok(())
}

/// Sums the hypergeometric series until three consecutive terms fall below
/// `tol` times the partial sum.
///
/// Terms and partial sums are carried in double-word arithmetic, so the
/// result keeps full precision even when large terms cancel (the sum of the
/// term magnitudes exceeding the value by many orders).
pub fn ghf_eval<T: Real>(g: &GhfParams<T>, z: C<T>, tol: T, n_cap: usize) -> Result<GhfValue<T>> {
    check_disk(g, z)?;
    let stop_at = g.termination();
    let zd = CDd::new(z);
    let mut base = CDd::real(T::one()); // reduced coefficient times z^n
    let mut sum = CDd::real(T::one());
    let mut last = one::<T>();
    let mut stop = Stopper::new();
    for n in 1..=n_cap {
        if matches!(stop_at, Some(s) if n >= s) {
            return Ok(GhfValue { value: sum.to_complex(), terms_used: n, tail_estimate: T::zero() });
        }
        base = base * g.reduced_ratio(n)? * zd;
        let term_dd = base * g.pair_factor(n);
        sum = sum + term_dd;
        let term = term_dd.to_complex();
        let total = sum.to_complex();
        let last_ratio = if last.is_zero() { C::zero() } else { term / last };
        last = term;
        if !c_finite(total) {
            return Err(Error::NoConvergence { cap: n, last_term: to_f64(term.norm()) });
        }
        if stop.push(small(term, total, tol)) {
            let q = last_ratio.norm();
            let tail = if q < T::one() { term.norm() / (T::one() - q) } else { T::infinity() };
            return Ok(GhfValue { value: total, terms_used: n + 1, tail_estimate: tail });
        }
    }
    Err(Error::NoConvergence { cap: n_cap, last_term: to_f64(last.norm()) })
}

/// Like [`ghf_eval`], also returning the first and second derivatives.
pub fn ghf_eval_derivs<T: Real>(g: &GhfParams<T>, z: C<T>, tol: T, n_cap: usize) -> Result<GhfDerivs<T>> {
    check_disk(g, z)?;
    let stop_at = g.termination();
    let zd = CDd::new(z);
    let zero = CDd::real(T::zero());
    // coefficients c_n (without powers) so that z = 0 needs no special case
    let mut coef = CDd::real(T::one());
    let mut pw = CDd::real(T::one()); // z^n
    let mut pw1 = zero; // z^(n-1)
    let mut pw2: CDd<T>; // z^(n-2)
    let (mut s0, mut s1, mut s2) = (CDd::real(T::one()), zero, zero);
    let mut stop = Stopper::new();
    let finish = |s0: CDd<T>, s1: CDd<T>, s2: CDd<T>, n| GhfDerivs {
        u: s0.to_complex(),
        du: s1.to_complex(),
        ddu: s2.to_complex(),
        terms_used: n,
    };
    for n in 1..=n_cap {
        if matches!(stop_at, Some(s) if n >= s) {
            return Ok(finish(s0, s1, s2, n));
        }
        coef = coef * g.reduced_ratio(n)?;
        pw2 = pw1;
        pw1 = pw;
        pw = pw * zd;
        let c = coef * g.pair_factor(n);
        let t0 = c * pw;
        let t1 = c * pw1 * CDd::real(from_usize(n));
        let t2 = c * pw2 * CDd::real(from_usize(n * (n - 1)));
        s0 = s0 + t0;
        s1 = s1 + t1;
        s2 = s2 + t2;
        let (u0, u1, u2) = (s0.to_complex(), s1.to_complex(), s2.to_complex());
        if !(c_finite(u0) && c_finite(u1) && c_finite(u2)) {
            return Err(Error::NoConvergence { cap: n, last_term: to_f64(t0.to_complex().norm()) });
        }
        // at z = 0 only c_1 and c_2 contribute; stop once they are in
        let done = if z.is_zero() {
            n >= 2
        } else {
            small(t0.to_complex(), u0, tol) && small(t1.to_complex(), u1, tol) && small(t2.to_complex(), u2, tol)
        };
        if stop.push(done) || (z.is_zero() && n >= 2) {
            return Ok(finish(s0, s1, s2, n + 1));
        }
    }
    Err(Error::NoConvergence { cap: n_cap, last_term: f64::NAN })
}

/// Worst normalized residual of the three-term Frobenius recurrence when the
/// coefficient ratios are taken from `g`:
///
/// ```text
/// |R_n r_n r_(n-1) + Q_(n-1) r_(n-1) + P_(n-2)| / (|R_n r_n r_(n-1)| + |Q_(n-1) r_(n-1)| + |P_(n-2)|)
/// ```
///
/// for `2 <= n <= n_max` (and the two-term form at `n = 1`). It vanishes
/// exactly when the hypergeometric series solves the recurrence; the
/// normalization keeps it meaningful even where forward recursion of the
/// three-term relation would be unstable.
pub fn recurrence_consistency<T: Real>(p: &HeunParams<T>, g: &GhfParams<T>, n_max: usize) -> Result<T> {
    recurrence_consistency_with(p, n_max, |n| ghf_ratio(g, n))
}

/// [`recurrence_consistency`] for ratios supplied by a closure. A non-finite
/// ratio makes the result infinite.
pub fn recurrence_consistency_with<T, F>(p: &HeunParams<T>, n_max: usize, mut ratio: F) -> Result<T>
where
    T: Real,
    F: FnMut(usize) -> Result<C<T>>,
{
    let mut worst = T::zero();
    let mut prev = C::zero();
    for n in 1..=n_max {
        let r = ratio(n)?;
        if !c_finite(r) {
            return Ok(T::infinity());
        }
        let nn = cn::<T>(n);
        let (num, scale) = if n == 1 {
            let t = [recurrence_r(p, nn) * r, recurrence_q(p, C::zero())];
            (t[0] + t[1], t[0].norm() + t[1].norm())
        } else {
            // the series has terminated: nothing left to check
            if prev.is_zero() {
                break;
            }
            let t = [recurrence_r(p, nn) * r * prev, recurrence_q(p, cn(n - 1)) * prev, recurrence_p(p, cn(n - 2))];
            (t[0] + t[1] + t[2], t[0].norm() + t[1].norm() + t[2].norm())
        };
        let e = if scale == T::zero() { num.norm() } else { num.norm() / scale };
        worst = worst.max(e);
        prev = r;
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heun::make_params;
    use crate::scalar::{clit, cpair};

    fn g(num: &[f64], den: &[f64]) -> GhfParams<f64> {
        GhfParams::new(num.iter().map(|&x| clit(x)).collect(), den.iter().map(|&x| clit(x)).collect()).unwrap()
    }

    #[test]
    fn constant_solution_has_no_higher_terms() {
        let p = make_params::<f64>(cpair(2.0, 0.5), clit(0.0), clit(1.3), clit(0.4), clit(2.2), clit(0.0)).unwrap();
        let s = frobenius_coeffs(&p, clit(0.0), 30).unwrap();
        assert!(s.coeffs()[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn first_coefficient() {
        let p =
            make_params::<f64>(cpair(2.0, 0.5), clit(0.7), clit(1.3), clit(0.4), clit(2.2), cpair(0.3, -1.0)).unwrap();
        let s = frobenius_coeffs(&p, clit(0.0), 3).unwrap();
        let expect = p.q() / (p.a() * p.gamma());
        assert!((s.coeffs()[1] - expect).norm() < 1e-15);
    }

    #[test]
    fn resonance_and_invalid_exponent() {
        let p = make_params::<f64>(clit(2.0), clit(0.7), clit(1.3), clit(-2.0), clit(2.2), clit(0.1)).unwrap();
        assert_eq!(frobenius_coeffs(&p, clit(0.0), 10), Err(Error::ResonantExponent { n: 3 }));
        assert!(matches!(frobenius_coeffs(&p, clit(0.25), 10), Err(Error::InvalidExponent { .. })));
    }

    #[test]
    fn ratio_examples() {
        assert!((ghf_ratio(&g(&[2.0, 3.0], &[5.0]), 1).unwrap() - clit(6.0 / 5.0)).norm() < 1e-15);
        let e1 = 0.7;
        let r = ghf_ratio(&g(&[1.0 + e1, 2.0, 3.0], &[e1, 5.0]), 1).unwrap();
        assert!((r - clit((e1 + 1.0) * 6.0 / (e1 * 5.0))).norm() < 1e-14);
        assert_eq!(ghf_ratio(&g(&[0.0, 3.0], &[5.0]), 1).unwrap(), clit(0.0));
    }

    #[test]
    fn denominator_poles() {
        let e = GhfParams::<f64>::new(vec![clit(1.0)], vec![clit(-2.0)]);
        assert_eq!(e, Err(Error::ZeroDenominator { param: "-2+0i".into(), n: 3 }));
        // numerator -1 terminates the series before the pole at n = 3
        let t = g(&[-1.0, 2.0], &[-2.0]);
        let v = ghf_eval(&t, clit(0.5), 1e-15, 100).unwrap();
        assert!((v.value - clit(1.0 + (-2.0 / -2.0) * 0.5)).norm() < 1e-15);
        // a pair (b + 1; b) is evaluated through (b + n) / b, finite where the
        // individual ratios have poles (here at n = 3)
        let b = -2.0 + 1e-9;
        let p = g(&[b + 1.0, 1.0], &[b]);
        let d = ghf_eval_derivs(&p, clit(0.0), 1e-15, 100).unwrap();
        assert!((d.du - clit((b + 1.0) / b)).norm() < 1e-12);
        let v = ghf_eval(&p, clit(0.5), 1e-15, 1000).unwrap().value;
        // sum (b + n)/b x^n = 1/(1 - x) + x/(b (1 - x)^2)
        assert!((v - clit(2.0 + 2.0 / b)).norm() < 1e-12 * (2.0 / b).abs());
    }

    #[test]
    fn log_series() {
        let v = ghf_eval(&g(&[1.0, 1.0], &[2.0]), clit(0.5), 1e-16, DEFAULT_N_CAP).unwrap();
        assert!((v.value - clit(2.0 * std::f64::consts::LN_2)).norm() < 1e-14);
        assert!(v.tail_estimate < 1e-14);
        assert_eq!(ghf_eval(&g(&[1.0, 1.0], &[2.0]), clit(0.0), 1e-16, 10).unwrap().value, clit(1.0));
    }

    #[test]
    fn derivatives_of_log_series() {
        // F = -ln(1-z)/z
        let z = 0.3f64;
        let d = ghf_eval_derivs(&g(&[1.0, 1.0], &[2.0]), clit(z), 1e-16, DEFAULT_N_CAP).unwrap();
        let l = -(1.0 - z).ln();
        let f1 = (1.0 / (1.0 - z)) / z - l / (z * z);
        let f2 = (1.0 / (1.0 - z).powi(2)) / z - 2.0 / ((1.0 - z) * z * z) + 2.0 * l / z.powi(3);
        assert!((d.u - clit(l / z)).norm() < 1e-14);
        assert!((d.du - clit(f1)).norm() < 1e-13);
        assert!((d.ddu - clit(f2)).norm() < 1e-12);
    }

    #[test]
    fn non_convergence_reported() {
        let e = ghf_eval(&g(&[1.0, 1.0], &[2.0]), clit(0.999999), 1e-16, 50);
        assert!(matches!(e, Err(Error::NoConvergence { cap: 50, .. })));
        assert!(matches!(ghf_eval(&g(&[1.0, 1.0], &[2.0]), clit(1.5), 1e-16, 50), Err(Error::OutsideSafeDisk { .. })));
    }

    #[test]
    fn series_derivative_examples() {
        let ps = PowerSeries::new(clit(0.0), clit(0.0), vec![clit(1.0), clit(0.0), clit(0.0)], 1.0).unwrap();
        assert_eq!(series_derivatives(&ps, clit(0.4)).unwrap(), (clit(1.0), clit(0.0), clit(0.0)));
        let ps = PowerSeries::new(clit(0.0), clit(0.0), vec![clit(1.0), cpair(0.25, 1.0)], 1.0).unwrap();
        assert_eq!(series_derivatives(&ps, clit(0.0)).unwrap().1, cpair(0.25, 1.0));
        assert!(matches!(series_derivatives(&ps, clit(0.96)), Err(Error::OutsideSafeDisk { .. })));
        assert!(PowerSeries::<f64>::new(clit(0.0), clit(0.0), vec![], 1.0).is_err());
        assert!(PowerSeries::<f64>::new(clit(0.0), clit(0.0), vec![clit(2.0)], 1.0).is_err());
    }

    #[test]
    fn ratio_tends_to_one() {
        let gg = GhfParams::<f64>::new(vec![cpair(0.3, 1.0), clit(2.5), clit(1.7)], vec![cpair(-0.4, 2.0), clit(0.9)])
            .unwrap();
        assert!((ghf_ratio(&gg, 1_000_000).unwrap() - clit(1.0)).norm() < 1e-5);
    }
}
