//! Solving `A_0 = ... = A_N = 0` for `(q, e_1..e_N)`.

use log::{debug, warn};
use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{fmt_c, Error, Result};
use crate::heun::{HeunBase, HeunParams};
use crate::numerics::dd::CDd;
use crate::numerics::dedupe::{dedupe, Symmetry};
use crate::numerics::linalg::Lu;
use crate::numerics::linalg::{null_vector, pencil_eigenvalues};
use crate::numerics::newton::fd_jacobian;
use crate::numerics::newton::{newton_multistart, NewtonOptions, NonlinearSystem};
use crate::numerics::poly::{poly_roots, ComplexPoly};
use crate::reduction::pi::{pi_expanded, pi_scale, pi_terms};
use crate::scalar::{from_usize, lit, near_integer, Real, C};
use crate::series::recurrence_consistency_with;

/// One admissible `(q, e_1..e_N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionSolution<T> {
    pub n_order: usize,
    pub q: C<T>,
    /// Sorted by real part, then imaginary part.
    pub e: Vec<C<T>>,
    /// `max |A_m|, m = 0..N`, relative to [`pi_scale`].
    pub system_residual: T,
    /// Worst normalized three-term recurrence residual over the first
    /// [`ReductionOptions::recurrence_terms`] coefficients; see
    /// [`crate::series::recurrence_consistency`].
    pub recurrence_residual: T,
    /// Some `e_k` is (numerically) a nonpositive integer, so the
    /// hypergeometric representation degenerates.
    pub degenerate: bool,
}

impl<T: Real> ReductionSolution<T> {
    pub fn params(&self, base: &HeunBase<T>) -> HeunParams<T> {
        base.with_q(self.q)
    }
}

#[derive(Clone, Debug)]
pub struct ReductionOptions<T> {
    pub seed: u64,
    /// Random starts per pass; `None` means `max(64, 32 (N + 1))`.
    pub starts: Option<usize>,
    /// Also start from the eigenvalues of the linear pencil in `q`.
    pub pencil_seeds: bool,
    pub newton: NewtonOptions<T>,
    /// Absolute-plus-relative tolerance for merging solutions.
    pub merge_tol: T,
    pub recurrence_terms: usize,
    /// Roots whose recurrence residual exceeds this are treated as numerical
    /// artifacts and dropped (with a log message).
    pub spurious_threshold: T,
}

impl<T: Real> Default for ReductionOptions<T> {
    fn default() -> Self {
        Self {
            seed: 0,
            starts: None,
            pencil_seeds: true,
            newton: NewtonOptions { tol: lit(1e-11), ..NewtonOptions::default() },
            merge_tol: lit(1e-7),
            recurrence_terms: 200,
            spurious_threshold: lit(1e-8),
        }
    }
}

/// Solutions found by [`solve_reduction`].
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionReport<T> {
    pub n_order: usize,
    /// Sorted by `q` (real part, then imaginary part).
    pub solutions: Vec<ReductionSolution<T>>,
    /// Set when fewer than `N + 1` distinct solutions were found even after
    /// the enlarged retry.
    pub shortfall: Option<Shortfall>,
    /// Converged Newton points rejected by the recurrence check.
    pub spurious: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shortfall {
    pub found: usize,
    pub expected: usize,
}

impl<T: Real> ReductionReport<T> {
    pub fn expected(&self) -> usize {
        self.n_order + 1
    }

    pub fn is_complete(&self) -> bool {
        self.shortfall.is_none()
    }

    pub fn qs(&self) -> Vec<C<T>> {
        self.solutions.iter().map(|s| s.q).collect()
    }
}

/// Square system `(q, e) -> (A_0, .., A_N)`.
pub struct ReductionSystem<T> {
    base: HeunBase<T>,
    n: usize,
}

impl<T: Real> ReductionSystem<T> {
    pub fn new(base: HeunBase<T>, n: usize) -> Self {
        Self { base, n }
    }
}

impl<T: Real> NonlinearSystem<T> for ReductionSystem<T> {
    fn dim(&self) -> usize {
        self.n + 1
    }

    // Coefficients come from multiplying out the products: interpolating
    // values at integer nodes amplifies rounding by roughly 2^N (N+1)^(N+1),
    // which would cap the attainable accuracy of the roots.
    fn eval(&self, x: &[C<T>]) -> Vec<C<T>> {
        let p = self.base.with_q(x[0]);
        let [f, g, h] = pi_expanded(&p, &x[1..]);
        let sum = f + g + h;
        (0..=self.n).map(|m| sum.coeffs().get(m).copied().unwrap_or(C::zero())).collect()
    }

    fn residual(&self, x: &[C<T>], fx: &[C<T>]) -> T {
        let p = self.base.with_q(x[0]);
        fx.iter().fold(T::zero(), |m, c| m.max(c.norm())) / pi_scale(&p, &x[1..])
    }
}

fn check_order<T: Real>(base: &HeunBase<T>, n: usize) -> Result<()> {
    let target = Complex::new(-from_usize::<T>(n), T::zero());
    let eps = base.epsilon();
    if (eps - target).norm() > lit::<T>(1e-10) * (T::one() + from_usize::<T>(n)) {
        return Err(Error::EpsilonMismatch { epsilon: fmt_c(eps), expected: fmt_c(target) });
    }
    if (base.a() - Complex::new(T::one(), T::zero())).norm() <= lit(1e-12) {
        return Err(Error::UnitSingularity);
    }
    Ok(())
}

/// Sorts complex numbers by real part, treating real parts within `tol` of
/// each other as equal and ordering those by imaginary part. Keeps complex
/// conjugate pairs in a stable order despite rounding in the real parts.
pub fn canonical_sort<T: Real>(v: &mut [C<T>], tol: T) {
    sort_by_key_tolerant(v, |z| *z, tol);
}

fn sort_by_key_tolerant<X, T: Real>(v: &mut [X], key: impl Fn(&X) -> C<T>, tol: T) {
    v.sort_by(|a, b| key(a).re.partial_cmp(&key(b).re).unwrap_or(std::cmp::Ordering::Equal));
    let mut i = 0;
    while i < v.len() {
        let mut j = i + 1;
        while j < v.len() {
            let (x, y) = (key(&v[j - 1]), key(&v[j]));
            if (y.re - x.re).abs() > tol * (T::one() + x.re.abs().max(y.re.abs())) {
                break;
            }
            j += 1;
        }
        v[i..j].sort_by(|a, b| key(a).im.partial_cmp(&key(b).im).unwrap_or(std::cmp::Ordering::Equal));
        i = j;
    }
}

/// Linear pencil: for fixed `q`, `Π` is linear in the coefficients `s_j` of
/// `E(n) = Σ s_j n^j`, giving `(M0 - q M1) s = (A_0..A_N)`. Its eigenvalues
/// are the admissible `q`, and each null vector gives `e_k = -roots(E)`.
fn pencil_starts<T: Real>(base: &HeunBase<T>, n: usize) -> Vec<Vec<C<T>>> {
    let o = Complex::new(T::one(), T::zero());
    let two = o + o;
    let dim = n + 1;
    let p0 = base.with_q(C::zero());
    let lin = |c0: C<T>| ComplexPoly::linear(c0, o);
    let nm1 = lin(-o);
    let qr = ComplexPoly::constant(C::zero())
        - nm1.clone() * (p0.a() * p0.delta() + p0.epsilon())
        - lin(p0.gamma() - two) * nm1.clone() * (o + p0.a());
    let f0 = lin(p0.alpha() - o) * lin(p0.beta() - o) * p0.a();
    let f2 = nm1.clone() * lin(p0.gamma() - two);
    let mut m0 = vec![C::zero(); dim * dim];
    let mut m1 = vec![C::zero(); dim * dim];
    for j in 0..dim {
        let mut c = vec![C::zero(); j + 1];
        c[j] = o;
        let e = ComplexPoly::new(c);
        let col0 = f0.clone() * e.clone() + qr.clone() * e.shift(-o) + f2.clone() * e.shift(-two);
        let col1 = e.shift(-o);
        for i in 0..dim {
            m0[i * dim + j] = col0.coeffs().get(i).copied().unwrap_or(C::zero());
            m1[i * dim + j] = col1.coeffs().get(i).copied().unwrap_or(C::zero());
        }
    }
    let Ok(qs) = pencil_eigenvalues(&m0, &m1, dim) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for q in qs {
        let m: Vec<C<T>> = m0.iter().zip(&m1).map(|(&x, &y)| x - y * q).collect();
        let s = null_vector(&m, dim);
        let lead = s[n];
        if lead.norm() <= T::epsilon() * s.iter().fold(T::zero(), |a, c| a.max(c.norm())) {
            continue;
        }
        let e_poly = ComplexPoly::new(s.iter().map(|&c| c / lead).collect());
        let e: Vec<C<T>> = if n == 0 {
            Vec::new()
        } else {
            match poly_roots(&e_poly) {
                Ok(r) => r.into_iter().map(|x| -x).collect(),
                Err(_) => continue,
            }
        };
        let mut x = vec![q];
        x.extend(e);
        if x.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            out.push(x);
        }
    }
    out
}

fn random_disk<T: Real, R: Rng>(rng: &mut R, center: C<T>, radius: T) -> C<T> {
    let r = radius * lit::<T>(rng.gen::<f64>()).sqrt();
    let th = lit::<T>(rng.gen::<f64>() * std::f64::consts::TAU);
    center + Complex::from_polar(r, th)
}

/// Random starts: `e_k` uniform in the disk of radius 5 about `-1/2`, `q`
/// uniform in the disk of radius `5 |aαβ| + 1` about the origin.
pub fn random_starts<T: Real, R: Rng>(base: &HeunBase<T>, n: usize, count: usize, rng: &mut R) -> Vec<Vec<C<T>>> {
    let q_radius = lit::<T>(5.0) * (base.a() * base.alpha() * base.beta()).norm() + T::one();
    let e_center = Complex::new(lit(-0.5), T::zero());
    (0..count)
        .map(|_| {
            let mut x = vec![random_disk(rng, C::zero(), q_radius)];
            for _ in 0..n {
                x.push(random_disk(rng, e_center, lit(5.0)));
            }
            x
        })
        .collect()
}

/// `Π(n_j) / s_j` at the nodes `n = 1..N+1`, each row divided by the size
/// of its summands at the starting point. Vanishing at `N + 1` distinct
/// nodes is equivalent to `A_0 = ... = A_N = 0`, but the rows are evaluated
/// in product form, which keeps rounding relative to each node.
struct NodeSystem<T> {
    base: HeunBase<T>,
    n: usize,
    scales: Vec<T>,
}

impl<T: Real> NodeSystem<T> {
    fn node(j: usize) -> C<T> {
        Complex::new(from_usize(j + 1), T::zero())
    }

    fn new(base: HeunBase<T>, n: usize, x: &[C<T>]) -> Self {
        let p = base.with_q(x[0]);
        let scales = (0..=n)
            .map(|j| {
                let s: T = pi_terms(&p, &x[1..], Self::node(j)).iter().map(|t| t.norm()).sum();
                if s > T::zero() {
                    s
                } else {
                    T::one()
                }
            })
            .collect();
        Self { base, n, scales }
    }
}

impl<T: Real> NonlinearSystem<T> for NodeSystem<T> {
    fn dim(&self) -> usize {
        self.n + 1
    }

    // Evaluated in double-word arithmetic with `ε = -N` exactly, so that
    // refinement is limited by the representability of the roots rather
    // than by cancellation among the three summands.
    fn eval(&self, x: &[C<T>]) -> Vec<C<T>> {
        let b = &self.base;
        let d = |z: C<T>| CDd::new(z);
        let o = CDd::real(T::one());
        let two = o + o;
        let nn = CDd::real(from_usize(self.n));
        let (a, alpha, beta, gamma) = (d(b.a()), d(b.alpha()), d(b.beta()), d(b.gamma()));
        let delta = o + nn + alpha + beta - gamma;
        let eps = -nn;
        let e: Vec<CDd<T>> = x[1..].iter().map(|&z| d(z)).collect();
        let prod = |m: CDd<T>| e.iter().fold(o, |acc, &ek| acc * (ek + m));
        (0..=self.n)
            .map(|j| {
                let m = CDd::real(from_usize(j + 1));
                let m1 = m - o;
                let q = -d(x[0]) - (a * delta + eps) * m1 - (o + a) * (gamma - two + m) * m1;
                let t1 = a * (alpha - o + m) * (beta - o + m) * prod(m);
                let t2 = q * prod(m1);
                let t3 = m1 * (gamma - two + m) * prod(m - two);
                (t1 + t2 + t3).to_complex() / self.scales[j]
            })
            .collect()
    }
}

/// A few undamped Newton steps on [`NodeSystem`], kept while the residual
/// decreases.
fn polish<T: Real>(base: &HeunBase<T>, n: usize, x: Vec<C<T>>) -> Vec<C<T>> {
    let sys = NodeSystem::new(*base, n, &x);
    let d = n + 1;
    let mut x = x;
    let mut fx = sys.eval(&x);
    let mut r = sys.residual(&x, &fx);
    for _ in 0..8 {
        let Ok(lu) = Lu::factor(&fd_jacobian(&sys, &x), d) else {
            break;
        };
        let rhs: Vec<C<T>> = fx.iter().map(|&c| -c).collect();
        let dx = lu.solve(&rhs);
        let cand: Vec<C<T>> = x.iter().zip(&dx).map(|(&a, &b)| a + b).collect();
        let fc = sys.eval(&cand);
        let rc = sys.residual(&cand, &fc);
        if !(rc < r) {
            break;
        }
        x = cand;
        fx = fc;
        r = rc;
    }
    // Π(1) = aαβ ∏(1 + e_k) - q ∏ e_k: taking q from it keeps q accurate
    // relative to itself when it is small (some e_k near -1); for N = 0 it
    // is exactly aαβ
    if x[1..].iter().all(|e| !e.is_zero()) {
        let o = CDd::real(T::one());
        let (mut num, mut den) = (o, o);
        for &ek in &x[1..] {
            let e = CDd::new(ek);
            num = num * (o + e);
            den = den * e;
        }
        x[0] = base.a() * base.alpha() * base.beta() * num.to_complex() / den.to_complex();
    }
    x
}

/// Whether `e_k` makes the hypergeometric representation degenerate.
pub fn is_degenerate_e<T: Real>(e: C<T>) -> bool {
    matches!(near_integer(e, lit(1e-8)), Some(m) if m <= 0)
}

fn recurrence_residual<T: Real>(p: &HeunParams<T>, e: &[C<T>], terms: usize) -> T {
    recurrence_consistency_with(p, terms, |n| {
        let nn = Complex::new(from_usize::<T>(n), T::zero());
        let n1 = Complex::new(from_usize::<T>(n - 1), T::zero());
        let mut r = (p.alpha() + n1) * (p.beta() + n1) / ((p.gamma() + n1) * nn);
        for &ek in e {
            r = r * (ek + nn) / (ek + n1);
        }
        Ok(r)
    })
    .unwrap_or(T::infinity())
}

fn assess<T: Real>(base: &HeunBase<T>, n: usize, x: &[C<T>], opts: &ReductionOptions<T>) -> ReductionSolution<T> {
    let sys = ReductionSystem::new(*base, n);
    let fx = sys.eval(x);
    let p = base.with_q(x[0]);
    let e = x[1..].to_vec();
    ReductionSolution {
        n_order: n,
        q: x[0],
        system_residual: sys.residual(x, &fx),
        recurrence_residual: recurrence_residual(&p, &e, opts.recurrence_terms),
        degenerate: e.iter().any(|&ek| is_degenerate_e(ek)),
        e,
    }
}

/// Runs Newton from every start and merges, validates and sorts the roots.
pub fn solve_reduction_from_starts<T: Real>(
    base: &HeunBase<T>,
    n: usize,
    starts: &[Vec<C<T>>],
    opts: &ReductionOptions<T>,
) -> Result<ReductionReport<T>> {
    check_order(base, n)?;
    if let Some(bad) = starts.iter().find(|s| s.len() != n + 1) {
        return Err(Error::InvalidArgument(format!(
            "start of length {} for a system of dimension {}",
            bad.len(),
            n + 1
        )));
    }
    let sys = ReductionSystem::new(*base, n);
    let roots = newton_multistart(&sys, starts, &opts.newton);
    debug!("{} of {} starts converged", roots.len(), starts.len());
    Ok(finish(base, n, roots.into_iter().map(|r| r.point), opts))
}

fn finish<T: Real>(
    base: &HeunBase<T>,
    n: usize,
    points: impl IntoIterator<Item = Vec<C<T>>>,
    opts: &ReductionOptions<T>,
) -> ReductionReport<T> {
    let sort_tol = lit::<T>(1e-9);
    let clusters = dedupe(points, opts.merge_tol, opts.merge_tol, Symmetry::PermuteTail { from: 1 });
    let mut solutions = Vec::new();
    let mut spurious = 0;
    for c in clusters {
        let mut x = polish(base, n, c.point);
        canonical_sort(&mut x[1..], sort_tol);
        let s = assess(base, n, &x, opts);
        if !s.degenerate && !(s.recurrence_residual <= opts.spurious_threshold) {
            warn!(
                "dropping spurious root q = {} (recurrence residual {:e})",
                fmt_c(s.q),
                crate::error::to_f64(s.recurrence_residual)
            );
            spurious += 1;
            continue;
        }
        solutions.push(s);
    }
    sort_by_key_tolerant(&mut solutions, |s| s.q, sort_tol);
    let expected = n + 1;
    let shortfall = (solutions.len() < expected).then_some(Shortfall { found: solutions.len(), expected });
    ReductionReport { n_order: n, solutions, shortfall, spurious }
}

/// All admissible `(q, e_1..e_N)` for a base with `ε = -N`.
///
/// Newton runs start from the pencil eigenpairs (unless disabled) and from
/// `max(64, 32 (N + 1))` seeded random points. If fewer than `N + 1` distinct
/// solutions result, one retry with four times as many random starts is
/// made; a remaining shortfall is reported in the returned report rather
/// than as an error.
pub fn solve_reduction<T: Real>(
    base: &HeunBase<T>,
    n: usize,
    opts: &ReductionOptions<T>,
) -> Result<ReductionReport<T>> {
    check_order(base, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let count = opts.starts.unwrap_or_else(|| 64.max(32 * (n + 1)));
    let mut starts = if opts.pencil_seeds { pencil_starts(base, n) } else { Vec::new() };
    starts.extend(random_starts(base, n, count, &mut rng));
    let sys = ReductionSystem::new(*base, n);
    let mut points: Vec<Vec<C<T>>> =
        newton_multistart(&sys, &starts, &opts.newton).into_iter().map(|r| r.point).collect();
    let mut report = finish(base, n, points.clone(), opts);
    if report.shortfall.is_some() {
        debug!("retrying with {} starts", 4 * count);
        let more = random_starts(base, n, 4 * count, &mut rng);
        points.extend(newton_multistart(&sys, &more, &opts.newton).into_iter().map(|r| r.point));
        report = finish(base, n, points, opts);
        if let Some(s) = report.shortfall {
            warn!("found {} of {} accessory-parameter solutions", s.found, s.expected);
        }
    }
    Ok(report)
}

/// Monic `∏ (q - q_i)` over the solutions of a complete report.
pub fn q_polynomial<T: Real>(report: &ReductionReport<T>) -> Result<ComplexPoly<T>> {
    if let Some(s) = report.shortfall {
        return Err(Error::Shortfall { found: s.found, expected: s.expected });
    }
    Ok(ComplexPoly::from_roots(&report.qs()))
}

/// Residuals of `q = aαβ ∏ (1 + e_k)/e_k` and
/// `a^N = ∏ e_k (1 + e_k - γ) / ((e_k - α)(e_k - β))`, both relative. The
/// second is the best over the `N` branches of the root.
pub fn conjecture_check<T: Real>(sol: &ReductionSolution<T>, p: &HeunParams<T>) -> Result<(T, T)> {
    let n = sol.e.len();
    if n == 0 {
        return Err(Error::InvalidArgument("the identities need N >= 1".into()));
    }
    let o = Complex::new(T::one(), T::zero());
    let tol = lit::<T>(1e-12);
    for &ek in &sol.e {
        for (bad, what) in [(C::zero(), "0"), (p.alpha(), "alpha"), (p.beta(), "beta")] {
            if (ek - bad).norm() <= tol * (T::one() + bad.norm()) {
                return Err(Error::DegenerateParameters { reason: format!("e = {} coincides with {what}", fmt_c(ek)) });
            }
        }
    }
    let mut qprod = p.a() * p.alpha() * p.beta();
    let mut w = o;
    for &ek in &sol.e {
        qprod = qprod * (o + ek) / ek;
        w = w * ek * (o + ek - p.gamma()) / ((ek - p.alpha()) * (ek - p.beta()));
    }
    let qscale = if sol.q.is_zero() { T::one() } else { sol.q.norm() };
    let q_res = (sol.q - qprod).norm() / qscale;
    let nn = from_usize::<T>(n);
    let root = w.powf(T::one() / nn);
    let a = p.a();
    let a_res = (0..n)
        .map(|k| {
            let branch =
                root * Complex::from_polar(T::one(), lit::<T>(std::f64::consts::TAU) * from_usize::<T>(k) / nn);
            (a - branch).norm() / a.norm()
        })
        .fold(T::infinity(), |m, x| m.min(x));
    Ok((q_res, a_res))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{clit, cpair};

    #[test]
    fn tolerant_sort_keeps_conjugates_ordered() {
        let mut v: Vec<C<f64>> = vec![cpair(1.0 + 1e-15, -2.0), cpair(1.0, 2.0), clit(-3.0)];
        canonical_sort(&mut v, 1e-9);
        assert_eq!(v, vec![clit(-3.0), cpair(1.0 + 1e-15, -2.0), cpair(1.0, 2.0)]);
    }

    #[test]
    fn epsilon_mismatch() {
        let b = HeunBase::<f64>::for_order(clit(3.0), clit(0.5), clit(1.5), clit(0.7), 2).unwrap();
        assert!(matches!(solve_reduction(&b, 1, &ReductionOptions::default()), Err(Error::EpsilonMismatch { .. })));
    }

    #[test]
    fn pencil_recovers_every_solution_for_small_orders() {
        let b = HeunBase::<f64>::for_order(cpair(2.5, 0.3), clit(0.4), clit(-1.3), clit(0.8), 3).unwrap();
        let seeds = pencil_starts(&b, 3);
        assert_eq!(seeds.len(), 4);
        let sys = ReductionSystem::new(b, 3);
        for s in &seeds {
            let fx = sys.eval(s);
            assert!(sys.residual(s, &fx) < 1e-8, "{s:?}");
        }
    }
}
