mod common;

use common::{c, C};
use heun_ghf::numerics::*;
use heun_ghf::reduction::*;
use heun_ghf::series::{frobenius_coeffs, series_derivatives};
use heun_ghf::*;
use num_complex::Complex;
use proptest::prelude::*;

fn cplx(r: f64) -> impl Strategy<Value = C> {
    (-r..r, -r..r).prop_map(|(x, y)| Complex::new(x, y))
}

/// Magnitude in `[0.3, 3)`, sign either way, at least 0.1 from integers.
fn generic() -> impl Strategy<Value = f64> {
    (0.3f64..3.0, any::<bool>())
        .prop_map(|(m, s)| if s { m } else { -m })
        .prop_filter("near an integer", |x| (x - x.round()).abs() > 0.1)
}

fn heun_params() -> impl Strategy<Value = HeunParams<f64>> {
    (cplx(3.0), cplx(3.0), cplx(3.0), cplx(3.0), cplx(3.0), cplx(3.0)).prop_filter_map(
        "coincident singularities",
        |(a, al, be, ga, de, q)| {
            make_params(a, al, be, ga, de, q).ok().filter(|p| (p.a() - c(1.0)).norm() > 0.1 && p.a().norm() > 0.1)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fuchsian_relation_is_exact(p in heun_params()) {
        let sum = p.gamma() + p.delta() + p.epsilon() - c(1.0) - p.alpha() - p.beta();
        // exact up to the rounding of one addition chain
        prop_assert!(sum.norm() <= 8.0 * f64::EPSILON * (p.alpha().norm() + p.beta().norm() + p.gamma().norm() + p.delta().norm() + 1.0));
    }

    #[test]
    fn residual_is_linear(p in heun_params(), z in cplx(2.0), v in prop::array::uniform8(cplx(2.0))) {
        prop_assume!(z.norm() > 0.05 && (z - c(1.0)).norm() > 0.05 && (z - p.a()).norm() > 0.05);
        let [u1, du1, dd1, u2, du2, dd2, k1, k2] = v;
        let r = |u, du, dd| ode_residual(&p, &SolutionSample { z, u, du }, dd).unwrap();
        let lhs = r(k1 * u1 + k2 * u2, k1 * du1 + k2 * du2, k1 * dd1 + k2 * dd2);
        let (r1, r2) = (r(u1, du1, dd1), r(u2, du2, dd2));
        let rhs = k1 * r1 + k2 * r2;
        let scale = (k1 * r1).norm() + (k2 * r2).norm();
        prop_assert!((lhs - rhs).norm() <= 1e-13 * scale.max(1e-300) + 1e-300);
    }

    #[test]
    fn roots_of_built_polynomial(roots in prop::collection::vec(cplx(3.0), 1..=8)) {
        let sep = roots.iter().enumerate()
            .flat_map(|(i, a)| roots[i + 1..].iter().map(move |b| (a - b).norm()))
            .fold(f64::INFINITY, f64::min);
        prop_assume!(sep > 0.3);
        let p = ComplexPoly::from_roots(&roots);
        let got = poly_roots(&p).unwrap();
        prop_assert_eq!(got.len(), roots.len());
        let mut used = vec![false; got.len()];
        for r in &roots {
            let j = (0..got.len()).filter(|&j| !used[j]).min_by(|&i, &j| (got[i] - r).norm().partial_cmp(&(got[j] - r).norm()).unwrap()).unwrap();
            used[j] = true;
            prop_assert!((got[j] - r).norm() < 1e-8, "{} vs {}", got[j], r);
        }
    }

    // Gaussian-integer coefficients make the sampled values exact, so any
    // error comes from the interpolation itself
    #[test]
    fn interpolation_recovers_polynomials(coeffs in prop::collection::vec((-20i32..=20, -20i32..=20), 1..=11)) {
        let coeffs: Vec<C> = coeffs.into_iter().map(|(x, y)| Complex::new(x as f64, y as f64)).collect();
        let p = ComplexPoly::new(coeffs.clone());
        let values: Vec<C> = (0..coeffs.len()).map(|k| p.eval(c(k as f64))).collect();
        let q = interpolate_integer_nodes(&values).unwrap();
        let scale = p.max_coeff_norm().max(1.0);
        for (m, x) in coeffs.iter().enumerate() {
            let y = q.coeffs().get(m).copied().unwrap_or(c(0.0));
            prop_assert!((x - y).norm() <= 1e-12 * scale, "m = {}: {} vs {}", m, x, y);
        }
    }

    #[test]
    fn newton_roots_meet_tolerance(target in prop::collection::vec(cplx(2.0), 2), start in prop::collection::vec(cplx(3.0), 2)) {
        let t = target.clone();
        let sys = FnSystem { dim: 2, f: move |x: &[C]| vec![x[0] * x[0] - t[0] * t[0], x[0] * x[1] - t[1]] };
        let opts = NewtonOptions::default();
        for root in newton_multistart(&sys, &[start], &opts) {
            let fx = (sys.f)(&root.point);
            let r = fx.iter().fold(0.0f64, |m, v| m.max(v.norm()));
            prop_assert!(root.residual <= opts.tol);
            prop_assert!(r <= opts.tol);
        }
    }

    #[test]
    fn degree_collapses(p in heun_params(), e in prop::collection::vec(cplx(3.0), 0..=4)) {
        let n = 1e8;
        let v = pi_eval(&p, &e, c(n));
        prop_assert!(v.norm() / n.powi(e.len() as i32 + 2) < 1e-6 * pi_scale(&p, &e));
    }

    #[test]
    fn epsilon_condition(p in heun_params(), e in prop::collection::vec(cplx(3.0), 0..=6)) {
        let n = e.len();
        let top = pi_coefficients(&p, &e)[n + 1];
        let expected = (p.a() - c(1.0)) * (p.epsilon() + c(n as f64));
        prop_assume!(expected.norm() > 1e-6);
        prop_assert!((top - expected).norm() <= 1e-10 * expected.norm(), "{} vs {}", top, expected);
    }

    #[test]
    fn series_solves_equation(p in heun_params(), t in 0.0f64..1.0, phi in 0.0f64..6.3) {
        let r = 0.5 * p.a().norm().min(1.0) * t;
        prop_assume!(!(p.gamma().re <= 0.5 && (p.gamma() - p.gamma().re.round()).norm() < 0.3));
        let z = Complex::from_polar(r.max(0.06), phi);
        let ps = frobenius_coeffs(&p, c(0.0), 2000).unwrap();
        let (u, du, ddu) = series_derivatives(&ps, z).unwrap();
        let r = ode_residual_scaled(&p, &SolutionSample { z, u, du }, ddu).unwrap();
        prop_assert!(r < 1e-10, "{:e}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn master_property(a in generic(), al in generic(), be in generic(), ga in generic(), n in 1usize..=4, seeds in prop::array::uniform10((0.0f64..1.0, 0.0f64..6.3))) {
        let base = HeunBase::for_order(c(a), c(al), c(be), c(ga), n).unwrap();
        let report = solve_reduction(&base, n, &ReductionOptions::default()).unwrap();
        for s in report.solutions.iter().filter(|s| !s.degenerate) {
            prop_assert!(s.recurrence_residual < 1e-12, "{:e}", s.recurrence_residual);
            let p = s.params(&base);
            let u = AssembledSolution::plain(build_solution_at_0(&p, s).unwrap());
            for (t, phi) in seeds {
                let z = Complex::from_polar(0.5 * a.abs().min(1.0) * t.max(0.05), phi);
                let (v, dv, ddv) = u.eval(z, 1e-16).unwrap();
                let r = ode_residual_scaled(&p, &SolutionSample { z, u: v, du: dv }, ddv).unwrap();
                prop_assert!(r < 1e-9, "z = {}: {:e}", z, r);
            }
        }
    }

    #[test]
    fn start_permutation_invariance(a in generic(), al in generic(), be in generic(), ga in generic(), shift in 1usize..100) {
        let base = HeunBase::for_order(c(a), c(al), c(be), c(ga), 2).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(4);
        let mut starts = reduction::solve::random_starts(&base, 2, 100, &mut rng);
        let opts = ReductionOptions::default();
        let one = solve_reduction_from_starts(&base, 2, &starts, &opts).unwrap();
        starts.rotate_left(shift);
        let two = solve_reduction_from_starts(&base, 2, &starts, &opts).unwrap();
        prop_assert_eq!(one.solutions.len(), two.solutions.len());
        for (x, y) in one.solutions.iter().zip(&two.solutions) {
            prop_assert!((x.q - y.q).norm() < 1e-9 * (1.0 + x.q.norm()));
            for (p, q) in x.e.iter().zip(&y.e) {
                prop_assert!((p - q).norm() < 1e-8 * (1.0 + p.norm()));
            }
        }
    }
}
