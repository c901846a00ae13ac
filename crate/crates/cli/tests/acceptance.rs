//! Acceptance suite: one line per criterion, non-zero exit if any fails.

// `!(x < y)` is deliberate throughout: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use heun_ghf::numerics::poly_roots;
use heun_ghf::quantum::{
    count_bound_states, energy_window, map_to_heun, shooting_spectrum, spectrum, PotentialParams, DEFAULT_GRID,
};
use heun_ghf::reduction::{
    build_solution_at_0, build_solution_at_1, closed_form_n1, closed_form_n2, conjecture_check, pi_coefficients,
    pi_coefficients_to, pi_scale, solve_positive_epsilon, AssembledSolution,
};
use heun_ghf::series::recurrence_consistency;
use heun_ghf::{
    ghf_ratio, integrate_reference, make_params, ode_residual_scaled, solve_reduction, Error, HeunBase64, HeunParams64,
    ReductionOptions64, SolutionSample,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, Box<dyn Fn() -> Outcome>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn c(x: f64) -> C {
    C::new(x, 0.0)
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Real value with `0.3 <= |x| <= 3`, random sign, more than 0.1 away from
/// every integer.
fn generic_real(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let m: f64 = rng.gen_range(0.3..=3.0);
        let x = if rng.gen() { m } else { -m };
        if (x - x.round()).abs() > 0.1 {
            return x;
        }
    }
}

fn random_base(rng: &mut ChaCha8Rng, n: usize) -> HeunBase64 {
    loop {
        let [a, al, be, ga] = [(); 4].map(|_| generic_real(rng));
        if let Ok(b) = HeunBase64::for_order(c(a), c(al), c(be), c(ga), n) {
            return b;
        }
    }
}

fn opts() -> ReductionOptions64 {
    ReductionOptions64::default()
}

/// Greedy one-to-one matching; returns the worst relative distance.
fn match_sets(x: &[C], y: &[C]) -> Option<f64> {
    if x.len() != y.len() {
        return None;
    }
    let mut used = vec![false; y.len()];
    let mut worst: f64 = 0.0;
    for a in x {
        let (j, d) = (0..y.len())
            .filter(|&j| !used[j])
            .map(|j| (j, (a - y[j]).norm() / (1.0 + y[j].norm())))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        used[j] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

/// Scaled ODE residual of an assembled solution at `z`.
fn residual(u: &AssembledSolution<f64>, p: &HeunParams64, z: C) -> Result<f64, String> {
    let (v, dv, ddv) = u.eval(z, 1e-16).map_err(|e| e.to_string())?;
    ode_residual_scaled(p, &SolutionSample { z, u: v, du: dv }, ddv).map_err(|e| e.to_string())
}

/// `count` points on a ring-sector around `center` with radius in
/// `[0.1, 1] * r`, deterministic.
fn sample_points(center: C, r: f64, count: usize) -> Vec<C> {
    (0..count)
        .map(|k| {
            let t = 0.1 + 0.9 * (k as f64 + 0.5) / count as f64;
            center + C::from_polar(r * t, 0.7 + 2.3 * k as f64)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let base = random_base(&mut rng, 0);
        let r = solve_reduction(&base, 0, &opts()).map_err(|e| e.to_string())?;
        ensure!(r.solutions.len() == 1, "{} solutions for N = 0", r.solutions.len());
        let s = &r.solutions[0];
        let exact = base.a() * base.alpha() * base.beta();
        ensure!(s.q == exact, "q = {} differs from aαβ = {}", s.q, exact);
        let g = build_solution_at_0(&s.params(&base), s).map_err(|e| e.to_string())?;
        let (mut t_ghf, mut t_gauss) = (c(1.0), c(1.0));
        for n in 1..=50 {
            t_ghf *= ghf_ratio(&g, n).map_err(|e| e.to_string())?;
            let m = (n - 1) as f64;
            t_gauss *= (base.alpha() + m) * (base.beta() + m) / ((base.gamma() + m) * n as f64);
            worst = worst.max(rel(t_ghf, t_gauss));
        }
    }
    ensure!(worst < 1e-13, "term mismatch {worst:e}");
    Ok(format!("20 sets, q exact, worst term error {worst:.1e}"))
}

fn closed_form_check(n: usize, seed: u64, tol: f64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst_q, mut worst_e): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let base = random_base(&mut rng, n);
        let r = solve_reduction(&base, n, &opts()).map_err(|e| e.to_string())?;
        let poly = if n == 1 { closed_form_n1(&base) } else { closed_form_n2(&base) }.map_err(|e| e.to_string())?;
        let roots = poly_roots(&poly).map_err(|e| e.to_string())?;
        let d = match_sets(&r.qs(), &roots)
            .ok_or_else(|| format!("{} q-values vs {} roots", r.solutions.len(), roots.len()))?;
        worst_q = worst_q.max(d);
        if n == 1 {
            let ab = base.a() * base.alpha() * base.beta();
            for s in &r.solutions {
                worst_e = worst_e.max(rel(s.e[0], ab / (s.q - ab)));
            }
        }
    }
    ensure!(worst_q < tol, "q deviation {worst_q:e}");
    ensure!(worst_e < tol, "e deviation {worst_e:e}");
    Ok(if n == 1 {
        format!("20 sets, q {worst_q:.1e}, e₁ {worst_e:.1e}")
    } else {
        format!("20 sets, q {worst_q:.1e}")
    })
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let (mut total, mut full, mut worst): (usize, usize, f64) = (0, 0, 0.0);
    for n in 1..=5 {
        for _ in 0..10 {
            let base = random_base(&mut rng, n);
            let r = solve_reduction(&base, n, &opts()).map_err(|e| e.to_string())?;
            total += 1;
            if r.is_complete() {
                full += 1;
            } else {
                eprintln!("  shortfall: N = {n}, {} of {} solutions", r.solutions.len(), n + 1);
            }
            for s in r.solutions.iter().filter(|s| !s.degenerate) {
                let p = s.params(&base);
                let g = build_solution_at_0(&p, s).map_err(|e| e.to_string())?;
                let rc = recurrence_consistency(&p, &g, 200).map_err(|e| e.to_string())?;
                ensure!(rc < 1e-12, "N = {n}: consistency {rc:e} at q = {}", s.q);
                worst = worst.max(rc);
            }
        }
    }
    let frac = full as f64 / total as f64;
    ensure!(frac >= 0.9, "full count for only {full}/{total} sets");
    Ok(format!("{total} sets, full count {full}/{total}, worst consistency {worst:.1e}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let (mut worst_res, mut worst_path, mut checked): (f64, f64, usize) = (0.0, 0.0, 0);
    for n in 1..=3 {
        for _ in 0..4 {
            let base = random_base(&mut rng, n);
            let a = base.a();
            let r0 = solve_reduction(&base, n, &opts()).map_err(|e| e.to_string())?;
            let mut family: Vec<(HeunParams64, AssembledSolution<f64>, C, f64)> = Vec::new();
            for s in r0.solutions.iter().filter(|s| !s.degenerate) {
                let p = s.params(&base);
                let u = AssembledSolution::plain(build_solution_at_0(&p, s).map_err(|e| e.to_string())?);
                family.push((p, u, c(0.0), a.norm().min(1.0)));
            }
            let (ms, _) = build_solution_at_1(&base, n, &opts()).map_err(|e| e.to_string())?;
            for m in ms {
                if let Some(u) = m.solution {
                    family.push((base.with_q(m.q), u, c(1.0), (c(1.0) - a).norm().min(1.0)));
                }
            }
            for (p, u, center, radius) in &family {
                for z in sample_points(*center, 0.5 * radius, 10) {
                    let r = residual(u, p, z)?;
                    ensure!(r < 1e-9, "N = {n}: residual {r:e} at z = {z}");
                    worst_res = worst_res.max(r);
                }
                // short arc around the expansion point
                let z0 = center + C::from_polar(0.4 * radius, 0.9);
                let z1 = center + C::from_polar(0.4 * radius, 1.6);
                let (v0, dv0, _) = u.eval(z0, 1e-16).map_err(|e| e.to_string())?;
                let (v1, _, _) = u.eval(z1, 1e-16).map_err(|e| e.to_string())?;
                let path = integrate_reference(p, z0, v0, dv0, z1, 1e-12).map_err(|e| e.to_string())?;
                let end = path.last().expect("end point").u;
                let d = rel(end, v1);
                ensure!(d < 1e-8, "N = {n}: integration differs by {d:e}");
                worst_path = worst_path.max(d);
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} solutions, worst residual {worst_res:.1e}, worst path {worst_path:.1e}"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut cplx = || C::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let (mut worst_top, mut worst_extra, mut count): (f64, f64, usize) = (0.0, 0.0, 0);
    for n in 0..=6 {
        let mut done = 0;
        while done < 6 {
            let Ok(p) = make_params(cplx(), cplx(), cplx(), cplx(), cplx(), cplx()) else { continue };
            let e: Vec<C> = (0..n).map(|_| cplx()).collect();
            let coeffs = pi_coefficients(&p, &e);
            let expected = (p.a() - c(1.0)) * (p.epsilon() + c(n as f64));
            worst_top = worst_top.max(rel(coeffs[n + 1], expected));
            let extended = pi_coefficients_to(&p, &e, n + 2);
            worst_extra = worst_extra.max(extended[n + 2].norm() / pi_scale(&p, &e));
            done += 1;
            count += 1;
        }
    }
    ensure!(worst_top < 1e-10, "A_(N+1) deviation {worst_top:e}");
    ensure!(worst_extra < 1e-10, "n^(N+2) coefficient {worst_extra:e}");
    Ok(format!("{count} inputs, A_(N+1) {worst_top:.1e}, n^(N+2) {worst_extra:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let (mut wq, mut wa, mut count): (f64, f64, usize) = (0.0, 0.0, 0);
    for n in 1..=7 {
        for _ in 0..2 {
            let base = random_base(&mut rng, n);
            let r = solve_reduction(&base, n, &opts()).map_err(|e| e.to_string())?;
            for s in r.solutions.iter().filter(|s| !s.degenerate) {
                let (qr, ar) = conjecture_check(s, &s.params(&base)).map_err(|e| e.to_string())?;
                ensure!(qr < 1e-10 && ar < 1e-8, "N = {n}: q {qr:e}, a {ar:e}");
                wq = wq.max(qr);
                wa = wa.max(ar);
                count += 1;
            }
        }
    }
    Ok(format!("{count} solutions, q {wq:.1e}, a {wa:.1e}"))
}

fn criterion_8() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (eps, a, al, be, ga) in
        [(2.0, 2.6, 1.7, 2.3, 1.35), (3.0, -1.7, 2.4, 1.8, 0.6), (3.0, 3.0, 0.3333333333, 2.5, 0.75)]
    {
        let delta = 1.0 + al + be - ga - eps;
        let base = HeunBase64::new(c(a), c(al), c(be), c(ga), c(delta)).map_err(|e| e.to_string())?;
        let (sols, report) = solve_positive_epsilon(&base, &opts()).map_err(|e| e.to_string())?;
        ensure!(report.is_complete(), "ε = {eps}: {} solutions", sols.len());
        for s in &sols {
            let Some(u) = &s.solution else { continue };
            let p = base.with_q(s.q);
            for z in sample_points(c(0.0), 0.5 * a.abs().min(1.0), 10) {
                let r = residual(u, &p, z)?;
                ensure!(r < 1e-9, "ε = {eps}: residual {r:e} at z = {z}");
                worst = worst.max(r);
            }
            count += 1;
        }
    }
    let base = HeunBase64::new(c(2.6), c(1.7), c(2.3), c(1.35), c(1.0 + 1.7 + 2.3 - 1.35 - 1.0)).unwrap();
    match solve_positive_epsilon(&base, &opts()) {
        Err(Error::ExceptionalEpsilon) => {}
        other => return Err(format!("ε = 1 not rejected: {other:?}")),
    }
    Ok(format!("{count} solutions, worst residual {worst:.1e}; ε = 1 rejected"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut weakest = f64::INFINITY;
    let half = c(0.5);
    let mut count = 0;
    while count < 10 {
        let base = random_base(&mut rng, 1);
        let r0 = solve_reduction(&base, 1, &opts()).map_err(|e| e.to_string())?;
        let (ms, _) = build_solution_at_1(&base, 1, &opts()).map_err(|e| e.to_string())?;
        let Some(s) = r0.solutions.iter().find(|s| !s.degenerate) else { continue };
        let Some(m) =
            ms.iter().filter(|m| m.solution.is_some()).min_by(|x, y| (x.q - s.q).norm().total_cmp(&(y.q - s.q).norm()))
        else {
            continue;
        };
        ensure!(rel(m.q, s.q) < 1e-8, "no z = 1 solution for q = {}", s.q);
        let u0 = AssembledSolution::plain(build_solution_at_0(&s.params(&base), s).map_err(|e| e.to_string())?);
        let u1 = m.solution.as_ref().expect("filtered");
        let (a, da, _) = u0.eval(half, 1e-16).map_err(|e| e.to_string())?;
        let (b, db, _) = u1.eval(half, 1e-16).map_err(|e| e.to_string())?;
        let w = (a * db - da * b).norm() / (a.norm() * db.norm() + da.norm() * b.norm());
        ensure!(w > 1e-6, "normalized Wronskian {w:e}");
        weakest = weakest.min(w);
        count += 1;
    }
    Ok(format!("10 instances, smallest normalized |W| {weakest:.2e}"))
}

fn criterion_10() -> Outcome {
    let sets = [
        (1.0, -1.0, 1.0, 1.0, 0),
        (1.0, -1.0, 1.0, 5.0, 1),
        (2.0, -2.0, 1.0, 10.0, 2),
        (0.5, -0.5, 1.0, 80.0, 3),
        (1.0, -1.0, 1.0, 90.0, 5),
    ];
    let (mut worst_q, mut worst_e): (f64, f64) = (0.0, 0.0);
    let mut counts = Vec::new();
    for (v0, v1, sigma, lam, expected) in sets {
        let pp = PotentialParams::new(v0, v1, sigma, lam).map_err(|e| e.to_string())?;
        let (lo, hi) = energy_window(&pp);
        for i in 0..100 {
            let e = lo + (hi - lo) * i as f64 / 99.0;
            let m = map_to_heun(&pp, e).map_err(|e| e.to_string())?;
            worst_q = worst_q.max(m.q_condition_residual);
        }
        let res = spectrum(&pp, lo, hi, DEFAULT_GRID).map_err(|e| e.to_string())?;
        let shot = shooting_spectrum(&pp, lo, hi, DEFAULT_GRID).map_err(|e| e.to_string())?;
        ensure!(res.energies.len() == shot.len(), "λ = {lam}: {} vs {} roots", res.energies.len(), shot.len());
        for (x, y) in res.energies.iter().zip(&shot) {
            worst_e = worst_e.max((x - y).abs() / x.abs().max(y.abs()));
        }
        let count = count_bound_states(&pp).map_err(|e| e.to_string())?;
        ensure!(count == res.energies.len(), "λ = {lam}: count {count} vs {} energies", res.energies.len());
        ensure!(count == expected, "λ = {lam}: {count} states, expected {expected}");
        counts.push(count);
    }
    ensure!(worst_q < 1e-9, "q-condition residual {worst_q:e}");
    ensure!(worst_e < 1e-6, "spectrum vs shooting {worst_e:e}");
    Ok(format!("states {counts:?}, q-condition {worst_q:.1e}, vs shooting {worst_e:.1e}"))
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_heun-ghf"))
            .args([
                "reduce", "--a", "-1.7", "--alpha", "0.6", "--beta", "2.4", "--gamma", "1.35", "--N", "3", "--seed",
                "42",
            ])
            .arg("--output")
            .arg(&path)
            .status()
            .map_err(|e| e.to_string())?;
        ensure!(status.success(), "reduce exited with {status}");
        std::fs::read(&path).map_err(|e| e.to_string())
    };
    let (x, y) = (run("first.json")?, run("second.json")?);
    ensure!(!x.is_empty() && x == y, "outputs differ");
    Ok(format!("{} identical bytes", x.len()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("N = 0 reduces to Gauss", Duration::from_secs(1), Box::new(criterion_1)),
        (
            "N = 1 matches the closed-form quadratic",
            Duration::from_secs(5),
            Box::new(|| closed_form_check(1, 102, 1e-10)),
        ),
        ("N = 2 matches the closed-form cubic", Duration::from_secs(10), Box::new(|| closed_form_check(2, 103, 1e-9))),
        ("recurrence consistency, N = 1..5", Duration::from_secs(120), Box::new(criterion_4)),
        ("ODE residual and integration, both families", Duration::from_secs(60), Box::new(criterion_5)),
        ("top coefficient is the ε-condition", Duration::MAX, Box::new(criterion_6)),
        ("q- and a-identities, N <= 7", Duration::from_secs(120), Box::new(criterion_7)),
        ("positive ε = 2, 3; ε = 1 rejected", Duration::MAX, Box::new(criterion_8)),
        ("independent solutions at z = 1/2", Duration::MAX, Box::new(criterion_9)),
        ("bound states: mapping, spectrum, count", Duration::from_secs(120), Box::new(criterion_10)),
        ("reduce output is reproducible", Duration::MAX, Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (k, (title, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > *limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("[{tag}] criterion {:>2}: {title} ({elapsed:.2?}) - {detail}", k + 1);
        failed += usize::from(outcome.is_err());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
