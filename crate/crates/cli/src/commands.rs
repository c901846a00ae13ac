use std::fmt;

use log::{info, warn};
use num_complex::Complex64;

use heun_ghf::quantum::{energy_window, shooting_spectrum, spectrum as solve_spectrum, PotentialParams};
use heun_ghf::reduction::{
    build_solution_at_0, build_solution_at_1, closed_form_n0, closed_form_n1, closed_form_n2, q_polynomial,
    solve_positive_epsilon, AssembledSolution,
};
use heun_ghf::{
    ode_residual_scaled, solve_reduction, Error, HeunBase64, ReductionOptions64, ReductionReport64, SolutionSample,
};

use crate::args::{EvalArgs, HeunArgs, QpolyArgs, ReduceArgs, SolverArgs, SpectrumArgs};
use crate::output::{
    cx, Doc, EvalDoc, EvalRow, HeunRecord, QpolyDoc, ReduceDoc, ShootRow, SolutionRecord, SpectrumDoc,
};
use crate::Status;

/// An error together with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    pub fn io(e: impl fmt::Display) -> Self {
        Self { status: Status::Usage, message: e.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self { status: Status::Usage, message: e.to_string() }
    }
}

pub type Outcome = Result<(Doc, Status), Failure>;

fn c1() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// δ from the Fuchsian relation for the requested `ε`.
fn base_for_epsilon(h: &HeunArgs, epsilon: f64) -> Result<HeunBase64, Failure> {
    let delta = c1() + h.alpha + h.beta - h.gamma - epsilon;
    Ok(HeunBase64::new(h.a, h.alpha, h.beta, h.gamma, delta)?)
}

fn heun_record(b: &HeunBase64) -> HeunRecord {
    HeunRecord {
        a: cx(b.a()),
        alpha: cx(b.alpha()),
        beta: cx(b.beta()),
        gamma: cx(b.gamma()),
        delta: cx(b.delta()),
        epsilon: cx(b.epsilon()),
    }
}

fn options(seed: u64, starts: Option<usize>, tol: Option<f64>) -> ReductionOptions64 {
    let mut o = ReductionOptions64 { seed, starts, ..Default::default() };
    if let Some(t) = tol {
        o.newton.tol = t;
    }
    o
}

fn solver_options(s: &SolverArgs) -> Result<ReductionOptions64, Failure> {
    if !(s.tol > 0.0) {
        return Err(Failure::from(Error::InvalidArgument("--tol must be positive".into())));
    }
    Ok(options(s.seed, s.starts, Some(s.tol)))
}

fn completeness(report: &ReductionReport64) -> Status {
    match report.shortfall {
        None => Status::Ok,
        Some(s) => {
            warn!("verification shortfall: {} of {} solutions", s.found, s.expected);
            Status::Shortfall
        }
    }
}

pub fn reduce(a: &ReduceArgs) -> Outcome {
    let opts = solver_options(&a.solver)?;
    let (base, report, solutions) = match (a.n, a.epsilon) {
        (Some(n), _) => {
            let base = HeunBase64::for_order(a.heun.a, a.heun.alpha, a.heun.beta, a.heun.gamma, n)?;
            let report = solve_reduction(&base, n, &opts)?;
            let sols = report
                .solutions
                .iter()
                .map(|s| SolutionRecord {
                    q: cx(s.q),
                    e: s.e.iter().copied().map(cx).collect(),
                    system_residual: s.system_residual,
                    recurrence_residual: s.recurrence_residual,
                    degenerate: s.degenerate,
                })
                .collect();
            (base, report, sols)
        }
        (None, Some(eps)) => {
            let base = base_for_epsilon(&a.heun, eps as f64)?;
            let (sols, report) = solve_positive_epsilon(&base, &opts)?;
            let sols = sols
                .iter()
                .map(|s| SolutionRecord {
                    q: cx(s.q),
                    e: s.transformed.e.iter().copied().map(cx).collect(),
                    system_residual: s.transformed.system_residual,
                    recurrence_residual: s.transformed.recurrence_residual,
                    degenerate: s.transformed.degenerate,
                })
                .collect();
            (base, report, sols)
        }
        (None, None) => unreachable!("clap requires --N or --epsilon"),
    };
    info!("{} solution(s), {} spurious", report.solutions.len(), report.spurious);
    let doc = ReduceDoc {
        params: heun_record(&base),
        order: report.n_order,
        positive_epsilon: a.epsilon.filter(|_| a.n.is_none()),
        seed: a.solver.seed,
        expected: report.expected(),
        found: report.solutions.len(),
        complete: report.is_complete(),
        spurious: report.spurious,
        solutions,
    };
    Ok((Doc::Reduce(doc), completeness(&report)))
}

pub fn qpoly(a: &QpolyArgs) -> Outcome {
    let opts = solver_options(&a.solver)?;
    let base = HeunBase64::for_order(a.heun.a, a.heun.alpha, a.heun.beta, a.heun.gamma, a.n)?;
    let report = solve_reduction(&base, a.n, &opts)?;
    let coefficients = q_polynomial(&report).ok().map(|p| p.coeffs().to_vec());
    let closed = match a.n {
        0 => Some(closed_form_n0(&base)?),
        1 => Some(closed_form_n1(&base)?),
        2 => Some(closed_form_n2(&base)?),
        _ => None,
    };
    let closed = closed.map(|p| p.monic()).transpose()?.map(|p| p.coeffs().to_vec());
    let max_deviation = match (&coefficients, &closed) {
        (Some(c), Some(k)) if c.len() == k.len() => {
            let scale = k.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
            Some(c.iter().zip(k).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale)
        }
        _ => None,
    };
    let doc = QpolyDoc {
        params: heun_record(&base),
        order: a.n,
        seed: a.solver.seed,
        complete: report.is_complete(),
        coefficients: coefficients.map(|c| c.into_iter().map(cx).collect()),
        closed_form: closed.map(|c| c.into_iter().map(cx).collect()),
        max_deviation,
    };
    Ok((Doc::Qpoly(doc), completeness(&report)))
}

fn pick<T>(items: Vec<T>, index: usize, report: &ReductionReport64) -> Result<T, Failure> {
    let found = items.len();
    items.into_iter().nth(index).ok_or_else(|| {
        let status = if index < report.expected() { Status::Shortfall } else { Status::Usage };
        Failure { status, message: format!("--index {index} out of range: {found} solution(s) found") }
    })
}

pub fn eval(a: &EvalArgs) -> Outcome {
    if !(a.tol > 0.0) {
        return Err(Failure::from(Error::InvalidArgument("--tol must be positive".into())));
    }
    let opts = options(a.seed, a.starts, None);
    let base = HeunBase64::for_order(a.heun.a, a.heun.alpha, a.heun.beta, a.heun.gamma, a.n)?;
    let (q, solution, family) = if a.second_solution {
        let (sols, report) = build_solution_at_1(&base, a.n, &opts)?;
        let m = pick(sols, a.index, &report)?;
        let sol = m.solution.ok_or_else(|| {
            Failure::from(Error::DegenerateParameters { reason: "this z = 1 solution has degenerate e".into() })
        })?;
        (m.q, sol, "z=1")
    } else {
        let report = solve_reduction(&base, a.n, &opts)?;
        let s = pick(report.solutions.clone(), a.index, &report)?;
        let ghf = build_solution_at_0(&base.with_q(s.q), &s)?;
        (s.q, AssembledSolution::plain(ghf), "z=0")
    };
    let params = base.with_q(q);
    let rows =
        a.z.iter()
            .map(|&z| match solution.eval(z, a.tol) {
                Ok((u, du, ddu)) => {
                    let (residual, note) = match ode_residual_scaled(&params, &SolutionSample { z, u, du }, ddu) {
                        Ok(r) => (Some(r), None),
                        Err(e) => (None, Some(e.to_string())),
                    };
                    EvalRow { z: cx(z), u: Some(cx(u)), du: Some(cx(du)), residual, in_disk: true, note }
                }
                Err(e) => {
                    let in_disk = !matches!(e, Error::OutsideSafeDisk { .. });
                    warn!("z = {z}: {e}");
                    EvalRow { z: cx(z), u: None, du: None, residual: None, in_disk, note: Some(e.to_string()) }
                }
            })
            .collect();
    let doc = EvalDoc {
        params: heun_record(&base),
        order: a.n,
        seed: a.seed,
        index: a.index,
        family: family.into(),
        q: cx(q),
        numerator: solution.ghf.numerator().iter().copied().map(cx).collect(),
        denominator: solution.ghf.denominator().iter().copied().map(cx).collect(),
        rows,
    };
    Ok((Doc::Eval(doc), Status::Ok))
}

/// Pairs the two root lists in order; unmatched entries get `None`.
fn compare(series: &[f64], shooting: &[f64]) -> Vec<ShootRow> {
    (0..series.len().max(shooting.len()))
        .map(|i| {
            let (s, t) = (series.get(i).copied(), shooting.get(i).copied());
            let relative_difference =
                s.zip(t).map(|(s, t)| (s - t).abs() / s.abs().max(t.abs()).max(f64::MIN_POSITIVE));
            ShootRow { series: s, shooting: t, relative_difference }
        })
        .collect()
}

pub fn spectrum(a: &SpectrumArgs) -> Outcome {
    let pp = PotentialParams::new(a.v0, a.v1, a.sigma, a.mass_scale)?;
    if a.grid < 2 {
        return Err(Failure::from(Error::InvalidArgument("--grid must be at least 2".into())));
    }
    let (lo, hi) = energy_window(&pp);
    let (emin, emax) = (a.emin.unwrap_or(lo), a.emax.unwrap_or(hi));
    if !(emin < emax) {
        return Err(Failure::from(Error::InvalidArgument(format!("empty window [{emin}, {emax}]"))));
    }
    let res = solve_spectrum(&pp, emin, emax, a.grid)?;
    let (shooting, shooting_agreement) = if a.shooting {
        let roots = shooting_spectrum(&pp, emin, emax, a.grid)?;
        let rows = compare(&res.energies, &roots);
        let ok = rows.iter().all(|r| r.relative_difference.is_some_and(|d| d <= a.tol));
        (Some(rows), Some(ok))
    } else {
        (None, None)
    };
    let mut status = Status::Ok;
    if !res.count_method_agreement {
        warn!("{} energies found but the zero count is {}", res.energies.len(), res.bound_state_count);
        status = Status::Shortfall;
    }
    if shooting_agreement == Some(false) {
        warn!("series and shooting spectra differ by more than {}", a.tol);
        status = Status::Shortfall;
    }
    let doc = SpectrumDoc {
        v0: a.v0,
        v1: a.v1,
        sigma: a.sigma,
        mass_scale: a.mass_scale,
        threshold: pp.threshold(),
        emin,
        emax,
        grid: a.grid,
        energies: res.energies,
        bound_state_count: res.bound_state_count,
        count_method_agreement: res.count_method_agreement,
        shooting,
        shooting_agreement,
    };
    Ok((Doc::Spectrum(doc), status))
}
