use crate::spectral::{lebesgue_norm, VelocityField};

use super::energy::{to_coeffs, to_velocity, Coeffs, Energy, Eval};
use super::problem::{StokesError, StokesProblem, StokesReport};

/// Regularization ladder used when `δ = 0` is requested with `p < 2`.
pub const DELTA_LADDER: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Stop once `‖∇A‖_{L²} ≤ tol·(1 + |A|)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Starting point; the Newtonian solve when absent.
    pub initial: Option<VelocityField>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 10_000, initial: None }
    }
}

impl SolverOptions {
    pub fn warm(initial: VelocityField) -> Self {
        Self { initial: Some(initial), ..Self::default() }
    }
}

/// The `δ` values the solver minimizes in turn for this problem.
pub fn delta_schedule(prob: &StokesProblem) -> Vec<f64> {
    let prm = prob.params();
    if prm.p < 2.0 && prm.delta == 0.0 {
        DELTA_LADDER.to_vec()
    } else {
        vec![prm.delta]
    }
}

/// Minimizes `A_ρ` over divergence-free zero-mean trigonometric polynomials.
pub fn solve_stokes(prob: &StokesProblem) -> Result<(VelocityField, StokesReport), StokesError> {
    solve_stokes_with(prob, &SolverOptions::default())
}

/// [`solve_stokes`] for a problem that carries a penalty; also records
/// `‖u‖_{H^k}/(√N‖ρ‖_{L²})`.
pub fn solve_stokes_penalized(prob: &StokesProblem) -> Result<(VelocityField, StokesReport), StokesError> {
    if prob.penalty().is_none() {
        return Err(StokesError::MissingPenalty);
    }
    solve_stokes_with(prob, &SolverOptions::default())
}

pub fn solve_stokes_with(
    prob: &StokesProblem,
    opts: &SolverOptions,
) -> Result<(VelocityField, StokesReport), StokesError> {
    let schedule = delta_schedule(prob);
    let grid = prob.rho().grid();
    if let Some(u0) = &opts.initial {
        if u0.grid() != grid {
            return Err(StokesError::Invalid("initial guess lives on another grid".into()));
        }
    }
    let mut u: Option<Coeffs> = opts.initial.as_ref().map(to_coeffs);
    let mut total_iter = 0;
    let mut last = None;
    for &delta in &schedule {
        let energy = Energy::new(prob, delta);
        if energy.viscosity_vanishes() && !energy.has_penalty() {
            return Err(StokesError::DegenerateViscosity);
        }
        let start = match u.take() {
            Some(mut c) => {
                energy.project(&mut c);
                c
            }
            None => energy.newtonian_guess(1.0),
        };
        let stage = minimize(&energy, start, opts.tol, opts.max_iter.saturating_sub(total_iter));
        total_iter += stage.iterations;
        let converged = stage.converged;
        u = Some(stage.u.clone());
        last = Some((energy, stage));
        if !converged {
            break;
        }
    }
    let (energy, stage) = last.expect("schedule is never empty");
    let work = stage.eval.work;
    let residual = (stage.eval.dissipation + stage.eval.penalty_energy - work).abs() / work.abs().max(1.0);
    let velocity = to_velocity(grid, stage.u);
    let hk_ratio = prob.penalty().map(|pen| {
        let hk = velocity
            .multiply(|k| {
                let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
                (1.0 + k2).powf(0.5 * pen.k as f64)
            })
            .l2_norm();
        let r = lebesgue_norm(prob.rho(), 2.0).expect("exponent 2 is valid");
        if r == 0.0 {
            0.0
        } else {
            hk / (pen.n.sqrt() * r)
        }
    });
    let report = StokesReport {
        iterations: total_iter,
        value: stage.eval.value,
        grad_norm: stage.grad_norm,
        tolerance: opts.tol * (1.0 + stage.eval.value.abs()),
        energy_residual: residual,
        dissipation: stage.eval.dissipation,
        work,
        penalty_energy: stage.eval.penalty_energy,
        delta_schedule: schedule[..schedule.iter().position(|&d| d == energy.delta).unwrap_or(0) + 1].to_vec(),
        converged: stage.converged,
        history: stage.history,
        hk_ratio,
    };
    if report.converged {
        Ok((velocity, report))
    } else {
        Err(StokesError::MaxIterations(Box::new((velocity, report))))
    }
}

struct Stage {
    u: Coeffs,
    eval: Eval,
    grad_norm: f64,
    iterations: usize,
    converged: bool,
    history: Vec<f64>,
}

fn axpy(u: &Coeffs, t: f64, d: &Coeffs) -> Coeffs {
    u.iter()
        .zip(d)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y * t).collect())
        .collect()
}

fn neg(a: &Coeffs) -> Coeffs {
    a.iter().map(|c| c.iter().map(|z| -z).collect()).collect()
}

/// Preconditioned Polak-Ribière+ conjugate gradients.
fn minimize(energy: &Energy, mut u: Coeffs, tol: f64, max_iter: usize) -> Stage {
    let mut eval = energy.evaluate(&u);
    let mut history = vec![eval.value];
    let mut visc = energy.mean_effective_viscosity(&u);
    if !(visc > 0.0) || !visc.is_finite() {
        visc = 1.0;
    }
    let mut z = energy.precondition(&eval.grad, visc);
    let mut dir = neg(&z);
    let mut gz = energy.inner(&eval.grad, &z);
    let mut step = 1.0;
    let mut iterations = 0;
    let mut restarted = false;
    loop {
        let grad_norm = energy.inner(&eval.grad, &eval.grad).max(0.0).sqrt();
        if grad_norm <= tol * (1.0 + eval.value.abs()) {
            return Stage { u, eval, grad_norm, iterations, converged: true, history };
        }
        if iterations >= max_iter {
            return Stage { u, eval, grad_norm, iterations, converged: false, history };
        }
        let mut slope = energy.inner(&eval.grad, &dir);
        if !(slope < 0.0) {
            dir = neg(&z);
            slope = -gz;
        }
        match line_search(energy, &u, &dir, eval.value, slope, step) {
            Some((t, new_u, new_eval)) => {
                restarted = false;
                step = t;
                u = new_u;
                let old_grad = std::mem::replace(&mut eval, new_eval).grad;
                history.push(eval.value);
                let z_new = energy.precondition(&eval.grad, visc);
                let gz_new = energy.inner(&eval.grad, &z_new);
                let cross = energy.inner(&old_grad, &z_new);
                let beta = ((gz_new - cross) / gz).max(0.0);
                dir = axpy(&neg(&z_new), beta, &dir);
                z = z_new;
                gz = gz_new;
            }
            None => {
                let grad_norm = energy.inner(&eval.grad, &eval.grad).max(0.0).sqrt();
                if restarted {
                    return Stage { u, eval, grad_norm, iterations, converged: false, history };
                }
                // refresh the preconditioner scale and restart along −z
                restarted = true;
                let v = energy.mean_effective_viscosity(&u);
                if v > 0.0 && v.is_finite() {
                    visc = v;
                }
                z = energy.precondition(&eval.grad, visc);
                gz = energy.inner(&eval.grad, &z);
                dir = neg(&z);
                step = 1.0;
            }
        }
        iterations += 1;
    }
}

/// Finds `t` with `|φ'(t)| ≤ 0.1|φ'(0)|` for the convex `φ(t) = A(u + t d)`.
fn line_search(
    energy: &Energy,
    u: &Coeffs,
    dir: &Coeffs,
    phi0: f64,
    slope0: f64,
    t_init: f64,
) -> Option<(f64, Coeffs, Eval)> {
    let slack = 1e-12 * (1.0 + phi0.abs());
    let mut lo = (0.0, slope0);
    let mut hi: Option<(f64, f64)> = None;
    let mut t = t_init.max(1e-300);
    let mut best: Option<(f64, Coeffs, Eval)> = None;
    for _ in 0..40 {
        let trial = axpy(u, t, dir);
        let ev = energy.evaluate(&trial);
        let slope = energy.inner(&ev.grad, dir);
        let finite = ev.value.is_finite() && slope.is_finite();
        if finite && slope.abs() <= 0.1 * slope0.abs() && ev.value <= phi0 + slack {
            return Some((t, trial, ev));
        }
        if finite && slope < 0.0 {
            lo = (t, slope);
            if ev.value < phi0 && best.as_ref().is_none_or(|b| ev.value < b.2.value) {
                best = Some((t, trial, ev));
            }
        } else {
            hi = Some((t, if finite { slope } else { f64::INFINITY }));
        }
        t = match hi {
            None => 4.0 * t,
            Some((th, sh)) => {
                let width = th - lo.0;
                let secant = if sh.is_finite() {
                    lo.0 - lo.1 * width / (sh - lo.1)
                } else {
                    lo.0 + 0.5 * width
                };
                secant.clamp(lo.0 + 0.05 * width, th - 0.05 * width)
            }
        };
        if hi.is_some_and(|(th, _)| th - lo.0 <= 1e-15 * th.abs()) {
            break;
        }
    }
    best
}
