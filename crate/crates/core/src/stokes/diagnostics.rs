use crate::spectral::{
    lebesgue_norm, reciprocal_norm, strain_tensor, to_spectral, Complex64, GridField, SpectralField,
    VelocityField,
};

use super::energy::{to_coeffs, to_velocity, Energy};
use super::problem::{StokesError, StokesProblem};
use super::solver::{delta_schedule, solve_stokes, solve_stokes_with, SolverOptions};

/// `A_ρ(u)` at the problem's own `δ`, including the penalty when present.
pub fn functional_value(prob: &StokesProblem, u: &VelocityField) -> f64 {
    Energy::new(prob, prob.params().delta).value(&to_coeffs(u))
}

/// Leray-projected `L²` gradient of `A_ρ` at `u`.
pub fn functional_gradient(prob: &StokesProblem, u: &VelocityField) -> Result<VelocityField, StokesError> {
    let prm = prob.params();
    if prm.p < 2.0 && prm.delta == 0.0 {
        return Err(StokesError::SingularGradient(prm.p));
    }
    let energy = Energy::new(prob, prm.delta);
    Ok(to_velocity(energy.grid(), energy.evaluate(&to_coeffs(u)).grad))
}

/// `|dissipation + penalty energy − work| / max(1, |work|)` at the problem's `δ`.
pub fn energy_balance_residual(prob: &StokesProblem, u: &VelocityField) -> f64 {
    let energy = Energy::new(prob, prob.params().delta);
    let ev = energy.evaluate(&to_coeffs(u));
    (ev.dissipation + ev.penalty_energy - ev.work).abs() / ev.work.abs().max(1.0)
}

/// Both sides of the a-priori estimate, without its constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriCheck {
    /// `‖Du‖_{L^β}`.
    pub lhs: f64,
    /// `‖1/ρ‖_{L^σ}^{γ/(p−1)} ‖ρ‖_{L^q}^{1/(p−1)}`.
    pub rhs_core: f64,
    /// True when `rhs_core` is infinite, so the bound says nothing.
    pub vacuous: bool,
}

impl AprioriCheck {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs_core
    }
}

pub fn apriori_check(prob: &StokesProblem, u: &VelocityField) -> Result<AprioriCheck, StokesError> {
    let prm = prob.params();
    let beta = prm.beta();
    let du = strain_tensor(u).frobenius_sq().map(f64::sqrt);
    let lhs = lebesgue_norm(&du, beta)?;
    let lq = lebesgue_norm(prob.rho(), prm.q)?;
    let mut rhs_core = lq.powf(1.0 / (prm.p - 1.0));
    if prm.gamma > 0.0 {
        let recip = reciprocal_norm(prob.rho(), prm.sigma)?;
        rhs_core *= if recip.is_infinite() {
            f64::INFINITY
        } else {
            recip.powf(prm.gamma / (prm.p - 1.0))
        };
    }
    Ok(AprioriCheck { lhs, rhs_core, vacuous: rhs_core.is_infinite() })
}

/// Monotonicity functional and the magnitude of the terms it cancels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityGap {
    /// `∫ν(ρ)(|Du|^{p−2}Du − |Dφ|^{p−2}Dφ):(Du − Dφ)`.
    pub gap: f64,
    /// `∫ν(ρ)(|Du|^{p−1} + |Dφ|^{p−1})|Du − Dφ|`.
    pub scale: f64,
}

pub fn monotonicity_gap(prob: &StokesProblem, u: &VelocityField, phi: &VelocityField) -> MonotonicityGap {
    let energy = Energy::new(prob, prob.params().delta);
    let (gap, scale) = energy.monotonicity(&to_coeffs(u), &to_coeffs(phi));
    MonotonicityGap { gap, scale }
}

/// `⟨Ψ(ρ_n) − Ψ(ρ), φ⟩_{L²}` for every density of the sequence (rows) and
/// every test field (columns). `template` supplies the fluid and the law.
pub fn minty_sweep(
    template: &StokesProblem,
    rho_sequence: &[GridField],
    rho_limit: &GridField,
    test_functions: &[VelocityField],
) -> Result<Vec<Vec<f64>>, StokesError> {
    let (u_lim, _) = solve_stokes(&template.with_density(rho_limit.clone()))?;
    let mut table = Vec::with_capacity(rho_sequence.len());
    for rho in rho_sequence {
        let prob = template.with_density(rho.clone());
        let (u, _) = solve_stokes_with(&prob, &SolverOptions::warm(u_lim.clone()))?;
        let diff = u.sub(&u_lim);
        table.push(test_functions.iter().map(|phi| diff.l2_inner(phi)).collect());
    }
    Ok(table)
}

/// Zero-mean pressure `π̂ = −i k·F̂/|k|²` with `F = ρg + div 𝕊`, using the
/// last regularization the solver minimizes for this problem.
pub fn recover_pressure(prob: &StokesProblem, u: &VelocityField) -> SpectralField {
    let (energy, force) = momentum_force(prob, u);
    let grid = energy.grid();
    let d = grid.dim();
    let mut out = SpectralField::zeros(grid);
    let n = grid.n();
    let coeffs: Vec<Complex64> = (0..grid.len())
        .map(|m| {
            if m == 0 || grid.is_nyquist(m) {
                return Complex64::new(0.0, 0.0);
            }
            let k = grid.mode(m);
            let k2: f64 = (0..d).map(|a| (k[a] * k[a]) as f64).sum();
            let mut kf = Complex64::new(0.0, 0.0);
            for a in 0..d {
                kf += force[a][m] * k[a] as f64;
            }
            Complex64::new(kf.im, -kf.re) / k2
        })
        .collect();
    debug_assert_eq!(coeffs.len(), n.pow(d as u32));
    out.coeffs_mut().copy_from_slice(&coeffs);
    out
}

/// `‖−div 𝕊 + (1/N)(−Δ)^k u + ∇π − ρg‖_{L²}` over the velocity band.
pub fn pressure_residual(prob: &StokesProblem, u: &VelocityField, pressure: &SpectralField) -> f64 {
    let (energy, force) = momentum_force(prob, u);
    let grid = energy.grid();
    let d = grid.dim();
    let pen = prob.penalty();
    let mut sum = 0.0;
    for m in 0..grid.len() {
        if m == 0 || grid.is_nyquist(m) {
            continue;
        }
        let k = grid.mode(m);
        let k2: f64 = (0..d).map(|a| (k[a] * k[a]) as f64).sum();
        for a in 0..d {
            let grad_pi = pressure.coeffs()[m] * Complex64::new(0.0, k[a] as f64);
            let mut r = grad_pi - force[a][m];
            if let Some(p) = pen {
                r += u.component(a).coeffs()[m] * (k2.powi(p.k as i32) / p.n);
            }
            sum += r.norm_sqr();
        }
    }
    (grid.volume() * sum).sqrt()
}

fn momentum_force(prob: &StokesProblem, u: &VelocityField) -> (Energy, Vec<Vec<Complex64>>) {
    let delta = *delta_schedule(prob).last().expect("schedule is never empty");
    let energy = Energy::new(prob, delta);
    let grid = energy.grid();
    let d = grid.dim();
    let stress = energy.stress_coeffs(&to_coeffs(u));
    let rho_hat = to_spectral(prob.rho());
    let g = &prob.params().g;
    let idx = |i: usize, j: usize| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        a * d - a * (a + 1) / 2 + b
    };
    let force = (0..d)
        .map(|i| {
            (0..grid.len())
                .map(|m| {
                    let k = grid.mode(m);
                    let mi = grid.multi_index(m);
                    let mut div = Complex64::new(0.0, 0.0);
                    for j in 0..d {
                        if mi[j] != grid.n() / 2 {
                            div += stress[idx(i, j)][m] * Complex64::new(0.0, k[j] as f64);
                        }
                    }
                    rho_hat.coeffs()[m] * g[i] + div
                })
                .collect()
        })
        .collect();
    (energy, force)
}
