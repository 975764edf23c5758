use std::thread;

use crate::spectral::{lebesgue_norm, GridField, VelocityField};
use crate::stokes::{solve_stokes, solve_stokes_with, SolverOptions};

use super::{initial_density, problem_for, run_from, smooth_density, SimulationConfig, SimulationError};

/// `‖ρ^{(n_coarse)}(T) − ρ^{(n_fine)}(T)‖_{L^q}` for consecutive indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementRow {
    pub n_coarse: i32,
    pub n_fine: i32,
    pub increment: f64,
}

/// `‖u_N − u_∞‖_{L²}` against the unpenalized solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyRow {
    pub n: f64,
    pub distance: f64,
    /// `distance / ‖u_∞‖_{L²}`, 0 when `u_∞ = 0`.
    pub relative: f64,
}

/// Runs the configuration once per smoothing index (concurrently) and
/// compares final densities.
pub fn convergence_sweep_n(config: &SimulationConfig, n_list: &[i32]) -> Result<Vec<IncrementRow>, SimulationError> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SimulationError::Config("smoothing indices must be strictly increasing".into()));
    }
    let rho0 = initial_density(config)?;
    let finals: Vec<Result<GridField, SimulationError>> = thread::scope(|s| {
        let handles: Vec<_> = n_list
            .iter()
            .map(|&n| {
                let cfg = SimulationConfig { smoothing: Some(n), ..config.clone() };
                let rho0 = &rho0;
                s.spawn(move || {
                    let out = run_from(&cfg, rho0)?;
                    Ok(out.snapshots.last().expect("a run records t = 0").rho.clone())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep member panicked")).collect()
    });
    let finals = finals.into_iter().collect::<Result<Vec<_>, _>>()?;
    let q = config.params.q;
    n_list
        .windows(2)
        .zip(finals.windows(2))
        .map(|(n, r)| {
            Ok(IncrementRow {
                n_coarse: n[0],
                n_fine: n[1],
                increment: lebesgue_norm(&r[0].zip_map(&r[1], |a, b| a - b), q)?,
            })
        })
        .collect()
}

/// Penalized solves at the smoothed initial density for each `N`, with the
/// configured order `k`.
pub fn penalty_sweep_n(config: &SimulationConfig, n_list: &[f64]) -> Result<Vec<PenaltyRow>, SimulationError> {
    let pen = config
        .penalty
        .ok_or_else(|| SimulationError::Config("penalty sweep needs penalty.k".into()))?;
    super::validate(config)?;
    let rho = smooth_density(config, &initial_density(config)?);
    let free = problem_for(&SimulationConfig { penalty: None, ..config.clone() }, rho)?;
    let (u_inf, _) = solve_stokes(&free)?;
    let scale = u_inf.l2_norm();
    let solved: Vec<Result<VelocityField, SimulationError>> = thread::scope(|s| {
        let handles: Vec<_> = n_list
            .iter()
            .map(|&n| {
                let free = &free;
                let u_inf = &u_inf;
                s.spawn(move || {
                    let prob = free.clone().with_penalty(n, pen.k)?;
                    Ok(solve_stokes_with(&prob, &SolverOptions::warm(u_inf.clone()))?.0)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep member panicked")).collect()
    });
    n_list
        .iter()
        .zip(solved)
        .map(|(&n, u)| {
            let distance = u?.sub(&u_inf).l2_norm();
            Ok(PenaltyRow { n, distance, relative: if scale > 0.0 { distance / scale } else { 0.0 } })
        })
        .collect()
}
