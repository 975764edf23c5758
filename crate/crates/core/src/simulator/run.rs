use crate::io::read_snapshot_file;
use crate::spectral::{
    lebesgue_norm, low_freq_truncate, reciprocal_norm, strain_tensor, to_grid_unchecked, to_spectral, DyadicCutoff,
    GridField, VelocityField,
};
use crate::stokes::{solve_stokes_with, SolverOptions, StokesError, StokesProblem, StokesReport};
use crate::transport::advect_step;

use super::{classify_exponents, ExponentClass, InitialCondition, Regime, SimulationConfig, SimulationError};

/// One row of the diagnostics table.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// `‖ρ‖_{L^q}`.
    pub lq_norm: f64,
    pub l2_norm: f64,
    /// `‖1/ρ‖_{L^σ}`, `+∞` when `ρ` touches zero.
    pub recip_norm: f64,
    /// `‖Dv‖_{L^β}` for the unsmoothed solve `v = Ψ(ρ)`.
    pub du_beta: f64,
    /// Viscous dissipation plus penalty energy.
    pub dissipation: f64,
    pub work: f64,
    pub energy_residual: f64,
    pub iters: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagnosticsSeries {
    pub records: Vec<DiagnosticsRecord>,
}

/// Density at an output time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub rho: GridField,
}

#[derive(Debug, Clone)]
pub struct SimulationOutput {
    pub series: DiagnosticsSeries,
    pub snapshots: Vec<Snapshot>,
    pub class: ExponentClass,
    /// Set when an inadmissible configuration ran under `force`.
    pub forced: bool,
    /// Smoothed velocity `u = S_n Ψ(ρ)` at the final time.
    pub velocity: VelocityField,
}

/// `S_n f` when a smoothing index is configured.
pub fn smooth_density(config: &SimulationConfig, rho: &GridField) -> GridField {
    match config.smoothing {
        Some(n) => to_grid_unchecked(&low_freq_truncate(&to_spectral(rho), n)),
        None => rho.clone(),
    }
}

pub fn smooth_velocity(config: &SimulationConfig, v: &VelocityField) -> VelocityField {
    match config.smoothing {
        Some(n) => {
            let cut = DyadicCutoff;
            v.multiply(move |k| {
                let r = ((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).sqrt();
                cut.low_pass_symbol(n, r)
            })
        }
        None => v.clone(),
    }
}

/// The configured datum before smoothing.
pub fn initial_density(config: &SimulationConfig) -> Result<GridField, SimulationError> {
    match &config.init {
        InitialCondition::Snapshot { path } => {
            let snap = read_snapshot_file(path)?;
            if snap.rho.grid() != config.grid {
                return Err(SimulationError::Config(format!(
                    "snapshot {} has {} points per axis in dimension {}, config asks for {} in dimension {}",
                    path.display(),
                    snap.rho.grid().n(),
                    snap.rho.grid().dim(),
                    config.grid.n(),
                    config.grid.dim()
                )));
            }
            Ok(snap.rho)
        }
        init => init.sample(config.grid, config.seed),
    }
}

/// Checks parameters, law, exponents and time controls.
pub fn validate(config: &SimulationConfig) -> Result<ExponentClass, SimulationError> {
    config.params.validate()?;
    config.law.validate(&config.params)?;
    if config.params.d != config.grid.dim() {
        return Err(SimulationError::Config(format!(
            "fluid dimension {} differs from grid dimension {}",
            config.params.d,
            config.grid.dim()
        )));
    }
    if !(config.t_final >= 0.0) || !config.t_final.is_finite() {
        return Err(SimulationError::Config(format!("final time must be >= 0, got {}", config.t_final)));
    }
    if !(config.output_every > 0.0) || !config.output_every.is_finite() {
        return Err(SimulationError::Config(format!("output interval must be > 0, got {}", config.output_every)));
    }
    let class = classify_exponents(&config.params);
    if class.regime == Regime::Inadmissible && !config.force {
        return Err(SimulationError::Inadmissible(class));
    }
    Ok(class)
}

/// The Stokes problem (with the configured penalty) at density `rho`.
pub fn problem_for(config: &SimulationConfig, rho: GridField) -> Result<StokesProblem, SimulationError> {
    let prob = StokesProblem::new(rho, config.params.clone(), config.law.clone())?;
    Ok(match config.penalty {
        Some(pen) => prob.with_penalty(pen.n, pen.k)?,
        None => prob,
    })
}

fn record(
    config: &SimulationConfig,
    t: f64,
    rho: &GridField,
    v: &VelocityField,
    report: &StokesReport,
) -> Result<DiagnosticsRecord, SimulationError> {
    let prm = &config.params;
    let du = strain_tensor(v).frobenius_sq().map(f64::sqrt);
    Ok(DiagnosticsRecord {
        t,
        lq_norm: lebesgue_norm(rho, prm.q)?,
        l2_norm: lebesgue_norm(rho, 2.0)?,
        recip_norm: reciprocal_norm(rho, prm.sigma)?,
        du_beta: strain_norm(&du, prm.beta())?,
        dissipation: report.dissipation + report.penalty_energy,
        work: report.work,
        energy_residual: report.energy_residual,
        iters: report.iterations,
    })
}

/// `(∫|f|^r)^{1/r}`, also for the quasi-norm range `0 < r < 1` reached by
/// inadmissible exponents.
fn strain_norm(f: &GridField, r: f64) -> Result<f64, SimulationError> {
    if r >= 1.0 {
        return Ok(lebesgue_norm(f, r)?);
    }
    let m = f.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = f.values().iter().map(|v| (v.abs() / m).powf(r)).sum();
    Ok(m * (f.grid().cell_volume() * s).powf(1.0 / r))
}

/// Runs from the configured datum.
pub fn run(config: &SimulationConfig) -> Result<SimulationOutput, SimulationError> {
    let rho0 = initial_density(config)?;
    run_from(config, &rho0)
}

/// Quasi-static coupling: one warm-started solve per advection step,
/// `u = S_n Ψ(ρ)` frozen over the step, `ρ(0) = S_n ρ₀`.
pub fn run_from(config: &SimulationConfig, rho0: &GridField) -> Result<SimulationOutput, SimulationError> {
    let class = validate(config)?;
    if rho0.grid() != config.grid {
        return Err(SimulationError::Config("initial density lives on another grid".into()));
    }
    let h = config.grid.spacing();
    let mut rho = smooth_density(config, rho0);
    let template = problem_for(config, rho.clone())?;
    let mut series = DiagnosticsSeries::default();
    let mut snapshots = Vec::new();
    let mut warm: Option<VelocityField> = None;
    let mut t = 0.0;
    let mut outputs_done = 0usize;
    let mut next_out = config.output_every.min(config.t_final);
    let mut at_output = true;
    loop {
        let prob = template.with_density(rho.clone());
        let opts = match warm.take() {
            Some(v) => SolverOptions::warm(v),
            None => SolverOptions::default(),
        };
        let (v, report) = match solve_stokes_with(&prob, &opts) {
            Ok(ok) => ok,
            Err(StokesError::MaxIterations(partial)) => {
                return Err(SimulationError::NonConvergence {
                    time: t,
                    partial: Box::new(series),
                    source: StokesError::MaxIterations(partial),
                })
            }
            Err(e) => return Err(e.into()),
        };
        let u = smooth_velocity(config, &v);
        if at_output {
            series.records.push(record(config, t, &rho, &v, &report)?);
            snapshots.push(Snapshot { time: t, rho: rho.clone() });
        }
        if t >= config.t_final {
            return Ok(SimulationOutput {
                series,
                snapshots,
                class,
                forced: class.regime == Regime::Inadmissible,
                velocity: u,
            });
        }
        let remaining = next_out - t;
        let speed = u.max_speed();
        let dt = if speed > 0.0 { remaining.min(config.scheme.cfl_target * h / speed) } else { remaining };
        rho = advect_step(&rho, &u, &config.scheme.with_dt(dt))?;
        if dt >= remaining {
            t = next_out;
            outputs_done += 1;
            next_out = ((outputs_done + 1) as f64 * config.output_every).min(config.t_final);
            at_output = true;
        } else {
            t += dt;
            at_output = false;
        }
        warm = Some(v);
    }
}
