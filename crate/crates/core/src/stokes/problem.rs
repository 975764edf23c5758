use thiserror::Error;

use crate::rheology::{FluidParams, RheologyError, ViscosityLaw};
use crate::spectral::{GridField, SpectralError, VelocityField};

/// Penalty `(1/2N)∫|∇^k u|²` added to the energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Penalty {
    pub n: f64,
    pub k: u32,
}

/// The density, fluid and viscosity law defining `A_ρ`.
#[derive(Debug, Clone)]
pub struct StokesProblem {
    rho: GridField,
    params: FluidParams,
    law: ViscosityLaw,
    penalty: Option<Penalty>,
}

impl StokesProblem {
    pub fn new(rho: GridField, params: FluidParams, law: ViscosityLaw) -> Result<Self, StokesError> {
        params.validate()?;
        if params.d != rho.grid().dim() {
            return Err(StokesError::Invalid(format!(
                "params are {}-dimensional, density grid is {}-dimensional",
                params.d,
                rho.grid().dim()
            )));
        }
        Ok(Self { rho, params, law, penalty: None })
    }

    /// Adds the penalty; requires `N > 0` and `k > 1 + d/2`.
    pub fn with_penalty(mut self, n: f64, k: u32) -> Result<Self, StokesError> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(StokesError::Invalid(format!("penalty N must be positive, got {n}")));
        }
        if (k as f64) <= 1.0 + self.params.d as f64 / 2.0 {
            return Err(StokesError::PenaltyOrder { k, d: self.params.d });
        }
        self.penalty = Some(Penalty { n, k });
        Ok(self)
    }

    pub fn without_penalty(mut self) -> Self {
        self.penalty = None;
        self
    }

    /// Same fluid and law with another density on the same grid.
    pub fn with_density(&self, rho: GridField) -> Self {
        assert_eq!(rho.grid(), self.rho.grid());
        Self { rho, ..self.clone() }
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        let mut out = self.clone();
        out.params.delta = delta;
        out
    }

    pub fn rho(&self) -> &GridField {
        &self.rho
    }

    pub fn params(&self) -> &FluidParams {
        &self.params
    }

    pub fn law(&self) -> &ViscosityLaw {
        &self.law
    }

    pub fn penalty(&self) -> Option<Penalty> {
        self.penalty
    }
}

/// Solver telemetry attached to every velocity it returns.
#[derive(Debug, Clone, PartialEq)]
pub struct StokesReport {
    pub iterations: usize,
    /// `A_ρ(u)` at the regularization actually minimized (last stage of `delta_schedule`).
    pub value: f64,
    pub grad_norm: f64,
    pub tolerance: f64,
    pub energy_residual: f64,
    /// `∫ν(ρ)(δ² + |Du|²)^{(p−2)/2}|Du|²` at the last stage.
    pub dissipation: f64,
    /// `∫ρg·u`.
    pub work: f64,
    /// `(1/N)‖u‖²_{Ḣ^k}`, zero without a penalty.
    pub penalty_energy: f64,
    pub delta_schedule: Vec<f64>,
    pub converged: bool,
    /// Energy after every accepted step of the last stage.
    pub history: Vec<f64>,
    /// `‖u‖_{H^k} / (√N ‖ρ‖_{L²})` for penalized solves.
    pub hk_ratio: Option<f64>,
}

#[derive(Debug, Clone, Error)]
pub enum StokesError {
    #[error("solver stopped after {} iterations with gradient norm {:e}", .0.1.iterations, .0.1.grad_norm)]
    MaxIterations(Box<(VelocityField, StokesReport)>),
    #[error("viscosity vanishes on the whole grid and no penalty is set")]
    DegenerateViscosity,
    #[error("gradient is singular at Du = 0 for p = {0} < 2 without regularization")]
    SingularGradient(f64),
    #[error("penalty order k = {k} must exceed 1 + d/2 for d = {d}")]
    PenaltyOrder { k: u32, d: usize },
    #[error("penalized solve requested without a penalty")]
    MissingPenalty,
    #[error(transparent)]
    Params(#[from] RheologyError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("{0}")]
    Invalid(String),
}
