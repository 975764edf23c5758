//! The coupled density/velocity time loop and its sweeps.

mod config;
mod exponents;
mod run;
mod sweep;

use thiserror::Error;

pub use config::{InitialCondition, SimulationConfig, ROUGH_SLOPE};
pub use exponents::{classify_exponents, critical_q0, ExponentClass, Regime};
pub use run::problem_for;
pub use run::{
    initial_density, run, run_from, smooth_density, smooth_velocity, validate, DiagnosticsRecord, DiagnosticsSeries,
    SimulationOutput, Snapshot,
};
pub use sweep::{convergence_sweep_n, penalty_sweep_n, IncrementRow, PenaltyRow};

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("exponents are inadmissible (Q = {:.6}); pass --force to run anyway", .0.value)]
    Inadmissible(ExponentClass),
    #[error("Stokes solve did not converge at t = {time}")]
    NonConvergence {
        time: f64,
        partial: Box<DiagnosticsSeries>,
        #[source]
        source: crate::stokes::StokesError,
    },
    #[error(transparent)]
    Stokes(#[from] crate::stokes::StokesError),
    #[error(transparent)]
    Transport(#[from] crate::transport::TransportError),
    #[error(transparent)]
    Rheology(#[from] crate::rheology::RheologyError),
    #[error(transparent)]
    Spectral(#[from] crate::spectral::SpectralError),
    #[error(transparent)]
    Io(#[from] crate::io::IoError),
}
