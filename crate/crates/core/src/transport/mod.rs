//! Divergence-form advection `∂_t ρ + div(ρu) = 0`, renormalization maps
//! and the commutator diagnostic.

mod advect;
mod commutator;
mod evolve;
mod renormalize;

use thiserror::Error;

pub use advect::{advect_step, AdvectionKind, AdvectionScheme};
pub use commutator::{commutator_exponent, commutator_residual};
pub use evolve::{evolve, Evolution, FrozenVelocity, NormRecorder, Observer, VelocityProvider};
pub use renormalize::{renormalize, AdmissibleEta};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    #[error("time step fell to {dt:e} while enforcing the CFL condition")]
    CflViolation { dt: f64 },
    #[error("mollifier width {epsilon} does not exceed the grid spacing {h}")]
    UnresolvableMollifier { epsilon: f64, h: f64 },
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("renormalization map is not admissible: {0}")]
    NotAdmissible(String),
    #[error("density and velocity live on different grids")]
    GridMismatch,
    #[error(transparent)]
    Spectral(#[from] crate::spectral::SpectralError),
}
