//! Viscosity laws and the power-law viscous stress.

mod law;
mod params;
mod stress;

use thiserror::Error;

pub use law::{holder_seminorm, ViscosityLaw};
pub use params::FluidParams;
pub use stress::{dissipation_density, stress, viscosity_eval};
pub(crate) use stress::{dissipation_primitive, stress_factor};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RheologyError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParam {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("gravity has {got} components, dimension is {dim}")]
    GravityDimension { dim: usize, got: usize },
    #[error("viscosity law violates {0}")]
    InvalidLaw(String),
}
