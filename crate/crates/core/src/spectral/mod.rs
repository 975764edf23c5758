//! Fourier-side infrastructure on the torus: transforms, derivatives,
//! Leray projection, dyadic blocks and Lebesgue/Besov norms.

pub(crate) mod dealias;
mod dyadic;
mod fft;
mod field;
mod grid;
mod norms;

use thiserror::Error;

pub use dyadic::{
    besov_norm, bernstein_ratio, chi, low_freq_truncate, lp_block, phi, sharp_truncate,
    DyadicCutoff,
};
pub use field::{
    leray_project, partial_derivative, strain_tensor, to_grid, to_spectral, GridField,
    SpectralField, StrainField, VelocityField,
};
pub(crate) use field::to_grid_unchecked;
pub use grid::TorusGrid;
pub(crate) use grid::norm_sq;
pub use norms::{lebesgue_norm, reciprocal_norm, UNDERFLOW_FLOOR};

pub use rustfft::num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("dimension must be 2 or 3, got {0}")]
    Dimension(usize),
    #[error("points per axis must be a power of two >= 8, got {0}")]
    Resolution(usize),
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("non-finite value at node {0}")]
    NonFinite(usize),
    #[error("coefficients are not Hermitian (defect {0:e})")]
    NonHermitian(f64),
    #[error("Lebesgue exponent must lie in [1, inf], got {0}")]
    Exponent(f64),
    #[error("Littlewood-Paley block {0} is zero")]
    ZeroBlock(i32),
}
