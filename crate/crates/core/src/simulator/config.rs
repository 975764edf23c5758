use std::f64::consts::PI;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rheology::{FluidParams, ViscosityLaw};
use crate::spectral::{norm_sq, to_grid_unchecked, Complex64, GridField, SpectralField, TorusGrid};
use crate::stokes::Penalty;
use crate::transport::AdvectionScheme;

use super::SimulationError;

/// Spectral slope of the `rough` initial datum: `|ρ̂(k)| ∝ |k|^{-ROUGH_SLOPE}`.
pub const ROUGH_SLOPE: f64 = 1.1;

/// Initial density.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    Constant { value: f64 },
    /// `mean + amp·sin x₁`.
    Sine { mean: f64, amp: f64 },
    /// `mean + amp·sin x_d`, a function of the vertical coordinate only.
    Stratified { mean: f64, amp: f64 },
    /// `mean + a·sin x₁ + b·cos(x₁ + x₂)`.
    Smooth { mean: f64, a: f64, b: f64 },
    /// `mean + amp·R/max|R|` with `R` a random field whose coefficients have
    /// modulus `|k|^{-1.1}` and uniform phases.
    Rough { mean: f64, amp: f64 },
    Snapshot { path: PathBuf },
}

impl InitialCondition {
    /// Samples the datum; `Snapshot` is read by the caller and rejected here.
    pub fn sample(&self, grid: TorusGrid, seed: u64) -> Result<GridField, SimulationError> {
        let d = grid.dim();
        Ok(match *self {
            InitialCondition::Constant { value } => GridField::constant(grid, value),
            InitialCondition::Sine { mean, amp } => GridField::from_fn(grid, |x| mean + amp * x[0].sin()),
            InitialCondition::Stratified { mean, amp } => GridField::from_fn(grid, |x| mean + amp * x[d - 1].sin()),
            InitialCondition::Smooth { mean, a, b } => {
                GridField::from_fn(grid, |x| mean + a * x[0].sin() + b * (x[0] + x[1]).cos())
            }
            InitialCondition::Rough { mean, amp } => {
                let r = rough_field(grid, seed);
                let m = r.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
                r.map(|v| mean + amp * v / m)
            }
            InitialCondition::Snapshot { ref path } => {
                return Err(SimulationError::Config(format!(
                    "snapshot datum {} must be loaded before sampling",
                    path.display()
                )))
            }
        })
    }
}

fn rough_field(grid: TorusGrid, seed: u64) -> GridField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid);
    let coeffs = f.coeffs_mut();
    for i in 0..grid.len() {
        let m = grid.mirror(i);
        if grid.is_nyquist(i) || m <= i {
            continue;
        }
        let k = grid.mode(i);
        let c = Complex64::from_polar(norm_sq(&k).powf(-0.5 * ROUGH_SLOPE), rng.gen_range(0.0..2.0 * PI));
        coeffs[i] = c;
        coeffs[m] = c.conj();
    }
    to_grid_unchecked(&f)
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub grid: TorusGrid,
    pub params: FluidParams,
    pub law: ViscosityLaw,
    pub init: InitialCondition,
    /// Index `n` of the smoothing `S_n`; `None` leaves fields untouched.
    pub smoothing: Option<i32>,
    /// `dt` is recomputed from the CFL target at every step.
    pub scheme: AdvectionScheme,
    pub t_final: f64,
    pub output_every: f64,
    pub penalty: Option<Penalty>,
    pub seed: u64,
    /// Allows inadmissible exponents.
    pub force: bool,
}
