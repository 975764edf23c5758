//! The inverse Stokes map `ρ ↦ u` by minimization of the convex energy
//! `A_ρ(u) = (1/p)∫ν(ρ)|Du|^p − ∫ρg·u` over divergence-free zero-mean fields.

mod diagnostics;
mod energy;
mod problem;
mod solver;

pub use diagnostics::{
    apriori_check, energy_balance_residual, functional_gradient, functional_value, minty_sweep,
    monotonicity_gap, pressure_residual, recover_pressure, AprioriCheck, MonotonicityGap,
};
pub use problem::{Penalty, StokesError, StokesProblem, StokesReport};
pub use solver::{
    delta_schedule, solve_stokes, solve_stokes_penalized, solve_stokes_with, SolverOptions, DELTA_LADDER,
};

#[cfg(test)]
mod tests;
