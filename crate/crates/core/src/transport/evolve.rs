use crate::spectral::{lebesgue_norm, GridField, VelocityField};

use super::{advect_step, AdvectionScheme, TransportError};

/// Supplies the velocity used (frozen) over each step.
pub trait VelocityProvider {
    fn velocity(&mut self, t: f64, rho: &GridField) -> VelocityField;
}

impl<F: FnMut(f64, &GridField) -> VelocityField> VelocityProvider for F {
    fn velocity(&mut self, t: f64, rho: &GridField) -> VelocityField {
        self(t, rho)
    }
}

/// A time-independent velocity.
#[derive(Debug, Clone)]
pub struct FrozenVelocity(pub VelocityField);

impl VelocityProvider for FrozenVelocity {
    fn velocity(&mut self, _t: f64, _rho: &GridField) -> VelocityField {
        self.0.clone()
    }
}

/// Called with the state at `t = 0` and after every step.
pub trait Observer {
    fn observe(&mut self, t: f64, rho: &GridField);
}

/// Records `‖ρ‖_{L^r}` for a fixed list of exponents.
#[derive(Debug, Clone, Default)]
pub struct NormRecorder {
    pub exponents: Vec<f64>,
    pub times: Vec<f64>,
    /// `norms[i][j]`: exponent `j` at `times[i]`.
    pub norms: Vec<Vec<f64>>,
}

impl NormRecorder {
    /// Exponents must lie in `[1, ∞]`.
    pub fn new(exponents: &[f64]) -> Self {
        assert!(exponents.iter().all(|&r| r >= 1.0), "exponents must lie in [1, inf]");
        Self { exponents: exponents.to_vec(), ..Self::default() }
    }

    /// Largest `|‖ρ(t)‖ − ‖ρ(0)‖| / ‖ρ(0)‖` per exponent.
    pub fn max_relative_drift(&self) -> Vec<f64> {
        (0..self.exponents.len())
            .map(|j| {
                let n0 = self.norms[0][j];
                self.norms.iter().map(|row| (row[j] - n0).abs() / n0).fold(0.0, f64::max)
            })
            .collect()
    }
}

impl Observer for NormRecorder {
    fn observe(&mut self, t: f64, rho: &GridField) {
        self.times.push(t);
        self.norms.push(
            self.exponents
                .iter()
                .map(|&r| lebesgue_norm(rho, r).expect("exponents validated on construction"))
                .collect(),
        );
    }
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub rho: GridField,
    /// Times at which steps ended (starting with 0).
    pub times: Vec<f64>,
}

/// Repeated [`advect_step`] up to time `t_final`; the last step is shortened
/// to land on `t_final` exactly.
pub fn evolve(
    rho0: &GridField,
    provider: &mut dyn VelocityProvider,
    t_final: f64,
    scheme: &AdvectionScheme,
    observers: &mut [&mut dyn Observer],
) -> Result<Evolution, TransportError> {
    let mut rho = rho0.clone();
    let mut t = 0.0;
    let mut times = vec![0.0];
    for obs in observers.iter_mut() {
        obs.observe(t, &rho);
    }
    while t < t_final {
        let dt = scheme.dt.min(t_final - t);
        let u = provider.velocity(t, &rho);
        rho = advect_step(&rho, &u, &scheme.with_dt(dt))?;
        t = if t_final - t <= scheme.dt { t_final } else { t + dt };
        times.push(t);
        for obs in observers.iter_mut() {
            obs.observe(t, &rho);
        }
    }
    Ok(Evolution { rho, times })
}
