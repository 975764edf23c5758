use super::RheologyError;

/// Exponents and constants of the power-law fluid.
///
/// Fields are public so that boundary cases can be handed to the exponent
/// classifier; [`FluidParams::validate`] enforces the physical ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct FluidParams {
    pub d: usize,
    pub p: f64,
    pub q: f64,
    /// Integrability of `1/ρ`; `f64::INFINITY` is allowed.
    pub sigma: f64,
    pub gamma: f64,
    pub nu_star: f64,
    pub nu_max: f64,
    pub g: Vec<f64>,
    pub delta: f64,
}

impl FluidParams {
    /// Newtonian fluid (`p = 2`, `ν ≡ 1`) under unit downward gravity.
    pub fn newtonian(d: usize) -> Self {
        let mut g = vec![0.0; d];
        if d > 0 {
            g[d - 1] = -1.0;
        }
        Self {
            d,
            p: 2.0,
            q: 1.5,
            sigma: f64::INFINITY,
            gamma: 0.0,
            nu_star: 1.0,
            nu_max: 1.0,
            g,
            delta: 0.0,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_gravity(mut self, g: Vec<f64>) -> Self {
        self.g = g;
        self
    }

    pub fn with_viscosity_bounds(mut self, nu_star: f64, nu_max: f64) -> Self {
        self.nu_star = nu_star;
        self.nu_max = nu_max;
        self
    }

    pub fn validate(&self) -> Result<(), RheologyError> {
        let bad = |name, value, reason| Err(RheologyError::InvalidParam { name, value, reason });
        if self.d != 2 && self.d != 3 {
            return bad("d", self.d as f64, "dimension must be 2 or 3");
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            return bad("p", self.p, "need p > 1");
        }
        if !(self.q > 1.0 && self.q < 2.0) {
            return bad("q", self.q, "need 1 < q < 2");
        }
        if !(self.sigma >= 1.0) {
            return bad("sigma", self.sigma, "need sigma >= 1");
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return bad("gamma", self.gamma, "need gamma >= 0");
        }
        if !(self.nu_star > 0.0) || !self.nu_star.is_finite() {
            return bad("nu_star", self.nu_star, "need nu_star > 0");
        }
        if !(self.nu_max >= self.nu_star) || !self.nu_max.is_finite() {
            return bad("nu_max", self.nu_max, "need nu_max >= nu_star");
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return bad("delta", self.delta, "need delta >= 0");
        }
        if self.g.len() != self.d {
            return Err(RheologyError::GravityDimension { dim: self.d, got: self.g.len() });
        }
        if let Some(&c) = self.g.iter().find(|c| !c.is_finite()) {
            return bad("g", c, "gravity must be finite");
        }
        Ok(())
    }

    /// `β` with `1/β = (1/p)(1 + γ/σ)`.
    pub fn beta(&self) -> f64 {
        let ratio = if self.sigma.is_infinite() { 0.0 } else { self.gamma / self.sigma };
        self.p / (1.0 + ratio)
    }

    pub fn gamma_bar(&self) -> f64 {
        self.gamma.min(1.0)
    }

    /// Hölder conjugate `q' = q/(q − 1)`.
    pub fn q_conjugate(&self) -> f64 {
        self.q / (self.q - 1.0)
    }
}
