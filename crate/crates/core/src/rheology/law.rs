use super::{FluidParams, RheologyError};

/// Density-dependent viscosity `ν(ρ)`; every law is even in `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub enum ViscosityLaw {
    Constant { nu0: f64 },
    /// `ν_*|r|^γ`, unbounded for `γ > 0`.
    Power { nu_star: f64, gamma: f64 },
    /// `min(ν_max, ν_*|r|^γ)`.
    BoundedPower { nu_star: f64, gamma: f64, nu_max: f64 },
    /// Piecewise linear in `|r|` through `(r_i, ν_i)` with `r_i` increasing,
    /// constant beyond the end points.
    Table { points: Vec<(f64, f64)> },
}

impl ViscosityLaw {
    /// The default degenerate law built from `ν_*`, `γ` and `ν_max`.
    pub fn bounded_power(params: &FluidParams) -> Self {
        Self::BoundedPower {
            nu_star: params.nu_star,
            gamma: params.gamma,
            nu_max: params.nu_max,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        let a = r.abs();
        match self {
            Self::Constant { nu0 } => *nu0,
            Self::Power { nu_star, gamma } => power(*nu_star, *gamma, a),
            Self::BoundedPower { nu_star, gamma, nu_max } => power(*nu_star, *gamma, a).min(*nu_max),
            Self::Table { points } => table(points, a),
        }
    }

    /// True when `ν` vanishes identically (no dissipation anywhere).
    pub fn is_zero_everywhere(&self) -> bool {
        match self {
            Self::Constant { nu0 } => *nu0 == 0.0,
            Self::Power { nu_star, .. } | Self::BoundedPower { nu_star, .. } => *nu_star == 0.0,
            Self::Table { points } => points.iter().all(|p| p.1 == 0.0),
        }
    }

    /// Checks the structural hypotheses by sampling: `0 ≤ ν ≤ ν_max`
    /// (skipped for the unbounded [`ViscosityLaw::Power`]), the lower bound
    /// `ν(|r|) ≥ ν_*|r|^γ` on `|r| ≤ 1`, and, for tables, continuity at 0.
    pub fn validate(&self, params: &FluidParams) -> Result<(), RheologyError> {
        if let Self::Table { points } = self {
            if points.is_empty() {
                return Err(RheologyError::InvalidLaw("empty table".into()));
            }
            if points.windows(2).any(|w| !(w[1].0 > w[0].0)) || points[0].0 < 0.0 {
                return Err(RheologyError::InvalidLaw("table abscissae must increase from r >= 0".into()));
            }
        }
        let bounded = !matches!(self, Self::Power { .. });
        for i in 0..=2000 {
            let r = 10f64.powf(-6.0 + 8.0 * i as f64 / 2000.0);
            let v = self.eval(r);
            if !v.is_finite() || v < 0.0 {
                return Err(RheologyError::InvalidLaw(format!("nu({r:e}) = {v} is not a finite nonnegative value")));
            }
            if bounded && v > params.nu_max * (1.0 + 1e-12) {
                return Err(RheologyError::InvalidLaw(format!("nu({r:e}) = {v} > nu_max = {}", params.nu_max)));
            }
            if r <= 1.0 && v < params.nu_star * r.powf(params.gamma) * (1.0 - 1e-12) {
                return Err(RheologyError::InvalidLaw(format!("nu({r:e}) = {v} below nu_star |r|^gamma")));
            }
        }
        // power laws with γ ≥ 0 are continuous at 0; sampling them near 0 is
        // too coarse for small γ, so only tables are probed
        let table = matches!(self, Self::Table { .. });
        if table && (self.eval(1e-12) - self.eval(0.0)).abs() > 1e-6 * (1.0 + self.eval(0.0).abs()) {
            return Err(RheologyError::InvalidLaw("discontinuous at 0".into()));
        }
        Ok(())
    }
}

fn power(nu_star: f64, gamma: f64, a: f64) -> f64 {
    if gamma == 0.0 {
        nu_star
    } else {
        nu_star * a.powf(gamma)
    }
}

fn table(points: &[(f64, f64)], a: f64) -> f64 {
    let first = points[0];
    let last = points[points.len() - 1];
    if a <= first.0 {
        return first.1;
    }
    if a >= last.0 {
        return last.1;
    }
    let i = points.partition_point(|p| p.0 <= a);
    let (r0, v0) = points[i - 1];
    let (r1, v1) = points[i];
    v0 + (v1 - v0) * (a - r0) / (r1 - r0)
}

/// Largest sampled `|ν(a) − ν(b)| / |a − b|^exponent` over `samples`
/// equispaced points of `[lo, hi]`.
pub fn holder_seminorm(law: &ViscosityLaw, exponent: f64, lo: f64, hi: f64, samples: usize) -> f64 {
    let xs: Vec<f64> = (0..samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
        .collect();
    let vs: Vec<f64> = xs.iter().map(|&x| law.eval(x)).collect();
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        for j in i + 1..samples {
            worst = worst.max((vs[i] - vs[j]).abs() / (xs[j] - xs[i]).powf(exponent));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(gamma: f64, nu_max: f64) -> FluidParams {
        FluidParams::newtonian(2).with_gamma(gamma).with_viscosity_bounds(1.0, nu_max)
    }

    #[test]
    fn evaluations() {
        assert_eq!(ViscosityLaw::Constant { nu0: 2.5 }.eval(-7.0), 2.5);
        let b = ViscosityLaw::BoundedPower { nu_star: 1.0, gamma: 1.0, nu_max: 3.0 };
        assert_eq!(b.eval(0.0), 0.0);
        assert_eq!(b.eval(0.5), 0.5);
        assert_eq!(b.eval(-0.5), 0.5);
        assert_eq!(b.eval(10.0), 3.0);
        let p = ViscosityLaw::Power { nu_star: 2.0, gamma: 2.0 };
        assert_eq!(p.eval(3.0), 18.0);
        let t = ViscosityLaw::Table { points: vec![(0.0, 0.0), (1.0, 1.0), (2.0, 1.5)] };
        assert_eq!(t.eval(0.5), 0.5);
        assert_eq!(t.eval(-1.5), 1.25);
        assert_eq!(t.eval(9.0), 1.5);
    }

    #[test]
    fn validation_by_sampling() {
        let ps = params(1.0, 3.0);
        assert!(ViscosityLaw::bounded_power(&ps).validate(&ps).is_ok());
        assert!(ViscosityLaw::Power { nu_star: 1.0, gamma: 1.0 }.validate(&ps).is_ok());
        assert!(ViscosityLaw::Constant { nu0: 0.5 }.validate(&params(0.0, 1.0)).is_err());
        assert!(ViscosityLaw::Constant { nu0: 5.0 }.validate(&params(0.0, 3.0)).is_err());
        let t = ViscosityLaw::Table { points: vec![(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)] };
        assert!(t.validate(&params(1.0, 2.0)).is_ok());
        let jump = ViscosityLaw::Table { points: vec![(0.0, 1.0), (1e-13, 0.0), (1.0, 1.0)] };
        assert!(jump.validate(&params(1.0, 2.0)).is_err());
    }

    #[test]
    fn small_gamma_is_continuous() {
        let ps = params(0.05, 3.0);
        assert!(ViscosityLaw::bounded_power(&ps).validate(&ps).is_ok());
    }

    #[test]
    fn holder_continuity_away_from_zero() {
        for &gamma in &[0.3, 1.0, 2.5] {
            let law = ViscosityLaw::BoundedPower { nu_star: 1.0, gamma, nu_max: 4.0 };
            let gb = gamma.min(1.0);
            let h = holder_seminorm(&law, gb, 0.01, 10.0, 400);
            assert!(h.is_finite() && h < 1e3, "gamma {gamma}: {h}");
        }
    }
}
