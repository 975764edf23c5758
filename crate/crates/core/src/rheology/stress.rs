use super::{FluidParams, ViscosityLaw};
use crate::spectral::{GridField, StrainField};

/// Pointwise `ν(ρ_i)`.
pub fn viscosity_eval(law: &ViscosityLaw, rho: &GridField) -> GridField {
    rho.map(|r| law.eval(r))
}

/// `ν(δ² + s²)^{(p−2)/2}` with `s² = |Du|²`. At `Du = 0`, `δ = 0` the
/// stress vanishes for every `p > 1`, so the factor is reported as 0
/// (or `ν` when `p = 2`).
pub(crate) fn stress_factor(nu: f64, s2: f64, p: f64, delta: f64) -> f64 {
    if p == 2.0 {
        return nu;
    }
    let base = delta * delta + s2;
    if base == 0.0 || nu == 0.0 {
        return 0.0;
    }
    nu * base.powf(0.5 * (p - 2.0))
}

/// Energy density `ν((δ² + s²)^{p/2} − δ^p)/p`; equals `ν|Du|^p/p` at `δ = 0`.
pub(crate) fn dissipation_primitive(nu: f64, s2: f64, p: f64, delta: f64) -> f64 {
    if nu == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        return 0.5 * nu * s2;
    }
    if delta == 0.0 {
        return nu * s2.powf(0.5 * p) / p;
    }
    let d2 = delta * delta;
    // (a + x)^{p/2} − a^{p/2} without cancellation for x ≪ a
    let ratio = s2 / d2;
    nu * d2.powf(0.5 * p) * ((0.5 * p) * ratio.ln_1p()).exp_m1() / p
}

/// Viscous stress `ν(ρ)(δ² + |Du|²)^{(p−2)/2} Du`, `|·|` the Frobenius norm.
pub fn stress(law: &ViscosityLaw, params: &FluidParams, rho: &GridField, du: &StrainField) -> StrainField {
    let grid = du.grid();
    let s2 = du.frobenius_sq();
    let factor: Vec<f64> = rho
        .values()
        .iter()
        .zip(s2.values())
        .map(|(&r, &s)| stress_factor(law.eval(r), s, params.p, params.delta))
        .collect();
    let comps = du
        .components()
        .iter()
        .map(|c| {
            let v = c.values().iter().zip(&factor).map(|(a, f)| a * f).collect();
            GridField::new(grid, v).expect("stress is finite")
        })
        .collect();
    StrainField::new(du.dim(), comps)
}

/// Pointwise `ν(ρ)(δ² + |Du|²)^{(p−2)/2}|Du|²`, i.e. `stress : Du`.
pub fn dissipation_density(law: &ViscosityLaw, params: &FluidParams, rho: &GridField, du: &StrainField) -> GridField {
    let s2 = du.frobenius_sq();
    rho.zip_map(&s2, |r, s| stress_factor(law.eval(r), s, params.p, params.delta) * s)
}
