use super::field::GridField;
use super::SpectralError;

/// Reciprocals below this magnitude are treated as `+∞`.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

pub(crate) fn check_exponent(r: f64) -> Result<(), SpectralError> {
    if r.is_nan() || r < 1.0 {
        Err(SpectralError::Exponent(r))
    } else {
        Ok(())
    }
}

/// Rectangle-rule `L^r(𝕋^d)` norm; `r = f64::INFINITY` gives the max norm.
pub fn lebesgue_norm(f: &GridField, r: f64) -> Result<f64, SpectralError> {
    check_exponent(r)?;
    Ok(lebesgue_norm_slice(f.values(), f.grid().cell_volume(), r))
}

pub(crate) fn lebesgue_norm_slice(values: &[f64], weight: f64, r: f64) -> f64 {
    if r.is_infinite() {
        return values.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    if r == 1.0 {
        return weight * values.iter().map(|v| v.abs()).sum::<f64>();
    }
    if r == 2.0 {
        return (weight * values.iter().map(|v| v * v).sum::<f64>()).sqrt();
    }
    // scale by the max to keep |v|^r representable for large r
    let m = values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = values.iter().map(|v| (v.abs() / m).powf(r)).sum();
    m * (weight * s).powf(1.0 / r)
}

/// `‖1/ρ‖_{L^σ}`, or `+∞` when some `|ρ_i|` falls below [`UNDERFLOW_FLOOR`].
pub fn reciprocal_norm(rho: &GridField, sigma: f64) -> Result<f64, SpectralError> {
    check_exponent(sigma)?;
    if rho.values().iter().any(|v| v.abs() < UNDERFLOW_FLOOR) {
        return Ok(f64::INFINITY);
    }
    let inv: Vec<f64> = rho.values().iter().map(|v| 1.0 / v).collect();
    Ok(lebesgue_norm_slice(&inv, rho.grid().cell_volume(), sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::TorusGrid;
    use std::f64::consts::PI;

    #[test]
    fn constant_norms() {
        let g = TorusGrid::new(2, 16).unwrap();
        let f = GridField::constant(g, -3.0);
        for &r in &[1.0, 1.5, 2.0, 7.0] {
            let expect = 3.0 * g.volume().powf(1.0 / r);
            assert!((lebesgue_norm(&f, r).unwrap() - expect).abs() < 1e-12 * expect);
        }
        assert_eq!(lebesgue_norm(&f, f64::INFINITY).unwrap(), 3.0);
        assert!(matches!(lebesgue_norm(&f, 0.5), Err(SpectralError::Exponent(_))));
    }

    #[test]
    fn cosine_l2_norm() {
        // ∫_{𝕋²} cos² x₁ = 2π²
        let g = TorusGrid::new(2, 32).unwrap();
        let f = GridField::from_fn(g, |x| x[0].cos());
        let expect = (2.0 * PI * PI).sqrt();
        assert!((lebesgue_norm(&f, 2.0).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 4.4429).abs() < 1e-4);
    }

    #[test]
    fn normalized_norms_increase_with_exponent() {
        let g = TorusGrid::new(2, 32).unwrap();
        let f = GridField::from_fn(g, |x| (x[0] + 2.0 * x[1]).sin() + 0.3 * x[1].cos());
        let mut prev = 0.0;
        for &r in &[1.0, 1.2, 1.5, 2.0, 3.0, 6.0, f64::INFINITY] {
            let avg = if r.is_infinite() { 1.0 } else { g.volume().powf(-1.0 / r) };
            let v = lebesgue_norm(&f, r).unwrap() * avg;
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn reciprocal_norms() {
        let g = TorusGrid::new(2, 64).unwrap();
        assert_eq!(reciprocal_norm(&GridField::constant(g, 2.0), f64::INFINITY).unwrap(), 0.5);
        let mut v = vec![1.0; g.len()];
        v[17] = 0.0;
        let z = GridField::new(g, v).unwrap();
        assert!(reciprocal_norm(&z, 2.0).unwrap().is_infinite());
        // ∫∫ dx/(1 + 0.5 cos x₁) = 2π · 2π/√(1 − 0.25)
        let rho = GridField::from_fn(g, |x| 1.0 + 0.5 * x[0].cos());
        let expect = 2.0 * PI * (2.0 * PI / 0.75f64.sqrt());
        assert!((reciprocal_norm(&rho, 1.0).unwrap() - expect).abs() < 1e-10 * expect);
    }
}
