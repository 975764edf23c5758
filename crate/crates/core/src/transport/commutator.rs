use crate::rheology::FluidParams;
use crate::spectral::dealias::Padding;
use crate::spectral::{lebesgue_norm, to_grid_unchecked, to_spectral, Complex64, GridField, SpectralField, VelocityField};

use super::TransportError;

/// `α` with `1/α = 1/β + 1/q`.
pub fn commutator_exponent(params: &FluidParams) -> f64 {
    1.0 / (1.0 / params.beta() + 1.0 / params.q)
}

/// `‖div((ψ_ε∗ρ)u) − ψ_ε∗div(ρu)‖_{L^α}` for the periodic Gaussian
/// `ψ̂_ε(k) = exp(−ε²|k|²/2)`.
pub fn commutator_residual(
    rho: &GridField,
    u: &VelocityField,
    epsilon: f64,
    alpha: f64,
) -> Result<f64, TransportError> {
    let grid = rho.grid();
    if u.grid() != grid {
        return Err(TransportError::GridMismatch);
    }
    let h = grid.spacing();
    if !(epsilon > h) {
        return Err(TransportError::UnresolvableMollifier { epsilon, h });
    }
    let mollify = |k: &[i64; 3]| {
        let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        (-0.5 * epsilon * epsilon * k2).exp()
    };
    let rho_hat = to_spectral(rho);
    let smooth = rho_hat.multiply(mollify);
    let a = divergence_of_product(&smooth, u);
    let b = divergence_of_product(&rho_hat, u).multiply(mollify);
    Ok(lebesgue_norm(&to_grid_unchecked(&a.sub(&b)), alpha)?)
}

fn divergence_of_product(rho: &SpectralField, u: &VelocityField) -> SpectralField {
    let grid = rho.grid();
    let pad = Padding::new(grid);
    let mut r = vec![0.0; pad.len()];
    pad.evaluate(rho.coeffs(), &mut r);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut ua = vec![0.0; pad.len()];
    for (a, comp) in u.components().iter().enumerate() {
        pad.evaluate(comp.coeffs(), &mut ua);
        let prod: Vec<f64> = r.iter().zip(&ua).map(|(x, y)| x * y).collect();
        let flux = pad.project(&prod);
        for (m, f) in flux.iter().enumerate() {
            let idx = grid.multi_index(m);
            if idx[a] == grid.n() / 2 {
                continue;
            }
            out[m] += f * Complex64::new(0.0, grid.wavenumber(idx[a]) as f64);
        }
    }
    SpectralField::new(grid, out).expect("length matches")
}
