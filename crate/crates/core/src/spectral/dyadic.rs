//! Littlewood-Paley decomposition on the lattice of Fourier modes.
//!
//! The radial profile `χ` equals 1 on `[0, 1]`, vanishes on `[2, ∞)` and
//! interpolates with the `exp(-1/t)` smooth step. Blocks use
//! `φ(ξ) = χ(ξ/2) − χ(ξ)`, so `Δ_j` (for `j ≥ 0`) lives on
//! `2^j < |ξ| < 2^{j+2}` and
//!
//! ```text
//! χ(ξ) + Σ_{j=0}^{J} φ(2^{-j} ξ) = χ(2^{-J-1} ξ)
//! ```
//!
//! telescopes to 1 once `2^{J+1} ≥ |ξ|`.

use super::field::{partial_derivative, to_grid_unchecked, SpectralField};
use super::grid::norm_sq;
use super::norms::{check_exponent, lebesgue_norm};
use super::SpectralError;

fn smooth_step_kernel(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Radial cutoff `χ(r)`: 1 for `r ≤ 1`, 0 for `r ≥ 2`, smooth and
/// nonincreasing in between.
pub fn chi(r: f64) -> f64 {
    let r = r.abs();
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let a = smooth_step_kernel(2.0 - r);
        let b = smooth_step_kernel(r - 1.0);
        a / (a + b)
    }
}

/// Annular profile `φ(r) = χ(r/2) − χ(r)`.
pub fn phi(r: f64) -> f64 {
    chi(0.5 * r) - chi(r)
}

/// The dyadic cutoff pair `(χ, φ)` with its scaled multipliers.
#[derive(Debug, Clone, Copy, Default)]
pub struct DyadicCutoff;

impl DyadicCutoff {
    pub fn chi(&self, r: f64) -> f64 {
        chi(r)
    }

    pub fn phi(&self, r: f64) -> f64 {
        phi(r)
    }

    /// Multiplier of `Δ_j` at radius `r = |ξ|`.
    pub fn block_symbol(&self, j: i32, r: f64) -> f64 {
        match j {
            j if j <= -2 => 0.0,
            -1 => chi(r),
            j => phi(r * 2f64.powi(-j)),
        }
    }

    /// Multiplier of `S_j = χ(2^{1-j} D)` at radius `r`.
    pub fn low_pass_symbol(&self, j: i32, r: f64) -> f64 {
        chi(r * 2f64.powi(1 - j))
    }
}

fn radius(k: &[i64; 3]) -> f64 {
    norm_sq(k).sqrt()
}

/// Littlewood-Paley block `Δ_j F`.
pub fn lp_block(f: &SpectralField, j: i32) -> SpectralField {
    let cut = DyadicCutoff;
    f.multiply(|k| cut.block_symbol(j, radius(k)))
}

/// Smooth low-pass `S_j F = χ(2^{1-j} D) F`, the identity on `|k| ≤ 2^{j-1}`.
pub fn low_freq_truncate(f: &SpectralField, j: i32) -> SpectralField {
    let cut = DyadicCutoff;
    f.multiply(|k| cut.low_pass_symbol(j, radius(k)))
}

/// Sharp Fourier truncation `E_N`: keeps modes with `|k| ≤ N`.
pub fn sharp_truncate(f: &SpectralField, n: f64) -> SpectralField {
    f.multiply(|k| if radius(k) <= n { 1.0 } else { 0.0 })
}

/// Nonhomogeneous Besov norm `‖(2^{js} ‖Δ_j F‖_{L^p})_{j≥-1}‖_{ℓ^r}`.
pub fn besov_norm(f: &SpectralField, s: f64, p: f64, r: f64) -> Result<f64, SpectralError> {
    check_exponent(p)?;
    check_exponent(r)?;
    let grid = f.grid();
    let mut terms = Vec::new();
    for j in -1..=grid.max_level() {
        let block = to_grid_unchecked(&lp_block(f, j));
        terms.push(2f64.powf(j as f64 * s) * lebesgue_norm(&block, p)?);
    }
    Ok(sequence_norm(&terms, r))
}

fn sequence_norm(terms: &[f64], r: f64) -> f64 {
    if r.is_infinite() {
        terms.iter().copied().fold(0.0, f64::max)
    } else {
        terms.iter().map(|t| t.abs().powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

/// `‖∇Δ_j F‖_{L^p} / (2^j ‖Δ_j F‖_{L^p})`, with `|∇·|` the pointwise
/// Euclidean gradient magnitude.
pub fn bernstein_ratio(f: &SpectralField, j: i32, p: f64) -> Result<f64, SpectralError> {
    check_exponent(p)?;
    let block = lp_block(f, j);
    let scale = f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let block_max = block.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    if block_max <= 1e-14 * scale || block_max == 0.0 {
        return Err(SpectralError::ZeroBlock(j));
    }
    let grid = f.grid();
    let values = to_grid_unchecked(&block);
    let grads: Vec<_> = (0..grid.dim())
        .map(|a| to_grid_unchecked(&partial_derivative(&block, a)))
        .collect();
    let mag: Vec<f64> = (0..grid.len())
        .map(|i| grads.iter().map(|g| g.values()[i].powi(2)).sum::<f64>().sqrt())
        .collect();
    let mag = super::field::GridField::from_raw(grid, mag);
    let denom = 2f64.powi(j) * lebesgue_norm(&values, p)?;
    if denom == 0.0 {
        return Err(SpectralError::ZeroBlock(j));
    }
    Ok(lebesgue_norm(&mag, p)? / denom)
}
