//! Seeded random band-limited fields for test batteries.

use rand::Rng;

use crate::spectral::{leray_project, to_grid, Complex64, GridField, SpectralField, TorusGrid, VelocityField};

/// Lattice points `k` with `|k_i| ≤ kmax`, one from each `±k` pair, no zero mode.
fn half_lattice(grid: TorusGrid, kmax: i64) -> Vec<[i64; 3]> {
    let d = grid.dim();
    let r3 = if d == 3 { kmax } else { 0 };
    let mut out = Vec::new();
    for k1 in -kmax..=kmax {
        for k2 in -kmax..=kmax {
            for k3 in -r3..=r3 {
                let k = [k1, k2, k3];
                if k.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0) {
                    out.push(k);
                }
            }
        }
    }
    out
}

/// Zero-mean real field with coefficients uniform in `[-1, 1]²·(1 + |k|²)^{-decay/2}`.
pub fn band_limited<R: Rng>(grid: TorusGrid, rng: &mut R, kmax: i64, decay: f64) -> SpectralField {
    let modes: Vec<_> = half_lattice(grid, kmax)
        .into_iter()
        .map(|k| {
            let w = (1.0 + (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).powf(-0.5 * decay);
            (k, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * w)
        })
        .collect();
    SpectralField::from_modes(grid, &modes)
}

/// `mean + amp·F/max|F|` for a band-limited `F`, so values lie in
/// `[mean − amp, mean + amp]`.
pub fn density<R: Rng>(grid: TorusGrid, rng: &mut R, kmax: i64, mean: f64, amp: f64) -> GridField {
    let f = to_grid(&band_limited(grid, rng, kmax, 1.0)).expect("Hermitian by construction");
    let m = f.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    f.map(|v| mean + amp * v / m)
}

/// Leray projection of a band-limited vector field.
pub fn solenoidal<R: Rng>(grid: TorusGrid, rng: &mut R, kmax: i64) -> VelocityField {
    let comps: Vec<_> = (0..grid.dim()).map(|_| band_limited(grid, rng, kmax, 2.0)).collect();
    leray_project(&comps)
}
