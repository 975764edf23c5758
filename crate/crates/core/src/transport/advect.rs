use crate::spectral::dealias::Padding;
use crate::spectral::{to_grid_unchecked, to_spectral, Complex64, GridField, SpectralField, TorusGrid, VelocityField};

use super::TransportError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdvectionKind {
    /// Dealiased pseudo-spectral flux with classical fourth-order Runge-Kutta.
    SpectralRk4,
    /// Backward characteristics with tensor cubic interpolation, clipped to
    /// the local range and followed by a constant mass correction.
    SemiLagrangian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvectionScheme {
    pub kind: AdvectionKind,
    /// Requested step; subdivided by halving until the CFL bound holds.
    pub dt: f64,
    pub cfl_target: f64,
}

impl AdvectionScheme {
    pub fn new(kind: AdvectionKind, dt: f64, cfl_target: f64) -> Result<Self, TransportError> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(TransportError::InvalidScheme(format!("dt must be positive, got {dt}")));
        }
        if !(cfl_target > 0.0 && cfl_target <= 1.0) {
            return Err(TransportError::InvalidScheme(format!("cfl target must lie in (0, 1], got {cfl_target}")));
        }
        Ok(Self { kind, dt, cfl_target })
    }

    pub fn with_dt(self, dt: f64) -> Self {
        Self { dt, ..self }
    }
}

/// Smallest step the CFL subdivision may produce.
const MIN_DT: f64 = 1e-12;

/// Advances `rho` by `scheme.dt` with the frozen velocity `u`.
pub fn advect_step(rho: &GridField, u: &VelocityField, scheme: &AdvectionScheme) -> Result<GridField, TransportError> {
    let grid = rho.grid();
    if u.grid() != grid {
        return Err(TransportError::GridMismatch);
    }
    let speed = u.max_speed();
    let mut substeps = 1usize;
    let mut dt = scheme.dt;
    if speed > 0.0 {
        let bound = scheme.cfl_target * grid.spacing() / speed;
        while dt > bound {
            dt *= 0.5;
            substeps *= 2;
            if dt < MIN_DT {
                return Err(TransportError::CflViolation { dt });
            }
        }
    }
    if speed == 0.0 {
        return Ok(rho.clone());
    }
    let mut out = rho.clone();
    match scheme.kind {
        AdvectionKind::SpectralRk4 => {
            let flux = FluxOperator::new(u);
            for _ in 0..substeps {
                out = flux.rk4(&out, dt);
            }
        }
        AdvectionKind::SemiLagrangian => {
            let comps = u.to_grid();
            let feet = departure_points(grid, &comps, dt);
            for _ in 0..substeps {
                out = semi_lagrangian(&out, &feet);
            }
        }
    }
    Ok(out)
}

/// `ρ̂ ↦ −div(ρu)^` with the product formed on the padded grid.
struct FluxOperator {
    grid: TorusGrid,
    pad: Padding,
    u_pad: Vec<Vec<f64>>,
    modes: Vec<[f64; 3]>,
}

impl FluxOperator {
    fn new(u: &VelocityField) -> Self {
        let grid = u.grid();
        let pad = Padding::new(grid);
        let u_pad = u
            .components()
            .iter()
            .map(|c| {
                let mut v = vec![0.0; pad.len()];
                pad.evaluate(c.coeffs(), &mut v);
                v
            })
            .collect();
        let modes = (0..grid.len())
            .map(|i| {
                let k = grid.mode(i);
                let idx = grid.multi_index(i);
                let mut kf = [0.0; 3];
                for a in 0..grid.dim() {
                    if idx[a] != grid.n() / 2 {
                        kf[a] = k[a] as f64;
                    }
                }
                kf
            })
            .collect();
        Self { grid, pad, u_pad, modes }
    }

    fn rhs(&self, rho_hat: &[Complex64]) -> Vec<Complex64> {
        let mut rho_pad = vec![0.0; self.pad.len()];
        self.pad.evaluate(rho_hat, &mut rho_pad);
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        for (a, ua) in self.u_pad.iter().enumerate() {
            let prod: Vec<f64> = rho_pad.iter().zip(ua).map(|(r, v)| r * v).collect();
            let flux = self.pad.project(&prod);
            for (m, f) in flux.iter().enumerate() {
                // −i k_a F̂_a
                let k = self.modes[m][a];
                out[m] += Complex64::new(f.im * k, -f.re * k);
            }
        }
        out
    }

    fn rk4(&self, rho: &GridField, dt: f64) -> GridField {
        let r0 = to_spectral(rho).into_coeffs();
        let stage = |base: &[Complex64], k: &[Complex64], c: f64| -> Vec<Complex64> {
            base.iter().zip(k).map(|(b, x)| b + x * c).collect()
        };
        let k1 = self.rhs(&r0);
        let k2 = self.rhs(&stage(&r0, &k1, 0.5 * dt));
        let k3 = self.rhs(&stage(&r0, &k2, 0.5 * dt));
        let k4 = self.rhs(&stage(&r0, &k3, dt));
        let inc: Vec<Complex64> = (0..r0.len())
            .map(|i| (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0))
            .collect();
        let inc = to_grid_unchecked(&SpectralField::new(self.grid, inc).expect("length matches"));
        rho.zip_map(&inc, |a, b| a + b)
    }
}

/// Feet of the backward characteristics through every node (midpoint rule),
/// in grid units.
fn departure_points(grid: TorusGrid, u: &[GridField], dt: f64) -> Vec<[f64; 3]> {
    let d = grid.dim();
    let h = grid.spacing();
    (0..grid.len())
        .map(|node| {
            let idx = grid.multi_index(node);
            let mut mid = [0.0; 3];
            for a in 0..d {
                mid[a] = idx[a] as f64 - 0.5 * dt * u[a].values()[node] / h;
            }
            let mut foot = [0.0; 3];
            for a in 0..d {
                let (v, _, _) = interpolate(&u[a], &mid);
                foot[a] = idx[a] as f64 - dt * v / h;
            }
            foot
        })
        .collect()
}

fn lagrange_weights(t: f64) -> [f64; 4] {
    // nodes at −1, 0, 1, 2
    [
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ]
}

/// Tensor cubic Lagrange interpolation at `pos` (grid units), together with
/// the min and max over the enclosing `2^d` nodes.
fn interpolate(f: &GridField, pos: &[f64; 3]) -> (f64, f64, f64) {
    let grid = f.grid();
    let n = grid.n() as i64;
    let d = grid.dim();
    let mut base = [0i64; 3];
    let mut w = [[0.0; 4]; 3];
    for a in 0..d {
        let fl = pos[a].floor();
        base[a] = fl as i64;
        w[a] = lagrange_weights(pos[a] - fl);
    }
    let vals = f.values();
    let at = |o: [i64; 3]| -> f64 {
        let mut idx = [0usize; 3];
        for a in 0..d {
            idx[a] = (base[a] + o[a]).rem_euclid(n) as usize;
        }
        vals[grid.flat_index(idx)]
    };
    let mut sum = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let range3 = if d == 3 { 4 } else { 1 };
    for i in 0..4 {
        for j in 0..4 {
            for l in 0..range3 {
                let o = [i as i64 - 1, j as i64 - 1, if d == 3 { l as i64 - 1 } else { 0 }];
                let v = at(o);
                let wt = w[0][i] * w[1][j] * if d == 3 { w[2][l] } else { 1.0 };
                sum += wt * v;
                let inner = (1..=2).contains(&i) && (1..=2).contains(&j) && (d == 2 || (1..=2).contains(&l));
                if inner {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
        }
    }
    (sum, lo, hi)
}

fn semi_lagrangian(rho: &GridField, feet: &[[f64; 3]]) -> GridField {
    let grid = rho.grid();
    let mut out: Vec<f64> = feet
        .iter()
        .map(|p| {
            let (v, lo, hi) = interpolate(rho, p);
            v.clamp(lo, hi)
        })
        .collect();
    let shift = rho.mean() - out.iter().sum::<f64>() / grid.len() as f64;
    out.iter_mut().for_each(|v| *v += shift);
    GridField::new(grid, out).expect("interpolated values are finite")
}
