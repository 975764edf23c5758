//! Discrete energy and its exact gradient on the zero-padded grid.

use crate::rheology::{dissipation_primitive, stress_factor};
use crate::spectral::dealias::Padding;
use crate::spectral::{to_spectral, Complex64, SpectralField, TorusGrid, VelocityField};

use super::problem::StokesProblem;

pub(crate) type Coeffs = Vec<Vec<Complex64>>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Precomputed data for evaluating `A_ρ` and its gradient.
pub(crate) struct Energy {
    grid: TorusGrid,
    pad: Padding,
    d: usize,
    p: f64,
    pub(crate) delta: f64,
    /// Wavevectors with Nyquist components set to 0.
    modes: Vec<[f64; 3]>,
    /// Modes carried by velocities (off the Nyquist planes, nonzero).
    active: Vec<bool>,
    nu_pad: Vec<f64>,
    /// `ρ̂ g_i` per component.
    forcing: Coeffs,
    penalty: Option<(f64, Vec<f64>)>,
    vol: f64,
}

pub(crate) struct Eval {
    pub value: f64,
    pub grad: Coeffs,
    /// `∫ stress : Du` (the dissipation at this δ).
    pub dissipation: f64,
    pub work: f64,
    pub penalty_energy: f64,
}

impl Energy {
    pub(crate) fn new(prob: &StokesProblem, delta: f64) -> Self {
        let grid = prob.rho().grid();
        let d = grid.dim();
        let pad = Padding::new(grid);
        let rho_hat = to_spectral(prob.rho());
        let mut rho_pad = vec![0.0; pad.len()];
        pad.evaluate(rho_hat.coeffs(), &mut rho_pad);
        let law = prob.law();
        let nu_pad = rho_pad.iter().map(|&r| law.eval(r)).collect();
        let g = &prob.params().g;
        let forcing = (0..d).map(|i| rho_hat.coeffs().iter().map(|c| c * g[i]).collect()).collect();
        let mut modes = Vec::with_capacity(grid.len());
        let mut active = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            let k = grid.mode(i);
            let idx = grid.multi_index(i);
            let mut kf = [0.0; 3];
            for a in 0..d {
                if idx[a] != grid.n() / 2 {
                    kf[a] = k[a] as f64;
                }
            }
            modes.push(kf);
            active.push(i != 0 && !grid.is_nyquist(i));
        }
        let penalty = prob.penalty().map(|pen| {
            let sym = modes
                .iter()
                .map(|k| (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).powi(pen.k as i32))
                .collect();
            (pen.n, sym)
        });
        Self {
            grid,
            pad,
            d,
            p: prob.params().p,
            delta,
            modes,
            active,
            nu_pad,
            forcing,
            penalty,
            vol: grid.volume(),
        }
    }

    pub(crate) fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub(crate) fn viscosity_vanishes(&self) -> bool {
        self.nu_pad.iter().all(|&v| v == 0.0)
    }

    pub(crate) fn has_penalty(&self) -> bool {
        self.penalty.is_some()
    }

    pub(crate) fn zeros(&self) -> Coeffs {
        vec![vec![ZERO; self.grid.len()]; self.d]
    }

    pub(crate) fn inner(&self, a: &Coeffs, b: &Coeffs) -> f64 {
        let mut s = 0.0;
        for (x, y) in a.iter().zip(b) {
            for (u, v) in x.iter().zip(y) {
                s += u.re * v.re + u.im * v.im;
            }
        }
        self.vol * s
    }

    /// Leray projection restricted to the velocity band.
    pub(crate) fn project(&self, f: &mut Coeffs) {
        let d = self.d;
        for i in 0..self.grid.len() {
            if !self.active[i] {
                for c in f.iter_mut() {
                    c[i] = ZERO;
                }
                continue;
            }
            let k = &self.modes[i];
            let k2: f64 = k[..d].iter().map(|x| x * x).sum();
            let mut kf = ZERO;
            for a in 0..d {
                kf += f[a][i] * k[a];
            }
            for a in 0..d {
                f[a][i] -= kf * (k[a] / k2);
            }
        }
    }

    /// Applies `1/(c|k|²/2 + |k|^{2k}/N)` on the velocity band.
    pub(crate) fn precondition(&self, f: &Coeffs, visc: f64) -> Coeffs {
        let mut out = f.clone();
        for i in 0..self.grid.len() {
            let k = &self.modes[i];
            let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            let mut sym = 0.5 * visc * k2;
            if let Some((n, pen)) = &self.penalty {
                sym += pen[i] / n;
            }
            let m = if self.active[i] && sym > 0.0 { 1.0 / sym } else { 0.0 };
            for c in out.iter_mut() {
                c[i] *= m;
            }
        }
        out
    }

    /// Newtonian solve `P(ρ̂g)/(c|k|²/2 + |k|^{2k}/N)`.
    pub(crate) fn newtonian_guess(&self, visc: f64) -> Coeffs {
        let mut f = self.forcing.clone();
        self.project(&mut f);
        self.precondition(&f, visc)
    }

    /// Padded samples of the independent strain components `D_ij`, `i ≤ j`.
    fn strain(&self, u: &Coeffs) -> Vec<Vec<f64>> {
        let d = self.d;
        let mut out = Vec::with_capacity(d * (d + 1) / 2);
        let mut buf = vec![ZERO; self.grid.len()];
        for i in 0..d {
            for j in i..d {
                for (m, b) in buf.iter_mut().enumerate() {
                    let k = &self.modes[m];
                    // (i/2)(k_i û_j + k_j û_i)
                    let s = u[j][m] * k[i] + u[i][m] * k[j];
                    *b = Complex64::new(-0.5 * s.im, 0.5 * s.re);
                }
                let mut vals = vec![0.0; self.pad.len()];
                self.pad.evaluate(&buf, &mut vals);
                out.push(vals);
            }
        }
        out
    }

    fn pair_weight(i: usize, j: usize) -> f64 {
        if i == j {
            1.0
        } else {
            2.0
        }
    }

    fn frobenius_sq(&self, strain: &[Vec<f64>], node: usize) -> f64 {
        let d = self.d;
        let mut c = 0;
        let mut s = 0.0;
        for i in 0..d {
            for j in i..d {
                s += Self::pair_weight(i, j) * strain[c][node] * strain[c][node];
                c += 1;
            }
        }
        s
    }

    /// Forcing work `∫ρg·u` (exact for band-limited fields).
    pub(crate) fn work(&self, u: &Coeffs) -> f64 {
        self.inner(&self.forcing, u)
    }

    pub(crate) fn penalty_energy(&self, u: &Coeffs) -> f64 {
        match &self.penalty {
            None => 0.0,
            Some((n, sym)) => {
                let mut s = 0.0;
                for c in u {
                    for (z, w) in c.iter().zip(sym) {
                        s += z.norm_sqr() * w;
                    }
                }
                self.vol * s / n
            }
        }
    }

    pub(crate) fn value(&self, u: &Coeffs) -> f64 {
        let strain = self.strain(u);
        let w = self.pad.weight();
        let mut acc = 0.0;
        for node in 0..self.pad.len() {
            let s2 = self.frobenius_sq(&strain, node);
            acc += dissipation_primitive(self.nu_pad[node], s2, self.p, self.delta);
        }
        w * acc - self.work(u) + 0.5 * self.penalty_energy(u)
    }

    /// Value and projected `L²` gradient at `u`.
    pub(crate) fn evaluate(&self, u: &Coeffs) -> Eval {
        let d = self.d;
        let mut strain = self.strain(u);
        let w = self.pad.weight();
        let mut prim = 0.0;
        let mut diss = 0.0;
        for node in 0..self.pad.len() {
            let s2 = self.frobenius_sq(&strain, node);
            let nu = self.nu_pad[node];
            prim += dissipation_primitive(nu, s2, self.p, self.delta);
            let f = stress_factor(nu, s2, self.p, self.delta);
            diss += f * s2;
            for comp in strain.iter_mut() {
                comp[node] *= f;
            }
        }
        // strain now holds the stress components T_ij, i ≤ j
        let stress_hat: Vec<Vec<Complex64>> = strain.iter().map(|t| self.pad.project(t)).collect();
        let mut grad = self.zeros();
        let mut c = 0;
        let mut index = vec![vec![0usize; d]; d];
        for i in 0..d {
            for j in i..d {
                index[i][j] = c;
                index[j][i] = c;
                c += 1;
            }
        }
        for m in 0..self.grid.len() {
            let k = &self.modes[m];
            for i in 0..d {
                // −(div T)_i = −i Σ_j k_j T̂_ij
                let mut s = ZERO;
                for j in 0..d {
                    s += stress_hat[index[i][j]][m] * k[j];
                }
                grad[i][m] = Complex64::new(s.im, -s.re) - self.forcing[i][m];
            }
        }
        let pen_e = self.penalty_energy(u);
        if let Some((n, sym)) = &self.penalty {
            for i in 0..d {
                for m in 0..self.grid.len() {
                    grad[i][m] += u[i][m] * (sym[m] / n);
                }
            }
        }
        self.project(&mut grad);
        let work = self.work(u);
        Eval {
            value: w * prim - work + 0.5 * pen_e,
            grad,
            dissipation: w * diss,
            work,
            penalty_energy: pen_e,
        }
    }

    /// Mean of `ν(δ² + |Du|²)^{(p−2)/2}`, used to scale the preconditioner.
    pub(crate) fn mean_effective_viscosity(&self, u: &Coeffs) -> f64 {
        let strain = self.strain(u);
        let mut acc = 0.0;
        for node in 0..self.pad.len() {
            let s2 = self.frobenius_sq(&strain, node);
            let s2 = if s2 == 0.0 && self.delta == 0.0 && self.p < 2.0 { 1.0 } else { s2 };
            acc += stress_factor(self.nu_pad[node], s2, self.p, self.delta);
        }
        acc / self.pad.len() as f64
    }

    /// Stress components `T_ij` (`i ≤ j`) as n-band coefficients.
    pub(crate) fn stress_coeffs(&self, u: &Coeffs) -> Vec<Vec<Complex64>> {
        let mut strain = self.strain(u);
        for node in 0..self.pad.len() {
            let s2 = self.frobenius_sq(&strain, node);
            let f = stress_factor(self.nu_pad[node], s2, self.p, self.delta);
            for comp in strain.iter_mut() {
                comp[node] *= f;
            }
        }
        strain.iter().map(|t| self.pad.project(t)).collect()
    }

    /// Monotonicity integrand totals for two velocities: the gap
    /// `∫(T(Du) − T(Dφ)):(Du − Dφ)` and the scale `∫(|T(Du)| + |T(Dφ)|)|Du − Dφ|`.
    pub(crate) fn monotonicity(&self, u: &Coeffs, phi: &Coeffs) -> (f64, f64) {
        let a = self.strain(u);
        let b = self.strain(phi);
        let d = self.d;
        let mut gap = 0.0;
        let mut scale = 0.0;
        for node in 0..self.pad.len() {
            let sa = self.frobenius_sq(&a, node);
            let sb = self.frobenius_sq(&b, node);
            let nu = self.nu_pad[node];
            let fa = stress_factor(nu, sa, self.p, self.delta);
            let fb = stress_factor(nu, sb, self.p, self.delta);
            let mut dot = 0.0;
            let mut diff2 = 0.0;
            let mut c = 0;
            for i in 0..d {
                for j in i..d {
                    let w = Self::pair_weight(i, j);
                    let e = a[c][node] - b[c][node];
                    dot += w * (fa * a[c][node] - fb * b[c][node]) * e;
                    diff2 += w * e * e;
                    c += 1;
                }
            }
            gap += dot;
            scale += (fa * sa.sqrt() + fb * sb.sqrt()) * diff2.sqrt();
        }
        let w = self.pad.weight();
        (w * gap, w * scale)
    }
}

pub(crate) fn to_coeffs(u: &VelocityField) -> Coeffs {
    u.components().iter().map(|c| c.coeffs().to_vec()).collect()
}

pub(crate) fn to_velocity(grid: TorusGrid, c: Coeffs) -> VelocityField {
    VelocityField::from_components_unchecked(
        c.into_iter()
            .map(|v| SpectralField::new(grid, v).expect("coefficient length matches grid"))
            .collect(),
    )
}
