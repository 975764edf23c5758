//! Zero-padded evaluation on the `3n/2` grid (the 2/3 rule).

use rustfft::num_complex::Complex64;

use super::fft::{transform, Direction};
use super::grid::TorusGrid;

/// Maps the resolved band of a [`TorusGrid`] (every mode off the Nyquist
/// planes) onto a grid with `3n/2` points per axis.
#[derive(Debug, Clone)]
pub(crate) struct Padding {
    grid: TorusGrid,
    m: usize,
    map: Vec<(usize, usize)>,
}

impl Padding {
    pub(crate) fn new(grid: TorusGrid) -> Self {
        let n = grid.n();
        let m = 3 * n / 2;
        let d = grid.dim();
        let mut map = Vec::new();
        for i in 0..grid.len() {
            if grid.is_nyquist(i) {
                continue;
            }
            let k = grid.mode(i);
            let mut flat = 0usize;
            for a in 0..d {
                flat = flat * m + k[a].rem_euclid(m as i64) as usize;
            }
            map.push((i, flat));
        }
        Self { grid, m, map }
    }

    pub(crate) fn len(&self) -> usize {
        self.m.pow(self.grid.dim() as u32)
    }

    /// Quadrature weight of one padded node, `(2π/m)^d`.
    pub(crate) fn weight(&self) -> f64 {
        (2.0 * std::f64::consts::PI / self.m as f64).powi(self.grid.dim() as i32)
    }

    /// Samples the band-limited field with coefficients `coeffs` on the padded grid.
    pub(crate) fn evaluate(&self, coeffs: &[Complex64], out: &mut [f64]) {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len()];
        for &(i, j) in &self.map {
            buf[j] = coeffs[i];
        }
        transform(&mut buf, self.grid.dim(), self.m, Direction::Inverse);
        for (o, b) in out.iter_mut().zip(&buf) {
            *o = b.re;
        }
    }

    /// Normalized coefficients of padded samples, restricted to the resolved band.
    pub(crate) fn project(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        transform(&mut buf, self.grid.dim(), self.m, Direction::Forward);
        let inv = 1.0 / self.len() as f64;
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        for &(i, j) in &self.map {
            out[i] = buf[j] * inv;
        }
        out
    }
}
