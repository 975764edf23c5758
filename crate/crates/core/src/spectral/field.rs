use rustfft::num_complex::Complex64;

use super::fft::{transform, Direction};
use super::grid::{norm_sq, TorusGrid};
use super::SpectralError;

/// Real point values on a [`TorusGrid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    grid: TorusGrid,
    values: Vec<f64>,
}

impl GridField {
    pub fn new(grid: TorusGrid, values: Vec<f64>) -> Result<Self, SpectralError> {
        if values.len() != grid.len() {
            return Err(SpectralError::Length {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SpectralError::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: TorusGrid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Samples `f` at every node; `f` receives the node coordinates (length `d`).
    ///
    /// Panics if `f` returns a non-finite value.
    pub fn from_fn(grid: TorusGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let d = grid.dim();
        let values: Vec<f64> = (0..grid.len())
            .map(|i| {
                let x = grid.node(i);
                let v = f(&x[..d]);
                assert!(v.is_finite(), "non-finite sample at node {i}");
                v
            })
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Rectangle-rule integral over the torus.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Pointwise map. Panics if `f` produces a non-finite value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let values: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        assert!(values.iter().all(|v| v.is_finite()), "map produced non-finite values");
        Self {
            grid: self.grid,
            values,
        }
    }

    pub fn zip_map(&self, other: &GridField, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.grid, other.grid);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub(crate) fn from_raw(grid: TorusGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }
}

/// Fourier coefficients of a real field, in FFT order, normalized so that
/// the zero mode equals the mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: TorusGrid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: TorusGrid, coeffs: Vec<Complex64>) -> Result<Self, SpectralError> {
        if coeffs.len() != grid.len() {
            return Err(SpectralError::Length {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Builds a field from `(k, c)` pairs, also writing `conj(c)` at `-k`
    /// so the result is Hermitian. A pair at `k = 0` must have real `c`.
    pub fn from_modes(grid: TorusGrid, modes: &[([i64; 3], Complex64)]) -> Self {
        let mut out = Self::zeros(grid);
        for (k, c) in modes {
            let i = grid.index_of(k);
            let m = grid.mirror(i);
            out.coeffs[i] += c;
            if m != i {
                out.coeffs[m] += c.conj();
            }
        }
        out
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at wavevector `k`.
    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        self.coeffs[self.grid.index_of(k)]
    }

    /// Largest Hermitian defect `|c(-k) - conj(c(k))|`.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.coeffs.len())
            .map(|i| (self.coeffs[self.grid.mirror(i)] - self.coeffs[i].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        self.hermitian_defect() <= 1e-10 * scale.max(1e-300)
    }

    /// `L²(𝕋^d)` norm via Parseval.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.volume() * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// `L²(𝕋^d)` inner product (real part).
    pub fn l2_inner(&self, other: &SpectralField) -> f64 {
        assert_eq!(self.grid, other.grid);
        self.grid.volume()
            * self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| (a.conj() * b).re)
                .sum::<f64>()
    }

    /// Applies a real radial or directional Fourier multiplier mode-wise.
    pub fn multiply(&self, symbol: impl Fn(&[i64; 3]) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * symbol(&self.grid.mode(i)))
            .collect();
        Self {
            grid: self.grid,
            coeffs,
        }
    }

    pub fn add(&self, other: &SpectralField) -> Self {
        assert_eq!(self.grid, other.grid);
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &SpectralField) -> Self {
        assert_eq!(self.grid, other.grid);
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }
}

/// Forward transform; `coeff(0)` equals the mean of `f`.
pub fn to_spectral(f: &GridField) -> SpectralField {
    let grid = f.grid();
    let mut data: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(&mut data, grid.dim(), grid.n(), Direction::Forward);
    let inv = 1.0 / grid.len() as f64;
    data.iter_mut().for_each(|c| *c *= inv);
    SpectralField { grid, coeffs: data }
}

/// Inverse transform; rejects coefficient sets that do not describe a real field.
pub fn to_grid(f: &SpectralField) -> Result<GridField, SpectralError> {
    if !f.is_hermitian() {
        return Err(SpectralError::NonHermitian(f.hermitian_defect()));
    }
    Ok(to_grid_unchecked(f))
}

pub(crate) fn to_grid_unchecked(f: &SpectralField) -> GridField {
    let grid = f.grid();
    let mut data = f.coeffs.clone();
    transform(&mut data, grid.dim(), grid.n(), Direction::Inverse);
    GridField::from_raw(grid, data.iter().map(|c| c.re).collect())
}

/// Spectral derivative along `axis`; the Nyquist index is treated as `k = 0`.
pub fn partial_derivative(f: &SpectralField, axis: usize) -> SpectralField {
    let grid = f.grid();
    assert!(axis < grid.dim());
    let n = grid.n();
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let idx = grid.multi_index(i);
            if idx[axis] == n / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                c * Complex64::new(0.0, grid.wavenumber(idx[axis]) as f64)
            }
        })
        .collect();
    SpectralField { grid, coeffs }
}

/// Divergence-free, zero-mean vector field stored as `d` spectral components.
///
/// Modes on a Nyquist plane are always zero.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField {
    components: Vec<SpectralField>,
    uniform_drift: bool,
}

impl VelocityField {
    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            components: vec![SpectralField::zeros(grid); grid.dim()],
            uniform_drift: false,
        }
    }

    /// Spatially constant velocity `c`.
    ///
    /// This is the only way to build a field with a nonzero mean; it exists
    /// to exercise advection by pure translation.
    pub fn uniform(grid: TorusGrid, c: &[f64]) -> Self {
        assert_eq!(c.len(), grid.dim());
        let components = c
            .iter()
            .map(|&ci| {
                let mut f = SpectralField::zeros(grid);
                f.coeffs[0] = Complex64::new(ci, 0.0);
                f
            })
            .collect();
        Self {
            components,
            uniform_drift: true,
        }
    }

    pub(crate) fn from_components_unchecked(components: Vec<SpectralField>) -> Self {
        Self {
            components,
            uniform_drift: false,
        }
    }

    pub fn grid(&self) -> TorusGrid {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[SpectralField] {
        &self.components
    }

    pub fn component(&self, axis: usize) -> &SpectralField {
        &self.components[axis]
    }

    /// True for fields built by [`VelocityField::uniform`].
    pub fn is_uniform_drift(&self) -> bool {
        self.uniform_drift
    }

    pub fn to_grid(&self) -> Vec<GridField> {
        self.components.iter().map(to_grid_unchecked).collect()
    }

    pub fn l2_inner(&self, other: &VelocityField) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.l2_inner(b))
            .sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_inner(self).max(0.0).sqrt()
    }

    pub fn sub(&self, other: &VelocityField) -> VelocityField {
        Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
            uniform_drift: self.uniform_drift || other.uniform_drift,
        }
    }

    pub fn add(&self, other: &VelocityField) -> VelocityField {
        Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
            uniform_drift: self.uniform_drift || other.uniform_drift,
        }
    }

    pub fn scaled(&self, s: f64) -> VelocityField {
        Self {
            components: self.components.iter().map(|c| c.scaled(s)).collect(),
            uniform_drift: self.uniform_drift,
        }
    }

    /// Applies the same real multiplier to every component (commutes with
    /// the divergence, so the result stays divergence-free).
    pub fn multiply(&self, symbol: impl Fn(&[i64; 3]) -> f64 + Copy) -> VelocityField {
        Self {
            components: self.components.iter().map(|c| c.multiply(symbol)).collect(),
            uniform_drift: self.uniform_drift,
        }
    }

    /// `max_k |k·û(k)| / max_k |k||û(k)|`, zero for an exactly solenoidal field.
    pub fn divergence_defect(&self) -> f64 {
        let grid = self.grid();
        let d = self.dim();
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 0..grid.len() {
            let k = grid.mode(i);
            let mut div = Complex64::new(0.0, 0.0);
            let mut mag = 0.0;
            for a in 0..d {
                div += self.components[a].coeffs[i] * k[a] as f64;
                mag += self.components[a].coeffs[i].norm_sqr();
            }
            worst = worst.max(div.norm());
            scale = scale.max(mag.sqrt() * norm_sq(&k).sqrt());
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    /// Largest pointwise speed on the grid.
    pub fn max_speed(&self) -> f64 {
        let comps = self.to_grid();
        let len = self.grid().len();
        (0..len)
            .map(|i| comps.iter().map(|c| c.values()[i].powi(2)).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }
}

/// Leray projection `û ← f̂ − k (k·f̂)/|k|²`, with the zero mode and the
/// Nyquist planes removed.
pub fn leray_project(f: &[SpectralField]) -> VelocityField {
    assert!(!f.is_empty());
    let grid = f[0].grid();
    let d = grid.dim();
    assert_eq!(f.len(), d, "need one component per dimension");
    let mut out: Vec<SpectralField> = f.to_vec();
    for i in 0..grid.len() {
        if i == 0 || grid.is_nyquist(i) {
            for c in out.iter_mut() {
                c.coeffs[i] = Complex64::new(0.0, 0.0);
            }
            continue;
        }
        let k = grid.mode(i);
        let k2 = norm_sq(&k);
        let mut kf = Complex64::new(0.0, 0.0);
        for a in 0..d {
            kf += out[a].coeffs[i] * k[a] as f64;
        }
        for a in 0..d {
            let c = out[a].coeffs[i] - kf * (k[a] as f64 / k2);
            out[a].coeffs[i] = c;
        }
    }
    VelocityField::from_components_unchecked(out)
}

/// Symmetric `d × d` array of grid fields (row-major `(i, j)` storage).
#[derive(Debug, Clone, PartialEq)]
pub struct StrainField {
    dim: usize,
    comps: Vec<GridField>,
}

impl StrainField {
    pub fn new(dim: usize, comps: Vec<GridField>) -> Self {
        assert_eq!(comps.len(), dim * dim);
        Self { dim, comps }
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        let d = grid.dim();
        Self::new(d, vec![GridField::zeros(grid); d * d])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> TorusGrid {
        self.comps[0].grid()
    }

    pub fn get(&self, i: usize, j: usize) -> &GridField {
        &self.comps[i * self.dim + j]
    }

    pub fn components(&self) -> &[GridField] {
        &self.comps
    }

    /// Pointwise matrix at a node.
    pub fn at(&self, node: usize) -> Vec<f64> {
        self.comps.iter().map(|c| c.values()[node]).collect()
    }

    pub fn trace(&self) -> GridField {
        let grid = self.grid();
        let values = (0..grid.len())
            .map(|n| (0..self.dim).map(|i| self.get(i, i).values()[n]).sum())
            .collect();
        GridField::from_raw(grid, values)
    }

    /// Pointwise squared Frobenius norm.
    pub fn frobenius_sq(&self) -> GridField {
        let grid = self.grid();
        let values = (0..grid.len())
            .map(|n| self.comps.iter().map(|c| c.values()[n].powi(2)).sum())
            .collect();
        GridField::from_raw(grid, values)
    }
}

/// Strain rate `Du = (∇u + ∇uᵀ)/2` sampled on the grid.
pub fn strain_tensor(u: &VelocityField) -> StrainField {
    let grid = u.grid();
    let d = grid.dim();
    let grads: Vec<Vec<SpectralField>> = (0..d)
        .map(|j| (0..d).map(|i| partial_derivative(u.component(j), i)).collect())
        .collect();
    let mut comps = vec![GridField::zeros(grid); d * d];
    for i in 0..d {
        for j in i..d {
            // ∂_i u_j + ∂_j u_i
            let sym = grads[j][i].add(&grads[i][j]).scaled(0.5);
            let g = to_grid_unchecked(&sym);
            comps[i * d + j] = g.clone();
            comps[j * d + i] = g;
        }
    }
    StrainField::new(d, comps)
}
