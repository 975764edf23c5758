use std::f64::consts::PI;

use super::SpectralError;

/// Uniform tensor grid on the torus `[0, 2π)^d`.
///
/// Flat indices are row-major with axis 0 (the `x₁` direction) slowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusGrid {
    dim: usize,
    n: usize,
}

impl TorusGrid {
    /// `dim` must be 2 or 3 and `n` a power of two no smaller than 8.
    pub fn new(dim: usize, n: usize) -> Result<Self, SpectralError> {
        if dim != 2 && dim != 3 {
            return Err(SpectralError::Dimension(dim));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(SpectralError::Resolution(n));
        }
        Ok(Self { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of nodes, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Quadrature weight of a single node, `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Measure of the torus, `(2π)^d`.
    pub fn volume(&self) -> f64 {
        (2.0 * PI).powi(self.dim as i32)
    }

    /// Signed wavenumber stored at FFT index `index`; the Nyquist index maps to `+n/2`.
    pub fn wavenumber(&self, index: usize) -> i64 {
        signed_wavenumber(index, self.n)
    }

    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        let n = self.n;
        match self.dim {
            2 => [flat / n, flat % n, 0],
            _ => [flat / (n * n), (flat / n) % n, flat % n],
        }
    }

    pub fn flat_index(&self, idx: [usize; 3]) -> usize {
        let n = self.n;
        match self.dim {
            2 => idx[0] * n + idx[1],
            _ => (idx[0] * n + idx[1]) * n + idx[2],
        }
    }

    /// Signed wavevector of a flat spectral index (unused axes are zero).
    pub fn mode(&self, flat: usize) -> [i64; 3] {
        let idx = self.multi_index(flat);
        let mut k = [0i64; 3];
        for a in 0..self.dim {
            k[a] = self.wavenumber(idx[a]);
        }
        k
    }

    /// Flat index holding wavevector `k` (components taken modulo `n`).
    pub fn index_of(&self, k: &[i64]) -> usize {
        let n = self.n as i64;
        let mut idx = [0usize; 3];
        for a in 0..self.dim {
            idx[a] = k[a].rem_euclid(n) as usize;
        }
        self.flat_index(idx)
    }

    /// True when any axis sits on the Nyquist index `n/2`.
    pub fn is_nyquist(&self, flat: usize) -> bool {
        let idx = self.multi_index(flat);
        idx[..self.dim].iter().any(|&i| i == self.n / 2)
    }

    /// Flat index of the wavevector `-k`.
    pub fn mirror(&self, flat: usize) -> usize {
        let idx = self.multi_index(flat);
        let mut m = [0usize; 3];
        for a in 0..self.dim {
            m[a] = (self.n - idx[a]) % self.n;
        }
        self.flat_index(m)
    }

    /// Physical coordinates of a node.
    pub fn node(&self, flat: usize) -> [f64; 3] {
        let idx = self.multi_index(flat);
        let h = self.spacing();
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = idx[a] as f64 * h;
        }
        x
    }

    /// Highest Littlewood-Paley index that can be nonzero on this lattice,
    /// `⌈log₂ n⌉ + 1`.
    pub fn max_level(&self) -> i32 {
        (self.n as f64).log2().ceil() as i32 + 1
    }
}

pub(crate) fn signed_wavenumber(index: usize, n: usize) -> i64 {
    if index <= n / 2 {
        index as i64
    } else {
        index as i64 - n as i64
    }
}

pub(crate) fn norm_sq(k: &[i64; 3]) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(TorusGrid::new(1, 16).is_err());
        assert!(TorusGrid::new(2, 4).is_err());
        assert!(TorusGrid::new(2, 24).is_err());
        assert!(TorusGrid::new(3, 8).is_ok());
    }

    #[test]
    fn index_round_trip() {
        let g = TorusGrid::new(3, 8).unwrap();
        for flat in 0..g.len() {
            assert_eq!(g.flat_index(g.multi_index(flat)), flat);
            let k = g.mode(flat);
            assert_eq!(g.index_of(&k), flat);
            let m = g.mirror(flat);
            let km = g.mode(m);
            if !g.is_nyquist(flat) {
                assert_eq!([-k[0], -k[1], -k[2]], km);
            }
        }
    }

    #[test]
    fn spacing_and_levels() {
        let g = TorusGrid::new(2, 64).unwrap();
        assert!((g.spacing() - 2.0 * PI / 64.0).abs() < 1e-15);
        assert_eq!(g.max_level(), 7);
        assert_eq!(g.wavenumber(32), 32);
        assert_eq!(g.wavenumber(33), -31);
    }
}
