use std::fmt;
use std::sync::Arc;

use crate::spectral::GridField;

use super::TransportError;

type RealMap = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Bounded, strictly increasing renormalization map `η`.
#[derive(Clone)]
pub enum AdmissibleEta {
    /// `η_k(r) = r` on `[−k, k]`, then `±(k + t/(1 + t))` with `t = |r| − k`:
    /// `|η_k| < k + 1` and `0 < η_k' ≤ 1`.
    SmoothClamp { k: f64 },
    /// `s·atan(r/s)`.
    AtanScaled { scale: f64 },
    Custom { eta: RealMap, derivative: RealMap },
}

impl fmt::Debug for AdmissibleEta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SmoothClamp { k } => write!(f, "SmoothClamp {{ k: {k} }}"),
            Self::AtanScaled { scale } => write!(f, "AtanScaled {{ scale: {scale} }}"),
            Self::Custom { .. } => write!(f, "Custom"),
        }
    }
}

impl AdmissibleEta {
    pub fn smooth_clamp(k: f64) -> Result<Self, TransportError> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(TransportError::NotAdmissible(format!("clamp level must be positive, got {k}")));
        }
        Ok(Self::SmoothClamp { k })
    }

    pub fn atan_scaled(scale: f64) -> Result<Self, TransportError> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(TransportError::NotAdmissible(format!("scale must be positive, got {scale}")));
        }
        Ok(Self::AtanScaled { scale })
    }

    /// User map, accepted only if it passes [`AdmissibleEta::check`].
    pub fn custom(
        eta: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, TransportError> {
        let out = Self::Custom { eta: Arc::new(eta), derivative: Arc::new(derivative) };
        out.check()?;
        Ok(out)
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Self::SmoothClamp { k } => {
                let a = r.abs();
                if a <= *k {
                    r
                } else {
                    let t = a - k;
                    r.signum() * (k + t / (1.0 + t))
                }
            }
            Self::AtanScaled { scale } => scale * (r / scale).atan(),
            Self::Custom { eta, .. } => eta(r),
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match self {
            Self::SmoothClamp { k } => {
                let a = r.abs();
                if a <= *k {
                    1.0
                } else {
                    let t = a - k;
                    1.0 / ((1.0 + t) * (1.0 + t))
                }
            }
            Self::AtanScaled { scale } => {
                let s = r / scale;
                1.0 / (1.0 + s * s)
            }
            Self::Custom { derivative, .. } => derivative(r),
        }
    }

    /// Least upper bound of `|η|`.
    pub fn sup(&self) -> f64 {
        match self {
            Self::SmoothClamp { k } => k + 1.0,
            Self::AtanScaled { scale } => scale * std::f64::consts::FRAC_PI_2,
            Self::Custom { eta, .. } => sample_points().map(|r| eta(r).abs()).fold(0.0, f64::max),
        }
    }

    /// Samples `±10^e`, `e ∈ [−6, 6]`, and 0: `η` finite and bounded,
    /// `η' > 0`.
    pub fn check(&self) -> Result<(), TransportError> {
        for r in sample_points() {
            let v = self.eval(r);
            let dv = self.derivative(r);
            if !v.is_finite() || !dv.is_finite() {
                return Err(TransportError::NotAdmissible(format!("non-finite value at r = {r:e}")));
            }
            if !(dv > 0.0) {
                return Err(TransportError::NotAdmissible(format!("eta'({r:e}) = {dv} is not positive")));
            }
        }
        // boundedness: the far tail must not keep growing like r
        let far = self.eval(1e6).abs().max(self.eval(-1e6).abs());
        let near = self.eval(1e3).abs().max(self.eval(-1e3).abs());
        if far > 2.0 * near.max(1.0) && far > 1e3 {
            return Err(TransportError::NotAdmissible(format!("unbounded growth (|eta(1e6)| = {far:e})")));
        }
        Ok(())
    }
}

fn sample_points() -> impl Iterator<Item = f64> {
    (0..=1200).flat_map(|i| {
        let r = 10f64.powf(-6.0 + i as f64 / 100.0);
        [r, -r]
    })
    .chain(std::iter::once(0.0))
}

/// Pointwise `η(ρ_i)`.
pub fn renormalize(rho: &GridField, eta: &AdmissibleEta) -> GridField {
    rho.map(|r| eta.eval(r))
}
