use std::fmt;

use crate::rheology::FluidParams;

/// Where a parameter set sits relative to the integrability condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    SubCritical,
    Critical,
    Inadmissible,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::SubCritical => "SubCritical",
            Regime::Critical => "Critical",
            Regime::Inadmissible => "Inadmissible",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentClass {
    pub regime: Regime,
    /// `Q = (1/p)(1 + γ/σ) + 1/q − 1/d`.
    pub value: f64,
    /// `q ≥ 2d/(d+2)`.
    pub q_above_q0: bool,
}

const CRITICAL_TOL: f64 = 1e-12;

/// `2d/(d+2)`.
pub fn critical_q0(d: usize) -> f64 {
    2.0 * d as f64 / (d as f64 + 2.0)
}

pub fn classify_exponents(params: &FluidParams) -> ExponentClass {
    let d = params.d as f64;
    let value = 1.0 / params.beta() + 1.0 / params.q - 1.0 / d;
    let q_above_q0 = params.q >= critical_q0(params.d) - CRITICAL_TOL;
    let regime = if (value - 1.0).abs() <= CRITICAL_TOL {
        if q_above_q0 {
            Regime::Critical
        } else {
            Regime::Inadmissible
        }
    } else if value < 1.0 {
        Regime::SubCritical
    } else {
        Regime::Inadmissible
    };
    ExponentClass { regime, value, q_above_q0 }
}
