//! Deterministic batteries behind `nnst verify <suite>`.

mod batteries;
pub mod random;

use std::fmt;
use std::str::FromStr;

pub use batteries::{
    energy_battery, exponent_battery, exponent_table, leray_battery, lp_battery, minty_battery, minty_table,
    monotonicity_battery, transport_battery, ExponentRow, MINTY_PERTURBATION,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lp,
    Leray,
    Energy,
    Monotonicity,
    Minty,
    Transport,
    Exponents,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Lp,
        Suite::Leray,
        Suite::Energy,
        Suite::Monotonicity,
        Suite::Minty,
        Suite::Transport,
        Suite::Exponents,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lp => "lp",
            Suite::Leray => "leray",
            Suite::Energy => "energy",
            Suite::Monotonicity => "monotonicity",
            Suite::Minty => "minty",
            Suite::Transport => "transport",
            Suite::Exponents => "exponents",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// One named pass/fail outcome with a human-readable measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }

    /// Passes when `value ≤ bound`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(name, value <= bound, format!("{value:.3e} <= {bound:.1e}"))
    }

    pub fn failed(name: impl Into<String>, error: impl fmt::Display) -> Self {
        Self::new(name, false, format!("error: {error}"))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    let checks = match suite {
        Suite::Lp => lp_battery(seed),
        Suite::Leray => leray_battery(seed),
        Suite::Energy => energy_battery(seed),
        Suite::Monotonicity => monotonicity_battery(seed),
        Suite::Minty => minty_battery(seed),
        Suite::Transport => transport_battery(seed),
        Suite::Exponents => exponent_battery(),
    };
    SuiteReport { suite, checks }
}
