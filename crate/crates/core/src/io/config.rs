//! Line-oriented `key = value` configuration files.
//!
//! Keys are written either fully dotted (`fluid.p = 3`) or inside a
//! `[fluid]` section (`p = 3`). Keys outside any section are taken as
//! written, so `seed` must precede the first section header. `#` starts a
//! comment when it opens a line or follows whitespace.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use crate::rheology::{FluidParams, ViscosityLaw};
use crate::simulator::{classify_exponents, InitialCondition, Regime, SimulationConfig};
use crate::spectral::TorusGrid;
use crate::stokes::Penalty;
use crate::transport::{AdvectionKind, AdvectionScheme};

pub const CONFIG_KEYS: [&str; 22] = [
    "grid.d",
    "grid.n",
    "fluid.p",
    "fluid.q",
    "fluid.sigma",
    "fluid.gamma",
    "fluid.nu_star",
    "fluid.nu_max",
    "fluid.delta",
    "fluid.g",
    "viscosity.kind",
    "init.kind",
    "init.params",
    "smoothing.n",
    "scheme.kind",
    "scheme.cfl",
    "time.T",
    "time.output_every",
    "penalty.N",
    "penalty.k",
    "seed",
    "force",
];

/// Keys that have no default.
pub const REQUIRED_KEYS: [&str; 6] = ["grid.d", "grid.n", "fluid.p", "fluid.q", "init.kind", "time.T"];

/// Penalty order used when only `penalty.N` is given.
pub const DEFAULT_PENALTY_ORDER: u32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigIssue {
    UnknownKey { line: usize, key: String },
    BadValue { line: Option<usize>, key: String, value: String, reason: String },
    MissingRequired { key: String },
    InadmissibleExponents { value: f64 },
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigIssue::UnknownKey { line, key } => write!(f, "line {line}: unknown key `{key}`"),
            ConfigIssue::BadValue { line: Some(line), key, value, reason } => {
                write!(f, "line {line}: bad value `{value}` for `{key}`: {reason}")
            }
            ConfigIssue::BadValue { line: None, key, value, reason } => {
                write!(f, "bad value `{value}` for `{key}`: {reason}")
            }
            ConfigIssue::MissingRequired { key } => write!(f, "missing required key `{key}`"),
            ConfigIssue::InadmissibleExponents { value } => write!(
                f,
                "inadmissible exponents: (1/p)(1 + gamma/sigma) + 1/q - 1/d = {value:.6} (use --force to run anyway)"
            ),
        }
    }
}

/// Every problem found in a configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub issues: Vec<ConfigIssue>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

/// Decimal with optional sign, fraction and exponent.
fn is_decimal(s: &str) -> bool {
    let s = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    let mantissa_ok = digits(int) && digits(frac) && !(int.is_empty() && frac.is_empty());
    let exponent_ok = exponent.map_or(true, |e| {
        let e = e.strip_prefix(['+', '-']).unwrap_or(e);
        !e.is_empty() && digits(e)
    });
    mantissa_ok && exponent_ok
}

struct Reader {
    entries: HashMap<String, (usize, String)>,
    issues: Vec<ConfigIssue>,
}

impl Reader {
    fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|e| e.0)
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.1.as_str())
    }

    fn bad(&mut self, key: &str, reason: impl Into<String>) {
        let value = self.raw(key).unwrap_or("").to_string();
        self.issues.push(ConfigIssue::BadValue { line: self.line(key), key: key.into(), value, reason: reason.into() });
    }

    fn require(&mut self, key: &str) -> bool {
        if self.entries.contains_key(key) {
            true
        } else {
            self.issues.push(ConfigIssue::MissingRequired { key: key.into() });
            false
        }
    }

    fn real(&mut self, key: &str) -> Option<f64> {
        let raw = self.raw(key)?.to_string();
        if is_decimal(&raw) {
            raw.parse().ok()
        } else {
            self.bad(key, "expected a decimal number");
            None
        }
    }

    fn real_or(&mut self, key: &str, default: f64) -> Option<f64> {
        if self.entries.contains_key(key) {
            self.real(key)
        } else {
            Some(default)
        }
    }

    fn int(&mut self, key: &str) -> Option<i64> {
        let raw = self.raw(key)?.to_string();
        match raw.parse() {
            Ok(v) => Some(v),
            Err(_) => {
                self.bad(key, "expected an integer");
                None
            }
        }
    }

    fn reals(&mut self, key: &str) -> Option<Vec<f64>> {
        let raw = self.raw(key)?.to_string();
        let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
        if parts.iter().all(|p| is_decimal(p)) {
            Some(parts.iter().map(|p| p.parse().expect("validated decimal")).collect())
        } else {
            self.bad(key, "expected comma-separated decimal numbers");
            None
        }
    }

    fn check(&mut self, key: &str, value: Option<f64>, ok: impl Fn(f64) -> bool, reason: &str) {
        if let Some(v) = value {
            if !ok(v) && self.entries.contains_key(key) {
                self.bad(key, reason);
            }
        }
    }
}

fn tokenize(text: &str) -> (HashMap<String, (usize, String)>, Vec<ConfigIssue>) {
    let mut entries: HashMap<String, (usize, String)> = HashMap::new();
    let mut issues = Vec::new();
    let mut section = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|c| c.strip_suffix(']')) {
            section = name.trim().to_string();
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            issues.push(ConfigIssue::BadValue {
                line: Some(line),
                key: String::new(),
                value: content.to_string(),
                reason: "expected `key = value` or `[section]`".into(),
            });
            continue;
        };
        let key = key.trim();
        let full = if section.is_empty() { key.to_string() } else { format!("{section}.{key}") };
        let value = value.trim().to_string();
        if !CONFIG_KEYS.contains(&full.as_str()) {
            issues.push(ConfigIssue::UnknownKey { line, key: full });
            continue;
        }
        if let Some((first, _)) = entries.get(&full) {
            issues.push(ConfigIssue::BadValue {
                line: Some(line),
                key: full.clone(),
                value,
                reason: format!("duplicate key, first set on line {first}"),
            });
            continue;
        }
        entries.insert(full, (line, value));
    }
    (entries, issues)
}

fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'#' && (i == 0 || bytes[i - 1].is_ascii_whitespace()) {
            return &line[..i];
        }
    }
    line
}

/// [`parse_config_with`] without `force`.
pub fn parse_config(text: &str) -> Result<SimulationConfig, ConfigError> {
    parse_config_with(text, false)
}

/// Parses and validates a configuration; inadmissible exponents are accepted
/// when `force` is set (or the file sets `force = true`).
pub fn parse_config_with(text: &str, force: bool) -> Result<SimulationConfig, ConfigError> {
    let (entries, issues) = tokenize(text);
    let mut r = Reader { entries, issues };
    for key in REQUIRED_KEYS {
        r.require(key);
    }

    let d = r.int("grid.d");
    let d = match d {
        Some(d @ (2 | 3)) => Some(d as usize),
        Some(_) => {
            r.bad("grid.d", "dimension must be 2 or 3");
            None
        }
        None => None,
    };
    let grid = match (d, r.int("grid.n")) {
        (Some(d), Some(n)) if n > 0 => match TorusGrid::new(d, n as usize) {
            Ok(g) => Some(g),
            Err(e) => {
                r.bad("grid.n", e.to_string());
                None
            }
        },
        (_, Some(_)) => {
            r.bad("grid.n", "points per axis must be positive");
            None
        }
        _ => None,
    };

    let p = r.real("fluid.p");
    let q = r.real("fluid.q");
    let sigma = match r.raw("fluid.sigma") {
        Some("inf") => Some(f64::INFINITY),
        _ => r.real_or("fluid.sigma", f64::INFINITY),
    };
    let gamma = r.real_or("fluid.gamma", 0.0);
    let nu_star = r.real_or("fluid.nu_star", 1.0);
    let nu_max = match nu_star {
        Some(ns) => r.real_or("fluid.nu_max", ns),
        None => r.real("fluid.nu_max"),
    };
    let delta = r.real_or("fluid.delta", 0.0);
    r.check("fluid.p", p, |v| v > 1.0 && v.is_finite(), "need p > 1");
    r.check("fluid.q", q, |v| v > 1.0 && v < 2.0, "need 1 < q < 2");
    r.check("fluid.sigma", sigma, |v| v >= 1.0, "need sigma >= 1");
    r.check("fluid.gamma", gamma, |v| v >= 0.0, "need gamma >= 0");
    r.check("fluid.nu_star", nu_star, |v| v > 0.0, "need nu_star > 0");
    if let (Some(ns), Some(nm)) = (nu_star, nu_max) {
        r.check("fluid.nu_max", Some(nm), |v| v >= ns, "need nu_max >= nu_star");
    }
    r.check("fluid.delta", delta, |v| v >= 0.0, "need delta >= 0");
    let g = match (r.entries.contains_key("fluid.g"), d) {
        (true, d) => {
            let g = r.reals("fluid.g");
            match (g, d) {
                (Some(g), Some(d)) if g.len() != d => {
                    r.bad("fluid.g", format!("need {d} components"));
                    None
                }
                (g, _) => g,
            }
        }
        (false, Some(d)) => {
            let mut g = vec![0.0; d];
            g[d - 1] = -1.0;
            Some(g)
        }
        (false, None) => None,
    };

    let law_kind = r.raw("viscosity.kind").unwrap_or("bounded_power").to_string();
    if !["constant", "power", "bounded_power"].contains(&law_kind.as_str()) {
        r.bad("viscosity.kind", "expected constant, power or bounded_power");
    }

    let init = parse_init(&mut r);

    let smoothing = match r.int("smoothing.n") {
        Some(n) if n < 0 => {
            r.bad("smoothing.n", "need n >= 0");
            None
        }
        Some(n) => Some(n as i32),
        None => None,
    };

    let kind = match r.raw("scheme.kind").unwrap_or("spectral_rk4") {
        "spectral_rk4" => Some(AdvectionKind::SpectralRk4),
        "semi_lagrangian" => Some(AdvectionKind::SemiLagrangian),
        _ => {
            r.bad("scheme.kind", "expected spectral_rk4 or semi_lagrangian");
            None
        }
    };
    let cfl = r.real_or("scheme.cfl", 0.5);
    r.check("scheme.cfl", cfl, |v| v > 0.0 && v <= 1.0, "need 0 < cfl <= 1");

    let t_final = r.real("time.T");
    r.check("time.T", t_final, |v| v >= 0.0 && v.is_finite(), "need T >= 0");
    let output_every = match t_final {
        Some(t) => r.real_or("time.output_every", if t > 0.0 { t } else { 1.0 }),
        None => r.real("time.output_every"),
    };
    r.check("time.output_every", output_every, |v| v > 0.0 && v.is_finite(), "need output_every > 0");

    let pen_n = r.real("penalty.N");
    r.check("penalty.N", pen_n, |v| v > 0.0 && v.is_finite(), "need N > 0");
    let pen_k = r.int("penalty.k");
    let penalty = match (pen_n, pen_k, r.entries.contains_key("penalty.k")) {
        (Some(n), k, _) => {
            let k = k.unwrap_or(DEFAULT_PENALTY_ORDER as i64);
            let min = d.map_or(1.0, |d| 1.0 + d as f64 / 2.0);
            if (k as f64) <= min {
                r.bad("penalty.k", format!("need k > {min}"));
                None
            } else {
                Some(Penalty { n, k: k as u32 })
            }
        }
        (None, _, true) if !r.entries.contains_key("penalty.N") => {
            r.issues.push(ConfigIssue::MissingRequired { key: "penalty.N".into() });
            None
        }
        _ => None,
    };

    let seed = match r.raw("seed").map(str::to_string) {
        None => Some(0),
        Some(raw) => match raw.parse::<u64>() {
            Ok(s) => Some(s),
            Err(_) => {
                r.bad("seed", "expected an integer in [0, 2^64)");
                None
            }
        },
    };
    let force = match r.raw("force") {
        None => force,
        Some("true") => true,
        Some("false") => force,
        Some(_) => {
            r.bad("force", "expected true or false");
            force
        }
    };

    if !r.issues.is_empty() {
        return Err(ConfigError { issues: r.issues });
    }
    let (Some(grid), Some(p), Some(q), Some(sigma), Some(gamma), Some(nu_star), Some(nu_max), Some(delta)) =
        (grid, p, q, sigma, gamma, nu_star, nu_max, delta)
    else {
        unreachable!("missing values are reported as issues")
    };
    let params = FluidParams {
        d: grid.dim(),
        p,
        q,
        sigma,
        gamma,
        nu_star,
        nu_max,
        g: g.expect("reported as issue"),
        delta,
    };
    let law = match law_kind.as_str() {
        "constant" => ViscosityLaw::Constant { nu0: nu_star },
        "power" => ViscosityLaw::Power { nu_star, gamma },
        _ => ViscosityLaw::bounded_power(&params),
    };
    if let Err(e) = law.validate(&params) {
        r.bad("viscosity.kind", e.to_string());
    }
    let class = classify_exponents(&params);
    if class.regime == Regime::Inadmissible && !force {
        r.issues.push(ConfigIssue::InadmissibleExponents { value: class.value });
    }
    if !r.issues.is_empty() {
        return Err(ConfigError { issues: r.issues });
    }
    let t_final = t_final.expect("checked");
    Ok(SimulationConfig {
        grid,
        params,
        law,
        init: init.expect("checked"),
        smoothing,
        scheme: AdvectionScheme::new(kind.expect("checked"), 1.0, cfl.expect("checked")).expect("checked"),
        t_final,
        output_every: output_every.expect("checked"),
        penalty,
        seed: seed.expect("checked"),
        force,
    })
}

fn parse_init(r: &mut Reader) -> Option<InitialCondition> {
    let kind = r.raw("init.kind")?.to_string();
    if kind == "snapshot" {
        return match r.raw("init.params") {
            Some(path) if !path.is_empty() => Some(InitialCondition::Snapshot { path: PathBuf::from(path) }),
            _ => {
                r.issues.push(ConfigIssue::MissingRequired { key: "init.params".into() });
                None
            }
        };
    }
    let defaults: &[f64] = match kind.as_str() {
        "constant" => &[1.0],
        "sine" => &[0.0, 1.0],
        "stratified" => &[1.0, 0.5],
        "smooth" => &[1.0, 0.4, 0.3],
        "rough" => &[1.0, 0.5],
        _ => {
            r.bad("init.kind", "expected constant, sine, stratified, smooth, rough or snapshot");
            return None;
        }
    };
    let values = if r.entries.contains_key("init.params") { r.reals("init.params")? } else { defaults.to_vec() };
    if values.len() != defaults.len() {
        r.bad("init.params", format!("`{kind}` takes {} parameters", defaults.len()));
        return None;
    }
    Some(match kind.as_str() {
        "constant" => InitialCondition::Constant { value: values[0] },
        "sine" => InitialCondition::Sine { mean: values[0], amp: values[1] },
        "stratified" => InitialCondition::Stratified { mean: values[0], amp: values[1] },
        "smooth" => InitialCondition::Smooth { mean: values[0], a: values[1], b: values[2] },
        _ => InitialCondition::Rough { mean: values[0], amp: values[1] },
    })
}

/// Serializes a configuration so that [`parse_config`] reproduces it.
/// Laws other than the three named kinds cannot be written.
pub fn write_config(config: &SimulationConfig) -> Option<String> {
    use super::csv::format_real as real;
    let prm = &config.params;
    let law = match &config.law {
        ViscosityLaw::Constant { nu0 } if *nu0 == prm.nu_star => "constant",
        ViscosityLaw::Power { nu_star, gamma } if *nu_star == prm.nu_star && *gamma == prm.gamma => "power",
        l if *l == ViscosityLaw::bounded_power(prm) => "bounded_power",
        _ => return None,
    };
    let join = |v: &[f64]| v.iter().map(|&x| real(x)).collect::<Vec<_>>().join(", ");
    let (kind, params) = match &config.init {
        InitialCondition::Constant { value } => ("constant", join(&[*value])),
        InitialCondition::Sine { mean, amp } => ("sine", join(&[*mean, *amp])),
        InitialCondition::Stratified { mean, amp } => ("stratified", join(&[*mean, *amp])),
        InitialCondition::Smooth { mean, a, b } => ("smooth", join(&[*mean, *a, *b])),
        InitialCondition::Rough { mean, amp } => ("rough", join(&[*mean, *amp])),
        InitialCondition::Snapshot { path } => ("snapshot", path.to_str()?.to_string()),
    };
    let mut out = format!("seed = {}\n", config.seed);
    if config.force {
        out.push_str("force = true\n");
    }
    out.push_str(&format!("\n[grid]\nd = {}\nn = {}\n", config.grid.dim(), config.grid.n()));
    out.push_str(&format!(
        "\n[fluid]\np = {}\nq = {}\nsigma = {}\ngamma = {}\nnu_star = {}\nnu_max = {}\ndelta = {}\ng = {}\n",
        real(prm.p),
        real(prm.q),
        real(prm.sigma),
        real(prm.gamma),
        real(prm.nu_star),
        real(prm.nu_max),
        real(prm.delta),
        join(&prm.g)
    ));
    out.push_str(&format!("\n[viscosity]\nkind = {law}\n"));
    out.push_str(&format!("\n[init]\nkind = {kind}\nparams = {params}\n"));
    if let Some(n) = config.smoothing {
        out.push_str(&format!("\n[smoothing]\nn = {n}\n"));
    }
    let scheme = match config.scheme.kind {
        AdvectionKind::SpectralRk4 => "spectral_rk4",
        AdvectionKind::SemiLagrangian => "semi_lagrangian",
    };
    out.push_str(&format!("\n[scheme]\nkind = {scheme}\ncfl = {}\n", real(config.scheme.cfl_target)));
    out.push_str(&format!(
        "\n[time]\nT = {}\noutput_every = {}\n",
        real(config.t_final),
        real(config.output_every)
    ));
    if let Some(pen) = config.penalty {
        out.push_str(&format!("\n[penalty]\nN = {}\nk = {}\n", real(pen.n), pen.k));
    }
    Some(out)
}
