use super::*;
use crate::rheology::ViscosityLaw;
use crate::simulator::{classify_exponents, InitialCondition, Regime};
use crate::transport::AdvectionKind;

const MINIMAL: &str = "\
[grid]
d = 2
n = 32

[fluid]
p = 3
q = 1.5

[init]
kind = smooth

[time]
T = 1
";

#[test]
fn minimal_file_uses_defaults() {
    let cfg = parse_config(MINIMAL).unwrap();
    let prm = &cfg.params;
    assert_eq!((cfg.grid.dim(), cfg.grid.n()), (2, 32));
    assert_eq!((prm.p, prm.q), (3.0, 1.5));
    assert!(prm.sigma.is_infinite());
    assert_eq!((prm.gamma, prm.nu_star, prm.nu_max, prm.delta), (0.0, 1.0, 1.0, 0.0));
    assert_eq!(prm.g, vec![0.0, -1.0]);
    assert_eq!(cfg.law, ViscosityLaw::BoundedPower { nu_star: 1.0, gamma: 0.0, nu_max: 1.0 });
    assert_eq!(cfg.init, InitialCondition::Smooth { mean: 1.0, a: 0.4, b: 0.3 });
    assert_eq!(cfg.smoothing, None);
    assert_eq!(cfg.scheme.kind, AdvectionKind::SpectralRk4);
    assert_eq!(cfg.scheme.cfl_target, 0.5);
    assert_eq!((cfg.t_final, cfg.output_every), (1.0, 1.0));
    assert_eq!(cfg.penalty, None);
    assert_eq!(cfg.seed, 0);
    assert!(!cfg.force);
}

#[test]
fn dotted_keys_and_comments() {
    let text = "seed = 9 # trailing\n# full line\ngrid.d = 3\ngrid.n = 8\nfluid.p = 2\nfluid.q = 1.2\nfluid.g = 0, 0.5, -2\ninit.kind = sine\ninit.params = 1, 2\ntime.T = 0\n";
    let cfg = parse_config(text).unwrap();
    assert_eq!(cfg.seed, 9);
    assert_eq!(cfg.params.g, vec![0.0, 0.5, -2.0]);
    assert_eq!(cfg.init, InitialCondition::Sine { mean: 1.0, amp: 2.0 });
    assert_eq!(cfg.output_every, 1.0);
}

#[test]
fn p_below_one_is_bad_value() {
    let err = parse_config(&MINIMAL.replace("p = 3", "p = 0.9")).unwrap_err();
    assert_eq!(err.issues.len(), 1);
    assert!(matches!(&err.issues[0], ConfigIssue::BadValue { line: Some(6), key, .. } if key == "fluid.p"));
}

#[test]
fn critical_3d_accepted() {
    let text = "[grid]\nd = 3\nn = 8\n[fluid]\nq = 1.2\np = 2\ngamma = 0\n[init]\nkind = constant\n[time]\nT = 0\n";
    let cfg = parse_config(text).unwrap();
    assert_eq!(classify_exponents(&cfg.params).regime, Regime::Critical);
}

#[test]
fn every_offending_line_is_listed() {
    let text = "[grid]\nd = 2\nn = 30\n[fluid]\np = abc\nqq = 1.5\nq = 1.5\nq = 1.6\ndelta = 1e\n[init]\nkind = blob\n";
    let err = parse_config(text).unwrap_err();
    let shown = err.to_string();
    assert!(err.issues.contains(&ConfigIssue::UnknownKey { line: 6, key: "fluid.qq".into() }));
    assert!(err.issues.contains(&ConfigIssue::MissingRequired { key: "time.T".into() }));
    for needle in ["line 3:", "line 5:", "line 8:", "line 9:", "line 11:", "`time.T`"] {
        assert!(shown.contains(needle), "{needle} not in\n{shown}");
    }
    assert_eq!(err.issues.len(), 7, "{shown}");
}

#[test]
fn numeric_syntax() {
    for good in ["2", "2.", ".5", "-1.5e-3", "+3E2"] {
        let t = MINIMAL.replace("T = 1", &format!("T = 1\noutput_every = {good}"));
        let r = parse_config(&t);
        let positive = !good.starts_with('-');
        assert_eq!(r.is_ok(), positive, "{good}");
    }
    for bad in ["0x10", "1e", "inf", "nan", "1_0", "", "."] {
        let t = MINIMAL.replace("T = 1", &format!("T = 1\noutput_every = {bad}"));
        assert!(parse_config(&t).is_err(), "{bad}");
    }
    assert!(parse_config(&MINIMAL.replace("q = 1.5", "q = 1.5\nsigma = inf")).is_ok());
}

#[test]
fn inadmissible_needs_force() {
    let text = MINIMAL.replace("p = 3", "p = 1.1\ngamma = 2\nsigma = 1\nnu_max = 3").replace("q = 1.5", "q = 1.9");
    let err = parse_config(&text).unwrap_err();
    assert!(matches!(err.issues[..], [ConfigIssue::InadmissibleExponents { .. }]));
    assert!(parse_config_with(&text, true).unwrap().force);
    assert!(parse_config(&format!("force = true\n{text}")).is_ok());
}

#[test]
fn penalty_defaults_and_errors() {
    let cfg = parse_config(&format!("{MINIMAL}[penalty]\nN = 1e4\n")).unwrap();
    assert_eq!(cfg.penalty.unwrap().k, DEFAULT_PENALTY_ORDER);
    let err = parse_config(&format!("{MINIMAL}[penalty]\nk = 4\n")).unwrap_err();
    assert_eq!(err.issues, vec![ConfigIssue::MissingRequired { key: "penalty.N".into() }]);
    assert!(parse_config(&format!("{MINIMAL}[penalty]\nN = 10\nk = 2\n")).is_err());
}

#[test]
fn snapshot_datum_takes_a_path() {
    let text = MINIMAL.replace("kind = smooth", "kind = snapshot\nparams = data/rho.nnst");
    let cfg = parse_config(&text).unwrap();
    assert_eq!(cfg.init, InitialCondition::Snapshot { path: "data/rho.nnst".into() });
    assert!(parse_config(&MINIMAL.replace("kind = smooth", "kind = snapshot")).is_err());
    assert!(parse_config(&MINIMAL.replace("kind = smooth", "kind = rough\nparams = 1")).is_err());
}

#[test]
fn write_then_parse_reproduces_config() {
    for text in [
        MINIMAL.to_string(),
        format!("seed = 4\n{MINIMAL}[smoothing]\nn = 3\n[scheme]\nkind = semi_lagrangian\ncfl = 0.3\n[penalty]\nN = 1e5\nk = 4\n"),
        MINIMAL.replace("q = 1.5", "q = 1.5\nsigma = 3\ngamma = 0.5\nnu_star = 0.2\nnu_max = 3\n[viscosity]\nkind = power"),
    ] {
        let cfg = parse_config(&text).unwrap();
        let written = write_config(&cfg).unwrap();
        let back = parse_config(&written).unwrap();
        assert_eq!(back.params, cfg.params);
        assert_eq!(back.law, cfg.law);
        assert_eq!(back.init, cfg.init);
        assert_eq!(back.smoothing, cfg.smoothing);
        assert_eq!(back.scheme, cfg.scheme);
        assert_eq!((back.t_final, back.output_every), (cfg.t_final, cfg.output_every));
        assert_eq!(back.penalty, cfg.penalty);
        assert_eq!(back.seed, cfg.seed);
        assert_eq!(write_config(&back).unwrap(), written);
    }
}

#[test]
fn shipped_configs_parse() {
    for text in [
        include_str!("../../configs/rough_sweep.cfg"),
        include_str!("../../configs/penalty_sweep.cfg"),
        include_str!("../../configs/critical_3d.cfg"),
        include_str!("../../configs/shear_thinning.cfg"),
    ] {
        parse_config(text).unwrap();
    }
}
