use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use stokes_transport::io::{parse_diagnostics, read_snapshot_file, write_snapshot, CSV_HEADER};

fn nnst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nnst")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const SMALL: &str = "[grid]\nd = 2\nn = 16\n[fluid]\np = 2\nq = 1.5\n[init]\nkind = rough\n\
                     [time]\nT = 0.2\noutput_every = 0.1\n";

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn classify_shipped_critical_config() {
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/critical_3d.cfg");
    let out = nnst(&["classify", cfg]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Critical"), "{}", stdout(&out));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&nnst(&["frobnicate"])), 1);
    assert_eq!(code(&nnst(&["verify", "no-such-suite"])), 1);
}

#[test]
fn bad_config_lists_every_issue() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "[grid]\nd = 2\nbogus = 1\n[fluid]\np = -1\n");
    let out = nnst(&["simulate", &cfg]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    for key in ["bogus", "grid.n", "fluid.p", "fluid.q", "init.kind", "time.T"] {
        assert!(err.contains(key), "missing {key} in:\n{err}");
    }
}

#[test]
fn inadmissible_exponents_need_force() {
    let dir = tempfile::tempdir().unwrap();
    let text = "[grid]\nd = 3\nn = 8\n[fluid]\np = 2\nq = 1.1\n[viscosity]\nkind = constant\n\
                [init]\nkind = smooth\n[time]\nT = 0\n";
    let cfg = write(dir.path(), "inad.cfg", text);
    assert_eq!(code(&nnst(&["solve-stokes", &cfg])), 2);
    assert_eq!(code(&nnst(&["solve-stokes", "--force", &cfg])), 0);
}

#[test]
fn vanishing_density_is_a_solver_failure() {
    let dir = tempfile::tempdir().unwrap();
    let text = "[grid]\nd = 2\nn = 16\n[fluid]\np = 2\nq = 1.5\ngamma = 1\n[viscosity]\nkind = power\n\
                [init]\nkind = constant\nparams = 0\n[time]\nT = 0\n";
    let cfg = write(dir.path(), "zero.cfg", text);
    let out = nnst(&["solve-stokes", &cfg]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_suite_exits_zero() {
    let out = nnst(&["verify", "monotonicity"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn simulate_writes_outputs_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", SMALL);
    let run = |name: &str, seed: &str| {
        let out_dir = dir.path().join(name);
        let out = nnst(&["simulate", "--quiet", "--seed", seed, "--out", out_dir.to_str().unwrap(), &cfg]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        out_dir
    };
    let a = run("a", "7");
    let b = run("b", "7");
    let c = run("c", "8");
    let csv = fs::read_to_string(a.join("diagnostics.csv")).unwrap();
    assert!(csv.starts_with(CSV_HEADER));
    let series = parse_diagnostics(&csv).unwrap();
    let times: Vec<f64> = series.records.iter().map(|r| r.t).collect();
    assert_eq!(times.len(), 3);
    assert!((times[2] - 0.2).abs() < 1e-12);
    assert_eq!(csv, fs::read_to_string(b.join("diagnostics.csv")).unwrap());
    assert_ne!(csv, fs::read_to_string(c.join("diagnostics.csv")).unwrap());

    let snap_path = a.join("snapshot_00002.nnst");
    let bytes = fs::read(&snap_path).unwrap();
    assert_eq!(bytes, fs::read(b.join("snapshot_00002.nnst")).unwrap());
    let snap = read_snapshot_file(&snap_path).unwrap();
    let mut again = Vec::new();
    write_snapshot(&snap, &mut again).unwrap();
    assert_eq!(again, bytes);
    assert!(a.join("config.cfg").exists() && a.join("run.txt").exists());

    let besov = nnst(&["besov", snap_path.to_str().unwrap(), "--s", "-1", "--p", "2", "--r", "2"]);
    assert_eq!(code(&besov), 0);
    let value: f64 = stdout(&besov).split_whitespace().last().unwrap().parse().unwrap();
    assert!(value.is_finite() && value > 0.0);

    // restart from the last snapshot, path relative to the config file
    fs::copy(&snap_path, dir.path().join("restart.nnst")).unwrap();
    let restart = SMALL.replace("kind = rough", "kind = snapshot\nparams = restart.nnst");
    let rcfg = write(dir.path(), "restart.cfg", &restart);
    let out = nnst(&["simulate", "--quiet", "--out", dir.path().join("r").to_str().unwrap(), &rcfg]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let first = read_snapshot_file(&dir.path().join("r/snapshot_00000.nnst")).unwrap();
    assert_eq!(first.rho.values(), snap.rho.values());
}
