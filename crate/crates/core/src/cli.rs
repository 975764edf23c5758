//! The `nnst` command line.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::io::{parse_config_with, read_snapshot_file, write_config, write_diagnostics, write_snapshot_file};
use crate::simulator::{
    classify_exponents, initial_density, run, smooth_density, InitialCondition, SimulationConfig, SimulationError,
};
use crate::spectral::{besov_norm, to_spectral};
use crate::stokes::{solve_stokes, StokesError, StokesReport};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "nnst", version, about = "Power-law Stokes-transport on the periodic torus")]
struct Cli {
    /// Output directory for `simulate`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Run configurations with inadmissible exponents.
    #[arg(long, global = true)]
    force: bool,
    /// Print only essential output.
    #[arg(long, global = true)]
    quiet: bool,
    /// Seed for randomized data (overrides the config file).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the coupled time loop, writing diagnostics.csv and snapshots.
    Simulate { config: PathBuf },
    /// One Stokes solve at the (smoothed) initial density.
    SolveStokes { config: PathBuf },
    /// Run an invariant battery: lp, leray, energy, monotonicity, minty,
    /// transport, exponents, or all.
    Verify { suite: String },
    /// Print the exponent class of a configuration.
    Classify { config: PathBuf },
    /// Besov norm of a snapshot.
    Besov {
        snapshot: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        r: f64,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

/// Runs the command line and returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("nnst: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Simulate { config } => simulate(cli, config),
        Command::SolveStokes { config } => solve(cli, config),
        Command::Verify { suite } => verify(cli, suite),
        Command::Classify { config } => classify(config),
        Command::Besov { snapshot, s, p, r } => besov(snapshot, *s, *p, *r),
    }
}

fn load_config(path: &Path, force: bool, seed: Option<u64>) -> Result<SimulationConfig, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| fail(EXIT_CONFIG, format!("cannot read {}: {e}", path.display())))?;
    let mut config = parse_config_with(&text, force)
        .map_err(|e| fail(EXIT_CONFIG, format!("{}:\n{e}", path.display())))?;
    if let InitialCondition::Snapshot { path: snap } = &mut config.init {
        if snap.is_relative() {
            if let Some(dir) = path.parent() {
                *snap = dir.join(&*snap);
            }
        }
    }
    if let Some(seed) = seed {
        config.seed = seed;
    }
    Ok(config)
}

fn simulation_failure(e: SimulationError) -> Failure {
    match e {
        SimulationError::Stokes(_) | SimulationError::Transport(_) | SimulationError::NonConvergence { .. } => {
            fail(EXIT_SOLVER, e.to_string())
        }
        _ => fail(EXIT_CONFIG, e.to_string()),
    }
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| fail(EXIT_CONFIG, format!("cannot write {}: {e}", path.display())))
}

fn simulate(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let config = load_config(path, cli.force, cli.seed)?;
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("nnst_output"));
    fs::create_dir_all(&out).map_err(|e| fail(EXIT_CONFIG, format!("cannot create {}: {e}", out.display())))?;
    if let Some(text) = write_config(&config) {
        write_file(&out.join("config.cfg"), text)?;
    }
    let result = match run(&config) {
        Ok(result) => result,
        Err(SimulationError::NonConvergence { time, partial, source }) => {
            write_file(&out.join("diagnostics.csv"), write_diagnostics(&partial))?;
            return Err(fail(
                EXIT_SOLVER,
                format!("Stokes solve did not converge at t = {time}: {source} (partial diagnostics written)"),
            ));
        }
        Err(e) => return Err(simulation_failure(e)),
    };
    write_file(&out.join("diagnostics.csv"), write_diagnostics(&result.series))?;
    for (i, snap) in result.snapshots.iter().enumerate() {
        let file = out.join(format!("snapshot_{i:05}.nnst"));
        write_snapshot_file(snap, &file).map_err(|e| fail(EXIT_CONFIG, format!("{}: {e}", file.display())))?;
    }
    let tag = if result.forced { " (forced: exponents are inadmissible)" } else { "" };
    write_file(
        &out.join("run.txt"),
        format!("class = {}\nQ = {}\nforced = {}\n", result.class.regime, result.class.value, result.forced),
    )?;
    if !cli.quiet {
        println!(
            "{} records, {} snapshots in {}; class {}{tag}",
            result.series.records.len(),
            result.snapshots.len(),
            out.display(),
            result.class.regime
        );
    } else if result.forced {
        eprintln!("nnst: warning: ran with inadmissible exponents");
    }
    Ok(())
}

fn print_report(report: &StokesReport) {
    println!("converged        {}", report.converged);
    println!("iterations       {}", report.iterations);
    println!("value            {:.16e}", report.value);
    println!("grad_norm        {:.6e} (tolerance {:.6e})", report.grad_norm, report.tolerance);
    println!("dissipation      {:.16e}", report.dissipation);
    println!("work             {:.16e}", report.work);
    println!("energy_residual  {:.6e}", report.energy_residual);
    let ladder: Vec<String> = report.delta_schedule.iter().map(|d| format!("{d:e}")).collect();
    println!("delta_schedule   [{}]", ladder.join(", "));
    if let Some(r) = report.hk_ratio {
        println!("hk_ratio         {r:.6e}");
    }
}

fn solve(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let config = load_config(path, cli.force, cli.seed)?;
    crate::simulator::validate(&config).map_err(simulation_failure)?;
    let rho = smooth_density(&config, &initial_density(&config).map_err(simulation_failure)?);
    let prob = crate::simulator::problem_for(&config, rho).map_err(simulation_failure)?;
    match solve_stokes(&prob) {
        Ok((u, report)) => {
            if cli.quiet {
                println!("{:.16e}", report.value);
            } else {
                print_report(&report);
                println!("velocity_l2      {:.16e}", u.l2_norm());
            }
            Ok(())
        }
        Err(StokesError::MaxIterations(partial)) => {
            if !cli.quiet {
                print_report(&partial.1);
            }
            Err(fail(EXIT_SOLVER, format!("solver did not converge after {} iterations", partial.1.iterations)))
        }
        Err(e) => Err(fail(EXIT_SOLVER, e.to_string())),
    }
}

fn verify(cli: &Cli, name: &str) -> Result<(), Failure> {
    let suites: Vec<Suite> = if name == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![name.parse().map_err(|e: String| fail(EXIT_USAGE, e))?]
    };
    let seed = cli.seed.unwrap_or(0);
    let mut failed = Vec::new();
    for suite in suites {
        let report = run_suite(suite, seed);
        for check in &report.checks {
            if !cli.quiet || !check.passed {
                println!("[{suite}] {check}");
            }
        }
        if !report.passed() {
            failed.push(suite.name());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(fail(EXIT_VERIFY, format!("verification failed: {}", failed.join(", "))))
    }
}

fn classify(path: &Path) -> Result<(), Failure> {
    let config = load_config(path, true, None)?;
    let class = classify_exponents(&config.params);
    println!("{}", class.regime);
    println!("Q = {:.12}", class.value);
    println!("q >= 2d/(d+2): {}", class.q_above_q0);
    Ok(())
}

fn besov(path: &Path, s: f64, p: f64, r: f64) -> Result<(), Failure> {
    let snap = read_snapshot_file(path).map_err(|e| fail(EXIT_CONFIG, format!("{}: {e}", path.display())))?;
    let norm = besov_norm(&to_spectral(&snap.rho), s, p, r).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    println!("{norm:.16e}");
    Ok(())
}
