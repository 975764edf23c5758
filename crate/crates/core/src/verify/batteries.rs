use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rheology::{FluidParams, ViscosityLaw};
use crate::simulator::{classify_exponents, Regime};
use crate::spectral::{
    besov_norm, bernstein_ratio, lebesgue_norm, leray_project, lp_block, partial_derivative, strain_tensor, to_grid,
    to_spectral, GridField, SpectralField, TorusGrid, VelocityField,
};
use crate::stokes::{minty_sweep, monotonicity_gap, solve_stokes, StokesError, StokesProblem};
use crate::transport::{
    advect_step, evolve, renormalize, AdmissibleEta, AdvectionKind, AdvectionScheme, FrozenVelocity, NormRecorder,
    Observer,
};

use super::random::{band_limited, density, solenoidal};
use super::Check;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn grid(d: usize, n: usize) -> TorusGrid {
    TorusGrid::new(d, n).expect("valid test grid")
}

/// Littlewood-Paley reconstruction, Bernstein ratios, `B^0_{r,r}` against
/// `L^r`, and the embedding `B^1_{2,2} ⊂ B^{1/2}_{4,2}` on 100 random fields.
pub fn lp_battery(seed: u64) -> Vec<Check> {
    let g = grid(2, 64);
    let mut rng = rng(seed);
    let fields: Vec<SpectralField> = (0..100).map(|_| band_limited(g, &mut rng, 24, 1.0)).collect();

    let mut recon: f64 = 0.0;
    let (mut bern_lo, mut bern_hi) = (f64::INFINITY, 0.0f64);
    let (mut lp_lo, mut lp_hi) = (f64::INFINITY, 0.0f64);
    for f in &fields {
        let mut sum = SpectralField::zeros(g);
        for j in -1..=g.max_level() {
            sum = sum.add(&lp_block(f, j));
        }
        recon = recon.max(sum.sub(f).l2_norm() / f.l2_norm());
        for j in 0..=g.max_level() {
            if let Ok(r) = bernstein_ratio(f, j, 2.0) {
                bern_lo = bern_lo.min(r);
                bern_hi = bern_hi.max(r);
            }
        }
        let grid_f = to_grid(f).expect("Hermitian");
        for r in [1.5, 2.0, 4.0] {
            let ratio = besov_norm(f, 0.0, r, r).expect("valid exponents") / lebesgue_norm(&grid_f, r).expect("valid");
            lp_lo = lp_lo.min(ratio);
            lp_hi = lp_hi.max(ratio);
        }
    }

    let (s1, q1, q2, r) = (1.0, 2.0, 4.0, 2.0);
    let s2 = s1 - 2.0 * (1.0 / q1 - 1.0 / q2);
    let ratio = |f: &SpectralField| {
        besov_norm(f, s2, q2, r).expect("valid") / besov_norm(f, s1, q1, r).expect("valid")
    };
    let fitted = ratio(&band_limited(g, &mut rng, 24, 1.0));
    let worst = fields.iter().map(ratio).fold(0.0f64, f64::max);

    vec![
        Check::at_most("reconstruction sum_j Delta_j F = F (100 fields)", recon, 1e-12),
        Check::new(
            "Bernstein ratios in [1/4, 4]",
            bern_lo >= 0.25 && bern_hi <= 4.0,
            format!("range [{bern_lo:.3}, {bern_hi:.3}]"),
        ),
        Check::new(
            "B^0_{r,r} vs L^r within factor 4, r in {1.5, 2, 4}",
            lp_lo >= 0.25 && lp_hi <= 4.0,
            format!("range [{lp_lo:.3}, {lp_hi:.3}]"),
        ),
        Check::new(
            "embedding constant fitted on one field covers 100 within factor 4",
            worst <= 4.0 * fitted,
            format!("fitted {fitted:.4}, worst {worst:.4} (ratio {:.3})", worst / fitted),
        ),
    ]
}

/// Idempotence, solenoidality, gradient annihilation and orthogonality of
/// the Leray projection in 2D and 3D.
pub fn leray_battery(seed: u64) -> Vec<Check> {
    let mut rng = rng(seed);
    let mut checks = Vec::new();
    for (d, n) in [(2, 32), (3, 16)] {
        let g = grid(d, n);
        let (mut div, mut idem, mut grad, mut orth, mut trace) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for _ in 0..20 {
            let raw: Vec<SpectralField> = (0..d).map(|_| band_limited(g, &mut rng, 6, 1.0)).collect();
            let p = leray_project(&raw);
            div = div.max(p.divergence_defect());
            let pp = leray_project(p.components());
            idem = idem.max(pp.sub(&p).l2_norm() / p.l2_norm());
            let phi = band_limited(g, &mut rng, 6, 1.0);
            let grads: Vec<SpectralField> = (0..d).map(|a| partial_derivative(&phi, a)).collect();
            let gnorm = grads.iter().map(|c| c.l2_norm().powi(2)).sum::<f64>().sqrt();
            grad = grad.max(leray_project(&grads).l2_norm() / gnorm);
            let inner: f64 = (0..d).map(|a| p.component(a).l2_inner(&raw[a].sub(p.component(a)))).sum();
            let raw_sq: f64 = raw.iter().map(|c| c.l2_norm().powi(2)).sum();
            orth = orth.max(inner.abs() / raw_sq);
            let tr = strain_tensor(&p).trace();
            trace = trace.max(lebesgue_norm(&tr, f64::INFINITY).expect("valid"));
        }
        checks.push(Check::at_most(format!("{d}D divergence defect"), div, 1e-12));
        checks.push(Check::at_most(format!("{d}D P(P f) = P f"), idem, 1e-14));
        checks.push(Check::at_most(format!("{d}D P(grad phi) = 0"), grad, 1e-14));
        checks.push(Check::at_most(format!("{d}D <P f, f - P f> = 0"), orth, 1e-12));
        checks.push(Check::at_most(format!("{d}D strain trace"), trace, 1e-10));
    }
    checks
}

fn varying_law_problem(rho: GridField, p: f64) -> StokesProblem {
    let params = FluidParams::newtonian(rho.grid().dim()).with_p(p).with_gamma(1.0).with_viscosity_bounds(0.5, 2.0);
    let law = ViscosityLaw::bounded_power(&params);
    StokesProblem::new(rho, params, law).expect("valid battery problem")
}

/// Relative energy-balance residual at convergence for 20 random
/// band-limited densities per `p ∈ {1.5, 2, 3}`.
pub fn energy_battery(seed: u64) -> Vec<Check> {
    let g = grid(2, 32);
    let mut rng = rng(seed);
    [1.5, 2.0, 3.0]
        .iter()
        .map(|&p| {
            let name = format!("energy balance p = {p} (20 densities)");
            let mut worst: f64 = 0.0;
            for _ in 0..20 {
                let prob = varying_law_problem(density(g, &mut rng, 4, 1.0, 0.5), p);
                match solve_stokes(&prob) {
                    Ok((_, report)) => worst = worst.max(report.energy_residual),
                    Err(e) => return Check::failed(name, e),
                }
            }
            Check::at_most(name, worst, 1e-6)
        })
        .collect()
}

/// 1000 `(ρ, φ)` pairs: 100 densities cycling through `p ∈ {1.5, 2, 3, 4}`,
/// each with 10 test fields (half of them close to the solution).
pub fn monotonicity_battery(seed: u64) -> Vec<Check> {
    let g = grid(2, 16);
    let mut rng = rng(seed);
    let ps = [1.5, 2.0, 3.0, 4.0];
    let mut worst = f64::INFINITY;
    let mut pairs = 0;
    for i in 0..100 {
        let prob = varying_law_problem(density(g, &mut rng, 3, 1.0, 0.5), ps[i % 4]);
        let u = match solve_stokes(&prob) {
            Ok((u, _)) => u,
            Err(e) => return vec![Check::failed("monotonicity gaps", e)],
        };
        for j in 0..10 {
            let noise = solenoidal(g, &mut rng, 6);
            let phi = if j % 2 == 0 {
                noise.scaled(rng.gen_range(0.1..10.0))
            } else {
                u.add(&noise.scaled(1e-3))
            };
            let m = monotonicity_gap(&prob, &u, &phi);
            worst = worst.min(if m.scale > 0.0 { m.gap / m.scale } else { 0.0 });
            pairs += 1;
        }
    }
    vec![Check::new(
        format!("monotonicity gap >= -1e-10 * scale ({pairs} pairs)"),
        worst >= -1e-10,
        format!("min gap/scale {worst:.3e}"),
    )]
}

/// Amplitude of the perturbation `w`; keeps every `ρ_n` in `[0.3, 1.7]`.
pub const MINTY_PERTURBATION: f64 = 0.2;

/// Pairings `⟨Ψ(ρ + w/n) − Ψ(ρ), φ_j⟩` for `n = 2^0, …, 2^{levels−1}` (rows)
/// and five seeded solenoidal `φ_j` (columns), on `16²` with `ν ≡ 1`,
/// `ρ = 1 + 0.3 sin x₁ + 0.2 cos x₂` and `w = 0.2 cos(x₁ + x₂)`.
pub fn minty_table(p: f64, levels: u32, seed: u64) -> Result<Vec<Vec<f64>>, StokesError> {
    let g = grid(2, 16);
    let mut rng = rng(seed);
    let rho = GridField::from_fn(g, |x| 1.0 + 0.3 * x[0].sin() + 0.2 * x[1].cos());
    let w = GridField::from_fn(g, |x| MINTY_PERTURBATION * (x[0] + x[1]).cos());
    let tests: Vec<VelocityField> = (0..5).map(|_| solenoidal(g, &mut rng, 3)).collect();
    let seq: Vec<GridField> = (0..levels)
        .map(|i| {
            let n = 2f64.powi(i as i32);
            rho.zip_map(&w, |a, b| a + b / n)
        })
        .collect();
    let params = FluidParams::newtonian(2).with_p(p);
    let template = StokesProblem::new(rho.clone(), params, ViscosityLaw::Constant { nu0: 1.0 })?;
    minty_sweep(&template, &seq, &rho, &tests)
}

const MINTY_LEVELS: u32 = 13;

/// Pairing magnitudes decrease in `n` and reach `1e−3` of the first entry
/// by `n = 4096`, for `p ∈ {2, 3}`.
pub fn minty_battery(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    for p in [2.0, 3.0] {
        let table = match minty_table(p, MINTY_LEVELS, seed) {
            Ok(t) => t,
            Err(e) => {
                checks.push(Check::failed(format!("Minty pairings p = {p}"), e));
                continue;
            }
        };
        let cols = table[0].len();
        let monotone = (0..cols).all(|j| table.windows(2).all(|w| w[1][j].abs() < w[0][j].abs()));
        let worst = (0..cols)
            .map(|j| table.last().expect("nonempty table")[j].abs() / table[0][j].abs())
            .fold(0.0f64, f64::max);
        checks.push(Check::new(
            format!("Minty pairings p = {p} decrease for n = 1 .. 4096"),
            monotone,
            format!("{cols} test fields"),
        ));
        checks.push(Check::at_most(format!("Minty pairings p = {p}: |last| / |first| at n = 4096"), worst, 1e-3));
    }
    checks
}

fn cellular_flow(g: TorusGrid) -> VelocityField {
    let psi = to_spectral(&GridField::from_fn(g, |x| x[0].sin() * x[1].sin() + 0.5 * (x[0] + 2.0 * x[1]).cos()));
    leray_project(&[partial_derivative(&psi, 1), partial_derivative(&psi, 0).scaled(-1.0)])
}

fn cfl_scheme(kind: AdvectionKind, g: TorusGrid, u: &VelocityField) -> AdvectionScheme {
    AdvectionScheme::new(kind, 0.5 * g.spacing() / u.max_speed(), 0.5).expect("valid scheme")
}

struct Bounds {
    lo: f64,
    hi: f64,
    excess: f64,
}

impl Observer for Bounds {
    fn observe(&mut self, _t: f64, rho: &GridField) {
        self.excess = self.excess.max(self.lo - rho.min()).max(rho.max() - self.hi);
    }
}

fn dual_path(n: usize, datum: &dyn Fn(TorusGrid) -> GridField, eta: &AdmissibleEta) -> f64 {
    let g = grid(2, n);
    let u = cellular_flow(g);
    let rho = datum(g);
    let sch = cfl_scheme(AdvectionKind::SemiLagrangian, g, &u);
    let mut a = rho.clone();
    let mut b = renormalize(&rho, eta);
    for _ in 0..10 {
        a = advect_step(&a, &u, &sch).expect("CFL respected");
        b = advect_step(&b, &u, &sch).expect("CFL respected");
    }
    lebesgue_norm(&renormalize(&a, eta).zip_map(&b, |x, y| x - y), 1.0).expect("valid")
}

/// Transport invariants in a frozen cellular flow with a random smooth datum.
pub fn transport_battery(seed: u64) -> Vec<Check> {
    let mut rng = rng(seed);
    let modes: Vec<([i64; 3], crate::spectral::Complex64)> = (1..=2)
        .flat_map(|k1| (0..=2).map(move |k2| [k1 as i64, k2 as i64, 0]))
        .map(|k| (k, crate::spectral::Complex64::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2))))
        .collect();
    let datum = move |g: TorusGrid| {
        let f = to_grid(&SpectralField::from_modes(g, &modes)).expect("Hermitian");
        f.map(|v| 1.0 + v)
    };
    let mut checks = Vec::new();

    let g = grid(2, 128);
    let u = cellular_flow(g);
    let rho = datum(g);
    let exps = [1.2, 1.5, 2.0, 4.0, f64::INFINITY];
    let mut rec = NormRecorder::new(&exps);
    let sch = cfl_scheme(AdvectionKind::SpectralRk4, g, &u);
    let out = evolve(&rho, &mut FrozenVelocity(u.clone()), 1.0, &sch, &mut [&mut rec]).expect("CFL respected");
    let mass = (out.rho.integral() - rho.integral()).abs() / rho.integral().abs();
    checks.push(Check::at_most("mass (spectral RK4, 128^2, T = 1)", mass, 1e-12));
    for (q, drift) in exps.iter().zip(rec.max_relative_drift()) {
        checks.push(Check::at_most(format!("L^{q} drift (spectral RK4, 128^2, T = 1)"), drift, 1e-3));
    }

    let g64 = grid(2, 64);
    let u64 = cellular_flow(g64);
    let rho64 = datum(g64);
    let sch = cfl_scheme(AdvectionKind::SpectralRk4, g64, &u64);
    let fw = evolve(&rho64, &mut FrozenVelocity(u64.clone()), 1.0, &sch, &mut []).expect("CFL respected");
    let bw = evolve(&fw.rho, &mut FrozenVelocity(u64.scaled(-1.0)), 1.0, &sch, &mut []).expect("CFL respected");
    let rev = lebesgue_norm(&bw.rho.zip_map(&rho64, |a, b| a - b), 2.0).expect("valid")
        / lebesgue_norm(&rho64, 2.0).expect("valid");
    checks.push(Check::at_most("time reversal (spectral RK4, 64^2)", rev, 1e-4));

    let sch = cfl_scheme(AdvectionKind::SemiLagrangian, g64, &u64);
    let mut bounds = Bounds { lo: rho64.min(), hi: rho64.max(), excess: 0.0 };
    let range = bounds.hi - bounds.lo;
    let sl = evolve(&rho64, &mut FrozenVelocity(u64), 1.0, &sch, &mut [&mut bounds]).expect("CFL respected");
    let sl_mass = (sl.rho.integral() - rho64.integral()).abs() / rho64.integral().abs();
    checks.push(Check::at_most("mass (semi-Lagrangian, 64^2)", sl_mass, 1e-12));
    checks.push(Check::at_most("min/max overshoot / range (semi-Lagrangian)", bounds.excess / range, 1e-3));

    let clamp = AdmissibleEta::smooth_clamp(1.2).expect("k > 0");
    let (c1, c2) = (dual_path(64, &datum, &clamp), dual_path(128, &datum, &clamp));
    checks.push(Check::new(
        "renormalization discrepancy halves under refinement",
        c2 <= 0.5 * c1,
        format!("64^2: {c1:.3e}, 128^2: {c2:.3e}"),
    ));
    let atan = AdmissibleEta::atan_scaled(1.0).expect("scale > 0");
    checks.push(Check::at_most(
        "renormalization commutes (semi-Lagrangian, atan, 1024^2, 10 steps, L^1)",
        dual_path(1024, &datum, &atan),
        1e-6,
    ));
    checks
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentRow {
    pub d: usize,
    pub p: f64,
    pub q: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub expected: Regime,
}

/// Hand-classified parameter sets, including `q₀ = 2d/(d+2)` for the
/// Newtonian fluid in 2D and 3D.
pub fn exponent_table() -> Vec<ExponentRow> {
    use Regime::*;
    let inf = f64::INFINITY;
    let row = |d, p, q, gamma, sigma, expected| ExponentRow { d, p, q, gamma, sigma, expected };
    vec![
        row(3, 2.0, 1.2, 0.0, inf, Critical),
        row(2, 2.0, 1.0, 0.0, inf, Critical),
        row(2, 2.0, 1.5, 0.0, inf, SubCritical),
        row(3, 2.0, 1.5, 0.0, inf, SubCritical),
        row(3, 2.0, 1.1, 0.0, inf, Inadmissible),
        row(2, 1.1, 1.9, 2.0, 1.0, Inadmissible),
        row(3, 3.0, 1.5, 0.0, inf, SubCritical),
        row(3, 1.5, 1.5, 0.0, inf, Critical),
        row(2, 1.5, 1.5, 1.0, 2.0, Inadmissible),
        row(2, 4.0, 1.2, 2.0, 4.0, SubCritical),
        // Q = 14/33 + 10/11 − 1/3 = 1 with q below q₀ = 6/5
        row(3, 33.0 / 14.0, 1.1, 0.0, inf, Inadmissible),
        row(2, 2.0, 4.0 / 3.0, 1.0, 2.0, Critical),
    ]
}

pub fn exponent_battery() -> Vec<Check> {
    exponent_table()
        .into_iter()
        .map(|r| {
            let params = FluidParams::newtonian(r.d).with_p(r.p).with_q(r.q).with_gamma(r.gamma).with_sigma(r.sigma);
            let c = classify_exponents(&params);
            Check::new(
                format!("d = {}, p = {:.4}, q = {:.4}, gamma = {}, sigma = {}", r.d, r.p, r.q, r.gamma, r.sigma),
                c.regime == r.expected,
                format!("Q = {:.6}: {} (expected {})", c.value, c.regime, r.expected),
            )
        })
        .collect()
}
