use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::rheology::{FluidParams, ViscosityLaw};
use crate::spectral::{
    leray_project, to_grid, to_spectral, Complex64, GridField, SpectralField, TorusGrid, VelocityField,
};

const NU1: ViscosityLaw = ViscosityLaw::Constant { nu0: 1.0 };

fn grid(n: usize) -> TorusGrid {
    TorusGrid::new(2, n).unwrap()
}

fn newtonian(rho: GridField) -> StokesProblem {
    StokesProblem::new(rho, FluidParams::newtonian(2), NU1).unwrap()
}

fn power(rho: GridField, p: f64, delta: f64) -> StokesProblem {
    let prm = FluidParams::newtonian(2).with_p(p).with_delta(delta);
    StokesProblem::new(rho, prm, NU1).unwrap()
}

fn random_density(g: TorusGrid, rng: &mut ChaCha8Rng) -> GridField {
    let mut modes = vec![([0, 0, 0], Complex64::new(1.0, 0.0))];
    for k1 in -3i64..=3 {
        for k2 in 0i64..=3 {
            if k2 == 0 && k1 <= 0 {
                continue;
            }
            let c = Complex64::new(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1));
            modes.push(([k1, k2, 0], c));
        }
    }
    to_grid(&SpectralField::from_modes(g, &modes)).unwrap()
}

fn random_velocity(g: TorusGrid, rng: &mut ChaCha8Rng, kmax: i64) -> VelocityField {
    let comps: Vec<SpectralField> = (0..g.dim())
        .map(|_| {
            let mut modes = Vec::new();
            for k1 in -kmax..=kmax {
                for k2 in 0..=kmax {
                    if k2 == 0 && k1 <= 0 {
                        continue;
                    }
                    let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    modes.push(([k1, k2, 0], c / (1 + k1 * k1 + k2 * k2) as f64));
                }
            }
            SpectralField::from_modes(g, &modes)
        })
        .collect();
    leray_project(&comps)
}

fn sin_x1(g: TorusGrid) -> GridField {
    GridField::from_fn(g, |x| x[0].sin())
}

fn vertical_shear(g: TorusGrid, amp: f64) -> VelocityField {
    // (0, amp·sin x₁)
    let zero = SpectralField::zeros(g);
    let s = to_spectral(&GridField::from_fn(g, |x| amp * x[0].sin()));
    leray_project(&[zero, s])
}

#[test]
fn functional_examples() {
    let g = grid(32);
    let prob = newtonian(sin_x1(g));
    assert_eq!(functional_value(&prob, &VelocityField::zeros(g)), 0.0);
    // (1/2)∫|Du|² = (1/2)∫cos²x₁/2 = π²/2 and ∫ρg·u = ∫sin²x₁ = 2π²
    let v = functional_value(&prob, &vertical_shear(g, -1.0));
    assert!((v + 1.5 * PI * PI).abs() < 1e-12, "{v}");

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = random_velocity(g, &mut rng, 4);
    let flat = power(GridField::constant(g, 2.0), 3.0, 0.0);
    let nu_only = power(GridField::zeros(g), 3.0, 0.0);
    let a = functional_value(&flat, &u);
    assert!((a - functional_value(&nu_only, &u)).abs() < 1e-12 * a.abs());
    assert!(a > 0.0);
}

#[test]
fn gradient_examples() {
    let g = grid(32);
    let prob = newtonian(sin_x1(g));
    let (u, _) = solve_stokes(&prob).unwrap();
    assert!(functional_gradient(&prob, &u).unwrap().l2_norm() <= 1e-10);
    let flat = power(GridField::constant(g, 1.3), 3.0, 0.0);
    assert!(functional_gradient(&flat, &VelocityField::zeros(g)).unwrap().l2_norm() == 0.0);
    assert!(matches!(
        functional_gradient(&power(sin_x1(g), 1.5, 0.0), &u),
        Err(StokesError::SingularGradient(_))
    ));
}

#[test]
fn gradient_matches_central_differences() {
    let g = grid(16);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for &(p, delta) in &[(1.5, 1e-3), (2.0, 0.0), (3.0, 0.0), (4.0, 1e-2), (1.2, 0.1)] {
        let rho = random_density(g, &mut rng);
        let law = ViscosityLaw::BoundedPower { nu_star: 1.0, gamma: 0.5, nu_max: 2.0 };
        let prm = FluidParams::newtonian(2).with_p(p).with_delta(delta).with_viscosity_bounds(1.0, 2.0);
        let prob = StokesProblem::new(rho, prm, law).unwrap();
        for _ in 0..3 {
            let u = random_velocity(g, &mut rng, 5);
            let w = random_velocity(g, &mut rng, 5);
            let grad = functional_gradient(&prob, &u).unwrap();
            let exact = grad.l2_inner(&w);
            let eps = 1e-5;
            let fd = (functional_value(&prob, &u.add(&w.scaled(eps)))
                - functional_value(&prob, &u.sub(&w.scaled(eps))))
                / (2.0 * eps);
            let scale = grad.l2_norm() * w.l2_norm();
            assert!((exact - fd).abs() <= 1e-6 * scale, "p {p}: {exact} vs {fd}");
        }
    }
}

#[test]
fn constant_density_gives_rest() {
    let g = grid(16);
    for &p in &[1.5, 2.0, 3.0] {
        let (u, r) = solve_stokes(&power(GridField::constant(g, 1.0), p, 0.0)).unwrap();
        assert_eq!(u.l2_norm(), 0.0);
        assert!(r.converged);
        assert_eq!(r.energy_residual, 0.0);
    }
}

#[test]
fn newtonian_closed_form() {
    let g = grid(64);
    let (u, r) = solve_stokes(&newtonian(sin_x1(g))).unwrap();
    let exact = vertical_shear(g, -2.0);
    assert!(u.sub(&exact).l2_norm() <= 1e-12 * exact.l2_norm());
    assert!((r.value + 2.0 * PI * PI).abs() < 1e-10);
    assert!(u.divergence_defect() < 1e-14);
    assert_eq!(u.component(0).coeffs()[0], Complex64::new(0.0, 0.0));
}

// Independent 1D minimization of (1/p)∫2^{-p/2}|U'|^p + ∫ρU over
// span{cos mx, sin mx : 1 ≤ m ≤ M} by scaled gradient descent on a fine
// trapezoid rule.
fn shear_oracle(rho: impl Fn(f64) -> f64, p: f64, modes: usize) -> Vec<f64> {
    let q = 2048;
    let xs: Vec<f64> = (0..q).map(|i| 2.0 * PI * i as f64 / q as f64).collect();
    let rv: Vec<f64> = xs.iter().map(|&x| rho(x)).collect();
    let h = 2.0 * PI / q as f64;
    let basis = |m: usize, x: f64| -> (f64, f64) {
        // (φ, φ') for index m: cos for even, sin for odd
        let k = (m / 2 + 1) as f64;
        if m % 2 == 0 {
            ((k * x).cos(), -k * (k * x).sin())
        } else {
            ((k * x).sin(), k * (k * x).cos())
        }
    };
    let tab: Vec<Vec<(f64, f64)>> = (0..2 * modes).map(|m| xs.iter().map(|&x| basis(m, x)).collect()).collect();
    let energy = |c: &[f64]| -> (f64, Vec<f64>) {
        let mut e = 0.0;
        let mut grad = vec![0.0; c.len()];
        for i in 0..q {
            let (mut u, mut du) = (0.0, 0.0);
            for (m, cm) in c.iter().enumerate() {
                u += cm * tab[m][i].0;
                du += cm * tab[m][i].1;
            }
            let s = 2f64.powf(-p / 2.0);
            e += h * (s * du.abs().powf(p) / p + rv[i] * u);
            let flux = s * du.abs().powf(p - 2.0) * du;
            for (m, gm) in grad.iter_mut().enumerate() {
                *gm += h * (flux * tab[m][i].1 + rv[i] * tab[m][i].0);
            }
        }
        (e, grad)
    };
    let mut c = vec![0.0; 2 * modes];
    let mut step = 1.0;
    for _ in 0..20000 {
        let (e, gr) = energy(&c);
        let dir: Vec<f64> = gr.iter().enumerate().map(|(m, g)| -g / ((m / 2 + 1) as f64).powi(2)).collect();
        let gn: f64 = gr.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gn < 1e-12 {
            break;
        }
        loop {
            let trial: Vec<f64> = c.iter().zip(&dir).map(|(a, b)| a + step * b).collect();
            if energy(&trial).0 < e || step < 1e-14 {
                c = trial;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
    }
    (0..64).map(|i| {
        let x = 2.0 * PI * i as f64 / 64.0;
        c.iter().enumerate().map(|(m, cm)| cm * basis(m, x).0).sum()
    }).collect()
}

#[test]
fn power_law_shear_matches_reduced_problem() {
    // n = 16 carries modes |m| ≤ 7 per axis, the same space as the oracle
    let g = grid(16);
    let profile = |x: f64| x.sin() + 0.5 * (2.0 * x).cos();
    let rho = GridField::from_fn(g, |x| profile(x[1]));
    let prm = FluidParams::newtonian(2).with_p(3.0).with_gravity(vec![-1.0, 0.0]);
    let prob = StokesProblem::new(rho, prm, NU1).unwrap();
    let (u, _) = solve_stokes(&prob).unwrap();
    let fine = TorusGrid::new(2, 64).unwrap();
    let ux = crate::spectral::to_grid(&upsample(u.component(0), fine)).unwrap();
    let oracle = shear_oracle(profile, 3.0, 7);
    assert!(u.component(1).l2_norm() < 1e-12);
    let mut err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..64 {
        err = err.max((ux.values()[i] - oracle[i]).abs());
        scale = scale.max(oracle[i].abs());
    }
    assert!(err <= 2e-3 * scale, "err {err} scale {scale}");
}

fn upsample(f: &SpectralField, fine: TorusGrid) -> SpectralField {
    let g = f.grid();
    let mut out = SpectralField::zeros(fine);
    let modes: Vec<([i64; 3], Complex64)> = (0..g.len())
        .filter(|&i| !g.is_nyquist(i))
        .map(|i| (g.mode(i), f.coeffs()[i]))
        .collect();
    for (k, c) in modes {
        let j = fine.index_of(&k);
        out = out.add(&{
            let mut s = SpectralField::zeros(fine);
            let mut v = s.coeffs().to_vec();
            v[j] = c;
            s = SpectralField::new(fine, v).unwrap();
            s
        });
    }
    out
}

#[test]
fn penalized_linear_multiplier() {
    let g = grid(32);
    let rho = GridField::from_fn(g, |x| x[0].sin() + 0.5 * (3.0 * x[0] + 2.0 * x[1]).cos());
    let (n, k) = (50.0, 3);
    let prob = newtonian(rho.clone()).with_penalty(n, k).unwrap();
    let (u, r) = solve_stokes_penalized(&prob).unwrap();
    assert!(r.hk_ratio.unwrap().is_finite());
    let f = to_spectral(&rho);
    let pf = leray_project(&[SpectralField::zeros(g), f.scaled(-1.0)]);
    let exact = pf.multiply(|m| {
        let k2 = (m[0] * m[0] + m[1] * m[1]) as f64;
        if k2 == 0.0 {
            0.0
        } else {
            1.0 / (0.5 * k2 + k2.powi(k as i32) / n)
        }
    });
    assert!(u.sub(&exact).l2_norm() <= 1e-10 * exact.l2_norm());
    assert!(matches!(solve_stokes_penalized(&newtonian(rho)), Err(StokesError::MissingPenalty)));
}

#[test]
fn penalized_rest_state_and_order() {
    let g = grid(16);
    for &n in &[1.0, 1e3, 1e6] {
        let prob = power(GridField::constant(g, 3.0), 3.0, 0.0).with_penalty(n, 3).unwrap();
        assert_eq!(solve_stokes_penalized(&prob).unwrap().0.l2_norm(), 0.0);
    }
    assert!(matches!(newtonian(sin_x1(g)).with_penalty(1.0, 2), Err(StokesError::PenaltyOrder { .. })));
}

#[test]
fn penalty_ladder_converges() {
    let g = grid(16);
    let rho = GridField::from_fn(g, |x| 1.0 + 0.4 * x[0].sin() + 0.3 * (x[0] + x[1]).cos());
    let base = power(rho, 3.0, 0.0);
    let (u_inf, _) = solve_stokes(&base).unwrap();
    let mut prev = f64::INFINITY;
    for &n in &[1e2, 1e3, 1e4, 1e5, 1e6] {
        let (u, _) = solve_stokes_penalized(&base.clone().with_penalty(n, 3).unwrap()).unwrap();
        let dist = u.sub(&u_inf).l2_norm();
        assert!(dist < prev);
        prev = dist;
    }
    assert!(prev <= 1e-4 * u_inf.l2_norm(), "{prev}");
}

#[test]
fn energy_balance() {
    let g = grid(32);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for &p in &[1.5, 2.0, 3.0] {
        let prob = power(random_density(g, &mut rng), p, 0.0);
        let (u, r) = solve_stokes(&prob).unwrap();
        assert!(r.energy_residual <= 1e-6, "p {p}: {}", r.energy_residual);
        let terminal = prob.with_delta(*r.delta_schedule.last().unwrap());
        assert!((energy_balance_residual(&terminal, &u) - r.energy_residual).abs() < 1e-12);
        assert_eq!(energy_balance_residual(&prob, &VelocityField::zeros(g)), 0.0);
        let junk = random_velocity(g, &mut rng, 4);
        assert!(energy_balance_residual(&prob, &junk) > 0.01);
    }
}

#[test]
fn continuation_schedule() {
    let g = grid(16);
    let rho = GridField::from_fn(g, |x| 1.0 + 0.5 * x[0].sin());
    let (_, r) = solve_stokes(&power(rho.clone(), 1.5, 0.0)).unwrap();
    assert_eq!(r.delta_schedule, DELTA_LADDER.to_vec());
    let (_, r) = solve_stokes(&power(rho.clone(), 1.5, 0.05)).unwrap();
    assert_eq!(r.delta_schedule, vec![0.05]);
    let (_, r) = solve_stokes(&power(rho, 3.0, 0.0)).unwrap();
    assert_eq!(r.delta_schedule, vec![0.0]);
}

#[test]
fn iterates_descend() {
    let g = grid(32);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for &p in &[1.5, 3.0, 4.0] {
        let (_, r) = solve_stokes(&power(random_density(g, &mut rng), p, 0.0)).unwrap();
        for w in r.history.windows(2) {
            assert!(w[1] <= w[0] + 1e-12 * (1.0 + w[0].abs()));
        }
        assert!(r.grad_norm <= r.tolerance);
    }
}

#[test]
fn degenerate_viscosity_is_rejected() {
    let g = grid(16);
    let prm = FluidParams::newtonian(2).with_p(3.0).with_gamma(1.0).with_viscosity_bounds(1.0, 2.0);
    let law = ViscosityLaw::BoundedPower { nu_star: 1.0, gamma: 1.0, nu_max: 2.0 };
    let prob = StokesProblem::new(GridField::zeros(g), prm, law).unwrap();
    assert!(matches!(solve_stokes(&prob), Err(StokesError::DegenerateViscosity)));
    let pen = prob.with_penalty(1e3, 3).unwrap();
    assert_eq!(solve_stokes_penalized(&pen).unwrap().0.l2_norm(), 0.0);
}

#[test]
fn degenerate_law_with_vanishing_density() {
    // ν(ρ) = min(2, |ρ|) vanishes on the zero set of ρ = sin x₁
    let g = grid(32);
    let prm = FluidParams::newtonian(2).with_p(3.0).with_gamma(1.0).with_viscosity_bounds(1.0, 2.0);
    let law = ViscosityLaw::BoundedPower { nu_star: 1.0, gamma: 1.0, nu_max: 2.0 };
    let prob = StokesProblem::new(sin_x1(g), prm, law).unwrap();
    let (u, r) = solve_stokes(&prob).unwrap();
    assert!(r.energy_residual < 1e-6);
    assert!(u.l2_norm() > 0.1);
}

#[test]
fn iteration_cap_reports_partial_result() {
    let g = grid(16);
    let prob = power(GridField::from_fn(g, |x| 1.0 + 0.5 * x[0].sin() * x[1].cos()), 3.0, 0.0);
    let opts = SolverOptions { max_iter: 2, ..SolverOptions::default() };
    match solve_stokes_with(&prob, &opts) {
        Err(StokesError::MaxIterations(b)) => {
            assert!(!b.1.converged);
            assert_eq!(b.1.iterations, 2);
        }
        other => panic!("expected MaxIterations, got {other:?}"),
    }
}

#[test]
fn unique_minimizer_from_random_starts() {
    let g = grid(16);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for &p in &[1.5, 3.0] {
        let prob = power(random_density(g, &mut rng), p, 0.0);
        let a = solve_stokes_with(&prob, &SolverOptions::warm(random_velocity(g, &mut rng, 6))).unwrap().0;
        let b = solve_stokes_with(&prob, &SolverOptions::warm(random_velocity(g, &mut rng, 6).scaled(10.0))).unwrap().0;
        assert!(a.sub(&b).l2_norm() <= 1e-6 * a.l2_norm());
    }
}

#[test]
fn apriori_examples() {
    let g = grid(16);
    let prm = FluidParams::newtonian(2).with_gamma(1.0).with_sigma(2.0).with_viscosity_bounds(1.0, 1.0);
    let rest = StokesProblem::new(GridField::constant(g, 1.0), prm.clone(), NU1).unwrap();
    let (u, _) = solve_stokes(&rest).unwrap();
    let c = apriori_check(&rest, &u).unwrap();
    assert_eq!(c.lhs, 0.0);
    assert!(c.rhs_core > 0.0 && !c.vacuous);
    let holes = StokesProblem::new(sin_x1(g), prm.clone(), NU1).unwrap();
    let c = apriori_check(&holes, &u).unwrap();
    assert!(c.vacuous && c.rhs_core.is_infinite());
    // γ = 0: the reciprocal norm drops out
    let c = apriori_check(&StokesProblem::new(sin_x1(g), prm.with_gamma(0.0), NU1).unwrap(), &u).unwrap();
    assert!(!c.vacuous);
}

#[test]
fn monotonicity_examples() {
    let g = grid(16);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let prob = power(random_density(g, &mut rng), 3.0, 0.0);
    let (u, _) = solve_stokes(&prob).unwrap();
    let m = monotonicity_gap(&prob, &u, &u);
    assert_eq!(m.gap, 0.0);
    let newt = newtonian(random_density(g, &mut rng));
    let phi = random_velocity(g, &mut rng, 5);
    let m = monotonicity_gap(&newt, &u, &phi);
    // p = 2, ν ≡ 1: gap = ∫|Du − Dφ|² = (1/2)‖∇(u − φ)‖² for solenoidal fields
    let diff = u.sub(&phi);
    let grad_sq: f64 = diff
        .components()
        .iter()
        .map(|c| {
            (0..2)
                .map(|a| crate::spectral::partial_derivative(c, a).l2_norm().powi(2))
                .sum::<f64>()
        })
        .sum();
    assert!((m.gap - 0.5 * grad_sq).abs() <= 1e-12 * m.gap);
    for &p in &[1.5, 2.0, 3.0, 4.0] {
        let prob = power(random_density(g, &mut rng), p, 0.0);
        for _ in 0..10 {
            let a = random_velocity(g, &mut rng, 6);
            let b = random_velocity(g, &mut rng, 6);
            let m = monotonicity_gap(&prob, &a, &b);
            assert!(m.gap >= -1e-10 * m.scale);
        }
    }
}

#[test]
fn minty_examples() {
    let g = grid(16);
    let rho = GridField::from_fn(g, |x| 1.0 + 0.3 * x[0].sin());
    let w = GridField::from_fn(g, |x| (x[0] + x[1]).cos());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tests: Vec<VelocityField> = (0..3).map(|_| random_velocity(g, &mut rng, 3)).collect();
    let same = vec![rho.clone(); 3];
    let t = minty_sweep(&newtonian(rho.clone()), &same, &rho, &tests).unwrap();
    assert!(t.iter().flatten().all(|v| v.abs() < 1e-10));
    // linear map: pairing is exactly proportional to 1/n
    let seq: Vec<GridField> = [1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|n| rho.zip_map(&w, |a, b| a + b / n))
        .collect();
    let t = minty_sweep(&newtonian(rho.clone()), &seq, &rho, &tests).unwrap();
    for (i, row) in t.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let expect = t[0][j] / 2f64.powi(i as i32);
            assert!((v - expect).abs() <= 1e-8 * t[0][j].abs().max(1e-12));
        }
    }
}

#[test]
fn pressure_examples() {
    let g = grid(32);
    let flat = newtonian(GridField::constant(g, 2.0));
    let (u, _) = solve_stokes(&flat).unwrap();
    assert!(recover_pressure(&flat, &u).l2_norm() == 0.0);

    let prob = newtonian(GridField::from_fn(g, |x| (x[0] + x[1]).sin()));
    let (u, _) = solve_stokes(&prob).unwrap();
    let pi = recover_pressure(&prob, &u);
    let exact = to_spectral(&GridField::from_fn(g, |x| 0.5 * (x[0] + x[1]).cos()));
    assert!(pi.sub(&exact).l2_norm() < 1e-12);
    assert_eq!(pi.coeffs()[0], Complex64::new(0.0, 0.0));

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let prob = power(random_density(g, &mut rng), 3.0, 0.0);
    let (u, r) = solve_stokes(&prob).unwrap();
    let pi = recover_pressure(&prob, &u);
    assert!(pi.coeffs()[0].norm() == 0.0 && pi.is_hermitian());
    assert!(pressure_residual(&prob, &u, &pi) <= 10.0 * r.tolerance);
}

#[test]
fn homogeneity_of_solution() {
    let g = grid(32);
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let rho = random_density(g, &mut rng);
    for &p in &[2.0, 3.0] {
        let prm = FluidParams::newtonian(2).with_p(p);
        let base = StokesProblem::new(rho.clone(), prm.clone(), NU1).unwrap();
        let scaled = StokesProblem::new(rho.scaled(4.0), prm, NU1).unwrap();
        let (u1, _) = solve_stokes(&base).unwrap();
        let (u4, _) = solve_stokes(&scaled).unwrap();
        let a = apriori_check(&base, &u1).unwrap().lhs;
        let b = apriori_check(&scaled, &u4).unwrap().lhs;
        let expect = 4f64.powf(1.0 / (p - 1.0));
        assert!((b / a / expect - 1.0).abs() < 1e-6);
    }
}
