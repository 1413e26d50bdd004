//! Acceptance criteria 1-9. Each test prints one PASS/FAIL line to stderr
//! (written directly, so it shows even when output capture is on).

use std::io::Write;
use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relaybeam::harness::{
    run_sweep, run_sweep_with_workers, sample_instance, write_csv, BudgetKind, ChannelVariances, ExperimentRow,
    ExperimentSpec,
};
use relaybeam::individual::{quartic_coeffs, select_root, solve_source_only, MagnitudeProblem};
use relaybeam::model::signal::residual_scale;
use relaybeam::model::snr::threshold_bound;
use relaybeam::model::{
    alpha_for_threshold, relay_snr, simulate_noise_residual, strongest_relay, DerivedModel,
    Diagnostics, SignalRealization,
};
use relaybeam::oracle::{
    empirical_snr, golden_section, oracle_individual_grid, oracle_total, power_iteration_eigenvalue,
    snr_standard_error,
};
use relaybeam::rng::complex_normal;
use relaybeam::{solve_individual_with_alpha, solve_total_with_alpha, Instance, Tolerances};

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "criterion {n} [{name}]: {verdict} ({detail})");
}

fn instance(rng: &mut ChaCha8Rng, m: usize) -> Instance {
    let var = ChannelVariances::default();
    loop {
        let seed = rng.random();
        if let Ok(inst) = sample_instance(m, &var, 1.0, seed, 0, 0) {
            return inst;
        }
    }
}

fn alpha_from_random_gamma(rng: &mut ChaCha8Rng, inst: &Instance, p1: f64) -> (f64, f64) {
    let bound = threshold_bound(inst, p1).unwrap();
    let gamma = bound * rng.random_range(0.02..0.98);
    (gamma, alpha_for_threshold(inst, p1, gamma).unwrap())
}

#[test]
fn criterion_1_total_power_optimality() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let (mut worst_gap, mut worst_eig, mut failures) = (f64::INFINITY, 0.0f64, 0);
    for k in 0..1000 {
        let m = 1 + k % 8;
        let inst = instance(&mut rng, m);
        let p1 = rng.random_range(0.5..10.0);
        let p_tot = rng.random_range(0.5..6.0);
        let (_, alpha) = alpha_from_random_gamma(&mut rng, &inst, p1);
        let rep = oracle_total(&inst, p1, alpha, p_tot, 400, k as u64).unwrap();
        worst_gap = worst_gap.min(rep.gap);
        let sol = solve_total_with_alpha(&inst, p1, alpha, p_tot).unwrap();
        let Diagnostics::Total(d) = &sol.diagnostics else { panic!("total diagnostics expected") };
        let derived = DerivedModel::new(&inst, p1, alpha, None).unwrap();
        let eig = power_iteration_eigenvalue(&derived, p_tot, 1000, 1e-15, k as u64).unwrap();
        let rel = (eig.eigenvalue - d.rayleigh_value).abs() / eig.eigenvalue;
        worst_eig = worst_eig.max(rel);
        if !rep.analytic_wins(1e-6) || rel > 1e-10 {
            failures += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failures == 0 && secs < 30.0;
    report(
        1,
        "total-power optimality",
        pass,
        &format!("failures {failures}/1000, min gap {worst_gap:e}, max eigen rel diff {worst_eig:e}, {secs:.1} s"),
    );
    assert!(pass);
}

#[test]
fn criterion_2_individual_optimality_small_scale() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    let tol = Tolerances::default();
    let (mut worst_gap, mut failures, mut cases) = (f64::INFINITY, 0, 0);
    while cases < 200 {
        let m = 1 + cases % 3;
        let inst = instance(&mut rng, m);
        let p1 = rng.random_range(0.5..10.0);
        let alpha = rng.random_range(0.1..0.95);
        let p_s = 5.0;
        let free = solve_individual_with_alpha(&inst, p1, alpha, p_s, &vec![1e6; m], &tol).unwrap();
        if free.relay_powers.iter().all(|&p| p <= 1e-9) {
            continue;
        }
        let p_i: Vec<f64> = free.relay_powers.iter().map(|&p| p * rng.random_range(0.05..0.95)).collect();
        let sol = solve_individual_with_alpha(&inst, p1, alpha, p_s, &p_i, &tol).unwrap();
        let Diagnostics::Individual(d) = &sol.diagnostics else { panic!("individual diagnostics expected") };
        if d.clamped.is_empty() {
            continue;
        }
        let rep = oracle_individual_grid(&inst, p1, alpha, p_s, &p_i, 1e-3, &tol).unwrap();
        worst_gap = worst_gap.min(rep.gap);
        if !rep.analytic_wins(1e-4) {
            failures += 1;
        }
        cases += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failures == 0 && secs < 300.0;
    report(
        2,
        "individual-budget optimality",
        pass,
        &format!("failures {failures}/200, min gap {worst_gap:e}, {secs:.1} s"),
    );
    assert!(pass);
}

#[test]
fn criterion_3_closed_form_and_quartic_agree() {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3003);
    let (mut worst, mut failures) = (0.0f64, 0);
    for _ in 0..1000 {
        let p = MagnitudeProblem::from_parameters(
            rng.random_range(0.05..3.0f64),
            rng.random_range(0.05..3.0),
            rng.random_range(0.05..10.0),
            rng.random_range(0.01..5.0),
            0.0,
            1.0,
        );
        let closed = solve_source_only(&p).unwrap().r_star;
        let root = select_root(&quartic_coeffs(&p), &p, &tol).unwrap().r;
        let diff = (closed - root).abs();
        worst = worst.max(diff);
        if diff > 1e-10 {
            failures += 1;
        }
    }
    let ex = MagnitudeProblem::from_parameters(1.0f64, 1.0, 1.0, 1.0, 0.0, 1.0);
    let r = solve_source_only(&ex).unwrap().r_star;
    let obj = ex.objective(r, &tol).unwrap();
    let (gr, gv) = golden_section(|x| ex.objective(x, &tol).unwrap_or(f64::NEG_INFINITY), 0.0, ex.radius_limit(), 1e-9)
        .unwrap();
    let example_ok = (r - 0.2f64.sqrt()).abs() < 1e-12
        && (obj - 1.5).abs() < 1e-12
        && (gr - r).abs() < 1e-6
        && (gv - 1.5).abs() < 1e-10;
    let pass = failures == 0 && example_ok;
    report(
        3,
        "closed form vs quartic",
        pass,
        &format!("failures {failures}/1000, max diff {worst:e}; example r* = {r}, objective {obj}, golden ({gr}, {gv})"),
    );
    assert!(pass);
}

#[test]
fn criterion_4_artificial_noise_cancels() {
    let mut rng = ChaCha8Rng::seed_from_u64(4004);
    let (mut worst, mut failures) = (0.0f64, 0);
    for k in 0..1000 {
        let m = k % 11;
        let inst = if m == 0 {
            Instance::new(complex_normal(&mut rng, 0.25) + 0.1, vec![], vec![], 1.0).unwrap()
        } else {
            instance(&mut rng, m)
        };
        let w: Vec<Complex<f64>> = (0..=m)
            .map(|_| {
                let v = rng.random_range(0.01..10.0);
                complex_normal(&mut rng, v)
            })
            .collect();
        let alpha = rng.random_range(0.0..1.0);
        let p1 = rng.random_range(0.1..10.0);
        let real = SignalRealization {
            x: complex_normal(&mut rng, 1.0),
            u: complex_normal(&mut rng, 1.0),
            z: (0..=m).map(|_| complex_normal(&mut rng, 1.0)).collect(),
            z_d2: complex_normal(&mut rng, 1.0),
        };
        let res = simulate_noise_residual(&inst, p1, alpha, &w, &real).norm();
        let scale = residual_scale(&inst, p1, alpha, &w) * real.u.norm();
        let rel = if scale > 0.0 { res / scale } else { res };
        worst = worst.max(rel);
        if rel > 1e-12 {
            failures += 1;
        }
    }
    let pass = failures == 0;
    report(4, "artificial-noise cancellation", pass, &format!("failures {failures}/1000, max relative residual {worst:e}"));
    assert!(pass);
}

#[test]
fn criterion_5_threshold_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(5005);
    let (mut worst, mut failures) = (0.0f64, 0);
    let mut checked = Vec::new();
    for k in 0..1000 {
        let m = 1 + k % 8;
        let inst = instance(&mut rng, m);
        let p1 = rng.random_range(0.5..10.0);
        let (gamma, alpha) = alpha_from_random_gamma(&mut rng, &inst, p1);
        let e = strongest_relay(&inst).unwrap();
        let rel = (relay_snr(&inst, p1, alpha, e) - gamma).abs() / gamma;
        worst = worst.max(rel);
        let below = (0..m).all(|i| relay_snr(&inst, p1, alpha, i) <= gamma * (1.0 + 1e-12));
        if rel > 1e-12 || !below {
            failures += 1;
        }
        if k < 8 {
            checked.push((inst, p1, alpha));
        }
    }
    let n = 1_000_000;
    let (mut mc_fail, mut mc_checks, mut worst_z) = (0, 0, 0.0f64);
    for (k, (inst, p1, alpha)) in checked.iter().enumerate() {
        let sol = solve_total_with_alpha(inst, *p1, *alpha, 2.0).unwrap();
        let emp = empirical_snr(inst, *p1, *alpha, &sol.w, n, 50 + k as u64).unwrap();
        for i in 0..inst.relays() {
            let want = relay_snr(inst, *p1, *alpha, i);
            let z = (emp.relay_snr[i] - want).abs() / snr_standard_error(want, n);
            worst_z = worst_z.max(z);
            mc_checks += 1;
            if z > 3.0 {
                mc_fail += 1;
            }
        }
    }
    let pass = failures == 0 && mc_fail == 0;
    report(
        5,
        "threshold exactness",
        pass,
        &format!(
            "failures {failures}/1000, max relative error {worst:e}; simulated relay SNR outside 3 sigma {mc_fail}/{mc_checks}, max {worst_z:.2} sigma"
        ),
    );
    assert!(pass);
}

fn nondecreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] >= w[0])
}

fn series(rows: &[ExperimentRow], keep: impl Fn(&ExperimentRow) -> bool) -> Vec<f64> {
    rows.iter().filter(|r| keep(r)).map(|r| r.mean_c_d).collect()
}

#[test]
fn criterion_6_first_phase_power_and_alpha_trends() {
    let start = Instant::now();
    let spec = ExperimentSpec::first_phase_power_sweep(6006);
    let rows = run_sweep::<f64>(&spec, &Tolerances::default()).unwrap();
    let mut bad = Vec::new();
    for kind in [BudgetKind::Total, BudgetKind::Individual] {
        for &a in &[0.3, 0.6, 0.9] {
            if !nondecreasing(&series(&rows, |r| r.budget_mode == kind && r.alpha == a)) {
                bad.push(format!("{} alpha={a} along P1", kind.as_str()));
            }
        }
        for &p1 in &spec.p1_values {
            if !nondecreasing(&series(&rows, |r| r.budget_mode == kind && r.p1 == p1)) {
                bad.push(format!("{} P1={p1} along alpha", kind.as_str()));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = bad.is_empty() && secs < 120.0;
    report(6, "first-phase power and alpha trends", pass, &format!("violations {bad:?}, {secs:.1} s"));
    assert!(pass);
}

#[test]
fn criterion_7_relay_count_trend() {
    let spec = ExperimentSpec::relay_count_sweep(7007);
    let rows = run_sweep::<f64>(&spec, &Tolerances::default()).unwrap();
    let mut bad = Vec::new();
    for kind in [BudgetKind::Total, BudgetKind::Individual] {
        for &p1 in &spec.p1_values {
            let s = series(&rows, |r| r.budget_mode == kind && r.p1 == p1);
            if s.len() != 9 || !nondecreasing(&s) {
                bad.push(format!("{} P1={p1}: {s:?}", kind.as_str()));
            }
        }
    }
    let pass = bad.is_empty();
    report(7, "relay-count trend", pass, &format!("violations {bad:?}"));
    assert!(pass);
}

#[test]
fn criterion_8_budget_dominance() {
    let tol = Tolerances::default();
    let var = ChannelVariances::default();
    let (p_s, p_i) = (5.0, 0.1);
    let (mut total_cases, mut failures, mut worst) = (0, 0, f64::INFINITY);
    let grids = [
        ExperimentSpec::first_phase_power_sweep(8008),
        ExperimentSpec::relay_count_sweep(8008),
    ];
    for spec in &grids {
        for &m in &spec.m_values {
            for k in 0..spec.n_instances as u64 {
                let Ok(inst) = sample_instance::<f64>(m, &var, 1.0, spec.seed, k, 0) else { continue };
                for &p1 in &spec.p1_values {
                    for alpha in spec.alpha_axis() {
                        let t = solve_total_with_alpha(&inst, p1, alpha, p_s + m as f64 * p_i).unwrap();
                        let ind = solve_individual_with_alpha(&inst, p1, alpha, p_s, &vec![p_i; m], &tol).unwrap();
                        let margin = t.c_d - ind.c_d;
                        worst = worst.min(margin);
                        total_cases += 1;
                        if margin < -1e-9 {
                            failures += 1;
                        }
                    }
                }
            }
        }
    }
    let pass = failures == 0;
    report(
        8,
        "budget dominance",
        pass,
        &format!("failures {failures}/{total_cases}, smallest margin {worst:e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_9_sweep_csv_is_deterministic() {
    let spec = ExperimentSpec { n_instances: 20, ..ExperimentSpec::relay_count_sweep(9009) };
    let tol = Tolerances::default();
    let mut outputs = Vec::new();
    for workers in [1, 1, 3, 8] {
        let rows = run_sweep_with_workers::<f64>(&spec, &tol, workers).unwrap().rows;
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        outputs.push(buf);
    }
    let pass = outputs.windows(2).all(|w| w[0] == w[1]);
    report(9, "deterministic sweep CSV", pass, &format!("{} runs compared byte for byte", outputs.len()));
    assert!(pass);
}
