//! Self-checks that pit the analytic solvers against independent oracles.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::{sample_instance, ChannelVariances};
use crate::model::signal::residual_scale;
use crate::model::{alpha_for_threshold, relay_snr, simulate_noise_residual, strongest_relay, DerivedModel, SignalRealization};
use crate::oracle::{empirical_snr, oracle_individual_grid, oracle_total, power_iteration_eigenvalue, snr_standard_error};
use crate::rng::{complex_normal, stream_rng, ORACLE_NAMESPACE};
use crate::tolerance::Tolerances;
use crate::total::solve_total_with_alpha;
use crate::individual::solve_individual_with_alpha;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Total,
    Individual,
    Signals,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "total" => Ok(Suite::Total),
            "individual" => Ok(Suite::Individual),
            "signals" => Ok(Suite::Signals),
            other => Err(Error::InvalidParams(format!("unknown suite `{other}`"))),
        }
    }
}

/// One failed check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseFailure {
    pub case: usize,
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    /// Largest amount by which an oracle beat the analytic value.
    pub worst_gap: f64,
    pub failures: Vec<CaseFailure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationConfig {
    pub seed: u64,
    pub cases: usize,
    pub tolerances: Tolerances,
}

impl ValidationConfig {
    pub fn new(seed: u64) -> Self {
        Self { seed, cases: 100, tolerances: Tolerances::default() }
    }
}

struct Collector {
    report: SuiteReport,
}

impl Collector {
    fn new(suite: Suite, cases: usize) -> Self {
        Self { report: SuiteReport { suite, cases, worst_gap: 0.0, failures: Vec::new() } }
    }

    fn check(&mut self, case: usize, ok: bool, check: &str, detail: impl FnOnce() -> String) {
        if !ok {
            self.report.failures.push(CaseFailure { case, check: check.into(), detail: detail() });
        }
    }

    fn gap(&mut self, g: f64) {
        self.report.worst_gap = self.report.worst_gap.max(-g);
    }
}

const VALIDATION_STREAM: u64 = 0x7661_6c69_6400_0000;

pub fn run_suite(suite: Suite, cfg: &ValidationConfig) -> Result<SuiteReport> {
    match suite {
        Suite::Total => total_suite(cfg),
        Suite::Individual => individual_suite(cfg),
        Suite::Signals => signals_suite(cfg),
    }
}

fn instance_for(cfg: &ValidationConfig, m: usize, case: usize) -> Result<crate::model::NetworkInstance<f64>> {
    let var = ChannelVariances::default();
    let mut last = None;
    for attempt in 0..100 {
        match sample_instance(m, &var, 1.0, cfg.seed ^ VALIDATION_STREAM, case as u64, attempt) {
            Ok(i) => return Ok(i),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or(Error::ResampleExhausted(100)))
}

/// Total-power solver against random search and power iteration.
fn total_suite(cfg: &ValidationConfig) -> Result<SuiteReport> {
    let mut col = Collector::new(Suite::Total, cfg.cases);
    for k in 0..cfg.cases {
        let m = 1 + k % 8;
        let inst = instance_for(cfg, m, k)?;
        let p1 = 1.0 + (k % 5) as f64;
        let p_tot = 2.0 + (k % 3) as f64;
        let bound = inst.h_sr()[strongest_relay(&inst)?].norm_sqr() * p1 / inst.sigma2();
        let alpha = alpha_for_threshold(&inst, p1, 0.5 * bound)?;
        let report = oracle_total(&inst, p1, alpha, p_tot, 2000, cfg.seed.wrapping_add(k as u64))?;
        col.gap(report.gap);
        col.check(k, report.analytic_wins(1e-6), "random search", || format!("{report:?}"));
        let sol = solve_total_with_alpha(&inst, p1, alpha, p_tot)?;
        let derived = DerivedModel::new(&inst, p1, alpha, None)?;
        let eig = power_iteration_eigenvalue(&derived, p_tot, 10_000, 1e-14, cfg.seed)?;
        let crate::model::Diagnostics::Total(d) = &sol.diagnostics else { unreachable!() };
        let rel = (eig.eigenvalue - d.rayleigh_value).abs() / eig.eigenvalue.abs();
        col.check(k, rel <= 1e-10, "eigenvalue", || format!("relative difference {rel:e}"));
    }
    Ok(col.report)
}

/// Per-node budget solver against a dense grid at M <= 3.
fn individual_suite(cfg: &ValidationConfig) -> Result<SuiteReport> {
    let mut col = Collector::new(Suite::Individual, cfg.cases);
    for k in 0..cfg.cases {
        let m = 1 + k % 3;
        let inst = instance_for(cfg, m, k)?;
        let p1 = 2.0;
        let alpha = 0.6;
        let p_s = 5.0;
        let p_i = vec![0.05 + 0.05 * (k % 4) as f64; m];
        let report = oracle_individual_grid(&inst, p1, alpha, p_s, &p_i, 1e-3, &cfg.tolerances)?;
        col.gap(report.gap);
        col.check(k, report.analytic_wins(1e-4), "grid search", || format!("{report:?}"));
        let sol = solve_individual_with_alpha(&inst, p1, alpha, p_s, &p_i, &cfg.tolerances)?;
        let slack = cfg.tolerances.bound_slack * p_s.max(1.0);
        col.check(k, sol.source_power <= p_s + slack, "source budget", || format!("{} > {p_s}", sol.source_power));
        for (i, (&p, &lim)) in sol.relay_powers.iter().zip(&p_i).enumerate() {
            col.check(k, p <= lim + slack, "relay budget", || format!("relay {i}: {p} > {lim}"));
        }
    }
    Ok(col.report)
}

/// Noise cancellation, the relay SNR threshold and the simulated SNRs.
fn signals_suite(cfg: &ValidationConfig) -> Result<SuiteReport> {
    let mut col = Collector::new(Suite::Signals, cfg.cases);
    for k in 0..cfg.cases {
        let m = 1 + k % 6;
        let inst = instance_for(cfg, m, k)?;
        let p1 = 1.0 + (k % 4) as f64;
        let e = strongest_relay(&inst)?;
        let bound = inst.h_sr()[e].norm_sqr() * p1 / inst.sigma2();
        let gamma = 0.3 * bound;
        let alpha = alpha_for_threshold(&inst, p1, gamma)?;
        let got = relay_snr(&inst, p1, alpha, e);
        col.check(k, (got - gamma).abs() <= 1e-12 * gamma.max(1.0), "threshold", || format!("{got} vs {gamma}"));
        for i in 0..m {
            let g = relay_snr(&inst, p1, alpha, i);
            col.check(k, g <= gamma * (1.0 + 1e-12), "threshold", || format!("relay {i}: {g} > {gamma}"));
        }
        let sol = solve_total_with_alpha(&inst, p1, alpha, 2.0)?;
        let mut rng = stream_rng(cfg.seed, ORACLE_NAMESPACE, VALIDATION_STREAM, k as u64);
        let z = (0..=m).map(|_| complex_normal(&mut rng, inst.sigma2())).collect();
        let real = SignalRealization {
            x: complex_normal(&mut rng, 1.0),
            u: complex_normal(&mut rng, 1.0),
            z,
            z_d2: complex_normal(&mut rng, inst.sigma2()),
        };
        let residual = simulate_noise_residual(&inst, p1, alpha, &sol.w, &real).norm();
        let scale = residual_scale(&inst, p1, alpha, &sol.w).max(f64::MIN_POSITIVE);
        col.check(k, residual <= 1e-12 * scale, "noise cancellation", || format!("residual {residual:e}, scale {scale:e}"));
        if k < 10 {
            let n = 200_000;
            let emp = empirical_snr(&inst, p1, alpha, &sol.w, n, cfg.seed.wrapping_add(k as u64))?;
            let want = relay_snr(&inst, p1, alpha, e);
            let se = snr_standard_error(want, n);
            col.check(k, (emp.relay_snr[e] - want).abs() <= 3.0 * se, "empirical relay SNR", || {
                format!("{} vs {want} (3 se = {})", emp.relay_snr[e], 3.0 * se)
            });
        }
    }
    Ok(col.report)
}
