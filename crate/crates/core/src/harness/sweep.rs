use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harness::{sample_instance, BudgetKind, ExperimentRow, ExperimentSpec};
use crate::individual::solve_individual_with_alpha;
use crate::model::{alpha_for_threshold, NetworkInstance};
use crate::harness::AlphaMode;
use crate::scalar::{pairwise_sum, Scalar};
use crate::tolerance::Tolerances;
use crate::total::solve_total_with_alpha;

/// Rows plus bookkeeping about instances that had to be redrawn.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub rows: Vec<ExperimentRow>,
    /// Instance draws rejected because a solver failed on them.
    pub resampled: usize,
}

/// C_d for each requested budget on one instance.
fn solve_point<T: Scalar>(
    instance: &NetworkInstance<T>,
    spec: &ExperimentSpec,
    p1: f64,
    alpha_axis: f64,
    kinds: &[BudgetKind],
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    let m = instance.relays();
    let p1t = T::lit(p1);
    let alpha = match spec.alpha_mode {
        AlphaMode::Fixed { .. } => T::lit(alpha_axis),
        AlphaMode::Threshold => alpha_for_threshold(instance, p1t, T::lit(alpha_axis))?,
    };
    kinds
        .iter()
        .map(|kind| {
            let sol = match kind {
                BudgetKind::Total => {
                    let p_tot = T::lit(spec.p_s + m as f64 * spec.p_i);
                    solve_total_with_alpha(instance, p1t, alpha, p_tot)?
                }
                BudgetKind::Individual => {
                    let p_i = vec![T::lit(spec.p_i); m];
                    solve_individual_with_alpha(instance, p1t, alpha, T::lit(spec.p_s), &p_i, tol)?
                }
            };
            Ok(sol.c_d.to_f64_lossy())
        })
        .collect()
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    (mean, (pairwise_sum(&dev) / (n - 1.0)).sqrt())
}

/// Runs the sweep on the current rayon pool.
///
/// Instance `k` at every grid point comes from stream `(seed, k, attempt)`,
/// so all grid points and budget modes see the same channel draws and runs
/// agree across thread counts.
pub fn run_sweep_detailed<T: Scalar>(spec: &ExperimentSpec, tol: &Tolerances) -> Result<SweepOutput> {
    spec.validate()?;
    let kinds = spec.budget_mode.kinds();
    let mut rows = Vec::new();
    let mut resampled = 0;
    for &m in &spec.m_values {
        for &p1 in &spec.p1_values {
            for a in spec.alpha_axis() {
                let per_instance: Vec<Result<(Vec<f64>, usize)>> = (0..spec.n_instances)
                    .into_par_iter()
                    .map(|k| {
                        let mut failures = 0;
                        for attempt in 0..spec.max_attempts {
                            let outcome = sample_instance::<T>(m, &spec.variances, spec.sigma2, spec.seed, k as u64, attempt)
                                .and_then(|inst| solve_point(&inst, spec, p1, a, kinds, tol));
                            match outcome {
                                Ok(v) => return Ok((v, failures)),
                                Err(e) => {
                                    log::warn!("m={m} p1={p1} alpha={a} instance {k} attempt {attempt}: {e}; resampling");
                                    failures += 1;
                                }
                            }
                        }
                        Err(Error::ResampleExhausted(spec.max_attempts as usize))
                    })
                    .collect();
                let mut values = vec![Vec::with_capacity(spec.n_instances); kinds.len()];
                for r in per_instance {
                    let (v, failures) = r?;
                    resampled += failures;
                    for (col, x) in values.iter_mut().zip(v) {
                        col.push(x);
                    }
                }
                for (kind, col) in kinds.iter().zip(&values) {
                    let (mean, std) = mean_std(col);
                    rows.push(ExperimentRow {
                        m,
                        p1,
                        alpha: a,
                        budget_mode: *kind,
                        mean_c_d: mean,
                        std_c_d: std,
                        n_instances: col.len(),
                        seed: spec.seed,
                    });
                }
            }
        }
    }
    if resampled > 0 {
        log::info!("{resampled} instance draws were resampled");
    }
    Ok(SweepOutput { rows, resampled })
}

pub fn run_sweep<T: Scalar>(spec: &ExperimentSpec, tol: &Tolerances) -> Result<Vec<ExperimentRow>> {
    run_sweep_detailed::<T>(spec, tol).map(|o| o.rows)
}

/// Runs the sweep on a dedicated pool of `workers` threads.
pub fn run_sweep_with_workers<T: Scalar>(
    spec: &ExperimentSpec,
    tol: &Tolerances,
    workers: usize,
) -> Result<SweepOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    pool.install(|| run_sweep_detailed::<T>(spec, tol))
}
