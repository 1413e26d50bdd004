//! Exhaustive grid search for the per-node budget problem at small M.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::individual::solve_individual_with_alpha;
use crate::model::snr::{direct_sinr, half_log2_capacity};
use crate::model::{Budget, DerivedModel, Diagnostics, NetworkInstance};
use crate::oracle::OracleReport;
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

pub const MAX_GRID_RELAYS: usize = 3;
const MAX_POINTS_PER_AXIS: usize = 400;

struct Magnitudes {
    c: Vec<f64>,
    eta1: f64,
    eta2: f64,
}

impl Magnitudes {
    /// Objective with u_0 set by the tight source constraint; None if infeasible.
    fn value(&self, u: &[f64]) -> Option<f64> {
        let s: f64 = self.c[1..].iter().zip(u).map(|(c, u)| c * u).sum();
        let rad = self.eta1 - self.eta2 * s * s;
        if rad < 0.0 {
            return None;
        }
        let num = self.c[0] * rad.sqrt() + s;
        let den = 1.0 + u.iter().map(|x| x * x).sum::<f64>();
        Some(num * num / den)
    }
}

/// Grid search over the relay box [0, u_max], u_0 from the source constraint,
/// followed by pattern-search refinement around the best cell.
///
/// `grid_step` is the requested spacing in amplitude units; at most
/// 400 points per axis are used, so wide boxes get a coarser grid.
pub fn oracle_individual_grid<T: Scalar>(
    instance: &NetworkInstance<T>,
    p1: T,
    alpha: T,
    p_s: T,
    p_i: &[T],
    grid_step: f64,
    tol: &Tolerances,
) -> Result<OracleReport> {
    let m = instance.relays();
    if m > MAX_GRID_RELAYS {
        return Err(Error::OracleTooLarge(m));
    }
    if !(grid_step > 0.0) {
        return Err(Error::InvalidParams("grid_step must be positive".into()));
    }
    let analytic = solve_individual_with_alpha(instance, p1, alpha, p_s, p_i, tol)?;
    let Diagnostics::Individual(diag) = &analytic.diagnostics else {
        unreachable!("individual solver returns individual diagnostics")
    };
    let analytic_u: Vec<f64> = diag.u.iter().map(|x| x.to_f64_lossy()).collect();

    let budget = Budget::Individual { p_s, p_i: p_i.to_vec() };
    let derived = DerivedModel::new(instance, p1, alpha, Some(&budget))?;
    let ind = derived.individual.as_ref().expect("individual budget");
    let mags = Magnitudes {
        c: derived.c.iter().map(|x| x.to_f64_lossy()).collect(),
        eta1: ind.eta1.to_f64_lossy(),
        eta2: ind.eta2.to_f64_lossy(),
    };
    let fallback_cap = 4.0 * (1.0 + analytic_u.iter().cloned().fold(0.0, f64::max));
    let caps: Vec<f64> = (0..m)
        .map(|i| {
            let mut cap = ind.u_max[i].to_f64_lossy();
            let ci = mags.c[i + 1];
            if mags.eta2 > 0.0 && ci > 0.0 {
                cap = cap.min((mags.eta1 / mags.eta2).sqrt() / ci);
            }
            if !cap.is_finite() {
                cap = fallback_cap;
            }
            cap
        })
        .collect();
    let counts: Vec<usize> = caps
        .iter()
        .map(|&cap| ((cap / grid_step).ceil() as usize).clamp(1, MAX_POINTS_PER_AXIS) + 1)
        .collect();
    let steps: Vec<f64> = caps.iter().zip(&counts).map(|(&cap, &n)| cap / (n - 1) as f64).collect();
    let total_points: usize = counts.iter().product();

    let point = |flat: usize| -> Vec<f64> {
        let mut rem = flat;
        (0..m)
            .map(|i| {
                let k = rem % counts[i];
                rem /= counts[i];
                (k as f64 * steps[i]).min(caps[i])
            })
            .collect()
    };
    let best = (0..total_points)
        .into_par_iter()
        .filter_map(|flat| mags.value(&point(flat)).map(|v| (v, flat)))
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let (mut value, flat) = best.ok_or(Error::NoFeasibleRoot)?;
    let mut u = point(flat);

    let mut step = steps.clone();
    let floor = 1e-14 * (1.0 + caps.iter().cloned().fold(0.0, f64::max));
    let mut evals = total_points;
    while step.iter().cloned().fold(0.0, f64::max) > floor {
        let mut improved = false;
        for i in 0..m {
            for sign in [1.0, -1.0] {
                let mut cand = u.clone();
                cand[i] = (cand[i] + sign * step[i]).clamp(0.0, caps[i]);
                evals += 1;
                if let Some(v) = mags.value(&cand) {
                    if v > value {
                        value = v;
                        u = cand;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            for s in &mut step {
                *s *= 0.5;
            }
        }
    }

    let p1f = p1.to_f64_lossy();
    let af = alpha.to_f64_lossy();
    let direct = direct_sinr(instance, p1, alpha).to_f64_lossy();
    let oracle_cd = half_log2_capacity(direct + af * p1f / instance.sigma2().to_f64_lossy() * value);
    let s: f64 = mags.c[1..].iter().zip(&u).map(|(c, x)| c * x).sum();
    let mut full_u = vec![(mags.eta1 - mags.eta2 * s * s).max(0.0).sqrt()];
    full_u.extend_from_slice(&u);
    let dist = full_u
        .iter()
        .zip(&analytic_u)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(OracleReport::new(analytic.c_d.to_f64_lossy(), oracle_cd, dist, evals))
}
