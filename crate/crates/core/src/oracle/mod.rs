//! Independent numerical checks for the analytic solvers.
//!
//! None of these share a code path with the solver they verify: the
//! total-power check samples the power boundary directly, the per-node check
//! searches a grid over the magnitude box, and the signal check simulates
//! symbols through both transmission phases.

mod empirical;
mod golden;
mod grid;
mod total;

use num_complex::Complex;
use serde::Serialize;

use crate::scalar::Scalar;

pub use empirical::{empirical_snr, snr_standard_error, EmpiricalSnr, MIN_SYMBOLS};
pub use golden::{golden_section, golden_section_search, GoldenResult};
pub use grid::{oracle_individual_grid, MAX_GRID_RELAYS};
pub use total::{oracle_total, power_iteration_eigenvalue, EigenCheck};

/// Analytic optimum compared against an oracle's best point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub analytic_value: f64,
    pub oracle_value: f64,
    /// analytic - oracle; negative means the oracle found something better.
    pub gap: f64,
    pub argmax_distance: f64,
    pub samples_or_evals: usize,
}

impl OracleReport {
    pub fn new(analytic_value: f64, oracle_value: f64, argmax_distance: f64, samples_or_evals: usize) -> Self {
        Self {
            analytic_value,
            oracle_value,
            gap: analytic_value - oracle_value,
            argmax_distance,
            samples_or_evals,
        }
    }

    /// The analytic value is not beaten by more than `tol`.
    pub fn analytic_wins(&self, tol: f64) -> bool {
        self.gap >= -tol
    }
}

/// min over theta of |a - e^{j theta} b|.
pub fn phase_aligned_distance<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> f64 {
    let cross = a
        .iter()
        .zip(b)
        .fold(Complex::new(0.0, 0.0), |acc, (x, y)| {
            acc + Complex::new(y.re.to_f64_lossy(), -y.im.to_f64_lossy())
                * Complex::new(x.re.to_f64_lossy(), x.im.to_f64_lossy())
        });
    let rot = if cross.norm() > 0.0 { cross / cross.norm() } else { Complex::new(1.0, 0.0) };
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let x = Complex::new(x.re.to_f64_lossy(), x.im.to_f64_lossy());
            let y = Complex::new(y.re.to_f64_lossy(), y.im.to_f64_lossy());
            (x - rot * y).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}
