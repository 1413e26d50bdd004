use num_complex::Complex;
use serde::Serialize;

use crate::model::{power, snr, NetworkInstance};
use crate::scalar::Scalar;

/// Unnormalized Rayleigh-quotient direction and scaling from the total-power solver.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct TotalSolveDiagnostics<T: Scalar> {
    /// D~^{-1} conj(h).
    pub v: Vec<Complex<T>>,
    pub mu: T,
    /// h^T D~^{-1} conj(h), the largest generalized eigenvalue.
    pub rayleigh_value: T,
}

/// A polynomial or boundary candidate for the active-set radius r.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct RootCandidate<T: Scalar> {
    pub r: T,
    pub objective: T,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct IndividualSolveDiagnostics<T: Scalar> {
    /// Relays fixed at their bound, in clamping order.
    pub clamped: Vec<usize>,
    /// Candidates examined in the last re-solve.
    pub root_candidates: Vec<RootCandidate<T>>,
    /// Radius of the active-relay amplitude vector in the final solve.
    pub r_star: T,
    /// Number of clamping iterations.
    pub iterations: usize,
    /// Magnitudes [|w_0|, |w_1 h_1d|, ..., |w_M h_Md|].
    pub u: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "solver", rename_all = "snake_case", bound = "T: Scalar")]
pub enum Diagnostics<T: Scalar> {
    Total(TotalSolveDiagnostics<T>),
    Individual(IndividualSolveDiagnostics<T>),
}

/// Second-phase weights together with what they achieve.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct BeamSolution<T: Scalar> {
    /// [w_0, w_1, ..., w_M].
    pub w: Vec<Complex<T>>,
    pub alpha: T,
    /// Destination capacity in bits per channel use.
    pub c_d: T,
    pub second_phase_power: T,
    pub source_power: T,
    pub relay_powers: Vec<T>,
    pub diagnostics: Diagnostics<T>,
}

impl<T: Scalar> BeamSolution<T> {
    pub(crate) fn assemble(
        instance: &NetworkInstance<T>,
        p1: T,
        alpha: T,
        w: Vec<Complex<T>>,
        diagnostics: Diagnostics<T>,
    ) -> Self {
        Self {
            c_d: snr::capacity_dest(instance, p1, alpha, &w),
            second_phase_power: power::second_phase_power(instance, p1, alpha, &w),
            source_power: power::source_power(instance, p1, alpha, &w),
            relay_powers: power::relay_powers(instance, p1, &w),
            w,
            alpha,
            diagnostics,
        }
    }
}
