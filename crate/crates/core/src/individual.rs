//! Per-node power constrained beamforming.
//!
//! Phases are aligned so every term of h^T w is real and nonnegative, which
//! leaves a problem over the magnitudes u = [|w_0|, |w_1 h_1d|, ..., |w_M h_Md|]:
//!
//! ```text
//! maximize  (c^T u)^2 / (1 + |u_relays|^2)
//! s.t.      alpha P1 u_0^2 + (1 - alpha) P1 / |h_sd|^2 (c_relays^T u_relays)^2 <= P_s
//!           0 <= u_i <= u_max,i
//! ```
//!
//! Without relay bounds the source constraint is tight and the relay
//! amplitudes point along c, which reduces everything to a scalar radius
//! r = |u_relays| with a closed-form optimum. When a relay bound is violated
//! the worst offender is fixed at its bound and the remaining radius solves a
//! quartic stationarity condition; this repeats until every bound holds.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    alpha_for_threshold, BeamSolution, Budget, DerivedModel, Diagnostics, IndividualSolveDiagnostics,
    NetworkInstance, RootCandidate, SystemParams,
};
use crate::poly;
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

/// Radius sub-problem over the still-unclamped relays.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct MagnitudeProblem<T: Scalar> {
    /// [|h_sd|, |h_s1|, ..., |h_sM|].
    pub c: Vec<T>,
    pub u_max: Vec<T>,
    pub eta1: T,
    pub eta2: T,
    pub eta3: T,
    /// Sum of c_i u_max,i over clamped relays.
    pub t1: T,
    /// 1 + sum of u_max,i^2 over clamped relays.
    pub t2: T,
    /// Unclamped relay indices, ascending.
    pub active: Vec<usize>,
    /// Norm of c over the active relays.
    pub tau: T,
}

impl<T: Scalar> MagnitudeProblem<T> {
    /// Initial problem with every relay active.
    pub fn new(derived: &DerivedModel<T>) -> Result<Self> {
        let ind = derived
            .individual
            .as_ref()
            .ok_or(Error::WrongBudget { expected: "individual" })?;
        let mut p = Self {
            c: derived.c.clone(),
            u_max: ind.u_max.clone(),
            eta1: ind.eta1,
            eta2: ind.eta2,
            eta3: ind.eta3,
            t1: T::zero(),
            t2: T::one(),
            active: (0..derived.relays()).collect(),
            tau: T::zero(),
        };
        p.refresh_tau();
        Ok(p)
    }

    /// Builds a problem directly from its scalar parameters; the active set
    /// is a single synthetic relay whose gain equals `tau`.
    pub fn from_parameters(c1: T, tau: T, eta1: T, eta2: T, t1: T, t2: T) -> Self {
        Self {
            c: vec![c1, tau],
            u_max: vec![T::infinity()],
            eta1,
            eta2,
            eta3: T::one() + eta2 * c1 * c1,
            t1,
            t2,
            active: vec![0],
            tau,
        }
    }

    fn refresh_tau(&mut self) {
        self.tau = self
            .active
            .iter()
            .map(|&i| self.c[i + 1] * self.c[i + 1])
            .sum::<T>()
            .sqrt();
    }

    pub fn c1(&self) -> T {
        self.c[0]
    }

    /// eta1 - eta2 (t1 + tau r)^2 with tiny negatives snapped to zero; None if infeasible.
    pub fn radicand(&self, r: T, tol: &Tolerances) -> Option<T> {
        let s = self.t1 + self.tau * r;
        let rad = self.eta1 - self.eta2 * s * s;
        if rad >= T::zero() {
            Some(rad)
        } else if rad >= -T::lit(tol.radicand_clip) * self.eta1 {
            Some(T::zero())
        } else {
            None
        }
    }

    /// (t1 + tau r + c1 sqrt(eta1 - eta2 (t1 + tau r)^2))^2 / (t2 + r^2).
    pub fn objective(&self, r: T, tol: &Tolerances) -> Option<T> {
        let rad = self.radicand(r, tol)?;
        let num = self.t1 + self.tau * r + self.c1() * rad.sqrt();
        Some(num * num / (self.t2 + r * r))
    }

    /// Largest radius keeping the source constraint satisfiable.
    pub fn radius_limit(&self) -> T {
        if self.tau == T::zero() {
            return T::zero();
        }
        if self.eta2 == T::zero() {
            return T::infinity();
        }
        ((self.eta1 / self.eta2).sqrt() - self.t1).max(T::zero()) / self.tau
    }

    /// Source amplitude u_0 implied by the radius.
    pub fn source_amplitude(&self, r: T, tol: &Tolerances) -> Option<T> {
        self.radicand(r, tol).map(|x| x.sqrt())
    }

    /// Active relay amplitudes c_i r / tau, in `active` order.
    pub fn active_amplitudes(&self, r: T) -> Vec<T> {
        if self.tau == T::zero() {
            return vec![T::zero(); self.active.len()];
        }
        self.active.iter().map(|&i| self.c[i + 1] * r / self.tau).collect()
    }
}

/// Coefficients q0..q4 of the radius quartic in the customary closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct QuarticCoeffs<T: Scalar> {
    pub q0: T,
    pub q1: T,
    pub q2: T,
    pub q3: T,
    pub q4: T,
}

impl<T: Scalar> QuarticCoeffs<T> {
    /// Polynomial whose positive roots are the stationary radii, highest degree first.
    ///
    /// Clearing the square root in the derivative of the radius objective
    /// gives `q0 r^4 + q1 r^3 - q2 r^2 + q3 r - q4`, i.e. q2 and q4 enter
    /// with negative sign.
    pub fn stationarity_poly(&self) -> [T; 5] {
        [self.q0, self.q1, -self.q2, self.q3, -self.q4]
    }
}

/// Phases aligning every term of h^T w: [-arg h_sd, -(arg h_si + arg h_id)...].
pub fn optimal_phases<T: Scalar>(instance: &NetworkInstance<T>) -> Vec<T> {
    std::iter::once(-instance.h_sd().arg())
        .chain(
            instance
                .h_sr()
                .iter()
                .zip(instance.h_rd())
                .map(|(a, b)| -(a.arg() + b.arg())),
        )
        .collect()
}

/// Closed-form optimum with no relay clamped.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceOnlySolution<T> {
    pub u1: T,
    /// Amplitudes for `problem.active`, in order.
    pub u_active: Vec<T>,
    pub r_star: T,
}

/// Optimum under the source constraint alone (t1 = 0, t2 = 1).
pub fn solve_source_only<T: Scalar>(problem: &MagnitudeProblem<T>) -> Result<SourceOnlySolution<T>> {
    if !(problem.eta1 > T::zero()) {
        return Err(Error::InfeasibleBudget(format!("eta1 = {} is not positive", problem.eta1)));
    }
    let (c1, tau, e1, e2) = (problem.c1(), problem.tau, problem.eta1, problem.eta2);
    let r_star = if tau == T::zero() {
        T::zero()
    } else {
        let tau2 = tau * tau;
        let a = e1 + tau2 * e2;
        (tau2 * e1 / (tau2 * tau2 * e2 + a * a * c1 * c1)).sqrt()
    };
    let u1 = (e1 - e2 * tau * tau * r_star * r_star).max(T::zero()).sqrt();
    Ok(SourceOnlySolution { u1, u_active: problem.active_amplitudes(r_star), r_star })
}

pub fn quartic_coeffs<T: Scalar>(p: &MagnitudeProblem<T>) -> QuarticCoeffs<T> {
    let (c1, e1, e2, e3, t1, t2, tau) = (p.c1(), p.eta1, p.eta2, p.eta3, p.t1, p.t2, p.tau);
    let two = T::two();
    let c12 = c1 * c1;
    let t12 = t1 * t1;
    let tau2 = tau * tau;
    let diff = t12 - t2 * tau2;
    QuarticCoeffs {
        q0: e2 * e3 * t12 * tau2,
        q1: -two * e2 * t1 * tau * (e1 * c12 + e3 * (t2 * tau2 - t12)),
        q2: e3 * (e1 * t12 - e2 * (diff * diff - two * t12 * t2 * tau2))
            - e1 * c12 * (e1 - e2 * t12 + two * e2 * t2 * tau2),
        q3: two * t1 * t2 * tau * e3 * (e1 - e2 * t12 + e2 * t2 * tau2),
        q4: t2 * t2 * tau2 * (e1 - e2 * e3 * t12),
    }
}

/// Outcome of choosing the radius among polynomial roots and boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSelection<T: Scalar> {
    pub r: T,
    pub candidates: Vec<RootCandidate<T>>,
    /// No admissible stationary root existed; `r` is a boundary point.
    pub boundary_fallback: bool,
}

/// Picks the admissible radius maximizing the clamped objective.
pub fn select_root<T: Scalar>(
    coeffs: &QuarticCoeffs<T>,
    problem: &MagnitudeProblem<T>,
    tol: &Tolerances,
) -> Result<RootSelection<T>> {
    let limit = problem.radius_limit();
    let mut candidates = Vec::new();
    if problem.tau > T::zero() {
        let p = coeffs.stationarity_poly();
        let lead_tol = T::epsilon() * T::lit(16.0);
        for z in poly::roots(&p, lead_tol)? {
            let real = z.im.abs() <= T::lit(tol.root_imag) * z.re.abs().max(T::one());
            if !real || !(z.re > T::zero()) {
                continue;
            }
            let r = if z.re > limit { limit } else { z.re };
            if z.re > limit * (T::one() + T::lit(tol.equality)) {
                continue;
            }
            if let Some(v) = problem.objective(r, tol) {
                candidates.push(RootCandidate { r, objective: v, boundary: false });
            }
        }
    }
    let interior = !candidates.is_empty();
    let mut push_boundary = |r: T| {
        if let Some(v) = problem.objective(r, tol) {
            candidates.push(RootCandidate { r, objective: v, boundary: true });
        }
    };
    push_boundary(T::zero());
    if limit.is_finite() && limit > T::zero() {
        push_boundary(limit);
    }
    let best = candidates
        .iter()
        .copied()
        .filter(|c| c.objective.is_finite())
        .fold(None::<RootCandidate<T>>, |acc, c| match acc {
            Some(b) if b.objective >= c.objective => Some(b),
            _ => Some(c),
        })
        .ok_or(Error::NoFeasibleRoot)?;
    Ok(RootSelection { r: best.r, candidates, boundary_fallback: !interior })
}

/// Solve for a fixed message fraction `alpha`.
pub fn solve_individual_with_alpha<T: Scalar>(
    instance: &NetworkInstance<T>,
    p1: T,
    alpha: T,
    p_s: T,
    p_i: &[T],
    tol: &Tolerances,
) -> Result<BeamSolution<T>> {
    let budget = Budget::Individual { p_s, p_i: p_i.to_vec() };
    let derived = DerivedModel::new(instance, p1, alpha, Some(&budget))?;
    let mut problem = MagnitudeProblem::new(&derived)?;
    let m = instance.relays();
    let mut u = vec![T::zero(); m + 1];
    let mut clamped = Vec::new();

    let first = solve_source_only(&problem)?;
    let mut r = first.r_star;
    let mut candidates = vec![RootCandidate {
        r,
        objective: problem.objective(r, tol).unwrap_or(T::nan()),
        boundary: false,
    }];
    let mut iterations = 0;
    loop {
        let amps = problem.active_amplitudes(r);
        let slack = T::one() + T::lit(tol.bound_slack);
        let worst = problem
            .active
            .iter()
            .zip(&amps)
            .filter(|(&i, &a)| a > problem.u_max[i] * slack)
            .map(|(&i, &a)| {
                let ratio = if problem.u_max[i] == T::zero() { T::infinity() } else { a / problem.u_max[i] };
                (i, ratio)
            })
            .fold(None::<(usize, T)>, |acc, (i, q)| match acc {
                Some((_, best)) if best >= q => acc,
                _ => Some((i, q)),
            });
        let Some((k, _)) = worst else {
            for (&i, &a) in problem.active.iter().zip(&amps) {
                u[i + 1] = a;
            }
            break;
        };
        iterations += 1;
        let bound = problem.u_max[k];
        u[k + 1] = bound;
        clamped.push(k);
        problem.t1 += problem.c[k + 1] * bound;
        problem.t2 += bound * bound;
        problem.active.retain(|&i| i != k);
        problem.refresh_tau();
        if problem.radicand(T::zero(), tol).is_none() {
            return Err(Error::InfeasibleBudget(format!(
                "clamped relays need cancellation power beyond P_s (eta1 = {}, eta2 t1^2 = {})",
                problem.eta1,
                problem.eta2 * problem.t1 * problem.t1
            )));
        }
        let sel = select_root(&quartic_coeffs(&problem), &problem, tol)?;
        r = sel.r;
        candidates = sel.candidates;
    }
    u[0] = problem
        .source_amplitude(r, tol)
        .ok_or_else(|| Error::InfeasibleBudget("source amplitude radicand negative".into()))?;

    let phases = optimal_phases(instance);
    let mut w = Vec::with_capacity(m + 1);
    w.push(Complex::from_polar(u[0], phases[0]));
    for i in 0..m {
        let g = instance.h_rd()[i].norm();
        let mag = if g > T::zero() { u[i + 1] / g } else { T::zero() };
        w.push(Complex::from_polar(mag, phases[i + 1]));
    }
    Ok(BeamSolution::assemble(
        instance,
        p1,
        alpha,
        w,
        Diagnostics::Individual(IndividualSolveDiagnostics { clamped, root_candidates: candidates, r_star: r, iterations, u }),
    ))
}

/// Solve with alpha set so the strongest relay sits exactly at the threshold.
pub fn solve_individual<T: Scalar>(
    instance: &NetworkInstance<T>,
    params: &SystemParams<T>,
    tol: &Tolerances,
) -> Result<BeamSolution<T>> {
    params.validate(instance.relays())?;
    let Budget::Individual { p_s, p_i } = &params.budget else {
        return Err(Error::WrongBudget { expected: "individual" });
    };
    let alpha = if instance.relays() == 0 {
        T::one()
    } else {
        alpha_for_threshold(instance, params.p1, params.gamma)?
    };
    solve_individual_with_alpha(instance, params.p1, alpha, *p_s, p_i, tol)
}
