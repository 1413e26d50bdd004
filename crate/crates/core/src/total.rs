//! Total-power constrained beamforming.
//!
//! With alpha fixed, maximizing the destination SNR under w^H D w <= P_tot is
//! a generalized Rayleigh quotient with a rank-one numerator, so the optimum
//! is w* = mu D~^{-1} conj(h) with D~ = D / P_tot + D_h.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{dot_t, CMatrix};
use crate::model::{
    alpha_for_threshold, BeamSolution, Budget, DerivedModel, Diagnostics, NetworkInstance, SystemParams,
    TotalSolveDiagnostics,
};
use crate::scalar::Scalar;

/// D~ = D / P_tot + D_h.
pub fn build_d_tilde<T: Scalar>(derived: &DerivedModel<T>, p_tot: T) -> Result<CMatrix<T>> {
    if derived.alpha <= T::zero() {
        return Err(Error::DegenerateAlpha);
    }
    if !(p_tot > T::zero()) {
        return Err(Error::InvalidParams(format!("p_tot must be positive, got {p_tot}")));
    }
    let mut d = derived.d_matrix();
    d.scale(T::one() / p_tot);
    d.add_assign(&derived.d_h_matrix());
    Ok(d)
}

/// Solve for a fixed message fraction `alpha`.
pub fn solve_total_with_alpha<T: Scalar>(
    instance: &NetworkInstance<T>,
    p1: T,
    alpha: T,
    p_tot: T,
) -> Result<BeamSolution<T>> {
    let derived = DerivedModel::new(instance, p1, alpha, None)?;
    let d_tilde = build_d_tilde(&derived, p_tot)?;
    let target: Vec<Complex<T>> = derived.h.iter().map(|z| z.conj()).collect();
    let v = d_tilde.cholesky()?.solve(&target);
    let rayleigh_value = dot_t(&derived.h, &v).re;
    let power = derived.d_matrix().quad_form(&v);
    let mu = (p_tot / power).sqrt();

    // global phase: make h^T w real and nonnegative
    let coupling = dot_t(&derived.h, &v);
    let phase = if coupling.norm() > T::zero() {
        (coupling / coupling.norm()).conj()
    } else {
        Complex::new(T::one(), T::zero())
    };
    let w: Vec<Complex<T>> = v.iter().map(|&z| z * phase * mu).collect();
    Ok(BeamSolution::assemble(
        instance,
        p1,
        alpha,
        w,
        Diagnostics::Total(TotalSolveDiagnostics { v, mu, rayleigh_value }),
    ))
}

/// Solve with alpha set so the strongest relay sits exactly at the threshold.
pub fn solve_total<T: Scalar>(instance: &NetworkInstance<T>, params: &SystemParams<T>) -> Result<BeamSolution<T>> {
    params.validate(instance.relays())?;
    let Budget::Total { p_tot } = params.budget else {
        return Err(Error::WrongBudget { expected: "total" });
    };
    let alpha = if instance.relays() == 0 {
        T::one()
    } else {
        alpha_for_threshold(instance, params.p1, params.gamma)?
    };
    solve_total_with_alpha(instance, params.p1, alpha, p_tot)
}
