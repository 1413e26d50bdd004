//! Second-phase transmit power accounting.

use num_complex::Complex;

use crate::linalg::dot_t;
use crate::model::derived::{cancellation_vector, relay_power_gains};
use crate::model::NetworkInstance;
use crate::scalar::{abs2, Scalar};

/// Source power alpha P1 |w_0|^2 + (1 - alpha) P1 |sum g_i w_i|^2 (= w^H D_s w).
pub fn source_power<T: Scalar>(instance: &NetworkInstance<T>, p1: T, alpha: T, w: &[Complex<T>]) -> T {
    let g = cancellation_vector(instance);
    let cancel = abs2(dot_t(&g, &w[1..]));
    alpha * p1 * abs2(w[0]) + (T::one() - alpha) * p1 * cancel
}

/// Per-relay transmit power (|h_si|^2 P1 + sigma^2) |w_i|^2.
pub fn relay_powers<T: Scalar>(instance: &NetworkInstance<T>, p1: T, w: &[Complex<T>]) -> Vec<T> {
    relay_power_gains(instance, p1)
        .into_iter()
        .zip(&w[1..])
        .map(|(t, &wi)| t * abs2(wi))
        .collect()
}

/// Total second-phase power w^H D w, evaluated from the block structure.
pub fn second_phase_power<T: Scalar>(instance: &NetworkInstance<T>, p1: T, alpha: T, w: &[Complex<T>]) -> T {
    assert_eq!(w.len(), instance.relays() + 1, "weight vector must have length M+1");
    source_power(instance, p1, alpha, w) + relay_powers(instance, p1, w).into_iter().sum::<T>()
}
