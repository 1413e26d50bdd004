//! Relay SNR, capacities, the threshold power split and secrecy rate.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::dot_t;
use crate::model::derived::{beam_vector, relay_noise_gains};
use crate::model::NetworkInstance;
use crate::scalar::{abs2, Scalar};
use crate::tolerance::Tolerances;

/// Index of the relay with the largest |h_si|^2 (lowest index on ties).
pub fn strongest_relay<T: Scalar>(instance: &NetworkInstance<T>) -> Result<usize> {
    let mut best: Option<(usize, T)> = None;
    for (i, g) in instance.source_relay_gains().into_iter().enumerate() {
        match best {
            Some((_, b)) if g <= b => {}
            _ => best = Some((i, g)),
        }
    }
    best.map(|(i, _)| i).ok_or(Error::NoRelays)
}

/// SINR of a receiver with gain `g2 = |h|^2` during the first phase.
#[inline]
fn first_phase_sinr<T: Scalar>(g2: T, p1: T, alpha: T, sigma2: T) -> T {
    g2 * alpha * p1 / (sigma2 + g2 * (T::one() - alpha) * p1)
}

/// Gamma_i at relay `i`.
pub fn relay_snr<T: Scalar>(instance: &NetworkInstance<T>, p1: T, alpha: T, i: usize) -> T {
    first_phase_sinr(abs2(instance.h_sr()[i]), p1, alpha, instance.sigma2())
}

/// Largest admissible threshold |h_se|^2 P1 / sigma^2 (alpha = 1).
pub fn threshold_bound<T: Scalar>(instance: &NetworkInstance<T>, p1: T) -> Result<T> {
    let e = strongest_relay(instance)?;
    Ok(abs2(instance.h_sr()[e]) * p1 / instance.sigma2())
}

/// Message fraction alpha placing the strongest relay exactly at `gamma`.
pub fn alpha_for_threshold<T: Scalar>(instance: &NetworkInstance<T>, p1: T, gamma: T) -> Result<T> {
    if !(gamma > T::zero()) {
        return Err(Error::InvalidParams(format!("gamma must be positive, got {gamma}")));
    }
    let bound = threshold_bound(instance, p1)?;
    if gamma > bound {
        return Err(Error::InfeasibleThreshold {
            gamma: gamma.to_f64_lossy(),
            bound: bound.to_f64_lossy(),
        });
    }
    let alpha = (T::one() + T::one() / bound) / (T::one() + T::one() / gamma);
    Ok(alpha.min(T::one()))
}

/// 1/2 log2(1 + sinr).
#[inline]
pub fn half_log2_capacity<T: Scalar>(sinr: T) -> T {
    T::half() * (T::one() + sinr).log2()
}

/// C_i = 1/2 log2(1 + Gamma_i).
pub fn capacity_relay<T: Scalar>(instance: &NetworkInstance<T>, p1: T, alpha: T, i: usize) -> T {
    half_log2_capacity(relay_snr(instance, p1, alpha, i))
}

/// SINR of the direct first-phase link with artificial noise as interference.
pub fn direct_sinr<T: Scalar>(instance: &NetworkInstance<T>, p1: T, alpha: T) -> T {
    first_phase_sinr(abs2(instance.h_sd()), p1, alpha, instance.sigma2())
}

/// |h^T w|^2 / (1 + w^H D_h w).
pub fn beam_ratio<T: Scalar>(instance: &NetworkInstance<T>, w: &[Complex<T>]) -> T {
    let h = beam_vector(instance);
    let coupling = abs2(dot_t(&h, w));
    let forwarded: T = relay_noise_gains(instance)
        .iter()
        .zip(&w[1..])
        .map(|(&d, &wi)| d * abs2(wi))
        .sum();
    coupling / (T::one() + forwarded)
}

/// Second-phase SINR at the destination, |h^T w|^2 alpha P1 / (sigma^2 (1 + w^H D_h w)).
pub fn beam_sinr<T: Scalar>(instance: &NetworkInstance<T>, p1: T, alpha: T, w: &[Complex<T>]) -> T {
    beam_ratio(instance, w) * alpha * p1 / instance.sigma2()
}

/// Destination capacity under maximum ratio combining of both phases.
///
/// Panics if `w.len() != M + 1`.
pub fn capacity_dest<T: Scalar>(instance: &NetworkInstance<T>, p1: T, alpha: T, w: &[Complex<T>]) -> T {
    assert_eq!(w.len(), instance.relays() + 1, "weight vector must have length M+1");
    half_log2_capacity(direct_sinr(instance, p1, alpha) + beam_sinr(instance, p1, alpha, w))
}

/// C_d - C_e for the strongest relay e; may be negative.
pub fn secrecy_rate<T: Scalar>(instance: &NetworkInstance<T>, p1: T, alpha: T, w: &[Complex<T>]) -> Result<T> {
    let e = strongest_relay(instance)?;
    Ok(capacity_dest(instance, p1, alpha, w) - capacity_relay(instance, p1, alpha, e))
}

/// rho_j = sigma^2 / (|h_sj|^2 P1) + 1.
fn rho<T: Scalar>(g2: T, p1: T, sigma2: T) -> T {
    sigma2 / (g2 * p1) + T::one()
}

/// Lower bound on f(w) above which C_d - C_e increases with alpha on [0, 1].
///
/// The bound is `(rho_d - rho_e) rho_d / ((rho_d - 1)^2 (rho_e - 2))`. It
/// only carries that meaning for rho_e > 2; the value is returned for any
/// rho_e away from 2 and no claim is attached otherwise.
pub fn alpha_monotonicity_threshold<T: Scalar>(
    instance: &NetworkInstance<T>,
    p1: T,
    tol: &Tolerances,
) -> Result<T> {
    let e = strongest_relay(instance)?;
    let s2 = instance.sigma2();
    let rho_d = rho(abs2(instance.h_sd()), p1, s2);
    let rho_e = rho(abs2(instance.h_sr()[e]), p1, s2);
    if (rho_e - T::two()).abs() < T::lit(tol.singular_rho) {
        return Err(Error::SingularObservation { rho_e: rho_e.to_f64_lossy() });
    }
    let dm1 = rho_d - T::one();
    Ok((rho_d - rho_e) * rho_d / (dm1 * dm1 * (rho_e - T::two())))
}

/// f(w) = |h^T w|^2 P1 / (sigma^2 (1 + w^H D_h w)).
pub fn monotonicity_statistic<T: Scalar>(instance: &NetworkInstance<T>, p1: T, w: &[Complex<T>]) -> T {
    beam_ratio(instance, w) * p1 / instance.sigma2()
}

/// Whether f(w) clears the monotonicity threshold.
pub fn secrecy_increasing_in_alpha<T: Scalar>(
    instance: &NetworkInstance<T>,
    p1: T,
    w: &[Complex<T>],
    tol: &Tolerances,
) -> Result<bool> {
    let thr = alpha_monotonicity_threshold(instance, p1, tol)?;
    Ok(monotonicity_statistic(instance, p1, w) >= thr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{c, random_instance, random_weights};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn real_instance(h_sd: f64, h_sr: &[f64], h_rd: &[f64], sigma2: f64) -> NetworkInstance<f64> {
        NetworkInstance::new(
            c(h_sd, 0.0),
            h_sr.iter().map(|&x| c(x, 0.0)).collect(),
            h_rd.iter().map(|&x| c(x, 0.0)).collect(),
            sigma2,
        )
        .unwrap()
    }

    #[test]
    fn strongest_relay_breaks_ties_low() {
        let inst = real_instance(1.0, &[0.2f64.sqrt(), 0.9f64.sqrt(), 0.9f64.sqrt()], &[1.0; 3], 1.0);
        assert_eq!(strongest_relay(&inst).unwrap(), 1);
        let single = real_instance(1.0, &[1.0], &[1.0], 1.0);
        assert_eq!(strongest_relay(&single).unwrap(), 0);
        let none = real_instance(1.0, &[], &[], 1.0);
        assert!(matches!(strongest_relay(&none), Err(Error::NoRelays)));
    }

    #[test]
    fn strongest_relay_matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let inst = random_instance(&mut rng, 8);
            let gains = inst.source_relay_gains();
            let mut scan = 0;
            for i in 1..gains.len() {
                if gains[i] > gains[scan] {
                    scan = i;
                }
            }
            assert_eq!(strongest_relay(&inst).unwrap(), scan);
        }
    }

    #[test]
    fn alpha_for_threshold_examples() {
        let inst = real_instance(1.0, &[1.0], &[1.0], 1.0);
        assert_eq!(alpha_for_threshold(&inst, 1.0, 1.0).unwrap(), 1.0);
        let a = alpha_for_threshold(&inst, 1.0, 0.5).unwrap();
        assert!((a - 2.0 / 3.0).abs() < 1e-15);
        assert!((relay_snr(&inst, 1.0, a, 0) - 0.5).abs() < 1e-15);
        assert!(matches!(
            alpha_for_threshold(&inst, 1.0, 2.0),
            Err(Error::InfeasibleThreshold { .. })
        ));
    }

    #[test]
    fn relay_snr_endpoints() {
        let inst = real_instance(1.0, &[2.0], &[1.0], 0.5);
        assert_eq!(relay_snr(&inst, 3.0, 0.0, 0), 0.0);
        assert!((relay_snr(&inst, 3.0, 1.0, 0) - 4.0 * 3.0 / 0.5).abs() < 1e-12);
        let unit = real_instance(1.0, &[1.0], &[1.0], 1.0);
        assert!((relay_snr(&unit, 1.0, 2.0 / 3.0, 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn relay_snr_monotone_in_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = random_instance(&mut rng, 5);
        for i in 0..5 {
            let mut prev = -1.0;
            for k in 0..100 {
                let g = relay_snr(&inst, 1.7, k as f64 / 99.0, i);
                assert!(g >= prev);
                prev = g;
            }
        }
    }

    #[test]
    fn capacity_relay_values() {
        assert_eq!(half_log2_capacity(0.0f64), 0.0);
        assert!((half_log2_capacity(1.0f64) - 0.5).abs() < 1e-15);
        assert!((half_log2_capacity(3.0f64) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn capacity_dest_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let inst = random_instance(&mut rng, 3);
        let w = random_weights(&mut rng, 4);
        assert_eq!(capacity_dest(&inst, 2.0, 0.0, &w), 0.0);

        let unit = real_instance(1.0, &[], &[], 1.0);
        assert!((capacity_dest(&unit, 1.0, 1.0, &[c(0.0, 0.0)]) - 0.5).abs() < 1e-15);

        let zero = vec![c(0.0, 0.0); 4];
        let direct = half_log2_capacity(direct_sinr(&inst, 2.0, 0.4));
        assert_eq!(capacity_dest(&inst, 2.0, 0.4, &zero), direct);
    }

    #[test]
    fn secrecy_rate_is_min_over_relays() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let inst = random_instance(&mut rng, 4);
            let w = random_weights(&mut rng, 5);
            let cd = capacity_dest(&inst, 1.5, 0.6, &w);
            let min = (0..4)
                .map(|i| cd - capacity_relay(&inst, 1.5, 0.6, i))
                .fold(f64::INFINITY, f64::min);
            assert!((secrecy_rate(&inst, 1.5, 0.6, &w).unwrap() - min).abs() < 1e-15);
        }
        let inst = random_instance(&mut rng, 2);
        let w = random_weights(&mut rng, 3);
        assert_eq!(secrecy_rate(&inst, 1.0, 0.0, &w).unwrap(), 0.0);
    }

    #[test]
    fn monotonicity_threshold_cases() {
        let tol = Tolerances::default();
        // |h_sd| = |h_se|, rho = 1/(0.1) + 1 = 11 > 2
        let equal = real_instance(1.0, &[1.0, 0.5], &[1.0, 1.0], 1.0);
        assert_eq!(alpha_monotonicity_threshold(&equal, 0.1, &tol).unwrap(), 0.0);
        // sigma^2 = |h_se|^2 P1 gives rho_e = 2
        let singular = real_instance(1.0, &[1.0], &[1.0], 1.0);
        assert!(matches!(
            alpha_monotonicity_threshold(&singular, 1.0, &tol),
            Err(Error::SingularObservation { .. })
        ));
    }

    #[test]
    fn secrecy_increases_above_threshold() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        while checked < 30 {
            let inst = random_instance(&mut rng, 3);
            let p1 = 0.2;
            let e = strongest_relay(&inst).unwrap();
            let rho_e = inst.sigma2() / (abs2(inst.h_sr()[e]) * p1) + 1.0;
            if rho_e <= 2.0 + 1e-6 {
                continue;
            }
            let w = random_weights(&mut rng, 4);
            if !secrecy_increasing_in_alpha(&inst, p1, &w, &tol).unwrap() {
                continue;
            }
            let rates: Vec<f64> = (1..=99)
                .map(|k| secrecy_rate(&inst, p1, k as f64 / 100.0, &w).unwrap())
                .collect();
            for pair in rates.windows(2) {
                assert!(pair[1] - pair[0] >= -1e-12);
            }
            checked += 1;
        }
    }
}
