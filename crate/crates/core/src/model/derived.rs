//! Channel-derived vectors and the second-phase power matrices.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::model::{Budget, NetworkInstance};
use crate::scalar::{abs2, Scalar};

/// h = [h_sd, h_s1 h_1d, ..., h_sM h_Md]; the destination sees h^T w.
pub fn beam_vector<T: Scalar>(instance: &NetworkInstance<T>) -> Vec<Complex<T>> {
    std::iter::once(instance.h_sd())
        .chain(instance.h_sr().iter().zip(instance.h_rd()).map(|(a, b)| a * b))
        .collect()
}

/// g_i = h_si h_id / h_sd.
pub fn cancellation_vector<T: Scalar>(instance: &NetworkInstance<T>) -> Vec<Complex<T>> {
    let h_sd = instance.h_sd();
    instance
        .h_sr()
        .iter()
        .zip(instance.h_rd())
        .map(|(a, b)| a * b / h_sd)
        .collect()
}

/// |h_id|^2 for every relay (the nonzero part of diag(D_h)).
pub fn relay_noise_gains<T: Scalar>(instance: &NetworkInstance<T>) -> Vec<T> {
    instance.h_rd().iter().map(|&z| abs2(z)).collect()
}

/// |h_si|^2 P1 + sigma^2: relay i transmit power per unit |w_i|^2.
pub fn relay_power_gains<T: Scalar>(instance: &NetworkInstance<T>, p1: T) -> Vec<T> {
    instance
        .h_sr()
        .iter()
        .map(|&z| abs2(z) * p1 + instance.sigma2())
        .collect()
}

/// Terms that exist only under per-node budgets.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct IndividualTerms<T: Scalar> {
    pub p_s: T,
    /// Bound on u_i = |w_i h_id|, i.e. |h_id| sqrt(P_i / (|h_si|^2 P1 + sigma^2)).
    pub u_max: Vec<T>,
    /// P_s / (alpha P1).
    pub eta1: T,
    /// (1 - alpha) / (alpha c_1^2).
    pub eta2: T,
    /// 1 + eta2 c_1^2.
    pub eta3: T,
}

/// Quantities precomputed for one (instance, alpha, p1) triple.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct DerivedModel<T: Scalar> {
    pub alpha: T,
    pub p1: T,
    pub h: Vec<Complex<T>>,
    pub g: Vec<Complex<T>>,
    /// [|h_sd|, |h_s1|, ..., |h_sM|].
    pub c: Vec<T>,
    /// [0, |h_1d|^2, ..., |h_Md|^2].
    pub d_h_diag: Vec<T>,
    pub t_diag: Vec<T>,
    pub individual: Option<IndividualTerms<T>>,
}

impl<T: Scalar> DerivedModel<T> {
    pub fn new(instance: &NetworkInstance<T>, p1: T, alpha: T, budget: Option<&Budget<T>>) -> Result<Self> {
        if !(alpha >= T::zero() && alpha <= T::one()) {
            return Err(Error::InvalidParams(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        let c: Vec<T> = std::iter::once(instance.h_sd().norm())
            .chain(instance.h_sr().iter().map(|z| z.norm()))
            .collect();
        let t_diag = relay_power_gains(instance, p1);
        let individual = match budget {
            Some(Budget::Individual { p_s, p_i }) => {
                if p_i.len() != instance.relays() {
                    return Err(Error::DimensionMismatch(format!(
                        "{} relay budgets for {} relays",
                        p_i.len(),
                        instance.relays()
                    )));
                }
                if alpha == T::zero() {
                    return Err(Error::DegenerateAlpha);
                }
                let u_max = p_i
                    .iter()
                    .zip(&t_diag)
                    .zip(instance.h_rd())
                    .map(|((&pi, &t), h)| h.norm() * (pi / t).sqrt())
                    .collect();
                let eta1 = *p_s / (alpha * p1);
                let eta2 = (T::one() - alpha) / (alpha * c[0] * c[0]);
                Some(IndividualTerms {
                    p_s: *p_s,
                    u_max,
                    eta1,
                    eta2,
                    eta3: T::one() + eta2 * c[0] * c[0],
                })
            }
            _ => None,
        };
        Ok(Self {
            alpha,
            p1,
            h: beam_vector(instance),
            g: cancellation_vector(instance),
            c,
            d_h_diag: std::iter::once(T::zero()).chain(relay_noise_gains(instance)).collect(),
            t_diag,
            individual,
        })
    }

    pub fn relays(&self) -> usize {
        self.g.len()
    }

    /// Source-side block diag(alpha P1, (1 - alpha) P1 g g^H), i.e. D_s.
    pub fn d_s_matrix(&self) -> CMatrix<T> {
        let n = self.relays() + 1;
        let mut d = CMatrix::zeros(n);
        d[(0, 0)] = Complex::new(self.alpha * self.p1, T::zero());
        let k = (T::one() - self.alpha) * self.p1;
        for i in 0..self.relays() {
            for j in 0..self.relays() {
                d[(i + 1, j + 1)] = self.g[i].conj() * self.g[j] * k;
            }
        }
        d
    }

    /// Total second-phase power matrix D = D_s + diag(0, T).
    pub fn d_matrix(&self) -> CMatrix<T> {
        let mut d = self.d_s_matrix();
        for (i, &t) in self.t_diag.iter().enumerate() {
            d[(i + 1, i + 1)] += Complex::new(t, T::zero());
        }
        d
    }

    pub fn d_h_matrix(&self) -> CMatrix<T> {
        CMatrix::from_real_diag(&self.d_h_diag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{c, random_instance};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn d_is_hermitian_and_definite_inside_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = random_instance(&mut rng, 4);
        let dm = DerivedModel::new(&inst, 1.3, 0.4, None).unwrap();
        let d = dm.d_matrix();
        assert!(d.is_hermitian(1e-14));
        assert!(d.cholesky().is_ok());
        // D_s alone is singular for M >= 2 (rank-one relay block)
        assert!(dm.d_s_matrix().cholesky().is_err());
    }

    #[test]
    fn u_max_includes_destination_gain() {
        let inst = NetworkInstance::new(c(1.0, 0.0), vec![c(1.0, 0.0)], vec![c(0.0, 2.0)], 1.0).unwrap();
        let budget = Budget::Individual { p_s: 5.0, p_i: vec![0.1] };
        let dm = DerivedModel::new(&inst, 1.0, 0.5, Some(&budget)).unwrap();
        let ind = dm.individual.unwrap();
        assert!((ind.u_max[0] - 2.0 * (0.1f64 / 2.0).sqrt()).abs() < 1e-15);
        assert!((ind.eta1 - 10.0).abs() < 1e-15);
        assert!((ind.eta2 - 1.0).abs() < 1e-15);
        assert!((ind.eta3 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_alpha_outside_unit_interval() {
        let inst = NetworkInstance::new(c(1.0, 0.0), vec![], vec![], 1.0).unwrap();
        assert!(DerivedModel::new(&inst, 1.0, 1.5, None).is_err());
        assert!(DerivedModel::new(&inst, 1.0, -0.1, None).is_err());
    }
}
