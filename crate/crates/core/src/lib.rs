//! Artificial-noise beamforming through untrusted amplify-and-forward relays.
//!
//! The source splits first-phase power between its message and an
//! artificial-noise symbol that the relays also receive. In the second
//! phase the source and relays transmit a weighted combination chosen so
//! the noise cancels at the destination. [`total`] solves for the weights
//! under a sum-power budget and [`individual`] under per-node budgets;
//! [`oracle`] holds brute-force checks and [`harness`] runs seeded sweeps.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod harness;
pub mod individual;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod rng;
pub mod scalar;
pub mod tolerance;
pub mod total;
pub mod validation;

pub use error::{Error, Result};
pub use individual::{solve_individual, solve_individual_with_alpha};
pub use model::{BeamSolution, Budget, NetworkInstance, Scenario, SystemParams};
pub use scalar::Scalar;
pub use tolerance::Tolerances;
pub use total::{solve_total, solve_total_with_alpha};

pub type Instance = NetworkInstance<f64>;
pub type Instance32 = NetworkInstance<f32>;
pub type Solution = BeamSolution<f64>;
pub type Solution32 = BeamSolution<f32>;
pub type Params = SystemParams<f64>;
pub type Params32 = SystemParams<f32>;
pub type BudgetF64 = Budget<f64>;
pub type ScenarioF64 = Scenario<f64>;

/// Solves `scenario` with the solver matching its budget.
pub fn solve<T: Scalar>(scenario: &Scenario<T>, tol: &Tolerances) -> Result<BeamSolution<T>> {
    match scenario.params.budget {
        Budget::Total { .. } => solve_total(&scenario.instance, &scenario.params),
        Budget::Individual { .. } => solve_individual(&scenario.instance, &scenario.params, tol),
    }
}

#[cfg(test)]
mod testutil {
    use num_complex::Complex;
    use rand::Rng;

    use crate::model::{NetworkInstance, SignalRealization};
    use crate::rng::complex_normal;

    pub fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    /// Unit-variance relay links and a direct link kept away from the gain floor.
    pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, m: usize) -> NetworkInstance<f64> {
        let mut h_sd = complex_normal(rng, 0.5);
        if h_sd.norm() < 0.05 {
            h_sd += c(0.1, 0.0);
        }
        let h_sr = (0..m).map(|_| complex_normal(rng, 1.0)).collect();
        let h_rd = (0..m).map(|_| complex_normal(rng, 1.0)).collect();
        NetworkInstance::new(h_sd, h_sr, h_rd, 0.5 + rng.random::<f64>()).unwrap()
    }

    pub fn random_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex<f64>> {
        (0..n).map(|_| complex_normal(rng, 1.0)).collect()
    }

    pub fn random_realization<R: Rng + ?Sized>(rng: &mut R, m: usize) -> SignalRealization<f64> {
        SignalRealization {
            x: complex_normal(rng, 1.0),
            u: complex_normal(rng, 1.0),
            z: (0..=m).map(|_| complex_normal(rng, 1.0)).collect(),
            z_d2: complex_normal(rng, 1.0),
        }
    }
}
