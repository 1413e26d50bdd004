use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::NetworkInstance;
use crate::rng::{complex_normal, stream_rng, HARNESS_NAMESPACE};
use crate::scalar::Scalar;

/// Variances of the complex Gaussian channel draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelVariances {
    #[serde(rename = "variance_sr")]
    pub source_relay: f64,
    #[serde(rename = "variance_rd")]
    pub relay_destination: f64,
    #[serde(rename = "variance_sd")]
    pub source_destination: f64,
}

impl Default for ChannelVariances {
    fn default() -> Self {
        Self { source_relay: 1.0, relay_destination: 1.0, source_destination: 0.25 }
    }
}

/// Draws h_sd first, then (h_si, h_id) relay by relay, so an instance with
/// m relays is a prefix of the same stream's instance with more relays.
pub fn sample_instance_from<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    var: &ChannelVariances,
    sigma2: f64,
) -> Result<NetworkInstance<T>> {
    let cast = |z: Complex<f64>| Complex::new(T::lit(z.re), T::lit(z.im));
    let h_sd = cast(complex_normal(rng, var.source_destination));
    let mut h_sr = Vec::with_capacity(m);
    let mut h_rd = Vec::with_capacity(m);
    for _ in 0..m {
        h_sr.push(cast(complex_normal(rng, var.source_relay)));
        h_rd.push(cast(complex_normal(rng, var.relay_destination)));
    }
    NetworkInstance::new(h_sd, h_sr, h_rd, T::lit(sigma2))
}

/// Instance for stream `(seed, index, attempt)`.
pub fn sample_instance<T: Scalar>(
    m: usize,
    var: &ChannelVariances,
    sigma2: f64,
    seed: u64,
    index: u64,
    attempt: u64,
) -> Result<NetworkInstance<T>> {
    let mut rng = stream_rng(seed, HARNESS_NAMESPACE, index, attempt);
    sample_instance_from(&mut rng, m, var, sigma2)
}
