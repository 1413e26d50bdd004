//! Symbol-level Monte Carlo estimates of the SINRs and powers the closed forms predict.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{propagate, NetworkInstance, SignalRealization};
use crate::rng::{complex_normal, stream_rng, ORACLE_NAMESPACE};
use crate::scalar::Scalar;

const CHUNKS: usize = 16;
pub const MIN_SYMBOLS: usize = 10_000;

/// Sample averages from simulated transmissions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalSnr {
    /// First-phase SINR of the direct link.
    pub snr_direct: f64,
    /// Second-phase SINR at the destination.
    pub snr_beam: f64,
    /// First-phase SINR at each relay.
    pub relay_snr: Vec<f64>,
    /// Estimated message power received at each relay.
    pub relay_message_power: Vec<f64>,
    /// Mean power of the artificial-noise component at the destination in the second phase.
    pub dest_noise_power: f64,
    /// Mean second-phase transmit power summed over source and relays.
    pub transmit_power: f64,
    pub n_symbols: usize,
}

/// Regression sums for y = a x + e with known x.
#[derive(Debug, Clone, Copy, Default)]
struct Fit {
    sxy: Complex<f64>,
    sxx: f64,
    syy: f64,
}

impl Fit {
    fn add(&mut self, y: Complex<f64>, x: Complex<f64>) {
        self.sxy += y * x.conj();
        self.sxx += x.norm_sqr();
        self.syy += y.norm_sqr();
    }

    fn merge(&mut self, o: &Self) {
        self.sxy += o.sxy;
        self.sxx += o.sxx;
        self.syy += o.syy;
    }

    /// Power of the fitted x component (per symbol, scaled by n).
    fn explained(&self) -> f64 {
        if self.sxx == 0.0 {
            0.0
        } else {
            self.sxy.norm_sqr() / self.sxx
        }
    }

    fn sinr(&self) -> f64 {
        let e = self.explained();
        e / (self.syy - e)
    }
}

#[derive(Debug, Clone, Default)]
struct Accum {
    direct: Fit,
    beam: Fit,
    relays: Vec<Fit>,
    u_power: f64,
    tx_power: f64,
}

impl Accum {
    fn merge(&mut self, o: &Self) {
        self.direct.merge(&o.direct);
        self.beam.merge(&o.beam);
        for (a, b) in self.relays.iter_mut().zip(&o.relays) {
            a.merge(b);
        }
        self.u_power += o.u_power;
        self.tx_power += o.tx_power;
    }
}

/// Simulates `n_symbols` independent transmissions and measures every SINR.
pub fn empirical_snr<T: Scalar>(
    instance: &NetworkInstance<T>,
    p1: T,
    alpha: T,
    w: &[Complex<T>],
    n_symbols: usize,
    seed: u64,
) -> Result<EmpiricalSnr> {
    if n_symbols < MIN_SYMBOLS {
        return Err(Error::InvalidParams(format!("need at least {MIN_SYMBOLS} symbols, got {n_symbols}")));
    }
    let inst = instance.cast::<f64>();
    let (p1, alpha) = (p1.to_f64_lossy(), alpha.to_f64_lossy());
    let w: Vec<Complex<f64>> = w.iter().map(|z| Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())).collect();
    let m = inst.relays();
    let sigma2 = inst.sigma2();
    let per_chunk = n_symbols.div_ceil(CHUNKS);

    let parts: Vec<Accum> = (0..CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream_rng(seed, ORACLE_NAMESPACE, 3, chunk as u64);
            let count = per_chunk.min(n_symbols.saturating_sub(chunk * per_chunk));
            let mut acc = Accum { relays: vec![Fit::default(); m], ..Default::default() };
            for _ in 0..count {
                let real = SignalRealization {
                    x: complex_normal(&mut rng, 1.0),
                    u: complex_normal(&mut rng, 1.0),
                    z: (0..=m).map(|_| complex_normal(&mut rng, sigma2)).collect(),
                    z_d2: complex_normal(&mut rng, sigma2),
                };
                let prop = propagate(&inst, p1, alpha, &w, &real);
                acc.direct.add(prop.dest_phase1.sample(real.x, real.u), real.x);
                acc.beam.add(prop.dest_phase2.sample(real.x, real.u), real.x);
                for (fit, rx) in acc.relays.iter_mut().zip(&prop.relay_rx) {
                    fit.add(rx.sample(real.x, real.u), real.x);
                }
                acc.u_power += (prop.dest_phase2.u_coef * real.u).norm_sqr();
                acc.tx_power += prop.source_tx.sample(real.x, real.u).norm_sqr()
                    + prop.relay_tx.iter().map(|t| t.sample(real.x, real.u).norm_sqr()).sum::<f64>();
            }
            acc
        })
        .collect();
    let mut total = Accum { relays: vec![Fit::default(); m], ..Default::default() };
    for p in &parts {
        total.merge(p);
    }
    let n = n_symbols as f64;
    Ok(EmpiricalSnr {
        snr_direct: total.direct.sinr(),
        snr_beam: total.beam.sinr(),
        relay_snr: total.relays.iter().map(Fit::sinr).collect(),
        relay_message_power: total.relays.iter().map(|f| f.explained() / n).collect(),
        dest_noise_power: total.u_power / n,
        transmit_power: total.tx_power / n,
        n_symbols,
    })
}

/// Delta-method standard error of the known-x SINR estimate from `n` symbols.
///
/// The fluctuations of sum |x|^2, sum |e|^2 and Re(a* sum e x*) are
/// uncorrelated and contribute snr^2/n, snr^2/n and 2 snr/n respectively.
pub fn snr_standard_error(snr: f64, n: usize) -> f64 {
    (2.0 * snr * (snr + 1.0) / n as f64).sqrt()
}
