//! Symbol-level propagation through both phases.
//!
//! Every received sample is kept as a linear combination of the message
//! `x`, the artificial noise `u` and the thermal noise, so the coefficient
//! on `u` at the destination can be read off directly.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::model::NetworkInstance;
use crate::scalar::Scalar;

/// One draw of every random symbol in a transmission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SignalRealization<T: Scalar> {
    /// Message symbol.
    pub x: Complex<T>,
    /// Artificial-noise symbol.
    pub u: Complex<T>,
    /// Receiver noise in the first phase: `z[0]` at the destination,
    /// `z[1..=M]` at the relays.
    pub z: Vec<Complex<T>>,
    /// Destination noise in the second phase.
    pub z_d2: Complex<T>,
}

/// A received sample split into its message, artificial-noise and thermal parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Components<T> {
    pub x_coef: Complex<T>,
    pub u_coef: Complex<T>,
    pub noise: Complex<T>,
}

impl<T: Scalar> Components<T> {
    fn scaled(self, k: Complex<T>) -> Self {
        Self { x_coef: self.x_coef * k, u_coef: self.u_coef * k, noise: self.noise * k }
    }

    fn plus(self, o: Self) -> Self {
        Self { x_coef: self.x_coef + o.x_coef, u_coef: self.u_coef + o.u_coef, noise: self.noise + o.noise }
    }

    /// Numerical sample value for the realization's symbols.
    pub fn sample(&self, x: Complex<T>, u: Complex<T>) -> Complex<T> {
        self.x_coef * x + self.u_coef * u + self.noise
    }
}

/// Every signal in one transmission.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagation<T> {
    /// First-phase reception at each relay.
    pub relay_rx: Vec<Components<T>>,
    /// First-phase reception at the destination.
    pub dest_phase1: Components<T>,
    /// Second-phase source transmission.
    pub source_tx: Components<T>,
    /// Second-phase relay transmissions w_i y_i.
    pub relay_tx: Vec<Components<T>>,
    /// Second-phase reception at the destination.
    pub dest_phase2: Components<T>,
}

pub fn propagate<T: Scalar>(
    instance: &NetworkInstance<T>,
    p1: T,
    alpha: T,
    w: &[Complex<T>],
    r: &SignalRealization<T>,
) -> Propagation<T> {
    let m = instance.relays();
    assert_eq!(w.len(), m + 1);
    assert_eq!(r.z.len(), m + 1);
    let re = |v: T| Complex::new(v, T::zero());
    let amp_x = re((alpha * p1).sqrt());
    let amp_u = re(((T::one() - alpha) * p1).sqrt());

    // first phase: s1 = sqrt(alpha P1) x + sqrt((1 - alpha) P1) u
    let broadcast = Components { x_coef: amp_x, u_coef: amp_u, noise: Complex::new(T::zero(), T::zero()) };
    let rx = |h: Complex<T>, z: Complex<T>| {
        let mut c = broadcast.scaled(h);
        c.noise += z;
        c
    };
    let dest_phase1 = rx(instance.h_sd(), r.z[0]);
    let relay_rx: Vec<_> = (0..m).map(|i| rx(instance.h_sr()[i], r.z[i + 1])).collect();

    // second phase
    let relay_tx: Vec<_> = relay_rx.iter().zip(&w[1..]).map(|(y, &wi)| y.scaled(wi)).collect();
    let cancel = instance
        .h_sr()
        .iter()
        .zip(instance.h_rd())
        .zip(&w[1..])
        .fold(Complex::new(T::zero(), T::zero()), |acc, ((a, b), wi)| acc + wi * a * b / instance.h_sd());
    let source_tx = Components {
        x_coef: amp_x * w[0],
        u_coef: -amp_u * cancel,
        noise: Complex::new(T::zero(), T::zero()),
    };
    let mut dest_phase2 = source_tx.scaled(instance.h_sd());
    for (tx, &h) in relay_tx.iter().zip(instance.h_rd()) {
        dest_phase2 = dest_phase2.plus(tx.scaled(h));
    }
    dest_phase2.noise += r.z_d2;
    Propagation { relay_rx, dest_phase1, source_tx, relay_tx, dest_phase2 }
}

/// Coefficient multiplying `u` at the destination in the second phase.
pub fn simulate_noise_residual<T: Scalar>(
    instance: &NetworkInstance<T>,
    p1: T,
    alpha: T,
    w: &[Complex<T>],
    r: &SignalRealization<T>,
) -> Complex<T> {
    propagate(instance, p1, alpha, w, r).dest_phase2.u_coef
}

/// Scale against which the residual is judged: sqrt((1 - alpha) P1) sum |w_i h_si h_id|.
pub fn residual_scale<T: Scalar>(instance: &NetworkInstance<T>, p1: T, alpha: T, w: &[Complex<T>]) -> T {
    let s: T = instance
        .h_sr()
        .iter()
        .zip(instance.h_rd())
        .zip(&w[1..])
        .map(|((a, b), wi)| (wi * a * b).norm())
        .sum();
    s * ((T::one() - alpha) * p1).sqrt()
}
