use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{abs2, Scalar};
use crate::tolerance::Tolerances;

/// One channel realization of the two-hop network.
///
/// Relay indices are zero-based throughout the crate: relay `i` has
/// source link `h_sr[i]` and destination link `h_rd[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance<T>", into = "RawInstance<T>", bound = "T: Scalar")]
pub struct NetworkInstance<T: Scalar> {
    h_sd: Complex<T>,
    h_sr: Vec<Complex<T>>,
    h_rd: Vec<Complex<T>>,
    sigma2: T,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
struct RawInstance<T: Scalar> {
    h_sd: Complex<T>,
    h_sr: Vec<Complex<T>>,
    h_rd: Vec<Complex<T>>,
    sigma2: T,
}

impl<T: Scalar> TryFrom<RawInstance<T>> for NetworkInstance<T> {
    type Error = Error;
    fn try_from(r: RawInstance<T>) -> Result<Self> {
        Self::new(r.h_sd, r.h_sr, r.h_rd, r.sigma2)
    }
}

impl<T: Scalar> From<NetworkInstance<T>> for RawInstance<T> {
    fn from(n: NetworkInstance<T>) -> Self {
        Self { h_sd: n.h_sd, h_sr: n.h_sr, h_rd: n.h_rd, sigma2: n.sigma2 }
    }
}

impl<T: Scalar> NetworkInstance<T> {
    pub fn new(
        h_sd: Complex<T>,
        h_sr: Vec<Complex<T>>,
        h_rd: Vec<Complex<T>>,
        sigma2: T,
    ) -> Result<Self> {
        Self::with_tolerances(h_sd, h_sr, h_rd, sigma2, &Tolerances::default())
    }

    pub fn with_tolerances(
        h_sd: Complex<T>,
        h_sr: Vec<Complex<T>>,
        h_rd: Vec<Complex<T>>,
        sigma2: T,
        tol: &Tolerances,
    ) -> Result<Self> {
        if h_sr.len() != h_rd.len() {
            return Err(Error::InvalidInstance(format!(
                "{} source-relay gains but {} relay-destination gains",
                h_sr.len(),
                h_rd.len()
            )));
        }
        if !(sigma2 > T::zero()) || !sigma2.is_finite() {
            return Err(Error::InvalidInstance(format!("sigma2 must be positive, got {sigma2}")));
        }
        let all_finite = std::iter::once(&h_sd)
            .chain(&h_sr)
            .chain(&h_rd)
            .all(|z| z.re.is_finite() && z.im.is_finite());
        if !all_finite {
            return Err(Error::InvalidInstance("non-finite channel gain".into()));
        }
        if h_sd.norm() < T::lit(tol.gain_floor) {
            return Err(Error::InvalidInstance(format!(
                "|h_sd| = {} is below the floor {}",
                h_sd.norm(),
                tol.gain_floor
            )));
        }
        Ok(Self { h_sd, h_sr, h_rd, sigma2 })
    }

    /// Number of relays M.
    pub fn relays(&self) -> usize {
        self.h_sr.len()
    }

    pub fn h_sd(&self) -> Complex<T> {
        self.h_sd
    }

    pub fn h_sr(&self) -> &[Complex<T>] {
        &self.h_sr
    }

    pub fn h_rd(&self) -> &[Complex<T>] {
        &self.h_rd
    }

    pub fn sigma2(&self) -> T {
        self.sigma2
    }

    /// |h_si|^2 for every relay.
    pub fn source_relay_gains(&self) -> Vec<T> {
        self.h_sr.iter().map(|&z| abs2(z)).collect()
    }

    /// Same network restricted to its first `m` relays.
    pub fn truncated(&self, m: usize) -> Self {
        let m = m.min(self.relays());
        Self {
            h_sd: self.h_sd,
            h_sr: self.h_sr[..m].to_vec(),
            h_rd: self.h_rd[..m].to_vec(),
            sigma2: self.sigma2,
        }
    }

    pub fn cast<U: Scalar>(&self) -> NetworkInstance<U> {
        let c = |z: &Complex<T>| Complex::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy()));
        NetworkInstance {
            h_sd: c(&self.h_sd),
            h_sr: self.h_sr.iter().map(c).collect(),
            h_rd: self.h_rd.iter().map(c).collect(),
            sigma2: U::lit(self.sigma2.to_f64_lossy()),
        }
    }
}

/// Second-phase power budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "T: Scalar")]
pub enum Budget<T: Scalar> {
    /// w^H D w <= p_tot.
    Total { p_tot: T },
    /// Source power <= p_s and relay i power <= p_i[i].
    Individual { p_s: T, p_i: Vec<T> },
}

impl<T: Scalar> Budget<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Budget::Total { .. } => "total",
            Budget::Individual { .. } => "individual",
        }
    }
}

/// First-phase power, relay SNR threshold and second-phase budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SystemParams<T: Scalar> {
    pub p1: T,
    pub gamma: T,
    pub budget: Budget<T>,
}

impl<T: Scalar> SystemParams<T> {
    /// Checks the parameter ranges that do not depend on the channel.
    pub fn validate(&self, relays: usize) -> Result<()> {
        if !(self.p1 > T::zero()) {
            return Err(Error::InvalidParams(format!("p1 must be positive, got {}", self.p1)));
        }
        if !(self.gamma > T::zero()) {
            return Err(Error::InvalidParams(format!("gamma must be positive, got {}", self.gamma)));
        }
        match &self.budget {
            Budget::Total { p_tot } if !(*p_tot > T::zero()) => {
                Err(Error::InvalidParams(format!("p_tot must be positive, got {p_tot}")))
            }
            Budget::Individual { p_s, .. } if !(*p_s > T::zero()) => {
                Err(Error::InvalidParams(format!("p_s must be positive, got {p_s}")))
            }
            Budget::Individual { p_i, .. } if p_i.len() != relays => Err(Error::DimensionMismatch(
                format!("{} relay budgets for {} relays", p_i.len(), relays),
            )),
            Budget::Individual { p_i, .. } if p_i.iter().any(|p| !(*p >= T::zero())) => {
                Err(Error::InvalidParams("relay budgets must be nonnegative".into()))
            }
            _ => Ok(()),
        }
    }
}

/// A network instance paired with the parameters to solve it under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Scenario<T: Scalar> {
    pub instance: NetworkInstance<T>,
    pub params: SystemParams<T>,
}

impl<T: Scalar> Scenario<T> {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text)?;
        s.params.validate(s.instance.relays())?;
        Ok(s)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
