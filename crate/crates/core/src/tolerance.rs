//! Numerical tolerances, kept in one record so every check uses the same values.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative tolerance for equality constraints and budget checks.
    pub equality: f64,
    /// Relative floor for quantities that cancel exactly in exact arithmetic.
    pub residual: f64,
    /// Minimum |h_sd| accepted at construction (g divides by h_sd).
    pub gain_floor: f64,
    /// A companion eigenvalue is real when |Im| <= root_imag * max(1, |Re|).
    pub root_imag: f64,
    /// Radicands in [-radicand_clip * eta1, 0) are treated as zero.
    pub radicand_clip: f64,
    /// |rho_e - 2| below this raises `SingularObservation`.
    pub singular_rho: f64,
    /// Relative slack on u_i <= u_max,i.
    pub bound_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            equality: 1e-8,
            residual: 1e-12,
            gain_floor: 1e-9,
            root_imag: 1e-9,
            radicand_clip: 1e-12,
            singular_rho: 1e-12,
            bound_slack: 1e-10,
        }
    }
}

impl Tolerances {
    /// Profile for single-precision runs.
    pub fn single_precision() -> Self {
        Self {
            equality: 1e-4,
            residual: 1e-5,
            gain_floor: 1e-6,
            root_imag: 1e-4,
            radicand_clip: 1e-6,
            singular_rho: 1e-6,
            bound_slack: 1e-5,
        }
    }

    /// Looser profile for ill-conditioned inputs.
    pub fn relaxed() -> Self {
        Self {
            equality: 1e-6,
            residual: 1e-10,
            root_imag: 1e-7,
            radicand_clip: 1e-10,
            bound_slack: 1e-8,
            ..Self::default()
        }
    }

    /// Look up a named profile: `default`, `relaxed` or `single`.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "default" | "strict" => Some(Self::default()),
            "relaxed" | "loose" => Some(Self::relaxed()),
            "single" | "f32" => Some(Self::single_precision()),
            _ => None,
        }
    }
}
