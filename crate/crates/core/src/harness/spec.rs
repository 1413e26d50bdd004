use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::ChannelVariances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaMode {
    /// Sweep these message fractions directly; the relay SNR threshold is not enforced.
    Fixed { values: Vec<f64> },
    /// Derive alpha per instance from `ExperimentSpec::gamma`.
    Threshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetMode {
    Total,
    Individual,
    Both,
}

impl BudgetMode {
    pub fn kinds(self) -> &'static [BudgetKind] {
        match self {
            BudgetMode::Total => &[BudgetKind::Total],
            BudgetMode::Individual => &[BudgetKind::Individual],
            BudgetMode::Both => &[BudgetKind::Total, BudgetKind::Individual],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetKind {
    Total,
    Individual,
}

impl BudgetKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BudgetKind::Total => "total",
            BudgetKind::Individual => "individual",
        }
    }
}

fn default_instances() -> usize {
    100
}

fn default_sigma2() -> f64 {
    1.0
}

fn default_max_attempts() -> u64 {
    1000
}

/// A Monte Carlo sweep over relay counts, first-phase powers and alpha.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub m_values: Vec<usize>,
    pub p1_values: Vec<f64>,
    pub alpha_mode: AlphaMode,
    #[serde(default)]
    pub gamma: Option<f64>,
    pub budget_mode: BudgetMode,
    pub p_s: f64,
    pub p_i: f64,
    #[serde(default = "default_instances")]
    pub n_instances: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub variances: ChannelVariances,
    #[serde(default = "default_sigma2")]
    pub sigma2: f64,
    /// Resampling attempts allowed per instance slot before the sweep fails.
    #[serde(default = "default_max_attempts")]
    pub max_attempts: u64,
}

impl ExperimentSpec {
    /// P1 sweep for alpha in {0.3, 0.6, 0.9}, M = 5, both budgets.
    pub fn first_phase_power_sweep(seed: u64) -> Self {
        let mut p1_values = vec![0.5];
        p1_values.extend((1..=10).map(f64::from));
        Self {
            m_values: vec![5],
            p1_values,
            alpha_mode: AlphaMode::Fixed { values: vec![0.3, 0.6, 0.9] },
            gamma: None,
            budget_mode: BudgetMode::Both,
            p_s: 5.0,
            p_i: 0.1,
            n_instances: 100,
            seed,
            variances: ChannelVariances::default(),
            sigma2: 1.0,
            max_attempts: default_max_attempts(),
        }
    }

    /// Relay-count sweep over M = 2..=10 at P1 in {1, 5}, alpha = 0.6, both budgets.
    pub fn relay_count_sweep(seed: u64) -> Self {
        Self {
            m_values: (2..=10).collect(),
            p1_values: vec![1.0, 5.0],
            alpha_mode: AlphaMode::Fixed { values: vec![0.6] },
            ..Self::first_phase_power_sweep(seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.n_instances == 0 {
            return bad("n_instances must be at least 1".into());
        }
        if self.m_values.is_empty() || self.p1_values.is_empty() {
            return bad("m_values and p1_values must be nonempty".into());
        }
        if self.m_values.contains(&0) {
            return bad("relay counts must be at least 1".into());
        }
        if self.p1_values.iter().any(|&p| !(p > 0.0)) {
            return bad("p1 values must be positive".into());
        }
        let v = &self.variances;
        if !(v.source_relay > 0.0 && v.relay_destination > 0.0 && v.source_destination > 0.0) {
            return bad("channel variances must be positive".into());
        }
        if !(self.sigma2 > 0.0) {
            return bad("sigma2 must be positive".into());
        }
        if !(self.p_s > 0.0) || !(self.p_i >= 0.0) {
            return bad("p_s must be positive and p_i nonnegative".into());
        }
        match &self.alpha_mode {
            AlphaMode::Fixed { values } => {
                if values.is_empty() || values.iter().any(|&a| !(a > 0.0 && a <= 1.0)) {
                    return bad("fixed alpha values must lie in (0, 1]".into());
                }
            }
            AlphaMode::Threshold => match self.gamma {
                Some(g) if g > 0.0 => {}
                _ => return bad("threshold mode needs a positive gamma".into()),
            },
        }
        Ok(())
    }

    /// Values written to the `alpha` column: fixed alphas, or gamma in threshold mode.
    pub fn alpha_axis(&self) -> Vec<f64> {
        match &self.alpha_mode {
            AlphaMode::Fixed { values } => values.clone(),
            AlphaMode::Threshold => vec![self.gamma.unwrap_or(f64::NAN)],
        }
    }
}

/// One averaged sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub m: usize,
    pub p1: f64,
    /// Fixed alpha, or gamma in threshold mode.
    pub alpha: f64,
    pub budget_mode: BudgetKind,
    pub mean_c_d: f64,
    pub std_c_d: f64,
    pub n_instances: usize,
    pub seed: u64,
}
