//! Network model: channel types, SNR and capacity formulas, power accounting
//! and the symbol-level signal chain.

pub mod derived;
mod instance;
pub mod power;
pub mod signal;
pub mod snr;
mod solution;

pub use derived::{DerivedModel, IndividualTerms};
pub use instance::{Budget, NetworkInstance, Scenario, SystemParams};
pub use power::{relay_powers, second_phase_power, source_power};
pub use signal::{propagate, simulate_noise_residual, SignalRealization};
pub use snr::{
    alpha_for_threshold, alpha_monotonicity_threshold, capacity_dest, capacity_relay, relay_snr,
    secrecy_increasing_in_alpha, secrecy_rate, strongest_relay,
};
pub use solution::{
    BeamSolution, Diagnostics, IndividualSolveDiagnostics, RootCandidate, TotalSolveDiagnostics,
};
