//! Seeded Monte Carlo sweeps over random channel realizations and their CSV output.

mod csv;
mod sample;
mod spec;
mod sweep;

pub use csv::{emit_csv, format_significant, write_csv, CSV_HEADER};
pub use sample::{sample_instance, sample_instance_from, ChannelVariances};
pub use spec::{AlphaMode, BudgetKind, BudgetMode, ExperimentRow, ExperimentSpec};
pub use sweep::{run_sweep, run_sweep_detailed, run_sweep_with_workers, SweepOutput};
