//! Experiment configuration, parameter sweeps, CSV output and figure presets.

mod config;
mod figures;
mod sweep;
mod table;

pub use config::{ExperimentConfig, SweepAxis, SweepPoint};
pub use figures::{figure_config, reproduce, FigureId};
pub use sweep::{run_estimates, run_sweep};
pub use table::{format_sig, read_rows, rows_to_csv, write_rows, SweepRow, HEADER, SIG_DIGITS};
