//! Experiment orchestration: presets, configuration, data, the three
//! experiment protocols and result files.
//!
//! Trials run in parallel on the rayon pool. Every trial draws from its own
//! ChaCha20 streams, numbered `(trial << 8) | purpose` under the master seed
//! (see [`crate::rng`]), and results are collected by trial index, so output
//! does not depend on scheduling.

mod config;
mod data;
mod output;
mod presets;
mod run;

pub use config::{ExperimentConfig, Method, SyntheticSpec};
pub use data::{generate_synthetic, load_dataset};
pub use output::{
    emit_plot, emit_results, emit_trial_log, mean_std, write_results, PlotPoint, TrialRecord,
    TrialResult, RESULTS_HEADER,
};
pub use presets::{reference_d2d_table, reference_sigma_table, Preset, PresetSpec, TABLE_TARGETS};
pub use run::{
    accountant_constants, calibrate_langevin, calibrate_sigma, certified_epsilon, d2d_table_report,
    prepare, run_evaluate, run_sequential, run_tradeoff_sweep, run_unlearn_one, Calibration,
    Context, D2dTableEntry, Report,
};

use crate::error::Result;

/// Write the results table, plot series and per-trial log to the paths set
/// in `cfg`.
pub fn write_report(cfg: &ExperimentConfig, report: &Report) -> Result<()> {
    if let Some(path) = &cfg.out {
        emit_results(&report.rows, path)?;
    }
    if let Some(path) = &cfg.plot {
        emit_plot(&report.plot, path)?;
    }
    if let Some(path) = &cfg.trial_log {
        emit_trial_log(&report.rows, path)?;
    }
    Ok(())
}
