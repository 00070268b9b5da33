//! Experiment orchestration, reports and file output for `invscheme`.

pub mod config;
pub mod convergence;
pub mod output;
pub mod reports;
pub mod run;

pub use config::{parse_config, resolve_steps, ConfigError, ResolvedSteps, RunConfig, ViscositySpec};
pub use run::{
    compare_frames, frame_sensitivity, l2_error, run_experiment, run_with_steps, sweep, ErrorSeries, FrameComparison,
    RunOutcome, Snapshot,
};
