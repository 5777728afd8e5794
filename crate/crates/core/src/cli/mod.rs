//! Experiment runner behind the `coadea` binary.
//!
//! A run is described by an [`ExperimentConfig`], built from an optional
//! `key = value` file and command-line flags (flags win). Each seed produces
//! `frontier_<problem>_<seed>.csv`, `history_..csv`, `metrics_..csv` and
//! `front_..svg` in the output directory.

mod config;
mod experiment;
mod export;

pub use config::{
    parse_config, parse_config_text, Cli, Command, ConfigError, CustomProblem, ExperimentConfig, OutputFormats,
    ProblemSelector, RunArgs, DEFAULT_GRID,
};
pub use experiment::{artifact_name, run_experiment, ExperimentError, HV_MARGIN};
pub use export::{fmt12, format_sig, frontier_csv, frontier_svg, history_csv, ExportError, RunMetrics};
