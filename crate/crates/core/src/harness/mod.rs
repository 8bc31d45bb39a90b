//! Experiment harness: JSON configuration, seeded Monte Carlo sweeps, RMSE
//! aggregation, and CSV/SVG report emission.
//!
//! A config file describes one ground-truth scenario (with explicit units
//! in the key names: `period_s`, `range_bias_km`, `azimuth_bias_deg`, …),
//! a grid of measurement-noise points, the estimators to compare, a run
//! count, and a base seed. Run `r` of every noise point uses seed
//! `base_seed + r`, so a report is a pure function of its config — and the
//! shared seeds across noise points make the noise sweep a paired
//! comparison.
//!
//! Reports carry, per (estimator, noise point, sensor, bias component),
//! the root-mean-square error over the completed runs; failed runs are
//! counted and excluded rather than imputed. Range RMSE is in meters,
//! azimuth RMSE in degrees with wrapped differences. Wall-clock timings
//! are aggregated separately — they are hardware facts, not part of the
//! deterministic report content.

mod config;
mod montecarlo;
mod report;
mod svg;

pub use config::{
    load_config, EstimatorKind, ExperimentConfig, NoisePoint, ScenarioSpec, SensorSpec, TargetSpec,
};
pub use montecarlo::{
    run_monte_carlo, BiasKind, MonteCarloReport, RmseEntry, RunRecord, TimingEntry,
};
pub use report::{emit_report, parse_rmse_csv, ReportFormat};

use crate::scenario::ScenarioError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("i/o on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("invalid config: {0}")]
    Validation(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
