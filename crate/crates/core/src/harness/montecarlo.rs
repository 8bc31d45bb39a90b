//! The seeded Monte Carlo driver.

use super::config::{EstimatorKind, ExperimentConfig, NoisePoint};
use super::HarnessError;
use crate::bcd::{self, AzimuthSolverKind, BcdConfig};
use crate::geometry::{angle_diff, debias_factor};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Which bias component an RMSE entry refers to. Range errors are meters,
/// azimuth errors degrees (wrapped differences).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasKind {
    Range,
    Azimuth,
}

impl BiasKind {
    pub fn name(&self) -> &'static str {
        match self {
            BiasKind::Range => "range",
            BiasKind::Azimuth => "azimuth",
        }
    }
}

/// Aggregated error for one (estimator, noise point, sensor, component).
#[derive(Clone, Debug, PartialEq)]
pub struct RmseEntry {
    pub estimator: EstimatorKind,
    pub sigma_rho_m: f64,
    pub sigma_phi_deg: f64,
    pub q_m2s3: f64,
    pub sensor_id: usize,
    pub bias_kind: BiasKind,
    pub rmse: f64,
    /// Runs excluded from this cell because the estimator (or the
    /// simulation) failed.
    pub excluded_runs: usize,
}

/// Mean wall-clock seconds per estimator call at one noise point.
#[derive(Clone, Debug)]
pub struct TimingEntry {
    pub estimator: EstimatorKind,
    pub sigma_rho_m: f64,
    pub sigma_phi_deg: f64,
    pub q_m2s3: f64,
    pub mean_time_s: f64,
    pub mean_iterations: f64,
}

/// Per-call log line: timing, iteration count, tightness.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub estimator: EstimatorKind,
    pub noise_index: usize,
    pub run_index: usize,
    pub time_s: f64,
    pub iterations: usize,
    pub all_rank_one: bool,
    pub failed: bool,
}

/// Everything a sweep produced. The RMSE entries (and run metadata except
/// wall-clock times) are a pure function of the config.
#[derive(Clone, Debug)]
pub struct MonteCarloReport {
    pub entries: Vec<RmseEntry>,
    pub timings: Vec<TimingEntry>,
    pub runs: Vec<RunRecord>,
}

/// Signed errors of one successful estimator call: `(Δρ_err m, Δφ_err rad)`
/// per sensor.
struct CallOutcome {
    errors: Option<Vec<(f64, f64)>>,
    time_s: f64,
    iterations: usize,
    all_rank_one: bool,
}

fn estimator_config(kind: EstimatorKind) -> BcdConfig {
    match kind {
        EstimatorKind::BcdSdr | EstimatorKind::TwoStage => BcdConfig::default(),
        EstimatorKind::BcdGp => BcdConfig {
            azimuth_solver: AzimuthSolverKind::Gp,
            ..BcdConfig::default()
        },
    }
}

/// RMSE accumulation: `sqrt(mean of squares)`; exactly zero only when
/// every error is zero.
pub(crate) fn rmse(errors: &[f64]) -> f64 {
    if errors.is_empty() {
        return 0.0;
    }
    (errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64).sqrt()
}

/// Runs the full sweep described by the config.
///
/// Runs are independent and execute in parallel; results are merged in run
/// order, so the report content does not depend on thread scheduling.
/// Estimator failures are excluded per cell and counted, never fatal.
pub fn run_monte_carlo(cfg: &ExperimentConfig) -> Result<MonteCarloReport, HarnessError> {
    cfg.validate()?;
    let truths = cfg.true_biases();
    let m = truths.len();

    let mut entries = Vec::new();
    let mut timings = Vec::new();
    let mut runs = Vec::new();

    for (noise_index, point) in cfg.noise_grid.iter().enumerate() {
        let scenario = cfg.scenario_for(point);
        let positions = scenario.positions();
        let lam = debias_factor(scenario.noise.sigma_phi)
            .map_err(|e| HarnessError::Validation(e.to_string()))?;

        let per_run: Vec<Vec<CallOutcome>> = (0..cfg.num_runs)
            .into_par_iter()
            .map(|r| {
                let seed = cfg.base_seed.wrapping_add(r as u64);
                let simulated = scenario.simulate(seed);
                cfg.estimators
                    .iter()
                    .map(|kind| {
                        let Ok((_, _, series)) = &simulated else {
                            return CallOutcome {
                                errors: None,
                                time_s: 0.0,
                                iterations: 0,
                                all_rank_one: false,
                            };
                        };
                        let bcd_cfg = estimator_config(*kind);
                        let start = Instant::now();
                        let result = match kind {
                            EstimatorKind::TwoStage => {
                                bcd::two_stage(series, &positions, lam, &bcd_cfg)
                            }
                            _ => bcd::run(series, &positions, lam, &bcd_cfg),
                        };
                        let time_s = start.elapsed().as_secs_f64();
                        match result {
                            Ok(est) => {
                                let errors = (0..m)
                                    .map(|i| {
                                        (
                                            est.delta_rho[i] - truths[i].0,
                                            angle_diff(est.delta_phi[i], truths[i].1),
                                        )
                                    })
                                    .collect();
                                CallOutcome {
                                    errors: Some(errors),
                                    time_s,
                                    iterations: est.iterations,
                                    all_rank_one: est.all_rank_one(),
                                }
                            }
                            Err(_) => CallOutcome {
                                errors: None,
                                time_s,
                                iterations: 0,
                                all_rank_one: false,
                            },
                        }
                    })
                    .collect()
            })
            .collect();

        for (e_idx, kind) in cfg.estimators.iter().enumerate() {
            let outcomes: Vec<&CallOutcome> = per_run.iter().map(|v| &v[e_idx]).collect();
            let excluded = outcomes.iter().filter(|o| o.errors.is_none()).count();
            for sensor in 0..m {
                let range_errors: Vec<f64> = outcomes
                    .iter()
                    .filter_map(|o| o.errors.as_ref().map(|e| e[sensor].0))
                    .collect();
                let azimuth_errors: Vec<f64> = outcomes
                    .iter()
                    .filter_map(|o| o.errors.as_ref().map(|e| e[sensor].1.to_degrees()))
                    .collect();
                for (bias_kind, errs) in [
                    (BiasKind::Range, range_errors),
                    (BiasKind::Azimuth, azimuth_errors),
                ] {
                    entries.push(RmseEntry {
                        estimator: *kind,
                        sigma_rho_m: point.sigma_rho_m,
                        sigma_phi_deg: point.sigma_phi_deg,
                        q_m2s3: cfg.resolved_q(point),
                        sensor_id: sensor + 1,
                        bias_kind,
                        rmse: rmse(&errs),
                        excluded_runs: excluded,
                    });
                }
            }
            let completed = outcomes.len() - excluded;
            timings.push(TimingEntry {
                estimator: *kind,
                sigma_rho_m: point.sigma_rho_m,
                sigma_phi_deg: point.sigma_phi_deg,
                q_m2s3: cfg.resolved_q(point),
                mean_time_s: outcomes.iter().map(|o| o.time_s).sum::<f64>()
                    / outcomes.len().max(1) as f64,
                mean_iterations: if completed > 0 {
                    outcomes
                        .iter()
                        .filter(|o| o.errors.is_some())
                        .map(|o| o.iterations as f64)
                        .sum::<f64>()
                        / completed as f64
                } else {
                    0.0
                },
            });
            for (run_index, outcome) in outcomes.iter().enumerate() {
                runs.push(RunRecord {
                    estimator: *kind,
                    noise_index,
                    run_index,
                    time_s: outcome.time_s,
                    iterations: outcome.iterations,
                    all_rank_one: outcome.all_rank_one,
                    failed: outcome.errors.is_none(),
                });
            }
        }
    }

    Ok(MonteCarloReport {
        entries,
        timings,
        runs,
    })
}

/// Looks up one RMSE cell.
impl MonteCarloReport {
    pub fn rmse_for(
        &self,
        estimator: EstimatorKind,
        noise: &NoisePoint,
        sensor_id: usize,
        bias_kind: BiasKind,
    ) -> Option<&RmseEntry> {
        self.entries.iter().find(|e| {
            e.estimator == estimator
                && e.sensor_id == sensor_id
                && e.bias_kind == bias_kind
                && e.sigma_rho_m == noise.sigma_rho_m
                && e.sigma_phi_deg == noise.sigma_phi_deg
        })
    }
}
