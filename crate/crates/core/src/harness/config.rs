//! Experiment configuration: JSON schema, validation, and unit conversion.
//!
//! Config files use kilometers and degrees where that is natural and say
//! so in the key names; everything is converted to meters/radians/seconds
//! once, at load time. Unknown keys are rejected.

use super::HarnessError;
use crate::geometry::CartesianPoint;
use crate::scenario::{MeasurementNoise, MotionNoise, Scenario, SensorConfig, TargetInit};
use nalgebra::Vector2;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;

/// One sensor, in config units.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensorSpec {
    pub id: usize,
    pub position_km: [f64; 2],
    pub period_s: f64,
    pub offset_s: f64,
    pub range_bias_km: f64,
    pub azimuth_bias_deg: f64,
}

/// Target initial-state distribution, in config units.
///
/// The variances default to `10q` (position) and `q` (velocity) when
/// omitted.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub initial_position_km: [f64; 2],
    pub initial_velocity_mps: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_pos_var_m2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_vel_var_m2s2: Option<f64>,
}

/// The ground-truth world, in config units.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub sensors: Vec<SensorSpec>,
    pub target: TargetSpec,
    pub horizon_s: f64,
    /// Motion process-noise density, m²/s³.
    pub q_m2s3: f64,
}

/// One measurement-noise grid point; `q_m2s3` overrides the scenario's
/// process noise when present.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoisePoint {
    pub sigma_rho_m: f64,
    pub sigma_phi_deg: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_m2s3: Option<f64>,
}

/// Estimators the harness knows how to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimatorKind {
    #[serde(rename = "bcd-sdr")]
    BcdSdr,
    #[serde(rename = "bcd-gp")]
    BcdGp,
    #[serde(rename = "two-stage")]
    TwoStage,
}

impl EstimatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::BcdSdr => "bcd-sdr",
            EstimatorKind::BcdGp => "bcd-gp",
            EstimatorKind::TwoStage => "two-stage",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated experiment description.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioSpec,
    pub noise_grid: Vec<NoisePoint>,
    pub num_runs: usize,
    pub base_seed: u64,
    pub estimators: Vec<EstimatorKind>,
}

impl ExperimentConfig {
    /// Field-by-field validation beyond what the schema enforces.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let err = |msg: String| Err(HarnessError::Validation(msg));
        let sensors = &self.scenario.sensors;
        if sensors.is_empty() {
            return err("scenario.sensors must not be empty".into());
        }
        let m = sensors.len();
        let mut seen = vec![false; m];
        for s in sensors {
            if s.id == 0 || s.id > m || seen[s.id - 1] {
                return err(format!(
                    "scenario.sensors: ids must be distinct and cover 1..={m}, saw id {}",
                    s.id
                ));
            }
            seen[s.id - 1] = true;
            if s.period_s <= 0.0 {
                return err(format!("sensor {}: period_s must be positive", s.id));
            }
            if s.offset_s < 0.0 {
                return err(format!("sensor {}: offset_s must be nonnegative", s.id));
            }
            if s.offset_s > self.scenario.horizon_s {
                return err(format!("sensor {}: offset_s exceeds horizon_s", s.id));
            }
        }
        if self.scenario.q_m2s3 < 0.0 {
            return err("scenario.q_m2s3 must be nonnegative".into());
        }
        if self.noise_grid.is_empty() {
            return err("noise_grid must not be empty".into());
        }
        for (i, p) in self.noise_grid.iter().enumerate() {
            if p.sigma_rho_m < 0.0 || p.sigma_phi_deg < 0.0 || p.q_m2s3.is_some_and(|q| q < 0.0) {
                return err(format!("noise_grid[{i}]: noise levels must be nonnegative"));
            }
        }
        if self.num_runs == 0 {
            return err("num_runs must be at least 1".into());
        }
        if self.estimators.is_empty() {
            return err("estimators must not be empty".into());
        }
        Ok(())
    }

    /// Resolved process-noise density for a grid point.
    pub fn resolved_q(&self, point: &NoisePoint) -> f64 {
        point.q_m2s3.unwrap_or(self.scenario.q_m2s3)
    }

    /// Builds the internal-unit scenario for one noise point.
    pub fn scenario_for(&self, point: &NoisePoint) -> Scenario {
        let q = self.resolved_q(point);
        let spec = &self.scenario;
        let sensors = spec
            .sensors
            .iter()
            .map(|s| SensorConfig {
                id: s.id,
                position: CartesianPoint::new(s.position_km[0] * 1000.0, s.position_km[1] * 1000.0),
                period: s.period_s,
                offset: s.offset_s,
                true_range_bias: s.range_bias_km * 1000.0,
                true_azimuth_bias: s.azimuth_bias_deg.to_radians(),
            })
            .collect();
        Scenario {
            sensors,
            target: TargetInit {
                mean_position: CartesianPoint::new(
                    spec.target.initial_position_km[0] * 1000.0,
                    spec.target.initial_position_km[1] * 1000.0,
                ),
                mean_velocity: Vector2::new(
                    spec.target.initial_velocity_mps[0],
                    spec.target.initial_velocity_mps[1],
                ),
                pos_var: spec.target.initial_pos_var_m2.unwrap_or(10.0 * q),
                vel_var: spec.target.initial_vel_var_m2s2.unwrap_or(q),
            },
            motion: MotionNoise { q },
            noise: MeasurementNoise {
                sigma_rho: point.sigma_rho_m,
                sigma_phi: point.sigma_phi_deg.to_radians(),
            },
            horizon: spec.horizon_s,
        }
    }

    /// True per-sensor biases in internal units, indexed by `id - 1`:
    /// `(Δρ̄ meters, Δφ̄ radians)`.
    pub fn true_biases(&self) -> Vec<(f64, f64)> {
        let mut out = vec![(0.0, 0.0); self.scenario.sensors.len()];
        for s in &self.scenario.sensors {
            out[s.id - 1] = (s.range_bias_km * 1000.0, s.azimuth_bias_deg.to_radians());
        }
        out
    }
}

/// Loads and validates a config file.
pub fn load_config<P: AsRef<Path>>(path: P) -> Result<ExperimentConfig, HarnessError> {
    let path_str = path.as_ref().display().to_string();
    let text = std::fs::read_to_string(&path).map_err(|source| HarnessError::Io {
        path: path_str.clone(),
        source,
    })?;
    let cfg: ExperimentConfig =
        serde_json::from_str(&text).map_err(|source| HarnessError::Parse {
            path: path_str,
            source,
        })?;
    cfg.validate()?;
    Ok(cfg)
}
