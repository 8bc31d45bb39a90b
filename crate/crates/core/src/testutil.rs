//! Shared scenario builders for unit tests.

use crate::geometry::CartesianPoint;
use crate::scenario::{MeasurementNoise, MotionNoise, Scenario, SensorConfig, TargetInit};
use nalgebra::Vector2;
use rand::Rng;

/// The 3-sensor reference scenario used across the test suite: sensors at
/// (∓5, -10) and (0, 10) km, 5 s period with offsets 0/1.5/3 s, biases
/// (-800 m, 2°), (600 m, -3°), (800 m, -2°), target from (-10, 0) km at
/// (200, 0) m/s for 98 s.
pub(crate) fn reference_scenario(q: f64, sigma_rho: f64, sigma_phi: f64) -> Scenario {
    let biases = [(-800.0, 2.0f64), (600.0, -3.0), (800.0, -2.0)];
    let positions = [(-5_000.0, -10_000.0), (5_000.0, -10_000.0), (0.0, 10_000.0)];
    let offsets = [0.0, 1.5, 3.0];
    let sensors = (0..3)
        .map(|i| SensorConfig {
            id: i + 1,
            position: CartesianPoint::new(positions[i].0, positions[i].1),
            period: 5.0,
            offset: offsets[i],
            true_range_bias: biases[i].0,
            true_azimuth_bias: biases[i].1.to_radians(),
        })
        .collect();
    Scenario {
        sensors,
        target: TargetInit {
            mean_position: CartesianPoint::new(-10_000.0, 0.0),
            mean_velocity: Vector2::new(200.0, 0.0),
            pos_var: 10.0 * q,
            vel_var: q,
        },
        motion: MotionNoise { q },
        noise: MeasurementNoise {
            sigma_rho,
            sigma_phi,
        },
        horizon: 98.0,
    }
}

/// One noiseless sensor observing a crossing target; 20 measurements.
pub(crate) fn single_sensor_scenario(range_bias: f64, azimuth_bias: f64) -> Scenario {
    Scenario {
        sensors: vec![SensorConfig {
            id: 1,
            position: CartesianPoint::new(-3_000.0, -8_000.0),
            period: 5.0,
            offset: 0.0,
            true_range_bias: range_bias,
            true_azimuth_bias: azimuth_bias,
        }],
        target: TargetInit {
            mean_position: CartesianPoint::new(-9_000.0, 1_000.0),
            mean_velocity: Vector2::new(180.0, 30.0),
            pos_var: 0.0,
            vel_var: 0.0,
        },
        motion: MotionNoise { q: 0.0 },
        noise: MeasurementNoise {
            sigma_rho: 0.0,
            sigma_phi: 0.0,
        },
        horizon: 95.0,
    }
}

/// A randomized nondegenerate multi-sensor scenario: sensors scattered on a
/// ring around the surveillance area, staggered offsets, biases within
/// ±1.5 km and ±5°.
pub(crate) fn random_scenario<R: Rng>(
    rng: &mut R,
    num_sensors: usize,
    noiseless: bool,
) -> Scenario {
    let sensors = (0..num_sensors)
        .map(|i| {
            let angle = (i as f64 + rng.random_range(0.1..0.6)) / num_sensors as f64
                * std::f64::consts::TAU;
            let radius = rng.random_range(8_000.0..15_000.0);
            SensorConfig {
                id: i + 1,
                position: CartesianPoint::new(radius * angle.cos(), radius * angle.sin()),
                period: 5.0,
                offset: i as f64 * 5.0 / num_sensors as f64 + rng.random_range(0.0..0.4),
                true_range_bias: rng.random_range(-1_500.0..1_500.0),
                true_azimuth_bias: rng.random_range(-5.0f64..5.0).to_radians(),
            }
        })
        .collect();
    let speed = rng.random_range(120.0..260.0);
    let heading = rng.random_range(0.0..std::f64::consts::TAU);
    let q = if noiseless { 0.0 } else { 0.05 };
    Scenario {
        sensors,
        target: TargetInit {
            mean_position: CartesianPoint::new(
                rng.random_range(-4_000.0..4_000.0),
                rng.random_range(-4_000.0..4_000.0),
            ),
            mean_velocity: Vector2::new(speed * heading.cos(), speed * heading.sin()),
            pos_var: 10.0 * q,
            vel_var: q,
        },
        motion: MotionNoise { q },
        noise: if noiseless {
            MeasurementNoise {
                sigma_rho: 0.0,
                sigma_phi: 0.0,
            }
        } else {
            MeasurementNoise {
                sigma_rho: 10.0,
                sigma_phi: 0.05f64.to_radians(),
            }
        },
        horizon: 98.0,
    }
}
