//! Bias registration for asynchronous multi-sensor tracking.
//!
//! Networked range/azimuth sensors drift: each one reports ranges offset by
//! a constant `Δρ̄` and azimuths offset by a constant `Δφ̄`. Before their
//! measurements can be fused, those per-sensor biases have to be estimated
//! and removed. This crate does that for the asynchronous case — sensors
//! observing a common target at interleaved instants — assuming only that
//! the target moves with a nearly constant velocity.
//!
//! The estimator minimizes a nonlinear least-squares matching criterion by
//! block coordinate descent:
//!
//! * the **range-bias block** is an exact linear least-squares solve
//!   ([`range_bias`]), seeded per sensor by a separation property that makes
//!   each sensor's optimal range bias independent of its azimuth bias;
//! * the **azimuth/velocity block** is a unit-modulus quadratic program
//!   solved through a semidefinite relaxation ([`azimuth`], [`sdp`]) whose
//!   solutions are, in practice, rank one — certifiably so via a dual
//!   certificate — or through projected gradient descent on the torus;
//! * [`bcd`] alternates the two blocks with a monotone objective;
//! * [`scenario`] simulates ground truth and biased measurements, and
//!   [`harness`] runs seeded Monte Carlo sweeps and writes reports.
//!
//! In the noiseless case the estimator recovers the true biases and target
//! velocity exactly. See the book under `book/` for a guided tour.
//!
//! ```
//! use multireg::{bcd, geometry, scenario};
//! use multireg::geometry::CartesianPoint;
//! use nalgebra::Vector2;
//!
//! // Two sensors with known positions, constant biases, no noise.
//! let sensors = vec![
//!     scenario::SensorConfig {
//!         id: 1,
//!         position: CartesianPoint::new(-4_000.0, -9_000.0),
//!         period: 4.0,
//!         offset: 0.0,
//!         true_range_bias: 500.0,
//!         true_azimuth_bias: 1.5f64.to_radians(),
//!     },
//!     scenario::SensorConfig {
//!         id: 2,
//!         position: CartesianPoint::new(6_000.0, -8_000.0),
//!         period: 4.0,
//!         offset: 2.0,
//!         true_range_bias: -300.0,
//!         true_azimuth_bias: -2.0f64.to_radians(),
//!     },
//! ];
//! let world = scenario::Scenario {
//!     sensors,
//!     target: scenario::TargetInit {
//!         mean_position: CartesianPoint::new(-8_000.0, 2_000.0),
//!         mean_velocity: Vector2::new(180.0, 40.0),
//!         pos_var: 0.0,
//!         vel_var: 0.0,
//!     },
//!     motion: scenario::MotionNoise { q: 0.0 },
//!     noise: scenario::MeasurementNoise { sigma_rho: 0.0, sigma_phi: 0.0 },
//!     horizon: 80.0,
//! };
//! let (_, _, series) = world.simulate(1).unwrap();
//!
//! let lam = geometry::debias_factor(0.0).unwrap();
//! let estimate = bcd::run(&series, &world.positions(), lam, &bcd::BcdConfig::default()).unwrap();
//! assert!((estimate.delta_rho[0] - 500.0).abs() < 1e-6);
//! assert!((estimate.delta_phi[1].to_degrees() + 2.0).abs() < 1e-6);
//! ```

pub mod azimuth;
pub mod bcd;
pub mod geometry;
pub mod harness;
pub mod range_bias;
pub mod scenario;
pub mod sdp;

#[cfg(test)]
pub(crate) mod testutil;

pub use geometry::{CartesianPoint, DebiasFactor, PolarPair};
pub use scenario::{MeasurementSeries, Scenario, SensorConfig};
