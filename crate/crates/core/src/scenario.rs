//! Ground-truth track simulation and biased, noisy, asynchronous measurements.
//!
//! A scenario has `M` fixed sensors, each observing the target on its own
//! periodic schedule (period + starting offset), and a target following a
//! nearly-constant-velocity model: between consecutive observation instants
//! separated by `T`, position integrates velocity plus process noise with
//! block covariance `q·[[T³/3, T²/2],[T²/2, T]]` per axis.
//!
//! Each measurement is the exact relative polar coordinate seen by the
//! observing sensor, *minus* that sensor's constant bias, plus Gaussian
//! noise: `z = h⁻¹(ξ - p) - θ̄ + w`. Range biases therefore shift measured
//! ranges down, and compensation means *adding* the bias back.
//!
//! Simulation is deterministic given a seed: the track and the measurement
//! noise use two fixed sub-streams of one counter-based generator, so the
//! same `(config, seed)` pair always reproduces the same series bit for bit.

use crate::geometry::{to_polar, wrap_angle, CartesianPoint, GeometryError, PolarPair};
use nalgebra::Vector2;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Sensor indices are 1-based and contiguous: `1..=M`.
pub type SensorId = usize;

const TRACK_STREAM: u64 = 0;
const MEASUREMENT_STREAM: u64 = 1;
/// Two schedule events closer than this are considered simultaneous.
pub const COLLISION_EPS_S: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("schedule collision: sensors {a} and {b} both observe at t = {t} s")]
    ScheduleCollision { t: f64, a: SensorId, b: SensorId },
    #[error("sensor ids must be distinct and form 1..=M; saw {0:?}")]
    BadSensorIds(Vec<SensorId>),
    #[error("horizon {horizon} s does not cover sensor {id}'s offset {offset} s")]
    HorizonTooShort {
        id: SensorId,
        offset: f64,
        horizon: f64,
    },
    #[error("sensor {id}: period must be positive, got {period}")]
    BadPeriod { id: SensorId, period: f64 },
    #[error("empty schedule")]
    EmptySchedule,
    #[error("track length {track} does not match schedule length {schedule}")]
    TrackScheduleMismatch { track: usize, schedule: usize },
    #[error("target coincides with sensor {id} at t = {t} s")]
    TargetAtSensor { id: SensorId, t: f64 },
    #[error("measurement series i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("measurement series parse: {0}")]
    Csv(#[from] csv::Error),
    #[error("measurement series invalid: {0}")]
    InvalidSeries(String),
}

impl From<GeometryError> for ScenarioError {
    fn from(e: GeometryError) -> Self {
        ScenarioError::InvalidSeries(e.to_string())
    }
}

/// Static description of one sensor: where it sits, when it looks, and the
/// constant biases corrupting its measurements.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SensorConfig {
    pub id: SensorId,
    pub position: CartesianPoint,
    /// Observation period, seconds.
    pub period: f64,
    /// First observation time, seconds.
    pub offset: f64,
    /// True range bias, meters (subtracted from measured ranges).
    pub true_range_bias: f64,
    /// True azimuth bias, radians (subtracted from measured azimuths).
    pub true_azimuth_bias: f64,
}

/// Distribution of the target's initial state: mean position/velocity plus
/// isotropic variances.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TargetInit {
    pub mean_position: CartesianPoint,
    pub mean_velocity: Vector2<f64>,
    /// Initial position variance, m².
    pub pos_var: f64,
    /// Initial velocity variance, (m/s)².
    pub vel_var: f64,
}

/// Process-noise density `q`, m²/s³.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MotionNoise {
    pub q: f64,
}

/// Measurement noise standard deviations.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MeasurementNoise {
    /// Range noise std, meters.
    pub sigma_rho: f64,
    /// Azimuth noise std, radians.
    pub sigma_phi: f64,
}

/// One observation instant: which sensor looks, and when.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduleEvent {
    pub time: f64,
    pub sensor_id: SensorId,
}

/// Time-ordered interleaving of all sensors' observation instants.
#[derive(Clone, Debug)]
pub struct Schedule {
    events: Vec<ScheduleEvent>,
}

impl Schedule {
    pub fn events(&self) -> &[ScheduleEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Gaps `T_k = t_{k+1} - t_k`, all strictly positive.
    pub fn gaps(&self) -> Vec<f64> {
        self.events
            .windows(2)
            .map(|w| w[1].time - w[0].time)
            .collect()
    }
}

/// Target state at one schedule instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrackState {
    pub position: CartesianPoint,
    pub velocity: Vector2<f64>,
}

/// Ground-truth target states, aligned with a schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct TrueTrack {
    states: Vec<TrackState>,
}

impl TrueTrack {
    pub fn states(&self) -> &[TrackState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// One measurement row: when, who, and what was measured.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub time: f64,
    pub sensor_id: SensorId,
    pub polar: PolarPair,
}

/// Time-ordered measurements from all sensors — the only estimator input.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSeries {
    rows: Vec<Measurement>,
    num_sensors: usize,
}

impl MeasurementSeries {
    /// Builds a series from rows, validating ordering and sensor ids.
    pub fn new(rows: Vec<Measurement>, num_sensors: usize) -> Result<Self, ScenarioError> {
        for w in rows.windows(2) {
            if w[1].time <= w[0].time {
                return Err(ScenarioError::InvalidSeries(format!(
                    "timestamps not strictly increasing at t = {}",
                    w[1].time
                )));
            }
        }
        for r in &rows {
            if r.sensor_id == 0 || r.sensor_id > num_sensors {
                return Err(ScenarioError::InvalidSeries(format!(
                    "sensor id {} outside 1..={num_sensors}",
                    r.sensor_id
                )));
            }
        }
        Ok(Self { rows, num_sensors })
    }

    pub fn rows(&self) -> &[Measurement] {
        &self.rows
    }

    /// Total measurement count `K`.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Sensor count `M`.
    pub fn num_sensors(&self) -> usize {
        self.num_sensors
    }

    /// Gaps `T_k` between consecutive measurements.
    pub fn gaps(&self) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| w[1].time - w[0].time)
            .collect()
    }

    /// How many measurements each sensor contributed (index 0 = sensor 1).
    pub fn counts_per_sensor(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_sensors];
        for r in &self.rows {
            counts[r.sensor_id - 1] += 1;
        }
        counts
    }

    /// Writes CSV with columns `t_seconds,sensor_id,range_m,azimuth_rad`.
    ///
    /// Floats are printed in shortest round-trip form, so re-parsing
    /// recovers the series exactly.
    pub fn to_csv<W: std::io::Write>(&self, writer: W) -> Result<(), ScenarioError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t_seconds", "sensor_id", "range_m", "azimuth_rad"])?;
        for r in &self.rows {
            w.write_record(&[
                format!("{}", r.time),
                format!("{}", r.sensor_id),
                format!("{}", r.polar.range()),
                format!("{}", r.polar.azimuth()),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Parses the CSV format written by [`MeasurementSeries::to_csv`].
    ///
    /// The sensor count is taken as the largest id present.
    pub fn from_csv<R: std::io::Read>(reader: R) -> Result<Self, ScenarioError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut rows = Vec::new();
        let mut max_id = 0usize;
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() != 4 {
                return Err(ScenarioError::InvalidSeries(format!(
                    "expected 4 columns, got {}",
                    rec.len()
                )));
            }
            let parse = |i: usize| -> Result<f64, ScenarioError> {
                rec[i].trim().parse::<f64>().map_err(|e| {
                    ScenarioError::InvalidSeries(format!("column {i}: {e}: {:?}", &rec[i]))
                })
            };
            let time = parse(0)?;
            let sensor_id: usize = rec[1].trim().parse().map_err(|e| {
                ScenarioError::InvalidSeries(format!("sensor_id: {e}: {:?}", &rec[1]))
            })?;
            let range = parse(2)?;
            let azimuth = parse(3)?;
            max_id = max_id.max(sensor_id);
            rows.push(Measurement {
                time,
                sensor_id,
                polar: PolarPair::new(range, azimuth),
            });
        }
        MeasurementSeries::new(rows, max_id)
    }
}

/// Validates that sensor ids are exactly `1..=M` in some order.
pub fn validate_sensor_ids(sensors: &[SensorConfig]) -> Result<(), ScenarioError> {
    let mut seen = vec![false; sensors.len()];
    for s in sensors {
        if s.id == 0 || s.id > sensors.len() || seen[s.id - 1] {
            return Err(ScenarioError::BadSensorIds(
                sensors.iter().map(|s| s.id).collect(),
            ));
        }
        seen[s.id - 1] = true;
    }
    Ok(())
}

/// Merges each sensor's arithmetic observation sequence
/// `offset, offset + period, …` up to `horizon` into one sorted schedule.
///
/// Sensor `m` contributes `floor((horizon - offset_m) / period_m) + 1`
/// events. Two events within [`COLLISION_EPS_S`] of each other are a
/// configuration error: the model assumes one sensor per instant.
pub fn build_schedule(sensors: &[SensorConfig], horizon: f64) -> Result<Schedule, ScenarioError> {
    validate_sensor_ids(sensors)?;
    let mut events = Vec::new();
    for s in sensors {
        if s.period <= 0.0 {
            return Err(ScenarioError::BadPeriod {
                id: s.id,
                period: s.period,
            });
        }
        if horizon < s.offset {
            return Err(ScenarioError::HorizonTooShort {
                id: s.id,
                offset: s.offset,
                horizon,
            });
        }
        let n = ((horizon - s.offset) / s.period).floor() as usize;
        for i in 0..=n {
            events.push(ScheduleEvent {
                time: s.offset + i as f64 * s.period,
                sensor_id: s.id,
            });
        }
    }
    events.sort_by(|a, b| {
        a.time
            .total_cmp(&b.time)
            .then(a.sensor_id.cmp(&b.sensor_id))
    });
    for w in events.windows(2) {
        if w[1].time - w[0].time < COLLISION_EPS_S {
            return Err(ScenarioError::ScheduleCollision {
                t: w[0].time,
                a: w[0].sensor_id,
                b: w[1].sensor_id,
            });
        }
    }
    if events.is_empty() {
        return Err(ScenarioError::EmptySchedule);
    }
    Ok(Schedule { events })
}

/// Per-axis Cholesky factor of the process-noise block
/// `q·[[T³/3, T²/2],[T²/2, T]]`: returns `(a, b, c)` with
/// `n = a·u₁`, `ṅ = b·u₁ + c·u₂` for independent standard normals `u`.
fn process_noise_chol(q: f64, t: f64) -> (f64, f64, f64) {
    if q == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let a = (q * t * t * t / 3.0).sqrt();
    let b = q * t * t / 2.0 / a;
    let c = (q * t - b * b).max(0.0).sqrt();
    (a, b, c)
}

/// Samples a ground-truth track over the schedule's instants.
///
/// The initial state is drawn from the configured Gaussian; thereafter
/// `ξ_{k+1} = ξ_k + T_k ξ̇_k + n_k`, `ξ̇_{k+1} = ξ̇_k + ṅ_k` with the
/// correlated position/velocity noise of density `q`. Deterministic given
/// the seed.
pub fn simulate_track(
    init: &TargetInit,
    noise: MotionNoise,
    schedule: &Schedule,
    seed: u64,
) -> Result<TrueTrack, ScenarioError> {
    if schedule.is_empty() {
        return Err(ScenarioError::EmptySchedule);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(TRACK_STREAM);
    let mut draw = move || -> f64 { StandardNormal.sample(&mut rng) };

    let ps = init.pos_var.sqrt();
    let vs = init.vel_var.sqrt();
    let mut position = CartesianPoint::new(
        init.mean_position.x + ps * draw(),
        init.mean_position.y + ps * draw(),
    );
    let mut velocity = Vector2::new(
        init.mean_velocity.x + vs * draw(),
        init.mean_velocity.y + vs * draw(),
    );

    let mut states = Vec::with_capacity(schedule.len());
    states.push(TrackState { position, velocity });
    for gap in schedule.gaps() {
        let (a, b, c) = process_noise_chol(noise.q, gap);
        let (u1x, u2x, u1y, u2y) = (draw(), draw(), draw(), draw());
        position = CartesianPoint::new(
            position.x + gap * velocity.x + a * u1x,
            position.y + gap * velocity.y + a * u1y,
        );
        velocity = Vector2::new(
            velocity.x + b * u1x + c * u2x,
            velocity.y + b * u1y + c * u2y,
        );
        states.push(TrackState { position, velocity });
    }
    Ok(TrueTrack { states })
}

/// Produces the biased, noisy measurement series for a track.
///
/// `z_k = h⁻¹(ξ_k - p_{s_k}) - θ̄_{s_k} + w_k`: the true bias is
/// *subtracted* from the exact relative polar coordinates. Deterministic
/// given the seed.
pub fn generate_measurements(
    track: &TrueTrack,
    sensors: &[SensorConfig],
    schedule: &Schedule,
    noise: MeasurementNoise,
    seed: u64,
) -> Result<MeasurementSeries, ScenarioError> {
    validate_sensor_ids(sensors)?;
    if track.len() != schedule.len() {
        return Err(ScenarioError::TrackScheduleMismatch {
            track: track.len(),
            schedule: schedule.len(),
        });
    }
    let mut by_id = vec![None; sensors.len()];
    for s in sensors {
        by_id[s.id - 1] = Some(s);
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(MEASUREMENT_STREAM);
    let mut draw = move || -> f64 { StandardNormal.sample(&mut rng) };

    let mut rows = Vec::with_capacity(schedule.len());
    for (event, state) in schedule.events().iter().zip(track.states()) {
        let sensor = by_id[event.sensor_id - 1].expect("validated ids");
        let rel = state.position - sensor.position;
        let true_polar = to_polar(rel).map_err(|_| ScenarioError::TargetAtSensor {
            id: sensor.id,
            t: event.time,
        })?;
        let w_rho = noise.sigma_rho * draw();
        let w_phi = noise.sigma_phi * draw();
        rows.push(Measurement {
            time: event.time,
            sensor_id: sensor.id,
            polar: PolarPair::new(
                true_polar.range() - sensor.true_range_bias + w_rho,
                wrap_angle(true_polar.azimuth() - sensor.true_azimuth_bias + w_phi),
            ),
        });
    }
    MeasurementSeries::new(rows, sensors.len())
}

/// A full ground-truth world: sensors, target distribution, noise levels,
/// and the observation horizon.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub sensors: Vec<SensorConfig>,
    pub target: TargetInit,
    pub motion: MotionNoise,
    pub noise: MeasurementNoise,
    pub horizon: f64,
}

impl Scenario {
    /// Sensor positions indexed by `id - 1`, the layout estimators expect.
    pub fn positions(&self) -> Vec<CartesianPoint> {
        let mut p = vec![CartesianPoint::new(0.0, 0.0); self.sensors.len()];
        for s in &self.sensors {
            p[s.id - 1] = s.position;
        }
        p
    }

    /// Builds the schedule, samples a track, and generates measurements,
    /// all from one seed.
    pub fn simulate(
        &self,
        seed: u64,
    ) -> Result<(Schedule, TrueTrack, MeasurementSeries), ScenarioError> {
        let schedule = build_schedule(&self.sensors, self.horizon)?;
        let track = simulate_track(&self.target, self.motion, &schedule, seed)?;
        let series = generate_measurements(&track, &self.sensors, &schedule, self.noise, seed)?;
        Ok((schedule, track, series))
    }
}
