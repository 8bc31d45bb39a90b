//! Closed-form range-bias estimation by linear least squares.
//!
//! For a fixed azimuth-bias guess the matching objective is an ordinary
//! linear least-squares problem in the range biases and the velocity. Two
//! forms are built here:
//!
//! * the **single-sensor system**: one sensor's own measurements, unknowns
//!   `(Δρ, v)`. A separation property makes the optimal `Δρ` (and the
//!   optimal objective value) independent of the azimuth-bias guess, so
//!   each sensor can estimate its range bias locally before anything is
//!   known about azimuths — this seeds the block-coordinate estimator;
//! * the **multi-sensor system**: all sensors jointly, unknowns `Δρ ∈ R^M`
//!   with azimuth biases and velocity held fixed — the range block of the
//!   alternating estimator.
//!
//! Both are solved through an orthogonal factorization of the stacked
//! system; the normal equations are never formed. Degenerate geometries
//! (for example a target track collinear with the sensor) make the stacked
//! matrix rank deficient and are reported as errors rather than solved.

use crate::geometry::DebiasFactor;
use crate::scenario::{MeasurementSeries, SensorId};
use crate::CartesianPoint;
use nalgebra::{DMatrix, DVector, Vector2};
use thiserror::Error;

/// Condition number above which a system is treated as rank deficient.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Error)]
pub enum RangeError {
    #[error("sensor {id}: {count} measurements, need at least 3")]
    InsufficientData { id: SensorId, count: usize },
    #[error("sensor {id} not present in the series")]
    UnknownSensor { id: SensorId },
    #[error(
        "degenerate geometry: condition number {cond:.3e} exceeds {CONDITION_LIMIT:.0e}{}",
        format_suspects(.suspects)
    )]
    DegenerateGeometry { cond: f64, suspects: Vec<SensorId> },
    #[error("expected {expected} azimuth biases, got {got}")]
    BiasCountMismatch { expected: usize, got: usize },
}

fn format_suspects(suspects: &[SensorId]) -> String {
    if suspects.is_empty() {
        String::new()
    } else {
        format!("; under-observed sensors: {suspects:?}")
    }
}

/// The stacked single-sensor system `‖H₀Δρ + H₁v − y‖²` for one trial
/// azimuth bias. Row pair `2k-1, 2k` covers the gap between the sensor's
/// `k`-th and `k+1`-st measurements.
#[derive(Clone, Debug)]
pub struct SingleSensorSystem {
    sensor: SensorId,
    /// Interleaved `(c_k, s_k)` direction-difference entries.
    h0: Vec<f64>,
    /// Gaps `T_k` between the sensor's consecutive measurements.
    gaps: Vec<f64>,
    /// Interleaved `(y_k^c, y_k^s)` right-hand side.
    y: Vec<f64>,
}

impl SingleSensorSystem {
    pub fn sensor(&self) -> SensorId {
        self.sensor
    }

    pub fn h0(&self) -> &[f64] {
        &self.h0
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Number of measurements `K` behind this system.
    pub fn num_measurements(&self) -> usize {
        self.gaps.len() + 1
    }

    /// The stacked `2(K-1)×3` matrix `[H₀ | H₁]` and right-hand side.
    pub fn stacked(&self) -> (DMatrix<f64>, DVector<f64>) {
        let rows = self.h0.len();
        let mut h = DMatrix::zeros(rows, 3);
        for k in 0..self.gaps.len() {
            h[(2 * k, 0)] = self.h0[2 * k];
            h[(2 * k + 1, 0)] = self.h0[2 * k + 1];
            h[(2 * k, 1)] = -self.gaps[k];
            h[(2 * k + 1, 2)] = -self.gaps[k];
        }
        (h, DVector::from_column_slice(&self.y))
    }
}

/// The stacked multi-sensor range system `‖GΔρ − y‖²`.
#[derive(Clone, Debug)]
pub struct MultiRangeSystem {
    g: DMatrix<f64>,
    y: DVector<f64>,
    counts: Vec<usize>,
}

impl MultiRangeSystem {
    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }
}

/// Output of a range solve: per-sensor biases, the velocity when it was an
/// unknown of the system, and the attained residual.
#[derive(Clone, Debug)]
pub struct RangeSolution {
    pub delta_rho: Vec<f64>,
    pub velocity: Option<Vector2<f64>>,
    pub residual_norm_sq: f64,
}

/// Builds the single-sensor system for `sensor`'s measurements under a
/// trial azimuth bias.
///
/// With `φ'_k = φ_k + Δφ` the entries are
/// `c_k = λ⁻¹(cos φ'_{k+1} − cos φ'_k)`,
/// `s_k = λ⁻¹(sin φ'_{k+1} − sin φ'_k)`,
/// `y_k^c = −λ⁻¹(ρ_{k+1} cos φ'_{k+1} − ρ_k cos φ'_k)`, and
/// `y_k^s = −λ⁻¹(ρ_{k+1} sin φ'_{k+1} − ρ_k sin φ'_k)`.
pub fn assemble_single(
    series: &MeasurementSeries,
    sensor: SensorId,
    trial_delta_phi: f64,
    lam: DebiasFactor,
) -> Result<SingleSensorSystem, RangeError> {
    if sensor == 0 || sensor > series.num_sensors() {
        return Err(RangeError::UnknownSensor { id: sensor });
    }
    let rows: Vec<_> = series
        .rows()
        .iter()
        .filter(|r| r.sensor_id == sensor)
        .collect();
    if rows.len() < 3 {
        return Err(RangeError::InsufficientData {
            id: sensor,
            count: rows.len(),
        });
    }
    let li = lam.inv();
    let mut h0 = Vec::with_capacity(2 * (rows.len() - 1));
    let mut gaps = Vec::with_capacity(rows.len() - 1);
    let mut y = Vec::with_capacity(2 * (rows.len() - 1));
    for w in rows.windows(2) {
        let (p0, p1) = (w[0].polar, w[1].polar);
        let a0 = p0.azimuth() + trial_delta_phi;
        let a1 = p1.azimuth() + trial_delta_phi;
        h0.push(li * (a1.cos() - a0.cos()));
        h0.push(li * (a1.sin() - a0.sin()));
        y.push(-li * (p1.range() * a1.cos() - p0.range() * a0.cos()));
        y.push(-li * (p1.range() * a1.sin() - p0.range() * a0.sin()));
        gaps.push(w[1].time - w[0].time);
    }
    Ok(SingleSensorSystem {
        sensor,
        h0,
        gaps,
        y,
    })
}

/// Least-squares solve of a stacked system via SVD, with a condition check.
fn solve_stacked(
    h: &DMatrix<f64>,
    y: &DVector<f64>,
    suspects: Vec<SensorId>,
) -> Result<(DVector<f64>, f64), RangeError> {
    let svd = h.clone().svd(true, true);
    let s_max = svd.singular_values.max();
    let s_min = svd.singular_values.min();
    let cond = if s_min > 0.0 {
        s_max / s_min
    } else {
        f64::INFINITY
    };
    if !cond.is_finite() || cond >= CONDITION_LIMIT {
        return Err(RangeError::DegenerateGeometry { cond, suspects });
    }
    let sol = svd.solve(y, 0.0).expect("u and v_t were requested");
    let residual = (h * &sol - y).norm_squared();
    Ok((sol, residual))
}

/// Solves the single-sensor system for `(Δρ, v)`.
///
/// The returned `Δρ` does not depend on the trial azimuth bias used to
/// assemble the system (nor does the residual); the velocity does.
pub fn solve_single(system: &SingleSensorSystem) -> Result<RangeSolution, RangeError> {
    let (h, y) = system.stacked();
    let (sol, residual_norm_sq) = solve_stacked(&h, &y, vec![system.sensor])?;
    Ok(RangeSolution {
        delta_rho: vec![sol[0]],
        velocity: Some(Vector2::new(sol[1], sol[2])),
        residual_norm_sq,
    })
}

/// Assembles the multi-sensor range system with azimuth biases and
/// velocity held fixed.
///
/// Row pair `2k-1, 2k` is the gap between measurements `k` and `k+1`; the
/// observing sensors' columns carry `±λ⁻¹ cos/sin(φ + Δφ)`, and the
/// right-hand side folds in the measured terms, sensor-position
/// differences, and `T_k v`. When consecutive measurements come from the
/// same sensor the two column entries combine and the position difference
/// vanishes.
pub fn assemble_multi_range(
    series: &MeasurementSeries,
    positions: &[CartesianPoint],
    delta_phi: &[f64],
    velocity: Vector2<f64>,
    lam: DebiasFactor,
) -> Result<MultiRangeSystem, RangeError> {
    let m = series.num_sensors();
    if delta_phi.len() != m {
        return Err(RangeError::BiasCountMismatch {
            expected: m,
            got: delta_phi.len(),
        });
    }
    if positions.len() != m {
        return Err(RangeError::BiasCountMismatch {
            expected: m,
            got: positions.len(),
        });
    }
    let li = lam.inv();
    let rows = series.rows();
    let n = rows.len() - 1;
    let mut g = DMatrix::zeros(2 * n, m);
    let mut y = DVector::zeros(2 * n);
    for k in 0..n {
        let (r0, r1) = (&rows[k], &rows[k + 1]);
        let (s0, s1) = (r0.sensor_id, r1.sensor_id);
        let a0 = r0.polar.azimuth() + delta_phi[s0 - 1];
        let a1 = r1.polar.azimuth() + delta_phi[s1 - 1];
        let gap = r1.time - r0.time;
        g[(2 * k, s1 - 1)] += li * a1.cos();
        g[(2 * k, s0 - 1)] -= li * a0.cos();
        g[(2 * k + 1, s1 - 1)] += li * a1.sin();
        g[(2 * k + 1, s0 - 1)] -= li * a0.sin();
        let yc = li * (r1.polar.range() * a1.cos() - r0.polar.range() * a0.cos());
        let ys = li * (r1.polar.range() * a1.sin() - r0.polar.range() * a0.sin());
        let (p0, p1) = (positions[s0 - 1], positions[s1 - 1]);
        y[2 * k] = -(yc + (p1.x - p0.x) - gap * velocity.x);
        y[2 * k + 1] = -(ys + (p1.y - p0.y) - gap * velocity.y);
    }
    Ok(MultiRangeSystem {
        g,
        y,
        counts: series.counts_per_sensor(),
    })
}

/// Solves the multi-sensor range block: `Δρ* = argmin ‖GΔρ − y‖²`.
pub fn solve_multi_range(
    series: &MeasurementSeries,
    positions: &[CartesianPoint],
    delta_phi: &[f64],
    velocity: Vector2<f64>,
    lam: DebiasFactor,
) -> Result<RangeSolution, RangeError> {
    let system = assemble_multi_range(series, positions, delta_phi, velocity, lam)?;
    let suspects: Vec<SensorId> = system
        .counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c < 3)
        .map(|(i, _)| i + 1)
        .collect();
    let (sol, residual_norm_sq) = solve_stacked(&system.g, &system.y, suspects)?;
    Ok(RangeSolution {
        delta_rho: sol.iter().copied().collect(),
        velocity: None,
        residual_norm_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{debias_factor, PolarPair};
    use crate::scenario::{Measurement, MeasurementSeries};
    use crate::testutil::{reference_scenario, single_sensor_scenario};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn toy_series() -> MeasurementSeries {
        let data = [
            (0.0, 1000.0, 0.30),
            (5.0, 1100.0, 0.35),
            (10.0, 1250.0, 0.32),
        ];
        let rows = data
            .iter()
            .map(|&(t, r, a)| Measurement {
                time: t,
                sensor_id: 1,
                polar: PolarPair::new(r, a),
            })
            .collect();
        MeasurementSeries::new(rows, 1).unwrap()
    }

    // Oracle: the four scalar formulas evaluated directly.
    #[test]
    fn assemble_matches_direct_evaluation() {
        let series = toy_series();
        let lam = debias_factor(0.0).unwrap();
        let sys = assemble_single(&series, 1, 0.0, lam).unwrap();
        let data = [(1000.0f64, 0.30f64), (1100.0, 0.35), (1250.0, 0.32)];
        for k in 0..2 {
            let (r0, a0) = data[k];
            let (r1, a1) = data[k + 1];
            assert_relative_eq!(sys.h0()[2 * k], a1.cos() - a0.cos(), max_relative = 1e-15);
            assert_relative_eq!(
                sys.h0()[2 * k + 1],
                a1.sin() - a0.sin(),
                max_relative = 1e-15
            );
            assert_relative_eq!(
                sys.y()[2 * k],
                -(r1 * a1.cos() - r0 * a0.cos()),
                max_relative = 1e-15
            );
            assert_relative_eq!(
                sys.y()[2 * k + 1],
                -(r1 * a1.sin() - r0 * a0.sin()),
                max_relative = 1e-15
            );
            assert_eq!(sys.gaps()[k], 5.0);
        }
    }

    #[test]
    fn trial_shift_by_pi_negates_entries() {
        let series = toy_series();
        let lam = debias_factor(0.0).unwrap();
        let base = assemble_single(&series, 1, 0.0, lam).unwrap();
        let flipped = assemble_single(&series, 1, std::f64::consts::PI, lam).unwrap();
        for i in 0..base.h0().len() {
            assert_relative_eq!(flipped.h0()[i], -base.h0()[i], max_relative = 1e-12);
            assert_relative_eq!(flipped.y()[i], -base.y()[i], max_relative = 1e-12);
        }
    }

    #[test]
    fn lambda_half_doubles_entries() {
        let series = toy_series();
        let unit = assemble_single(&series, 1, 0.1, debias_factor(0.0).unwrap()).unwrap();
        // λ = 0.5 via a synthetic factor: σφ with e^{-σ²/2} = 0.5.
        let sigma = (2.0 * 2.0f64.ln()).sqrt();
        let half = assemble_single(&series, 1, 0.1, debias_factor(sigma).unwrap()).unwrap();
        for i in 0..unit.h0().len() {
            assert_relative_eq!(half.h0()[i], 2.0 * unit.h0()[i], max_relative = 1e-12);
            assert_relative_eq!(half.y()[i], 2.0 * unit.y()[i], max_relative = 1e-12);
        }
    }

    #[test]
    fn insufficient_data_rejected() {
        let series = toy_series();
        assert!(matches!(
            assemble_single(&series, 2, 0.0, debias_factor(0.0).unwrap()),
            Err(RangeError::UnknownSensor { .. })
        ));
        let two = MeasurementSeries::new(series.rows()[..2].to_vec(), 1).unwrap();
        assert!(matches!(
            assemble_single(&two, 1, 0.0, debias_factor(0.0).unwrap()),
            Err(RangeError::InsufficientData { count: 2, .. })
        ));
    }

    // Oracle: explicit 3×3 normal-equation elimination.
    #[test]
    #[allow(clippy::needless_range_loop)]
    fn solve_single_matches_normal_equations() {
        let series = toy_series();
        let lam = debias_factor(0.0).unwrap();
        let sys = assemble_single(&series, 1, 0.07, lam).unwrap();
        let (h, y) = sys.stacked();
        // Normal equations N x = b solved by Gaussian elimination.
        let mut n = [[0.0f64; 4]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for r in 0..h.nrows() {
                    n[i][j] += h[(r, i)] * h[(r, j)];
                }
            }
            for r in 0..h.nrows() {
                n[i][3] += h[(r, i)] * y[r];
            }
        }
        for col in 0..3 {
            let pivot = (col..3)
                .max_by(|&a, &b| n[a][col].abs().total_cmp(&n[b][col].abs()))
                .unwrap();
            n.swap(col, pivot);
            for row in 0..3 {
                if row != col {
                    let f = n[row][col] / n[col][col];
                    for j in col..4 {
                        n[row][j] -= f * n[col][j];
                    }
                }
            }
        }
        let oracle = [n[0][3] / n[0][0], n[1][3] / n[1][1], n[2][3] / n[2][2]];
        let sol = solve_single(&sys).unwrap();
        assert_relative_eq!(sol.delta_rho[0], oracle[0], max_relative = 1e-10);
        let v = sol.velocity.unwrap();
        assert_relative_eq!(v.x, oracle[1], max_relative = 1e-10);
        assert_relative_eq!(v.y, oracle[2], max_relative = 1e-10);
    }

    #[test]
    fn noiseless_recovery_any_trial_phi() {
        let sc = single_sensor_scenario(600.0, -2.5f64.to_radians());
        let (_, _, series) = sc.simulate(5).unwrap();
        let lam = debias_factor(0.0).unwrap();
        for trial_deg in [0.0f64, 5.0, 17.0, 90.0] {
            let sys = assemble_single(&series, 1, trial_deg.to_radians(), lam).unwrap();
            let sol = solve_single(&sys).unwrap();
            assert!(
                (sol.delta_rho[0] - 600.0).abs() < 1e-6,
                "trial {trial_deg}°: Δρ = {}",
                sol.delta_rho[0]
            );
        }
    }

    // The separation property: Δρ* and the residual are invariant in the
    // trial azimuth bias; the velocity is not.
    #[test]
    fn separation_property_noisy() {
        let mut sc = single_sensor_scenario(600.0, -2.5f64.to_radians());
        sc.noise.sigma_rho = 20.0;
        sc.noise.sigma_phi = 0.1f64.to_radians();
        sc.motion.q = 0.05;
        let (_, _, series) = sc.simulate(17).unwrap();
        let lam = debias_factor(sc.noise.sigma_phi).unwrap();
        let trials = [0.0f64, 5.0, 17.0, 90.0];
        let sols: Vec<_> = trials
            .iter()
            .map(|d| {
                solve_single(&assemble_single(&series, 1, d.to_radians(), lam).unwrap()).unwrap()
            })
            .collect();
        let rho0 = sols[0].delta_rho[0];
        let res0 = sols[0].residual_norm_sq;
        for s in &sols[1..] {
            assert_relative_eq!(s.delta_rho[0], rho0, max_relative = 1e-9);
            assert_relative_eq!(s.residual_norm_sq, res0, max_relative = 1e-9);
        }
        let v0 = sols[0].velocity.unwrap();
        let v3 = sols[3].velocity.unwrap();
        assert!(
            (v0 - v3).norm() > 1.0,
            "velocity should rotate with the trial bias"
        );
    }

    // The quantities behind the separation proof: projected system inner
    // products are invariant in the trial azimuth bias.
    #[test]
    fn projected_inner_products_invariant() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..20 {
            let k = rng.random_range(3..10usize);
            let mut clock = 0.0;
            let rows: Vec<Measurement> = (0..k)
                .map(|_| {
                    clock += rng.random_range(0.5..3.0);
                    Measurement {
                        time: clock,
                        sensor_id: 1,
                        polar: PolarPair::new(
                            rng.random_range(500.0..5000.0),
                            rng.random_range(-3.0..3.0),
                        ),
                    }
                })
                .collect();
            let series = MeasurementSeries::new(rows, 1).unwrap();
            let lam = debias_factor(0.0).unwrap();
            let products = |trial: f64| {
                let sys = assemble_single(&series, 1, trial, lam).unwrap();
                let gaps = sys.gaps();
                let t_sq: f64 = gaps.iter().map(|t| t * t).sum();
                let n = gaps.len();
                let tbar = |l: usize, kk: usize| {
                    if l == kk {
                        1.0 - gaps[kk] * gaps[kk] / t_sq
                    } else {
                        -gaps[kk] * gaps[l] / t_sq
                    }
                };
                let mut out = Vec::new();
                for kk in 0..n {
                    let (mut ac, mut asn, mut bc, mut bs) = (0.0, 0.0, 0.0, 0.0);
                    for l in 0..n {
                        let w = tbar(l, kk);
                        ac += w * sys.h0()[2 * l];
                        asn += w * sys.h0()[2 * l + 1];
                        bc += w * sys.y()[2 * l];
                        bs += w * sys.y()[2 * l + 1];
                    }
                    out.push((ac * ac + asn * asn, ac * bc + asn * bs));
                }
                out
            };
            let p0 = products(rng.random_range(-3.0..3.0));
            let p1 = products(rng.random_range(-3.0..3.0));
            for (a, b) in p0.iter().zip(&p1) {
                assert_relative_eq!(a.0, b.0, max_relative = 1e-9, epsilon = 1e-9);
                assert_relative_eq!(a.1, b.1, max_relative = 1e-9, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn multi_range_recovers_reference_biases() {
        let sc = reference_scenario(0.0, 0.0, 0.0);
        let (_, _, series) = sc.simulate(3).unwrap();
        let lam = debias_factor(0.0).unwrap();
        let true_phi: Vec<f64> = sc.sensors.iter().map(|s| s.true_azimuth_bias).collect();
        let sol = solve_multi_range(
            &series,
            &sc.positions(),
            &true_phi,
            sc.target.mean_velocity,
            lam,
        )
        .unwrap();
        let expect = [-800.0, 600.0, 800.0];
        for (got, want) in sol.delta_rho.iter().zip(expect) {
            assert!((got - want).abs() < 1e-6, "Δρ {got} vs {want}");
        }
        assert!(sol.residual_norm_sq < 1e-9);

        // Sparsity: each row of G touches at most the two observing
        // sensors' columns.
        let system = assemble_multi_range(
            &series,
            &sc.positions(),
            &true_phi,
            sc.target.mean_velocity,
            lam,
        )
        .unwrap();
        for r in 0..system.g().nrows() {
            let nonzeros = system.g().row(r).iter().filter(|v| **v != 0.0).count();
            assert!((1..=2).contains(&nonzeros), "row {r}: {nonzeros} nonzeros");
        }
    }

    // With the velocity pinned to the single-sensor optimum, the M = 1
    // multi-sensor path must reproduce the single-sensor solution.
    #[test]
    fn multi_reduces_to_single_for_one_sensor() {
        let mut sc = single_sensor_scenario(450.0, 1.0f64.to_radians());
        sc.noise.sigma_rho = 15.0;
        sc.motion.q = 0.02;
        let (_, _, series) = sc.simulate(23).unwrap();
        let lam = debias_factor(0.0).unwrap();
        let trial = 0.0;
        let single = solve_single(&assemble_single(&series, 1, trial, lam).unwrap()).unwrap();
        let multi = solve_multi_range(
            &series,
            &sc.positions(),
            &[trial],
            single.velocity.unwrap(),
            lam,
        )
        .unwrap();
        assert_relative_eq!(multi.delta_rho[0], single.delta_rho[0], max_relative = 1e-9);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn permuting_ids_permutes_solution() {
        let mut sc = reference_scenario(0.0, 10.0, 0.05f64.to_radians());
        let (_, _, series) = sc.simulate(9).unwrap();
        let lam = debias_factor(sc.noise.sigma_phi).unwrap();
        let true_phi: Vec<f64> = sc.sensors.iter().map(|s| s.true_azimuth_bias).collect();
        let sol = solve_multi_range(
            &series,
            &sc.positions(),
            &true_phi,
            sc.target.mean_velocity,
            lam,
        )
        .unwrap();

        // Relabel sensors 1↔3 (swap ids, keep everything else attached).
        let perm = [3usize, 2, 1];
        for s in sc.sensors.iter_mut() {
            s.id = perm[s.id - 1];
        }
        let rows: Vec<Measurement> = series
            .rows()
            .iter()
            .map(|r| Measurement {
                sensor_id: perm[r.sensor_id - 1],
                ..*r
            })
            .collect();
        let permuted = MeasurementSeries::new(rows, 3).unwrap();
        let phi_p = [true_phi[2], true_phi[1], true_phi[0]];
        let sol_p = solve_multi_range(
            &permuted,
            &sc.positions(),
            &phi_p,
            sc.target.mean_velocity,
            lam,
        )
        .unwrap();
        for i in 0..3 {
            assert_relative_eq!(
                sol_p.delta_rho[perm[i] - 1],
                sol.delta_rho[i],
                max_relative = 1e-9
            );
        }
    }

    // First-order optimality: nudging any coordinate cannot reduce the
    // residual.
    #[test]
    fn ls_optimality_spot_check() {
        let mut sc = reference_scenario(0.05, 20.0, 0.1f64.to_radians());
        sc.horizon = 48.0;
        let (_, _, series) = sc.simulate(13).unwrap();
        let lam = debias_factor(sc.noise.sigma_phi).unwrap();
        let phi: Vec<f64> = sc.sensors.iter().map(|s| s.true_azimuth_bias).collect();
        let system =
            assemble_multi_range(&series, &sc.positions(), &phi, sc.target.mean_velocity, lam)
                .unwrap();
        let sol = solve_multi_range(&series, &sc.positions(), &phi, sc.target.mean_velocity, lam)
            .unwrap();
        let base = DVector::from_column_slice(&sol.delta_rho);
        let residual = |x: &DVector<f64>| (system.g() * x - system.y()).norm_squared();
        let r0 = residual(&base);
        assert_relative_eq!(r0, sol.residual_norm_sq, max_relative = 1e-12);
        for i in 0..3 {
            for eps in [-0.5, 0.5] {
                let mut p = base.clone();
                p[i] += eps;
                assert!(residual(&p) >= r0);
            }
        }
    }

    #[test]
    fn collinear_geometry_rejected() {
        // Sensor at the origin, target receding along the x-axis: every
        // azimuth is zero and the range column is degenerate.
        let rows: Vec<Measurement> = (0..5)
            .map(|i| Measurement {
                time: i as f64 * 5.0,
                sensor_id: 1,
                polar: PolarPair::new(1000.0 + 200.0 * i as f64, 0.0),
            })
            .collect();
        let series = MeasurementSeries::new(rows, 1).unwrap();
        let sys = assemble_single(&series, 1, 0.0, debias_factor(0.0).unwrap()).unwrap();
        assert!(matches!(
            solve_single(&sys),
            Err(RangeError::DegenerateGeometry { .. })
        ));
    }
}
