//! Azimuth-bias estimation: unit-modulus QCQP, semidefinite relaxation,
//! gradient projection, and rank-one certification.
//!
//! With range biases fixed, writing each azimuth bias as a unit-modulus
//! complex number `x_m = e^{jΔφ_m}` and the velocity as a complex scalar
//! turns the matching objective into
//!
//! ```text
//! min ‖Hx − tv + c‖²   s.t. |x_m| = 1
//! ```
//!
//! where row `k` of `H` holds the debiased measurement phasors of the gap
//! `k → k+1`, `t` the time gaps, and `c` the sensor-position differences.
//! The velocity eliminates in closed form through the projector
//! `P = I − t tᵀ/‖t‖²` (never materialized; applied through `t`), leaving a
//! quadratic over the torus. Homogenizing with one extra coordinate gives
//! `min x†Cx` over unit-modulus `x ∈ C^{M+1}`, whose semidefinite
//! relaxation is the unit-diagonal SDP solved by [`crate::sdp`].
//!
//! In practice — and provably for small enough data error — the relaxation
//! is tight: the SDP minimizer has rank one and the angles read off its
//! leading eigenvector solve the original problem. Tightness is checked
//! two ways: spectrally (eigenvalue ratio) and through the four
//! Karush-Kuhn-Tucker/uniqueness conditions of the dual certificate
//! ([`check_certificate`]). When the ratio test fails, the leading
//! eigenvector is rounded to the torus and polished by projected gradient
//! descent ([`solve_gp`]), and the result is flagged as rounded.

use crate::geometry::{wrap_angle, CartesianPoint, DebiasFactor};
use crate::scenario::MeasurementSeries;
use crate::sdp::{self, DiagSdpProblem, DiagSdpSolution, SdpOptions, SdpStatus};
use nalgebra::{DMatrix, DVector, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AzimuthError {
    #[error("expected {expected} per-sensor values, got {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("need at least M+1 = {need} measurements, got {got}")]
    InsufficientData { need: usize, got: usize },
    #[error("time gaps are all zero")]
    ZeroGaps,
    #[error("H†PH is singular; azimuths are not identifiable from this series")]
    NotIdentifiable,
    #[error("sdp solver did not converge: {status:?} after {iterations} iterations, gap {gap:.3e}{}",
            .message.as_deref().map(|m| format!(" ({m})")).unwrap_or_default())]
    SdpFailure {
        status: SdpStatus,
        iterations: usize,
        gap: f64,
        message: Option<String>,
    },
    #[error(transparent)]
    Sdp(#[from] sdp::SdpError),
}

/// Whether an azimuth solution came from a certified rank-one relaxation
/// or from rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tightness {
    /// The SDP minimizer passed the spectral rank-one test.
    RankOneCertified,
    /// Leading-eigenvector rounding (plus gradient polish) was used.
    Rounded,
}

/// Data of the velocity-eliminated azimuth subproblem.
#[derive(Clone, Debug)]
pub struct QcqpData {
    h: DMatrix<Complex64>,
    t: DVector<f64>,
    c: DVector<Complex64>,
    t_norm_sq: f64,
}

impl QcqpData {
    /// Assembles the data from raw parts. `h` is `(K-1)×M`, `t` and `c`
    /// length `K-1`; `t` must not be all zero.
    pub fn from_parts(
        h: DMatrix<Complex64>,
        t: DVector<f64>,
        c: DVector<Complex64>,
    ) -> Result<Self, AzimuthError> {
        let rows = h.nrows();
        if t.len() != rows || c.len() != rows {
            return Err(AzimuthError::CountMismatch {
                expected: rows,
                got: t.len().min(c.len()),
            });
        }
        let t_norm_sq = t.norm_squared();
        if t_norm_sq == 0.0 {
            return Err(AzimuthError::ZeroGaps);
        }
        Ok(Self { h, t, c, t_norm_sq })
    }

    pub fn h(&self) -> &DMatrix<Complex64> {
        &self.h
    }

    pub fn t(&self) -> &DVector<f64> {
        &self.t
    }

    pub fn c(&self) -> &DVector<Complex64> {
        &self.c
    }

    pub fn num_sensors(&self) -> usize {
        self.h.ncols()
    }

    /// Applies `P = I − t tᵀ/‖t‖²` to a vector.
    pub fn project(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut dot = Complex64::new(0.0, 0.0);
        for (ti, vi) in self.t.iter().zip(v.iter()) {
            dot += Complex64::new(*ti, 0.0) * vi;
        }
        let scale = dot / Complex64::new(self.t_norm_sq, 0.0);
        DVector::from_fn(v.len(), |i, _| {
            v[i] - Complex64::new(self.t[i], 0.0) * scale
        })
    }

    /// Residual `‖P(H x̃ + c)‖²` at dehomogenized angles `x̃ ∈ C^M`.
    pub fn residual_sq(&self, x_tilde: &DVector<Complex64>) -> f64 {
        let w = &self.h * x_tilde + &self.c;
        self.project(&w).norm_squared()
    }
}

/// The homogenized cost: `C = [[H†PH, H†Pc], [c†PH, 0]]`, Hermitian with a
/// zero bottom-right entry, plus the constant `‖Pc‖²` needed to map
/// `x†Cx` back to the residual value.
#[derive(Clone, Debug)]
pub struct HomogeneousCost {
    c: DMatrix<Complex64>,
    pc_norm_sq: f64,
}

impl HomogeneousCost {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.c.nrows()
    }

    /// The constant `‖Pc‖²`: for unit-modulus `x`,
    /// `x†Cx + ‖Pc‖² = ‖P(H x̃ + c)‖²` with `x̃ = x_{1:M}/x_{M+1}`.
    pub fn pc_norm_sq(&self) -> f64 {
        self.pc_norm_sq
    }

    /// `Re(x†Cx)`.
    pub fn quad_form(&self, x: &DVector<Complex64>) -> f64 {
        let cx = &self.c * x;
        let mut acc = 0.0;
        for (xi, ci) in x.iter().zip(cx.iter()) {
            acc += (xi.conj() * ci).re;
        }
        acc
    }
}

/// One azimuth-block solution: angles, velocity, the unit-modulus vector
/// they came from, the attained residual, and how it was obtained.
#[derive(Clone, Debug)]
pub struct AzimuthSolution {
    /// Per-sensor azimuth biases, radians, wrapped.
    pub delta_phi: Vec<f64>,
    pub velocity: Vector2<f64>,
    /// The homogeneous unit-modulus vector (length M+1).
    pub unit_vector: DVector<Complex64>,
    /// Residual value `‖P(H x̃ + c)‖²` (≥ 0).
    pub objective: f64,
    pub tightness: Tightness,
}

/// Builds the azimuth QCQP data from a measurement series with fixed range
/// biases.
///
/// For the gap `k → k+1` observed by sensors `s_k`, `s_{k+1}`, row `k`
/// carries `λ⁻¹(ρ_{k+1}+Δρ_{s_{k+1}})e^{jφ_{k+1}}` in column `s_{k+1}` and
/// `−λ⁻¹(ρ_k+Δρ_{s_k})e^{jφ_k}` in column `s_k` (combined when the sensor
/// repeats), and `c_k` is the complex sensor-position difference.
pub fn build_qcqp(
    series: &MeasurementSeries,
    positions: &[CartesianPoint],
    delta_rho: &[f64],
    lam: DebiasFactor,
) -> Result<QcqpData, AzimuthError> {
    let m = series.num_sensors();
    if delta_rho.len() != m {
        return Err(AzimuthError::CountMismatch {
            expected: m,
            got: delta_rho.len(),
        });
    }
    if positions.len() != m {
        return Err(AzimuthError::CountMismatch {
            expected: m,
            got: positions.len(),
        });
    }
    let k = series.len();
    if k < m + 1 {
        return Err(AzimuthError::InsufficientData {
            need: m + 1,
            got: k,
        });
    }
    let li = lam.inv();
    let rows = series.rows();
    let n = k - 1;
    let mut h = DMatrix::<Complex64>::zeros(n, m);
    let mut t = DVector::<f64>::zeros(n);
    let mut c = DVector::<Complex64>::zeros(n);
    for gap in 0..n {
        let (r0, r1) = (&rows[gap], &rows[gap + 1]);
        let (s0, s1) = (r0.sensor_id - 1, r1.sensor_id - 1);
        let phasor = |rho: f64, drho: f64, phi: f64| Complex64::from_polar(li * (rho + drho), phi);
        h[(gap, s1)] += phasor(r1.polar.range(), delta_rho[s1], r1.polar.azimuth());
        h[(gap, s0)] -= phasor(r0.polar.range(), delta_rho[s0], r0.polar.azimuth());
        t[gap] = r1.time - r0.time;
        let (p0, p1) = (positions[s0], positions[s1]);
        c[gap] = Complex64::new(p1.x - p0.x, p1.y - p0.y);
    }
    QcqpData::from_parts(h, t, c)
}

/// Homogenizes the QCQP into `min x†Cx` over unit-modulus `x ∈ C^{M+1}`.
///
/// `C` is assembled from its upper triangle so it is Hermitian by
/// construction; the bottom-right entry is exactly zero.
pub fn homogenize(q: &QcqpData) -> HomogeneousCost {
    let m = q.num_sensors();
    let mut hp = q.h.clone();
    for j in 0..m {
        let col = q.project(&hp.column(j).into_owned());
        hp.set_column(j, &col);
    }
    let cp = q.project(&q.c);
    let a = hp.adjoint() * &hp;
    let b = hp.adjoint() * &cp;

    let mut c = DMatrix::<Complex64>::zeros(m + 1, m + 1);
    for i in 0..m {
        c[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..m {
            c[(i, j)] = a[(i, j)];
            c[(j, i)] = a[(i, j)].conj();
        }
        c[(i, m)] = b[i];
        c[(m, i)] = b[i].conj();
    }
    HomogeneousCost {
        c,
        pc_norm_sq: cp.norm_squared(),
    }
}

/// Dehomogenizes: `x̃ = x_{1:M} / x_{M+1}`.
fn dehomogenize(x: &DVector<Complex64>) -> DVector<Complex64> {
    let m = x.len() - 1;
    let last = x[m];
    DVector::from_fn(m, |i, _| x[i] / last)
}

/// Extracts wrapped angles `∠(x_m / x_{M+1})`; invariant under a global
/// phase by construction of the ratio.
pub fn extract_angles(x: &DVector<Complex64>) -> Vec<f64> {
    dehomogenize(x)
        .iter()
        .map(|v| wrap_angle(v.arg()))
        .collect()
}

/// Closed-form velocity from a homogeneous unit vector:
/// `v = (tᵀt)⁻¹ tᵀ(H x̃ + c)` read as a complex number.
pub fn recover_velocity(x: &DVector<Complex64>, q: &QcqpData) -> Vector2<f64> {
    let w = &q.h * dehomogenize(x) + &q.c;
    let mut dot = Complex64::new(0.0, 0.0);
    for (ti, wi) in q.t.iter().zip(w.iter()) {
        dot += Complex64::new(*ti, 0.0) * wi;
    }
    let v = dot / Complex64::new(q.t_norm_sq, 0.0);
    Vector2::new(v.re, v.im)
}

fn solution_from_vector(
    x: DVector<Complex64>,
    q: &QcqpData,
    tightness: Tightness,
) -> AzimuthSolution {
    let delta_phi = extract_angles(&x);
    let velocity = recover_velocity(&x, q);
    let objective = q.residual_sq(&dehomogenize(&x));
    AzimuthSolution {
        delta_phi,
        velocity,
        unit_vector: x,
        objective,
        tightness,
    }
}

/// Newton refinement of the phase stationarity conditions.
///
/// In the phase parametrization `x̃_m = e^{jφ_m}` the reduced objective is
/// `f(φ) = x̃†Ax̃ + 2Re(b†x̃) + const` with `A = H†PH`, `b = H†Pc` — the top
/// blocks of the homogenized cost. Gradient and Hessian are analytic:
///
/// ```text
/// g_m = 2 Im(x̃̄_m u_m),                u = Ax̃ + b
/// ∇²_mn = 2 Re(x̃̄_m A_mn x̃_n)  (m≠n),  ∇²_mm = 2 A_mm − 2 Re(x̃̄_m u_m)
/// ```
///
/// A handful of Newton steps reaches machine-level stationarity. This
/// avoids the accuracy floor of objective-comparison line searches, whose
/// evaluation noise scales with `‖A‖` (squared kilometers here). Returns
/// the iterate with the smallest gradient norm; never worse than the
/// input.
fn polish_angles(cost: &HomogeneousCost, x_tilde: &DVector<Complex64>) -> DVector<Complex64> {
    let m = x_tilde.len();
    let a = cost.c.view((0, 0), (m, m)).into_owned();
    let b: DVector<Complex64> = cost.c.view((0, m), (m, 1)).into_owned().column(0).into();

    let grad = |x: &DVector<Complex64>| -> (DVector<f64>, DVector<Complex64>) {
        let u = &a * x + &b;
        (DVector::from_fn(m, |i, _| 2.0 * (x[i].conj() * u[i]).im), u)
    };

    let mut phi: Vec<f64> = x_tilde.iter().map(|v| v.arg()).collect();
    let unit = |phi: &[f64]| DVector::from_fn(m, |i, _| Complex64::from_polar(1.0, phi[i]));

    let mut best_phi = phi.clone();
    let (g0, _) = grad(&unit(&phi));
    let mut best_norm = g0.norm();

    for _ in 0..40 {
        let x = unit(&phi);
        let (g, u) = grad(&x);
        let gnorm = g.norm();
        if gnorm < best_norm {
            best_norm = gnorm;
            best_phi = phi.clone();
        }
        let mut hess = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                hess[(i, j)] = if i == j {
                    2.0 * a[(i, i)].re - 2.0 * (x[i].conj() * u[i]).re
                } else {
                    2.0 * (x[i].conj() * a[(i, j)] * x[j]).re
                };
            }
        }
        let Some(chol) = hess.cholesky() else { break };
        let step = chol.solve(&(-&g));
        let step_norm = step.amax();
        for i in 0..m {
            phi[i] += step[i];
        }
        if step_norm < 1e-15 {
            let (g_final, _) = grad(&unit(&phi));
            if g_final.norm() < best_norm {
                best_phi = phi.clone();
            }
            break;
        }
    }
    unit(&best_phi)
}

/// Re-homogenizes polished angles: `[e^{jφ}; 1]`.
fn rehomogenize(x_tilde: &DVector<Complex64>) -> DVector<Complex64> {
    let m = x_tilde.len();
    DVector::from_fn(m + 1, |i, _| {
        if i < m {
            x_tilde[i]
        } else {
            Complex64::new(1.0, 0.0)
        }
    })
}

/// Options for the semidefinite-relaxation path.
#[derive(Clone, Copy, Debug)]
pub struct SdrOptions {
    pub sdp: SdpOptions,
    /// Declare the primal matrix rank one when `λ₂/λ₁` is below this.
    pub rank_one_ratio: f64,
    /// Gradient-projection settings for the rounding fallback.
    pub gp: GpOptions,
}

impl Default for SdrOptions {
    fn default() -> Self {
        Self {
            sdp: SdpOptions::default(),
            rank_one_ratio: 1e-6,
            gp: GpOptions::default(),
        }
    }
}

/// Solves the azimuth block through the semidefinite relaxation.
///
/// Returns the azimuth solution alongside the raw SDP primal/dual pair so
/// callers can run [`check_certificate`]. If the primal fails the spectral
/// rank-one test, the leading eigenvector is rounded to unit modulus,
/// polished with [`solve_gp`], and the result flagged [`Tightness::Rounded`].
pub fn solve_sdr(
    cost: &HomogeneousCost,
    q: &QcqpData,
    opts: &SdrOptions,
) -> Result<(AzimuthSolution, DiagSdpSolution), AzimuthError> {
    let problem = DiagSdpProblem::new(cost.c.clone())?;
    let sdp_sol = sdp::solve(&problem, &opts.sdp);
    if sdp_sol.status != SdpStatus::Optimal {
        return Err(AzimuthError::SdpFailure {
            status: sdp_sol.status,
            iterations: sdp_sol.iterations,
            gap: sdp_sol.gap,
            message: sdp_sol.message,
        });
    }
    match sdp::extract_rank_one(&sdp_sol.x, opts.rank_one_ratio) {
        Some(x) => {
            // The eigenvector carries the interior-point gap into the
            // angles; a Newton polish removes it without touching the
            // certification.
            let refined = rehomogenize(&polish_angles(cost, &dehomogenize(&x)));
            Ok((
                solution_from_vector(refined, q, Tightness::RankOneCertified),
                sdp_sol,
            ))
        }
        None => {
            // Round the leading eigenvector to the torus, then descend.
            let eig = sdp_sol.x.clone().symmetric_eigen();
            let lead = eig
                .eigenvalues
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .expect("nonempty spectrum");
            let x0 = DVector::from_fn(cost.dim(), |i, _| {
                let e = eig.eigenvectors[(i, lead)];
                let m = e.norm();
                if m < 1e-12 {
                    Complex64::new(1.0, 0.0)
                } else {
                    e / m
                }
            });
            let gp = solve_gp(cost, q, &x0, &opts.gp)?;
            let refined = rehomogenize(&polish_angles(
                cost,
                &dehomogenize(&gp.solution.unit_vector),
            ));
            Ok((
                solution_from_vector(refined, q, Tightness::Rounded),
                sdp_sol,
            ))
        }
    }
}

/// Options for projected gradient descent on the torus.
#[derive(Clone, Copy, Debug)]
pub struct GpOptions {
    /// Starting step; when `None`, `1/λ_max(C)` estimated by power
    /// iteration.
    pub initial_step: Option<f64>,
    /// Backtracking shrink factor.
    pub armijo_factor: f64,
    /// Sufficient-decrease constant.
    pub sufficient_decrease: f64,
    /// Stop when the projected-gradient norm falls below
    /// `grad_tol · (1 + ‖C‖_F)` — relative, so physical scales behave.
    pub grad_tol: f64,
    pub max_iters: usize,
}

impl Default for GpOptions {
    fn default() -> Self {
        Self {
            initial_step: None,
            armijo_factor: 0.5,
            sufficient_decrease: 1e-4,
            grad_tol: 1e-10,
            max_iters: 5000,
        }
    }
}

/// Outcome of a gradient-projection run.
#[derive(Clone, Debug)]
pub struct GpResult {
    pub solution: AzimuthSolution,
    /// False when the iteration budget ran out above tolerance.
    pub converged: bool,
    pub iterations: usize,
    /// Objective (`x†Cx`) after the start and each accepted step;
    /// nonincreasing.
    pub objective_trace: Vec<f64>,
}

/// Largest eigenvalue estimate by power iteration on `C + sI` (shifted to
/// dominate in magnitude).
fn lambda_max_estimate(c: &DMatrix<Complex64>) -> f64 {
    let n = c.nrows();
    let shift = c.norm();
    let shifted = c + DMatrix::<Complex64>::identity(n, n) * Complex64::new(shift, 0.0);
    let mut v = DVector::from_element(n, Complex64::new(1.0, 0.3));
    v /= Complex64::new(v.norm(), 0.0);
    let mut lam = 0.0;
    for _ in 0..50 {
        let w = &shifted * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / Complex64::new(norm, 0.0);
        lam = norm;
    }
    (lam - shift).max(0.0)
}

fn project_torus(x: &DVector<Complex64>) -> DVector<Complex64> {
    DVector::from_fn(x.len(), |i, _| {
        let m = x[i].norm();
        if m < 1e-300 {
            Complex64::new(1.0, 0.0)
        } else {
            x[i] / m
        }
    })
}

/// Minimizes `x†Cx` over unit-modulus `x` by projected gradient descent
/// with Armijo backtracking: `x ← project(x − α · 2Cx)`.
///
/// The objective never increases; termination is by projected-gradient
/// norm or the iteration cap (the best iterate is returned either way,
/// flagged unconverged in the latter case).
pub fn solve_gp(
    cost: &HomogeneousCost,
    q: &QcqpData,
    x0: &DVector<Complex64>,
    opts: &GpOptions,
) -> Result<GpResult, AzimuthError> {
    if x0.len() != cost.dim() {
        return Err(AzimuthError::CountMismatch {
            expected: cost.dim(),
            got: x0.len(),
        });
    }
    let c = &cost.c;
    let grad_scale = 1.0 + c.norm();
    let step0 = match opts.initial_step {
        Some(s) => s,
        None => {
            let lam = lambda_max_estimate(c);
            if lam > 0.0 {
                1.0 / lam
            } else {
                1.0
            }
        }
    };

    let mut x = project_torus(x0);
    let mut f = cost.quad_form(&x);
    let mut trace = vec![f];
    let mut converged = false;
    let mut iterations = 0;
    // Step carries over between iterations (doubled after each accepted
    // step) so the fixed 1/λ_max floor does not throttle flat directions.
    let mut alpha_start = step0;

    for iter in 0..opts.max_iters {
        iterations = iter;
        let grad = (c * &x) * Complex64::new(2.0, 0.0);
        // Tangential component: g − Re(g ∘ x̄) ∘ x.
        let rgrad = DVector::from_fn(x.len(), |i, _| {
            grad[i] - Complex64::new((grad[i] * x[i].conj()).re, 0.0) * x[i]
        });
        let rnorm = rgrad.norm();
        if rnorm <= opts.grad_tol * grad_scale {
            converged = true;
            break;
        }
        let mut alpha = alpha_start;
        let mut accepted = false;
        for _ in 0..80 {
            let trial = project_torus(&(&x - &grad * Complex64::new(alpha, 0.0)));
            let f_trial = cost.quad_form(&trial);
            if f_trial <= f - opts.sufficient_decrease * alpha * rnorm * rnorm {
                x = trial;
                f = f_trial;
                trace.push(f);
                accepted = true;
                alpha_start = (2.0 * alpha).max(step0);
                break;
            }
            alpha *= opts.armijo_factor;
        }
        if !accepted {
            // No descent at machine-level steps: stationary for practical
            // purposes.
            converged = true;
            break;
        }
    }

    Ok(GpResult {
        solution: solution_from_vector(x, q, Tightness::Rounded),
        converged,
        iterations,
        objective_trace: trace,
    })
}

/// Per-condition result of the rank-one dual certificate.
///
/// The four conditions: (1) `diag(X)=1`, `X ⪰ 0`; (2) `C + Diag(y) ⪰ 0`;
/// (3) `[C + Diag(y)]X = 0`; (4) `H†PH + Diag(y_{1:M}) ≻ 0`. Matrix-scale
/// conditions are tested relative to `1 + ‖C‖` (or `1 + ‖H†PH‖` for
/// condition 4) so the verdicts are unit-free.
#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub primal_feasible: bool,
    pub dual_feasible: bool,
    pub complementary: bool,
    pub reduced_positive_definite: bool,
    /// `max_i |X_ii − 1|`.
    pub diag_deviation: f64,
    /// `λ_min(X)`.
    pub min_eig_primal: f64,
    /// `λ_min(C + Diag(y))`.
    pub min_eig_dual: f64,
    /// `‖[C + Diag(y)]X‖_F`.
    pub complementarity_norm: f64,
    /// `λ_min(H†PH + Diag(y_{1:M}))`.
    pub min_eig_reduced: f64,
    pub tol: f64,
}

impl CertificateReport {
    /// Conditions 1-3 — the KKT part of the certificate.
    pub fn kkt_satisfied(&self) -> bool {
        self.primal_feasible && self.dual_feasible && self.complementary
    }

    /// All four conditions: existence *and* uniqueness of a rank-one
    /// minimizer.
    pub fn all_satisfied(&self) -> bool {
        self.kkt_satisfied() && self.reduced_positive_definite
    }
}

/// Evaluates the four certificate conditions for a primal/dual pair.
pub fn check_certificate(
    x: &DMatrix<Complex64>,
    y: &DVector<f64>,
    cost: &HomogeneousCost,
    q: &QcqpData,
    tol: f64,
) -> CertificateReport {
    let n = cost.dim();
    let scale_c = 1.0 + cost.c.norm();
    let scale_x = 1.0 + x.norm();

    let diag_deviation = (0..n)
        .map(|i| (x[(i, i)].re - 1.0).abs())
        .fold(0.0, f64::max);
    let min_eig_primal = crate::sdp::min_eigenvalue(x);
    let primal_feasible = diag_deviation <= tol && min_eig_primal >= -tol * scale_x;

    let mut z = cost.c.clone();
    for i in 0..n {
        z[(i, i)] += Complex64::new(y[i], 0.0);
    }
    let min_eig_dual = crate::sdp::min_eigenvalue(&z);
    let dual_feasible = min_eig_dual >= -tol * scale_c;

    let complementarity_norm = (&z * x).norm();
    let complementary = complementarity_norm <= tol * scale_c * scale_x;

    let m = q.num_sensors();
    let mut reduced = cost.c.view((0, 0), (m, m)).into_owned();
    for i in 0..m {
        reduced[(i, i)] += Complex64::new(y[i], 0.0);
    }
    let scale_r = 1.0 + reduced.norm();
    let min_eig_reduced = crate::sdp::min_eigenvalue(&reduced);
    let reduced_positive_definite = min_eig_reduced > tol * scale_r;

    CertificateReport {
        primal_feasible,
        dual_feasible,
        complementary,
        reduced_positive_definite,
        diag_deviation,
        min_eig_primal,
        min_eig_dual,
        complementarity_norm,
        min_eig_reduced,
        tol,
    }
}

/// The closed-form primal/dual pair that certifies exact recovery on
/// noiseless data: `x* = [−(H†PH)⁻¹H†Pc; 1]`,
/// `y* = [0; c†PH(H†PH)⁻¹H†Pc]`, `X* = x*x*†`.
///
/// Fails when `H†PH` is singular (azimuths not identifiable).
pub fn construct_certificate_pair(
    q: &QcqpData,
) -> Result<(DMatrix<Complex64>, DVector<f64>), AzimuthError> {
    let m = q.num_sensors();
    let cost = homogenize(q);
    let a = cost.c.view((0, 0), (m, m)).into_owned();
    let b: DVector<Complex64> = cost.c.view((0, m), (m, 1)).into_owned().column(0).into();
    let chol = a.cholesky().ok_or(AzimuthError::NotIdentifiable)?;
    let u = chol.solve(&b);
    let mut x_vec = DVector::<Complex64>::zeros(m + 1);
    for i in 0..m {
        x_vec[i] = -u[i];
    }
    x_vec[m] = Complex64::new(1.0, 0.0);
    let x = &x_vec * x_vec.adjoint();
    let mut y = DVector::<f64>::zeros(m + 1);
    let mut last = Complex64::new(0.0, 0.0);
    for i in 0..m {
        last += b[i].conj() * u[i];
    }
    y[m] = last.re;
    Ok((x, y))
}
