//! Dense primal-dual interior-point solver for the unit-diagonal SDP
//!
//! ```text
//! min  Tr(CX)   s.t.  diag(X) = 1,  X ⪰ 0,  X ∈ H^n
//! ```
//!
//! with Hermitian `C`. The dual is `max −1ᵀy` subject to
//! `Z = C + Diag(y) ⪰ 0`, and the duality gap of a feasible pair is
//! `Tr(CX) + 1ᵀy = Tr(ZX) ≥ 0`.
//!
//! The solver follows the central path `XZ = μI` with a Mehrotra
//! predictor-corrector scheme. Both the primal start `X = I` and the dual
//! start `y = (|λ_min(C)| + 1)·1` are strictly feasible, `Z` is kept equal
//! to `C + Diag(y)` by construction (so dual feasibility is exact), and the
//! Newton step enforces `diag(ΔX) = 1 - diag(X)`, keeping the primal
//! feasible to solver precision. Problems here are tiny (`n = M + 1`, a
//! handful of sensors), so everything is dense and each Newton system is an
//! `n×n` real solve.
//!
//! Matrices are complex Hermitian natively; the dimension stays `n` instead
//! of the `2n` of a real symmetric embedding.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Hermitian deviation above which a cost matrix is rejected.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Complementarity constant: at `Optimal`, `‖[C + Diag(y)]X‖_F` is below
/// `COMPLEMENTARITY_FACTOR · tol · (1 + ‖C‖)(1 + ‖X‖)`.
///
/// The achievable floor is set by the accuracy of the Schur-complement
/// solve near the optimum (ill-conditioning grows as the barrier
/// parameter shrinks), observed around `1e-6` relative on badly scaled
/// instances; demanding more drives the dual into factorization
/// breakdown before the product can improve.
pub const COMPLEMENTARITY_FACTOR: f64 = 1000.0;

#[derive(Debug, Error)]
pub enum SdpError {
    #[error("cost matrix is not Hermitian: max deviation {0:.3e}")]
    NotHermitian(f64),
    #[error("dimension {0} too small, need n >= 2")]
    DimensionTooSmall(usize),
}

/// Options for [`solve`].
#[derive(Clone, Copy, Debug)]
pub struct SdpOptions {
    /// Relative duality-gap tolerance: stop when
    /// `|gap| <= tol · (1 + |Tr(CX)|)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Fraction of the step to the positive-semidefinite boundary.
    pub boundary_fraction: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 100,
            boundary_fraction: 0.98,
        }
    }
}

/// Termination state of a solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdpStatus {
    /// Feasible pair with relative gap below tolerance.
    Optimal,
    /// Iteration budget exhausted; best iterates returned.
    MaxIter,
    /// A linearization could not be factored; diagnostics in `message`.
    NumericalFailure,
}

/// A validated unit-diagonal SDP instance.
#[derive(Clone, Debug)]
pub struct DiagSdpProblem {
    c: DMatrix<Complex64>,
}

impl DiagSdpProblem {
    /// Validates Hermitian symmetry (within [`HERMITIAN_TOL`], relative to
    /// the matrix scale) and dimension; rejects rather than symmetrizes.
    pub fn new(c: DMatrix<Complex64>) -> Result<Self, SdpError> {
        let n = c.nrows();
        if n < 2 || c.ncols() != n {
            return Err(SdpError::DimensionTooSmall(n.min(c.ncols())));
        }
        let scale = 1.0f64.max(c.norm());
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                dev = dev.max((c[(i, j)] - c[(j, i)].conj()).norm());
            }
        }
        if dev > HERMITIAN_TOL * scale {
            return Err(SdpError::NotHermitian(dev));
        }
        Ok(Self { c })
    }

    pub fn cost(&self) -> &DMatrix<Complex64> {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.c.nrows()
    }
}

/// Primal/dual pair returned by [`solve`].
#[derive(Clone, Debug)]
pub struct DiagSdpSolution {
    /// Primal matrix, Hermitian with unit diagonal.
    pub x: DMatrix<Complex64>,
    /// Dual vector: `C + Diag(y) ⪰ 0`.
    pub y: DVector<f64>,
    /// `Tr(CX)`.
    pub primal_obj: f64,
    /// `−1ᵀy`; equals the primal objective at optimality.
    pub dual_obj: f64,
    /// `Tr(CX) + 1ᵀy`.
    pub gap: f64,
    pub iterations: usize,
    pub status: SdpStatus,
    /// Diagnostics for non-optimal terminations.
    pub message: Option<String>,
}

/// `Re Tr(AB)` for Hermitian `A`, `B`.
fn tr_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.re * y.re + x.im * y.im; // Re(x · conj(y)), b Hermitian
    }
    acc
}

/// `(A + A†)/2` with the diagonal forced real.
fn hermitian_part(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut h = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    for i in 0..h.nrows() {
        let d = h[(i, i)];
        h[(i, i)] = Complex64::new(d.re, 0.0);
    }
    h
}

/// Smallest eigenvalue of a Hermitian matrix.
pub(crate) fn min_eigenvalue(a: &DMatrix<Complex64>) -> f64 {
    a.clone().symmetric_eigen().eigenvalues.min()
}

/// Largest admissible `α` with `S + α ΔS ⪰ 0`, for `S ≻ 0`.
///
/// Factors `S = LL†` and reads the most negative eigenvalue of
/// `L⁻¹ ΔS L⁻†`; `∞` when the direction never leaves the cone.
fn max_step(s_chol: &Cholesky<Complex64, nalgebra::Dyn>, delta: &DMatrix<Complex64>) -> f64 {
    let l = s_chol.l();
    let b = l.solve_lower_triangular(delta).expect("L is nonsingular");
    let w = l
        .solve_lower_triangular(&b.adjoint())
        .expect("L is nonsingular")
        .adjoint();
    let lambda = min_eigenvalue(&hermitian_part(&w));
    if lambda >= -1e-14 {
        f64::INFINITY
    } else {
        -1.0 / lambda
    }
}

/// `sym(X Diag(d) Zinv)` — the y-dependent part of the primal step.
fn coupled_term(
    x: &DMatrix<Complex64>,
    d: &DVector<f64>,
    zinv: &DMatrix<Complex64>,
) -> DMatrix<Complex64> {
    let n = x.nrows();
    let mut xd = x.clone();
    for j in 0..n {
        let s = Complex64::new(d[j], 0.0);
        for i in 0..n {
            xd[(i, j)] *= s;
        }
    }
    hermitian_part(&(xd * zinv))
}

/// Solves the unit-diagonal SDP by predictor-corrector path following.
///
/// Always returns a solution object; inspect `status`. `MaxIter` and
/// `NumericalFailure` carry the best iterates reached.
pub fn solve(problem: &DiagSdpProblem, opts: &SdpOptions) -> DiagSdpSolution {
    let c = &problem.c;
    let n = problem.dim();
    let nf = n as f64;
    let tau = opts.boundary_fraction;

    let mut x = DMatrix::<Complex64>::identity(n, n);
    let y0 = min_eigenvalue(c).abs() + 1.0;
    let mut y = DVector::from_element(n, y0);

    let finish = |x: DMatrix<Complex64>,
                  y: DVector<f64>,
                  iterations: usize,
                  status: SdpStatus,
                  message: Option<String>| {
        let primal_obj = tr_product(c, &x);
        let dual_obj = -y.sum();
        DiagSdpSolution {
            gap: primal_obj - dual_obj,
            x,
            y,
            primal_obj,
            dual_obj,
            iterations,
            status,
            message,
        }
    };

    for iter in 0..opts.max_iter {
        let z = {
            let mut z = c.clone();
            for i in 0..n {
                z[(i, i)] += Complex64::new(y[i], 0.0);
            }
            z
        };
        let primal_obj = tr_product(c, &x);
        let gap = primal_obj + y.sum();
        // Converged = small gap *and* small complementarity residual; the
        // gap alone can undersell how far XZ is from zero off the trace.
        let comp = (&z * &x).norm();
        let comp_bound = COMPLEMENTARITY_FACTOR * opts.tol * (1.0 + c.norm()) * (1.0 + x.norm());
        if gap.abs() <= opts.tol * (1.0 + primal_obj.abs()) && comp <= comp_bound {
            return finish(x, y, iter, SdpStatus::Optimal, None);
        }

        let Some(z_chol) = z.clone().cholesky() else {
            return finish(
                x,
                y,
                iter,
                SdpStatus::NumericalFailure,
                Some(format!(
                    "dual matrix lost positive definiteness at iteration {iter} \
                     (gap {gap:.3e}, comp {comp:.3e}, comp bound {comp_bound:.3e})"
                )),
            );
        };
        let Some(x_chol) = x.clone().cholesky() else {
            return finish(
                x,
                y,
                iter,
                SdpStatus::NumericalFailure,
                Some(format!(
                    "primal matrix lost positive definiteness at iteration {iter} \
                     (gap {gap:.3e}, comp {comp:.3e}, comp bound {comp_bound:.3e})"
                )),
            );
        };
        let zinv = z_chol.inverse();
        let mu = tr_product(&x, &z) / nf;

        // Schur matrix of the diagonal constraint: M_ij = Re(X_ij conj(Zinv_ij)).
        let mut schur = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let xe = x[(i, j)];
                let ze = zinv[(i, j)];
                schur[(i, j)] = xe.re * ze.re + xe.im * ze.im;
            }
        }
        let Some(schur_chol) = schur.clone().cholesky() else {
            return finish(
                x,
                y,
                iter,
                SdpStatus::NumericalFailure,
                Some(format!(
                    "indefinite Newton linearization at iteration {iter}"
                )),
            );
        };

        // Predictor: aim at μ = 0.
        let dy_aff = schur_chol.solve(&DVector::from_element(n, -1.0));
        let dx_aff = -&x - coupled_term(&x, &dy_aff, &zinv);
        let dz_aff = DMatrix::<Complex64>::from_diagonal(&dy_aff.map(|v| Complex64::new(v, 0.0)));
        let ap_aff = (tau * max_step(&x_chol, &dx_aff)).min(1.0);
        let ad_aff = (tau * max_step(&z_chol, &dz_aff)).min(1.0);
        let x_try = &x + &dx_aff * Complex64::new(ap_aff, 0.0);
        let z_try = &z + &dz_aff * Complex64::new(ad_aff, 0.0);
        let mu_aff = tr_product(&x_try, &z_try) / nf;
        let sigma = (mu_aff / mu).powi(3).clamp(0.0, 1.0);

        // Corrector with Mehrotra's second-order term.
        let smu = Complex64::new(sigma * mu, 0.0);
        let known = {
            let second = hermitian_part(&(&dx_aff * &dz_aff * &zinv));
            &zinv * smu - &x - second
        };
        let r_p = DVector::from_fn(n, |i, _| 1.0 - x[(i, i)].re);
        let rhs = DVector::from_fn(n, |i, _| known[(i, i)].re - r_p[i]);
        let dy = schur_chol.solve(&rhs);
        let dx = &known - coupled_term(&x, &dy, &zinv);
        let dz = DMatrix::<Complex64>::from_diagonal(&dy.map(|v| Complex64::new(v, 0.0)));

        let ap = (tau * max_step(&x_chol, &dx)).min(1.0);
        let ad = (tau * max_step(&z_chol, &dz)).min(1.0);
        x = hermitian_part(&(&x + &dx * Complex64::new(ap, 0.0)));
        y += &dy * ad;
    }

    let iterations = opts.max_iter;
    finish(
        x,
        y,
        iterations,
        SdpStatus::MaxIter,
        Some("iteration budget exhausted".into()),
    )
}

/// Rank-one extraction: if `λ₂/λ₁ < ratio_threshold`, returns the leading
/// eigenvector scaled by `√λ₁` and then normalized to unit modulus entry
/// by entry; otherwise `None`.
pub fn extract_rank_one(
    x: &DMatrix<Complex64>,
    ratio_threshold: f64,
) -> Option<DVector<Complex64>> {
    let eig = x.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let l1 = eig.eigenvalues[order[0]];
    let l2 = eig.eigenvalues[order[1]];
    if l1 <= 0.0 || l2 / l1 >= ratio_threshold {
        return None;
    }
    let scale = Complex64::new(l1.sqrt(), 0.0);
    let mut v: DVector<Complex64> = eig.eigenvectors.column(order[0]).into_owned() * scale;
    for e in v.iter_mut() {
        let m = e.norm();
        *e = if m < 1e-12 {
            Complex64::new(1.0, 0.0)
        } else {
            *e / m
        };
    }
    Some(v)
}

/// `Tr(CX) + 1ᵀy` — zero for an optimal pair. Under `diag(X) = 1` this
/// equals `Tr([C + Diag(y)]X)`.
pub fn duality_gap(x: &DMatrix<Complex64>, y: &DVector<f64>, c: &DMatrix<Complex64>) -> f64 {
    tr_product(c, x) + y.sum()
}
