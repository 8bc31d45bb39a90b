//! Polar/Cartesian transforms and the multiplicative debiasing factor.
//!
//! Sensors report range and azimuth relative to their own position; the
//! estimator works in a common Cartesian frame. Under zero-mean Gaussian
//! azimuth noise with standard deviation `σφ`, the naive polar-to-Cartesian
//! conversion is biased: `E[cos(φ + w)] = e^{-σφ²/2} cos φ`. Scaling the
//! converted point by `λ⁻¹` with `λ = e^{-σφ²/2}` makes the conversion
//! unbiased, which is what [`debiased_to_cartesian`] implements.
//!
//! All angles are radians, wrapped to `(-π, π]`; all lengths are meters.
//!
//! ```
//! use multireg::geometry::{to_cartesian, to_polar, PolarPair};
//!
//! let p = PolarPair::new(2.0, std::f64::consts::FRAC_PI_2);
//! let c = to_cartesian(p);
//! assert!((c.x - 0.0).abs() < 1e-15 && (c.y - 2.0).abs() < 1e-15);
//! let back = to_polar(c).unwrap();
//! assert!((back.range() - 2.0).abs() < 1e-15);
//! ```

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    /// `to_polar` at the origin: azimuth is undefined.
    #[error("degenerate origin: both Cartesian components are zero")]
    DegenerateOrigin,
    /// Noise standard deviations must be nonnegative.
    #[error("negative azimuth noise std: {0}")]
    NegativeSigma(f64),
}

/// Wraps an angle to the half-open interval `(-π, π]`.
///
/// `π` maps to `π` and `-π` maps to `π`, so equality comparisons of wrapped
/// angles are unambiguous at the branch cut.
pub fn wrap_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Wrapped difference `a - b`, in `(-π, π]`.
///
/// An estimate of 179° against a truth of -179° differs by 2°, not 358°.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    wrap_angle(a - b)
}

/// A range/azimuth measurement pair. Azimuth is stored wrapped to `(-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarPair {
    range: f64,
    azimuth: f64,
}

impl PolarPair {
    /// Builds a pair, wrapping the azimuth.
    pub fn new(range: f64, azimuth: f64) -> Self {
        Self {
            range,
            azimuth: wrap_angle(azimuth),
        }
    }

    /// Range in meters. May be negative for heavily biased raw measurements;
    /// bias compensation restores nonnegativity in valid regimes.
    pub fn range(&self) -> f64 {
        self.range
    }

    /// Azimuth in radians, in `(-π, π]`.
    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }
}

/// A point in the common Cartesian frame, meters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
}

impl CartesianPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl std::ops::Sub for CartesianPoint {
    type Output = CartesianPoint;
    fn sub(self, rhs: CartesianPoint) -> CartesianPoint {
        CartesianPoint::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Add for CartesianPoint {
    type Output = CartesianPoint;
    fn add(self, rhs: CartesianPoint) -> CartesianPoint {
        CartesianPoint::new(self.x + rhs.x, self.y + rhs.y)
    }
}

/// The multiplicative debiasing factor `λ = e^{-σφ²/2}`, in `(0, 1]`.
///
/// `λ = 1` exactly when `σφ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DebiasFactor {
    lambda: f64,
}

impl DebiasFactor {
    /// The zero-noise factor, `λ = 1`.
    pub fn identity() -> Self {
        Self { lambda: 1.0 }
    }

    pub fn value(&self) -> f64 {
        self.lambda
    }

    /// `λ⁻¹`, the factor actually applied to converted points.
    pub fn inv(&self) -> f64 {
        1.0 / self.lambda
    }
}

/// Computes `λ = e^{-σφ²/2}` for an azimuth noise std in radians.
pub fn debias_factor(sigma_phi: f64) -> Result<DebiasFactor, GeometryError> {
    if sigma_phi < 0.0 {
        return Err(GeometryError::NegativeSigma(sigma_phi));
    }
    Ok(DebiasFactor {
        lambda: (-sigma_phi * sigma_phi / 2.0).exp(),
    })
}

/// Polar to Cartesian: `(ρ cos φ, ρ sin φ)`.
pub fn to_cartesian(p: PolarPair) -> CartesianPoint {
    CartesianPoint::new(p.range * p.azimuth.cos(), p.range * p.azimuth.sin())
}

/// Cartesian to polar: `(√(x²+y²), atan2(y, x))`.
///
/// Errors at the exact origin, where the azimuth is undefined.
pub fn to_polar(c: CartesianPoint) -> Result<PolarPair, GeometryError> {
    if c.x == 0.0 && c.y == 0.0 {
        return Err(GeometryError::DegenerateOrigin);
    }
    Ok(PolarPair::new(c.norm(), c.y.atan2(c.x)))
}

/// Debiased polar to Cartesian: `(λ⁻¹ ρ cos φ, λ⁻¹ ρ sin φ)`.
///
/// With `λ = e^{-σφ²/2}` this conversion is unbiased under Gaussian azimuth
/// noise: averaging it over noise draws recovers the true Cartesian point.
pub fn debiased_to_cartesian(p: PolarPair, lam: DebiasFactor) -> CartesianPoint {
    let s = lam.inv() * p.range;
    CartesianPoint::new(s * p.azimuth.cos(), s * p.azimuth.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;
    use rand_distr::{Distribution, Normal};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    #[test]
    fn cartesian_axis_aligned() {
        let c = to_cartesian(PolarPair::new(1.0, 0.0));
        assert_eq!((c.x, c.y), (1.0, 0.0));
        let c = to_cartesian(PolarPair::new(2.0, FRAC_PI_2));
        assert!(c.x.abs() < 1e-15);
        assert_relative_eq!(c.y, 2.0, max_relative = 1e-15);
        let c = to_cartesian(PolarPair::new(SQRT_2, FRAC_PI_4));
        assert_relative_eq!(c.x, 1.0, max_relative = 1e-15);
        assert_relative_eq!(c.y, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn polar_axis_aligned() {
        let p = to_polar(CartesianPoint::new(0.0, -3.0)).unwrap();
        assert_eq!(p.range(), 3.0);
        assert_relative_eq!(p.azimuth(), -FRAC_PI_2, max_relative = 1e-15);
        let p = to_polar(CartesianPoint::new(1.0, 1.0)).unwrap();
        assert_relative_eq!(p.range(), SQRT_2, max_relative = 1e-15);
        assert_relative_eq!(p.azimuth(), FRAC_PI_4, max_relative = 1e-15);
    }

    #[test]
    fn polar_rejects_origin() {
        assert_eq!(
            to_polar(CartesianPoint::new(0.0, 0.0)),
            Err(GeometryError::DegenerateOrigin)
        );
    }

    // Oracle: the forward transform. 1000 random round trips.
    #[test]
    fn round_trip_random() {
        let mut rng = ChaCha12Rng::seed_from_u64(101);
        for _ in 0..1000 {
            let range = rng.random_range(1e-3..1e6);
            let azimuth = rng.random_range(-PI..PI);
            let p = PolarPair::new(range, azimuth);
            let back = to_polar(to_cartesian(p)).unwrap();
            assert_relative_eq!(back.range(), p.range(), max_relative = 1e-12);
            assert!(angle_diff(back.azimuth(), p.azimuth()).abs() < 1e-12);
        }
    }

    #[test]
    fn debias_factor_values() {
        assert_eq!(debias_factor(0.0).unwrap().value(), 1.0);
        let deg01 = 0.1f64.to_radians();
        assert_relative_eq!(
            debias_factor(deg01).unwrap().value(),
            (-deg01 * deg01 / 2.0).exp(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            debias_factor(deg01).unwrap().value(),
            0.99999848,
            epsilon = 1e-8
        );
        assert_relative_eq!(
            debias_factor(1.0).unwrap().value(),
            0.606_530_659_712_633_4,
            max_relative = 1e-12
        );
        assert!(debias_factor(-0.1).is_err());
    }

    #[test]
    fn debias_factor_monotone() {
        let mut prev = 1.0;
        for i in 1..=20 {
            let lam = debias_factor(0.05 * i as f64).unwrap().value();
            assert!(lam < prev && lam > 0.0);
            prev = lam;
        }
    }

    #[test]
    fn debiased_scaling() {
        let c = debiased_to_cartesian(PolarPair::new(1.0, 0.0), DebiasFactor::identity());
        assert_eq!((c.x, c.y), (1.0, 0.0));
        let half = DebiasFactor { lambda: 0.5 };
        let c = debiased_to_cartesian(PolarPair::new(2.0, PI), half);
        assert_relative_eq!(c.x, -4.0, max_relative = 1e-15);
        assert!(c.y.abs() < 1e-12);
    }

    // Oracle: sample averaging. The debiased conversion of biased, noisy
    // measurements is an unbiased estimator of the true relative position.
    #[test]
    fn debias_compensation_monte_carlo() {
        let truth = CartesianPoint::new(12_000.0, -7_000.0);
        let bias_range = -800.0;
        let bias_azimuth = 2.0f64.to_radians();
        let sigma_rho = 20.0;
        let sigma_phi = 0.5f64.to_radians();
        let lam = debias_factor(sigma_phi).unwrap();

        let true_polar = to_polar(truth).unwrap();
        let n_rho = Normal::new(0.0, sigma_rho).unwrap();
        let n_phi = Normal::new(0.0, sigma_phi).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2024);

        let n = 1_000_000usize;
        let (mut sx, mut sy, mut sxx, mut syy) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let z = PolarPair::new(
                true_polar.range() - bias_range + n_rho.sample(&mut rng),
                true_polar.azimuth() - bias_azimuth + n_phi.sample(&mut rng),
            );
            let compensated = PolarPair::new(z.range() + bias_range, z.azimuth() + bias_azimuth);
            let c = debiased_to_cartesian(compensated, lam);
            sx += c.x;
            sy += c.y;
            sxx += c.x * c.x;
            syy += c.y * c.y;
        }
        let nf = n as f64;
        let (mx, my) = (sx / nf, sy / nf);
        let sem_x = ((sxx / nf - mx * mx) / nf).sqrt();
        let sem_y = ((syy / nf - my * my) / nf).sqrt();
        assert!(
            (mx - truth.x).abs() < 3.0 * sem_x,
            "x mean {mx} vs {} (sem {sem_x})",
            truth.x
        );
        assert!(
            (my - truth.y).abs() < 3.0 * sem_y,
            "y mean {my} vs {} (sem {sem_y})",
            truth.y
        );
    }

    #[test]
    fn wrap_branch_cut() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        // 179° against -179° is a 2° discrepancy, not 358°.
        assert_relative_eq!(
            angle_diff(179.0f64.to_radians(), (-179.0f64).to_radians()).abs(),
            (2.0f64).to_radians(),
            max_relative = 1e-12
        );
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn wrap_lands_in_half_open_interval(angle in -1e6f64..1e6) {
                let w = wrap_angle(angle);
                prop_assert!(w > -PI && w <= PI);
                // Wrapping is idempotent and preserves the angle mod 2π.
                prop_assert_eq!(wrap_angle(w), w);
                prop_assert!(((w - angle).rem_euclid(TAU)).min(TAU - (w - angle).rem_euclid(TAU)) < 1e-6);
            }

            #[test]
            fn round_trip_preserves_polar(range in 1e-3f64..1e7, azimuth in -10.0f64..10.0) {
                let p = PolarPair::new(range, azimuth);
                let back = to_polar(to_cartesian(p)).unwrap();
                prop_assert!((back.range() - p.range()).abs() <= 1e-12 * p.range());
                prop_assert!(angle_diff(back.azimuth(), p.azimuth()).abs() < 1e-12);
            }

            #[test]
            fn debias_factor_in_unit_interval(sigma in 0.0f64..3.0) {
                let lam = debias_factor(sigma).unwrap().value();
                prop_assert!(lam > 0.0 && lam <= 1.0);
                prop_assert_eq!(lam == 1.0, sigma == 0.0);
            }
        }
    }
}
