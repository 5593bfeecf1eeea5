//! Collective spin moments and the Kitagawa–Ueda squeezing parameter
//! `ξ_s² = 4 (ΔJ_⊥)²_min / N`.
//!
//! The minimum variance perpendicular to the mean spin is the smaller
//! eigenvalue of the 2×2 covariance matrix in the frame `(n₁, n₂)` built from
//! the mean-spin angles.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::hilbert::{expectation, DensityMatrix, Observable, SiteOp};

/// The mean spin counts as vanishing below this multiple of `N`.
pub const MEAN_SPIN_TOL: f64 = 1e-12;
/// Covariance eigenvalues below `−COVARIANCE_TOL` are rejected.
pub const COVARIANCE_TOL: f64 = 1e-9;
const AXIS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveMoments {
    pub n_sites: usize,
    /// `(⟨J_x⟩, ⟨J_y⟩, ⟨J_z⟩)`
    pub mean: Vector3<f64>,
    /// `⟨(J_a J_b + J_b J_a)/2⟩`
    pub second: Matrix3<f64>,
}

impl CollectiveMoments {
    /// Variance of `J·u` for a unit vector `u`.
    pub fn variance_along(&self, u: &Vector3<f64>) -> f64 {
        self.covariance(u, u)
    }

    /// Symmetrized covariance of `J·u` and `J·v`.
    pub fn covariance(&self, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
        u.dot(&(self.second * v)) - u.dot(&self.mean) * v.dot(&self.mean)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingResult {
    pub xi_squared: f64,
    pub theta: f64,
    pub phi: f64,
    pub optimal_direction: Vector3<f64>,
}

const AXES: [SiteOp; 3] = [SiteOp::X, SiteOp::Y, SiteOp::Z];

/// First and symmetrized second moments of `J_k = ½ Σ_j σ_j^k`.
pub fn collective_moments(rho: &DensityMatrix) -> Result<CollectiveMoments> {
    let n = rho.n_sites();
    let mut mean = Vector3::zeros();
    for (a, &op) in AXES.iter().enumerate() {
        let mut obs = Observable::new(n);
        for j in 1..=n {
            obs = obs.term(0.5, &[(j, op)]);
        }
        mean[a] = expectation(rho, &obs)?.re;
    }

    // (σ_j^a)² = I, and distinct sites commute, so the on-site part of
    // (J_a J_b + J_b J_a)/2 is δ_ab N/4.
    let mut second = Matrix3::zeros();
    for a in 0..3 {
        for b in a..3 {
            let mut obs = Observable::new(n);
            for j in 1..=n {
                for l in 1..=n {
                    if j != l {
                        obs = obs.term(0.25, &[(j, AXES[a]), (l, AXES[b])]);
                    }
                }
            }
            let mut value = expectation(rho, &obs)?.re;
            if a == b {
                value += 0.25 * n as f64;
            }
            second[(a, b)] = value;
            second[(b, a)] = value;
        }
    }
    Ok(CollectiveMoments {
        n_sites: n,
        mean,
        second,
    })
}

/// Polar and azimuthal angles of the mean spin. `φ = 0` when the mean spin
/// lies along ±z.
pub fn mean_spin_angles(moments: &CollectiveMoments) -> Result<(f64, f64)> {
    let m = moments.mean;
    let norm = m.norm();
    if norm <= MEAN_SPIN_TOL * moments.n_sites as f64 {
        return Err(Error::MeanSpinVanishes);
    }
    // atan2 forms of θ = arccos(J_z/|J|) and the ⟨J_y⟩-sign branch for φ;
    // they stay accurate when the mean spin is close to the z axis.
    let transverse = m.x.hypot(m.y);
    let theta = transverse.atan2(m.z);
    if transverse / norm < AXIS_TOL {
        return Ok((theta, 0.0));
    }
    let mut phi = m.y.atan2(m.x);
    if phi < 0.0 {
        phi += 2.0 * PI;
    }
    if phi >= 2.0 * PI {
        phi = 0.0;
    }
    Ok((theta, phi))
}

/// Orthonormal directions perpendicular to the mean spin at `(θ, φ)`.
pub fn perpendicular_frame(theta: f64, phi: f64) -> (Vector3<f64>, Vector3<f64>) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    (
        Vector3::new(-sp, cp, 0.0),
        Vector3::new(ct * cp, ct * sp, -st),
    )
}

pub fn spin_squeezing(rho: &DensityMatrix) -> Result<SqueezingResult> {
    squeezing_from_moments(&collective_moments(rho)?)
}

pub fn squeezing_from_moments(moments: &CollectiveMoments) -> Result<SqueezingResult> {
    let (theta, phi) = mean_spin_angles(moments)?;
    let (n1, n2) = perpendicular_frame(theta, phi);
    let g11 = moments.variance_along(&n1);
    let g22 = moments.variance_along(&n2);
    let g12 = moments.covariance(&n1, &n2);

    let half_gap = (0.5 * (g11 - g22)).hypot(g12);
    let lambda = 0.5 * (g11 + g22) - half_gap;
    if lambda < -COVARIANCE_TOL {
        return Err(Error::CovarianceNotPsd(lambda));
    }
    // eigenvector of [[g11, g12], [g12, g22]] for the smaller eigenvalue
    let (c, s) = if half_gap == 0.0 {
        (1.0, 0.0)
    } else if g11 <= g22 {
        (g22 - lambda, -g12)
    } else {
        (-g12, g11 - lambda)
    };
    let direction = (n1 * c + n2 * s).normalize();
    Ok(SqueezingResult {
        xi_squared: 4.0 * lambda.max(0.0) / moments.n_sites as f64,
        theta,
        phi,
        optimal_direction: direction,
    })
}

/// `(2/N)[⟨J_{n₁}² + J_{n₂}²⟩ − √(⟨J_{n₁}² − J_{n₂}²⟩² + 4 cov²)]`, the
/// closed form of the perpendicular minimum variance.
pub fn closed_form_xi_squared(moments: &CollectiveMoments) -> Result<f64> {
    let (theta, phi) = mean_spin_angles(moments)?;
    let (n1, n2) = perpendicular_frame(theta, phi);
    let s = &moments.second;
    let a = n1.dot(&(s * n1));
    let b = n2.dot(&(s * n2));
    let cov = moments.covariance(&n1, &n2);
    let n = moments.n_sites as f64;
    Ok(2.0 / n * (a + b - ((a - b).powi(2) + 4.0 * cov * cov).sqrt()))
}
