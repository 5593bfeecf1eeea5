//! Bipartite correlation measures on two-qubit states.
//!
//! Entropies are in bits. Discord is asymmetric: the measured subsystem is
//! always explicit ([`MeasuredSide`]), and the classical correlation is
//! maximized over rank-1 projective measurements parametrized by Bloch
//! angles `(θ, φ)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};
use crate::hilbert::{hermitian_eigenvalues, partial_trace, DensityMatrix, C64, POSITIVITY_TOL};

/// Coarse grid used to seed the measurement-basis search.
pub const GRID_THETA: usize = 24;
pub const GRID_PHI: usize = 48;
/// The simplex refinement stops once its diameter (radians) drops below this.
pub const SIMPLEX_DIAMETER_TOL: f64 = 1e-6;
const SIMPLEX_MAX_ITER: usize = 2000;

/// Outcomes rarer than this contribute nothing to the conditional entropy.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

/// A 4×4 reduced state together with the sites it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState {
    rho: DensityMatrix,
    sites: (usize, usize),
}

impl PairState {
    pub fn new(rho: DensityMatrix, sites: (usize, usize)) -> Result<Self> {
        if rho.n_sites() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: rho.dim(),
            });
        }
        if sites.0 >= sites.1 {
            return Err(Error::InvalidSites(format!(
                "pair {sites:?} must satisfy i < j"
            )));
        }
        rho.validate()?;
        Ok(Self { rho, sites })
    }

    /// Reduced state of sites `(i, j)` of a register state.
    pub fn from_state(rho: &DensityMatrix, i: usize, j: usize) -> Result<Self> {
        Self::new(partial_trace(rho, &[i, j])?, (i, j))
    }

    /// A bare two-qubit state, labelled as sites (1, 2).
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        Self::new(DensityMatrix::from_matrix_unchecked(m)?, (1, 2))
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn sites(&self) -> (usize, usize) {
        self.sites
    }

    pub fn marginal(&self, side: MeasuredSide) -> DensityMatrix {
        let keep = match side {
            MeasuredSide::A => 1,
            MeasuredSide::B => 2,
        };
        partial_trace(&self.rho, &[keep]).expect("two-qubit marginal")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasuredSide {
    A,
    B,
}

impl MeasuredSide {
    pub fn other(self) -> Self {
        match self {
            MeasuredSide::A => MeasuredSide::B,
            MeasuredSide::B => MeasuredSide::A,
        }
    }
}

/// Projective qubit measurement along the Bloch direction `(θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::InvalidConfig(format!(
                "measurement angles (θ = {theta}, φ = {phi}) out of range"
            )));
        }
        Ok(Self { theta, phi })
    }

    /// Canonical angles for an arbitrary `(θ, φ)` pair, by way of the
    /// Bloch vector.
    pub fn from_unwrapped(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (x, y) = (st * phi.cos(), st * phi.sin());
        let theta = ct.clamp(-1.0, 1.0).acos();
        let mut phi = if st.abs() < 1e-15 { 0.0 } else { y.atan2(x) };
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Self { theta, phi }
    }
}

/// `{B₁, B₂}` with `B₁ = |b⟩⟨b|`, `|b⟩ = cos(θ/2)|E⟩ + e^{iφ} sin(θ/2)|G⟩`,
/// and `B₂ = I − B₁`.
pub fn measurement_projectors(basis: &MeasurementBasis) -> [Matrix2<C64>; 2] {
    projectors(basis.theta, basis.phi)
}

fn projectors(theta: f64, phi: f64) -> [Matrix2<C64>; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    // index 0 = |G⟩, 1 = |E⟩
    let b = nalgebra::Vector2::new(C64::from_polar(s, phi), C64::new(c, 0.0));
    let b1 = b * b.adjoint();
    [b1, Matrix2::identity() - b1]
}

/// `S(ρ) = −Σ λ log₂ λ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_of_matrix(rho.matrix())
}

fn entropy_of_matrix(m: &DMatrix<C64>) -> Result<f64> {
    let ev = hermitian_eigenvalues(m);
    let max = (m.nrows() as f64).log2();
    Ok(entropy_of_spectrum(&ev)?.clamp(0.0, max))
}

fn entropy_of_spectrum(ev: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in ev {
        if l < -POSITIVITY_TOL {
            return Err(Error::NotPositive(l));
        }
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Entropy of a 2×2 Hermitian matrix normalized by `trace`.
fn entropy_2x2(a: f64, d: f64, off: C64, trace: f64) -> Result<f64> {
    let (a, d, off) = (a / trace, d / trace, off / trace);
    let half_gap = (0.5 * (a - d)).hypot(off.norm());
    let hi = 0.5 * (a + d) + half_gap;
    let det = a * d - off.norm_sqr();
    let lo = if hi > 0.0 { det / hi } else { 0.0 };
    Ok(entropy_of_spectrum(&[hi, lo])?.clamp(0.0, 1.0))
}

/// `I(A:B) = S(ρ^A) + S(ρ^B) − S(ρ^{AB})`.
pub fn mutual_information(pair: &PairState) -> Result<f64> {
    let sa = von_neumann_entropy(&pair.marginal(MeasuredSide::A))?;
    let sb = von_neumann_entropy(&pair.marginal(MeasuredSide::B))?;
    let sab = von_neumann_entropy(pair.rho())?;
    Ok((sa + sb - sab).max(0.0))
}

/// Wootters concurrence `max{0, λ₁ − λ₂ − λ₃ − λ₄}` with `λ_i` the square
/// roots of the eigenvalues of `ρ (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`, decreasing.
///
/// With `ρ = W W†` and `W̃ = (σ_y⊗σ_y) W*`, the `λ_i` are the singular values
/// of `W† W̃`. Rounding noise in the null space of `ρ` then enters `λ_i` only
/// at second order, so pure states come out exact to machine precision.
pub fn concurrence(pair: &PairState) -> Result<f64> {
    let rho = pair.rho().matrix();
    let h = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let min = eig.eigenvalues.min();
    if min < -POSITIVITY_TOL {
        // A non-positive ρ makes the spin-flip spectrum negative.
        return Err(Error::InvalidSpinFlipSpectrum { re: min, im: 0.0 });
    }
    let w = DMatrix::from_fn(4, 4, |i, k| {
        eig.eigenvectors[(i, k)] * eig.eigenvalues[k].max(0.0).sqrt()
    });
    // σ_y ⊗ σ_y = antidiag(−1, 1, 1, −1)
    let flip_sign = [-1.0, 1.0, 1.0, -1.0];
    let w_tilde = DMatrix::from_fn(4, 4, |i, k| w[(3 - i, k)].conj() * flip_sign[i]);
    let mut roots: Vec<f64> = (w.adjoint() * w_tilde)
        .singular_values()
        .iter()
        .copied()
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).clamp(0.0, 1.0))
}

/// `Σ_i p_i S(ρ_i)` after the projective measurement `basis` on
/// `measured_side`.
pub fn conditional_entropy(
    pair: &PairState,
    basis: &MeasurementBasis,
    measured_side: MeasuredSide,
) -> Result<f64> {
    conditional_entropy_at(pair.rho().matrix(), basis.theta, basis.phi, measured_side)
}

/// The post-measurement state is `σ_i ⊗ B_i / p_i` with `σ_i` the
/// unnormalized conditional state of the unmeasured qubit, so its entropy is
/// that of `σ_i / p_i`.
fn conditional_entropy_at(
    rho: &DMatrix<C64>,
    theta: f64,
    phi: f64,
    side: MeasuredSide,
) -> Result<f64> {
    projected_entropy(rho, &projectors(theta, phi), side)
}

/// `Σ_i p_i S(ρ_i)` for an explicit measurement `{B₁, B₂}` on
/// `measured_side`; the outcome order does not matter.
pub fn conditional_entropy_with(
    pair: &PairState,
    projectors: &[Matrix2<C64>; 2],
    measured_side: MeasuredSide,
) -> Result<f64> {
    projected_entropy(pair.rho().matrix(), projectors, measured_side)
}

fn projected_entropy(
    rho: &DMatrix<C64>,
    projectors: &[Matrix2<C64>; 2],
    side: MeasuredSide,
) -> Result<f64> {
    // element ⟨x u|ρ|y v⟩ with x, y on the unmeasured qubit
    let elem = |x: usize, u: usize, y: usize, v: usize| match side {
        MeasuredSide::B => rho[(2 * x + u, 2 * y + v)],
        MeasuredSide::A => rho[(2 * u + x, 2 * v + y)],
    };
    let mut total = 0.0;
    for p in projectors {
        // σ_xy = Σ_uv P_vu ρ_{(x u),(y v)}
        let sigma = |x: usize, y: usize| {
            let mut acc = C64::new(0.0, 0.0);
            for u in 0..2 {
                for v in 0..2 {
                    acc += p[(v, u)] * elem(x, u, y, v);
                }
            }
            acc
        };
        let (s00, s11, s01) = (sigma(0, 0).re, sigma(1, 1).re, sigma(0, 1));
        let prob = s00 + s11;
        if prob < MIN_OUTCOME_PROBABILITY {
            continue;
        }
        total += prob * entropy_2x2(s00, s11, s01, prob)?;
    }
    Ok(total)
}

/// `J = S(ρ_unmeasured) − min_{θ,φ} Σ p_i S(ρ_i)` and the minimizing basis.
pub fn classical_correlation(
    pair: &PairState,
    measured_side: MeasuredSide,
) -> Result<(f64, MeasurementBasis)> {
    let s_unmeasured = von_neumann_entropy(&pair.marginal(measured_side.other()))?;
    let (min_ce, basis) = minimize_conditional_entropy(pair.rho().matrix(), measured_side)?;
    Ok(((s_unmeasured - min_ce).max(0.0), basis))
}

fn minimize_conditional_entropy(
    rho: &DMatrix<C64>,
    side: MeasuredSide,
) -> Result<(f64, MeasurementBasis)> {
    let f = |x: [f64; 2]| conditional_entropy_at(rho, x[0], x[1], side);

    let d_theta = PI / (GRID_THETA - 1) as f64;
    let d_phi = 2.0 * PI / GRID_PHI as f64;
    let mut best = (f64::INFINITY, [0.0, 0.0]);
    for i in 0..GRID_THETA {
        for k in 0..GRID_PHI {
            let x = [i as f64 * d_theta, k as f64 * d_phi];
            let v = f(x)?;
            if v < best.0 {
                best = (v, x);
            }
        }
    }

    let (value, x) = nelder_mead(f, best.1, [0.5 * d_theta, 0.5 * d_phi])?;
    let (value, x) = if value <= best.0 { (value, x) } else { best };
    Ok((value, MeasurementBasis::from_unwrapped(x[0], x[1])))
}

/// Derivative-free simplex minimization in two variables.
fn nelder_mead<F>(f: F, start: [f64; 2], step: [f64; 2]) -> Result<(f64, [f64; 2])>
where
    F: Fn([f64; 2]) -> Result<f64>,
{
    let mut simplex = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut values = [f(simplex[0])?, f(simplex[1])?, f(simplex[2])?];
    let lerp =
        |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    let dist = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);

    for _ in 0..SIMPLEX_MAX_ITER {
        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);

        let diameter = dist(simplex[0], simplex[1])
            .max(dist(simplex[0], simplex[2]))
            .max(dist(simplex[1], simplex[2]));
        if diameter < SIMPLEX_DIAMETER_TOL {
            break;
        }

        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = lerp(centroid, simplex[2], -1.0);
        let fr = f(reflected)?;
        if fr < values[0] {
            let expanded = lerp(centroid, simplex[2], -2.0);
            let fe = f(expanded)?;
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] {
                lerp(centroid, reflected, 0.5)
            } else {
                lerp(centroid, simplex[2], 0.5)
            };
            let fc = f(contracted)?;
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = lerp(simplex[0], simplex[i], 0.5);
                    values[i] = f(simplex[i])?;
                }
            }
        }
    }
    let best = (0..3)
        .min_by(|&i, &j| values[i].total_cmp(&values[j]))
        .unwrap();
    Ok((values[best], simplex[best]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordReport {
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub discord: f64,
    pub optimal_basis: MeasurementBasis,
    pub measured_side: MeasuredSide,
}

/// `D = I − J` with the measurement on `measured_side`.
pub fn discord(pair: &PairState, measured_side: MeasuredSide) -> Result<DiscordReport> {
    let mutual_information = mutual_information(pair)?;
    let (classical_correlation, optimal_basis) = classical_correlation(pair, measured_side)?;
    let mut discord = mutual_information - classical_correlation;
    if discord < -POSITIVITY_TOL {
        return Err(Error::OptimizerFailed(discord));
    }
    if discord < 0.0 {
        discord = 0.0;
    }
    Ok(DiscordReport {
        mutual_information,
        classical_correlation,
        discord,
        optimal_basis,
        measured_side,
    })
}
