//! Slow reference implementations.
//!
//! Everything here is built from dense matrices and Kronecker products so
//! that it shares no code path with the bitwise fast path it is checked
//! against. Vectorization is column-major: `vec(ρ)[a + b·d] = ρ[a, b]`, so
//! that `A ρ B ↦ (Bᵀ ⊗ A) vec(ρ)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, Vector2, Vector3};
use rand::Rng;
use rayon::prelude::*;

use crate::dynamics::BathSpec;
use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, QubitRegister, C64};
use crate::measures::{MeasuredSide, PairState};

/// Largest register the dense superoperator is built for (1024² entries).
pub const MAX_ORACLE_SITES: usize = 5;
/// Singular values below this span the kernel.
pub const KERNEL_TOL: f64 = 1e-10;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `op` acting on `site` (1-based, site 1 leftmost) of an `n`-qubit register.
fn embed(op: &DMatrix<C64>, site: usize, n: usize) -> DMatrix<C64> {
    let mut out = DMatrix::from_element(1, 1, c(1.0));
    for k in 1..=n {
        let factor = if k == site {
            op.clone()
        } else {
            DMatrix::identity(2, 2)
        };
        out = out.kronecker(&factor);
    }
    out
}

/// `σ⁻ = |G⟩⟨E|` with `|G⟩ = (1, 0)`.
fn sigma_minus() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)])
}

fn pauli(axis: usize) -> DMatrix<C64> {
    let i = C64::new(0.0, 1.0);
    match axis {
        0 => DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
        // σ^y = −i(σ⁺ − σ⁻): ⟨E|σ^y|G⟩ = −i
        1 => DMatrix::from_row_slice(2, 2, &[c(0.0), i, -i, c(0.0)]),
        _ => DMatrix::from_row_slice(2, 2, &[c(-1.0), c(0.0), c(0.0), c(1.0)]),
    }
}

fn vec_of(m: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

fn unvec(v: &DVector<C64>, dim: usize) -> DMatrix<C64> {
    DMatrix::from_column_slice(dim, dim, v.as_slice())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseLiouvillian {
    n_sites: usize,
    matrix: DMatrix<C64>,
}

impl DenseLiouvillian {
    pub(crate) fn from_raw(n_sites: usize, matrix: DMatrix<C64>) -> Self {
        Self { n_sites, matrix }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// `unvec(L · vec(m))`.
    pub fn apply(&self, m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: m.nrows(),
            });
        }
        Ok(unvec(&(&self.matrix * vec_of(m)), self.dim()))
    }
}

pub fn dense_liouvillian(bath: &BathSpec, n_sites: usize) -> Result<DenseLiouvillian> {
    if n_sites > MAX_ORACLE_SITES {
        return Err(Error::OracleTooLarge {
            n_sites,
            max: MAX_ORACLE_SITES,
        });
    }
    if bath.n_sites() != n_sites {
        return Err(Error::DimensionMismatch {
            expected: n_sites,
            found: bath.n_sites(),
        });
    }
    let d = 1 << n_sites;
    let id = DMatrix::<C64>::identity(d, d);
    let minus = sigma_minus();
    let mut l = DMatrix::<C64>::zeros(d * d, d * d);
    for (j, (&gamma, &occ)) in bath.gammas().iter().zip(bath.occupations()).enumerate() {
        let jump = embed(&minus, j + 1, n_sites) + embed(&minus, j + 2, n_sites);
        let jump_dag = jump.adjoint();
        let jj_dag = &jump * &jump_dag;
        let j_dag_j = &jump_dag * &jump;
        // n [2 J†ρJ − JJ†ρ − ρJJ†]
        let pump = jump.transpose().kronecker(&jump_dag) * c(2.0)
            - id.kronecker(&jj_dag)
            - jj_dag.transpose().kronecker(&id);
        // (n + 1) [2 JρJ† − J†Jρ − ρJ†J]
        let decay = jump_dag.transpose().kronecker(&jump) * c(2.0)
            - id.kronecker(&j_dag_j)
            - j_dag_j.transpose().kronecker(&id);
        l += pump * c(gamma * occ) + decay * c(gamma * (occ + 1.0));
    }
    Ok(DenseLiouvillian { n_sites, matrix: l })
}

/// `exp(A)` by scaling and squaring around a Taylor series.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    let norm = a.iter().map(|z| z.norm()).fold(0.0, f64::max) * n as f64;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * c(0.5f64.powi(squarings));
    let mut result = DMatrix::<C64>::identity(n, n);
    let mut term = DMatrix::<C64>::identity(n, n);
    for k in 1..=40 {
        term = &term * &scaled * c(1.0 / k as f64);
        result += &term;
        if term.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `unvec(exp(tL) · vec(ρ₀))`.
pub fn expm_propagate(l: &DenseLiouvillian, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "propagation time {t} must be ≥ 0"
        )));
    }
    if rho0.n_sites() != l.n_sites {
        return Err(Error::DimensionMismatch {
            expected: l.n_sites,
            found: rho0.n_sites(),
        });
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    let propagator = expm(&(&l.matrix * c(t)));
    let out = unvec(&(propagator * vec_of(rho0.matrix())), l.dim());
    DensityMatrix::from_matrix_unchecked(out)
}

/// Orthonormal kernel basis of `L`, each vector re-shaped into a matrix.
pub fn steady_nullspace(l: &DenseLiouvillian) -> Result<Vec<DMatrix<C64>>> {
    let svd = l.matrix.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smallest = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let kernel: Vec<_> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < KERNEL_TOL)
        .map(|(i, _)| unvec(&v_t.row(i).adjoint(), l.dim()))
        .collect();
    if kernel.is_empty() {
        return Err(Error::EmptyKernel(smallest));
    }
    Ok(kernel)
}

/// The unit-trace state spanning a one-dimensional kernel.
pub fn unique_steady_state(l: &DenseLiouvillian) -> Result<DensityMatrix> {
    let kernel = steady_nullspace(l)?;
    if kernel.len() != 1 {
        return Err(Error::NonUniqueSteadyState(kernel.len()));
    }
    let k = &kernel[0];
    let m = k / k.trace();
    let m = (&m + m.adjoint()) * c(0.5);
    DensityMatrix::new(m)
}

fn entropy_bits(m: &DMatrix<C64>) -> f64 {
    let h = (m + m.adjoint()) * c(0.5);
    h.symmetric_eigenvalues()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum()
}

/// Reduced state of one qubit of a 4×4 matrix by explicit summation.
fn reduce(rho: &DMatrix<C64>, keep_first: bool) -> DMatrix<C64> {
    DMatrix::from_fn(2, 2, |x, y| {
        (0..2)
            .map(|u| {
                if keep_first {
                    rho[(2 * x + u, 2 * y + u)]
                } else {
                    rho[(2 * u + x, 2 * u + y)]
                }
            })
            .sum()
    })
}

/// Exhaustive minimum of the conditional entropy over a `(θ, φ)` grid of
/// the given resolution, returned as the discord `I − J`.
///
/// Antipodal Bloch directions give the same measurement with the outcomes
/// swapped, so only `θ ≤ π/2` is scanned.
pub fn discord_grid(
    pair: &PairState,
    measured_side: MeasuredSide,
    resolution_deg: f64,
) -> Result<f64> {
    if !(resolution_deg > 0.0 && resolution_deg <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "grid resolution {resolution_deg}° must lie in (0, 1]"
        )));
    }
    let rho = pair.rho().matrix();
    let fixed = Matrix4::from_fn(|i, j| rho[(i, j)]);
    let step = resolution_deg.to_radians();
    let n_theta = (0.5 * PI / step).round() as usize;
    let n_phi = (2.0 * PI / step).round() as usize;

    let s_a = entropy_bits(&reduce(rho, true));
    let s_b = entropy_bits(&reduce(rho, false));
    let s_ab = entropy_bits(rho);
    let s_unmeasured = match measured_side {
        MeasuredSide::A => s_b,
        MeasuredSide::B => s_a,
    };

    let min_ce = (0..=n_theta)
        .into_par_iter()
        .map(|i| {
            let theta = i as f64 * step;
            let mut best = f64::INFINITY;
            for k in 0..n_phi {
                let phi = k as f64 * step;
                best = best.min(grid_conditional_entropy(&fixed, theta, phi, measured_side));
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min);
    let mutual = s_a + s_b - s_ab;
    Ok(mutual - (s_unmeasured - min_ce))
}

/// `Σ p_i S(Π_i ρ Π_i / p_i)` with `Π_i` the full 4×4 projector. Each
/// post-measurement state has rank ≤ 2, so its spectrum follows from the
/// trace and the purity.
fn grid_conditional_entropy(rho: &Matrix4<C64>, theta: f64, phi: f64, side: MeasuredSide) -> f64 {
    let (s, co) = (0.5 * theta).sin_cos();
    let b = Vector2::new(C64::from_polar(s, phi), c(co));
    let b1 = b * b.adjoint();
    let id = Matrix2::<C64>::identity();
    let mut total = 0.0;
    for proj in [b1, id - b1] {
        let full = match side {
            MeasuredSide::A => kron2(&proj, &id),
            MeasuredSide::B => kron2(&id, &proj),
        };
        let post = full * rho * full;
        let p = post.trace().re;
        if p < 1e-12 {
            continue;
        }
        let purity: f64 = post.iter().map(|z| z.norm_sqr()).sum::<f64>() / (p * p);
        let disc = (2.0 * purity - 1.0).max(0.0).sqrt();
        let entropy: f64 = [0.5 * (1.0 + disc), 0.5 * (1.0 - disc)]
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| -l * l.log2())
            .sum();
        total += p * entropy;
    }
    total
}

fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

/// Dense `J_x, J_y, J_z`.
pub fn collective_operators(n_sites: usize) -> [DMatrix<C64>; 3] {
    [0, 1, 2].map(|axis| {
        let p = pauli(axis);
        (1..=n_sites)
            .map(|j| embed(&p, j, n_sites))
            .fold(DMatrix::zeros(1 << n_sites, 1 << n_sites), |acc, m| acc + m)
            * c(0.5)
    })
}

/// Minimum of `(4/N) Var(cos α J_u + sin α J_v)` over `α ∈ [0, π)` in steps
/// of `resolution_deg`, with `(u, v)` spanning the plane perpendicular to the
/// mean spin.
pub fn squeezing_scan(rho: &DensityMatrix, resolution_deg: f64) -> Result<f64> {
    if !(resolution_deg > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "scan resolution {resolution_deg}° must be positive"
        )));
    }
    let n = rho.n_sites();
    let m = rho.matrix();
    let ops = collective_operators(n);
    let expect = |op: &DMatrix<C64>| (m * op).trace().re;
    let mean = Vector3::new(expect(&ops[0]), expect(&ops[1]), expect(&ops[2]));
    if mean.norm() <= 1e-12 * n as f64 {
        return Err(Error::MeanSpinVanishes);
    }
    let e = mean.normalize();
    // Gram–Schmidt against the coordinate axis least aligned with e
    let axis = (0..3)
        .min_by(|&a, &b| e[a].abs().total_cmp(&e[b].abs()))
        .unwrap();
    let mut reference = Vector3::zeros();
    reference[axis] = 1.0;
    let u = (reference - e * e.dot(&reference)).normalize();
    let v = e.cross(&u);
    let along = |w: &Vector3<f64>| &ops[0] * c(w.x) + &ops[1] * c(w.y) + &ops[2] * c(w.z);
    let (ju, jv) = (along(&u), along(&v));

    let steps = (180.0 / resolution_deg).ceil() as usize;
    let mut best = f64::INFINITY;
    for k in 0..steps {
        let alpha = (k as f64 * resolution_deg).to_radians();
        let op = &ju * c(alpha.cos()) + &jv * c(alpha.sin());
        let first = expect(&op);
        let second = expect(&(&op * &op));
        best = best.min(second - first * first);
    }
    Ok(4.0 * best / n as f64)
}

/// Random mixed state `G G† / Tr(G G†)` with uniform entries in `G`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n_sites: usize) -> DensityMatrix {
    let d = 1 << n_sites;
    let g = DMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let m = &g * g.adjoint();
    let t = m.trace();
    DensityMatrix::new(m / t).expect("Gram matrices are states")
}

/// Random Hermitian, not necessarily positive, matrix of a register.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n_sites: usize) -> DMatrix<C64> {
    let d = QubitRegister::new(n_sites).expect("register size").dim();
    let g = DMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    (&g + g.adjoint()) * c(0.5)
}

/// Random bath with rates in `[0.2, 2)` and occupations in `[0, 2)`.
pub fn random_bath<R: Rng + ?Sized>(rng: &mut R, n_sites: usize) -> BathSpec {
    let fibers = n_sites - 1;
    let gammas = (0..fibers).map(|_| rng.gen_range(0.2..2.0)).collect();
    let occupations = (0..fibers).map(|_| rng.gen_range(0.0..2.0)).collect();
    BathSpec::new(gammas, occupations).expect("valid random bath")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::liouvillian_apply;
    use crate::hilbert::{density_from_pure, max_abs_diff, PureState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn singlet() -> DensityMatrix {
        density_from_pure(&PureState::superposition(&[(c(1.0), "GE"), (c(-1.0), "EG")]).unwrap())
            .unwrap()
    }

    #[test]
    fn size_guard() {
        let bath = BathSpec::zero_temperature(6);
        assert!(matches!(
            dense_liouvillian(&bath, 6),
            Err(Error::OracleTooLarge { .. })
        ));
        assert!(dense_liouvillian(&BathSpec::zero_temperature(3), 2).is_err());
    }

    #[test]
    fn singlet_is_dark() {
        let l = dense_liouvillian(&BathSpec::zero_temperature(2), 2).unwrap();
        let out = l.matrix() * vec_of(singlet().matrix());
        assert!(out.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn trace_functional_is_a_left_null_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 3] {
            let l = dense_liouvillian(&random_bath(&mut rng, n), n).unwrap();
            let d = 1 << n;
            let id = vec_of(&DMatrix::identity(d, d));
            let row = id.transpose() * l.matrix();
            assert!(row.iter().all(|z| z.norm() < 1e-10));
        }
    }

    #[test]
    fn matches_fast_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bath = random_bath(&mut rng, 3);
        let rho = random_density(&mut rng, 3);
        let l = dense_liouvillian(&bath, 3).unwrap();
        let fast = liouvillian_apply(&rho, &bath).unwrap();
        assert!(max_abs_diff(&l.apply(rho.matrix()).unwrap(), &fast) < 1e-12);
    }

    #[test]
    fn expm_matches_scalar_and_rotation() {
        let a = DMatrix::from_row_slice(2, 2, &[c(0.0), c(-3.0), c(3.0), c(0.0)]);
        let r = expm(&a);
        assert!((r[(0, 0)] - c(3f64.cos())).norm() < 1e-13);
        assert!((r[(1, 0)] - c(3f64.sin())).norm() < 1e-13);
        let s = expm(&(DMatrix::identity(3, 3) * c(-20.0)));
        assert!((s[(2, 2)].re - (-20f64).exp()).abs() < 1e-20);
    }

    #[test]
    fn propagation_examples() {
        let bath = BathSpec::zero_temperature(2);
        let l = dense_liouvillian(&bath, 2).unwrap();
        let ee = DensityMatrix::from_label("EE").unwrap();
        assert_eq!(expm_propagate(&l, &ee, 0.0).unwrap(), ee);
        let s = singlet();
        let out = expm_propagate(&l, &s, 7.0).unwrap();
        assert!(max_abs_diff(out.matrix(), s.matrix()) < 1e-12);
        let later = expm_propagate(&l, &ee, 1.0).unwrap();
        assert!((later.trace() - 1.0).abs() < 1e-10);
        assert!(expm_propagate(&l, &ee, -1.0).is_err());
    }

    #[test]
    fn kernel_examples() {
        let l = dense_liouvillian(&BathSpec::zero_temperature(2), 2).unwrap();
        let kernel = steady_nullspace(&l).unwrap();
        let project = |target: &DMatrix<C64>| {
            let t = vec_of(target);
            let t = &t / c(t.norm());
            let residual = kernel.iter().fold(t.clone(), |acc, k| {
                let kv = vec_of(k);
                let overlap = kv.dotc(&t);
                acc - kv * overlap
            });
            residual.norm()
        };
        assert!(project(DensityMatrix::from_label("GG").unwrap().matrix()) < 1e-9);
        assert!(project(singlet().matrix()) < 1e-9);
        assert!(matches!(
            unique_steady_state(&l),
            Err(Error::NonUniqueSteadyState(_))
        ));

        // the singlet decouples from a single fiber at any temperature
        let warm = dense_liouvillian(&BathSpec::unit_rates(vec![0.5]).unwrap(), 2).unwrap();
        assert_eq!(steady_nullspace(&warm).unwrap().len(), 2);

        let chain = dense_liouvillian(&BathSpec::unit_rates(vec![0.5, 0.2]).unwrap(), 3).unwrap();
        let s = unique_steady_state(&chain).unwrap();
        assert!((s.trace() - 1.0).abs() < 1e-12);
        assert!(chain
            .apply(s.matrix())
            .unwrap()
            .iter()
            .all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn discord_grid_examples() {
        let product = PairState::from_matrix(DMatrix::from_diagonal(&DVector::from_vec(vec![
            c(0.1),
            c(0.15),
            c(0.3),
            c(0.45),
        ])))
        .unwrap();
        assert!(discord_grid(&product, MeasuredSide::B, 1.0).unwrap().abs() < 1e-10);
        let bell = PairState::from_matrix(
            density_from_pure(
                &PureState::superposition(&[(c(1.0), "GG"), (c(1.0), "EE")]).unwrap(),
            )
            .unwrap()
            .into_matrix(),
        )
        .unwrap();
        assert!((discord_grid(&bell, MeasuredSide::A, 0.5).unwrap() - 1.0).abs() < 1e-4);
        assert!(discord_grid(&bell, MeasuredSide::A, 2.0).is_err());
    }

    #[test]
    fn squeezing_scan_examples() {
        for n in [2, 3] {
            let g = DensityMatrix::from_label(&"G".repeat(n)).unwrap();
            assert!((squeezing_scan(&g, 0.1).unwrap() - 1.0).abs() < 1e-9);
        }
        let ghz = density_from_pure(
            &PureState::superposition(&[(c(1.0), "GGG"), (c(1.0), "EEE")]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            squeezing_scan(&ghz, 1.0),
            Err(Error::MeanSpinVanishes)
        ));
    }

    #[test]
    fn collective_operators_are_spin_operators() {
        let [jx, jy, jz] = collective_operators(2);
        let commutator = &jx * &jy - &jy * &jx;
        let expected = &jz * C64::new(0.0, 1.0);
        assert!(max_abs_diff(&commutator, &expected) < 1e-14);
    }
}
