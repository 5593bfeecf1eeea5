//! Qubit-register states and operator algebra.
//!
//! Basis labels are strings over `{G, E}`. Site 1 is the most significant bit
//! of the basis index, `G ↦ 0` and `E ↦ 1`, so `GG…G` is index 0 and `EE…E`
//! is index `2^N − 1`. All ladder actions are done by bit arithmetic on basis
//! indices; no `2^N × 2^N` operator matrix is ever built here.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Hard cap on the register size (dense `2^N × 2^N` matrices).
pub const MAX_SITES: usize = 12;

/// Eigenvalues in `[-POSITIVITY_TOL, 0)` are treated as numerical zeros;
/// anything more negative is a genuine positivity failure.
pub const POSITIVITY_TOL: f64 = 1e-8;

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;
pub const NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QubitRegister {
    n_sites: usize,
}

impl QubitRegister {
    pub fn new(n_sites: usize) -> Result<Self> {
        if n_sites == 0 || n_sites > MAX_SITES {
            return Err(Error::RegisterSize(n_sites));
        }
        Ok(Self { n_sites })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    /// Bit mask of a 1-based site.
    pub fn site_mask(&self, site: usize) -> Result<usize> {
        if site == 0 || site > self.n_sites {
            return Err(Error::SiteOutOfRange {
                site,
                n_sites: self.n_sites,
            });
        }
        Ok(1 << (self.n_sites - site))
    }

    /// Basis index of a `{G, E}` label.
    pub fn index_of(&self, label: &str) -> Result<usize> {
        let len = label.chars().count();
        if len != self.n_sites {
            return Err(Error::LabelMismatch {
                label: len,
                register: self.n_sites,
            });
        }
        label.chars().try_fold(0usize, |acc, c| match c {
            'G' => Ok(acc << 1),
            'E' => Ok((acc << 1) | 1),
            other => Err(Error::UnknownSiteSymbol(other)),
        })
    }

    /// Inverse of [`QubitRegister::index_of`].
    pub fn label_of(&self, index: usize) -> String {
        (1..=self.n_sites)
            .map(|site| {
                if index & (1 << (self.n_sites - site)) != 0 {
                    'E'
                } else {
                    'G'
                }
            })
            .collect()
    }

    fn register_for_dim(dim: usize) -> Result<Self> {
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!(
                "dimension {dim} is not a power of two"
            )));
        }
        Self::new(dim.trailing_zeros() as usize)
    }
}

/// Normalized state vector over a register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    register: QubitRegister,
    amplitudes: DVector<C64>,
}

impl PureState {
    /// Wraps an amplitude vector whose squared norm is 1 within `NORM_TOL`;
    /// the residual is divided out so the stored norm is 1 to rounding.
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let register = QubitRegister::register_for_dim(amplitudes.len())?;
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self {
            register,
            amplitudes: amplitudes / C64::from(norm_sq.sqrt()),
        })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        Self::new(amplitudes / C64::from(norm))
    }

    /// Normalized superposition `Σ c_k |label_k⟩`.
    pub fn superposition(terms: &[(C64, &str)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidState("empty superposition".into()))?;
        let register = QubitRegister::new(first.1.chars().count())?;
        let mut amps = DVector::zeros(register.dim());
        for (c, label) in terms {
            amps[register.index_of(label)?] += c;
        }
        Self::normalized(amps)
    }

    pub fn register(&self) -> QubitRegister {
        self.register
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }
}

/// Computational basis state for a `{G, E}` label.
pub fn basis_state(label: &str, register: QubitRegister) -> Result<PureState> {
    let index = register.index_of(label)?;
    let mut amplitudes = DVector::zeros(register.dim());
    amplitudes[index] = C64::new(1.0, 0.0);
    Ok(PureState {
        register,
        amplitudes,
    })
}

/// `ρ = |ψ⟩⟨ψ|`.
pub fn density_from_pure(psi: &PureState) -> Result<DensityMatrix> {
    let norm_sq = psi.amplitudes.norm_squared();
    if (norm_sq - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm_sq));
    }
    let m = &psi.amplitudes * psi.amplitudes.adjoint();
    Ok(DensityMatrix {
        register: psi.register,
        m,
    })
}

/// Hermitian, unit-trace, positive semidefinite matrix over a register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    register: QubitRegister,
    m: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates all density-matrix invariants.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(m)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a square power-of-two matrix, checking only its shape. Used for
    /// intermediate integrator states and reduced states, whose invariants
    /// hold up to rounding by construction.
    pub fn from_matrix_unchecked(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}, not square",
                m.nrows(),
                m.ncols()
            )));
        }
        let register = QubitRegister::register_for_dim(m.nrows())?;
        Ok(Self { register, m })
    }

    pub fn from_label(label: &str) -> Result<Self> {
        let register = QubitRegister::new(label.chars().count())?;
        density_from_pure(&basis_state(label, register)?)
    }

    pub fn maximally_mixed(register: QubitRegister) -> Self {
        let dim = register.dim();
        let m = DMatrix::identity(dim, dim) * C64::from(1.0 / dim as f64);
        Self { register, m }
    }

    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm >= HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian: max |ρ − ρ†| = {herm:e}"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} ≠ 1")));
        }
        let min = self.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(())
    }

    pub fn register(&self) -> QubitRegister {
        self.register
    }

    pub fn n_sites(&self) -> usize {
        self.register.n_sites()
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.m
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        max_abs_diff(&self.m, &self.m.adjoint())
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }
}

/// Eigenvalues of `(m + m†)/2`, sorted ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::from(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Entrywise maximum of `|a − b|`.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Single-site ladder operators: `σ⁺ = |E⟩⟨G|`, `σ⁻ = |G⟩⟨E|`,
/// `σ^z = |E⟩⟨E| − |G⟩⟨G|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Plus,
    Minus,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `σ_site · m` (left) or `m · σ_site` (right).
pub fn apply_ladder(op: Ladder, site: usize, side: Side, m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let dim = m.nrows();
    if m.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.ncols(),
        });
    }
    let register = QubitRegister::register_for_dim(dim)?;
    let mask = register.site_mask(site)?;
    let zero = C64::new(0.0, 0.0);
    let out = match (op, side) {
        // (σ⁺M)_ab = [a excited] M_{a^m, b}
        (Ladder::Plus, Side::Left) => DMatrix::from_fn(dim, dim, |a, b| {
            if a & mask != 0 {
                m[(a ^ mask, b)]
            } else {
                zero
            }
        }),
        (Ladder::Minus, Side::Left) => DMatrix::from_fn(dim, dim, |a, b| {
            if a & mask == 0 {
                m[(a | mask, b)]
            } else {
                zero
            }
        }),
        // (Mσ⁺)_ab = [b ground] M_{a, b|m}
        (Ladder::Plus, Side::Right) => DMatrix::from_fn(dim, dim, |a, b| {
            if b & mask == 0 {
                m[(a, b | mask)]
            } else {
                zero
            }
        }),
        (Ladder::Minus, Side::Right) => DMatrix::from_fn(dim, dim, |a, b| {
            if b & mask != 0 {
                m[(a, b ^ mask)]
            } else {
                zero
            }
        }),
        (Ladder::Z, Side::Left) => {
            DMatrix::from_fn(
                dim,
                dim,
                |a, b| {
                    if a & mask != 0 {
                        m[(a, b)]
                    } else {
                        -m[(a, b)]
                    }
                },
            )
        }
        (Ladder::Z, Side::Right) => {
            DMatrix::from_fn(
                dim,
                dim,
                |a, b| {
                    if b & mask != 0 {
                        m[(a, b)]
                    } else {
                        -m[(a, b)]
                    }
                },
            )
        }
    };
    Ok(out)
}

/// Reduced state over `keep` (1-based, strictly increasing). The kept sites
/// appear in the listed order, first listed = most significant bit.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_sites();
    if keep.is_empty() {
        return Err(Error::InvalidSites("keep list is empty".into()));
    }
    for w in keep.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidSites(format!(
                "sites must be strictly increasing, got {keep:?}"
            )));
        }
    }
    let register = rho.register();
    let kept_masks: Vec<usize> = keep
        .iter()
        .map(|&s| register.site_mask(s))
        .collect::<Result<_>>()?;
    let traced_masks: Vec<usize> = (1..=n)
        .filter(|s| !keep.contains(s))
        .map(|s| 1 << (n - s))
        .collect();

    let k = keep.len();
    let sub_dim = 1usize << k;
    let env_dim = 1usize << traced_masks.len();
    let spread = |bits: usize, masks: &[usize]| -> usize {
        masks
            .iter()
            .enumerate()
            .filter(|(i, _)| bits & (1 << (masks.len() - 1 - i)) != 0)
            .fold(0, |acc, (_, &m)| acc | m)
    };
    let kept_index: Vec<usize> = (0..sub_dim).map(|r| spread(r, &kept_masks)).collect();
    let env_index: Vec<usize> = (0..env_dim).map(|e| spread(e, &traced_masks)).collect();

    let m = rho.matrix();
    let out = DMatrix::from_fn(sub_dim, sub_dim, |r, c| {
        env_index
            .iter()
            .map(|&e| m[(kept_index[r] | e, kept_index[c] | e)])
            .sum()
    });
    DensityMatrix::from_matrix_unchecked(out)
}

/// Single-site factors available to observables. Each maps a basis state to
/// a scaled basis state (or zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteOp {
    Identity,
    Plus,
    Minus,
    Z,
    /// `σ^x = σ⁺ + σ⁻`
    X,
    /// `σ^y = −i(σ⁺ − σ⁻)`
    Y,
}

impl SiteOp {
    /// Action on a single-site bit: `Some((amplitude, new_bit))` or `None`.
    fn act(self, excited: bool) -> Option<(C64, bool)> {
        let one = C64::new(1.0, 0.0);
        match (self, excited) {
            (SiteOp::Identity, b) => Some((one, b)),
            (SiteOp::Plus, false) => Some((one, true)),
            (SiteOp::Plus, true) => None,
            (SiteOp::Minus, true) => Some((one, false)),
            (SiteOp::Minus, false) => None,
            (SiteOp::Z, true) => Some((one, true)),
            (SiteOp::Z, false) => Some((-one, false)),
            (SiteOp::X, b) => Some((one, !b)),
            // σ^y|G⟩ = −i|E⟩, σ^y|E⟩ = i|G⟩
            (SiteOp::Y, false) => Some((C64::new(0.0, -1.0), true)),
            (SiteOp::Y, true) => Some((C64::new(0.0, 1.0), false)),
        }
    }
}

/// Linear combination of products of single-site factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    n_sites: usize,
    terms: Vec<(C64, Vec<(usize, SiteOp)>)>,
}

impl Observable {
    pub fn new(n_sites: usize) -> Self {
        Self {
            n_sites,
            terms: Vec::new(),
        }
    }

    /// Adds `coefficient · Π factors`. Factors are applied right to left, as
    /// in operator notation.
    pub fn term(mut self, coefficient: impl Into<C64>, factors: &[(usize, SiteOp)]) -> Self {
        self.terms.push((coefficient.into(), factors.to_vec()));
        self
    }

    /// Shorthand for a single product with unit coefficient.
    pub fn product(n_sites: usize, factors: &[(usize, SiteOp)]) -> Self {
        Self::new(n_sites).term(1.0, factors)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }
}

/// `Tr(ρ·O)`.
pub fn expectation(rho: &DensityMatrix, observable: &Observable) -> Result<C64> {
    if observable.n_sites != rho.n_sites() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_sites(),
            found: observable.n_sites,
        });
    }
    let register = rho.register();
    let m = rho.matrix();
    let mut total = C64::new(0.0, 0.0);
    for (coefficient, factors) in &observable.terms {
        let masks: Vec<(usize, SiteOp)> = factors
            .iter()
            .map(|&(site, op)| Ok((register.site_mask(site)?, op)))
            .collect::<Result<_>>()?;
        // O|c⟩ = α|a⟩  ⇒  Tr(Oρ) = Σ_c α ρ_{c,a}
        let mut acc = C64::new(0.0, 0.0);
        'basis: for c in 0..register.dim() {
            let mut state = c;
            let mut amp = C64::new(1.0, 0.0);
            for &(mask, op) in masks.iter().rev() {
                match op.act(state & mask != 0) {
                    Some((a, excited)) => {
                        amp *= a;
                        state = if excited { state | mask } else { state & !mask };
                    }
                    None => continue 'basis,
                }
            }
            acc += amp * m[(c, state)];
        }
        total += coefficient * acc;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn reg(n: usize) -> QubitRegister {
        QubitRegister::new(n).unwrap()
    }

    fn index_of_one(psi: &PureState) -> usize {
        psi.amplitudes().iter().position(|a| *a == c(1.0)).unwrap()
    }

    #[test]
    fn basis_state_encoding() {
        assert_eq!(index_of_one(&basis_state("GG", reg(2)).unwrap()), 0);
        assert_eq!(index_of_one(&basis_state("EE", reg(2)).unwrap()), 3);
        assert_eq!(index_of_one(&basis_state("GEG", reg(3)).unwrap()), 2);
        assert_eq!(reg(4).label_of(reg(4).index_of("EGGE").unwrap()), "EGGE");
    }

    #[test]
    fn basis_state_errors() {
        assert!(matches!(
            basis_state("GG", reg(3)),
            Err(Error::LabelMismatch {
                label: 2,
                register: 3
            })
        ));
        assert!(matches!(
            basis_state("GX", reg(2)),
            Err(Error::UnknownSiteSymbol('X'))
        ));
        assert!(QubitRegister::new(0).is_err());
        assert!(QubitRegister::new(13).is_err());
    }

    #[test]
    fn density_from_pure_examples() {
        let gg = density_from_pure(&basis_state("GG", reg(2)).unwrap()).unwrap();
        assert_eq!(gg.matrix()[(0, 0)], c(1.0));
        assert_eq!(gg.matrix().iter().filter(|z| z.norm() > 0.0).count(), 1);

        let sym = PureState::superposition(&[(c(1.0), "GE"), (c(1.0), "EG")]).unwrap();
        let rho = density_from_pure(&sym).unwrap();
        for &(i, j) in &[(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!((rho.matrix()[(i, j)] - c(0.5)).norm() < 1e-15);
        }
        assert!(rho.matrix()[(0, 0)].norm() < 1e-15);

        let bell = PureState::superposition(&[(c(1.0), "GG"), (c(-1.0), "EE")]).unwrap();
        let rho = density_from_pure(&bell).unwrap();
        assert!((rho.matrix()[(0, 0)] - c(0.5)).norm() < 1e-15);
        assert!((rho.matrix()[(3, 3)] - c(0.5)).norm() < 1e-15);
        assert!((rho.matrix()[(0, 3)] - c(-0.5)).norm() < 1e-15);
        assert!((rho.matrix()[(3, 0)] - c(-0.5)).norm() < 1e-15);
        rho.validate().unwrap();
    }

    #[test]
    fn non_normalized_pure_state_rejected() {
        let v = DVector::from_vec(vec![c(1.0), c(1.0)]);
        assert!(matches!(PureState::new(v), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn density_matrix_validation() {
        let mut m = DMatrix::<C64>::identity(2, 2) * c(0.5);
        m[(0, 1)] = C64::new(0.0, 0.1);
        assert!(DensityMatrix::new(m.clone()).is_err());
        m[(1, 0)] = C64::new(0.0, -0.1);
        DensityMatrix::new(m).unwrap();

        let bad_trace = DMatrix::<C64>::identity(2, 2);
        assert!(DensityMatrix::new(bad_trace).is_err());

        let negative = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.2), c(-0.2)]));
        assert!(matches!(
            DensityMatrix::new(negative),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn ladder_examples() {
        let e = DensityMatrix::from_label("E").unwrap();
        let lowered = apply_ladder(Ladder::Minus, 1, Side::Left, e.matrix()).unwrap();
        // |G⟩⟨E|
        assert_eq!(lowered[(0, 1)], c(1.0));
        assert_eq!(lowered.iter().filter(|z| z.norm() > 0.0).count(), 1);

        let raised = apply_ladder(Ladder::Plus, 1, Side::Left, e.matrix()).unwrap();
        assert!(raised.iter().all(|z| z.norm() == 0.0));

        let ge = DensityMatrix::from_label("GE").unwrap();
        let z2 = apply_ladder(Ladder::Z, 2, Side::Left, ge.matrix()).unwrap();
        assert_eq!(&z2, ge.matrix());
        let z1 = apply_ladder(Ladder::Z, 1, Side::Left, ge.matrix()).unwrap();
        assert_eq!(z1, -ge.matrix().clone());

        assert!(matches!(
            apply_ladder(Ladder::Plus, 3, Side::Left, ge.matrix()),
            Err(Error::SiteOutOfRange { site: 3, .. })
        ));
        assert!(apply_ladder(Ladder::Plus, 0, Side::Right, ge.matrix()).is_err());
    }

    #[test]
    fn partial_trace_examples() {
        let bell = density_from_pure(
            &PureState::superposition(&[(c(1.0), "GG"), (c(1.0), "EE")]).unwrap(),
        )
        .unwrap();
        let a = partial_trace(&bell, &[1]).unwrap();
        let half = DMatrix::<C64>::identity(2, 2) * c(0.5);
        assert!(max_abs_diff(a.matrix(), &half) < 1e-15);

        let ge = DensityMatrix::from_label("GE").unwrap();
        let b = partial_trace(&ge, &[2]).unwrap();
        assert_eq!(b.matrix(), DensityMatrix::from_label("E").unwrap().matrix());

        let ghz = density_from_pure(
            &PureState::superposition(&[(c(1.0), "GGG"), (c(1.0), "EEE")]).unwrap(),
        )
        .unwrap();
        let ab = partial_trace(&ghz, &[1, 2]).unwrap();
        let mut expected = DMatrix::<C64>::zeros(4, 4);
        expected[(0, 0)] = c(0.5);
        expected[(3, 3)] = c(0.5);
        assert!(max_abs_diff(ab.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn partial_trace_non_contiguous_sites() {
        // |E G E⟩ keeping sites 1 and 3 gives |EE⟩
        let rho = DensityMatrix::from_label("EGE").unwrap();
        let r13 = partial_trace(&rho, &[1, 3]).unwrap();
        assert_eq!(
            r13.matrix(),
            DensityMatrix::from_label("EE").unwrap().matrix()
        );
        let r23 = partial_trace(&rho, &[2, 3]).unwrap();
        assert_eq!(
            r23.matrix(),
            DensityMatrix::from_label("GE").unwrap().matrix()
        );
    }

    #[test]
    fn partial_trace_errors() {
        let rho = DensityMatrix::from_label("GGG").unwrap();
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(partial_trace(&rho, &[2, 2]).is_err());
        assert!(partial_trace(&rho, &[3, 1]).is_err());
        assert!(partial_trace(&rho, &[4]).is_err());
    }

    #[test]
    fn expectation_examples() {
        let e = DensityMatrix::from_label("E").unwrap();
        let z = Observable::product(1, &[(1, SiteOp::Z)]);
        assert_eq!(expectation(&e, &z).unwrap(), c(1.0));

        let mixed = DensityMatrix::maximally_mixed(reg(1));
        assert_eq!(expectation(&mixed, &z).unwrap(), c(0.0));

        let ge = DensityMatrix::from_label("GE").unwrap();
        let zz = Observable::product(2, &[(1, SiteOp::Z), (2, SiteOp::Z)]);
        assert_eq!(expectation(&ge, &zz).unwrap(), c(-1.0));

        assert!(matches!(
            expectation(&ge, &z),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn expectation_of_coherences() {
        // (|G⟩ + |E⟩)/√2 has ⟨σ^x⟩ = 1, ⟨σ^y⟩ = 0, ⟨σ⁺⟩ = 1/2
        let plus =
            density_from_pure(&PureState::superposition(&[(c(1.0), "G"), (c(1.0), "E")]).unwrap())
                .unwrap();
        let ev = |op| expectation(&plus, &Observable::product(1, &[(1, op)])).unwrap();
        assert!((ev(SiteOp::X) - c(1.0)).norm() < 1e-15);
        assert!(ev(SiteOp::Y).norm() < 1e-15);
        assert!((ev(SiteOp::Plus) - c(0.5)).norm() < 1e-15);
        // σ^y|G⟩ = −i|E⟩, so (|G⟩ + i|E⟩)/√2 is the −1 eigenstate
        let plus_i = density_from_pure(
            &PureState::superposition(&[(c(1.0), "G"), (C64::new(0.0, 1.0), "E")]).unwrap(),
        )
        .unwrap();
        let y = expectation(&plus_i, &Observable::product(1, &[(1, SiteOp::Y)])).unwrap();
        assert!((y - c(-1.0)).norm() < 1e-15);
    }
}
