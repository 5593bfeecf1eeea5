//! Thermal collective-dissipation generator and its time integration.
//!
//! For fibers `j = 1..N−1` with collective lowering operator
//! `J_j = σ_j⁻ + σ_{j+1}⁻` the generator is
//!
//! ```text
//! L[ρ] = Σ_j γ_j n_j     (2 J_j† ρ J_j − J_j J_j† ρ − ρ J_j J_j†)
//!      + Σ_j γ_j (n_j+1) (2 J_j ρ J_j† − J_j† J_j ρ − ρ J_j† J_j)
//! ```
//!
//! There is no coherent part. All matrix elements of `L` in the computational
//! basis are real, so it is stored as a sparse real matrix acting on the
//! column-major vectorization of `ρ`.
//!
//! `L` conserves the excitation difference `popcount(a) − popcount(b)` of
//! every element `ρ_ab`. Sectors that are zero in the initial state stay
//! exactly zero, and the integrator skips them.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, C64};

/// Default integrator step in units of `1/γ`.
pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_T_MAX: f64 = 50.0;
pub const DEFAULT_RECORD_STRIDE: usize = 100;
/// Frobenius-norm threshold on `L[ρ]` for steady-state detection.
pub const DEFAULT_STEADY_TOL: f64 = 1e-9;
pub const DEFAULT_T_GUARD: f64 = 500.0;
/// Largest step accepted by [`EvolutionConfig::validate`].
pub const MAX_DT: f64 = 0.1;
/// A recorded sample with a smaller eigenvalue aborts the integration.
pub const ABORT_POSITIVITY_TOL: f64 = 1e-6;

/// Damping rates `γ_j` and thermal occupations `n_j` of the `N − 1` fibers.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec {
    gammas: Vec<f64>,
    occupations: Vec<f64>,
}

impl BathSpec {
    pub fn new(gammas: Vec<f64>, occupations: Vec<f64>) -> Result<Self> {
        if gammas.len() != occupations.len() {
            return Err(Error::InvalidBath(format!(
                "{} rates but {} occupations",
                gammas.len(),
                occupations.len()
            )));
        }
        let bad = |v: &f64| !v.is_finite() || *v < 0.0;
        if let Some(g) = gammas.iter().find(|v| bad(v)) {
            return Err(Error::InvalidBath(format!(
                "rate {g} is not finite and ≥ 0"
            )));
        }
        if let Some(n) = occupations.iter().find(|v| bad(v)) {
            return Err(Error::InvalidBath(format!(
                "occupation {n} is not finite and ≥ 0"
            )));
        }
        Ok(Self {
            gammas,
            occupations,
        })
    }

    /// All rates set to 1.
    pub fn unit_rates(occupations: Vec<f64>) -> Result<Self> {
        Self::new(vec![1.0; occupations.len()], occupations)
    }

    /// Zero-temperature bath with unit rates for an `n_sites` chain.
    pub fn zero_temperature(n_sites: usize) -> Self {
        let fibers = n_sites.saturating_sub(1);
        Self {
            gammas: vec![1.0; fibers],
            occupations: vec![0.0; fibers],
        }
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    pub fn n_fibers(&self) -> usize {
        self.gammas.len()
    }

    /// Number of sites the bath is sized for (`fibers + 1`).
    pub fn n_sites(&self) -> usize {
        self.gammas.len() + 1
    }

    fn check_sites(&self, n_sites: usize) -> Result<()> {
        if n_sites != self.n_sites() {
            return Err(Error::DimensionMismatch {
                expected: n_sites.saturating_sub(1),
                found: self.n_fibers(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub t_max: f64,
    pub record_stride: usize,
    pub steady_tol: f64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            t_max: DEFAULT_T_MAX,
            record_stride: DEFAULT_RECORD_STRIDE,
            steady_tol: DEFAULT_STEADY_TOL,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= MAX_DT) {
            return Err(Error::InvalidConfig(format!(
                "dt = {} must lie in (0, {MAX_DT}]",
                self.dt
            )));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "t_max = {} must be positive",
                self.t_max
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidConfig("record_stride must be ≥ 1".into()));
        }
        if !(self.steady_tol >= 1e-12) {
            return Err(Error::InvalidConfig(format!(
                "steady_tol = {} must be ≥ 1e-12",
                self.steady_tol
            )));
        }
        Ok(())
    }

    /// Number of integrator steps to reach `t_max`.
    pub fn n_steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyConfig {
    pub dt: f64,
    pub steady_tol: f64,
    pub t_guard: f64,
}

impl Default for SteadyConfig {
    fn default() -> Self {
        Self {
            dt: DEFAULT_DT,
            steady_tol: DEFAULT_STEADY_TOL,
            t_guard: DEFAULT_T_GUARD,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub state: DensityMatrix,
    /// Time at which `‖L[ρ]‖_F` first fell below the tolerance.
    pub reach_time: f64,
    pub residual: f64,
}

/// Sparse real matrix of the generator acting on column-major `vec(ρ)`.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    n_sites: usize,
    dim: usize,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    coeffs: Vec<f64>,
}

impl Liouvillian {
    pub fn new(bath: &BathSpec) -> Result<Self> {
        let n_sites = bath.n_sites();
        if n_sites > crate::hilbert::MAX_SITES {
            return Err(Error::RegisterSize(n_sites));
        }
        let dim = 1usize << n_sites;
        let fibers: Vec<Fiber> = (0..bath.n_fibers())
            .map(|j| Fiber {
                // fiber j (0-based) joins sites j+1 and j+2
                first: 1 << (n_sites - 1 - j),
                second: 1 << (n_sites - 2 - j),
                decay: bath.gammas[j] * (bath.occupations[j] + 1.0),
                pump: bath.gammas[j] * bath.occupations[j],
            })
            .collect();

        let mut row_start = Vec::with_capacity(dim * dim + 1);
        let mut cols = Vec::new();
        let mut coeffs = Vec::new();
        let mut entries: Vec<(usize, f64)> = Vec::new();
        row_start.push(0);
        for b in 0..dim {
            for a in 0..dim {
                entries.clear();
                for fiber in &fibers {
                    fiber.push_row(a, b, dim, &mut entries);
                }
                entries.sort_by_key(|&(col, _)| col);
                let mut i = 0;
                while i < entries.len() {
                    let col = entries[i].0;
                    let mut sum = 0.0;
                    while i < entries.len() && entries[i].0 == col {
                        sum += entries[i].1;
                        i += 1;
                    }
                    if sum != 0.0 {
                        cols.push(col);
                        coeffs.push(sum);
                    }
                }
                row_start.push(cols.len());
            }
        }
        Ok(Self {
            n_sites,
            dim,
            row_start,
            cols,
            coeffs,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    /// `L[m]` for an arbitrary (not necessarily Hermitian) matrix.
    pub fn apply(&self, m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        self.check_dim(m)?;
        let mut out = DMatrix::zeros(self.dim, self.dim);
        let rows: Vec<usize> = (0..self.dim * self.dim).collect();
        self.apply_rows(m.as_slice(), out.as_mut_slice(), &rows);
        Ok(out)
    }

    /// `‖L[ρ]‖_F`.
    pub fn residual(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok(self.apply(rho.matrix())?.norm())
    }

    fn check_dim(&self, m: &DMatrix<C64>) -> Result<()> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.nrows(),
            });
        }
        Ok(())
    }

    fn apply_rows(&self, src: &[C64], dst: &mut [C64], rows: &[usize]) {
        for &r in rows {
            let span = self.row_start[r]..self.row_start[r + 1];
            let mut acc = C64::new(0.0, 0.0);
            for (&col, &w) in self.cols[span.clone()].iter().zip(&self.coeffs[span]) {
                acc += src[col] * w;
            }
            dst[r] = acc;
        }
    }

    /// Vectorized indices of the excitation-difference sectors that are
    /// nonzero in `m` (closed under Hermitian conjugation).
    fn active_rows(&self, m: &DMatrix<C64>) -> Vec<usize> {
        let n = self.n_sites as i64;
        let sector = |a: usize, b: usize| a.count_ones() as i64 - b.count_ones() as i64 + n;
        let mut active = vec![false; 2 * self.n_sites + 1];
        for b in 0..self.dim {
            for a in 0..self.dim {
                if m[(a, b)] != C64::new(0.0, 0.0) {
                    let q = sector(a, b);
                    active[q as usize] = true;
                    active[(2 * n - q) as usize] = true;
                }
            }
        }
        (0..self.dim * self.dim)
            .filter(|&k| active[sector(k % self.dim, k / self.dim) as usize])
            .collect()
    }
}

struct Fiber {
    first: usize,
    second: usize,
    decay: f64,
    pump: f64,
}

impl Fiber {
    /// Appends the contributions of this fiber to row `(a, b)` of the
    /// vectorized generator, as `(column, coefficient)` pairs.
    fn push_row(&self, a: usize, b: usize, dim: usize, out: &mut Vec<(usize, f64)>) {
        let pair = self.first | self.second;
        let vec_index = |r: usize, c: usize| r + c * dim;
        let excited = |x: usize| (x & self.first != 0) as u32 + (x & self.second != 0) as u32;
        let differs = |x: usize| excited(x) == 1;

        if self.decay != 0.0 {
            let g = self.decay;
            // 2 J ρ J†: sources have one more excitation on each side
            for ma in [self.first, self.second] {
                if a & ma != 0 {
                    continue;
                }
                for mb in [self.first, self.second] {
                    if b & mb == 0 {
                        out.push((vec_index(a | ma, b | mb), 2.0 * g));
                    }
                }
            }
            // −J†J ρ − ρ J†J, with J†J = n_j + n_k + hopping
            let diag = (excited(a) + excited(b)) as f64;
            out.push((vec_index(a, b), -g * diag));
            if differs(a) {
                out.push((vec_index(a ^ pair, b), -g));
            }
            if differs(b) {
                out.push((vec_index(a, b ^ pair), -g));
            }
        }
        if self.pump != 0.0 {
            let g = self.pump;
            // 2 J† ρ J: sources have one fewer excitation on each side
            for ma in [self.first, self.second] {
                if a & ma == 0 {
                    continue;
                }
                for mb in [self.first, self.second] {
                    if b & mb != 0 {
                        out.push((vec_index(a ^ ma, b ^ mb), 2.0 * g));
                    }
                }
            }
            // −J J† ρ − ρ J J†, with J J† = (1 − n_j) + (1 − n_k) + hopping
            let diag = (4 - excited(a) - excited(b)) as f64;
            out.push((vec_index(a, b), -g * diag));
            if differs(a) {
                out.push((vec_index(a ^ pair, b), -g));
            }
            if differs(b) {
                out.push((vec_index(a, b ^ pair), -g));
            }
        }
    }
}

/// `L[ρ]` for the given bath.
pub fn liouvillian_apply(rho: &DensityMatrix, bath: &BathSpec) -> Result<DMatrix<C64>> {
    bath.check_sites(rho.n_sites())?;
    Liouvillian::new(bath)?.apply(rho.matrix())
}

/// Fixed-step classical RK4 integrator with reusable buffers.
pub struct Rk4<'a> {
    generator: &'a Liouvillian,
    rows: Vec<usize>,
    rho: DMatrix<C64>,
    k: [Vec<C64>; 4],
    tmp: Vec<C64>,
}

impl<'a> Rk4<'a> {
    pub fn new(generator: &'a Liouvillian, rho0: &DensityMatrix) -> Result<Self> {
        generator.check_dim(rho0.matrix())?;
        let len = generator.dim * generator.dim;
        let zeros = || vec![C64::new(0.0, 0.0); len];
        Ok(Self {
            generator,
            rows: generator.active_rows(rho0.matrix()),
            rho: rho0.matrix().clone(),
            k: [zeros(), zeros(), zeros(), zeros()],
            tmp: zeros(),
        })
    }

    pub fn state(&self) -> &DMatrix<C64> {
        &self.rho
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(self.rho.clone())
            .expect("integrator state keeps its shape")
    }

    /// `‖L[ρ]‖_F` of the current state.
    pub fn residual(&mut self) -> f64 {
        let [k1, ..] = &mut self.k;
        self.generator
            .apply_rows(self.rho.as_slice(), k1, &self.rows);
        k1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Advances by `dt` and returns `‖L[ρ]‖_F` evaluated at the start of the
    /// step.
    pub fn step(&mut self, dt: f64) -> f64 {
        match self.step_unless_below(dt, 0.0) {
            Ok(r) | Err(r) => r,
        }
    }

    /// Advances by `dt` unless `‖L[ρ]‖_F < tol` at the current state. Returns
    /// `Ok(residual)` after a step, `Err(residual)` when no step was taken.
    pub fn step_unless_below(&mut self, dt: f64, tol: f64) -> Result<f64, f64> {
        let g = self.generator;
        let rows = &self.rows;
        let rho = self.rho.as_mut_slice();
        let [k1, k2, k3, k4] = &mut self.k;
        let tmp = &mut self.tmp;

        g.apply_rows(rho, k1, rows);
        let residual = k1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if residual < tol {
            return Err(residual);
        }
        let half = 0.5 * dt;
        for &r in rows {
            tmp[r] = rho[r] + k1[r] * half;
        }
        g.apply_rows(tmp, k2, rows);
        for &r in rows {
            tmp[r] = rho[r] + k2[r] * half;
        }
        g.apply_rows(tmp, k3, rows);
        for &r in rows {
            tmp[r] = rho[r] + k3[r] * dt;
        }
        g.apply_rows(tmp, k4, rows);
        let sixth = dt / 6.0;
        for &r in rows {
            rho[r] += (k1[r] + (k2[r] + k3[r]) * 2.0 + k4[r]) * sixth;
        }
        hermitize(&mut self.rho);
        Ok(residual)
    }
}

/// `ρ ← (ρ + ρ†)/2` in place.
fn hermitize(m: &mut DMatrix<C64>) {
    let dim = m.nrows();
    for b in 0..dim {
        m[(b, b)].im = 0.0;
        for a in (b + 1)..dim {
            let avg = (m[(a, b)] + m[(b, a)].conj()) * 0.5;
            m[(a, b)] = avg;
            m[(b, a)] = avg.conj();
        }
    }
}

/// One classical RK4 step of `dρ/dt = L[ρ]`, re-Hermitized.
pub fn rk4_step(rho: &DensityMatrix, dt: f64, bath: &BathSpec) -> Result<DensityMatrix> {
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::InvalidConfig(format!("dt = {dt} must be ≥ 0")));
    }
    bath.check_sites(rho.n_sites())?;
    if dt == 0.0 {
        return Ok(rho.clone());
    }
    let generator = Liouvillian::new(bath)?;
    let mut rk = Rk4::new(&generator, rho)?;
    rk.step(dt);
    Ok(rk.density())
}

/// Iterator over recorded samples `(t, ρ(t))` of a fixed-step integration,
/// starting with `t = 0`. Every recorded sample is checked for positivity.
pub struct Evolution<'a> {
    rk: Rk4<'a>,
    dt: f64,
    stride: usize,
    n_steps: usize,
    step: usize,
    next_record: Option<usize>,
}

impl<'a> Evolution<'a> {
    pub fn new(
        generator: &'a Liouvillian,
        rho0: &DensityMatrix,
        config: &EvolutionConfig,
    ) -> Result<Self> {
        config.validate()?;
        if generator.n_sites() != rho0.n_sites() {
            return Err(Error::DimensionMismatch {
                expected: rho0.n_sites(),
                found: generator.n_sites(),
            });
        }
        Ok(Self {
            rk: Rk4::new(generator, rho0)?,
            dt: config.dt,
            stride: config.record_stride,
            n_steps: config.n_steps(),
            step: 0,
            next_record: Some(0),
        })
    }

    /// `‖L[ρ]‖_F` at the most recently emitted sample.
    pub fn residual(&mut self) -> f64 {
        self.rk.residual()
    }
}

impl Iterator for Evolution<'_> {
    type Item = Result<(f64, DensityMatrix)>;

    fn next(&mut self) -> Option<Self::Item> {
        let target = self.next_record?;
        while self.step < target {
            self.rk.step(self.dt);
            self.step += 1;
        }
        self.next_record =
            (self.step < self.n_steps).then(|| (self.step + self.stride).min(self.n_steps));

        let t = self.step as f64 * self.dt;
        if self
            .rk
            .state()
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            self.next_record = None;
            return Some(Err(Error::Diverged { t }));
        }
        let rho = self.rk.density();
        let min_eig = rho.min_eigenvalue();
        if min_eig < -ABORT_POSITIVITY_TOL {
            self.next_record = None;
            return Some(Err(Error::PositivityViolation { t, min_eig }));
        }
        Some(Ok((t, rho)))
    }
}

/// Integrates from `t = 0` to `t_max`, recording every `record_stride` steps
/// (and the final step). Each observer sees every recorded sample.
pub fn evolve(
    rho0: &DensityMatrix,
    bath: &BathSpec,
    config: &EvolutionConfig,
    observers: &mut [&mut dyn FnMut(f64, &DensityMatrix)],
) -> Result<Trajectory> {
    bath.check_sites(rho0.n_sites())?;
    let generator = Liouvillian::new(bath)?;
    let mut trajectory = Trajectory::default();
    for sample in Evolution::new(&generator, rho0, config)? {
        let (t, rho) = sample?;
        for observer in observers.iter_mut() {
            observer(t, &rho);
        }
        trajectory.times.push(t);
        trajectory.states.push(rho);
    }
    Ok(trajectory)
}

/// Integrates until `‖L[ρ]‖_F < steady_tol`.
pub fn steady_state(
    rho0: &DensityMatrix,
    bath: &BathSpec,
    config: &SteadyConfig,
) -> Result<SteadyState> {
    bath.check_sites(rho0.n_sites())?;
    if !(config.steady_tol > 0.0) || !(config.t_guard > 0.0) {
        return Err(Error::InvalidConfig(
            "steady_tol and t_guard must be positive".into(),
        ));
    }
    if !(config.dt > 0.0 && config.dt <= MAX_DT) {
        return Err(Error::InvalidConfig(format!(
            "dt = {} must lie in (0, {MAX_DT}]",
            config.dt
        )));
    }
    let generator = Liouvillian::new(bath)?;
    let mut rk = Rk4::new(&generator, rho0)?;
    let max_steps = (config.t_guard / config.dt).ceil() as usize;
    let mut step = 0usize;
    let residual = loop {
        match rk.step_unless_below(config.dt, config.steady_tol) {
            Err(residual) => break residual,
            Ok(residual) if !residual.is_finite() => {
                return Err(Error::Diverged {
                    t: step as f64 * config.dt,
                })
            }
            Ok(residual) if step >= max_steps => {
                return Err(Error::NoSteadyState {
                    last_norm: residual,
                    t_guard: config.t_guard,
                })
            }
            Ok(_) => step += 1,
        }
    };
    let state = rk.density();
    let min_eig = state.min_eigenvalue();
    let reach_time = step as f64 * config.dt;
    if min_eig < -ABORT_POSITIVITY_TOL {
        return Err(Error::PositivityViolation {
            t: reach_time,
            min_eig,
        });
    }
    Ok(SteadyState {
        state,
        reach_time,
        residual,
    })
}
