use std::f64::consts::PI;

use cavity_chain::hilbert::max_abs_diff;
use cavity_chain::measures::{measurement_projectors, MeasurementBasis};
use cavity_chain::oracle::squeezing_scan;
use cavity_chain::squeezing::closed_form_xi_squared;
use cavity_chain::{
    apply_ladder, classical_correlation, collective_moments, concurrence, conditional_entropy_with,
    density_from_pure, discord, liouvillian_apply, mutual_information, partial_trace,
    spin_squeezing, von_neumann_entropy, BathSpec, DensityMatrix, Ladder, MeasuredSide, PairState,
    PureState, Side, C64,
};
use nalgebra::{DMatrix, DVector, Matrix2};
use proptest::prelude::*;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn complex_matrix(dim: usize) -> impl Strategy<Value = DMatrix<C64>> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim).prop_map(move |v| {
        DMatrix::from_fn(dim, dim, |i, j| {
            let k = 2 * (i * dim + j);
            C64::new(v[k], v[k + 1])
        })
    })
}

fn hermitian(dim: usize) -> impl Strategy<Value = DMatrix<C64>> {
    complex_matrix(dim).prop_map(|g| (&g + g.adjoint()) * c(0.5))
}

fn density(n_sites: usize) -> impl Strategy<Value = DensityMatrix> {
    complex_matrix(1 << n_sites).prop_filter_map("nonzero", |g| {
        let m = &g * g.adjoint();
        let t = m.trace();
        (t.re > 1e-6).then(|| DensityMatrix::new(m / t).unwrap())
    })
}

fn pure_pair() -> impl Strategy<Value = PairState> {
    prop::collection::vec(-1.0f64..1.0, 8).prop_filter_map("nonzero", |v| {
        let amps = DVector::from_fn(4, |i, _| C64::new(v[2 * i], v[2 * i + 1]));
        if amps.norm() < 1e-3 {
            return None;
        }
        let rho = density_from_pure(&PureState::normalized(amps).ok()?).ok()?;
        PairState::new(rho, (1, 2)).ok()
    })
}

fn unitary2() -> impl Strategy<Value = Matrix2<C64>> {
    (0.0..PI, 0.0..2.0 * PI, 0.0..2.0 * PI, 0.0..2.0 * PI).prop_map(|(t, a, b, g)| {
        let (s, co) = (0.5 * t).sin_cos();
        Matrix2::new(
            C64::from_polar(co, a),
            -C64::from_polar(s, b),
            C64::from_polar(s, g - b + a),
            C64::from_polar(co, g),
        ) * C64::from_polar(1.0, 0.3 * a)
    })
}

fn bath(n_sites: usize) -> impl Strategy<Value = BathSpec> {
    (
        prop::collection::vec(0.1f64..2.0, n_sites - 1),
        prop::collection::vec(0.0f64..2.0, n_sites - 1),
    )
        .prop_map(|(g, n)| BathSpec::new(g, n).unwrap())
}

fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Dense `op` on `site` of an `n`-site register, site 1 leftmost.
fn dense_site_op(op: Ladder, site: usize, n: usize) -> DMatrix<C64> {
    let single = match op {
        Ladder::Plus => DMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(1.0), c(0.0)]),
        Ladder::Minus => DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]),
        Ladder::Z => DMatrix::from_row_slice(2, 2, &[c(-1.0), c(0.0), c(0.0), c(1.0)]),
    };
    (1..=n).fold(DMatrix::from_element(1, 1, c(1.0)), |acc, k| {
        if k == site {
            kron(&acc, &single)
        } else {
            kron(&acc, &DMatrix::identity(2, 2))
        }
    })
}

fn local(u: &Matrix2<C64>, v: &Matrix2<C64>, rho: &DMatrix<C64>) -> DMatrix<C64> {
    let uv = DMatrix::from_fn(4, 4, |i, j| u[(i / 2, j / 2)] * v[(i % 2, j % 2)]);
    &uv * rho * uv.adjoint()
}

fn trace_inner(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    (a.adjoint() * b).trace()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_trace_keeps_trace_and_positivity(rho in density(3), mask in 1usize..8) {
        let keep: Vec<usize> = (1..=3).filter(|s| mask & (1 << (s - 1)) != 0).collect();
        let reduced = partial_trace(&rho, &keep).unwrap();
        prop_assert!((reduced.trace() - rho.trace()).abs() < 1e-12);
        prop_assert!(reduced.hermiticity_error() < 1e-12);
        prop_assert!(reduced.min_eigenvalue() > -1e-12);
        prop_assert_eq!(partial_trace(&rho, &[1, 2, 3]).unwrap(), rho.clone());
    }

    #[test]
    fn partial_trace_composes(rho in density(3)) {
        let direct = partial_trace(&rho, &[1]).unwrap();
        let stepwise = partial_trace(&partial_trace(&rho, &[1, 3]).unwrap(), &[1]).unwrap();
        prop_assert!(max_abs_diff(direct.matrix(), stepwise.matrix()) < 1e-12);
    }

    #[test]
    fn ladder_adjointness(a in complex_matrix(8), m in complex_matrix(8), site in 1usize..=3) {
        let plus_m = apply_ladder(Ladder::Plus, site, Side::Left, &m).unwrap();
        let minus_a = apply_ladder(Ladder::Minus, site, Side::Left, &a).unwrap();
        let lhs = trace_inner(&a, &plus_m);
        let rhs = trace_inner(&m, &minus_a).conj();
        prop_assert!((lhs - rhs).norm() < 1e-12);

        let m_plus = apply_ladder(Ladder::Plus, site, Side::Right, &m).unwrap();
        let a_minus = apply_ladder(Ladder::Minus, site, Side::Right, &a).unwrap();
        prop_assert!((trace_inner(&a, &m_plus) - trace_inner(&m, &a_minus).conj()).norm() < 1e-12);
    }

    #[test]
    fn ladder_matches_dense_kronecker(rho in hermitian(8), site in 1usize..=3) {
        for op in [Ladder::Plus, Ladder::Minus, Ladder::Z] {
            let dense = dense_site_op(op, site, 3);
            let left = apply_ladder(op, site, Side::Left, &rho).unwrap();
            let right = apply_ladder(op, site, Side::Right, &rho).unwrap();
            prop_assert!(max_abs_diff(&left, &(&dense * &rho)) < 1e-12);
            prop_assert!(max_abs_diff(&right, &(&rho * &dense)) < 1e-12);
        }
    }

    #[test]
    fn generator_is_traceless_and_hermitian(h in hermitian(8), bath in bath(3)) {
        let rho = DensityMatrix::from_matrix_unchecked(h).unwrap();
        let out = liouvillian_apply(&rho, &bath).unwrap();
        prop_assert!(out.trace().norm() < 1e-12);
        prop_assert!(max_abs_diff(&out, &out.adjoint()) < 1e-12);
    }

    #[test]
    fn generator_is_linear(
        a in hermitian(4),
        b in hermitian(4),
        alpha in -2.0f64..2.0,
        beta in -2.0f64..2.0,
        bath in bath(2),
    ) {
        let apply = |m: DMatrix<C64>| {
            liouvillian_apply(&DensityMatrix::from_matrix_unchecked(m).unwrap(), &bath).unwrap()
        };
        let combined = apply(&a * c(alpha) + &b * c(beta));
        let separate = apply(a) * c(alpha) + apply(b) * c(beta);
        prop_assert!(max_abs_diff(&combined, &separate) < 1e-12);
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(rho in density(2), u in unitary2(), v in unitary2()) {
        let pair = PairState::new(rho.clone(), (1, 2)).unwrap();
        let rotated = PairState::from_matrix(local(&u, &v, rho.matrix())).unwrap();
        let before = concurrence(&pair).unwrap();
        prop_assert!((before - concurrence(&rotated).unwrap()).abs() < 1e-10);
        prop_assert!((0.0..=1.0).contains(&before));
    }

    #[test]
    fn correlations_are_bounded(rho in density(2)) {
        let pair = PairState::new(rho, (1, 2)).unwrap();
        let mutual = mutual_information(&pair).unwrap();
        for side in [MeasuredSide::A, MeasuredSide::B] {
            let (j, _) = classical_correlation(&pair, side).unwrap();
            let d = discord(&pair, side).unwrap().discord;
            prop_assert!(j >= -1e-8 && j <= mutual + 1e-8);
            prop_assert!(d >= -1e-8 && d <= mutual + 1e-8);
        }
    }

    #[test]
    fn relabeling_outcomes_is_exact(rho in density(2), theta in 0.0..PI, phi in 0.0..2.0 * PI) {
        let pair = PairState::new(rho, (1, 2)).unwrap();
        let [b1, b2] = measurement_projectors(&MeasurementBasis::new(theta, phi).unwrap());
        for side in [MeasuredSide::A, MeasuredSide::B] {
            let forward = conditional_entropy_with(&pair, &[b1, b2], side).unwrap();
            let swapped = conditional_entropy_with(&pair, &[b2, b1], side).unwrap();
            prop_assert_eq!(forward, swapped);
        }
    }

    #[test]
    fn pure_state_discord_is_entanglement_entropy(pair in pure_pair()) {
        let marginal = partial_trace(pair.rho(), &[1]).unwrap();
        let s = von_neumann_entropy(&marginal).unwrap();
        let mutual = mutual_information(&pair).unwrap();
        prop_assert!((mutual / 2.0 - s).abs() < 2e-4);
        for side in [MeasuredSide::A, MeasuredSide::B] {
            prop_assert!((discord(&pair, side).unwrap().discord - s).abs() < 2e-4);
        }
    }

    #[test]
    fn squeezing_is_rotation_invariant(rho in density(3), u in unitary2()) {
        let Ok(before) = spin_squeezing(&rho) else { return Ok(()); };
        let uuu = DMatrix::from_fn(8, 8, |i, j| {
            (0..3).fold(c(1.0), |acc, k| acc * u[((i >> k) & 1, (j >> k) & 1)])
        });
        let rotated = DensityMatrix::new(&uuu * rho.matrix() * uuu.adjoint()).unwrap();
        let after = spin_squeezing(&rotated).unwrap();
        prop_assert!((before.xi_squared - after.xi_squared).abs() < 1e-9);
    }

    #[test]
    fn squeezing_routes_agree(rho in density(3)) {
        let Ok(result) = spin_squeezing(&rho) else { return Ok(()); };
        let moments = collective_moments(&rho).unwrap();
        prop_assert!(result.optimal_direction.dot(&moments.mean).abs() <= 1e-9 * moments.mean.norm());
        prop_assert!((closed_form_xi_squared(&moments).unwrap() - result.xi_squared).abs() < 1e-9);
        prop_assert!((squeezing_scan(&rho, 0.1).unwrap() - result.xi_squared).abs() < 1e-6);
    }

    #[test]
    fn identical_product_states_are_coherent(theta in 0.0..PI, phi in 0.0..2.0 * PI, n in 2usize..=4) {
        let single = [C64::from_polar((0.5 * theta).sin(), phi), c((0.5 * theta).cos())];
        let amps = DVector::from_fn(1 << n, |idx, _| {
            (0..n).fold(c(1.0), |acc, k| acc * single[(idx >> k) & 1])
        });
        let rho = density_from_pure(&PureState::new(amps).unwrap()).unwrap();
        prop_assert!((spin_squeezing(&rho).unwrap().xi_squared - 1.0).abs() < 1e-9);
    }
}
