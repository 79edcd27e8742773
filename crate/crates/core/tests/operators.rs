use bessel_harmonic::bmo::mu_average;
use bessel_harmonic::dyadic::{
    build_grid, canonical_major_subsets, chain_at_zero, containment_constant, random_subtree, DyadicCube, SparseFamily,
};
use bessel_harmonic::operators::{
    cube_indicator_witnesses, dyadic_maximal, dyadic_maximal_function, holder_split_check, lp_norm,
    operator_norm_fixed_point, operator_norm_lower_bound, oscillation_expansion_ratio, sparse_apply,
    sparse_commutator_apply, CommutatorVariant, Operator, OperatorOutput,
};
use bessel_harmonic::quad::QuadConfig;
use bessel_harmonic::weights::{power_weight_range, ClassTag, Weight};
use bessel_harmonic::{Against, BesselMeasure, FuncExpr, Interval};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn family(seed: u64, m: &BesselMeasure) -> SparseFamily {
    canonical_major_subsets(&random_subtree(DyadicCube::new(0, 0), 5, 0.5, seed), m).unwrap()
}

fn random_piecewise(rng: &mut ChaCha8Rng, n: usize, lo: f64) -> FuncExpr {
    let breaks: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let values = (0..n).map(|_| rng.gen_range(lo..3.0)).collect();
    FuncExpr::piecewise(breaks, values).unwrap()
}

/// `∫_0^1 u v dμ`, splitting at the given kinks and at every dyadic point of
/// level 7 (finer than any family used here).
fn pairing<U: Fn(f64) -> f64, V: Fn(f64) -> f64>(u: U, v: V, kinks: &[f64], m: &BesselMeasure) -> f64 {
    let mut breaks: Vec<f64> = (1..128).map(|i| i as f64 / 128.0).collect();
    breaks.extend_from_slice(kinks);
    let cfg = QuadConfig::with_rel_tol(1e-12);
    m.integrate_fn(|x| u(x) * v(x), Interval::new(0.0, 1.0).unwrap(), Against::Dmu, &breaks, &cfg).unwrap()
}

fn log_kinks(b: &FuncExpr, s: &SparseFamily, m: &BesselMeasure) -> Vec<f64> {
    let mut out = Vec::new();
    for q in &s.cubes {
        let qi = q.interval();
        out.extend(b.crossings(mu_average(b, qi, m).unwrap(), qi));
    }
    out
}

#[test]
fn chain_witness_at_constant_weight() {
    let m = BesselMeasure::new(1.0).unwrap();
    let s = canonical_major_subsets(&chain_at_zero(0, 20), &m).unwrap();
    let est = operator_norm_lower_bound(&Operator::Sparse(&s), 2.0, &Weight::constant(1.0), &cube_indicator_witnesses(&s), &m)
        .unwrap();
    assert!(est.value >= 1.0 && est.value < 3.0, "{}", est.value);
    let fp = operator_norm_fixed_point(&Operator::Sparse(&s), 2.0, &Weight::constant(1.0), &m, 1, 300).unwrap();
    assert!(fp.value >= est.value * (1.0 - 1e-12));
    assert!((fp.recompute(&Operator::Sparse(&s), &m).unwrap() - fp.value).abs() < 1e-12 * fp.value);
}

#[test]
fn doubling_b_doubles_commutator_norms() {
    let m = BesselMeasure::new(1.0).unwrap();
    let s = family(4, &m);
    let b = FuncExpr::log_power(1.0);
    let b2 = b.scaled(2.0);
    let f = FuncExpr::indicator(Interval::new(0.25, 0.75).unwrap());
    let w = Weight::power(1.5);
    for variant in [CommutatorVariant::Left, CommutatorVariant::Adjoint] {
        let n1 = sparse_commutator_apply(&s, &b, &f, &m, variant).unwrap().lp_norm(2.0, &w).unwrap();
        let n2 = sparse_commutator_apply(&s, &b2, &f, &m, variant).unwrap().lp_norm(2.0, &w).unwrap();
        assert!((n2 - 2.0 * n1).abs() < 1e-9 * n2, "{variant:?}: {n1} {n2}");
    }
}

#[test]
fn left_commutator_on_one_cube_is_deviation() {
    let m = BesselMeasure::new(1.0).unwrap();
    let q = DyadicCube::new(0, 0);
    let s = canonical_major_subsets(&[q], &m).unwrap();
    let b = FuncExpr::log_power(1.0);
    let bq = mu_average(&b, q.interval(), &m).unwrap();
    let out = sparse_commutator_apply(&s, &b, &FuncExpr::indicator(q.interval()), &m, CommutatorVariant::Left).unwrap();
    for x in [0.01, 0.3, 0.7, 0.99] {
        assert!((out.eval(x) - (b.eval(x) - bq).abs()).abs() < 1e-12);
    }
    assert_eq!(out.eval(1.5), 0.0);
}

#[test]
fn left_commutator_norm_with_slow_decay_at_zero() {
    // b = ln x on [0, 1] with μ = x dx: b_Q = −1/2, and with u = −ln x,
    // ∫_0^1 (ln x + 1/2)² x^{δ−1} dx = ∫_0^∞ (u − 1/2)² e^{−δu} du.
    let m = BesselMeasure::new(0.5).unwrap();
    let q = DyadicCube::new(0, 0);
    let s = canonical_major_subsets(&[q], &m).unwrap();
    let b = FuncExpr::log_power(0.5);
    let out = sparse_commutator_apply(&s, &b, &FuncExpr::constant(1.0), &m, CommutatorVariant::Left).unwrap();
    let OperatorOutput::Left(l) = out else { panic!("left commutator output") };
    let d: f64 = 0.01;
    let want = 2.0 / d.powi(3) - 1.0 / d.powi(2) + 0.25 / d;
    let got = l.lp_norm_pow(2.0, &Weight::power(d - 1.0)).unwrap();
    assert!((got - want).abs() < 1e-10 * want, "{got} vs {want}");
}

#[test]
fn two_level_maximal_value() {
    let grid = build_grid(Interval::new(0.0, 1.0).unwrap(), 0, 1).unwrap();
    let f = FuncExpr::indicator(Interval::new(0.0, 0.5).unwrap());
    let v = dyadic_maximal(&f, &Weight::constant(1.0), &grid, 0.75).unwrap();
    assert!((v - 0.5).abs() < 1e-15);
    let c = dyadic_maximal(&FuncExpr::constant(2.5), &Weight::power(1.3), &grid, 0.2).unwrap();
    assert!((c - 2.5).abs() < 1e-12);
}

#[test]
fn oscillation_expansion_of_log() {
    let m = BesselMeasure::new(1.0).unwrap();
    let r = oscillation_expansion_ratio(&FuncExpr::log_power(1.0), DyadicCube::new(0, 0), &m, 10, 400).unwrap();
    assert!(r <= 2.0 * containment_constant(&m), "{r}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sparse_operator_is_self_adjoint(seed in 0u64..1000) {
        let m = BesselMeasure::new(1.0).unwrap();
        let s = family(seed, &m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_piecewise(&mut rng, 32, -3.0);
        let g = random_piecewise(&mut rng, 32, -3.0);
        let af = sparse_apply(&s, &f, &m).unwrap();
        let ag = sparse_apply(&s, &g, &m).unwrap();
        let l = pairing(|x| af.eval(x), |x| g.eval(x), &[], &m);
        let r = pairing(|x| f.eval(x), |x| ag.eval(x), &[], &m);
        prop_assert!((l - r).abs() <= 1e-9 * l.abs().max(r.abs()));
    }

    #[test]
    fn commutator_adjoint_duality(seed in 0u64..1000) {
        let m = BesselMeasure::new(1.0).unwrap();
        let s = family(seed, &m);
        let b = FuncExpr::log_power(1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_piecewise(&mut rng, 32, 0.0);
        let g = random_piecewise(&mut rng, 32, 0.0);
        let left = sparse_commutator_apply(&s, &b, &f, &m, CommutatorVariant::Left).unwrap();
        let adj = sparse_commutator_apply(&s, &b, &g, &m, CommutatorVariant::Adjoint).unwrap();
        prop_assert!(matches!(left, OperatorOutput::Left(_)));
        let kinks = log_kinks(&b, &s, &m);
        let l = pairing(|x| left.eval(x), |x| g.eval(x), &kinks, &m);
        let r = pairing(|x| f.eval(x), |x| adj.eval(x), &kinks, &m);
        prop_assert!((l - r).abs() <= 1e-8 * l.abs().max(r.abs()), "{} vs {}", l, r);
    }

    #[test]
    fn constant_b_gives_zero(seed in 0u64..1000, c in -5.0f64..5.0) {
        let m = BesselMeasure::new(0.5).unwrap();
        let s = family(seed, &m);
        let f = FuncExpr::indicator(Interval::new(0.1, 0.6).unwrap());
        for variant in [CommutatorVariant::Left, CommutatorVariant::Adjoint] {
            let out = sparse_commutator_apply(&s, &FuncExpr::constant(c), &f, &m, variant).unwrap();
            prop_assert_eq!(out.lp_norm(2.0, &Weight::constant(1.0)).unwrap(), 0.0);
        }
    }

    #[test]
    fn weighted_maximal_is_bounded_by_conjugate_exponent(seed in 0u64..1000, p in 1.3f64..4.0, alpha in -0.8f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_piecewise(&mut rng, 64, -3.0);
        let sigma = Weight::power(alpha);
        let grid = build_grid(Interval::new(0.0, 1.0).unwrap(), 0, 6).unwrap();
        let mf = dyadic_maximal_function(&f, &sigma, &grid).unwrap();
        let lhs = lp_norm(&mf, p, &sigma).unwrap();
        let rhs = p / (p - 1.0) * lp_norm(&f, p, &sigma).unwrap();
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn holder_split_on_cubes(t in 0.02f64..0.98, p in 1.3f64..4.0, level in 0i32..12, index in 0u64..8) {
        let m = BesselMeasure::new(1.0).unwrap();
        let (lo, hi) = power_weight_range(ClassTag::TildeAp { p, class_lambda: 0.5 });
        let w = Weight::power(lo + t * (hi - lo));
        let (lhs, rhs) = holder_split_check(&w, p, &m, DyadicCube::new(level, index).interval()).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }
}
