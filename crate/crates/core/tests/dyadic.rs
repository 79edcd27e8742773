use bessel_harmonic::dyadic::{
    band_of, build_grid, canonical_major_subsets, chain_at_zero, level_set_estimate, layer_decompose, level_sets,
    random_gapped, random_subtree, verify_sparse, DyadicCube, SparseFamily,
};
use bessel_harmonic::orlicz::YoungFunction;
use bessel_harmonic::weights::Weight;
use bessel_harmonic::{BesselMeasure, FuncExpr, Interval, IntervalSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GAMMA_PSI: f64 = 16.0;

fn mu(l: f64) -> BesselMeasure {
    BesselMeasure::new(l).unwrap()
}

#[test]
fn levels_tile_the_domain() {
    let g = build_grid(Interval::new(0.0, 4.0).unwrap(), -2, 3).unwrap();
    for level in -2..=3 {
        let mut cells: Vec<Interval> = g.iter().filter(|q| q.level == level).map(|q| q.interval()).collect();
        cells.sort_by(|a, b| a.a.total_cmp(&b.a));
        assert_eq!(cells.first().unwrap().a, 0.0);
        assert_eq!(cells.last().unwrap().b, 4.0);
        assert!(cells.windows(2).all(|w| w[0].b == w[1].a));
    }
}

#[test]
fn parent_child_ratio_away_from_zero() {
    let m = mu(1.0);
    for q in build_grid(Interval::new(0.0, 8.0).unwrap(), 0, 6).unwrap() {
        for c in q.children() {
            let r = m.mu(q.interval()) / m.mu(c.interval());
            assert!(r <= 8.0 + 1e-12 && r > 1.0);
        }
    }
}

#[test]
fn chain_sparseness_values() {
    let chain = chain_at_zero(0, 3);
    let lebesgue = canonical_major_subsets(&chain, &mu(0.0)).unwrap();
    assert_eq!(verify_sparse(&lebesgue, &mu(0.0)).unwrap().0, 0.5);
    let bessel = canonical_major_subsets(&chain, &mu(1.0)).unwrap();
    assert!((verify_sparse(&bessel, &mu(1.0)).unwrap().0 - 7.0 / 8.0).abs() < 1e-15);
}

#[test]
fn left_half_tree_is_half_sparse() {
    let cubes: Vec<DyadicCube> = (0..=3).map(|l| DyadicCube::new(l, 0)).collect();
    assert_eq!(canonical_major_subsets(&cubes, &mu(0.0)).unwrap().eta, 0.5);
}

#[test]
fn antichain_has_full_major_subsets() {
    let cubes = vec![DyadicCube::new(2, 0), DyadicCube::new(2, 3), DyadicCube::new(3, 4)];
    let fam = canonical_major_subsets(&cubes, &mu(1.0)).unwrap();
    assert_eq!(fam.eta, 1.0);
    assert_eq!(layer_decompose(&cubes).len(), 1);
    assert_eq!(layer_decompose(&chain_at_zero(0, 3)).sizes(), vec![1, 1, 1]);
}

#[test]
fn constant_function_lands_in_one_band() {
    let m = mu(1.0);
    let psi = YoungFunction::LLogL { eps: 1.0 };
    // Slightly inside band 3: the bisected norm is not exact at 4^{-3}.
    let c = 0.999 * 4f64.powi(-3) * psi.inverse(1.0).unwrap();
    let cubes = random_subtree(DyadicCube::new(0, 0), 4, 0.6, 11);
    let ls = level_sets(&cubes, &FuncExpr::constant(c), &psi, &m).unwrap();
    assert_eq!(ls.bands.len(), 1);
    assert_eq!(ls.bands.get(&3).map(Vec::len), Some(cubes.len()));
    let zero = level_sets(&cubes, &FuncExpr::constant(0.0), &psi, &m).unwrap();
    assert!(zero.bands.is_empty() && zero.null.len() == cubes.len());
}

#[test]
fn half_indicator_bands_under_identity() {
    let f = FuncExpr::indicator(Interval::new(0.0, 0.5).unwrap());
    let cubes = vec![DyadicCube::new(0, 0), DyadicCube::new(1, 0)];
    let ls = level_sets(&cubes, &f, &YoungFunction::Id, &mu(0.0)).unwrap();
    assert_eq!(ls.bands.get(&0).map(Vec::len), Some(2));
}

/// Level-set estimate on seeded gapped trees: with three children eight
/// levels down per generation the families are `(1 − 1/32)`-sparse.
#[test]
fn level_set_estimate_holds_with_literal_constants() {
    let m = mu(1.0);
    let psi = YoungFunction::LLogL { eps: 1.0 };
    let phi = YoungFunction::LLogL { eps: 0.5 };
    let mut populated = [0usize; 4];
    for seed in 0..6u64 {
        let cubes = random_gapped(DyadicCube::new(0, 0), 2, 8, 3, seed);
        let fam = canonical_major_subsets(&cubes, &m).unwrap();
        assert!(fam.eta >= 1.0 - 1.0 / 32.0, "seed {seed}: η = {}", fam.eta);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 256;
        let breaks: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let values: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.gen_range(-4.0..0.0))).collect();
        let f = FuncExpr::piecewise(breaks, values).unwrap();
        let w = Weight::power(rng.gen_range(-0.5..2.5));
        let e = IntervalSet::from_interval(Interval::new(rng.gen_range(0.0..0.5), rng.gen_range(0.5..1.0)).unwrap());
        for k in 1..=3u32 {
            let r = level_set_estimate(&cubes, k, &f, &w, &e, &phi, &psi, GAMMA_PSI, &m).unwrap();
            if !r.band.is_empty() {
                populated[k as usize] += 1;
            }
            assert!(r.lhs <= r.rhs, "seed {seed} k {k}: {} > {}", r.lhs, r.rhs);
        }
    }
    assert!(populated[1..].iter().all(|&c| c > 0), "{populated:?}");
}

#[test]
fn insufficiently_sparse_band_is_rejected() {
    let m = mu(0.0);
    let cubes = chain_at_zero(0, 4);
    let f = FuncExpr::constant(0.2);
    let psi = YoungFunction::Id;
    let e = IntervalSet::from_interval(Interval::new(0.0, 1.0).unwrap());
    let r = level_set_estimate(&cubes, 1, &f, &Weight::constant(1.0), &e, &YoungFunction::LLogL { eps: 0.5 }, &psi, GAMMA_PSI, &m);
    assert!(r.is_err());
}

proptest! {
    #[test]
    fn band_contains_its_norm(norm in 1e-12f64..1.0) {
        let k = band_of(norm) as i32;
        prop_assert!(norm <= 4f64.powi(-k) && norm > 4f64.powi(-k - 1));
    }

    #[test]
    fn canonical_majors_are_disjoint_and_exact(seed in 0u64..500, lambda in 0.0f64..2.0) {
        let m = mu(lambda);
        let cubes = random_subtree(DyadicCube::new(0, 0), 5, 0.5, seed);
        let fam = canonical_major_subsets(&cubes, &m).unwrap();
        let rebuilt = SparseFamily::new(fam.cubes.clone(), fam.major.clone(), &m).unwrap();
        let (eta, _) = verify_sparse(&rebuilt, &m).unwrap();
        prop_assert!((eta - fam.eta).abs() < 1e-15);
        for (q, e) in fam.cubes.iter().zip(&fam.major) {
            prop_assert!(m.mass_of_set(bessel_harmonic::Against::Dmu, e).unwrap() >= eta * m.mu(q.interval()) * (1.0 - 1e-12));
        }
    }

    #[test]
    fn ancestors_contain_descendants(x in 0.0f64..1.0, l1 in 0i32..20, d in 0i32..20) {
        let q = DyadicCube::containing(x, l1 + d);
        let a = q.ancestor(l1);
        prop_assert!(a.contains_cube(&q));
        prop_assert!(a.interval().contains_interval(&q.interval()));
    }
}
