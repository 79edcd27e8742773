use bessel_harmonic::orlicz::{
    c_phi, complementary, complementary_inverse, holder_orlicz_check, holder_orlicz_check_scaled, k_phi, luxemburg_norm,
    orlicz_maximal, YoungFunction,
};
use bessel_harmonic::weights::IntervalFamily;
use bessel_harmonic::{BesselMeasure, Error, FuncExpr, Interval};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LLOGL: YoungFunction = YoungFunction::LLogL { eps: 1.0 };

fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b).unwrap()
}

fn random_piecewise(rng: &mut ChaCha8Rng, n: usize) -> FuncExpr {
    let breaks: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let values = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
    FuncExpr::piecewise(breaks, values).unwrap()
}

/// Root of `g` on `[lo, hi]` by the Illinois variant of regula falsi.
fn illinois<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> f64 {
    let (mut glo, mut ghi) = (g(lo), g(hi));
    let mut side = 0;
    for _ in 0..200 {
        let x = (lo * ghi - hi * glo) / (ghi - glo);
        let gx = g(x);
        if gx == 0.0 || (hi - lo).abs() < 1e-15 * x.abs() {
            return x;
        }
        if gx.signum() == ghi.signum() {
            hi = x;
            ghi = gx;
            if side == 1 {
                glo *= 0.5;
            }
            side = 1;
        } else {
            lo = x;
            glo = gx;
            if side == -1 {
                ghi *= 0.5;
            }
            side = -1;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn half_indicator_llogl_norm_matches_independent_root() {
    let f = FuncExpr::indicator(iv(0.0, 0.5));
    let got = luxemburg_norm(&f, &LLOGL, iv(0.0, 1.0), &BesselMeasure::new(0.0).unwrap()).unwrap();
    let oracle = illinois(|s| 0.5 / s * (std::f64::consts::E + 1.0 / s).ln() - 1.0, 0.1, 10.0);
    assert!((got - oracle).abs() < 1e-9 * oracle, "{got} vs {oracle}");
}

#[test]
fn power_pairs_are_self_conjugate() {
    for p in [1.5, 2.0, 3.0] {
        let pp = p / (p - 1.0);
        for s in [0.1, 1.0, 7.0] {
            let got = complementary(&YoungFunction::Power { p }).unwrap().eval(s);
            let want = s.powf(pp) / pp;
            assert!((got - want).abs() < 1e-9 * want, "p={p} s={s}: {got} vs {want}");
        }
    }
}

#[test]
fn inverse_product_sandwich() {
    for phi in [LLOGL, YoungFunction::LLogL { eps: 0.5 }, YoungFunction::Power { p: 3.0 }, YoungFunction::ExpM1] {
        for i in 0..=60 {
            let t = 10f64.powf(i as f64 * 0.1);
            let r = complementary_inverse(&phi, t).unwrap() * phi.inverse(t).unwrap() / t;
            assert!((1.0 - 1e-9..=2.0 + 1e-9).contains(&r), "{phi} at t={t}: {r}");
        }
    }
}

#[test]
fn holder_with_power_pair() {
    // t²/2 has inverse √(2t), so A^{-1}B^{-1} = 2 C^{-1} and κ = 2.
    let m = BesselMeasure::new(0.0).unwrap();
    let pw = YoungFunction::Power { p: 2.0 };
    let one = FuncExpr::constant(1.0);
    let err = holder_orlicz_check(&one, &one, &pw, &pw, &YoungFunction::Id, iv(0.0, 1.0), &m).unwrap_err();
    assert!(matches!(err, Error::Precondition { .. }));
    let r = holder_orlicz_check_scaled(&one, &one, &pw, &pw, &YoungFunction::Id, iv(0.0, 1.0), &m).unwrap();
    assert!((r.kappa - 2.0).abs() < 1e-9);
    assert!((r.lhs - 1.0).abs() < 1e-12 && r.lhs <= r.rhs);
    let h = FuncExpr::indicator(iv(0.0, 0.5));
    let r = holder_orlicz_check_scaled(&h, &h, &pw, &pw, &YoungFunction::Id, iv(0.0, 1.0), &m).unwrap();
    assert!((r.lhs - 0.5).abs() < 1e-9 && r.lhs <= r.rhs);
}

#[test]
fn exponential_llogl_pair_needs_a_constant() {
    let m = BesselMeasure::new(1.0).unwrap();
    let one = FuncExpr::constant(1.0);
    let err = holder_orlicz_check(&one, &one, &YoungFunction::ExpM1, &LLOGL, &YoungFunction::Id, iv(0.0, 1.0), &m).unwrap_err();
    assert!(matches!(err, Error::Precondition { .. }));
}

#[test]
fn exponential_llogl_holder_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let m = BesselMeasure::new(1.0).unwrap();
    for case in 0..500 {
        let f = random_piecewise(&mut rng, 8);
        let g = random_piecewise(&mut rng, 8);
        let a = rng.gen_range(0.0..0.5);
        let q = iv(a, rng.gen_range(a + 0.05..1.0));
        let r = holder_orlicz_check_scaled(&f, &g, &YoungFunction::ExpM1, &LLOGL, &YoungFunction::Id, q, &m).unwrap();
        assert!(r.lhs <= r.rhs * (1.0 + 1e-9), "case {case}: {} > {}", r.lhs, r.rhs);
        assert!((r.kappa - 1.3367).abs() < 1e-3);
    }
}

#[test]
fn c_phi_finiteness() {
    assert!(c_phi(&YoungFunction::LLogL { eps: 0.5 }).unwrap().is_finite());
    assert!(!c_phi(&YoungFunction::Id).unwrap().is_finite());
}

#[test]
fn c_phi_of_square_matches_oracle() {
    let got = c_phi(&YoungFunction::Power { p: 2.0 }).unwrap().value;
    // t = e^u: √(2t)/(t² ln(e+t)) dt = √2 e^{-u/2} / ln(e + e^u) du
    let n = 40_000;
    let h = 200.0 / n as f64;
    let f = |u: f64| 2f64.sqrt() * (-0.5 * u).exp() / (std::f64::consts::E + u.exp()).ln();
    let simpson: f64 = (0..n)
        .map(|i| {
            let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
            h / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        })
        .sum();
    assert!((got - simpson).abs() < 1e-6 * simpson, "{got} vs {simpson}");
}

#[test]
fn k_phi_base_ordering() {
    let k32 = k_phi(&LLOGL, 32.0, 20).unwrap();
    let k8 = k_phi(&LLOGL, 8.0, 20).unwrap();
    assert!(k32.value.is_finite() && k8.value.is_finite());
    assert!(k8.value >= k32.value);
    assert!(k_phi(&YoungFunction::Id, 32.0, 20).unwrap().unbounded);
}

#[test]
fn orlicz_maximal_of_constant() {
    let family = IntervalFamily::standard(6, 1, 30);
    let m = BesselMeasure::new(1.0).unwrap();
    for x in [0.02, 0.7, 5.0] {
        let v = orlicz_maximal(&FuncExpr::constant(3.0), &LLOGL, x, &family, &m).unwrap();
        assert!((v - 3.0 / LLOGL.inverse(1.0).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn orlicz_maximal_of_a1_weight_ratio_is_controlled() {
    // h = w/x^{2λ} with w = t^α in the Ã_1 class; M h(x) / h(x) stays bounded.
    let lambda = 1.0;
    let m = BesselMeasure::new(lambda).unwrap();
    let family = IntervalFamily::standard(8, 2, 60);
    for alpha in [0.0, 1.0, 2.0] {
        let h = FuncExpr::power(1.0, alpha - 2.0 * lambda);
        let mut worst: f64 = 0.0;
        for x in [0.05, 0.3, 1.0, 3.0, 20.0] {
            let v = orlicz_maximal(&h, &YoungFunction::Id, x, &family, &m).unwrap();
            worst = worst.max(v / h.eval(x));
        }
        assert!(worst.is_finite() && worst < 50.0, "α={alpha}: {worst}");
    }
}

proptest! {
    #[test]
    fn luxemburg_norm_is_homogeneous(c in 0.01f64..100.0, seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_piecewise(&mut rng, 6);
        let m = BesselMeasure::new(0.5).unwrap();
        let b = iv(0.0, 1.0);
        for phi in [LLOGL, YoungFunction::Power { p: 2.0 }, YoungFunction::ExpM1] {
            let n1 = luxemburg_norm(&f, &phi, b, &m).unwrap();
            let nc = luxemburg_norm(&f.scaled(c), &phi, b, &m).unwrap();
            prop_assert!((nc - c * n1).abs() <= 1e-9 * nc);
        }
    }

    #[test]
    fn luxemburg_norm_is_subadditive(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let breaks: Vec<f64> = (0..=6).map(|i| i as f64 / 6.0).collect();
        let v1: Vec<f64> = (0..6).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let v2: Vec<f64> = (0..6).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let sum: Vec<f64> = v1.iter().zip(&v2).map(|(a, b)| a + b).collect();
        let f = FuncExpr::piecewise(breaks.clone(), v1).unwrap();
        let g = FuncExpr::piecewise(breaks.clone(), v2).unwrap();
        let fg = FuncExpr::piecewise(breaks, sum).unwrap();
        let m = BesselMeasure::new(1.0).unwrap();
        let b = iv(0.0, 1.0);
        let lhs = luxemburg_norm(&fg, &LLOGL, b, &m).unwrap();
        let rhs = luxemburg_norm(&f, &LLOGL, b, &m).unwrap() + luxemburg_norm(&g, &LLOGL, b, &m).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-9));
    }
}
