//! Exact integrals and adaptive quadrature checked against an independent
//! composite Gauss-Legendre rule.

use bessel_harmonic::measure::power_log_integral;
use bessel_harmonic::quad::{integrate, QuadConfig};
use bessel_harmonic::{Against, Atom, BesselMeasure, FuncExpr, Interval};
use proptest::prelude::*;

/// Gauss-Legendre nodes and weights on [-1, 1], roots by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn composite_gl<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let rule = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for j in 0..panels {
        let (lo, hi) = (a + j as f64 * h, a + (j + 1) as f64 * h);
        let (c, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        s += rule.iter().map(|&(x, w)| w * f(c + r * x)).sum::<f64>() * r;
    }
    s
}

#[test]
fn gauss_legendre_rule_is_exact_for_polynomials() {
    let rule = gauss_legendre(10);
    let total: f64 = rule.iter().map(|&(_, w)| w).sum();
    assert!((total - 2.0).abs() < 1e-14);
    let m18: f64 = rule.iter().map(|&(x, w)| w * x.powi(18)).sum();
    assert!((m18 - 2.0 / 19.0).abs() < 1e-14);
}

#[test]
fn log_times_inverse_cube_against_mu() {
    let m = BesselMeasure::new(1.0).unwrap();
    let f = FuncExpr::atoms(vec![Atom { c: 1.0, alpha: -3.0, m: 1 }]);
    let b = Interval::new(2.0, 10.0).unwrap();
    let got = m.integrate(&f, b, Against::Dmu).unwrap();
    let oracle = composite_gl(|x| x.ln() / x, 2.0, 10.0, 200, 20);
    assert!((got - oracle).abs() <= 1e-10 * oracle.abs(), "{got} vs {oracle}");
}

#[test]
fn log_on_one_e_is_two() {
    let f = FuncExpr::log_power(1.0);
    let b = Interval::new(1.0, std::f64::consts::E).unwrap();
    let got = BesselMeasure::new(1.0).unwrap().integrate(&f, b, Against::Dx).unwrap();
    assert!((got - 2.0).abs() < 1e-14);
}

#[test]
fn measure_values() {
    let cases = [(0.0, 0.0, 1.0, 1.0), (1.0, 0.0, 1.0, 1.0 / 3.0), (0.5, 1.0, 2.0, 1.5)];
    for (lambda, a, b, want) in cases {
        let got = BesselMeasure::new(lambda).unwrap().mu(Interval::new(a, b).unwrap());
        assert!((got - want).abs() < 1e-15, "λ={lambda}: {got}");
    }
}

#[test]
fn adaptive_rule_matches_oracle_on_oscillatory_integrand() {
    let f = |x: f64| (10.0 * x).sin() * (-x).exp() + x.sqrt();
    let got = integrate(f, 0.5, 7.0, &QuadConfig::default()).unwrap().value;
    let oracle = composite_gl(f, 0.5, 7.0, 400, 20);
    assert!((got - oracle).abs() < 1e-10 * oracle.abs());
}

proptest! {
    #[test]
    fn power_log_integral_matches_oracle(beta in -2.5f64..3.0, m in 0u32..4, a in 0.05f64..5.0, len in 0.01f64..20.0) {
        let b = a + len;
        let got = power_log_integral(beta, m, a, b).unwrap();
        let oracle = composite_gl(|x| x.powf(beta) * x.ln().powi(m as i32), a, b, 200, 20);
        let scale = composite_gl(|x| (x.powf(beta) * x.ln().powi(m as i32)).abs(), a, b, 200, 20);
        prop_assert!((got - oracle).abs() <= 1e-10 * scale.max(1e-300), "{} vs {}", got, oracle);
    }

    #[test]
    fn mu_is_homogeneous_and_additive(lambda in 0.0f64..3.0, a in 0.0f64..10.0, l1 in 0.01f64..5.0, l2 in 0.01f64..5.0, s in 0.01f64..100.0) {
        let m = BesselMeasure::new(lambda).unwrap();
        let whole = m.mu(Interval::new(a, a + l1 + l2).unwrap());
        let left = m.mu(Interval::new(a, a + l1).unwrap());
        let right = m.mu(Interval::new(a + l1, a + l1 + l2).unwrap());
        prop_assert!((whole - left - right).abs() <= 1e-12 * whole);
        let scaled = m.mu(Interval::new(s * a, s * (a + l1)).unwrap());
        prop_assert!((scaled - s.powf(2.0 * lambda + 1.0) * left).abs() <= 1e-11 * scaled);
    }
}
