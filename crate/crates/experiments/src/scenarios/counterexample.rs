//! `b₀ = log x^{2λ}` is in BMO yet `[b₀, R_λ]` is not of weak type (1,1):
//! the mass product `t · μ({|[b₀,R_λ]f| > t})` keeps growing as `t → 0`,
//! while a bounded `b` gives a bounded product.

use std::path::Path;

use anyhow::Result;
use bessel_harmonic::bmo::{bmo_triangle_norm, log_oscillation_closed_form};
use bessel_harmonic::riesz::{
    counterexample_g, counterexample_profile, counterexample_start, sampled_mass_product, RieszKernelEvaluator,
};
use bessel_harmonic::quad::QuadConfig;
use bessel_harmonic::weights::IntervalFamily;
use bessel_harmonic::{Against, BesselMeasure, FuncExpr, Interval};
use rayon::prelude::*;

use super::geometric;
use crate::table::Table;
use crate::verdict::{Check, Relation, Verdict};
use crate::ScenarioConfig;

pub const ANCHOR: &str = "log x^{2λ} ∈ BMO_{Δλ} but t·μ({|[log x^{2λ}, R_λ]f| > t}) is unbounded as t → 0";
const CLOSED_FORM: &str = "∫_a^b |log x^{2λ} − log b^{2λ}| x^{2λ} dx / (b^{2λ+1} − a^{2λ+1}) = 2λ log(a/b) a^{2λ+1}/((2λ+1)(b^{2λ+1} − a^{2λ+1})) + 2λ/(2λ+1)²";

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<Verdict> {
    let mut v = Verdict::new("counterexample");
    let eps = cfg.f64("eps")?;
    let growth = cfg.tol("growth_per_decade")?;
    let (t_hi, t_lo) = (cfg.f64("t_max")?, cfg.f64("t_min")?);
    let decades = (t_hi / t_lo).log10().round() as usize;
    let ts: Vec<f64> = (0..=decades).map(|i| t_hi * 10f64.powi(-(i as i32))).collect();
    let mut profile_table = Table::new("profile.csv", ANCHOR, &["lambda", "t", "mass_product", "ratio_to_previous"]);
    let mut sampled_table = Table::new("sampled.csv", ANCHOR, &["lambda", "t", "log_b", "bounded_b"]);

    for lambda in cfg.f64_list("lambdas")? {
        let prof = counterexample_profile(lambda, eps, &ts)?;
        let mut worst = f64::INFINITY;
        let mut grown = 0usize;
        for (i, &(t, mp)) in prof.iter().enumerate() {
            let ratio = if i == 0 { f64::NAN } else { mp / prof[i - 1].1 };
            profile_table.row(vec![lambda.into(), t.into(), mp.into(), ratio.into()]);
            if i > 0 && !ratio.is_nan() {
                worst = worst.min(ratio);
                grown += (ratio >= growth) as usize;
            }
        }
        v.push(Check::new(
            format!("λ={lambda} smallest per-decade growth of t·μ"),
            ANCHOR,
            worst,
            Relation::AtLeast,
            growth,
        ));
        v.notes.push(format!("λ={lambda}: {grown} of {decades} decades grow by ×{growth} or more"));

        // t·μ = ε^{2λ}(log s − log ε)/(2λ+1) − t x₀^{2λ+1}/(2λ+1) with s = g^{-1}(t):
        // each decade adds about ε^{2λ} ln 10/(2λ+1)², so the product diverges.
        let beta = 2.0 * lambda + 1.0;
        let step = eps.powf(2.0 * lambda) * std::f64::consts::LN_10 / (beta * beta);
        let last = (prof[decades].1 - prof[decades - 1].1) / step;
        v.push(Check::new(
            format!("λ={lambda} last-decade increment over ε^{{2λ}} ln10/(2λ+1)²"),
            ANCHOR,
            last,
            Relation::Band { lo: 1.0 - cfg.tol("increment_rel")? },
            1.0 + cfg.tol("increment_rel")?,
        ));

        bmo_finite(cfg, lambda, &mut v)?;
        pipeline(cfg, lambda, &ts, &mut v, &mut sampled_table)?;
    }
    v.artifacts.push(profile_table.write(out)?);
    v.artifacts.push(sampled_table.write(out)?);
    Ok(v)
}

fn bmo_finite(cfg: &ScenarioConfig, lambda: f64, v: &mut Verdict) -> Result<()> {
    let m = BesselMeasure::new(lambda)?;
    let b = FuncExpr::log_power(lambda);
    let depth = cfg.usize("family_depth")? as u32;
    let family = IntervalFamily::standard(depth, cfg.seed, cfg.usize("random_count")?)
        .extended(&IntervalFamily::boundary_refining(depth, false));
    let norm = bmo_triangle_norm(&b, &m, &family)?.norm;
    v.push(Check::flag(format!("λ={lambda} BMO norm of log x^{{2λ}} finite ({norm:.6})"), ANCHOR, norm.is_finite()));
    let beta = 2.0 * lambda + 1.0;
    let mut worst: f64 = 0.0;
    let cfg_q = QuadConfig::with_rel_tol(1e-14);
    for &iv in &family.intervals {
        // |log x^{2λ} − log b^{2λ}| = −2λ ln(1 + (x − b)/b) on (a, b).
        let dev = |x: f64| -2.0 * lambda * ((x - iv.b) / iv.b).ln_1p();
        let integral = m.integrate_fn(dev, iv, Against::Dmu, &[], &cfg_q)?;
        let got = integral / (iv.b.powf(beta) - iv.a.powf(beta));
        let want = log_oscillation_closed_form(lambda, iv.a, iv.b);
        worst = worst.max((got - want).abs() / want.abs());
    }
    v.push(Check::new(
        format!("λ={lambda} per-interval integral vs closed form, {} intervals", family.len()),
        CLOSED_FORM,
        worst,
        Relation::AtMost,
        cfg.tol("closed_form_rel")?,
    ));
    Ok(())
}

/// The commutator itself on `f = χ_{(ε,2ε)}/μ((ε,2ε))`, against `g` and
/// against a bounded `b`.
fn pipeline(cfg: &ScenarioConfig, lambda: f64, ts: &[f64], v: &mut Verdict, table: &mut Table) -> Result<()> {
    let eps = cfg.f64("pipeline_eps")?;
    let k = RieszKernelEvaluator::new(lambda)?;
    let m = k.measure();
    let support = Interval::new(eps, 2.0 * eps)?;
    let f = FuncExpr::indicator(support).scaled(1.0 / m.mu(support));
    let log_b = FuncExpr::log_power(lambda);
    let bounded = FuncExpr::indicator(Interval::new(0.0, 1.0)?);

    let probe = cfg.f64_list("profile_window")?;
    let xs = geometric(probe[0], probe[1], 11);
    let ratios: Vec<f64> =
        xs.iter().map(|&x| Ok(k.commutator_apply(&log_b, &f, x)? / counterexample_g(lambda, eps, x))).collect::<Result<_>>()?;
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &r| (l.min(r), h.max(r)));
    v.notes.push(format!("λ={lambda}: [b,R]f / g ranges over [{lo:.6}, {hi:.6}] on the window"));
    v.push(Check::new(
        format!("λ={lambda} [b,R]f / g spread on [{}, {}]", probe[0], probe[1]),
        ANCHOR,
        if lo.signum() == hi.signum() { hi.abs().max(lo.abs()) / hi.abs().min(lo.abs()) } else { f64::INFINITY },
        Relation::AtMost,
        cfg.tol("profile_spread")?,
    ));

    let grid = geometric(counterexample_start(lambda), cfg.f64("grid_max")?, cfg.usize("grid_points")?);
    let sample = |b: &FuncExpr| -> Result<Vec<f64>> {
        Ok(grid.par_iter().map(|&x| k.commutator_apply(b, &f, x)).collect::<bessel_harmonic::Result<_>>()?)
    };
    let (log_vals, bounded_vals) = (sample(&log_b)?, sample(&bounded)?);
    let with_log = sampled_mass_product(&grid, &log_vals, ts, &m)?;
    let with_bounded = sampled_mass_product(&grid, &bounded_vals, ts, &m)?;
    for (a, b) in with_log.iter().zip(&with_bounded) {
        table.row(vec![lambda.into(), a.0.into(), a.1.into(), b.1.into()]);
    }
    let n = ts.len();
    let rel = |p: &[(f64, f64)]| (p[n - 1].1 - p[n - 2].1) / p[n - 1].1;
    let edge = cfg.f64("grid_max")?;
    let inside = |vals: &[f64]| vals.last().is_some_and(|v| v.abs() < ts[n - 1]);
    v.push(Check::new(
        format!("λ={lambda} bounded b: |last-decade relative change of t·μ|"),
        ANCHOR,
        rel(&with_bounded).abs(),
        Relation::AtMost,
        cfg.tol("bounded_saturation")?,
    ));
    v.push(Check::flag(
        format!("λ={lambda} exceedance sets end before the grid edge {edge:e}"),
        ANCHOR,
        inside(&log_vals) && inside(&bounded_vals),
    ));
    v.notes.push(format!("λ={lambda}: log b last-decade relative growth {:.4}", rel(&with_log)));
    Ok(())
}
