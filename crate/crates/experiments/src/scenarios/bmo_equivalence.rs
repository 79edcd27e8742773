//! Equivalence of the BMO flavours: per-interval one-sided inequalities on a
//! seeded battery, and the spread of the six norms on a fixed test set.

use std::path::Path;

use anyhow::Result;
use bessel_harmonic::bmo::{
    bmo_median_norm, bmo_triangle_norm, local_mean_oscillation, median_oscillation, median_stability_check,
    triangle_oscillation, weighted_bmo_norm, weighted_oscillation,
};
use bessel_harmonic::weights::{tilde_ap_quantity, IntervalFamily, Weight};
use bessel_harmonic::{BesselMeasure, FuncExpr, Interval};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::table::Table;
use crate::verdict::{Check, Relation, Verdict};
use crate::ScenarioConfig;

pub const ANCHOR: &str = "BMO_{0,s}(w) ≃ BMO_{L^p(w)} ≃ BMO_{Δλ} for w ∈ Ã_{∞,λ−1/2}";
const CHEBYSHEV: &str = "s^{1/p} · inf_c inf{t : w({|b−c|>t}∩B) ≤ s w(B)} ≤ ((1/w(B)) ∫_B |b − b_B|^p w)^{1/p}";
const LOCAL: &str = "ǎ_θ(b;B) ≤ a_θ(b;B) ≤ 2 ǎ_θ(b;B)";
const STABILITY: &str = "|α_b(B_ε) − α_b(B)| ≤ a_θ(b;B) for w(B_ε) = (1+ε) w(B), |ε| < 1 − 2θ";
const EMBED: &str = "(1/μ(B)) ∫_B |b − b_B| dμ ≤ [w]_{Ã_{p,λ−1/2}}(B)^{1/p} ((1/w(B)) ∫_B |b − b_B|^p w)^{1/p}";

#[derive(Debug, Clone, Copy)]
enum Shape {
    Log,
    Sawtooth,
    TwoStep,
}

impl Shape {
    fn label(self) -> &'static str {
        match self {
            Self::Log => "log",
            Self::Sawtooth => "sawtooth",
            Self::TwoStep => "two-step",
        }
    }
}

struct Case {
    shape: Shape,
    lambda: f64,
    alpha: f64,
    p: f64,
    s: f64,
    frac: f64,
    eps: f64,
    b: FuncExpr,
    iv: Interval,
}

fn case(seed: u64, i: usize) -> Result<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    let lambda = [0.5, 1.0, 2.0][rng.gen_range(0..3)];
    let alpha = rng.gen_range(-0.9..2.0 * lambda);
    let p = [1.0, 2.0, 3.0][rng.gen_range(0..3)];
    let s = [0.5, 0.25, 0.125][rng.gen_range(0..3)];
    let frac = [0.125, 0.25, 0.375][rng.gen_range(0..3)];
    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
    let eps = sign * rng.gen_range(0.0..1.0) * (1.0 - 2.0 * frac);
    let shape = [Shape::Log, Shape::Sawtooth, Shape::TwoStep][i % 3];
    let (b, iv) = match shape {
        Shape::Log => {
            let a = if rng.gen_bool(0.2) { 0.0 } else { 10f64.powf(rng.gen_range(-3.0..1.0)) };
            (FuncExpr::log_power(lambda), Interval::new(a, a + 10f64.powf(rng.gen_range(-2.0..1.0)))?)
        }
        Shape::Sawtooth => {
            let n = rng.gen_range(2..9);
            let start = rng.gen_range(0.0..1.0);
            let h = rng.gen_range(0.5..3.0);
            let breaks = (0..=n).map(|k| start + 0.5 * k as f64).collect();
            let values = (0..n).map(|k| if k % 2 == 0 { 0.0 } else { h }).collect();
            let a = rng.gen_range(0.0..2.0);
            (FuncExpr::piecewise(breaks, values)?, Interval::new(a, a + rng.gen_range(0.5..4.0))?)
        }
        Shape::TwoStep => {
            let x0 = rng.gen_range(0.0..1.0);
            let x1 = x0 + rng.gen_range(0.1..2.0);
            let x2 = x1 + rng.gen_range(0.1..2.0);
            let values = vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            let a = rng.gen_range(0.0..2.0);
            (FuncExpr::piecewise(vec![x0, x1, x2], values)?, Interval::new(a, a + rng.gen_range(0.5..4.0))?)
        }
    };
    Ok(Case { shape, lambda, alpha, p, s, frac, eps, b, iv })
}

/// `(lhs, rhs)` for each inequality; `None` for the embedding at `p = 1`.
struct Sides {
    chebyshev: (f64, f64),
    local_low: (f64, f64),
    local_high: (f64, f64),
    stability: (f64, f64),
    embed: Option<(f64, f64)>,
}

fn evaluate(c: &Case) -> Result<Sides> {
    let w = Weight::power(c.alpha);
    let m = BesselMeasure::new(c.lambda)?;
    let osc = weighted_oscillation(&c.b, &w, c.p, &m, c.iv)?;
    let (med, _) = median_oscillation(&c.b, &w, c.s, c.iv)?;
    let (a_check, a) = local_mean_oscillation(&c.b, c.iv, c.frac, &w)?;
    let stability = median_stability_check(&c.b, c.iv, c.eps, c.frac, &w)?;
    let embed = if c.p > 1.0 {
        let q = tilde_ap_quantity(&w, c.p, c.lambda - 0.5, c.iv)?;
        Some((triangle_oscillation(&c.b, c.iv, &m)?, q.powf(1.0 / c.p) * osc))
    } else {
        None
    };
    Ok(Sides {
        chebyshev: (c.s.powf(1.0 / c.p) * med, osc),
        local_low: (a_check, a),
        local_high: (a, 2.0 * a_check),
        stability,
        embed,
    })
}

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<Verdict> {
    let mut v = Verdict::new("bmo-equivalence");
    battery(cfg, out, &mut v)?;
    flavours(cfg, out, &mut v)?;
    Ok(v)
}

fn battery(cfg: &ScenarioConfig, out: &Path, v: &mut Verdict) -> Result<()> {
    let n = cfg.usize("cases")?;
    let rel = cfg.tol("rel_slack")?;
    let abs = cfg.tol("abs_slack")?;
    let cases: Vec<Case> = (0..n).map(|i| case(cfg.seed, i)).collect::<Result<_>>()?;
    let sides: Vec<Sides> = cases.par_iter().map(evaluate).collect::<Result<_>>()?;

    let mut table = Table::new(
        "battery.csv",
        ANCHOR,
        &[
            "case", "shape", "lambda", "alpha", "p", "s", "frac", "eps", "a", "b",
            "chebyshev_lhs", "chebyshev_rhs", "a_check", "a", "stability_lhs", "embed_lhs", "embed_rhs",
        ],
    );
    // A violation is lhs > rhs(1 + rel) + abs.
    let excess = |(l, r): (f64, f64)| l - r * (1.0 + rel) - abs;
    let mut worst = [f64::NEG_INFINITY; 5];
    let mut failures = [0usize; 5];
    for (i, (c, s)) in cases.iter().zip(&sides).enumerate() {
        let pairs = [Some(s.chebyshev), Some(s.local_low), Some(s.local_high), Some(s.stability), s.embed];
        for (k, pair) in pairs.iter().enumerate() {
            if let Some(pair) = pair {
                worst[k] = worst[k].max(pair.0 - pair.1);
                failures[k] += (excess(*pair) > 0.0) as usize;
            }
        }
        let (el, er) = s.embed.unwrap_or((f64::NAN, f64::NAN));
        table.row(vec![
            i.into(),
            c.shape.label().into(),
            c.lambda.into(),
            c.alpha.into(),
            c.p.into(),
            c.s.into(),
            c.frac.into(),
            c.eps.into(),
            c.iv.a.into(),
            c.iv.b.into(),
            s.chebyshev.0.into(),
            s.chebyshev.1.into(),
            s.local_low.0.into(),
            s.local_low.1.into(),
            s.stability.0.into(),
            el.into(),
            er.into(),
        ]);
    }
    let names = [
        ("median oscillation vs L^p(w) oscillation", CHEBYSHEV),
        ("ǎ ≤ a", LOCAL),
        ("a ≤ 2ǎ", LOCAL),
        ("median stability", STABILITY),
        ("triangle vs L^p(w) oscillation with weight factor", EMBED),
    ];
    for (k, (name, anchor)) in names.iter().enumerate() {
        v.push(Check::new(format!("battery {name}: violations in {n} cases"), anchor, failures[k] as f64, Relation::Exactly, 0.0));
        v.notes.push(format!("battery {name}: largest lhs − rhs = {:.3e}", worst[k]));
    }
    v.artifacts.push(table.write(out)?);
    Ok(())
}

fn flavours(cfg: &ScenarioConfig, out: &Path, v: &mut Verdict) -> Result<()> {
    let lambda = cfg.f64("lambda")?;
    let m = BesselMeasure::new(lambda)?;
    let lebesgue = BesselMeasure::new(0.0)?;
    let depth = cfg.usize("family_depth")? as u32;
    let family = IntervalFamily::standard(depth, cfg.seed, cfg.usize("random_count")?)
        .extended(&IntervalFamily::boundary_refining(depth, false));
    let band = cfg.tol("flavour_band")?;
    let functions = [
        ("log", FuncExpr::log_power(lambda)),
        ("sawtooth", FuncExpr::piecewise(vec![0.0, 1.0, 2.0, 3.0, 4.0], vec![0.0, 1.0, 0.0, 1.0])?),
        ("two-step", FuncExpr::piecewise(vec![1.0, 2.0, 3.0], vec![1.0, -1.0])?),
    ];
    let labels = ["triangle", "lebesgue", "weighted_p1", "weighted_p2", "median_s1/4", "median_s1/8"];
    let mut norms_table = Table::new(
        "flavours.csv",
        ANCHOR,
        &["function", "weight_alpha", "triangle", "lebesgue", "weighted_p1", "weighted_p2", "median_s1/4", "median_s1/8"],
    );
    let mut ratio_table = Table::new("flavour_ratios.csv", ANCHOR, &["function", "weight_alpha", "row", "column", "ratio"]);
    let alphas = cfg.f64_list("weight_alphas")?;
    let jobs: Vec<(&str, &FuncExpr, f64)> =
        functions.iter().flat_map(|(name, b)| alphas.iter().map(move |&a| (*name, b, a))).collect();
    let all: Vec<[f64; 6]> = jobs
        .par_iter()
        .map(|&(_, b, alpha)| {
            let w = Weight::power(alpha);
            Ok([
                bmo_triangle_norm(b, &m, &family)?.norm,
                bmo_triangle_norm(b, &lebesgue, &family)?.norm,
                weighted_bmo_norm(b, &w, 1.0, &m, &family)?.norm,
                weighted_bmo_norm(b, &w, 2.0, &m, &family)?.norm,
                bmo_median_norm(b, &w, 0.25, &family)?.norm,
                bmo_median_norm(b, &w, 0.125, &family)?.norm,
            ])
        })
        .collect::<Result<_>>()?;
    for (&(name, _, alpha), norms) in jobs.iter().zip(&all) {
        let mut row = vec![name.into(), alpha.into()];
        row.extend(norms.iter().map(|&x| x.into()));
        norms_table.row(row);
        for (i, a) in norms.iter().enumerate() {
            for (j, b) in norms.iter().enumerate() {
                ratio_table.row(vec![name.into(), alpha.into(), labels[i].into(), labels[j].into(), (a / b).into()]);
            }
        }
        let hi = norms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = norms.iter().copied().fold(f64::INFINITY, f64::min);
        v.push(Check::new(
            format!("six flavours {name} w=t^{alpha}: max/min"),
            ANCHOR,
            hi / lo,
            Relation::Band { lo: 1.0 },
            band,
        ));
    }
    v.artifacts.push(norms_table.write(out)?);
    v.artifacts.push(ratio_table.write(out)?);
    Ok(())
}
