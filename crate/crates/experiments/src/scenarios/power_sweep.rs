//! Membership of `t^α` in `A_p(μ)` and `Ã_{p,λ}`: weight constants on
//! truncated families at depths `J` and `2J`, swept across both ranges.

use std::path::Path;

use anyhow::Result;
use bessel_harmonic::weights::{
    dual_weight, power_weight_range, tilde_ap_quantity, weight_constant, ClassTag, IntervalFamily, Weight,
};
use bessel_harmonic::Interval;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::table::Table;
use crate::verdict::{Check, Relation, Verdict};
use crate::ScenarioConfig;

pub const ANCHOR: &str =
    "t^α ∈ A_p(μ) iff −1−2λ < α < (p−1)(1+2λ); t^α ∈ Ã_{p,λ} iff −1 < α < p−1+(2λ+1)p";
const DUALITY: &str = "[σ_*]_{Ã_{p',λ−1/2}}(B) = [w]_{Ã_{p,λ−1/2}}(B)^{1/(p−1)}, σ_* = t^{2λp'} w^{1−p'}";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Interior,
    Boundary,
    Exterior,
}

impl Kind {
    fn label(self) -> &'static str {
        match self {
            Self::Interior => "interior",
            Self::Boundary => "boundary",
            Self::Exterior => "exterior",
        }
    }
}

struct Point {
    p: f64,
    lambda: f64,
    class: ClassTag,
    alpha: f64,
    kind: Kind,
}

struct Measured {
    shallow: f64,
    deep: f64,
    /// The untruncated family `(0, 2^{-j})` produced an infinite integral.
    divergent: bool,
}

impl Measured {
    fn ratio(&self) -> f64 {
        self.deep / self.shallow
    }
}

fn class_label(c: ClassTag) -> &'static str {
    match c {
        ClassTag::ApMu { .. } => "ApMu",
        ClassTag::TildeAp { .. } => "TildeAp",
        ClassTag::TildeA1 { .. } => "TildeA1",
    }
}

fn measure(w: &Weight, class: ClassTag, shallow: &IntervalFamily, deep: &IntervalFamily, open: &IntervalFamily) -> Result<Measured> {
    Ok(Measured {
        shallow: weight_constant(w, class, shallow)?.value,
        deep: weight_constant(w, class, deep)?.value,
        divergent: weight_constant(w, class, open)?.infinite,
    })
}

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<Verdict> {
    let depth = cfg.usize("depth")? as u32;
    let random_count = cfg.usize("random_count")?;
    let interior = cfg.f64_list("interior_fractions")?;
    let offset = cfg.f64("exterior_offset")?;
    let stable = cfg.tol("stable_ratio")?;
    let diverge = cfg.tol("diverge_ratio")?;

    let shallow = IntervalFamily::standard(depth, cfg.seed, random_count);
    let deep = IntervalFamily::standard(2 * depth, cfg.seed, random_count);
    let open = IntervalFamily::boundary_refining(depth, false);

    let mut points = Vec::new();
    for row in cfg.f64_rows("cases", 2)? {
        let (p, lambda) = (row[0], row[1]);
        for class in [ClassTag::ApMu { p, lambda }, ClassTag::TildeAp { p, class_lambda: lambda }] {
            let (lo, hi) = power_weight_range(class);
            let mut push = |alpha, kind| points.push(Point { p, lambda, class, alpha, kind });
            for &f in &interior {
                push(lo + f * (hi - lo), Kind::Interior);
            }
            push(lo, Kind::Boundary);
            push(hi, Kind::Boundary);
            push(lo - offset, Kind::Exterior);
            push(hi + offset, Kind::Exterior);
        }
    }
    let measured: Vec<Measured> = points
        .par_iter()
        .map(|pt| measure(&Weight::power(pt.alpha), pt.class, &shallow, &deep, &open))
        .collect::<Result<_>>()?;

    let mut v = Verdict::new("power-sweep");
    let mut table = Table::new(
        "power_sweep.csv",
        ANCHOR,
        &["p", "lambda", "class", "alpha", "kind", "w_depth_J", "w_depth_2J", "ratio", "open_family_divergent", "verdict"],
    );
    for (pt, m) in points.iter().zip(&measured) {
        let r = m.ratio();
        let name = format!("dichotomy p={} λ={} {} α={:.4} ({})", pt.p, pt.lambda, class_label(pt.class), pt.alpha, pt.kind.label());
        let check = match pt.kind {
            Kind::Interior => Check::new(name.clone(), ANCHOR, r, Relation::Below, stable),
            _ => Check::new(name.clone(), ANCHOR, r, Relation::Above, diverge),
        };
        let verdict = if r < stable { "stable" } else if r > diverge { "diverges" } else { "undecided" };
        table.row(vec![
            pt.p.into(),
            pt.lambda.into(),
            class_label(pt.class).into(),
            pt.alpha.into(),
            pt.kind.label().into(),
            m.shallow.into(),
            m.deep.into(),
            r.into(),
            m.divergent.into(),
            verdict.into(),
        ]);
        v.push(check);
        v.push(Check::flag(
            format!("divergence witness {}", &name["dichotomy ".len()..]),
            ANCHOR,
            m.divergent == (pt.kind != Kind::Interior),
        ));
    }

    // Non-containment of the two classes at (p, λ) = (2, 1).
    let membership = cfg.f64_list("membership_alphas")?;
    for &alpha in &membership {
        let w = Weight::power(alpha);
        for class in [ClassTag::ApMu { p: 2.0, lambda: 1.0 }, ClassTag::TildeAp { p: 2.0, class_lambda: 1.0 }] {
            let (lo, hi) = power_weight_range(class);
            let inside = lo < alpha && alpha < hi;
            let m = measure(&w, class, &shallow, &deep, &open)?;
            let name = format!("membership p=2 λ=1 {} α={alpha} ({})", class_label(class), if inside { "in" } else { "out" });
            v.push(if inside {
                Check::new(name, ANCHOR, m.ratio(), Relation::Below, stable)
            } else {
                Check::new(name, ANCHOR, m.ratio(), Relation::Above, diverge)
            });
        }
    }

    duality(cfg, out, &mut v)?;
    v.artifacts.push(table.write(out)?);
    Ok(v)
}

fn duality(cfg: &ScenarioConfig, out: &Path, v: &mut Verdict) -> Result<()> {
    let n = cfg.usize("duality_pairs")?;
    let tol = cfg.tol("duality_rel")?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xd0a1);
    let mut table = Table::new(
        "duality.csv",
        DUALITY,
        &["lambda", "p", "alpha", "a", "b", "dual_quantity", "primal_power", "rel_err"],
    );
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let lambda = rng.gen_range(0.1..2.0);
        let p = rng.gen_range(1.2..4.0);
        let kappa = lambda - 0.5;
        let (lo, hi) = power_weight_range(ClassTag::TildeAp { p, class_lambda: kappa });
        let alpha = lo + rng.gen_range(0.02..0.98) * (hi - lo);
        let a = if rng.gen_bool(0.2) { 0.0 } else { 10f64.powf(rng.gen_range(-3.0..2.0)) };
        let b = a + 10f64.powf(rng.gen_range(-3.0..2.0));
        let iv = Interval::new(a, b)?;
        let w = Weight::power(alpha);
        let pp = p / (p - 1.0);
        let lhs = tilde_ap_quantity(&dual_weight(&w, p, lambda)?.sigma_star, pp, kappa, iv)?;
        let rhs = tilde_ap_quantity(&w, p, kappa, iv)?.powf(1.0 / (p - 1.0));
        let rel = (lhs - rhs).abs() / rhs;
        worst = worst.max(rel);
        table.row(vec![lambda.into(), p.into(), alpha.into(), a.into(), b.into(), lhs.into(), rhs.into(), rel.into()]);
    }
    v.push(Check::new(format!("duality max relative error over {n} pairs"), DUALITY, worst, Relation::AtMost, tol));
    v.artifacts.push(table.write(out)?);
    Ok(())
}
