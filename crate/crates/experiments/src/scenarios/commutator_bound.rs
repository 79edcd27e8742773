//! Growth of the sparse commutator norms against `[w]_{Ã_{p,λ−1/2}}` with
//! `b = log x^{2λ}`, for `A_{S,b}` and its adjoint.

use std::path::Path;

use anyhow::Result;
use bessel_harmonic::operators::{operator_norm_fixed_point, CommutatorVariant, Operator};
use bessel_harmonic::weights::Weight;
use bessel_harmonic::FuncExpr;

use super::sweep::{budget, judge, rows, Setup, COLUMNS};
use crate::table::Table;
use crate::verdict::{Check, Relation, Verdict};
use crate::ScenarioConfig;

pub const ANCHOR: &str = "‖A_{S,b}‖, ‖A*_{S,b}‖ ≲ ‖b‖_{BMO} [w]_{Ã_{p,λ−1/2}}^{2 max(1, 1/(p−1))}";

fn label(v: CommutatorVariant) -> &'static str {
    match v {
        CommutatorVariant::Left => "left",
        CommutatorVariant::Adjoint => "adjoint",
    }
}

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<Verdict> {
    let setup = Setup::from_config(cfg)?;
    let slack = cfg.tol("slope_slack")?;
    let scale_tol = cfg.tol("b_scaling_rel")?;
    let b = FuncExpr::log_power(setup.lambda);
    let b2 = b.scaled(2.0);
    let constant = FuncExpr::constant(cfg.f64("constant_b")?);
    let mut v = Verdict::new("commutator-bound");
    let mut table = Table::new("commutator_bound.csv", ANCHOR, COLUMNS);

    for p in cfg.f64_list("ps")? {
        let e = 2.0 * budget(p);
        for variant in [CommutatorVariant::Left, CommutatorVariant::Adjoint] {
            let op = Operator::Commutator { family: &setup.family, b: &b, variant };
            let points = setup.measure(p, &op)?;
            let name = format!("commutator {} p={p}", label(variant));
            judge(&mut v, ANCHOR, &name, &points, e, slack);
            rows(&mut table, p, label(variant), &points, e);
            let ratios: Vec<f64> = points.iter().map(|s| s.norm / s.constant.powf(e)).collect();
            let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0f64), |(l, h), &r| (l.min(r), h.max(r)));
            v.notes.push(format!("{name}: norm/[w]^{e} ranges over [{lo:.4e}, {hi:.4e}], spread ×{:.3}", hi / lo));

            // Homogeneity in b on the witness found at the first sweep point.
            let w = Weight::power(points[0].alpha);
            let est = operator_norm_fixed_point(&op, p, &w, &setup.m, setup.refine, setup.max_iter)?;
            let doubled = est.recompute(&Operator::Commutator { family: &setup.family, b: &b2, variant }, &setup.m)?;
            v.push(Check::new(
                format!("{name} b→2b doubles the norm (relative error)"),
                ANCHOR,
                (doubled - 2.0 * est.value).abs() / (2.0 * est.value),
                Relation::AtMost,
                scale_tol,
            ));
            let zero = est.recompute(&Operator::Commutator { family: &setup.family, b: &constant, variant }, &setup.m)?;
            v.push(Check::new(format!("{name} constant b gives norm"), ANCHOR, zero, Relation::Exactly, 0.0));
        }
    }
    v.artifacts.push(table.write(out)?);
    Ok(v)
}
