//! Growth of the sparse operator norm against `[w]_{Ã_{p,λ−1/2}}` as `t^α`
//! approaches the class boundary, and the level-set estimate on sparse
//! families with separated generations.

use std::path::Path;

use anyhow::Result;
use bessel_harmonic::dyadic::{canonical_major_subsets, level_set_estimate, random_gapped, DyadicCube};
use bessel_harmonic::operators::{operator_norm_fixed_point, Operator};
use bessel_harmonic::orlicz::YoungFunction;
use bessel_harmonic::weights::Weight;
use bessel_harmonic::{BesselMeasure, FuncExpr, Interval, IntervalSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sweep::{budget, judge, rows, Setup, COLUMNS};
use crate::table::Table;
use crate::verdict::{Check, Relation, Verdict};
use crate::ScenarioConfig;

pub const ANCHOR: &str = "‖A_S‖_{L^p(w)→L^p(w)} ≲ [w]_{Ã_{p,λ−1/2}}^{max(1, 1/(p−1))}";
const LEVEL_SET: &str =
    "Σ_{Q∈S_k} w(E∩Q) ≤ 2^k w(E) + 4γ_ψ/φ̄^{-1}((2γ_ψ)^{2^k}) ∫ ψ(4^k|f|) M_φ(w/μ) dμ";

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<Verdict> {
    let setup = Setup::from_config(cfg)?;
    let slack = cfg.tol("slope_slack")?;
    let mut v = Verdict::new("sparse-scaling");
    let mut table = Table::new("sparse_scaling.csv", ANCHOR, COLUMNS);
    let op = Operator::Sparse(&setup.family);

    // ⟨A_S f, g⟩ ≤ η^{-1} ∫ M f M g dμ and ‖M‖_{L^p(μ)} ≤ p', so ‖A_S‖ ≤ p p'/η.
    let one = operator_norm_fixed_point(&op, 2.0, &Weight::constant(1.0), &setup.m, setup.refine, setup.max_iter)?.value;
    v.push(Check::new("constant weight norm, p=2", ANCHOR, one, Relation::Band { lo: 1.0 }, 4.0 / setup.family.eta));

    for p in cfg.f64_list("ps")? {
        let points = setup.measure(p, &op)?;
        let e = budget(p);
        judge(&mut v, ANCHOR, &format!("sparse p={p}"), &points, e, slack);
        rows(&mut table, p, "sparse", &points, e);
    }
    v.artifacts.push(table.write(out)?);
    level_sets(cfg, out, &mut v)?;
    Ok(v)
}

fn level_sets(cfg: &ScenarioConfig, out: &Path, v: &mut Verdict) -> Result<()> {
    let m = BesselMeasure::new(cfg.f64("lambda")?)?;
    let psi = YoungFunction::LLogL { eps: cfg.f64("psi_eps")? };
    let phi = YoungFunction::LLogL { eps: cfg.f64("phi_eps")? };
    let gamma = cfg.f64("gamma_psi")?;
    let cells = cfg.usize("cells")?;
    let eta_min = cfg.tol("eta_min")?;
    let k_max = cfg.usize("k_max")? as u32;
    let mut table = Table::new(
        "level_sets.csv",
        LEVEL_SET,
        &["tree_seed", "eta", "k", "band_size", "lhs", "layer_part", "bottom_part", "rhs"],
    );
    let mut populated = vec![0usize; k_max as usize + 1];
    for i in 0..cfg.usize("trees")? as u64 {
        let seed = cfg.seed + i;
        let cubes = random_gapped(
            DyadicCube::new(0, 0),
            cfg.usize("generations")? as u32,
            cfg.usize("gap")? as u32,
            cfg.usize("children")? as u32,
            seed,
        );
        let eta = canonical_major_subsets(&cubes, &m)?.eta;
        v.push(Check::new(format!("level sets tree {seed} sparseness"), LEVEL_SET, eta, Relation::Band { lo: eta_min }, 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let breaks: Vec<f64> = (0..=cells).map(|j| j as f64 / cells as f64).collect();
        let values: Vec<f64> = (0..cells).map(|_| 10f64.powf(rng.gen_range(-4.0..0.0))).collect();
        let f = FuncExpr::piecewise(breaks, values)?;
        let w = Weight::power(rng.gen_range(-0.5..2.5));
        let e = IntervalSet::from_interval(Interval::new(rng.gen_range(0.0..0.5), rng.gen_range(0.5..1.0))?);
        for k in 1..=k_max {
            let r = level_set_estimate(&cubes, k, &f, &w, &e, &phi, &psi, gamma, &m)?;
            if !r.band.is_empty() {
                populated[k as usize] += 1;
            }
            table.row(vec![
                (seed as usize).into(),
                eta.into(),
                k.into(),
                r.band.len().into(),
                r.lhs.into(),
                r.layer_part.into(),
                r.bottom_part.into(),
                r.rhs.into(),
            ]);
            v.push(Check::new(format!("level sets tree {seed} k={k}"), LEVEL_SET, r.lhs, Relation::AtMost, r.rhs));
        }
    }
    for k in 1..=k_max {
        v.push(Check::new(
            format!("level sets k={k} trees with populated band"),
            LEVEL_SET,
            populated[k as usize] as f64,
            Relation::Above,
            0.0,
        ));
    }
    v.artifacts.push(table.write(out)?);
    Ok(())
}
