//! The α-sweep toward both ends of the `Ã_{p,λ−1/2}` range shared by the
//! sparse and commutator scenarios.

use anyhow::Result;
use bessel_harmonic::dyadic::{canonical_major_subsets, chain_at_zero, SparseFamily};
use bessel_harmonic::operators::{operator_norm_fixed_point, Operator};
use bessel_harmonic::weights::{power_weight_range, weight_constant, ClassTag, IntervalFamily, Weight};
use bessel_harmonic::BesselMeasure;
use rayon::prelude::*;

use crate::table::Table;
use crate::verdict::{Check, Relation, Verdict};
use crate::ScenarioConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Lower,
    Upper,
}

impl Side {
    pub(crate) fn label(self) -> &'static str {
        match self {
            Self::Lower => "lower",
            Self::Upper => "upper",
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct SweepPoint {
    pub side: Side,
    pub offset: f64,
    pub alpha: f64,
    /// `[w]` over the family.
    pub constant: f64,
    pub norm: f64,
}

pub(crate) struct Setup {
    pub lambda: f64,
    pub m: BesselMeasure,
    pub family: SparseFamily,
    pub weights: IntervalFamily,
    pub offsets: Vec<f64>,
    pub refine: u32,
    pub max_iter: usize,
}

impl Setup {
    pub(crate) fn from_config(cfg: &ScenarioConfig) -> Result<Self> {
        let lambda = cfg.f64("lambda")?;
        let m = BesselMeasure::new(lambda)?;
        let family = canonical_major_subsets(&chain_at_zero(0, cfg.usize("chain_length")? as u32), &m)?;
        let depth = cfg.usize("family_depth")? as u32;
        let weights = IntervalFamily::standard(depth, cfg.seed, cfg.usize("random_count")?)
            .extended(&IntervalFamily::boundary_refining(depth, false));
        Ok(Self {
            lambda,
            m,
            family,
            weights,
            offsets: cfg.f64_list("offsets")?,
            refine: cfg.usize("refine")? as u32,
            max_iter: cfg.usize("max_iter")?,
        })
    }

    pub(crate) fn class(&self, p: f64) -> ClassTag {
        ClassTag::TildeAp { p, class_lambda: self.lambda - 0.5 }
    }

    /// Exponents `lo + d` and `hi − d` for every offset `d`, lower side first.
    pub(crate) fn alphas(&self, p: f64) -> Vec<(Side, f64, f64)> {
        let (lo, hi) = power_weight_range(self.class(p));
        let mut v: Vec<_> = self.offsets.iter().map(|&d| (Side::Lower, d, lo + d)).collect();
        v.extend(self.offsets.iter().map(|&d| (Side::Upper, d, hi - d)));
        v
    }

    /// Weight constants and fixed-point norm estimates for every sweep point.
    pub(crate) fn measure(&self, p: f64, op: &Operator<'_>) -> Result<Vec<SweepPoint>> {
        self.alphas(p)
            .into_par_iter()
            .map(|(side, offset, alpha)| {
                let w = Weight::power(alpha);
                let constant = weight_constant(&w, self.class(p), &self.weights)?.value;
                let norm = operator_norm_fixed_point(op, p, &w, &self.m, self.refine, self.max_iter)?.value;
                Ok(SweepPoint { side, offset, alpha, constant, norm })
            })
            .collect()
    }
}

pub(crate) fn budget(p: f64) -> f64 {
    1f64.max(1.0 / (p - 1.0))
}

/// Slope and single-constant checks for one side of one sweep.
///
/// The constant `C = norm/[w]^e` is fixed at the point farthest from the
/// boundary and the remaining points must satisfy `norm ≤ C [w]^e`.
pub(crate) fn judge(
    v: &mut Verdict,
    anchor: &'static str,
    label: &str,
    points: &[SweepPoint],
    exponent: f64,
    slack: f64,
) {
    for side in [Side::Lower, Side::Upper] {
        let pts: Vec<&SweepPoint> = points.iter().filter(|s| s.side == side).collect();
        let x: Vec<f64> = pts.iter().map(|s| s.constant.ln()).collect();
        let y: Vec<f64> = pts.iter().map(|s| s.norm.ln()).collect();
        let slope = super::slope(&x, &y);
        v.push(Check::new(format!("{label} {} slope", side.label()), anchor, slope, Relation::AtMost, exponent + slack));
        let c = pts[0].norm / pts[0].constant.powf(exponent);
        let worst = pts[1..].iter().map(|s| s.norm / s.constant.powf(exponent) / c).fold(0.0, f64::max);
        v.push(Check::new(format!("{label} {} single constant", side.label()), anchor, worst, Relation::AtMost, 1.0));
    }
}

pub(crate) fn rows(table: &mut Table, p: f64, variant: &str, points: &[SweepPoint], exponent: f64) {
    for s in points {
        table.row(vec![
            p.into(),
            variant.into(),
            s.side.label().into(),
            s.offset.into(),
            s.alpha.into(),
            s.constant.into(),
            s.norm.into(),
            (s.norm / s.constant.powf(exponent)).into(),
        ]);
    }
}

pub(crate) const COLUMNS: &[&str] = &["p", "operator", "side", "offset", "alpha", "w_constant", "norm_lower_bound", "norm_over_bound"];
