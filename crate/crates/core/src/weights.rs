//! Weight classes `A_p(μ)`, `Ã_{p,κ}` and `Ã_{1,κ}`: per-interval quantities,
//! constants over interval families, dual weights and power-weight ranges.
//!
//! The class parameter κ is explicit everywhere; the weighted estimates use
//! `κ = λ − 1/2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::measure::{sample_grid, Against, BesselMeasure, FuncExpr, Interval};
use crate::quad::QuadConfig;

const LEBESGUE: BesselMeasure = BesselMeasure::lebesgue();

#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    pub expr: FuncExpr,
    pub description: String,
}

impl Weight {
    /// Checks nonnegativity on a sample grid over `[1e-6, 1e6]` (or the
    /// support of a piecewise constant).
    pub fn new(expr: FuncExpr, description: impl Into<String>) -> Result<Self> {
        let probe = expr.support().unwrap_or(Interval { a: 1e-6, b: 1e6 });
        let probe = Interval { a: probe.a.max(probe.b * 1e-12), ..probe };
        if sample_grid(probe, 257).into_iter().any(|x| expr.eval(x) < 0.0) {
            return Err(Error::InvalidArgument("weight takes negative values".into()));
        }
        Ok(Self { expr, description: description.into() })
    }

    pub fn power(alpha: f64) -> Self {
        Self { expr: FuncExpr::power(1.0, alpha), description: format!("t^{alpha}") }
    }

    pub fn constant(c: f64) -> Self {
        Self { expr: FuncExpr::constant(c), description: format!("{c}") }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.expr.eval(x)
    }

    /// `w(B) = ∫_B w dx`.
    pub fn mass(&self, b: Interval) -> Result<f64> {
        integrate_dx_weighted(&self.expr, 0.0, b)
    }
}

/// `∫_B x^β g(x) dx`, exact when `g` is in the family, quadrature otherwise.
fn integrate_dx_weighted(g: &FuncExpr, beta: f64, b: Interval) -> Result<f64> {
    LEBESGUE.integrate(g, b, Against::Dnu((beta - 1.0) / 2.0))
}

/// `∫_B x^β w(x)^r dx`.
fn integrate_weight_power(w: &Weight, r: f64, beta: f64, b: Interval) -> Result<f64> {
    if let Some(g) = w.expr.powf(r) {
        return integrate_dx_weighted(&g, beta, b);
    }
    let breaks = w.expr.breaks_in(b);
    let v = LEBESGUE.integrate_fn(
        |x| {
            let wx = w.eval(x);
            if wx == 0.0 && r < 0.0 {
                f64::INFINITY
            } else {
                wx.powf(r) * x.powf(beta)
            }
        },
        b,
        Against::Dx,
        &breaks,
        &QuadConfig::default(),
    );
    match v {
        Err(Error::Divergence(_)) | Err(Error::Nonconvergence { .. }) if r < 0.0 => {
            Err(Error::Divergence(format!("∫ x^{beta} w^{r} on ({}, {})", b.a, b.b)))
        }
        other => other,
    }
}

/// Weight class with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassTag {
    /// `A_p(μ)` for `dμ = x^{2λ} dx`.
    ApMu { p: f64, lambda: f64 },
    /// `Ã_{p,κ}`.
    TildeAp { p: f64, class_lambda: f64 },
    /// `Ã_{1,κ}`.
    TildeA1 { class_lambda: f64 },
}

fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

/// `(w(B)/ν_κ(B)) · ((1/ν_κ(B)) ∫_B t^{(2κ+1)p'} w^{-1/(p-1)} dt)^{p-1}`.
pub fn tilde_ap_quantity(w: &Weight, p: f64, class_lambda: f64, b: Interval) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::InvalidArgument(format!("p must exceed 1, got {p}")));
    }
    let nu = LEBESGUE.nu(class_lambda, b)?;
    let first = w.mass(b)? / nu;
    let beta = (2.0 * class_lambda + 1.0) * conjugate(p);
    let second = integrate_weight_power(w, -1.0 / (p - 1.0), beta, b)? / nu;
    Ok(first * second.powf(p - 1.0))
}

/// `(⟨w⟩_{B,μ}) (⟨w^{-1/(p-1)}⟩_{B,μ})^{p-1}`.
pub fn ap_mu_quantity(w: &Weight, p: f64, m: &BesselMeasure, b: Interval) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::InvalidArgument(format!("p must exceed 1, got {p}")));
    }
    let two_l = 2.0 * m.lambda();
    let mu = m.mu(b);
    let first = integrate_dx_weighted(&w.expr, two_l, b)? / mu;
    let second = integrate_weight_power(w, -1.0 / (p - 1.0), two_l, b)? / mu;
    Ok(first * second.powf(p - 1.0))
}

/// `(w(B)/ν_κ(B)) · max_x x^{2κ+1}/w(x)` over a deterministic sample grid of
/// `sample_points` points in `B` (plus the jump points of `w`).
pub fn tilde_a1_quantity(w: &Weight, class_lambda: f64, b: Interval, sample_points: usize) -> Result<f64> {
    let nu = LEBESGUE.nu(class_lambda, b)?;
    let avg = w.mass(b)? / nu;
    let e = 2.0 * class_lambda + 1.0;
    let mut pts = sample_grid(b, sample_points);
    for t in w.expr.breaks_in(b) {
        pts.push(t);
        pts.push(t * (1.0 - 1e-12));
    }
    let mut sup: f64 = 0.0;
    for x in pts {
        let wx = w.eval(x);
        if !(wx > 0.0) {
            return Err(Error::ZeroDensity(x));
        }
        sup = sup.max(x.powf(e) / wx);
    }
    Ok(avg * sup)
}

/// Default sample count for the `Ã_1` essential supremum.
pub const TILDE_A1_SAMPLES: usize = 1024;

pub fn class_quantity(w: &Weight, class: ClassTag, b: Interval) -> Result<f64> {
    match class {
        ClassTag::ApMu { p, lambda } => ap_mu_quantity(w, p, &BesselMeasure::new(lambda)?, b),
        ClassTag::TildeAp { p, class_lambda } => tilde_ap_quantity(w, p, class_lambda, b),
        ClassTag::TildeA1 { class_lambda } => tilde_a1_quantity(w, class_lambda, b, TILDE_A1_SAMPLES),
    }
}

/// Largest per-interval quantity over a family; a lower bound for the constant.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightConstantReport {
    /// `f64::INFINITY` when some interval of the family witnesses divergence.
    pub value: f64,
    pub infinite: bool,
    pub argmax: Interval,
    pub family_size: usize,
    pub class: ClassTag,
}

pub fn weight_constant(w: &Weight, class: ClassTag, family: &IntervalFamily) -> Result<WeightConstantReport> {
    let first = *family.intervals.first().ok_or(Error::EmptyFamily)?;
    let mut best = WeightConstantReport {
        value: f64::NEG_INFINITY,
        infinite: false,
        argmax: first,
        family_size: family.intervals.len(),
        class,
    };
    for &b in &family.intervals {
        match class_quantity(w, class, b) {
            Ok(q) if q > best.value => {
                best.value = q;
                best.argmax = b;
            }
            Ok(_) => {}
            Err(Error::Divergence(_)) => {
                best.value = f64::INFINITY;
                best.infinite = true;
                best.argmax = b;
                return Ok(best);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}

/// `σ = w^{1-p'}` and `σ_* = t^{2λp'} w^{1-p'}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualWeights {
    pub sigma: Weight,
    pub sigma_star: Weight,
}

pub fn dual_weight(w: &Weight, p: f64, lambda: f64) -> Result<DualWeights> {
    let pp = conjugate(p);
    let sigma = w
        .expr
        .powf(1.0 - pp)
        .ok_or_else(|| Error::Representation(format!("{}^(1-p')", w.description)))?;
    let sigma_star = sigma
        .times_power(2.0 * lambda * pp)
        .ok_or_else(|| Error::Representation(format!("t^(2λp') {}^(1-p')", w.description)))?;
    Ok(DualWeights {
        sigma: Weight { expr: sigma, description: format!("({})^(1-p')", w.description) },
        sigma_star: Weight { expr: sigma_star, description: format!("t^(2λp') ({})^(1-p')", w.description) },
    })
}

/// Open range of exponents α for which `t^α` belongs to the class.
/// For `TildeA1` the upper endpoint `2κ+1` itself belongs to the class.
pub fn power_weight_range(class: ClassTag) -> (f64, f64) {
    match class {
        ClassTag::ApMu { p, lambda } => (-1.0 - 2.0 * lambda, p - 1.0 + 2.0 * lambda * (p - 1.0)),
        ClassTag::TildeAp { p, class_lambda } => (-1.0, p - 1.0 + (2.0 * class_lambda + 1.0) * p),
        ClassTag::TildeA1 { class_lambda } => (-1.0, 2.0 * class_lambda + 1.0),
    }
}

/// How a family was generated.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyRule {
    /// Dyadic intervals of side `2^j`, `-J ≤ j < J`, the first `per_level`
    /// of each level, clipped to `[2^{-J}, 2^J]`.
    Dyadic { depth: u32, per_level: u32 },
    /// Log-uniform random intervals inside `[2^{-J}, 2^J]`.
    Random { depth: u32, seed: u64, count: usize },
    /// `(0, 2^{-j})` for `-J < j ≤ J`; with `truncated`, the left end is
    /// `2^{-J}` instead of 0.
    BoundaryRefining { depth: u32, truncated: bool },
    /// Union of dyadic (8 per level), random and truncated boundary-refining.
    Standard { depth: u32, seed: u64, random_count: usize },
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalFamily {
    pub rule: FamilyRule,
    pub intervals: Vec<Interval>,
}

impl IntervalFamily {
    pub fn explicit(intervals: Vec<Interval>) -> Self {
        Self { rule: FamilyRule::Explicit, intervals }
    }

    pub fn dyadic(depth: u32, per_level: u32) -> Self {
        let lo = (-(depth as f64)).exp2();
        let hi = (depth as f64).exp2();
        let mut v = Vec::new();
        for j in -(depth as i32)..depth as i32 {
            let side = (j as f64).exp2();
            for i in 0..per_level {
                let a = (i as f64 * side).max(lo);
                let b = ((i + 1) as f64 * side).min(hi);
                if b > a {
                    v.push(Interval { a, b });
                }
            }
        }
        Self { rule: FamilyRule::Dyadic { depth, per_level }, intervals: v }
    }

    pub fn random(depth: u32, seed: u64, count: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let span = depth as f64 * std::f64::consts::LN_2;
        let mut v = Vec::with_capacity(count);
        while v.len() < count {
            let la = rng.gen_range(-span..span);
            let lb = rng.gen_range(la..=span);
            let (a, b) = (la.exp(), lb.exp());
            if b > a * (1.0 + 1e-9) {
                v.push(Interval { a, b });
            }
        }
        Self { rule: FamilyRule::Random { depth, seed, count }, intervals: v }
    }

    pub fn boundary_refining(depth: u32, truncated: bool) -> Self {
        let a = if truncated { (-(depth as f64)).exp2() } else { 0.0 };
        let v = (-(depth as i32) + 1..=depth as i32)
            .rev()
            .map(|j| Interval { a, b: (-(j as f64)).exp2() })
            .filter(|i| i.b > i.a)
            .collect();
        Self { rule: FamilyRule::BoundaryRefining { depth, truncated }, intervals: v }
    }

    pub fn standard(depth: u32, seed: u64, random_count: usize) -> Self {
        let mut v = Self::dyadic(depth, 8).intervals;
        v.extend(Self::random(depth, seed, random_count).intervals);
        v.extend(Self::boundary_refining(depth, true).intervals);
        Self { rule: FamilyRule::Standard { depth, seed, random_count }, intervals: v }
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Union with another family (rule becomes `Explicit`).
    pub fn extended(&self, other: &IntervalFamily) -> Self {
        let mut v = self.intervals.clone();
        v.extend(other.intervals.iter().copied());
        Self::explicit(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn tilde_ap_constant_weight_on_unit_interval() {
        let q = tilde_ap_quantity(&Weight::constant(1.0), 2.0, 0.5, iv(0.0, 1.0)).unwrap();
        assert!((q - 9.0 / 5.0).abs() < 1e-14);
    }

    #[test]
    fn tilde_ap_upper_boundary_diverges_at_zero() {
        let (p, k) = (2.0, 0.5);
        let alpha = p - 1.0 + (2.0 * k + 1.0) * p;
        let r = tilde_ap_quantity(&Weight::power(alpha), p, k, iv(0.0, 0.5));
        assert!(matches!(r, Err(Error::Divergence(_))));
    }

    #[test]
    fn ap_mu_constant_weight_is_one() {
        let m = BesselMeasure::new(0.7).unwrap();
        for b in [iv(0.0, 1.0), iv(2.0, 9.0)] {
            let q = ap_mu_quantity(&Weight::constant(3.0), 2.5, &m, b).unwrap();
            assert!((q - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn ap_mu_lower_boundary_diverges() {
        let m = BesselMeasure::new(1.0).unwrap();
        let r = ap_mu_quantity(&Weight::power(-3.0), 2.0, &m, iv(0.0, 0.1));
        assert!(matches!(r, Err(Error::Divergence(_))));
    }

    #[test]
    fn tilde_a1_examples() {
        let k = 0.5;
        let dens = Weight::power(2.0 * k + 1.0);
        let q = tilde_a1_quantity(&dens, k, iv(0.3, 5.0), 1024).unwrap();
        assert!((q - 1.0).abs() < 1e-12);
        let q = tilde_a1_quantity(&Weight::constant(1.0), -0.5, iv(1.0, 3.0), 1024).unwrap();
        assert!((q - 1.0).abs() < 1e-12);
        let q = tilde_a1_quantity(&Weight::constant(1.0), 0.5, iv(1.0, 2.0), 1024).unwrap();
        assert!((q - 12.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn dual_weight_examples() {
        let d = dual_weight(&Weight::constant(1.0), 2.0, 1.0).unwrap();
        assert_eq!(d.sigma_star.expr, FuncExpr::power(1.0, 4.0));
        let d = dual_weight(&Weight::power(1.5), 3.0, 0.5).unwrap();
        let pp = 1.5;
        assert_eq!(d.sigma_star.expr, FuncExpr::power(1.0, pp - 1.5 * (pp - 1.0)));
    }

    #[test]
    fn ranges() {
        assert_eq!(power_weight_range(ClassTag::ApMu { p: 2.0, lambda: 1.0 }), (-3.0, 3.0));
        assert_eq!(power_weight_range(ClassTag::TildeAp { p: 2.0, class_lambda: 1.0 }), (-1.0, 7.0));
        let (_, hi) = power_weight_range(ClassTag::TildeAp { p: 2.0, class_lambda: 1e-9 });
        assert!((hi - 3.0).abs() < 1e-8);
    }

    #[test]
    fn constant_weight_report() {
        let fam = IntervalFamily::standard(6, 1, 50);
        let r = weight_constant(&Weight::constant(1.0), ClassTag::ApMu { p: 2.0, lambda: 0.5 }, &fam).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert_eq!(r.family_size, fam.len());
    }

    #[test]
    fn families_are_deterministic() {
        assert_eq!(IntervalFamily::random(10, 7, 30), IntervalFamily::random(10, 7, 30));
        assert_ne!(IntervalFamily::random(10, 7, 30), IntervalFamily::random(10, 8, 30));
    }
}
