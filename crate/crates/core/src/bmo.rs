//! BMO-type norms over interval families: the `L¹(μ)` oscillation, the
//! weighted `p`-oscillation (μ-average centering, `w dx` integration), median
//! oscillation `BMO_{0,s}`, rearrangements, local mean oscillation, VMO
//! defects and John–Nirenberg profiles.
//!
//! Sups over all intervals are replaced by maxima over declared families.
//! Medians are infimum medians.

use crate::error::{Error, Result};
use crate::measure::{Against, BesselMeasure, FuncExpr, Interval, IntervalSet};
use crate::orlicz::{luxemburg_norm, YoungFunction};
use crate::quad::QuadConfig;
use crate::weights::{IntervalFamily, Weight};

const LEBESGUE: BesselMeasure = BesselMeasure::lebesgue();

/// Reference mass for medians and quantiles: `dμ` or `w dx`.
#[derive(Debug, Clone, Copy)]
pub enum MassRef<'a> {
    Measure(&'a BesselMeasure),
    Weight(&'a Weight),
}

impl MassRef<'_> {
    pub fn mass(&self, b: Interval) -> Result<f64> {
        match self {
            Self::Measure(m) => Ok(m.mu(b)),
            Self::Weight(w) => w.mass(b),
        }
    }

    pub fn mass_of_set(&self, s: &IntervalSet) -> Result<f64> {
        s.intervals().iter().map(|&i| self.mass(i)).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BmoFlavor {
    /// `(1/μ(B)) ∫_B |b − b_B| dμ`.
    Triangle { lambda: f64 },
    /// `((1/w(B)) ∫_B |b − b_B|^p w dx)^{1/p}`, `b_B` the μ-average.
    WeightedLp { weight: String, p: f64, lambda: f64 },
    /// `inf_c inf{t : w({|b − c| > t} ∩ B) ≤ s w(B)}`.
    MedianOsc { weight: String, s: f64 },
    /// Classical oscillation, `λ = 0`.
    Lebesgue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BmoReport {
    pub norm: f64,
    pub argmax: Interval,
    pub family: IntervalFamily,
    pub flavor: BmoFlavor,
    /// Per-interval values in family order.
    pub values: Vec<f64>,
}

fn report<F: FnMut(Interval) -> Result<f64>>(family: &IntervalFamily, flavor: BmoFlavor, mut per: F) -> Result<BmoReport> {
    let first = *family.intervals.first().ok_or(Error::EmptyFamily)?;
    let mut values = Vec::with_capacity(family.len());
    let (mut norm, mut argmax) = (f64::NEG_INFINITY, first);
    for &b in &family.intervals {
        let v = per(b)?;
        if v > norm {
            norm = v;
            argmax = b;
        }
        values.push(v);
    }
    Ok(BmoReport { norm, argmax, family: family.clone(), flavor, values })
}

/// `b_B = (1/μ(B)) ∫_B b dμ`.
pub fn mu_average(b: &FuncExpr, iv: Interval, m: &BesselMeasure) -> Result<f64> {
    // Exact for functions constant on `iv`, so that `|b − b_B|` vanishes there.
    let constant = match b {
        FuncExpr::AnalyticSum(atoms) if atoms.iter().all(|a| a.alpha == 0.0 && a.m == 0) => Some(atoms.iter().map(|a| a.c).sum()),
        FuncExpr::PiecewiseConstant { .. } => Some(b.range_on(iv)).filter(|(lo, hi)| lo == hi).map(|(lo, _)| lo),
        _ => None,
    };
    if let Some(c) = constant {
        return Ok(c);
    }
    Ok(m.integrate(b, iv, Against::Dmu)? / m.mu(iv))
}

/// `(1/μ(B)) ∫_B |b − b_B| dμ`, split exactly at the sign changes.
pub fn triangle_oscillation(b: &FuncExpr, iv: Interval, m: &BesselMeasure) -> Result<f64> {
    let c = mu_average(b, iv, m)?;
    Ok(b.abs_deviation_integral(c, iv, m, Against::Dmu)? / m.mu(iv))
}

pub fn bmo_triangle_norm(b: &FuncExpr, m: &BesselMeasure, family: &IntervalFamily) -> Result<BmoReport> {
    let flavor = if m.lambda() == 0.0 { BmoFlavor::Lebesgue } else { BmoFlavor::Triangle { lambda: m.lambda() } };
    report(family, flavor, |iv| triangle_oscillation(b, iv, m))
}

/// `(1/(b^{2λ+1} − a^{2λ+1})) ∫_a^b |log x^{2λ} − log b^{2λ}| x^{2λ} dx`
/// in closed form: `2λ/(b^{2λ+1} − a^{2λ+1}) · log(a/b) · a^{2λ+1}/(2λ+1) + 2λ/(2λ+1)²`.
///
/// Evaluated as `2λ/(2λ+1)² · (1 − v/(e^v − 1))` with `v = (2λ+1) log(b/a)`,
/// which stays accurate when `a/b` is close to 1.
pub fn log_oscillation_closed_form(lambda: f64, a: f64, b: f64) -> f64 {
    let e = 2.0 * lambda + 1.0;
    let scale = 2.0 * lambda / (e * e);
    if a == 0.0 {
        return scale;
    }
    let v = e * ((b - a) / a).ln_1p();
    if !(v > 0.0) {
        return 0.0;
    }
    let em1 = v.exp_m1();
    // e^v − 1 − v, by its series when v is small.
    let excess = if v < 0.5 {
        let (mut term, mut sum, mut k) = (v * v / 2.0, 0.0, 2.0);
        while term > 1e-17 * sum || sum == 0.0 {
            sum += term;
            k += 1.0;
            term *= v / k;
        }
        sum
    } else {
        em1 - v
    };
    scale * excess / em1
}

/// `∫_B |b − c|^p w dx`.
pub fn weighted_deviation_integral(b: &FuncExpr, c: f64, w: &Weight, p: f64, iv: Interval) -> Result<f64> {
    if let FuncExpr::PiecewiseConstant { .. } = b {
        let mut cuts = vec![iv.a, iv.b];
        cuts.extend(b.breaks_in(iv));
        cuts.sort_by(f64::total_cmp);
        let mut s = 0.0;
        for win in cuts.windows(2) {
            let cell = Interval { a: win[0], b: win[1] };
            let v = (b.eval(cell.center()) - c).abs();
            if v > 0.0 {
                s += v.powf(p) * w.mass(cell)?;
            }
        }
        return Ok(s);
    }
    if p == 1.0 {
        return crate::measure::integral_abs_times(&b.plus_constant(-c), &w.expr, iv, &LEBESGUE, Against::Dx);
    }
    let mut breaks = b.crossings(c, iv);
    breaks.extend(w.expr.breaks_in(iv));
    LEBESGUE.integrate_fn(|x| (b.eval(x) - c).abs().powf(p) * w.eval(x), iv, Against::Dx, &breaks, &QuadConfig::default())
}

/// `((1/w(B)) ∫_B |b − b_B|^p w dx)^{1/p}` with `b_B` the μ-average.
pub fn weighted_oscillation(b: &FuncExpr, w: &Weight, p: f64, m: &BesselMeasure, iv: Interval) -> Result<f64> {
    let wm = w.mass(iv)?;
    if !(wm > 0.0) {
        return Err(Error::ZeroMass(format!("w-mass of ({}, {})", iv.a, iv.b)));
    }
    let c = mu_average(b, iv, m)?;
    Ok((weighted_deviation_integral(b, c, w, p, iv)? / wm).powf(1.0 / p))
}

pub fn weighted_bmo_norm(b: &FuncExpr, w: &Weight, p: f64, m: &BesselMeasure, family: &IntervalFamily) -> Result<BmoReport> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("need p ≥ 1, got {p}")));
    }
    let flavor = BmoFlavor::WeightedLp { weight: w.description.clone(), p, lambda: m.lambda() };
    report(family, flavor, |iv| weighted_oscillation(b, w, p, m, iv))
}

/// Infimum `θ`-quantile: `inf{c : ρ({b ≤ c} ∩ B) ≥ θ ρ(B)}`.
pub fn quantile(b: &FuncExpr, iv: Interval, r: MassRef<'_>, theta: f64) -> Result<f64> {
    let total = r.mass(iv)?;
    if !(total > 0.0) {
        return Err(Error::ZeroMass(format!("reference mass of ({}, {})", iv.a, iv.b)));
    }
    let target = theta * total;
    let sec = Sections::new(b, iv);
    let below = |c: f64| r.mass_of_set(&sec.level_set(&[c], |v| v <= c));
    if let FuncExpr::PiecewiseConstant { .. } = b {
        let mut vals: Vec<f64> = cells(b, iv).into_iter().map(|(_, v)| v).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for v in vals {
            if below(v)? >= target {
                return Ok(v);
            }
        }
        return Err(Error::Bisection("quantile not reached".into()));
    }
    let (mut lo, mut hi) = sampled_range(b, iv);
    let mut step = 1.0 + (hi - lo).abs();
    while below(lo)? >= target {
        lo -= step;
        step *= 2.0;
    }
    step = 1.0 + (hi - lo).abs();
    while below(hi)? < target {
        hi += step;
        step *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Bisection("quantile bracket".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi.abs().max(lo.abs()) {
            break;
        }
        if below(mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Infimum median with both defining inequalities checked afterwards:
/// `ρ({b > α}) ≤ ρ(B)/2` and `ρ({b < α}) ≤ ρ(B)/2` (the latter up to a
/// relative `1e-12` for continuous `b`).
pub fn median(b: &FuncExpr, iv: Interval, r: MassRef<'_>) -> Result<f64> {
    let alpha = quantile(b, iv, r, 0.5)?;
    let half = 0.5 * r.mass(iv)?;
    let sec = Sections::new(b, iv);
    let above = r.mass_of_set(&sec.level_set(&[alpha], |v| v > alpha))?;
    let below = r.mass_of_set(&sec.level_set(&[alpha], |v| v < alpha))?;
    if above > half * (1.0 + 1e-12) || below > half * (1.0 + 1e-12) {
        return Err(Error::Bisection(format!("median post-check failed: above {above}, below {below}, half {half}")));
    }
    Ok(alpha)
}

/// Constant pieces of a piecewise `b` restricted to `iv`, including the
/// zero outside its support.
fn cells(b: &FuncExpr, iv: Interval) -> Vec<(Interval, f64)> {
    let mut cuts = vec![iv.a, iv.b];
    cuts.extend(b.breaks_in(iv));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2).map(|w| (Interval { a: w[0], b: w[1] }, b.eval(0.5 * (w[0] + w[1])))).collect()
}

fn sampled_range(b: &FuncExpr, iv: Interval) -> (f64, f64) {
    let lo_end = if iv.a == 0.0 { iv.b * 1e-12 } else { iv.a };
    let grid = crate::measure::sample_grid(Interval { a: lo_end, b: iv.b }, 129);
    let vals = grid.iter().map(|&x| b.eval(x)).filter(|v| v.is_finite());
    vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// `b` restricted to `B`, with its monotone pieces computed once; level sets
/// of analytic `b` are then found by bisection on each piece.
struct Sections<'a> {
    b: &'a FuncExpr,
    iv: Interval,
    cuts: Option<Vec<f64>>,
}

impl<'a> Sections<'a> {
    fn new(b: &'a FuncExpr, iv: Interval) -> Self {
        let cuts = match b {
            FuncExpr::AnalyticSum(_) => Some(b.monotone_cuts(iv)),
            FuncExpr::PiecewiseConstant { .. } => None,
        };
        Self { b, iv, cuts }
    }

    fn crossing(&self, c: f64, lo: f64, hi: f64) -> Option<f64> {
        let g = |x: f64| self.b.eval(x) - c;
        let (mut lo, mut hi) = (lo, hi);
        let glo = g(lo.max(hi * 1e-300));
        let ghi = g(hi);
        if glo.is_nan() || ghi.is_nan() || glo.signum() == ghi.signum() || glo == 0.0 || ghi == 0.0 {
            return None;
        }
        let up = ghi > 0.0;
        for _ in 0..1100 {
            let mid = if lo == 0.0 { hi * 0.5 } else { 0.5 * (lo + hi) };
            if mid <= lo || mid >= hi || hi - lo <= 1e-16 * hi {
                break;
            }
            if (g(mid) > 0.0) == up {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }

    fn level_set<P: Fn(f64) -> bool>(&self, levels: &[f64], pred: P) -> IntervalSet {
        let Some(cuts) = &self.cuts else {
            return self.b.level_set(self.iv, levels, pred);
        };
        let mut pts = cuts.clone();
        for w in cuts.windows(2) {
            for &c in levels {
                pts.extend(self.crossing(c, w[0], w[1]));
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut set = IntervalSet::empty();
        for w in pts.windows(2) {
            if !(w[1] > w[0]) {
                continue;
            }
            let mid = if w[0] == 0.0 { w[1] * 0.5 } else { 0.5 * (w[0] + w[1]) };
            if pred(self.b.eval(mid)) {
                set.push(Interval { a: w[0], b: w[1] });
            }
        }
        set
    }

    fn exceedance(&self, c: f64, t: f64) -> IntervalSet {
        self.level_set(&[c - t, c + t], |v| (v - c).abs() > t)
    }
}

/// `w({x ∈ B : |b(x) − c| > γ})`.
pub fn exceedance_mass(b: &FuncExpr, c: f64, gamma: f64, iv: Interval, r: MassRef<'_>) -> Result<f64> {
    r.mass_of_set(&b.exceedance(c, gamma, iv))
}

/// Smallest `γ ≥ 0` with `w({|b − c| > γ} ∩ B) ≤ level` (or `< level` when
/// `strict`).
fn threshold(b: &FuncExpr, c: f64, iv: Interval, r: MassRef<'_>, level: f64, strict: bool) -> Result<f64> {
    let sec = Sections::new(b, iv);
    threshold_in(&sec, c, r, level, strict)
}

fn threshold_in(sec: &Sections<'_>, c: f64, r: MassRef<'_>, level: f64, strict: bool) -> Result<f64> {
    let (b, iv) = (sec.b, sec.iv);
    let ok = |g: f64| -> Result<bool> {
        let d = r.mass_of_set(&sec.exceedance(c, g))?;
        Ok(if strict { d < level } else { d <= level })
    };
    if let FuncExpr::PiecewiseConstant { .. } = b {
        let mut cand: Vec<f64> = cells(b, iv).into_iter().map(|(_, v)| (v - c).abs()).collect();
        cand.push(0.0);
        cand.sort_by(f64::total_cmp);
        cand.dedup();
        for g in cand {
            if ok(g)? {
                return Ok(g);
            }
        }
        return Ok(f64::INFINITY);
    }
    if ok(0.0)? {
        return Ok(0.0);
    }
    let (lo_b, hi_b) = sampled_range(b, iv);
    let mut hi = ((hi_b - c).abs().max((lo_b - c).abs())).max(1e-300);
    let mut lo = 0.0;
    while !ok(hi)? {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Ok(f64::INFINITY);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-14 * hi {
            break;
        }
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Bracket for the minimizing `c` of the median-type objective: with `t₀`
/// the value at the median, any minimizer lies in
/// `[q_{1−s} − t₀, q_s + t₀]`.
fn center_bracket(b: &FuncExpr, iv: Interval, r: MassRef<'_>, s: f64, t0: f64) -> Result<(f64, f64)> {
    let lo = quantile(b, iv, r, 1.0 - s)? - t0;
    let hi = quantile(b, iv, r, s)? + t0;
    Ok((lo.min(hi), lo.max(hi)))
}

/// Minimize `obj` over `[lo, hi]`: a 64-point grid, then golden-section on
/// the cell pair around the best grid point, tolerance `1e-9` of the width.
fn minimize<F: FnMut(f64) -> Result<f64>>(mut obj: F, lo: f64, hi: f64, extra: &[f64]) -> Result<(f64, f64)> {
    let mut best = (f64::INFINITY, lo);
    for &c in extra {
        let v = obj(c)?;
        if v < best.0 {
            best = (v, c);
        }
    }
    if !(hi > lo) {
        let v = obj(lo)?;
        return Ok(if v < best.0 { (v, lo) } else { best });
    }
    const N: usize = 64;
    let h = (hi - lo) / N as f64;
    let mut grid_best = (f64::INFINITY, 0usize);
    for k in 0..=N {
        let c = lo + h * k as f64;
        let v = obj(c)?;
        if v < grid_best.0 {
            grid_best = (v, k);
        }
        if v < best.0 {
            best = (v, c);
        }
    }
    let k = grid_best.1;
    let (mut a, mut d) = (lo + h * k.saturating_sub(1) as f64, lo + h * (k + 1).min(N) as f64);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = d - g * (d - a);
    let mut x2 = a + g * (d - a);
    let (mut f1, mut f2) = (obj(x1)?, obj(x2)?);
    while d - a > 1e-9 * (hi - lo) {
        if f1 <= f2 {
            d = x2;
            x2 = x1;
            f2 = f1;
            x1 = d - g * (d - a);
            f1 = obj(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (d - a);
            f2 = obj(x2)?;
        }
    }
    for (v, c) in [(f1, x1), (f2, x2)] {
        if v < best.0 {
            best = (v, c);
        }
    }
    Ok(best)
}

/// Per-interval median oscillation
/// `inf_c inf{t ≥ 0 : w({|b − c| > t} ∩ B) ≤ s w(B)}`; returns `(value, c)`.
pub fn median_oscillation(b: &FuncExpr, w: &Weight, s: f64, iv: Interval) -> Result<(f64, f64)> {
    if !(s > 0.0 && s <= 0.5) {
        return Err(Error::InvalidArgument(format!("need s ∈ (0, 1/2], got {s}")));
    }
    let r = MassRef::Weight(w);
    let level = s * w.mass(iv)?;
    let alpha = median(b, iv, r)?;
    let t0 = threshold(b, alpha, iv, r, level, false)?;
    let (lo, hi) = center_bracket(b, iv, r, s, t0)?;
    let mut extra = vec![alpha];
    if let FuncExpr::PiecewiseConstant { .. } = b {
        // Optimal centers of a step function are midpoints of value pairs.
        let vals: Vec<f64> = cells(b, iv).into_iter().map(|(_, v)| v).collect();
        for &u in &vals {
            for &v in &vals {
                extra.push(0.5 * (u + v));
            }
        }
    }
    let sec = Sections::new(b, iv);
    let (v, c) = minimize(|c| threshold_in(&sec, c, r, level, false), lo, hi, &extra)?;
    Ok((v, c))
}

pub fn bmo_median_norm(b: &FuncExpr, w: &Weight, s: f64, family: &IntervalFamily) -> Result<BmoReport> {
    let flavor = BmoFlavor::MedianOsc { weight: w.description.clone(), s };
    report(family, flavor, |iv| Ok(median_oscillation(b, w, s, iv)?.0))
}

/// `b*(t) = inf{γ > 0 : w({|b| > γ} ∩ domain) < t}`.
pub fn rearrangement(b: &FuncExpr, w: &Weight, domain: Interval, t: f64) -> Result<f64> {
    threshold(b, 0.0, domain, MassRef::Weight(w), t, true)
}

/// `(ǎ, a)`: `ǎ = inf_c ((b − c)χ_B)*(frac · w(B))` and `a` the same with
/// `c` the w-median of `b` on `B`.
pub fn local_mean_oscillation(b: &FuncExpr, iv: Interval, frac: f64, w: &Weight) -> Result<(f64, f64)> {
    if !(frac > 0.0 && frac < 1.0) {
        return Err(Error::InvalidArgument(format!("need fraction in (0, 1), got {frac}")));
    }
    let r = MassRef::Weight(w);
    let level = frac * w.mass(iv)?;
    let alpha = median(b, iv, r)?;
    let a_median = threshold(b, alpha, iv, r, level, true)?;
    let s = frac.min(1.0 - frac);
    let (lo, hi) = center_bracket(b, iv, r, s, a_median)?;
    let mut extra = vec![alpha];
    if let FuncExpr::PiecewiseConstant { .. } = b {
        let vals: Vec<f64> = cells(b, iv).into_iter().map(|(_, v)| v).collect();
        for &u in &vals {
            for &v in &vals {
                extra.push(0.5 * (u + v));
            }
        }
    }
    let sec = Sections::new(b, iv);
    let (a_check, _) = minimize(|c| threshold_in(&sec, c, r, level, true), lo, hi, &extra)?;
    Ok((a_check.min(a_median), a_median))
}

/// `B_ε` with `w(B_ε) = (1 + ε) w(B)`: the right endpoint moves first; when
/// the target is out of reach that way, the left endpoint moves.
pub fn extend_to_mass(iv: Interval, eps: f64, w: &Weight) -> Result<Interval> {
    let target = (1.0 + eps) * w.mass(iv)?;
    let mass = |a: f64, b: f64| w.mass(Interval { a, b });
    if eps == 0.0 {
        return Ok(iv);
    }
    let bisect = |mut lo: f64, mut hi: f64, f: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
        // f increasing in the moved coordinate parameter.
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };
    if eps > 0.0 {
        let mut hi = iv.b + iv.length();
        let mut k = 0;
        while mass(iv.a, hi)? < target && k < 200 {
            hi = iv.b + (hi - iv.b) * 2.0;
            k += 1;
        }
        if mass(iv.a, hi)? >= target {
            let b = bisect(iv.b, hi, &|x| mass(iv.a, x))?;
            return Interval::new(iv.a, b);
        }
        if mass(0.0, iv.b)? < target {
            return Err(Error::Construction("target mass exceeds the domain".into()));
        }
        // Parametrize by s = −a so the mass increases with s.
        let s = bisect(-iv.a, 0.0, &|s| mass(-s, iv.b))?;
        Interval::new(-s, iv.b)
    } else {
        let b = bisect(iv.a, iv.b, &|x| mass(iv.a, x))?;
        Interval::new(iv.a, b)
    }
}

/// `(|α_b(B_ε) − α_b(B)|, a_frac(b; B))` with w-medians.
pub fn median_stability_check(b: &FuncExpr, iv: Interval, eps: f64, frac: f64, w: &Weight) -> Result<(f64, f64)> {
    let be = extend_to_mass(iv, eps, w)?;
    let r = MassRef::Weight(w);
    let lhs = (median(b, be, r)? - median(b, iv, r)?).abs();
    let (_, rhs) = local_mean_oscillation(b, iv, frac, w)?;
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VmoDefect {
    /// `r ↦ max` oscillation over tested intervals of length `r ≤ 1`.
    pub small_scale: Vec<(f64, f64)>,
    /// Same for `r > 1`.
    pub large_scale: Vec<(f64, f64)>,
    /// `a ↦ max` over tested intervals with left end `≥ a`.
    pub far_field: Vec<(f64, f64)>,
}

/// Left ends tested at each scale: `0` and `2^j`, `−30 ≤ j ≤ 30`.
fn vmo_positions() -> impl Iterator<Item = f64> {
    std::iter::once(0.0).chain((-30..=30).map(|j| (j as f64).exp2()))
}

pub fn vmo_defect(b: &FuncExpr, m: &BesselMeasure, scales: &[f64], far_cutoffs: &[f64]) -> Result<VmoDefect> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    for &r in scales {
        let mut best = 0.0f64;
        for a in vmo_positions() {
            best = best.max(triangle_oscillation(b, Interval::new(a, a + r)?, m)?);
        }
        if r <= 1.0 {
            small.push((r, best));
        } else {
            large.push((r, best));
        }
    }
    let mut far = Vec::new();
    for &a0 in far_cutoffs {
        let mut best = 0.0f64;
        for i in 0..=20 {
            let a = a0 * (i as f64).exp2();
            for j in -10..=10 {
                best = best.max(triangle_oscillation(b, Interval::new(a, a + (j as f64).exp2())?, m)?);
            }
        }
        far.push((a0, best));
    }
    Ok(VmoDefect { small_scale: small, large_scale: large, far_field: far })
}

/// `γ ↦ μ({x ∈ B : |b − b_B| > γ}) / μ(B)`.
pub fn john_nirenberg_profile(b: &FuncExpr, iv: Interval, m: &BesselMeasure, gammas: &[f64]) -> Result<Vec<(f64, f64)>> {
    let c = mu_average(b, iv, m)?;
    let mu = m.mu(iv);
    gammas.iter().map(|&g| Ok((g, exceedance_mass(b, c, g, iv, MassRef::Measure(m))? / mu))).collect()
}

/// `‖b − b_B‖_{exp−1, B}` (Luxemburg norm against μ).
pub fn exponential_oscillation(b: &FuncExpr, iv: Interval, m: &BesselMeasure) -> Result<f64> {
    let c = mu_average(b, iv, m)?;
    luxemburg_norm(&b.plus_constant(-c), &YoungFunction::ExpM1, iv, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn constants_have_zero_oscillation() {
        let m = BesselMeasure::new(1.0).unwrap();
        let c = FuncExpr::constant(2.5);
        let w = Weight::power(0.5);
        assert_eq!(triangle_oscillation(&c, iv(1.0, 3.0), &m).unwrap(), 0.0);
        assert_eq!(weighted_oscillation(&c, &w, 2.0, &m, iv(1.0, 3.0)).unwrap(), 0.0);
        assert_eq!(median_oscillation(&c, &w, 0.25, iv(1.0, 3.0)).unwrap().0, 0.0);
        assert_eq!(median(&c, iv(1.0, 3.0), MassRef::Measure(&m)).unwrap(), 2.5);
    }

    #[test]
    fn median_of_strictly_increasing() {
        let m = BesselMeasure::new(1.0).unwrap();
        let b = FuncExpr::power(1.0, 1.0);
        let a = median(&b, iv(1.0, 3.0), MassRef::Measure(&m)).unwrap();
        assert!((a - 14f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn indicator_median_is_infimum() {
        let m = BesselMeasure::lebesgue();
        let b = FuncExpr::indicator(iv(0.0, 0.5));
        assert_eq!(median(&b, iv(0.0, 1.0), MassRef::Measure(&m)).unwrap(), 0.0);
    }

    #[test]
    fn indicator_median_oscillation_at_half() {
        let b = FuncExpr::indicator(iv(0.0, 0.5));
        let (v, _) = median_oscillation(&b, &Weight::constant(1.0), 0.5, iv(0.0, 1.0)).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn rearrangement_of_scaled_indicator() {
        let b = FuncExpr::indicator(iv(1.0, 3.0)).scaled(4.0);
        let w = Weight::constant(1.0);
        let d = iv(0.0, 10.0);
        assert_eq!(rearrangement(&b, &w, d, 1.5).unwrap(), 4.0);
        assert_eq!(rearrangement(&b, &w, d, 2.0).unwrap(), 4.0);
        assert_eq!(rearrangement(&b, &w, d, 2.5).unwrap(), 0.0);
    }

    #[test]
    fn log_closed_form_at_zero() {
        assert!((log_oscillation_closed_form(1.0, 0.0, 1.0) - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn extension_hits_target_mass() {
        let w = Weight::power(1.0);
        let b = extend_to_mass(iv(1.0, 2.0), 0.1, &w).unwrap();
        assert!((w.mass(b).unwrap() - 1.65).abs() < 1e-12);
        assert_eq!(b.a, 1.0);
    }
}
