//! Bessel measures `dμ = x^{2λ} dx`, `dν_κ = x^{2κ+1} dx` and the function
//! family integrated against them.
//!
//! Functions are finite sums of atoms `c x^α (log x)^m` or piecewise
//! constants; both admit exact integrals against every `x^β dx`.

use crate::error::{Error, Result};
use crate::quad::{self, QuadConfig};

/// An interval `(a, b)` with `0 ≤ a < b < ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a >= 0.0 && b > a {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidInterval { a, b })
        }
    }

    /// Interval `(lo, hi)` with `lo` clipped to 0.
    pub fn clipped(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo.max(0.0), hi)
    }

    pub fn centered(center: f64, radius: f64) -> Result<Self> {
        Self::clipped(center - radius, center + radius)
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x < self.b
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.a >= self.a && other.b <= self.b
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let a = self.a.max(other.a);
        let b = self.b.min(other.b);
        (b > a).then_some(Interval { a, b })
    }
}

/// Which density an integral is taken against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Against {
    Dx,
    Dmu,
    /// `x^{2κ+1} dx` for the class parameter κ.
    Dnu(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselMeasure {
    lambda: f64,
}

impl BesselMeasure {
    /// `lambda = 0` is accepted and gives Lebesgue measure.
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda >= 0.0 {
            Ok(Self { lambda })
        } else {
            Err(Error::InvalidArgument(format!("lambda must be >= 0, got {lambda}")))
        }
    }

    pub const fn lebesgue() -> Self {
        Self { lambda: 0.0 }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Exponent β of the density `x^β` for `against`.
    pub fn density_exponent(&self, against: Against) -> f64 {
        match against {
            Against::Dx => 0.0,
            Against::Dmu => 2.0 * self.lambda,
            Against::Dnu(k) => 2.0 * k + 1.0,
        }
    }

    pub fn density(&self, against: Against, x: f64) -> f64 {
        let beta = self.density_exponent(against);
        if beta == 0.0 {
            1.0
        } else {
            x.powf(beta)
        }
    }

    pub fn mu(&self, b: Interval) -> f64 {
        let e = 2.0 * self.lambda + 1.0;
        (b.b.powf(e) - b.a.powf(e)) / e
    }

    pub fn nu(&self, class_lambda: f64, b: Interval) -> Result<f64> {
        power_log_integral(2.0 * class_lambda + 1.0, 0, b.a, b.b)
    }

    /// Mass of `b` under `against`.
    pub fn mass(&self, against: Against, b: Interval) -> Result<f64> {
        match against {
            Against::Dmu => Ok(self.mu(b)),
            _ => power_log_integral(self.density_exponent(against), 0, b.a, b.b),
        }
    }

    pub fn mass_of_set(&self, against: Against, s: &IntervalSet) -> Result<f64> {
        s.intervals().iter().map(|&i| self.mass(against, i)).sum()
    }

    pub fn integrate(&self, f: &FuncExpr, b: Interval, against: Against) -> Result<f64> {
        let shift = self.density_exponent(against);
        match f {
            FuncExpr::AnalyticSum(atoms) => atoms
                .iter()
                .filter(|t| t.c != 0.0)
                .map(|t| Ok(t.c * power_log_integral(t.alpha + shift, t.m, b.a, b.b)?))
                .sum(),
            FuncExpr::PiecewiseConstant { breaks, values } => {
                let mut s = 0.0;
                for (i, &v) in values.iter().enumerate() {
                    if v == 0.0 {
                        continue;
                    }
                    let cell = Interval { a: breaks[i], b: breaks[i + 1] };
                    if let Some(c) = cell.intersect(&b) {
                        s += v * self.mass(against, c)?;
                    }
                }
                Ok(s)
            }
        }
    }

    /// Integrate an arbitrary pointwise function of `x` against the density by
    /// adaptive quadrature, splitting at `breaks` inside `b`.
    pub fn integrate_fn<F: Fn(f64) -> f64>(
        &self,
        g: F,
        b: Interval,
        against: Against,
        breaks: &[f64],
        cfg: &QuadConfig,
    ) -> Result<f64> {
        let beta = self.density_exponent(against);
        let h = |x: f64| {
            let v = g(x);
            if v == 0.0 {
                0.0
            } else if beta == 0.0 {
                v
            } else {
                v * x.powf(beta)
            }
        };
        let mut pts: Vec<f64> = breaks.iter().copied().filter(|&t| t > b.a && t < b.b).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut total = 0.0;
        let mut start = b.a;
        if b.a == 0.0 {
            let first = pts.first().copied().unwrap_or(b.b);
            total += quad::integrate_from_zero(&h, first, cfg)?.value;
            start = first;
        }
        let mut points = vec![start];
        points.extend(pts.into_iter().filter(|&t| t > start));
        if *points.last().unwrap() < b.b {
            points.push(b.b);
        }
        if points.len() >= 2 {
            total += quad::integrate_pieces(&h, &points, cfg)?.value;
        }
        Ok(total)
    }
}

/// `∫_a^b x^β (ln x)^m dx`, exact.
pub fn power_log_integral(beta: f64, m: u32, a: f64, b: f64) -> Result<f64> {
    if !(b > a) {
        return Ok(0.0);
    }
    let g = beta + 1.0;
    if a == 0.0 {
        if g <= 0.0 {
            return Err(Error::Divergence(format!("x^{beta} (log x)^{m} at 0")));
        }
        return Ok(antiderivative(g, m, b));
    }
    if m == 0 {
        let l = (b / a).ln();
        if g == 0.0 {
            return Ok(l);
        }
        return Ok(a.powf(g) * (g * l).exp_m1() / g);
    }
    if g == 0.0 {
        let (la, lb) = (a.ln(), b.ln());
        let k = (m + 1) as f64;
        let diff = (lb.powi(m as i32 + 1) - la.powi(m as i32 + 1)) / k;
        if diff.abs() * 1e4 >= (lb.powi(m as i32 + 1).abs() / k) {
            return Ok(diff);
        }
    } else {
        let fb = antiderivative(g, m, b);
        let fa = antiderivative(g, m, a);
        let diff = fb - fa;
        if diff.is_finite() && diff.abs() * 1e4 >= fa.abs().max(fb.abs()) {
            return Ok(diff);
        }
    }
    // Cancellation: integrate e^{g u} u^m over u = ln x directly.
    let (la, lb) = (a.ln(), b.ln());
    let r = quad::integrate(
        |u: f64| (g * u).exp() * u.powi(m as i32),
        la,
        lb,
        &QuadConfig::with_rel_tol(1e-14),
    )?;
    Ok(r.value)
}

/// `x^g Σ_k (-1)^k m!/(m-k)! (ln x)^{m-k} / g^{k+1}`, the antiderivative of
/// `x^{g-1} (ln x)^m`.
fn antiderivative(g: f64, m: u32, x: f64) -> f64 {
    let l = x.ln();
    let mut sum = 0.0;
    let mut fall = 1.0;
    for k in 0..=m {
        let term = fall * l.powi((m - k) as i32) / g.powi(k as i32 + 1);
        sum += if k % 2 == 0 { term } else { -term };
        fall *= (m - k) as f64;
    }
    let xg = x.powf(g);
    if xg == 0.0 {
        0.0
    } else {
        xg * sum
    }
}

/// `c x^α (log x)^m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub c: f64,
    pub alpha: f64,
    pub m: u32,
}

impl Atom {
    pub fn eval(&self, x: f64) -> f64 {
        let p = if self.alpha == 0.0 { 1.0 } else { x.powf(self.alpha) };
        let l = if self.m == 0 { 1.0 } else { x.ln().powi(self.m as i32) };
        self.c * p * l
    }

    pub fn derivative(&self, x: f64) -> f64 {
        // d/dx c x^α L^m = c x^{α-1} L^{m-1} (α L + m)
        let l = x.ln();
        let lm1 = if self.m == 0 { 0.0 } else { l.powi(self.m as i32 - 1) };
        let lm = if self.m == 0 { 1.0 } else { lm1 * l };
        self.c * x.powf(self.alpha - 1.0) * (self.alpha * lm + self.m as f64 * lm1)
    }
}

/// A function on `R_+`.
#[derive(Debug, Clone, PartialEq)]
pub enum FuncExpr {
    AnalyticSum(Vec<Atom>),
    /// `values[i]` on `[breaks[i], breaks[i+1])`, zero elsewhere.
    PiecewiseConstant { breaks: Vec<f64>, values: Vec<f64> },
}

impl FuncExpr {
    pub fn constant(c: f64) -> Self {
        Self::AnalyticSum(vec![Atom { c, alpha: 0.0, m: 0 }])
    }

    pub fn power(c: f64, alpha: f64) -> Self {
        Self::AnalyticSum(vec![Atom { c, alpha, m: 0 }])
    }

    pub fn atoms(atoms: Vec<Atom>) -> Self {
        Self::AnalyticSum(atoms)
    }

    /// `log x^{2λ} = 2λ log x`.
    pub fn log_power(lambda: f64) -> Self {
        Self::AnalyticSum(vec![Atom { c: 2.0 * lambda, alpha: 0.0, m: 1 }])
    }

    pub fn indicator(b: Interval) -> Self {
        Self::PiecewiseConstant { breaks: vec![b.a, b.b], values: vec![1.0] }
    }

    pub fn piecewise(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breaks.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::InvalidArgument("need breaks.len() == values.len() + 1 >= 2".into()));
        }
        if breaks[0] < 0.0 || breaks.windows(2).any(|w| !(w[1] > w[0])) || breaks.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidArgument("breakpoints must be finite, nonnegative and strictly increasing".into()));
        }
        Ok(Self::PiecewiseConstant { breaks, values })
    }

    pub fn is_piecewise(&self) -> bool {
        matches!(self, Self::PiecewiseConstant { .. })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::AnalyticSum(atoms) => atoms.iter().map(|t| t.eval(x)).sum(),
            Self::PiecewiseConstant { breaks, values } => {
                if x < breaks[0] || x >= *breaks.last().unwrap() {
                    return 0.0;
                }
                let i = breaks.partition_point(|&b| b <= x) - 1;
                values[i]
            }
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        match self {
            Self::AnalyticSum(atoms) => Self::AnalyticSum(atoms.iter().map(|t| Atom { c: t.c * s, ..*t }).collect()),
            Self::PiecewiseConstant { breaks, values } => Self::PiecewiseConstant {
                breaks: breaks.clone(),
                values: values.iter().map(|v| v * s).collect(),
            },
        }
    }

    /// `f + c`; for piecewise constants only on the support.
    pub fn plus_constant(&self, c: f64) -> Self {
        match self {
            Self::AnalyticSum(atoms) => {
                let mut v = atoms.clone();
                v.push(Atom { c, alpha: 0.0, m: 0 });
                Self::AnalyticSum(v)
            }
            Self::PiecewiseConstant { breaks, values } => Self::PiecewiseConstant {
                breaks: breaks.clone(),
                values: values.iter().map(|v| v + c).collect(),
            },
        }
    }

    /// `f^r` when the result stays in the family: a single power atom with
    /// positive coefficient, or a piecewise constant with positive values.
    pub fn powf(&self, r: f64) -> Option<Self> {
        match self {
            Self::AnalyticSum(atoms) => {
                let live: Vec<&Atom> = atoms.iter().filter(|t| t.c != 0.0).collect();
                match live.as_slice() {
                    [t] if t.m == 0 && t.c > 0.0 => Some(Self::power(t.c.powf(r), t.alpha * r)),
                    _ => None,
                }
            }
            Self::PiecewiseConstant { breaks, values } => {
                if values.iter().all(|&v| v > 0.0) || (r > 0.0 && values.iter().all(|&v| v >= 0.0)) {
                    Some(Self::PiecewiseConstant {
                        breaks: breaks.clone(),
                        values: values.iter().map(|v| v.powf(r)).collect(),
                    })
                } else {
                    None
                }
            }
        }
    }

    /// `x^β f(x)` when representable.
    pub fn times_power(&self, beta: f64) -> Option<Self> {
        match self {
            Self::AnalyticSum(atoms) => Some(Self::AnalyticSum(
                atoms.iter().map(|t| Atom { alpha: t.alpha + beta, ..*t }).collect(),
            )),
            Self::PiecewiseConstant { .. } => (beta == 0.0).then(|| self.clone()),
        }
    }

    /// Support of a piecewise constant; `None` for analytic sums.
    pub fn support(&self) -> Option<Interval> {
        match self {
            Self::AnalyticSum(_) => None,
            Self::PiecewiseConstant { breaks, .. } => Some(Interval { a: breaks[0], b: *breaks.last().unwrap() }),
        }
    }

    /// Jump points strictly inside `b`.
    pub fn breaks_in(&self, b: Interval) -> Vec<f64> {
        match self {
            Self::AnalyticSum(_) => Vec::new(),
            Self::PiecewiseConstant { breaks, .. } => breaks.iter().copied().filter(|&t| t > b.a && t < b.b).collect(),
        }
    }

    /// Partition of `b` into pieces on which the function is monotone
    /// (constant pieces for piecewise constants). Returned as the ordered
    /// list of cut points including both ends.
    pub fn monotone_cuts(&self, b: Interval) -> Vec<f64> {
        let mut cuts = vec![b.a];
        match self {
            Self::PiecewiseConstant { .. } => cuts.extend(self.breaks_in(b)),
            Self::AnalyticSum(atoms) => {
                let d = |x: f64| atoms.iter().map(|t| t.derivative(x)).sum::<f64>();
                let grid = sample_grid(b, 256);
                for w in grid.windows(2) {
                    let (x0, x1) = (w[0], w[1]);
                    let (d0, d1) = (d(x0), d(x1));
                    if d0.is_finite() && d1.is_finite() && d0 * d1 < 0.0 {
                        cuts.push(bisect_root(&d, x0, x1));
                    }
                }
            }
        }
        cuts.push(b.b);
        cuts
    }

    /// Points of `b` where the function crosses the level `c`.
    pub fn crossings(&self, c: f64, b: Interval) -> Vec<f64> {
        match self {
            Self::PiecewiseConstant { .. } => self.breaks_in(b),
            Self::AnalyticSum(_) => {
                let cuts = self.monotone_cuts(b);
                let g = |x: f64| self.eval(x) - c;
                let mut out = Vec::new();
                for w in cuts.windows(2) {
                    let (lo, hi) = (w[0], w[1]);
                    let glo = if lo == 0.0 { g(lo.max(hi * 1e-300)) } else { g(lo) };
                    let ghi = g(hi);
                    if glo.is_finite() && ghi.is_finite() && glo * ghi < 0.0 {
                        out.push(bisect_root(&g, lo.max(hi * 1e-300), hi));
                    } else if !glo.is_finite() && ghi.is_finite() {
                        // Unbounded at 0: bracket from the left on a geometric scale.
                        let mut x = hi;
                        let sign_hi = ghi.signum();
                        let mut found = None;
                        for _ in 0..1100 {
                            let xn = x * 0.5;
                            if xn <= lo || xn < 1e-300 {
                                break;
                            }
                            let gv = g(xn);
                            if gv.is_finite() && gv.signum() != sign_hi && gv != 0.0 {
                                found = Some(bisect_root(&g, xn, x));
                                break;
                            }
                            x = xn;
                        }
                        out.extend(found);
                    }
                }
                out.extend(cuts[1..cuts.len() - 1].iter().copied());
                out.sort_by(f64::total_cmp);
                out
            }
        }
    }

    /// `{x ∈ b : pred(f(x))}` as an interval set, where `pred` is tested on
    /// each piece between crossings of the levels in `levels`.
    pub fn level_set<P: Fn(f64) -> bool>(&self, b: Interval, levels: &[f64], pred: P) -> IntervalSet {
        let mut cuts = vec![b.a, b.b];
        for &c in levels {
            cuts.extend(self.crossings(c, b));
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut set = IntervalSet::empty();
        for w in cuts.windows(2) {
            if !(w[1] > w[0]) {
                continue;
            }
            let mid = if w[0] == 0.0 { w[1] * 0.5 } else { 0.5 * (w[0] + w[1]) };
            if pred(self.eval(mid)) {
                set.push(Interval { a: w[0], b: w[1] });
            }
        }
        set
    }

    /// `{x ∈ b : f(x) > c}`.
    pub fn superlevel(&self, c: f64, b: Interval) -> IntervalSet {
        self.level_set(b, &[c], |v| v > c)
    }

    /// `{x ∈ b : |f(x) − c| > t}`.
    pub fn exceedance(&self, c: f64, t: f64, b: Interval) -> IntervalSet {
        self.level_set(b, &[c - t, c + t], |v| (v - c).abs() > t)
    }

    /// Range `(min, max)` of the function over `b` (sampled plus cut points).
    pub fn range_on(&self, b: Interval) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        match self {
            Self::PiecewiseConstant { breaks, values } => {
                for (i, &v) in values.iter().enumerate() {
                    if (Interval { a: breaks[i], b: breaks[i + 1] }).intersect(&b).is_some() {
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                }
                if b.a < breaks[0] || b.b > *breaks.last().unwrap() {
                    lo = lo.min(0.0);
                    hi = hi.max(0.0);
                }
            }
            Self::AnalyticSum(_) => {
                let mut pts = self.monotone_cuts(b);
                if pts[0] == 0.0 {
                    pts[0] = b.b * 1e-300;
                }
                for x in pts {
                    let v = self.eval(x);
                    if v.is_finite() {
                        lo = lo.min(v);
                        hi = hi.max(v);
                    } else if v > 0.0 {
                        hi = f64::INFINITY;
                    } else {
                        lo = f64::NEG_INFINITY;
                    }
                }
            }
        }
        (lo, hi)
    }

    /// `∫_b |f − c| dρ`, split exactly at the crossings of `c`.
    pub fn abs_deviation_integral(&self, c: f64, b: Interval, m: &BesselMeasure, against: Against) -> Result<f64> {
        let shifted = self.plus_constant(-c);
        let mut cuts = vec![b.a, b.b];
        cuts.extend(self.crossings(c, b));
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut total = 0.0;
        for w in cuts.windows(2) {
            if !(w[1] > w[0]) {
                continue;
            }
            let piece = Interval { a: w[0], b: w[1] };
            let v = match self {
                Self::PiecewiseConstant { .. } => {
                    let mid = 0.5 * (piece.a + piece.b);
                    (self.eval(mid) - c).abs() * m.mass(against, piece)?
                }
                Self::AnalyticSum(_) => m.integrate(&shifted, piece, against)?.abs(),
            };
            total += v;
        }
        Ok(total)
    }
}

impl FuncExpr {
    /// Pointwise product, when both factors are of the same kind.
    pub fn mul(&self, other: &FuncExpr) -> Result<FuncExpr> {
        match (self, other) {
            (Self::PiecewiseConstant { breaks: bf, .. }, Self::PiecewiseConstant { breaks: bg, .. }) => {
                let mut br: Vec<f64> = bf.iter().chain(bg.iter()).copied().collect();
                br.sort_by(f64::total_cmp);
                br.dedup();
                let vals = br.windows(2).map(|w| {
                    let x = 0.5 * (w[0] + w[1]);
                    self.eval(x) * other.eval(x)
                });
                FuncExpr::piecewise(br.clone(), vals.collect())
            }
            (Self::AnalyticSum(x), Self::AnalyticSum(y)) => {
                let mut out = Vec::with_capacity(x.len() * y.len());
                for s in x {
                    for t in y {
                        out.push(Atom { c: s.c * t.c, alpha: s.alpha + t.alpha, m: s.m + t.m });
                    }
                }
                Ok(FuncExpr::atoms(out))
            }
            _ => Err(Error::Representation("product of an analytic sum and a piecewise constant".into())),
        }
    }
}

/// `∫_b |g| f dρ`, exact: split at the jumps of whichever factor is piecewise
/// constant, or at the sign changes of `g` when both are analytic sums.
pub fn integral_abs_times(g: &FuncExpr, f: &FuncExpr, b: Interval, m: &BesselMeasure, against: Against) -> Result<f64> {
    match (g, f) {
        (_, FuncExpr::PiecewiseConstant { breaks, values }) => {
            let mut s = 0.0;
            for (i, &v) in values.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                if let Some(c) = (Interval { a: breaks[i], b: breaks[i + 1] }).intersect(&b) {
                    s += v * g.abs_deviation_integral(0.0, c, m, against)?;
                }
            }
            Ok(s)
        }
        (FuncExpr::PiecewiseConstant { breaks, values }, _) => {
            let mut s = 0.0;
            for (i, &v) in values.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                if let Some(c) = (Interval { a: breaks[i], b: breaks[i + 1] }).intersect(&b) {
                    s += v.abs() * m.integrate(f, c, against)?;
                }
            }
            Ok(s)
        }
        _ => {
            let prod = g.mul(f)?;
            let mut cuts = vec![b.a, b.b];
            cuts.extend(g.crossings(0.0, b));
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            let mut s = 0.0;
            for w in cuts.windows(2) {
                if !(w[1] > w[0]) {
                    continue;
                }
                let piece = Interval { a: w[0], b: w[1] };
                let mid = if piece.a == 0.0 { 0.5 * piece.b } else { piece.center() };
                let sign = if g.eval(mid) < 0.0 { -1.0 } else { 1.0 };
                s += sign * m.integrate(&prod, piece, against)?;
            }
            Ok(s)
        }
    }
}

/// Sample points covering `b`: geometric when `b` spans several octaves or
/// touches 0, uniform otherwise. Endpoints included (0 replaced by a tiny
/// positive point).
pub fn sample_grid(b: Interval, n: usize) -> Vec<f64> {
    let n = n.max(2);
    let lo = if b.a == 0.0 { b.b * 1e-12 } else { b.a };
    let mut v: Vec<f64> = if b.b / lo > 4.0 {
        let (l0, l1) = (lo.ln(), b.b.ln());
        (0..n).map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()).collect()
    } else {
        (0..n).map(|i| lo + (b.b - lo) * i as f64 / (n - 1) as f64).collect()
    };
    v[0] = lo;
    v[n - 1] = b.b;
    v
}

fn bisect_root<F: Fn(f64) -> f64>(g: &F, mut lo: f64, mut hi: f64) -> f64 {
    let glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm > 0.0) == (glo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A finite union of disjoint intervals, kept sorted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    items: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self { items: Vec::new() }
    }

    pub fn from_interval(i: Interval) -> Self {
        Self { items: vec![i] }
    }

    pub fn from_intervals(mut v: Vec<Interval>) -> Self {
        v.sort_by(|x, y| x.a.total_cmp(&y.a));
        let mut s = Self::empty();
        for i in v {
            s.push(i);
        }
        s
    }

    /// Append an interval lying to the right of (or touching) the current set.
    pub fn push(&mut self, i: Interval) {
        if let Some(last) = self.items.last_mut() {
            if i.a <= last.b {
                last.b = last.b.max(i.b);
                return;
            }
        }
        self.items.push(i);
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.items.iter().map(|i| i.length()).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.items.iter().any(|i| i.contains(x))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut v = self.items.clone();
        v.extend(other.items.iter().copied());
        Self::from_intervals(v)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for x in &self.items {
            for y in &other.items {
                if let Some(z) = x.intersect(y) {
                    out.push(z);
                }
            }
        }
        Self::from_intervals(out)
    }

    pub fn intersect_interval(&self, b: Interval) -> IntervalSet {
        self.intersect(&IntervalSet::from_interval(b))
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for x in &self.items {
            let mut pieces = vec![*x];
            for y in &other.items {
                let mut next = Vec::new();
                for p in pieces {
                    if y.b <= p.a || y.a >= p.b {
                        next.push(p);
                        continue;
                    }
                    if y.a > p.a {
                        next.push(Interval { a: p.a, b: y.a });
                    }
                    if y.b < p.b {
                        next.push(Interval { a: y.b, b: p.b });
                    }
                }
                pieces = next;
            }
            out.extend(pieces);
        }
        Self::from_intervals(out)
    }

    /// Whether two sets share positive length.
    pub fn overlaps(&self, other: &IntervalSet) -> bool {
        !self.intersect(other).is_empty()
    }
}
