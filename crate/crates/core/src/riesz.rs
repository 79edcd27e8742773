//! The Bessel Riesz kernel
//! `K(x,y) = −(2λ/π) ∫_0^π (x − y cos θ) sin^{2λ−1}θ / (x² + y² − 2xy cos θ)^{λ+1} dθ`,
//! off-support application of `R_λ` and `[b, R_λ]`, separated-ball geometry,
//! median splits, and the weak-(1,1) counterexample profile.
//!
//! The θ-integral is taken over `(0, π)`. `K(x,y) < 0` for `x > y`.

use crate::bmo::{median, MassRef};
use crate::error::{Error, Result};
use crate::measure::{Against, BesselMeasure, FuncExpr, Interval, IntervalSet};
use crate::quad::{integrate_pieces, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszKernelEvaluator {
    pub lambda: f64,
    /// Relative tolerance of the θ-quadrature.
    pub rel_tol: f64,
    /// Maximum number of G7/K15 panels per kernel value.
    pub node_budget: usize,
}

impl RieszKernelEvaluator {
    pub const DEFAULT_NODE_BUDGET: usize = 2048;

    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("λ must be positive, got {lambda}")));
        }
        Ok(Self { lambda, rel_tol: 1e-12, node_budget: Self::DEFAULT_NODE_BUDGET })
    }

    pub fn measure(&self) -> BesselMeasure {
        BesselMeasure::new(self.lambda).expect("validated λ")
    }

    pub fn description(&self) -> String {
        format!("Bessel Riesz kernel, λ = {}, θ-integral over (0, π)", self.lambda)
    }

    fn cfg(&self) -> QuadConfig {
        QuadConfig { rel_tol: self.rel_tol, abs_tol: 0.0, max_depth: 60, max_evals: self.node_budget * 15 }
    }

    /// `K(x, y)` by adaptive quadrature.
    pub fn kernel(&self, x: f64, y: f64) -> Result<f64> {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::InvalidArgument(format!("kernel needs x, y > 0, got ({x}, {y})")));
        }
        if x == y {
            return Err(Error::Diagonal(x));
        }
        let lam = self.lambda;
        let e = 2.0 * lam - 1.0;
        let d = x - y;
        let xy = x * y;
        let half = std::f64::consts::FRAC_PI_2;
        // Near side: θ ∈ (0, π/2), where the near-diagonal peak sits at θ ~ δ.
        let near = |th: f64| {
            let s2 = (0.5 * th).sin().powi(2);
            let num = d + 2.0 * y * s2;
            let den = d * d + 4.0 * xy * s2;
            num / den.powf(lam + 1.0)
        };
        // Far side: φ = π − θ ∈ (0, π/2).
        let far = |ph: f64| {
            let c2 = (0.5 * ph).cos().powi(2);
            let num = d + 2.0 * y * c2;
            let den = d * d + 4.0 * xy * c2;
            num / den.powf(lam + 1.0)
        };
        let delta = d.abs() / xy.sqrt();
        let mut pts = vec![0.0];
        let mut t = delta.min(half);
        while t < half {
            pts.push(t);
            t *= 2.0;
        }
        pts.push(half);
        let cfg = self.cfg();
        let (v_near, v_far) = if e < 0.0 {
            // θ = u^{1/(2λ)} absorbs θ^{2λ−1}: sin^{2λ−1}θ dθ = (sinθ/θ)^{2λ−1} du / (2λ).
            let sub = |g: &dyn Fn(f64) -> f64, u: f64| {
                let th = u.powf(1.0 / (2.0 * lam));
                if th == 0.0 {
                    return g(0.0) / (2.0 * lam);
                }
                g(th) * (th.sin() / th).powf(e) / (2.0 * lam)
            };
            let upts: Vec<f64> = pts.iter().map(|p| p.powf(2.0 * lam)).collect();
            let fpts = vec![0.0, half.powf(2.0 * lam)];
            (
                integrate_pieces(|u| sub(&near, u), &upts, &cfg)?.value,
                integrate_pieces(|u| sub(&far, u), &fpts, &cfg)?.value,
            )
        } else {
            (
                integrate_pieces(|th| near(th) * th.sin().powf(e), &pts, &cfg)?.value,
                integrate_pieces(|ph| far(ph) * ph.sin().powf(e), &[0.0, half], &cfg)?.value,
            )
        };
        Ok(-(2.0 * lam / std::f64::consts::PI) * (v_near + v_far))
    }

    /// `∫_F K(x,y) f(y) dμ(y)` for a piecewise-constant `f` with `x` off
    /// the closure of its support.
    pub fn riesz_apply(&self, f: &FuncExpr, x: f64) -> Result<f64> {
        self.off_support(None, f, x)
    }

    /// `[b, R_λ] f(x) = ∫_F (b(x) − b(y)) K(x,y) f(y) dμ(y)` off support.
    pub fn commutator_apply(&self, b: &FuncExpr, f: &FuncExpr, x: f64) -> Result<f64> {
        self.off_support(Some(b), f, x)
    }

    fn off_support(&self, b: Option<&FuncExpr>, f: &FuncExpr, x: f64) -> Result<f64> {
        let FuncExpr::PiecewiseConstant { breaks, values } = f else {
            return Err(Error::Representation("off-support application needs a piecewise-constant f".into()));
        };
        let bx = b.map(|b| b.eval(x));
        let two_l = 2.0 * self.lambda;
        let cfg = QuadConfig::with_rel_tol(1e-10);
        let mut total = 0.0;
        for (i, &v) in values.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            let (a, c) = (breaks[i], breaks[i + 1]);
            if x >= a && x <= c {
                return Err(Error::SupportTouch(x));
            }
            let pts = toward(x, a, c);
            let mut err = None;
            let r = integrate_pieces(
                |y| {
                    let k = match self.kernel(x, y) {
                        Ok(k) => k,
                        Err(e) => {
                            err.get_or_insert(e);
                            return 0.0;
                        }
                    };
                    let osc = match (b, bx) {
                        (Some(b), Some(bx)) => bx - b.eval(y),
                        _ => 1.0,
                    };
                    osc * k * y.powf(two_l)
                },
                &pts,
                &cfg,
            )?;
            if let Some(e) = err {
                return Err(e);
            }
            total += v * r.value;
        }
        Ok(total)
    }

    /// Kernel values on a `samples × samples` midpoint grid over `B × B̃`.
    pub fn lower_bound_check(&self, pair: &SeparatedBallPair, samples: usize) -> Result<LowerBoundCheck> {
        let grid = |i: Interval| (0..samples).map(move |k| i.a + (k as f64 + 0.5) / samples as f64 * i.length());
        let mut pos = 0usize;
        let mut neg = 0usize;
        let mut min_abs = f64::INFINITY;
        for x in grid(pair.b) {
            for y in grid(pair.btilde) {
                let k = self.kernel(x, y)?;
                if k > 0.0 {
                    pos += 1;
                } else if k < 0.0 {
                    neg += 1;
                }
                min_abs = min_abs.min(k.abs());
            }
        }
        let bound = 1.0 / self.measure().mu(pair.btilde);
        Ok(LowerBoundCheck {
            sign_constant: pos == 0 || neg == 0,
            sign: if neg == 0 { 1.0 } else if pos == 0 { -1.0 } else { 0.0 },
            min_abs,
            bound,
        })
    }
}

/// Breakpoints of `[a, c]` refining geometrically toward the outside point `x`.
fn toward(x: f64, a: f64, c: f64) -> Vec<f64> {
    let mut pts = vec![a, c];
    if x > c {
        let mut d = x - c;
        while x - d > a {
            pts.push(x - d);
            d *= 2.0;
        }
    } else if x < a {
        let mut d = a - x;
        while x + d < c {
            pts.push(x + d);
            d *= 2.0;
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `K(x,y)` for λ = 1:
/// `−(2/π) [ ln((x+y)/|x−y|) / (2x²y) + 1/(x(x²−y²)) ]`.
///
/// For `x < y/2` the two terms cancel to leading order; there the bracket is
/// summed as `−(1/(xy²)) Σ_{k≥1} 2k/(2k+1) r^{2k}`, `r = x/y`, which is the
/// same expression expanded through `ln((1+r)/(1−r)) = 2 artanh r`.
pub fn closed_form_lambda1(x: f64, y: f64) -> f64 {
    let c = 2.0 / std::f64::consts::PI;
    if x < 0.5 * y {
        let r = x / y;
        let r2 = r * r;
        let (mut term, mut sum, mut k) = (r2, 0.0, 1.0);
        while term > 1e-18 * sum || sum == 0.0 {
            sum += 2.0 * k / (2.0 * k + 1.0) * term;
            term *= r2;
            k += 1.0;
        }
        return c * sum / (x * y * y);
    }
    let l = (2.0 * x.min(y) / (x - y).abs()).ln_1p();
    -c * (l / (2.0 * x * x * y) + 1.0 / (x * (x - y) * (x + y)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBoundCheck {
    pub sign_constant: bool,
    /// `+1`, `−1`, or `0` when both signs occur.
    pub sign: f64,
    pub min_abs: f64,
    /// `1/μ(B̃)`.
    pub bound: f64,
}

/// Balls `B = B(x0, r)` and `B̃ = B(y0, r)` in `R_+` with
/// `A1 r ≤ |x0 − y0| ≤ A2 r`, `3 ≤ A1 ≤ A2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatedBallPair {
    pub b: Interval,
    pub btilde: Interval,
    pub a1: f64,
    pub a2: f64,
}

impl SeparatedBallPair {
    pub fn new(x0: f64, y0: f64, r: f64, a1: f64, a2: f64) -> Result<Self> {
        if !(a1 >= 3.0 && a2 >= a1) {
            return Err(Error::InvalidArgument(format!("need 3 ≤ A1 ≤ A2, got A1 = {a1}, A2 = {a2}")));
        }
        if !(r > 0.0 && x0 >= r && y0 >= r) {
            return Err(Error::InvalidArgument("balls must lie in R_+".into()));
        }
        let sep = (x0 - y0).abs();
        // Relative slack for separations built by arithmetic on r.
        let slack = 1e-12 * sep.max(r);
        if sep + slack < a1 * r || sep - slack > a2 * r {
            return Err(Error::InvalidArgument(format!("separation {sep} outside [{}, {}]", a1 * r, a2 * r)));
        }
        Ok(Self { b: Interval::new(x0 - r, x0 + r)?, btilde: Interval::new(y0 - r, y0 + r)?, a1, a2 })
    }

    /// The partner ball at separation `A1 r`, placed to the left of `B` when
    /// it fits in `R_+`, to the right otherwise.
    pub fn partner(x0: f64, r: f64, a1: f64, a2: f64) -> Result<Self> {
        let left = x0 - a1 * r;
        let y0 = if left >= r { left } else { x0 + a1 * r };
        Self::new(x0, y0, r, a1, a2)
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        let r = 0.5 * self.b.length() * s;
        Self::new(self.b.center() * s, self.btilde.center() * s, r, self.a1, self.a2)
    }
}

/// `α_b(B̃)` with `F± ⊂ B̃` and `E± ⊂ B`.
#[derive(Debug, Clone, PartialEq)]
pub struct MedianSplit {
    pub alpha: f64,
    /// `{y ∈ B̃ : b(y) ≥ α}`.
    pub f_plus: IntervalSet,
    /// `{y ∈ B̃ : b(y) ≤ α}`.
    pub f_minus: IntervalSet,
    /// `{x ∈ B : b(x) ≥ α}`.
    pub e_plus: IntervalSet,
    /// `{x ∈ B : b(x) < α}`.
    pub e_minus: IntervalSet,
}

pub fn median_split(b: &FuncExpr, pair: &SeparatedBallPair, m: &BesselMeasure) -> Result<MedianSplit> {
    let alpha = median(b, pair.btilde, MassRef::Measure(m))?;
    let bt = pair.btilde;
    Ok(MedianSplit {
        alpha,
        f_plus: b.level_set(bt, &[alpha], |v| v >= alpha),
        f_minus: b.level_set(bt, &[alpha], |v| v <= alpha),
        e_plus: b.level_set(pair.b, &[alpha], |v| v >= alpha),
        e_minus: b.level_set(pair.b, &[alpha], |v| v < alpha),
    })
}

/// `g(x) = ε^{2λ} x^{−(2λ+1)} (log x − log ε)`.
pub fn counterexample_g(lambda: f64, eps: f64, x: f64) -> f64 {
    eps.powf(2.0 * lambda) * x.powf(-(2.0 * lambda + 1.0)) * (x.ln() - eps.ln())
}

/// Left end `e^{1/(2λ+2)}` of the decreasing tail of `g`.
pub fn counterexample_start(lambda: f64) -> f64 {
    (1.0 / (2.0 * lambda + 2.0)).exp()
}

/// `t · μ((x₀, g^{−1}(t)))` for each `t`, with `x₀ = e^{1/(2λ+2)}` and
/// `g^{−1}` by bisection on the decreasing tail. Zero when `t ≥ g(x₀)`.
pub fn counterexample_profile(lambda: f64, eps: f64, t_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if !(lambda > 0.0 && eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("need λ > 0 and 0 < ε < 1, got λ = {lambda}, ε = {eps}")));
    }
    let m = BesselMeasure::new(lambda)?;
    let x0 = counterexample_start(lambda);
    let g = |x: f64| counterexample_g(lambda, eps, x);
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
        }
        if t >= g(x0) {
            out.push((t, 0.0));
            continue;
        }
        let (mut lo, mut hi) = (x0, 2.0 * x0);
        while g(hi) > t {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::Bisection(format!("no bracket for g^(-1)({t})")));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) > t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push((t, t * m.mu(Interval { a: x0, b: lo })));
    }
    Ok(out)
}

/// `{x ∈ [grid₀, grid_last] : h(x) > t}` located on `grid` and refined by
/// bisection at every sign change of `h − t` between neighbours.
pub fn exceedance_on_grid<H: Fn(f64) -> Result<f64>>(h: &H, grid: &[f64], values: &[f64], t: f64) -> Result<IntervalSet> {
    let mut set = IntervalSet::empty();
    let mut start: Option<f64> = if values[0] > t { Some(grid[0]) } else { None };
    for i in 1..grid.len() {
        let (above_prev, above) = (values[i - 1] > t, values[i] > t);
        if above_prev != above {
            let (mut lo, mut hi) = (grid[i - 1], grid[i]);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if (h(mid)? > t) == above_prev {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let cut = 0.5 * (lo + hi);
            if above {
                start = Some(cut);
            } else if let Some(s) = start.take() {
                set.push(Interval { a: s, b: cut });
            }
        }
    }
    if let Some(s) = start {
        set.push(Interval { a: s, b: *grid.last().unwrap() });
    }
    Ok(set)
}

/// `t · μ({x ∈ grid range : |h(x)| > t})` from samples, for each `t`.
pub fn sampled_mass_product(grid: &[f64], values: &[f64], t_grid: &[f64], m: &BesselMeasure) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let mut mass = 0.0;
        for i in 1..grid.len() {
            let v = 0.5 * (values[i - 1].abs() + values[i].abs());
            if v > t {
                mass += m.mass(Against::Dmu, Interval { a: grid[i - 1], b: grid[i] })?;
            }
        }
        out.push((t, t * mass));
    }
    Ok(out)
}
