//! Young functions, Luxemburg norms, complementary functions, the endpoint
//! constants `C_φ`, `K_φ` and the Orlicz maximal operator.
//!
//! Every Young function also evaluates in the log domain,
//! `ξ ↦ ln φ(e^ξ)`, so inverses of astronomically large arguments (such as
//! `32^{2^k}`) and the tail of `C_φ` never overflow.

use std::fmt;

use crate::error::{Error, Result};
use crate::measure::{Against, BesselMeasure, FuncExpr, Interval};
use crate::quad::{self, QuadConfig};
use crate::weights::IntervalFamily;

#[derive(Debug, Clone, PartialEq)]
pub enum YoungFunction {
    /// `t`
    Id,
    /// `t log^ε(e + t)`, `0 < ε ≤ 1`
    LLogL { eps: f64 },
    /// `t^p / p`, `p > 1`
    Power { p: f64 },
    /// `e^t − 1`
    ExpM1,
    /// `outer(inner(t))`, no renormalization.
    Composed(Box<YoungFunction>, Box<YoungFunction>),
    /// `sup_t (s t − φ(t))`, evaluated numerically.
    Complementary(Box<YoungFunction>),
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Id => write!(f, "t"),
            Self::LLogL { eps } => write!(f, "t*log^{eps}(e+t)"),
            Self::Power { p } => write!(f, "t^{p}/{p}"),
            Self::ExpM1 => write!(f, "exp(t)-1"),
            Self::Composed(o, i) => write!(f, "({o})∘({i})"),
            Self::Complementary(p) => write!(f, "conj({p})"),
        }
    }
}

/// `ln(e + e^ξ)` without overflow.
fn ln_e_plus_exp(xi: f64) -> f64 {
    if xi > 1.0 {
        xi + (1.0 - xi).exp().ln_1p()
    } else {
        (std::f64::consts::E + xi.exp()).ln()
    }
}

const LN_MIN: f64 = -745.0;
const LN_MAX: f64 = 709.0;

impl YoungFunction {
    pub fn llogl(eps: f64) -> Result<Self> {
        let f = Self::LLogL { eps };
        f.validate()?;
        Ok(f)
    }

    pub fn power(p: f64) -> Result<Self> {
        let f = Self::Power { p };
        f.validate()?;
        Ok(f)
    }

    pub fn composed(outer: YoungFunction, inner: YoungFunction) -> Self {
        Self::Composed(Box::new(outer), Box::new(inner))
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            Self::Id => t,
            Self::LLogL { eps } => t * (std::f64::consts::E + t).ln().powf(*eps),
            Self::Power { p } => t.powf(*p) / p,
            Self::ExpM1 => t.exp_m1(),
            Self::Composed(o, i) => o.eval(i.eval(t)),
            Self::Complementary(inner) => conjugate_sup(inner, t),
        }
    }

    /// `ln φ(e^ξ)`.
    pub fn ln_eval_exp(&self, xi: f64) -> f64 {
        match self {
            Self::ExpM1 => {
                if xi < LN_MIN {
                    return xi;
                }
                let t = xi.exp();
                if t < 1e-5 {
                    xi + (t * (0.5 + t / 6.0)).ln_1p()
                } else if t > 30.0 {
                    t + (-(-t).exp()).ln_1p()
                } else {
                    t.exp_m1().ln()
                }
            }
            Self::Complementary(_) => {
                if xi > LN_MAX {
                    f64::INFINITY
                } else {
                    self.eval(xi.exp()).ln()
                }
            }
            _ => xi + self.ln_excess(xi),
        }
    }

    /// `h(ξ) = ln φ(e^ξ) − ξ`, computed without cancellation for the
    /// built-in families.
    pub fn ln_excess(&self, xi: f64) -> f64 {
        match self {
            Self::Id => 0.0,
            Self::LLogL { eps } => eps * ln_e_plus_exp(xi).ln(),
            Self::Power { p } => (p - 1.0) * xi - p.ln(),
            Self::ExpM1 => {
                if xi < LN_MIN {
                    0.0
                } else if xi.exp() < 1e-5 {
                    let t = xi.exp();
                    (t * (0.5 + t / 6.0)).ln_1p()
                } else {
                    self.ln_eval_exp(xi) - xi
                }
            }
            Self::Composed(o, i) => {
                let hi = i.ln_excess(xi);
                hi + o.ln_excess(xi + hi)
            }
            Self::Complementary(_) => self.ln_eval_exp(xi) - xi,
        }
    }

    /// `δ(u) = ln φ^{-1}(e^u) − u`, the root of `δ + h(u + δ) = 0`
    /// (increasing in δ), by bracketing and bisection.
    pub fn ln_inverse_excess(&self, u: f64) -> Result<f64> {
        let g = |d: f64| d + self.ln_excess(u + d);
        let (mut lo, mut hi) = (0.0f64, 0.0f64);
        let mut step = 1.0;
        let start = g(0.0);
        if start == 0.0 {
            return Ok(0.0);
        }
        if start < 0.0 {
            while g(hi) < 0.0 {
                lo = hi;
                hi += step;
                step *= 2.0;
                if !step.is_finite() {
                    return Err(Error::Bisection(format!("no upper bracket for {self}^-1 at ln y = {u}")));
                }
            }
        } else {
            while !(g(lo) < 0.0) {
                hi = lo;
                lo -= step;
                step *= 2.0;
                if !step.is_finite() {
                    return Err(Error::Bisection(format!("no lower bracket for {self}^-1 at ln y = {u}")));
                }
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `ln φ^{-1}(e^u)`.
    pub fn ln_inverse_exp(&self, u: f64) -> Result<f64> {
        Ok(u + self.ln_inverse_excess(u)?)
    }

    /// `φ^{-1}(y)`; 0 at 0.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        if let Self::Id = self {
            return Ok(y);
        }
        Ok(self.ln_inverse_exp(y.ln())?.exp())
    }

    /// Structural checks plus midpoint convexity on a log grid.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::LLogL { eps } if !(*eps > 0.0 && *eps <= 1.0) => {
                return Err(Error::InvalidArgument(format!("LlogL exponent must lie in (0,1], got {eps}")));
            }
            Self::Power { p } if !(*p > 1.0 && p.is_finite()) => {
                return Err(Error::InvalidArgument(format!("power Young function needs p > 1, got {p}")));
            }
            Self::Composed(o, i) => {
                o.validate()?;
                i.validate()?;
            }
            Self::Complementary(i) => i.validate()?,
            _ => {}
        }
        let grid = log_grid(1e-6, 1e6, 241);
        for (i, &a) in grid.iter().enumerate() {
            for &b in grid.iter().skip(i + 1).step_by(5).take(4) {
                let (fa, fb) = (self.eval(a), self.eval(b));
                if !fb.is_finite() {
                    continue;
                }
                let mid = self.eval(0.5 * (a + b));
                if mid > 0.5 * (fa + fb) * (1.0 + 1e-10) + 1e-300 {
                    return Err(Error::InvalidArgument(format!("{self} fails midpoint convexity on [{a}, {b}]")));
                }
            }
        }
        Ok(())
    }

    /// `max φ(4t)/φ(t)` over a log grid on `[1e-6, 1e6]`; `+∞` when some
    /// ratio overflows.
    pub fn gamma_doubling(&self) -> f64 {
        log_grid(1e-6, 1e6, 241)
            .into_iter()
            .map(|t| {
                let r = (self.ln_eval_exp((4.0 * t).ln()) - self.ln_eval_exp(t.ln())).exp();
                if r.is_nan() {
                    f64::INFINITY
                } else {
                    r
                }
            })
            .fold(1.0, f64::max)
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n).map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// `sup_{t ≥ 0} (s t − φ(t))` by golden-section search over `ln t`; the
/// inner map is concave in `t`, hence unimodal in `ln t`.
fn conjugate_sup(phi: &YoungFunction, s: f64) -> f64 {
    let g = |xi: f64| {
        let t = xi.exp();
        s * t - phi.eval(t)
    };
    let invphi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (LN_MIN, LN_MAX);
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..300 {
        if !(gd.is_finite()) || gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - invphi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + invphi * (b - a);
            gd = g(d);
        }
        if b - a < 1e-13 * (1.0 + a.abs()) {
            break;
        }
    }
    g(0.5 * (a + b)).max(gc.max(0.0))
}

/// `φ̄`; linear `φ` has no finite complementary.
pub fn complementary(phi: &YoungFunction) -> Result<YoungFunction> {
    if matches!(phi, YoungFunction::Id) {
        return Err(Error::UnboundedComplementary);
    }
    // Superlinearity: ln(φ(t)/t) must keep growing.
    if !(phi.ln_excess(700.0) - phi.ln_excess(350.0) > 1e-3) {
        return Err(Error::UnboundedComplementary);
    }
    Ok(YoungFunction::Complementary(Box::new(phi.clone())))
}

/// `φ̄^{-1}(y)`.
pub fn complementary_inverse(phi: &YoungFunction, y: f64) -> Result<f64> {
    complementary(phi)?.inverse(y)
}

/// `(1/μ(B)) ∫_B φ(|f|/s) dμ`.
fn young_mean(f: &FuncExpr, phi: &YoungFunction, s: f64, b: Interval, m: &BesselMeasure) -> Result<f64> {
    Ok(young_integral(f, phi, 1.0 / s, b, m)? / m.mu(b))
}

/// `∫_B φ(scale·|f|) dμ`; `+∞` when the integral diverges.
pub fn young_integral(f: &FuncExpr, phi: &YoungFunction, scale: f64, b: Interval, m: &BesselMeasure) -> Result<f64> {
    match f {
        FuncExpr::PiecewiseConstant { breaks, values } => {
            let mut s = 0.0;
            for (i, &v) in values.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                if let Some(c) = (Interval { a: breaks[i], b: breaks[i + 1] }).intersect(&b) {
                    s += phi.eval(scale * v.abs()) * m.mu(c);
                }
            }
            Ok(s)
        }
        FuncExpr::AnalyticSum(_) => {
            let cuts = f.crossings(0.0, b);
            let cfg = QuadConfig::with_rel_tol(1e-11);
            match m.integrate_fn(|x| phi.eval(scale * f.eval(x).abs()), b, Against::Dmu, &cuts, &cfg) {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(_) | Err(Error::Divergence(_)) => Ok(f64::INFINITY),
                Err(e) => Err(e),
            }
        }
    }
}

/// Luxemburg norm `‖f‖_{φ,B} = inf{s > 0 : (1/μ(B)) ∫_B φ(|f|/s) dμ ≤ 1}`.
///
/// Bisection in `ln s` to relative tolerance 1e-12. For `φ = Id` the norm is
/// the μ-average of `|f|`, returned exactly.
pub fn luxemburg_norm(f: &FuncExpr, phi: &YoungFunction, b: Interval, m: &BesselMeasure) -> Result<f64> {
    let avg = f.abs_deviation_integral(0.0, b, m, Against::Dmu)? / m.mu(b);
    if matches!(phi, YoungFunction::Id) || avg == 0.0 {
        return Ok(avg);
    }
    // Jensen: the mean at s = avg/φ^{-1}(1) is at least 1.
    let mut lo = avg / phi.inverse(1.0)?;
    let mut hi = lo;
    let mut steps = 0;
    while young_mean(f, phi, hi, b, m)? > 1.0 {
        lo = hi;
        hi *= 2.0;
        steps += 1;
        if steps > 200 {
            return Err(Error::Bisection("Luxemburg norm: no upper bracket".into()));
        }
    }
    for _ in 0..200 {
        if hi / lo - 1.0 < 1e-12 {
            return Ok(hi);
        }
        let mid = (lo * hi).sqrt();
        if young_mean(f, phi, mid, b, m)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Nonconvergence { achieved: hi / lo - 1.0 })
}

/// Both sides of `‖fg‖_{C,Q} ≤ 2 κ ‖f‖_{A,Q} ‖g‖_{B,Q}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// `max A^{-1}B^{-1}/C^{-1}` on the check grid, floored at 1.
    pub kappa: f64,
}

/// `max_t A^{-1}(t) B^{-1}(t) / C^{-1}(t)` over `t ∈ [1e-12, 1e12]` and the
/// grid point attaining it.
pub fn holder_precondition_ratio(a: &YoungFunction, bf: &YoungFunction, c: &YoungFunction) -> Result<(f64, f64)> {
    let mut worst = (0.0, f64::NEG_INFINITY);
    for t in log_grid(1e-12, 1e12, 481) {
        let lt = t.ln();
        let r = lt + a.ln_inverse_excess(lt)? + bf.ln_inverse_excess(lt)? - c.ln_inverse_excess(lt)?;
        if r > worst.1 {
            worst = (t, r);
        }
    }
    Ok((worst.0, worst.1.exp()))
}

/// The Orlicz Hölder inequality with its literal constant 2. Fails with a
/// precondition error naming the worst grid point when
/// `A^{-1}B^{-1} ≤ C^{-1}` is violated there.
pub fn holder_orlicz_check(
    f: &FuncExpr,
    g: &FuncExpr,
    a: &YoungFunction,
    bf: &YoungFunction,
    c: &YoungFunction,
    q: Interval,
    m: &BesselMeasure,
) -> Result<HolderCheck> {
    let (t, ratio) = holder_precondition_ratio(a, bf, c)?;
    if ratio > 1.0 + 1e-9 {
        return Err(Error::Precondition { t, ratio });
    }
    holder_with_kappa(f, g, a, bf, c, q, m, 1.0)
}

/// As [`holder_orlicz_check`], but with `C^{-1}` replaced by `κ C^{-1}`
/// (κ the grid maximum of the precondition ratio). Replacing `C` by
/// `C(·/κ)` turns the inequality into `‖fg‖_C ≤ 2κ ‖f‖_A ‖g‖_B`.
pub fn holder_orlicz_check_scaled(
    f: &FuncExpr,
    g: &FuncExpr,
    a: &YoungFunction,
    bf: &YoungFunction,
    c: &YoungFunction,
    q: Interval,
    m: &BesselMeasure,
) -> Result<HolderCheck> {
    let (_, ratio) = holder_precondition_ratio(a, bf, c)?;
    holder_with_kappa(f, g, a, bf, c, q, m, ratio.max(1.0))
}

#[allow(clippy::too_many_arguments)]
fn holder_with_kappa(
    f: &FuncExpr,
    g: &FuncExpr,
    a: &YoungFunction,
    bf: &YoungFunction,
    c: &YoungFunction,
    q: Interval,
    m: &BesselMeasure,
    kappa: f64,
) -> Result<HolderCheck> {
    let fg = f.mul(g)?;
    let lhs = luxemburg_norm(&fg, c, q, m)?;
    let rhs = 2.0 * kappa * luxemburg_norm(f, a, q, m)? * luxemburg_norm(g, bf, q, m)?;
    Ok(HolderCheck { lhs, rhs, kappa })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CPhiReport {
    /// `+∞` when declared divergent.
    pub value: f64,
    /// Quadrature up to the truncation point.
    pub partial: f64,
    /// Tail estimate beyond the truncation point (`+∞` if non-decaying).
    pub tail: f64,
}

impl CPhiReport {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

/// Declared divergent once partial integral plus tail exceeds this.
pub const C_PHI_DIVERGENCE_BOUND: f64 = 1e6;

/// `C_φ = ∫_1^∞ φ^{-1}(t) / (t² log(e+t)) dt`.
///
/// With `t = e^u` and `δ(u) = ln φ^{-1}(e^u) − u` the integrand becomes
/// `e^{δ(u)} / ln(e + e^u) du`. This is integrated on `u ∈ [0, 27.6]`
/// (`t ≤ 10^{12}`), then in `v = ln u` up to `v = 700`. Beyond that the
/// integrand in `v` is fitted by `e^{-κv}` over the last unit of `v`; `κ ≤ 0`
/// means no decay and the answer is `+∞`.
pub fn c_phi(phi: &YoungFunction) -> Result<CPhiReport> {
    let cfg = QuadConfig::with_rel_tol(1e-12);
    // ln of the integrand in u.
    let ln_du = |u: f64| -> f64 {
        match phi.ln_inverse_excess(u) {
            Ok(d) => d - ln_e_plus_exp(u).ln(),
            Err(_) => f64::NAN,
        }
    };
    let u1 = 1e12f64.ln();
    let mut partial = quad::integrate(|u| ln_du(u).exp(), 0.0, u1, &cfg)?.value;
    let dv = |v: f64| (v + ln_du(v.exp())).exp();
    let (v0, v1) = (u1.ln(), 700.0);
    let mut pts = vec![v0];
    let mut v = v0.ceil();
    while v < v1 {
        pts.push(v);
        v += 10.0;
    }
    pts.push(v1);
    partial += quad::integrate_pieces(dv, &pts, &cfg)?.value;
    let (i1, i0) = (dv(v1), dv(v1 - 1.0));
    let kappa = (i0 / i1).ln();
    let tail = if i1 == 0.0 {
        0.0
    } else if kappa > 1e-9 {
        i1 / kappa
    } else {
        f64::INFINITY
    };
    let total = partial + tail;
    let value = if total > C_PHI_DIVERGENCE_BOUND || !total.is_finite() { f64::INFINITY } else { total };
    Ok(CPhiReport { value, partial, tail })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KPhiReport {
    /// Upper certificate: exact partial sum plus the tail upper bound.
    pub value: f64,
    /// Exact terms `k / φ̄^{-1}(base^{2^k})`, `k = 1..`.
    pub terms: Vec<f64>,
    pub partial: f64,
    pub tail_lower: f64,
    pub tail_upper: f64,
    /// No finite complementary (`φ` linear).
    pub unbounded: bool,
}

/// `K_φ = Σ_{k≥1} k / φ̄^{-1}(base^{2^k})`.
///
/// Terms are evaluated exactly while `base^{2^k} ≤ 10^{300}` and `k ≤ k_max`.
/// The remaining terms are bracketed with `t ≤ φ̄^{-1}(t) φ^{-1}(t) ≤ 2t`,
/// i.e. `k φ^{-1}(y)/(2y) ≤ term ≤ k φ^{-1}(y)/y`, evaluated in the log
/// domain, summed until negligible and closed by a geometric remainder.
pub fn k_phi(phi: &YoungFunction, base: f64, k_max: u32) -> Result<KPhiReport> {
    if !(base > 1.0) {
        return Err(Error::InvalidArgument(format!("base must exceed 1, got {base}")));
    }
    let conj = match complementary(phi) {
        Ok(c) => c,
        Err(Error::UnboundedComplementary) => {
            return Ok(KPhiReport {
                value: f64::INFINITY,
                terms: Vec::new(),
                partial: f64::INFINITY,
                tail_lower: f64::INFINITY,
                tail_upper: f64::INFINITY,
                unbounded: true,
            })
        }
        Err(e) => return Err(e),
    };
    let ln_base = base.ln();
    let mut terms = Vec::new();
    let mut k = 1u32;
    while k <= k_max && 2f64.powi(k as i32) * ln_base <= 300.0 * std::f64::consts::LN_10 {
        let y = base.powf(2f64.powi(k as i32));
        terms.push(k as f64 / conj.inverse(y)?);
        k += 1;
    }
    let partial: f64 = terms.iter().sum();
    let mut upper = 0.0;
    let mut lower = 0.0;
    let mut prev: Option<f64> = None;
    loop {
        let ln_y = 2f64.powi(k as i32) * ln_base;
        if !ln_y.is_finite() {
            break;
        }
        let t = (k as f64).ln() + phi.ln_inverse_excess(ln_y)?;
        let term = t.exp();
        upper += term;
        lower += 0.5 * term;
        if let Some(p) = prev {
            let q = term / p;
            if term < 1e-17 * (partial + upper) && q < 0.9 {
                let rem = term * q / (1.0 - q);
                upper += rem;
                break;
            }
        }
        prev = Some(term);
        k += 1;
        if k > 1000 {
            upper = f64::INFINITY;
            break;
        }
    }
    Ok(KPhiReport {
        value: partial + upper,
        terms,
        partial,
        tail_lower: lower,
        tail_upper: upper,
        unbounded: false,
    })
}

/// `max_{B ∈ family, B ∋ x} ‖h‖_{φ,B}`, a lower bound for `M_φ h(x)`.
pub fn orlicz_maximal(h: &FuncExpr, phi: &YoungFunction, x: f64, family: &IntervalFamily, m: &BesselMeasure) -> Result<f64> {
    let mut best: Option<f64> = None;
    for b in family.intervals.iter().filter(|b| b.contains(x)) {
        let v = luxemburg_norm(h, phi, *b, m)?;
        best = Some(best.map_or(v, |c: f64| c.max(v)));
    }
    best.ok_or(Error::EmptyFamily)
}

/// The exponential-integrability constant
/// `C_s = 1 + e·(A^{-1}|s|‖b‖)/(1 − A^{-1}|s|‖b‖)`; `None` when
/// `A^{-1}|s|‖b‖ ≥ 1`.
pub fn john_nirenberg_constant(s: f64, bmo_norm: f64, a_const: f64) -> Option<f64> {
    let r = s.abs() * bmo_norm / a_const;
    (r < 1.0).then(|| 1.0 + std::f64::consts::E * r / (1.0 - r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lambda0() -> BesselMeasure {
        BesselMeasure::lebesgue()
    }

    #[test]
    fn constant_norm_is_c_over_inverse_at_one() {
        let i = Interval::new(0.5, 2.0).unwrap();
        let m = BesselMeasure::new(1.0).unwrap();
        for phi in [YoungFunction::Id, YoungFunction::LLogL { eps: 1.0 }, YoungFunction::Power { p: 3.0 }, YoungFunction::ExpM1] {
            let n = luxemburg_norm(&FuncExpr::constant(2.5), &phi, i, &m).unwrap();
            let want = 2.5 / phi.inverse(1.0).unwrap();
            assert!((n / want - 1.0).abs() < 1e-9, "{phi}: {n} vs {want}");
        }
    }

    #[test]
    fn id_norm_is_average() {
        let f = FuncExpr::indicator(Interval::new(0.0, 0.5).unwrap());
        let n = luxemburg_norm(&f, &YoungFunction::Id, Interval::new(0.0, 1.0).unwrap(), &lambda0()).unwrap();
        assert_eq!(n, 0.5);
    }

    #[test]
    fn inverse_in_log_domain() {
        let p = YoungFunction::Power { p: 2.0 };
        assert!((p.inverse(8.0).unwrap() - 4.0).abs() < 1e-12);
        let e = YoungFunction::ExpM1;
        assert!((e.inverse(1e300).unwrap() - (1e300f64).ln_1p()).abs() < 1e-9);
        let l = YoungFunction::LLogL { eps: 1.0 };
        let t = l.inverse(1e250).unwrap();
        assert!((l.ln_eval_exp(t.ln()) - 1e250f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn complementary_of_power_pair() {
        let p = 3.0;
        let q = p / (p - 1.0);
        let c = complementary(&YoungFunction::Power { p }).unwrap();
        for s in [0.1f64, 0.7, 1.0, 3.0, 25.0] {
            let want = s.powf(q) / q;
            assert!((c.eval(s) / want - 1.0).abs() < 1e-10, "s={s}");
        }
        assert!(matches!(complementary(&YoungFunction::Id), Err(Error::UnboundedComplementary)));
    }

    #[test]
    fn builtins_validate() {
        for phi in [
            YoungFunction::Id,
            YoungFunction::LLogL { eps: 0.5 },
            YoungFunction::LLogL { eps: 1.0 },
            YoungFunction::Power { p: 1.5 },
            YoungFunction::ExpM1,
            YoungFunction::composed(YoungFunction::LLogL { eps: 1.0 }, YoungFunction::LLogL { eps: 1.0 }),
        ] {
            phi.validate().unwrap();
        }
        assert!(YoungFunction::llogl(1.5).is_err());
        assert!(YoungFunction::power(1.0).is_err());
    }

    #[test]
    fn doubling_constants() {
        assert!((YoungFunction::Id.gamma_doubling() - 4.0).abs() < 1e-12);
        let g = YoungFunction::LLogL { eps: 1.0 }.gamma_doubling();
        assert!(g > 4.0 && g <= 16.0, "{g}");
        assert!((YoungFunction::Power { p: 2.0 }.gamma_doubling() - 16.0).abs() < 1e-9);
    }

    #[test]
    fn john_nirenberg_threshold() {
        assert!(john_nirenberg_constant(1.0, 1.0, 1.0).is_none());
        let c = john_nirenberg_constant(0.5, 1.0, 1.0).unwrap();
        assert!((c - (1.0 + std::f64::consts::E)).abs() < 1e-15);
    }
}
