//! Sparse operators, sparse commutators and their adjoints, weighted dyadic
//! maximal functions, and certified lower bounds for `L^p(w dx)` operator
//! norms.
//!
//! On the arrangement of cube endpoints ("cells"), `A_S` and `A*_{S,b}` map
//! cell-constant functions to cell-constant functions, so both act exactly
//! as nonnegative matrices there. Their restricted `ℓ^p` norms are computed
//! by Boyd's nonlinear power iteration; every reported value is the exact
//! ratio `‖Tf‖/‖f‖` of a stored witness and hence a lower bound of the true
//! norm.

use crate::bmo::mu_average;
use crate::dyadic::{cz_stopping, DyadicCube, SparseFamily};
use crate::error::{Error, Result};
use crate::measure::{integral_abs_times, Against, BesselMeasure, FuncExpr, Interval};
use crate::quad::QuadConfig;
use crate::weights::{dual_weight, Weight};

const LEBESGUE: BesselMeasure = BesselMeasure::lebesgue();

/// Sorted distinct endpoints of the family's cubes.
fn cube_breaks(cubes: &[DyadicCube]) -> Vec<f64> {
    let mut br: Vec<f64> = cubes.iter().flat_map(|q| {
        let i = q.interval();
        [i.a, i.b]
    }).collect();
    br.sort_by(f64::total_cmp);
    br.dedup();
    br
}

/// Index range `[lo, hi)` of the cells of `breaks` covering `q`.
fn cell_range(breaks: &[f64], q: Interval) -> (usize, usize) {
    let lo = breaks.partition_point(|&x| x < q.a);
    let hi = breaks.partition_point(|&x| x < q.b);
    (lo, hi)
}

/// `A_S f = Σ_Q ⟨f⟩_Q χ_Q` with μ-averages, as a piecewise constant on the
/// cube arrangement.
pub fn sparse_apply(s: &SparseFamily, f: &FuncExpr, m: &BesselMeasure) -> Result<FuncExpr> {
    if s.cubes.is_empty() {
        return Ok(FuncExpr::constant(0.0));
    }
    let breaks = cube_breaks(&s.cubes);
    let mut vals = vec![0.0; breaks.len() - 1];
    for q in &s.cubes {
        let qi = q.interval();
        let avg = mu_average(f, qi, m)?;
        let (lo, hi) = cell_range(&breaks, qi);
        for v in &mut vals[lo..hi] {
            *v += avg;
        }
    }
    FuncExpr::piecewise(breaks, vals)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommutatorVariant {
    /// `Σ_Q |b(x) − b_Q| ⟨f⟩_Q χ_Q(x)`
    Left,
    /// `Σ_Q (1/μ(Q)) ∫_Q |b − b_Q| f dμ · χ_Q(x)`
    Adjoint,
}

/// Output of the left sparse commutator, `x ↦ Σ_{Q∋x} c_Q |b(x) − b_Q|`,
/// evaluated exactly at any point.
#[derive(Debug, Clone, PartialEq)]
pub struct LeftCommutator {
    pub b: FuncExpr,
    /// `(Q, b_Q, c_Q = ⟨f⟩_Q)`.
    pub terms: Vec<(Interval, f64, f64)>,
}

impl LeftCommutator {
    pub fn eval(&self, x: f64) -> f64 {
        let bx = self.b.eval(x);
        self.terms.iter().filter(|t| t.0.contains(x)).map(|&(_, bq, c)| c * (bx - bq).abs()).sum()
    }

    /// Breakpoints: cube endpoints and the crossings `b = b_Q` inside each cube.
    fn breaks(&self) -> Vec<f64> {
        let mut br: Vec<f64> = Vec::new();
        for &(q, bq, _) in &self.terms {
            br.push(q.a);
            br.push(q.b);
            br.extend(self.b.crossings(bq, q));
        }
        br.sort_by(f64::total_cmp);
        br.dedup();
        br
    }

    /// `∫ |Tf|^p w dx` over the union of the cubes, by adaptive quadrature
    /// between breakpoints.
    pub fn lp_norm_pow(&self, p: f64, w: &Weight) -> Result<f64> {
        let br = self.breaks();
        if br.len() < 2 {
            return Ok(0.0);
        }
        let cfg = QuadConfig::with_rel_tol(1e-11);
        let h = |x: f64| self.eval(x).abs().powf(p) * w.eval(x);
        if br[0] == 0.0 {
            if let Some(near_zero) = self.near_zero_pow(p, w, br[1], &cfg)? {
                if br.len() == 2 {
                    return Ok(near_zero);
                }
                let span = Interval::new(br[1], *br.last().unwrap())?;
                return Ok(near_zero + LEBESGUE.integrate_fn(h, span, Against::Dx, &br, &cfg)?);
            }
        }
        let span = Interval::new(br[0], *br.last().unwrap())?;
        LEBESGUE.integrate_fn(h, span, Against::Dx, &br, &cfg)
    }

    /// `∫_0^{x1} |Tf|^p w dx` when `b = c₁ ln x + c₀` and `w` is a sum of powers,
    /// in the variable `u = −ln x`. Near 0 the integrand can decay too slowly
    /// for halving toward 0 to reach the tolerance. `None` for other `b`, `w`.
    fn near_zero_pow(&self, p: f64, w: &Weight, x1: f64, cfg: &QuadConfig) -> Result<Option<f64>> {
        let (FuncExpr::AnalyticSum(b), FuncExpr::AnalyticSum(wa)) = (&self.b, &w.expr) else {
            return Ok(None);
        };
        if b.iter().any(|a| a.alpha != 0.0 || a.m > 1) || wa.iter().any(|a| a.m != 0) || wa.is_empty() {
            return Ok(None);
        }
        let c1: f64 = b.iter().filter(|a| a.m == 1).map(|a| a.c).sum();
        let c0: f64 = b.iter().filter(|a| a.m == 0).map(|a| a.c).sum();
        let active: Vec<(f64, f64)> = self.terms.iter().filter(|t| t.0.a == 0.0).map(|&(_, bq, c)| (bq, c)).collect();
        let u1 = -x1.ln();
        let rate = wa.iter().map(|a| a.alpha).fold(f64::INFINITY, f64::min) + 1.0;
        let g = |t: f64| {
            let u = u1 + t;
            let bx = c0 - c1 * u;
            let tf: f64 = active.iter().map(|&(bq, c)| c * (bx - bq).abs()).sum();
            if tf == 0.0 {
                return 0.0;
            }
            let wx: f64 = wa.iter().map(|a| a.c * (-(a.alpha + 1.0) * u).exp()).sum();
            tf.abs().powf(p) * wx
        };
        Ok(Some(crate::quad::integrate_exp_tail(g, rate, cfg)?.value))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorOutput {
    Piecewise(FuncExpr),
    Left(LeftCommutator),
}

impl OperatorOutput {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Piecewise(f) => f.eval(x),
            Self::Left(l) => l.eval(x),
        }
    }

    pub fn sample(&self, grid: &[f64]) -> Vec<f64> {
        grid.iter().map(|&x| self.eval(x)).collect()
    }

    /// `‖·‖_{L^p(w dx)}`.
    pub fn lp_norm(&self, p: f64, w: &Weight) -> Result<f64> {
        match self {
            Self::Piecewise(f) => lp_norm(f, p, w),
            Self::Left(l) => Ok(l.lp_norm_pow(p, w)?.powf(1.0 / p)),
        }
    }
}

pub fn sparse_commutator_apply(
    s: &SparseFamily,
    b: &FuncExpr,
    f: &FuncExpr,
    m: &BesselMeasure,
    variant: CommutatorVariant,
) -> Result<OperatorOutput> {
    match variant {
        CommutatorVariant::Left => {
            let mut terms = Vec::with_capacity(s.cubes.len());
            for q in &s.cubes {
                let qi = q.interval();
                terms.push((qi, mu_average(b, qi, m)?, mu_average(f, qi, m)?));
            }
            Ok(OperatorOutput::Left(LeftCommutator { b: b.clone(), terms }))
        }
        CommutatorVariant::Adjoint => {
            if s.cubes.is_empty() {
                return Ok(OperatorOutput::Piecewise(FuncExpr::constant(0.0)));
            }
            let breaks = cube_breaks(&s.cubes);
            let mut vals = vec![0.0; breaks.len() - 1];
            for q in &s.cubes {
                let qi = q.interval();
                let bq = mu_average(b, qi, m)?;
                let v = integral_abs_times(&b.plus_constant(-bq), f, qi, m, Against::Dmu)? / m.mu(qi);
                let (lo, hi) = cell_range(&breaks, qi);
                for x in &mut vals[lo..hi] {
                    *x += v;
                }
            }
            Ok(OperatorOutput::Piecewise(FuncExpr::piecewise(breaks, vals)?))
        }
    }
}

/// `‖f‖_{L^p(w dx)}` for a piecewise-constant `f`.
pub fn lp_norm(f: &FuncExpr, p: f64, w: &Weight) -> Result<f64> {
    match f {
        FuncExpr::PiecewiseConstant { breaks, values } => {
            let mut s = 0.0;
            for (i, &v) in values.iter().enumerate() {
                if v != 0.0 {
                    s += v.abs().powf(p) * LEBESGUE.integrate(&w.expr, Interval { a: breaks[i], b: breaks[i + 1] }, Against::Dx)?;
                }
            }
            Ok(s.powf(1.0 / p))
        }
        FuncExpr::AnalyticSum(_) => {
            if f.eval(1.0) == 0.0 && f.eval(2.0) == 0.0 && f.eval(0.5) == 0.0 {
                Ok(0.0)
            } else {
                Err(Error::Representation("L^p norm over R_+ of an analytic sum".into()))
            }
        }
    }
}

/// `M^D_σ f(x) = max_{Q ∋ x} (1/σ(Q)) ∫_Q |f| σ dx` over the cubes of `grid`.
pub fn dyadic_maximal(f: &FuncExpr, sigma: &Weight, grid: &[DyadicCube], x: f64) -> Result<f64> {
    let mut best = 0.0f64;
    for q in grid.iter().filter(|q| q.interval().contains(x)) {
        best = best.max(sigma_average(f, sigma, q.interval())?);
    }
    Ok(best)
}

fn sigma_average(f: &FuncExpr, sigma: &Weight, q: Interval) -> Result<f64> {
    let mass = sigma.mass(q)?;
    if !(mass > 0.0) {
        return Err(Error::ZeroMass(format!("σ-mass of [{}, {})", q.a, q.b)));
    }
    Ok(integral_abs_times(f, &sigma.expr, q, &LEBESGUE, Against::Dx)? / mass)
}

/// `M^D_σ f` as a piecewise constant on the finest cells of `grid`.
pub fn dyadic_maximal_function(f: &FuncExpr, sigma: &Weight, grid: &[DyadicCube]) -> Result<FuncExpr> {
    let breaks = cube_breaks(grid);
    if breaks.len() < 2 {
        return Ok(FuncExpr::constant(0.0));
    }
    let mut vals = vec![0.0f64; breaks.len() - 1];
    for q in grid {
        let qi = q.interval();
        let avg = sigma_average(f, sigma, qi)?;
        let (lo, hi) = cell_range(&breaks, qi);
        for v in &mut vals[lo..hi] {
            *v = v.max(avg);
        }
    }
    FuncExpr::piecewise(breaks, vals)
}

/// An operator whose `L^p(w dx)` norm can be estimated.
#[derive(Debug, Clone, Copy)]
pub enum Operator<'a> {
    Identity,
    Sparse(&'a SparseFamily),
    Commutator { family: &'a SparseFamily, b: &'a FuncExpr, variant: CommutatorVariant },
}

impl Operator<'_> {
    pub fn apply(&self, f: &FuncExpr, m: &BesselMeasure) -> Result<OperatorOutput> {
        match *self {
            Self::Identity => Ok(OperatorOutput::Piecewise(f.clone())),
            Self::Sparse(s) => Ok(OperatorOutput::Piecewise(sparse_apply(s, f, m)?)),
            Self::Commutator { family, b, variant } => sparse_commutator_apply(family, b, f, m, variant),
        }
    }

    fn family(&self) -> Option<&SparseFamily> {
        match *self {
            Self::Identity => None,
            Self::Sparse(s) => Some(s),
            Self::Commutator { family, .. } => Some(family),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    WitnessFamily,
    FixedPointIteration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorNormEstimate {
    /// `‖T witness‖ / ‖witness‖`.
    pub value: f64,
    pub witness: FuncExpr,
    pub p: f64,
    pub weight: Weight,
    pub method: NormMethod,
}

impl OperatorNormEstimate {
    /// Recompute the ratio for the stored witness.
    pub fn recompute(&self, op: &Operator<'_>, m: &BesselMeasure) -> Result<f64> {
        ratio(op, &self.witness, self.p, &self.weight, m)
    }
}

fn ratio(op: &Operator<'_>, f: &FuncExpr, p: f64, w: &Weight, m: &BesselMeasure) -> Result<f64> {
    let nf = lp_norm(f, p, w)?;
    if !(nf > 0.0) {
        return Ok(f64::NAN);
    }
    Ok(op.apply(f, m)?.lp_norm(p, w)? / nf)
}

/// `max_f ‖Tf‖/‖f‖` over the witnesses with nonzero norm.
pub fn operator_norm_lower_bound(
    op: &Operator<'_>,
    p: f64,
    w: &Weight,
    witnesses: &[FuncExpr],
    m: &BesselMeasure,
) -> Result<OperatorNormEstimate> {
    let mut best: Option<(f64, &FuncExpr)> = None;
    for f in witnesses {
        let r = ratio(op, f, p, w, m)?;
        if r.is_nan() {
            continue;
        }
        if best.map_or(true, |(v, _)| r > v) {
            best = Some((r, f));
        }
    }
    let (value, f) = best.ok_or_else(|| Error::InvalidArgument("every witness has zero norm".into()))?;
    Ok(OperatorNormEstimate { value, witness: f.clone(), p, weight: w.clone(), method: NormMethod::WitnessFamily })
}

/// Standard witnesses: indicators of the family's cubes.
pub fn cube_indicator_witnesses(s: &SparseFamily) -> Vec<FuncExpr> {
    s.cubes.iter().map(|q| FuncExpr::indicator(q.interval())).collect()
}

/// Cell arrangement of a family, each cell bisected `refine` times.
pub fn family_cells(s: &SparseFamily, refine: u32) -> Vec<f64> {
    let base = cube_breaks(&s.cubes);
    let mut out = Vec::with_capacity((base.len() - 1) * (1 << refine) + 1);
    for w in base.windows(2) {
        let n = 1usize << refine;
        for k in 0..n {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / n as f64);
        }
    }
    out.push(*base.last().unwrap());
    out
}

/// Per-cube data of the cell matrix `(Af)_i = Σ_{Q ∋ i} d_{iQ}/μ(Q) Σ_{j ⊆ Q} c_{jQ} f_j`.
struct CellMatrix {
    ranges: Vec<(usize, usize)>,
    mu: Vec<f64>,
    col: Vec<Vec<f64>>,
    row: Vec<Option<Vec<f64>>>,
    n: usize,
}

impl CellMatrix {
    fn apply(&self, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (q, &(lo, hi)) in self.ranges.iter().enumerate() {
            let s: f64 = self.col[q].iter().zip(&f[lo..hi]).map(|(c, x)| c * x).sum::<f64>() / self.mu[q];
            match &self.row[q] {
                None => out[lo..hi].iter_mut().for_each(|o| *o += s),
                Some(d) => out[lo..hi].iter_mut().zip(d).for_each(|(o, d)| *o += d * s),
            }
        }
        out
    }

    fn apply_t(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (q, &(lo, hi)) in self.ranges.iter().enumerate() {
            let s: f64 = match &self.row[q] {
                None => y[lo..hi].iter().sum::<f64>(),
                Some(d) => d.iter().zip(&y[lo..hi]).map(|(d, y)| d * y).sum::<f64>(),
            } / self.mu[q];
            out[lo..hi].iter_mut().zip(&self.col[q]).for_each(|(o, c)| *o += c * s);
        }
        out
    }
}

fn cell_matrix(op: &Operator<'_>, cells: &[f64], w: &Weight, m: &BesselMeasure) -> Result<CellMatrix> {
    let s = op.family().ok_or_else(|| Error::InvalidArgument("identity has no cell matrix".into()))?;
    let n = cells.len() - 1;
    let cell = |j: usize| Interval { a: cells[j], b: cells[j + 1] };
    let mut mat = CellMatrix { ranges: Vec::new(), mu: Vec::new(), col: Vec::new(), row: Vec::new(), n };
    for q in &s.cubes {
        let qi = q.interval();
        let (lo, hi) = cell_range(cells, qi);
        mat.ranges.push((lo, hi));
        mat.mu.push(m.mu(qi));
        match *op {
            Operator::Commutator { b, variant: CommutatorVariant::Adjoint, .. } => {
                let g = b.plus_constant(-mu_average(b, qi, m)?);
                mat.col.push((lo..hi).map(|j| g.abs_deviation_integral(0.0, cell(j), m, Against::Dmu)).collect::<Result<_>>()?);
                mat.row.push(None);
            }
            Operator::Commutator { b, variant: CommutatorVariant::Left, .. } => {
                let g = b.plus_constant(-mu_average(b, qi, m)?);
                mat.col.push((lo..hi).map(|j| m.mu(cell(j))).collect());
                // Proxy row factor: w-average of |b − b_Q| on the cell.
                let d = (lo..hi)
                    .map(|j| Ok(integral_abs_times(&g, &w.expr, cell(j), &LEBESGUE, Against::Dx)? / w.mass(cell(j))?))
                    .collect::<Result<_>>()?;
                mat.row.push(Some(d));
            }
            _ => {
                mat.col.push((lo..hi).map(|j| m.mu(cell(j))).collect());
                mat.row.push(None);
            }
        }
    }
    Ok(mat)
}

/// Boyd's power iteration for `max ‖Af‖_{p,W}/‖f‖_{p,W}` over nonnegative
/// cell-constant `f`, with `W_i = w(cell_i)`:
/// `f ← ψ_{p'}(Aᵀ(W ψ_p(Af)) / W)`, `ψ_r(t) = t^{r−1}`.
///
/// For `A_S` and `A*_{S,b}` the cell matrix is the operator itself and the
/// returned value is the exact witness ratio; for the left commutator the
/// matrix is a proxy used to pick the witness, whose exact ratio is reported.
pub fn operator_norm_fixed_point(
    op: &Operator<'_>,
    p: f64,
    w: &Weight,
    m: &BesselMeasure,
    refine: u32,
    max_iter: usize,
) -> Result<OperatorNormEstimate> {
    if !(p > 1.0) {
        return Err(Error::InvalidArgument(format!("need p > 1, got {p}")));
    }
    let s = op.family().ok_or_else(|| Error::InvalidArgument("fixed-point iteration needs a sparse family".into()))?;
    if s.cubes.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let cells = family_cells(s, refine);
    let n = cells.len() - 1;
    let wm: Vec<f64> = (0..n).map(|j| w.mass(Interval { a: cells[j], b: cells[j + 1] })).collect::<Result<_>>()?;
    let mat = cell_matrix(op, &cells, w, m)?;
    let q = p / (p - 1.0);
    let norm = |f: &[f64]| f.iter().zip(&wm).map(|(x, w)| x.abs().powf(p) * w).sum::<f64>().powf(1.0 / p);
    let mut f: Vec<f64> = vec![1.0; n];
    let mut r_prev = 0.0;
    for _ in 0..max_iter {
        let af = mat.apply(&f);
        let r = norm(&af) / norm(&f);
        let y: Vec<f64> = af.iter().zip(&wm).map(|(a, w)| w * a.max(0.0).powf(p - 1.0)).collect();
        let z = mat.apply_t(&y);
        let mut next: Vec<f64> = z.iter().zip(&wm).map(|(z, w)| (z / w).max(0.0).powf(q - 1.0)).collect();
        let nn = norm(&next);
        if !(nn > 0.0) || !nn.is_finite() {
            break;
        }
        next.iter_mut().for_each(|x| *x /= nn);
        f = next;
        if (r - r_prev).abs() <= 1e-13 * r {
            break;
        }
        r_prev = r;
    }
    let witness = FuncExpr::piecewise(cells, f)?;
    let value = ratio(op, &witness, p, w, m)?;
    Ok(OperatorNormEstimate { value, witness, p, weight: w.clone(), method: NormMethod::FixedPointIteration })
}

/// Both sides of `μ(E)^{p−1} ≤ w(E)^{(p−1)/p} σ_*(E)^{(p−1)/p'}` for
/// `σ_* = t^{2λp'} w^{1−p'}` and a cube `E`.
pub fn holder_split_check(w: &Weight, p: f64, m: &BesselMeasure, e: Interval) -> Result<(f64, f64)> {
    let q = p / (p - 1.0);
    let sigma_star = dual_weight(w, p, m.lambda())?.sigma_star;
    let lhs = m.mu(e).powf(p - 1.0);
    let rhs = w.mass(e)?.powf((p - 1.0) / p) * sigma_star.mass(e)?.powf((p - 1.0) / q);
    Ok((lhs, rhs))
}

/// Stopping family for the oscillation of `b` below `root`: starting from
/// `P = root`, the children of `P` are the stopping cubes of `|b − b_P|`
/// (see [`cz_stopping`]), recursively.
pub fn oscillation_stopping(b: &FuncExpr, root: DyadicCube, m: &BesselMeasure, max_depth: u32) -> Result<Vec<DyadicCube>> {
    let bottom = root.level + max_depth as i32;
    let mut out = vec![root];
    let mut queue = vec![root];
    while let Some(p) = queue.pop() {
        if p.level >= bottom {
            continue;
        }
        let pi = p.interval();
        let g = b.plus_constant(-mu_average(b, pi, m)?);
        let kids = cz_stopping(&g, p, m, (bottom - p.level) as u32)?;
        for k in kids.into_iter().filter(|k| *k != p) {
            if !out.contains(&k) {
                out.push(k);
                queue.push(k);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `max_x |b(x) − b_Q| / Σ_{P ∋ x, P ∈ S̃} ⟨|b − b_P|⟩_P` over `samples`
/// points of `Q = root` not below the resolution `2^{-(level+max_depth)}`.
pub fn oscillation_expansion_ratio(
    b: &FuncExpr,
    root: DyadicCube,
    m: &BesselMeasure,
    max_depth: u32,
    samples: usize,
) -> Result<f64> {
    let fam = oscillation_stopping(b, root, m, max_depth)?;
    let osc: Vec<(Interval, f64)> = fam
        .iter()
        .map(|p| {
            let pi = p.interval();
            let c = mu_average(b, pi, m)?;
            Ok((pi, b.abs_deviation_integral(c, pi, m, Against::Dmu)? / m.mu(pi)))
        })
        .collect::<Result<_>>()?;
    let q = root.interval();
    let bq = mu_average(b, q, m)?;
    let floor = (-((root.level + max_depth as i32) as f64)).exp2();
    let lo = q.a.max(floor);
    let mut worst = 0.0f64;
    for i in 0..samples {
        let x = lo * (q.b / lo).powf((i as f64 + 0.5) / samples as f64);
        let lhs = (b.eval(x) - bq).abs();
        let rhs: f64 = osc.iter().filter(|(pi, _)| pi.contains(x)).map(|(_, o)| o).sum();
        if lhs > 0.0 {
            worst = worst.max(if rhs > 0.0 { lhs / rhs } else { f64::INFINITY });
        }
    }
    Ok(worst)
}
