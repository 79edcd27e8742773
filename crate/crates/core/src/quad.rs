//! Adaptive Gauss–Kronrod (G7/K15) quadrature.
//!
//! Globally adaptive: the segment with the largest error estimate is bisected
//! until the summed estimate meets the tolerance. `integrate_from_zero`
//! handles integrable endpoint singularities at 0 by summing over geometric
//! pieces `[b 2^{-k-1}, b 2^{-k}]`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: u32,
    pub max_evals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_depth: 60,
            max_evals: 400_000,
        }
    }
}

impl QuadConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

/// One G7/K15 panel: (Kronrod value, |Kronrod − Gauss|).
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = h * x;
        let s = f(c - dx) + f(c + dx);
        kron += wk * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    integrate_pieces(f, &[a, b], cfg)
}

/// Integrate over `[points[0], points[last]]`, starting from the given
/// breakpoints (kinks, jumps) as initial segments.
pub fn integrate_pieces<F: FnMut(f64) -> f64>(mut f: F, points: &[f64], cfg: &QuadConfig) -> Result<QuadResult> {
    if points.len() < 2 {
        return Ok(QuadResult { value: 0.0, error: 0.0, evals: 0 });
    }
    let mut heap = BinaryHeap::new();
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut evals = 0usize;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let (v, e) = gk15(&mut f, a, b);
        evals += 15;
        total += v;
        err += e;
        heap.push(Segment { a, b, value: v, error: e, depth: 0 });
    }
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if err <= tol || !err.is_finite() && !total.is_finite() {
            break;
        }
        let Some(seg) = heap.pop() else { break };
        if seg.depth >= cfg.max_depth || seg.b - seg.a <= f64::EPSILON * seg.a.abs().max(seg.b.abs()) * 4.0 {
            frozen_value += seg.value;
            frozen_error += seg.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        if evals >= cfg.max_evals {
            heap.push(seg);
            break;
        }
        let m = 0.5 * (seg.a + seg.b);
        let (v1, e1) = gk15(&mut f, seg.a, m);
        let (v2, e2) = gk15(&mut f, m, seg.b);
        evals += 30;
        total += v1 + v2 - seg.value;
        err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: m, value: v1, error: e1, depth: seg.depth + 1 });
        heap.push(Segment { a: m, b: seg.b, value: v2, error: e2, depth: seg.depth + 1 });
    }
    // Re-sum to shed the drift of incremental updates.
    let value = frozen_value + heap.iter().map(|s| s.value).sum::<f64>();
    let error = frozen_error + heap.iter().map(|s| s.error).sum::<f64>();
    if !value.is_finite() {
        return Err(Error::Divergence("non-finite integrand".into()));
    }
    let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
    if error > tol && error > 1e-300 {
        return Err(Error::Nonconvergence { achieved: error });
    }
    Ok(QuadResult { value, error, evals })
}

/// Integrate `f` over `(0, b]` by summing geometric pieces toward 0 until the
/// contributions and a geometric tail estimate fall below tolerance.
pub fn integrate_from_zero<F: FnMut(f64) -> f64>(mut f: F, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    let mut sum: f64 = 0.0;
    let mut error = 0.0;
    let mut evals = 0;
    let mut hi = b;
    let mut prev: Option<f64> = None;
    let piece_cfg = QuadConfig {
        rel_tol: cfg.rel_tol * 0.1,
        ..*cfg
    };
    for k in 0..1100 {
        let lo = hi * 0.5;
        if lo < 1e-300 {
            break;
        }
        let r = integrate(&mut f, lo, hi, &QuadConfig {
            abs_tol: piece_cfg.abs_tol.max(cfg.rel_tol * 0.01 * sum.abs()),
            ..piece_cfg
        })?;
        sum += r.value;
        error += r.error;
        evals += r.evals;
        hi = lo;
        let v = r.value.abs();
        if k >= 4 {
            if v == 0.0 && prev == Some(0.0) {
                return Ok(QuadResult { value: sum, error, evals });
            }
            if let Some(p) = prev.filter(|&p| p > 0.0) {
                let q = v / p;
                if q < 0.999 {
                    let tail = v * q / (1.0 - q);
                    if tail <= cfg.rel_tol * 0.1 * sum.abs() || tail <= cfg.abs_tol {
                        sum += r.value.signum() * tail;
                        error += tail;
                        return Ok(QuadResult { value: sum, error, evals });
                    }
                }
            }
        }
        prev = Some(v);
    }
    Err(Error::Divergence(format!("no decay toward 0 from b = {b}")))
}

/// Integrate `f` over `[0, ∞)` for an integrand bounded by a polynomial times
/// `e^{-rate t}`, over doubling pieces until `rate t` passes the underflow range.
pub fn integrate_exp_tail<F: FnMut(f64) -> f64>(mut f: F, rate: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(rate > 0.0) {
        return Err(Error::Divergence(format!("decay rate {rate} is not positive")));
    }
    let mut out = QuadResult { value: 0.0, error: 0.0, evals: 0 };
    let (mut lo, mut hi) = (0.0, 1.0 / rate);
    while lo * rate < 800.0 {
        let r = integrate(&mut f, lo, hi, &QuadConfig {
            abs_tol: cfg.abs_tol.max(cfg.rel_tol * 0.01 * out.value.abs()),
            ..*cfg
        })?;
        out.value += r.value;
        out.error += r.error;
        out.evals += r.evals;
        lo = hi;
        hi *= 2.0;
    }
    if !out.value.is_finite() {
        return Err(Error::Divergence("non-finite integrand".into()));
    }
    Ok(out)
}
