//! Dyadic grid on `R_+`, sparse families with disjoint major subsets,
//! layer decomposition and Orlicz level sets.
//!
//! Cubes are half-open, `Q = [k 2^{-j}, (k+1) 2^{-j})`, so each level tiles
//! `R_+` exactly. All endpoints are dyadic rationals and therefore exact in
//! binary floating point, which makes the disjointness checks exact.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::measure::{Against, BesselMeasure, FuncExpr, Interval, IntervalSet};
use crate::orlicz::{self, YoungFunction};
use crate::weights::Weight;

/// Guard for [`build_grid`].
pub const MAX_GRID_CUBES: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicCube {
    pub level: i32,
    pub index: u64,
}

impl DyadicCube {
    pub fn new(level: i32, index: u64) -> Self {
        Self { level, index }
    }

    pub fn side(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    pub fn interval(&self) -> Interval {
        let s = self.side();
        Interval { a: self.index as f64 * s, b: (self.index + 1) as f64 * s }
    }

    /// The cube of `level` containing `x ≥ 0`.
    pub fn containing(x: f64, level: i32) -> Self {
        Self { level, index: (x * (level as f64).exp2()).floor() as u64 }
    }

    pub fn parent(&self) -> Self {
        Self { level: self.level - 1, index: self.index / 2 }
    }

    pub fn children(&self) -> [Self; 2] {
        let l = self.level + 1;
        [Self { level: l, index: 2 * self.index }, Self { level: l, index: 2 * self.index + 1 }]
    }

    /// Ancestor at a coarser (or equal) level.
    pub fn ancestor(&self, level: i32) -> Self {
        debug_assert!(level <= self.level);
        let shift = (self.level - level) as u32;
        Self { level, index: self.index.checked_shr(shift).unwrap_or(0) }
    }

    /// `other ⊆ self`.
    pub fn contains_cube(&self, other: &DyadicCube) -> bool {
        other.level >= self.level && other.ancestor(self.level) == *self
    }
}

/// All cubes of levels `min_level..=max_level` meeting `domain` in positive
/// length.
pub fn build_grid(domain: Interval, min_level: i32, max_level: i32) -> Result<Vec<DyadicCube>> {
    if min_level > max_level {
        return Err(Error::InvalidArgument(format!("min level {min_level} exceeds max level {max_level}")));
    }
    let ranges: Vec<(i32, u64, u64)> = (min_level..=max_level)
        .map(|j| {
            let scale = (j as f64).exp2();
            let lo = (domain.a * scale).floor() as u64;
            let hi = (domain.b * scale).ceil() as u64;
            (j, lo, hi)
        })
        .collect();
    let count: u64 = ranges.iter().map(|&(_, lo, hi)| hi - lo).sum();
    if count > MAX_GRID_CUBES {
        return Err(Error::CubeOverflow(count));
    }
    let mut out = Vec::with_capacity(count as usize);
    for (j, lo, hi) in ranges {
        out.extend((lo..hi).map(|k| DyadicCube::new(j, k)));
    }
    Ok(out)
}

/// A finite family of cubes with designated pairwise disjoint subsets
/// `E_Q ⊆ Q`; `eta` is `min μ(E_Q)/μ(Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseFamily {
    pub cubes: Vec<DyadicCube>,
    pub major: Vec<IntervalSet>,
    pub eta: f64,
}

impl SparseFamily {
    /// Build from explicit major subsets; disjointness and `E_Q ⊆ Q` are
    /// checked and `eta` computed.
    pub fn new(cubes: Vec<DyadicCube>, major: Vec<IntervalSet>, m: &BesselMeasure) -> Result<Self> {
        if cubes.len() != major.len() {
            return Err(Error::InvalidArgument("one major subset per cube required".into()));
        }
        let mut s = Self { cubes, major, eta: 0.0 };
        s.eta = verify_sparse(&s, m)?.0;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    /// `η`-sparse in the sense `μ(E_Q) ≥ η μ(Q)` for all `Q`.
    pub fn is_sparse(&self, eta: f64) -> bool {
        self.eta >= eta
    }

    /// One line per cube: `level index num den a:b a:b ...`, where `num/den`
    /// (with `den = 2^32`) is a lower bound for `μ(E_Q)/μ(Q)` and the pairs
    /// list the intervals of `E_Q` in round-trip decimal.
    pub fn to_text(&self, m: &BesselMeasure) -> Result<String> {
        let den: u64 = 1 << 32;
        let mut out = String::new();
        for (q, e) in self.cubes.iter().zip(&self.major) {
            let r = m.mass_of_set(Against::Dmu, e)? / m.mu(q.interval());
            let num = ((r * den as f64).floor() as u64).min(den);
            let _ = write!(out, "{} {} {} {}", q.level, q.index, num, den);
            for i in e.intervals() {
                let _ = write!(out, " {:?}:{:?}", i.a, i.b);
            }
            out.push('\n');
        }
        Ok(out)
    }

    /// Inverse of [`to_text`](Self::to_text). The recorded ratios are checked
    /// against the recomputed ones.
    pub fn from_text(text: &str, m: &BesselMeasure) -> Result<Self> {
        let bad = |line: &str| Error::InvalidArgument(format!("malformed sparse-family line: {line:?}"));
        let mut cubes = Vec::new();
        let mut major = Vec::new();
        let mut recorded = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let mut it = line.split_whitespace();
            let level: i32 = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad(line))?;
            let index: u64 = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad(line))?;
            let num: u64 = it.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad(line))?;
            let den: u64 = it.next().and_then(|t| t.parse().ok()).filter(|&d| d > 0).ok_or_else(|| bad(line))?;
            let mut ivs = Vec::new();
            for tok in it {
                let (a, b) = tok.split_once(':').ok_or_else(|| bad(line))?;
                let a: f64 = a.parse().map_err(|_| bad(line))?;
                let b: f64 = b.parse().map_err(|_| bad(line))?;
                ivs.push(Interval::new(a, b)?);
            }
            cubes.push(DyadicCube::new(level, index));
            major.push(IntervalSet::from_intervals(ivs));
            recorded.push(num as f64 / den as f64);
        }
        let fam = Self::new(cubes, major, m)?;
        for ((q, e), r) in fam.cubes.iter().zip(&fam.major).zip(recorded) {
            let actual = m.mass_of_set(Against::Dmu, e)? / m.mu(q.interval());
            if r > actual * (1.0 + 1e-12) {
                return Err(Error::InvalidArgument(format!(
                    "recorded ratio {r} exceeds actual {actual} for cube ({}, {})",
                    q.level, q.index
                )));
            }
        }
        Ok(fam)
    }
}

/// `(min_Q μ(E_Q)/μ(Q), argmin)`, after checking that every `E_Q ⊆ Q` and the
/// `E_Q` are pairwise disjoint (exact interval comparisons).
pub fn verify_sparse(s: &SparseFamily, m: &BesselMeasure) -> Result<(f64, DyadicCube)> {
    if s.cubes.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut pieces: Vec<(Interval, usize)> = Vec::new();
    for (n, (q, e)) in s.cubes.iter().zip(&s.major).enumerate() {
        let qi = q.interval();
        if e.intervals().iter().any(|i| !qi.contains_interval(i)) {
            return Err(Error::InvalidArgument(format!("major subset of cube ({}, {}) leaves the cube", q.level, q.index)));
        }
        pieces.extend(e.intervals().iter().map(|&i| (i, n)));
    }
    pieces.sort_by(|x, y| x.0.a.total_cmp(&y.0.a));
    let mut reach: Option<(f64, usize)> = None;
    for &(i, n) in &pieces {
        if let Some((b, owner)) = reach {
            if i.a < b {
                let (p, q) = (s.cubes[owner], s.cubes[n]);
                return Err(Error::Disjointness(p.level, p.index, q.level, q.index));
            }
        }
        if reach.map_or(true, |(b, _)| i.b > b) {
            reach = Some((i.b, n));
        }
    }
    let mut best = (f64::INFINITY, s.cubes[0]);
    for (q, e) in s.cubes.iter().zip(&s.major) {
        let r = m.mass_of_set(Against::Dmu, e)? / m.mu(q.interval());
        if r < best.0 {
            best = (r, *q);
        }
    }
    Ok(best)
}

/// Layers `S_0, S_1, ...`: `S_0` holds the maximal cubes and `S_{v+1}` the
/// maximal cubes of what remains.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredFamily {
    pub layers: Vec<Vec<DyadicCube>>,
}

impl LayeredFamily {
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }
}

/// Sorted, deduplicated cubes with, for each, the index of its nearest strict
/// ancestor in the set.
fn forest(cubes: &[DyadicCube]) -> (Vec<DyadicCube>, Vec<Option<usize>>) {
    let mut v = cubes.to_vec();
    v.sort();
    v.dedup();
    let pos: HashMap<DyadicCube, usize> = v.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let min_level = v.first().map_or(0, |q| q.level);
    let parent = v
        .iter()
        .map(|q| {
            let mut c = *q;
            while c.level > min_level {
                c = c.parent();
                if let Some(&i) = pos.get(&c) {
                    return Some(i);
                }
            }
            None
        })
        .collect();
    (v, parent)
}

pub fn layer_decompose(cubes: &[DyadicCube]) -> LayeredFamily {
    let (v, parent) = forest(cubes);
    let mut layer = vec![0usize; v.len()];
    let mut layers: Vec<Vec<DyadicCube>> = Vec::new();
    // Sorted by level, so parents come first.
    for i in 0..v.len() {
        layer[i] = parent[i].map_or(0, |p| layer[p] + 1);
        if layers.len() <= layer[i] {
            layers.push(Vec::new());
        }
        layers[layer[i]].push(v[i]);
    }
    LayeredFamily { layers }
}

/// `E_Q = Q \ ⋃{Q' in the next layer, Q' ⊂ Q}`; `eta` may be 0.
pub fn canonical_major_subsets(cubes: &[DyadicCube], m: &BesselMeasure) -> Result<SparseFamily> {
    let (v, parent) = forest(cubes);
    let mut kids: Vec<Vec<Interval>> = vec![Vec::new(); v.len()];
    for (i, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            kids[*p].push(v[i].interval());
        }
    }
    let major = v
        .iter()
        .zip(kids)
        .map(|(q, k)| IntervalSet::from_interval(q.interval()).difference(&IntervalSet::from_intervals(k)))
        .collect();
    SparseFamily::new(v, major, m)
}

/// Bands `k ≥ 0` with `4^{-k-1} < ‖f‖_{ψ,Q} ≤ 4^{-k}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LevelSets {
    pub bands: BTreeMap<u32, Vec<DyadicCube>>,
    /// Norm above 1.
    pub over_one: Vec<DyadicCube>,
    /// Norm exactly 0.
    pub null: Vec<DyadicCube>,
}

/// Band index of a norm in `(0, 1]`.
pub fn band_of(norm: f64) -> u32 {
    let mut k = (-norm.log(4.0)).floor().max(0.0) as u32;
    // Correct rounding at exact powers of 4.
    while k > 0 && norm > 4f64.powi(-(k as i32)) {
        k -= 1;
    }
    while norm <= 4f64.powi(-(k as i32) - 1) {
        k += 1;
    }
    k
}

pub fn level_sets(cubes: &[DyadicCube], f: &FuncExpr, psi: &YoungFunction, m: &BesselMeasure) -> Result<LevelSets> {
    let mut out = LevelSets::default();
    for q in cubes {
        let n = orlicz::luxemburg_norm(f, psi, q.interval(), m)?;
        if n > 1.0 {
            out.over_one.push(*q);
        } else if n == 0.0 {
            out.null.push(*q);
        } else {
            out.bands.entry(band_of(n)).or_default().push(*q);
        }
    }
    Ok(out)
}

/// Each child kept with probability `keep` below every kept cube, down to
/// `depth` levels under `root`.
pub fn random_subtree(root: DyadicCube, depth: u32, keep: f64, seed: u64) -> Vec<DyadicCube> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![root];
    let mut frontier = vec![root];
    for _ in 0..depth {
        let mut next = Vec::new();
        for q in frontier {
            for c in q.children() {
                if rng.gen::<f64>() < keep {
                    next.push(c);
                }
            }
        }
        out.extend(next.iter().copied());
        frontier = next;
    }
    out.sort();
    out
}

/// Random nested family in which every cube has at most `children`
/// descendants in the family exactly `gap` levels below it, for `generations`
/// generations. Large gaps give sparseness close to 1.
pub fn random_gapped(root: DyadicCube, generations: u32, gap: u32, children: u32, seed: u64) -> Vec<DyadicCube> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![root];
    let mut frontier = vec![root];
    let span = 1u64 << gap;
    for _ in 0..generations {
        let mut next = Vec::new();
        for q in &frontier {
            let mut chosen = HashSet::new();
            for _ in 0..children {
                chosen.insert(rng.gen_range(0..span));
            }
            let mut chosen: Vec<u64> = chosen.into_iter().collect();
            chosen.sort();
            next.extend(chosen.into_iter().map(|o| DyadicCube::new(q.level + gap as i32, q.index * span + o)));
        }
        out.extend(next.iter().copied());
        frontier = next;
    }
    out.sort();
    out
}

/// `[0, 2^{-j})` for `j = top_level, ..., top_level + length − 1`.
pub fn chain_at_zero(top_level: i32, length: u32) -> Vec<DyadicCube> {
    (0..length as i32).map(|i| DyadicCube::new(top_level + i, 0)).collect()
}

/// `μ(parent)/μ(child)` bound `2^{2λ+1}`, attained by `[0, 2^{-j-1}) ⊂ [0, 2^{-j})`.
pub fn containment_constant(m: &BesselMeasure) -> f64 {
    (2.0 * m.lambda() + 1.0).exp2()
}

/// Calderón–Zygmund stopping cubes below `root`: the children of a stopping
/// cube `Q` are the maximal `P ⊂ Q` with `⟨|f|⟩_P > 2 C ⟨|f|⟩_Q`, where `C`
/// is the containment constant. Searches at most `max_depth` levels below
/// `root`. The result is `1/2`-sparse with canonical major subsets.
pub fn cz_stopping(f: &FuncExpr, root: DyadicCube, m: &BesselMeasure, max_depth: u32) -> Result<Vec<DyadicCube>> {
    let factor = 2.0 * containment_constant(m);
    let avg = |q: DyadicCube| -> Result<f64> {
        let i = q.interval();
        Ok(f.abs_deviation_integral(0.0, i, m, Against::Dmu)? / m.mu(i))
    };
    let bottom = root.level + max_depth as i32;
    let mut out = vec![root];
    let mut queue = vec![(root, avg(root)?)];
    while let Some((q, aq)) = queue.pop() {
        if aq == 0.0 {
            continue;
        }
        let mut stack: Vec<DyadicCube> = q.children().into_iter().filter(|c| c.level <= bottom).collect();
        while let Some(p) = stack.pop() {
            let ap = avg(p)?;
            if ap > factor * aq {
                out.push(p);
                queue.push((p, ap));
            } else if p.level < bottom {
                stack.extend(p.children());
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Both sides of the level-set estimate
/// `Σ_{Q∈S_k} w(E∩Q) ≤ 2^k w(E) + 4γ/φ̄^{-1}((2γ)^{2^k}) ∫ ψ(4^k|f|) M_φ(w/μ) dμ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetEstimate {
    pub k: u32,
    pub band: Vec<DyadicCube>,
    pub eta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub layer_part: f64,
    pub bottom_part: f64,
}

/// Evaluate the estimate for band `k` of `cubes` under `ψ` with doubling
/// constant `gamma_psi`.
///
/// `M_φ(w/μ)` on `E_Q` is bounded below by the largest `‖w/μ‖_{φ,P}` over
/// family cubes `P ⊇ Q`, so the returned right side is a lower bound of the
/// true one. Fails when the band is not `(1 − 1/(2γ))`-sparse.
#[allow(clippy::too_many_arguments)]
pub fn level_set_estimate(
    cubes: &[DyadicCube],
    k: u32,
    f: &FuncExpr,
    w: &Weight,
    e: &IntervalSet,
    phi: &YoungFunction,
    psi: &YoungFunction,
    gamma_psi: f64,
    m: &BesselMeasure,
) -> Result<LevelSetEstimate> {
    let ls = level_sets(cubes, f, psi, m)?;
    let band = ls.bands.get(&k).cloned().unwrap_or_default();
    let w_of = |s: &IntervalSet| -> Result<f64> { s.intervals().iter().map(|&i| m.integrate(&w.expr, i, Against::Dx)).sum() };
    let layer_part = 2f64.powi(k as i32) * w_of(e)?;
    if band.is_empty() {
        return Ok(LevelSetEstimate { k, band, eta: 1.0, lhs: 0.0, rhs: layer_part, layer_part, bottom_part: 0.0 });
    }
    let fam = canonical_major_subsets(&band, m)?;
    let need = 1.0 - 1.0 / (2.0 * gamma_psi);
    if fam.eta < need {
        return Err(Error::InvalidArgument(format!("band {k} is only {}-sparse, need {need}", fam.eta)));
    }
    let density = w
        .expr
        .times_power(-2.0 * m.lambda())
        .ok_or_else(|| Error::Representation("w/μ-density not representable for this weight".into()))?;
    let mut lhs = 0.0;
    for q in &fam.cubes {
        lhs += w_of(&e.intersect_interval(q.interval()))?;
    }
    let norms: Vec<f64> = fam
        .cubes
        .iter()
        .map(|q| orlicz::luxemburg_norm(&density, phi, q.interval(), m))
        .collect::<Result<_>>()?;
    let scale = 4f64.powi(k as i32);
    let mut integral = 0.0;
    for (i, (q, eq)) in fam.cubes.iter().zip(&fam.major).enumerate() {
        let mut mq = norms[i];
        for (j, p) in fam.cubes.iter().enumerate() {
            if p.contains_cube(q) {
                mq = mq.max(norms[j]);
            }
        }
        for piece in eq.intervals() {
            integral += mq * orlicz::young_integral(f, psi, scale, *piece, m)?;
        }
    }
    let coeff = 4.0 * gamma_psi / orlicz::complementary_inverse(phi, (2.0 * gamma_psi).powf(2f64.powi(k as i32)))?;
    let bottom_part = coeff * integral;
    Ok(LevelSetEstimate { k, band, eta: fam.eta, lhs, rhs: layer_part + bottom_part, layer_part, bottom_part })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu(l: f64) -> BesselMeasure {
        BesselMeasure::new(l).unwrap()
    }

    #[test]
    fn grid_levels_zero_and_one() {
        let g = build_grid(Interval::new(0.0, 1.0).unwrap(), 0, 1).unwrap();
        assert_eq!(g, vec![DyadicCube::new(0, 0), DyadicCube::new(1, 0), DyadicCube::new(1, 1)]);
        assert!(matches!(
            build_grid(Interval::new(0.0, 1.0).unwrap(), 0, 30),
            Err(Error::CubeOverflow(_))
        ));
    }

    #[test]
    fn containment_ratio_at_zero_is_eight() {
        let m = mu(1.0);
        let p = DyadicCube::new(3, 0);
        let r = m.mu(p.interval()) / m.mu(p.children()[0].interval());
        assert_eq!(r, 8.0);
        assert_eq!(containment_constant(&m), 8.0);
    }

    #[test]
    fn chain_sparseness() {
        let c = chain_at_zero(0, 3);
        assert_eq!(canonical_major_subsets(&c, &mu(0.0)).unwrap().eta, 0.5);
        let e = canonical_major_subsets(&c, &mu(1.0)).unwrap().eta;
        assert!((e - 7.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn single_cube_and_full_tree() {
        let one = canonical_major_subsets(&[DyadicCube::new(2, 3)], &mu(0.5)).unwrap();
        assert_eq!(one.eta, 1.0);
        let tree = build_grid(Interval::new(0.0, 1.0).unwrap(), 0, 2).unwrap();
        assert_eq!(canonical_major_subsets(&tree, &mu(0.0)).unwrap().eta, 0.0);
    }

    #[test]
    fn overlapping_majors_rejected() {
        let q = DyadicCube::new(0, 0);
        let r = DyadicCube::new(1, 0);
        let err = SparseFamily::new(
            vec![q, r],
            vec![IntervalSet::from_interval(q.interval()), IntervalSet::from_interval(r.interval())],
            &mu(0.0),
        );
        assert!(matches!(err, Err(Error::Disjointness(0, 0, 1, 0))));
    }

    #[test]
    fn two_chains_layer_sizes() {
        let mut c = chain_at_zero(0, 2);
        c.extend([DyadicCube::new(0, 5), DyadicCube::new(1, 11), DyadicCube::new(2, 22)]);
        assert_eq!(layer_decompose(&c).sizes(), vec![2, 2, 1]);
    }

    #[test]
    fn band_boundaries() {
        assert_eq!(band_of(1.0), 0);
        assert_eq!(band_of(0.25), 1);
        assert_eq!(band_of(0.2500001), 0);
        assert_eq!(band_of(4f64.powi(-3)), 3);
    }

    #[test]
    fn text_round_trip() {
        let m = mu(1.0);
        let fam = canonical_major_subsets(&random_subtree(DyadicCube::new(0, 0), 5, 0.4, 3), &m).unwrap();
        let back = SparseFamily::from_text(&fam.to_text(&m).unwrap(), &m).unwrap();
        assert_eq!(back, fam);
    }

    #[test]
    fn cz_cubes_half_sparse() {
        let m = mu(1.0);
        let f = FuncExpr::power(1.0, -1.5);
        let s = cz_stopping(&f, DyadicCube::new(0, 0), &m, 12).unwrap();
        assert!(s.len() > 3);
        assert!(canonical_major_subsets(&s, &m).unwrap().eta >= 0.5);
    }
}
