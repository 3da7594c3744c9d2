//! Singular-value functions `s ↦ μ_s(x)` and the toolbox around them.
//!
//! A singular-value function is stored exactly as a list of
//! `(level, width)` segments: right-continuous, non-increasing, and always
//! ending in a segment of infinite width (the zero tail contributed by the
//! implicit infinite-weight block, or a positive level when `x` is not
//! τ-compact). Pointwise comparisons of two such functions are done on the
//! union of their breakpoints, which is exact for step data.

use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{Interval, Operator};
use crate::error::{Error, Result};
use crate::extreal::{ExtReal, Finite, Infinite};
use crate::linalg;
use crate::random::{self, SplitMix64};
use crate::report::{PropertyItem, PropertyReport};

/// Levels closer than this (relative to `max(1, level)`) are merged.
pub const LEVEL_MERGE_TOL: f64 = 1e-12;
/// Default absolute tolerance for breakpoint-wise comparisons.
pub const COMPARE_TOL: f64 = 1e-9;
/// Largest total dimension accepted by the projection sup-oracle.
pub const SUP_ORACLE_MAX_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub level: f64,
    pub width: ExtReal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SValueFunction {
    segments: Vec<Segment>,
}

impl SValueFunction {
    /// Decreasing rearrangement of a pooled `(value, width)` multiset, followed
    /// by the zero tail of infinite width.
    pub fn from_pairs(mut pairs: Vec<(f64, ExtReal)>) -> Self {
        pairs.retain(|(_, w)| *w > 0.0);
        // the tail is marked by an exact 0 level with infinite width
        pairs.push((0.0, Infinite));
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut segments: Vec<Segment> = Vec::new();
        let mut anchor = f64::NAN;
        for (level, width) in pairs {
            let level = level.max(0.0);
            match segments.last_mut() {
                Some(last) if anchor - level <= LEVEL_MERGE_TOL * anchor.max(1.0) => {
                    last.width = last.width + width;
                    if level == 0.0 && width == Infinite {
                        last.level = 0.0;
                    }
                }
                _ => {
                    anchor = level;
                    segments.push(Segment { level, width });
                }
            }
            if segments.last().map(|s| s.width) == Some(Infinite) {
                break;
            }
        }
        Self { segments }
    }

    pub fn zero() -> Self {
        Self::from_pairs(Vec::new())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Segment start points: `0` and every finite cumulative width.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.segments.len());
        let mut acc = 0.0;
        for seg in &self.segments {
            out.push(acc);
            match seg.width {
                Finite(w) => acc += w,
                Infinite => break,
            }
        }
        out
    }

    /// `[(start, end, level)]` for every segment.
    pub fn pieces(&self) -> Vec<(f64, ExtReal, f64)> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.segments.len());
        for seg in &self.segments {
            let end = seg.width + acc;
            out.push((acc, end, seg.level));
            match end {
                Finite(e) => acc = e,
                Infinite => break,
            }
        }
        out
    }

    /// `μ_s`; at `s = 0` this is the limit `‖x‖`.
    pub fn at(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for seg in &self.segments {
            match seg.width {
                Finite(w) => {
                    acc += w;
                    if s < acc {
                        return seg.level;
                    }
                }
                Infinite => return seg.level,
            }
        }
        0.0
    }

    /// `lim_{s→0+} μ_s`, the uniform norm.
    pub fn sup(&self) -> f64 {
        self.segments.first().map_or(0.0, |s| s.level)
    }

    /// Every infinite-width segment has level 0.
    pub fn is_tau_compact(&self) -> bool {
        self.segments
            .iter()
            .all(|s| s.width.is_finite() || s.level == 0.0)
    }

    fn infinite_level(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.level)
    }

    /// `∫_0^t μ_s ds`.
    pub fn integral_to(&self, t: ExtReal) -> ExtReal {
        let mut total = 0.0;
        let mut acc = 0.0;
        for seg in &self.segments {
            let end = seg.width + acc;
            let stop = end.min(t);
            match stop {
                Infinite => {
                    return if seg.level > 0.0 { Infinite } else { Finite(total) };
                }
                Finite(e) => {
                    total += seg.level * (e - acc).max(0.0);
                    if stop == t {
                        return Finite(total);
                    }
                    acc = e;
                }
            }
        }
        Finite(total)
    }

    /// `∫_0^∞ μ_s^p ds`.
    pub fn power_integral(&self, p: f64) -> ExtReal {
        let pow = self.map_levels(|l| l.powf(p));
        pow.integral_to(Infinite)
    }

    /// Applies a non-decreasing `f` with `f(0) = 0` to every level.
    pub fn map_levels<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        Self::from_pairs(self.segments.iter().map(|s| (f(s.level), s.width)).collect())
    }

    /// `μ` restricted to `(0, width)`, zero afterwards.
    pub fn truncate(&self, width: f64) -> Self {
        let mut pairs = Vec::new();
        let mut acc = 0.0;
        for seg in &self.segments {
            if acc >= width {
                break;
            }
            let end = seg.width + acc;
            let w = end.min(Finite(width)).minus(acc);
            pairs.push((seg.level, w));
            match end {
                Finite(e) => acc = e,
                Infinite => break,
            }
        }
        Self::from_pairs(pairs)
    }

    /// `d(t) = τ(p(t, ∞))`: total width of levels strictly above `t`.
    pub fn distribution_at(&self, t: f64) -> ExtReal {
        self.segments
            .iter()
            .filter(|s| s.level > t)
            .map(|s| s.width)
            .sum()
    }

    pub fn distribution(&self) -> DistributionFunction {
        DistributionFunction {
            steps: self
                .segments
                .iter()
                .map(|s| (s.level, self.distribution_at(s.level) + s.width))
                .collect(),
        }
    }

    /// Closure of `{μ_s : s > 0}`.
    pub fn level_set(&self) -> Vec<f64> {
        self.segments.iter().map(|s| s.level).collect()
    }

    /// `true` when both functions agree within `tol` at every breakpoint.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        compare(self, other)
            .iter()
            .all(|p| (p.left - p.right).abs() <= tol)
    }

    /// CSV rows `s_start,s_end,level`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (start, end, level) in self.pieces() {
            let _ = writeln!(out, "{start},{end},{level}");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .pieces()
            .into_iter()
            .map(|(start, end, level)| serde_json::json!({"start": start, "end": end, "level": level}))
            .collect();
        serde_json::json!({ "segments": rows })
    }
}

/// `t ↦ τ(p^x(t, ∞))`, stored as `(level, d(t) for t just below level)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionFunction {
    steps: Vec<(f64, ExtReal)>,
}

impl DistributionFunction {
    pub fn at(&self, t: f64) -> ExtReal {
        self.steps
            .iter()
            .filter(|(level, _)| *level > t)
            .map(|(_, d)| *d)
            .next_back()
            .unwrap_or(ExtReal::ZERO)
    }
}

/// One interval of the breakpoint union of two step functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Piece {
    pub start: f64,
    pub end: ExtReal,
    pub left: f64,
    pub right: f64,
}

/// Evaluates both functions on every interval of their breakpoint union.
///
/// Breakpoints within `1e-12` (relative) of each other are identified and
/// each interval is sampled at its midpoint.
pub fn compare(f: &SValueFunction, g: &SValueFunction) -> Vec<Piece> {
    let mut bps: Vec<f64> = f.breakpoints();
    bps.extend(g.breakpoints());
    bps.sort_by(f64::total_cmp);
    let mut uniq: Vec<f64> = Vec::with_capacity(bps.len());
    for b in bps {
        match uniq.last() {
            Some(&last) if b - last <= 1e-12 * (1.0 + last.abs()) => {}
            _ => uniq.push(b),
        }
    }
    let mut out = Vec::with_capacity(uniq.len());
    for (i, &start) in uniq.iter().enumerate() {
        let (end, probe) = match uniq.get(i + 1) {
            Some(&e) => (Finite(e), 0.5 * (start + e)),
            None => (Infinite, start + 1.0),
        };
        out.push(Piece {
            start,
            end,
            left: f.at(probe),
            right: g.at(probe),
        });
    }
    out
}

/// `μ(x)`: pooled blockwise singular values, each with its block weight.
pub fn mu(x: &Operator) -> Result<SValueFunction> {
    let svals = x.singular_values()?;
    let mut pairs = Vec::new();
    for (spec, vals) in x.shape().blocks().iter().zip(svals) {
        pairs.extend(vals.into_iter().map(|v| (v, spec.w)));
    }
    Ok(SValueFunction::from_pairs(pairs))
}

pub fn mu_at(x: &Operator, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("mu_s needs s > 0, got {s}")));
    }
    Ok(mu(x)?.at(s))
}

/// `∫_0^t μ_s(x) ds` for `t > 0`.
pub fn ky_fan_integral(x: &Operator, t: f64) -> Result<ExtReal> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("Ky Fan integral needs t > 0, got {t}")));
    }
    Ok(mu(x)?.integral_to(Finite(t)))
}

/// `d(t)` computed from the trace of the spectral projection itself.
pub fn distribution_by_projection(x: &Operator, t: f64) -> Result<ExtReal> {
    Ok(x.spectral_projection(Interval::above(t))?.trace())
}

/// `μ_s` through the distribution characterization
/// `min{t ≥ 0 : τ(p(t, ∞)) ≤ s}`, using projection traces only.
pub fn mu_by_distribution(x: &Operator, s: f64) -> Result<f64> {
    let mut candidates = vec![0.0];
    for vals in x.singular_values()? {
        candidates.extend(vals);
    }
    candidates.sort_by(f64::total_cmp);
    for t in candidates {
        if distribution_by_projection(x, t)? <= s {
            return Ok(t);
        }
    }
    unreachable!("d(max singular value) = 0")
}

#[derive(Debug, Clone, Serialize)]
pub struct SupOracleResult {
    /// Best value over spectral-subset projections.
    pub subset_best: f64,
    /// Best value over random admissible projections.
    pub random_best: f64,
}

impl SupOracleResult {
    pub fn value(&self) -> f64 {
        self.subset_best.max(self.random_best)
    }
}

/// Maximizes `τ(xp)` over projections with `τ(p) ≤ t`.
///
/// Candidates are every subset of the pooled eigenbasis (on diffuse blocks
/// one eigenvector may additionally be taken fractionally, filling the
/// remaining budget) plus `trials` Haar-random projections of admissible
/// trace.
pub fn ky_fan_sup_oracle(
    x: &Operator,
    t: f64,
    trials: usize,
    rng: &mut SplitMix64,
) -> Result<SupOracleResult> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("sup oracle needs t > 0, got {t}")));
    }
    let dim = x.shape().total_dim();
    if dim > SUP_ORACLE_MAX_DIM {
        return Err(Error::TooLarge {
            dim,
            limit: SUP_ORACLE_MAX_DIM,
        });
    }
    x.check_positive()?;
    struct Item {
        value: f64,
        width: f64,
        diffuse: bool,
    }
    let mut items = Vec::new();
    for (spec, m) in x.shape().blocks().iter().zip(x.blocks()) {
        match spec.w {
            Infinite if m.is_zero() => continue,
            Infinite => {
                return Err(Error::Refused(
                    "sup oracle needs every infinite-weight block to vanish".into(),
                ))
            }
            Finite(w) => {
                for v in linalg::eigh(m)?.values {
                    items.push(Item {
                        value: v.max(0.0),
                        width: w,
                        diffuse: spec.diffuse,
                    });
                }
            }
        }
    }
    let slack = 1e-12 * (1.0 + t);
    let mut subset_best: f64 = 0.0;
    for mask in 0u32..(1u32 << items.len()) {
        let (mut used, mut val) = (0.0, 0.0);
        for (i, it) in items.iter().enumerate() {
            if mask & (1 << i) != 0 {
                used += it.width;
                val += it.width * it.value;
            }
        }
        if used > t + slack {
            continue;
        }
        let left = (t - used).max(0.0);
        let frac = items
            .iter()
            .enumerate()
            .filter(|(i, it)| it.diffuse && mask & (1 << i) == 0)
            .map(|(_, it)| it.width.min(left) * it.value)
            .fold(0.0, f64::max);
        subset_best = subset_best.max(val + frac);
    }

    let mut random_best: f64 = 0.0;
    let specs = x.shape().blocks();
    for _ in 0..trials {
        let mut order: Vec<usize> = (0..specs.len()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.below(i + 1));
        }
        let mut remaining = t;
        let mut val = 0.0;
        for k in order {
            let spec = specs[k];
            let Finite(w) = spec.w else { continue };
            let max_rank = if spec.diffuse {
                spec.n
            } else {
                spec.n.min((remaining / w + 1e-12).floor() as usize)
            };
            let rank = rng.below(max_rank + 1);
            if rank == 0 {
                continue;
            }
            let portion = if spec.diffuse {
                (remaining / (rank as f64 * w)).min(1.0) * rng.uniform_in(0.5, 1.0)
            } else {
                1.0
            };
            let p = random::random_projection_matrix(rng, spec.n, rank);
            let xp = x.block(k) * &p;
            val += w * portion * xp.trace().re;
            remaining -= w * portion * rank as f64;
        }
        random_best = random_best.max(val);
    }
    Ok(SupOracleResult {
        subset_best,
        random_best,
    })
}

fn scale_of(fs: &[&SValueFunction]) -> f64 {
    1.0 + fs.iter().map(|f| f.sup()).fold(0.0, f64::max)
}

/// Items 1–5 of the standard s-number facts, at every breakpoint plus the
/// supplied `s`, `t`.
///
/// Item 4 uses the support projection of `b` as the projection `p`.
pub fn check_s_number_facts(
    x: &Operator,
    y: &Operator,
    a: &Operator,
    b: &Operator,
    s: f64,
    t: f64,
) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("s-number facts");
    let mu_a = mu(a)?;
    let mu_b = mu(b)?;
    let tol = COMPARE_TOL;

    // 1: μ(xay) ≤ ‖x‖‖y‖ μ(a)
    let bound = x.norm()? * y.norm()?;
    let mu_xay = mu(&x.mul(a)?.mul(y)?)?;
    let scaled = mu_a.map_levels(|l| l * bound);
    let sc = scale_of(&[&mu_xay, &scaled]);
    let mut margin = compare(&mu_xay, &scaled)
        .iter()
        .map(|p| p.right - p.left)
        .fold(f64::INFINITY, f64::min);
    for r in [s, t] {
        margin = margin.min(scaled.at(r) - mu_xay.at(r));
    }
    report.push(PropertyItem::checked("1: mu(xay) <= |x||y| mu(a)", margin, tol * sc));

    // 1 (monotone part): a ≤ b ⇒ μ(a) ≤ μ(b)
    let ordered = a.is_hermitian() && b.is_hermitian() && a.loewner_le(b, 1e-12)?;
    if ordered {
        let m = compare(&mu_a, &mu_b)
            .iter()
            .map(|p| p.right - p.left)
            .fold(f64::INFINITY, f64::min);
        report.push(PropertyItem::checked(
            "1: a <= b implies mu(a) <= mu(b)",
            m,
            tol * scale_of(&[&mu_a, &mu_b]),
        ));
    } else {
        report.push(PropertyItem::vacuous("1: a <= b implies mu(a) <= mu(b)"));
    }

    // 2: μ(|ab*|) = μ(||a||b||)
    let lhs = mu(&a.mul(&b.adjoint())?)?;
    let rhs = mu(&a.abs()?.mul(&b.abs()?)?)?;
    let diff = compare(&lhs, &rhs)
        .iter()
        .map(|p| (p.left - p.right).abs())
        .fold(0.0, f64::max);
    report.push(PropertyItem::checked(
        "2: mu(|ab*|) = mu(||a||b||)",
        -diff,
        tol * scale_of(&[&lhs, &rhs]),
    ));

    // 3: μ_{s+t}(a+b) ≤ μ_s(a) + μ_t(b)
    let mu_sum = mu(&a.add(b)?)?;
    let mut ss = mu_a.breakpoints();
    ss.push(s);
    let mut ts = mu_b.breakpoints();
    ts.push(t);
    let mut margin = f64::INFINITY;
    for &si in &ss {
        for &tj in &ts {
            margin = margin.min(mu_a.at(si) + mu_b.at(tj) - mu_sum.at(si + tj));
        }
    }
    report.push(PropertyItem::checked(
        "3: mu_{s+t}(a+b) <= mu_s(a) + mu_t(b)",
        margin,
        tol * scale_of(&[&mu_a, &mu_b, &mu_sum]),
    ));

    // 4: μ_r(ap) = 0 for r ≥ τ(p)
    let p = b.support_projection()?;
    match p.trace() {
        Finite(tp) => {
            let mu_ap = mu(&a.mul(p.operator())?)?;
            let worst = mu_ap.at(tp).max(mu_ap.at(tp.max(s))).max(mu_ap.at(tp.max(t)));
            report.push(PropertyItem::checked(
                "4: mu_s(ap) = 0 for s >= tau(p)",
                -worst,
                tol * scale_of(&[&mu_a]),
            ));
        }
        Infinite => report.push(PropertyItem::vacuous("4: mu_s(ap) = 0 for s >= tau(p)")),
    }

    // 5: τ(|a|) = ∫ μ(a)
    let tr = a.abs()?.trace_positive()?;
    let integral = mu_a.integral_to(Infinite);
    let item = match (tr, integral) {
        (Finite(x1), Finite(x2)) => PropertyItem::checked(
            "5: tau(|a|) = integral of mu(a)",
            -(x1 - x2).abs(),
            tol * (1.0 + x1.abs()),
        ),
        (Infinite, Infinite) => PropertyItem::checked("5: tau(|a|) = integral of mu(a)", 0.0, tol),
        _ => PropertyItem::boolean("5: tau(|a|) = integral of mu(a)", false),
    };
    report.push(item);
    Ok(report)
}

/// Rigidity: `a, b ≥ 0`, `a` τ-compact, `ab = 0` and `μ(a+b) = μ(a)` force `b = 0`.
pub fn check_orthogonal_rigidity(a: &Operator, b: &Operator) -> Result<PropertyReport> {
    const TITLE: &str = "orthogonal rigidity";
    let mu_a = mu(a)?;
    let scale = 1.0 + a.norm()?.max(b.norm()?);
    let hypotheses = a.is_positive()
        && b.is_positive()
        && mu_a.is_tau_compact()
        && a.mul(b)?.max_abs() <= COMPARE_TOL * scale * scale;
    if !hypotheses {
        return Ok(PropertyReport::not_applicable(TITLE));
    }
    let mut report = PropertyReport::new(TITLE);
    let sum = a.add(b)?;
    let mu_sum = mu(&sum)?;
    let mu_b = mu(b)?;

    // distribution additivity, probed strictly between consecutive levels
    let mut levels: Vec<f64> = mu_a.level_set();
    levels.extend(mu_b.level_set());
    levels.extend(mu_sum.level_set());
    levels.push(0.0);
    levels.sort_by(f64::total_cmp);
    levels.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * scale);
    let mut probes: Vec<f64> = levels.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    probes.push(levels.last().copied().unwrap_or(0.0) + 1.0);
    let additive = probes.iter().all(|&t| {
        mu_sum
            .distribution_at(t)
            .approx_eq(mu_a.distribution_at(t) + mu_b.distribution_at(t), 1e-12)
    });
    report.push(PropertyItem::boolean("distribution additivity", additive));

    if mu_sum.approx_eq(&mu_a, COMPARE_TOL * scale) {
        let b_norm = b.norm()?;
        report.push(PropertyItem::checked(
            "mu(a+b) = mu(a) implies b = 0",
            -b_norm,
            COMPARE_TOL * scale,
        ));
    } else {
        report.push(PropertyItem::vacuous("mu(a+b) = mu(a) implies b = 0"));
    }
    Ok(report)
}

/// Blockwise eigenvalues of a Hermitian `x`, together with 0 (always in the
/// spectrum because of the implicit infinite zero block), deduplicated.
pub fn spectrum(x: &Operator) -> Result<Vec<f64>> {
    let mut vals = vec![0.0];
    for m in x.blocks() {
        vals.extend(linalg::eigh(m)?.values);
    }
    Ok(dedup_levels(vals))
}

fn dedup_levels(mut vals: Vec<f64>) -> Vec<f64> {
    vals.sort_by(|a, b| b.total_cmp(a));
    let mut out: Vec<f64> = Vec::with_capacity(vals.len());
    for v in vals {
        match out.last() {
            Some(&last) if last - v <= LEVEL_MERGE_TOL * last.abs().max(1.0) => {}
            _ => out.push(v),
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SigmaReport {
    pub spectrum: Vec<f64>,
    pub mu_levels: Vec<f64>,
    pub equal: bool,
}

/// `σ(x) = clos{μ_s(x) : s > 0} ∪ {0}` for positive τ-compact `x`.
pub fn sigma_closure_check(x: &Operator) -> Result<SigmaReport> {
    x.check_positive()?;
    let m = mu(x)?;
    if !m.is_tau_compact() {
        return Err(Error::NotTauCompact {
            level: m.infinite_level(),
        });
    }
    let spectrum = spectrum(x)?;
    let mut levels = m.level_set();
    levels.push(0.0);
    let mu_levels = dedup_levels(levels);
    let tol = COMPARE_TOL * (1.0 + m.sup());
    let covered = |xs: &[f64], ys: &[f64]| {
        xs.iter()
            .all(|x| ys.iter().any(|y| (x - y).abs() <= tol))
    };
    let equal = covered(&spectrum, &mu_levels) && covered(&mu_levels, &spectrum);
    Ok(SigmaReport {
        spectrum,
        mu_levels,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraShape, BlockSpec};

    fn seg(level: f64, width: ExtReal) -> Segment {
        Segment { level, width }
    }

    #[test]
    fn atomic_mu_formula() {
        let x = Operator::diag(&[5.0, 4.0, 2.5, 1.0, 0.25], 1.0);
        let m = mu(&x).unwrap();
        // μ_s = Σ λ_k χ_[k,k+1)(s)
        for (k, lam) in [5.0, 4.0, 2.5, 1.0, 0.25].iter().enumerate() {
            for frac in [0.0, 0.3, 0.999] {
                assert_eq!(m.at(k as f64 + frac), *lam);
            }
        }
        assert_eq!(m.at(5.0), 0.0);
        assert_eq!(m.at(1e9), 0.0);
    }

    #[test]
    fn non_compact_diffuse_example() {
        let shape = AlgebraShape::new(vec![BlockSpec::diffuse(2, Infinite)]).unwrap();
        let x = Operator::from_diagonals(&shape, &[vec![1.0, 0.5]]).unwrap();
        let m = mu(&x).unwrap();
        assert_eq!(m.segments(), &[seg(1.0, Infinite)]);
        assert!(!m.is_tau_compact());
        assert_eq!(m.at(1e6), 1.0);
        assert!(matches!(
            sigma_closure_check(&x),
            Err(Error::NotTauCompact { .. })
        ));
        assert_eq!(spectrum(&x).unwrap(), vec![1.0, 0.5, 0.0]);
    }

    #[test]
    fn identity_weighted() {
        let x = Operator::identity(&AlgebraShape::single(2, 3.0));
        let m = mu(&x).unwrap();
        assert_eq!(m.segments(), &[seg(1.0, Finite(6.0)), seg(0.0, Infinite)]);
    }

    #[test]
    fn csv_of_diag321() {
        let m = mu(&Operator::diag(&[3.0, 2.0, 1.0], 1.0)).unwrap();
        assert_eq!(m.to_csv(), "0,1,3\n1,2,2\n2,3,1\n3,inf,0\n");
    }

    #[test]
    fn mu_at_examples() {
        let x = Operator::diag(&[3.0, 1.0], 1.0);
        assert_eq!(mu_at(&x, 0.5).unwrap(), 3.0);
        assert_eq!(mu_at(&x, 1.0).unwrap(), 1.0);
        assert!(matches!(mu_at(&x, 0.0), Err(Error::Domain(_))));
        assert!(matches!(mu_at(&x, -1.0), Err(Error::Domain(_))));
        let p = Operator::diag(&[1.0, 1.0, 0.0], 0.5);
        assert_eq!(mu_at(&p, 0.99).unwrap(), 1.0);
        assert_eq!(mu_at(&p, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn ky_fan_examples() {
        let id = Operator::identity(&AlgebraShape::single(2, 1.0));
        assert_eq!(ky_fan_integral(&id, 1.0).unwrap(), Finite(1.0));
        let x = Operator::diag(&[3.0, 2.0, 1.0], 1.0);
        assert_eq!(ky_fan_integral(&x, 2.0).unwrap(), Finite(5.0));
        assert_eq!(ky_fan_integral(&x, 1.5).unwrap(), Finite(4.0));
        assert_eq!(ky_fan_integral(&x, 100.0).unwrap(), Finite(6.0));
        assert!(ky_fan_integral(&x, 0.0).is_err());
    }

    #[test]
    fn infinite_integrals_are_honest() {
        let shape = AlgebraShape::new(vec![BlockSpec::diffuse(1, Infinite)]).unwrap();
        let x = Operator::from_diagonals(&shape, &[vec![0.5]]).unwrap();
        let m = mu(&x).unwrap();
        assert_eq!(m.integral_to(Infinite), Infinite);
        assert_eq!(m.integral_to(Finite(4.0)), Finite(2.0));
        assert_eq!(m.power_integral(2.0), Infinite);
    }

    #[test]
    fn merging_and_zero_tail() {
        let f = SValueFunction::from_pairs(vec![
            (2.0, Finite(1.0)),
            (2.0 + 1e-14, Finite(0.5)),
            (1e-14, Finite(3.0)),
        ]);
        assert_eq!(f.segments().len(), 2);
        assert_eq!(f.segments()[0].width, Finite(1.5));
        assert_eq!(f.segments()[1], seg(0.0, Infinite));
        assert!(f.is_tau_compact());
    }

    #[test]
    fn truncation() {
        let m = mu(&Operator::diag(&[5.0, 3.0, 3.0], 1.0)).unwrap();
        let t = m.truncate(2.0);
        assert_eq!(
            t.segments(),
            &[seg(5.0, Finite(1.0)), seg(3.0, Finite(1.0)), seg(0.0, Infinite)]
        );
    }

    #[test]
    fn distribution_matches_projection_traces() {
        let shape = AlgebraShape::new(vec![BlockSpec::atomic(2, 0.5), BlockSpec::atomic(1, 2.0)])
            .unwrap();
        let x = Operator::from_diagonals(&shape, &[vec![3.0, 1.0], vec![2.0]]).unwrap();
        let m = mu(&x).unwrap();
        let d = m.distribution();
        for t in [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0] {
            let direct = distribution_by_projection(&x, t).unwrap();
            assert_eq!(m.distribution_at(t), direct, "t = {t}");
            assert_eq!(d.at(t), direct, "t = {t}");
        }
        for s in [0.1, 0.5, 0.7, 2.4, 2.5, 3.0, 10.0] {
            assert_eq!(mu_by_distribution(&x, s).unwrap(), m.at(s), "s = {s}");
        }
    }

    #[test]
    fn sup_oracle_examples() {
        let mut rng = SplitMix64::new(1);
        let x = Operator::diag(&[3.0, 1.0], 1.0);
        let r = ky_fan_sup_oracle(&x, 1.0, 20, &mut rng).unwrap();
        assert!((r.subset_best - 3.0).abs() < 1e-12);
        assert!(r.random_best <= 3.0 + 1e-8);
        let z = Operator::zeros(&AlgebraShape::single(3, 1.0));
        assert_eq!(ky_fan_sup_oracle(&z, 1.0, 5, &mut rng).unwrap().value(), 0.0);
        let big = Operator::identity(&AlgebraShape::single(9, 1.0));
        assert!(matches!(
            ky_fan_sup_oracle(&big, 1.0, 0, &mut rng),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn sup_oracle_random_psd_top_two() {
        let mut rng = SplitMix64::new(99);
        let spec = [2.7, 1.3, 0.4];
        let m = random::conjugated_diag(&mut rng, &spec);
        let x = Operator::new(AlgebraShape::single(3, 1.0), vec![m]).unwrap();
        let r = ky_fan_sup_oracle(&x, 2.0, 20, &mut rng).unwrap();
        assert!((r.subset_best - 4.0).abs() < 1e-10);
        assert!(r.random_best <= 4.0 + 1e-8);
    }

    #[test]
    fn s_number_fact_examples() {
        let a = Operator::diag(&[2.0, 1.0], 1.0);
        let b = Operator::diag(&[1.0, 2.0], 1.0);
        let id = Operator::identity(a.shape());
        let r = check_s_number_facts(&id, &id, &a, &b, 0.5, 0.5).unwrap();
        assert!(r.all_hold(), "{r:?}");
        // item 1 with identities is an equality
        assert!(r.items[0].worst_margin.abs() < 1e-12);
        let lhs = mu(&a.mul(&b.adjoint()).unwrap()).unwrap();
        assert_eq!(lhs.at(0.0), 2.0);
        assert_eq!(lhs.at(1.9), 2.0);
        assert_eq!(lhs.at(2.0), 0.0);

        let a = Operator::diag(&[1.0, 0.0], 1.0);
        let p = Operator::diag(&[0.0, 1.0], 1.0);
        assert!(mu(&a.mul(&p).unwrap()).unwrap().at(1.0) == 0.0);
        let r = check_s_number_facts(&id, &id, &a, &p, 1.0, 1.0).unwrap();
        assert!(r.all_hold());
    }

    #[test]
    fn rigidity_examples() {
        let a = Operator::diag(&[2.0, 0.0], 1.0);
        let zero = Operator::zeros(a.shape());
        let r = check_orthogonal_rigidity(&a, &zero).unwrap();
        assert!(r.hypotheses_met && r.all_hold());
        assert!(r.items[1].applicable);

        let b = Operator::diag(&[0.0, 1.0], 1.0);
        let r = check_orthogonal_rigidity(&a, &b).unwrap();
        assert!(r.hypotheses_met && r.all_hold());
        assert!(!r.items[1].applicable);

        let b = Operator::diag(&[0.0, 2.0], 1.0);
        let r = check_orthogonal_rigidity(&a, &b).unwrap();
        assert!(!r.items[1].applicable);
        assert_eq!(mu(&a.add(&b).unwrap()).unwrap().segments()[0].width, Finite(2.0));

        let not_orth = Operator::diag(&[1.0, 1.0], 1.0);
        let r = check_orthogonal_rigidity(&a, &not_orth).unwrap();
        assert!(!r.hypotheses_met);
    }

    #[test]
    fn sigma_examples() {
        let r = sigma_closure_check(&Operator::diag(&[2.0, 1.0], 1.0)).unwrap();
        assert!(r.equal);
        assert_eq!(r.spectrum, vec![2.0, 1.0, 0.0]);
        let r = sigma_closure_check(&Operator::zeros(&AlgebraShape::single(2, 1.0))).unwrap();
        assert!(r.equal);
        assert_eq!(r.spectrum, vec![0.0]);
    }
}
