//! Young's inequality for s-numbers and its equality case.
//!
//! The central object is the gap `s ↦ μ_s(D) − μ_s(ab*)` with
//! `D = |a|^p/p + |b|^q/q`. Inputs are exchanged internally so that the
//! canonical exponent satisfies `1 < p ≤ 2`; this is harmless because
//! `μ(ab*) = μ(ba*)` and `D` is symmetric in `(a, p) ↔ (b, q)`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{Interval, Operator};
use crate::error::{Error, Result};
use crate::extreal::{ExtReal, Finite, Infinite};
use crate::linalg;
use crate::report::{PropertyItem, PropertyReport};
use crate::svalues::{self, SValueFunction};

/// Negative gaps beyond this are reported as violations of the inequality.
pub const VIOLATION_TOL: f64 = 1e-10;
/// Default absolute tolerance for μ-equality.
pub const EQUALITY_TOL: f64 = 1e-9;
/// Relative singular-value cutoff of the Douglas pseudo-inverse.
pub const DOUGLAS_CUTOFF: f64 = 1e-12;

pub fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("exponent must satisfy 1 < p < inf, got {p}")))
    }
}

/// `|a|^p/p + |b|^q/q`.
pub fn young_mean(a: &Operator, b: &Operator, p: f64) -> Result<Operator> {
    check_exponent(p)?;
    let q = conjugate(p);
    a.abs()?
        .power(p)?
        .scale(1.0 / p)
        .add(&b.abs()?.power(q)?.scale(1.0 / q))
}

#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    /// Canonical exponent, `1 < p ≤ 2`.
    pub p: f64,
    pub q: f64,
    /// Whether the inputs were exchanged to reach the canonical orientation.
    pub swapped: bool,
    pub breakpoints: Vec<f64>,
    pub mu_ab: Vec<f64>,
    #[serde(rename = "mu_D")]
    pub mu_d: Vec<f64>,
    pub gap: Vec<f64>,
    pub min_gap: f64,
    pub max_gap: f64,
    pub equality: bool,
    pub violation: bool,
}

impl GapReport {
    /// CSV rows `s_start,s_end,mu_ab,mu_D,gap`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s_start,s_end,mu_ab,mu_D,gap\n");
        for i in 0..self.breakpoints.len() {
            let end = self
                .breakpoints
                .get(i + 1)
                .map_or(Infinite, |&e| Finite(e));
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                self.breakpoints[i], end, self.mu_ab[i], self.mu_d[i], self.gap[i]
            );
        }
        out
    }
}

/// Compares `μ(ab*)` with `μ(D)` on the union of their breakpoints.
pub fn young_gap(a: &Operator, b: &Operator, p: f64) -> Result<GapReport> {
    young_gap_tol(a, b, p, EQUALITY_TOL)
}

pub fn young_gap_tol(a: &Operator, b: &Operator, p: f64, tol: f64) -> Result<GapReport> {
    check_exponent(p)?;
    let swapped = p > 2.0;
    let (a, b, p) = if swapped { (b, a, conjugate(p)) } else { (a, b, p) };
    let mu_ab = svalues::mu(&a.mul(&b.adjoint())?)?;
    let mu_d = svalues::mu(&young_mean(a, b, p)?)?;
    Ok(gap_from(&mu_ab, &mu_d, p, swapped, tol))
}

fn gap_from(mu_ab: &SValueFunction, mu_d: &SValueFunction, p: f64, swapped: bool, tol: f64) -> GapReport {
    let pieces = svalues::compare(mu_ab, mu_d);
    let gap: Vec<f64> = pieces.iter().map(|x| x.right - x.left).collect();
    let min_gap = gap.iter().copied().fold(f64::INFINITY, f64::min);
    let max_gap = gap.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    GapReport {
        p,
        q: conjugate(p),
        swapped,
        breakpoints: pieces.iter().map(|x| x.start).collect(),
        mu_ab: pieces.iter().map(|x| x.left).collect(),
        mu_d: pieces.iter().map(|x| x.right).collect(),
        equality: gap.iter().all(|g| g.abs() <= tol),
        violation: min_gap < -VIOLATION_TOL,
        gap,
        min_gap,
        max_gap,
    }
}

/// `(a, a^{p/q})`, so that `a^p = b^q` at the eigenvalue level.
pub fn equality_witness(a: &Operator, p: f64) -> Result<(Operator, Operator)> {
    check_exponent(p)?;
    a.check_positive()?;
    let b = a.power(p - 1.0)?;
    Ok((a.clone(), b))
}

#[derive(Debug, Clone, Serialize)]
pub struct EqualityVerdict {
    pub equality_of_mu: bool,
    pub min_gap: f64,
    pub max_gap: f64,
    /// Largest entry modulus of `|a|^p − |b|^q`.
    pub power_identity_residual: f64,
    /// `tol·κ` with `κ = 1 + max(‖a‖, ‖b‖)^{max(p, q)}`.
    pub residual_bound: f64,
    /// Support comparison; only evaluated when μ-equality holds and `p ≠ 2`.
    pub range_coincidence: Option<bool>,
    /// `p = q = 2`, where the weaker integrability hypothesis suffices.
    pub p_equals_two: bool,
    pub theorem_consistent: bool,
}

/// Detects μ-equality and, when it holds, checks that `|a|^p = |b|^q`.
pub fn equality_detect(a: &Operator, b: &Operator, p: f64, tol: f64) -> Result<EqualityVerdict> {
    check_exponent(p)?;
    for x in [a, b] {
        let m = svalues::mu(x)?;
        if !m.is_tau_compact() {
            return Err(Error::NotTauCompact {
                level: m.segments().last().map_or(0.0, |s| s.level),
            });
        }
    }
    let q = conjugate(p);
    let gap = young_gap_tol(a, b, p, tol)?;
    let ap = a.abs()?.power(p)?;
    let bq = b.abs()?.power(q)?;
    let residual = ap.max_abs_diff(&bq)?;
    let kappa = 1.0 + a.norm()?.max(b.norm()?).powf(p.max(q));
    let residual_bound = tol * kappa;
    let p_equals_two = (p - 2.0).abs() <= 1e-12;
    let range_coincidence = if gap.equality && !p_equals_two {
        let pa = a.abs()?.support_projection()?;
        let pb = b.abs()?.support_projection()?;
        Some(pa.operator().approx_eq(pb.operator())?)
    } else {
        None
    };
    Ok(EqualityVerdict {
        equality_of_mu: gap.equality,
        min_gap: gap.min_gap,
        max_gap: gap.max_gap,
        power_identity_residual: residual,
        residual_bound,
        range_coincidence,
        p_equals_two,
        theorem_consistent: !gap.equality || residual <= residual_bound,
    })
}

/// μ-equality with `p ≠ 2` forces the closed ranges of `a` and `b` to agree.
pub fn range_coincidence_check(a: &Operator, b: &Operator, p: f64) -> Result<PropertyReport> {
    check_exponent(p)?;
    if (p - 2.0).abs() <= 1e-12 {
        return Err(Error::Refused("range coincidence needs p != 2".into()));
    }
    const TITLE: &str = "range coincidence";
    if !(a.is_positive() && b.is_positive() && young_gap(a, b, p)?.equality) {
        return Ok(PropertyReport::not_applicable(TITLE));
    }
    let pa = a.support_projection()?.into_operator();
    let pb = b.support_projection()?.into_operator();
    let mut r = PropertyReport::new(TITLE);
    r.push(PropertyItem::checked(
        "support(a) = support(b)",
        -pa.max_abs_diff(&pb)?,
        1e-9,
    ));
    Ok(r)
}

#[derive(Debug, Clone, Serialize)]
pub struct SaturationReport {
    pub tau_p: f64,
    pub tau_px: f64,
    /// `∫_0^{τ(P)} μ(x)`.
    pub ky_fan: f64,
    /// `ky_fan − τ(Px)`, never negative up to roundoff.
    pub deficit: f64,
    pub saturated: bool,
    /// Largest entry modulus of `xP − Px`.
    pub commutator: f64,
    pub commutator_tol: f64,
    pub commutes: bool,
    /// `‖xP − Px‖_2² ≤ 4‖x‖·deficit`, the quantitative form of the implication.
    pub quantitative_bound_holds: bool,
}

impl SaturationReport {
    pub fn implication_holds(&self) -> bool {
        !self.saturated || self.commutes
    }
}

/// Saturation `τ(Px) = ∫_0^{τ(P)} μ(x)` forces `xP = Px`.
///
/// Because `‖[x, P]‖_2² ≤ 4‖x‖ (∫_0^{τ(P)} μ − τ(Px))`, a deficit of `δ`
/// only pins the commutator down to `O(√δ)`; the commutation tolerance is
/// derived from the saturation tolerance through this bound.
pub fn trace_saturation_commutes(x: &Operator, p: &Operator, tol: f64) -> Result<SaturationReport> {
    x.check_positive()?;
    let proj = crate::algebra::Projection::new(p.clone())?;
    let Finite(tau_p) = proj.trace() else {
        return Err(Error::Refused("projection must have finite trace".into()));
    };
    let tau_px = p.mul(x)?.trace()?.re;
    let ky_fan = svalues::mu(x)?
        .integral_to(Finite(tau_p))
        .finite()
        .ok_or_else(|| Error::Refused("x is not integrable on the corner".into()))?;
    let deficit = ky_fan - tau_px;
    let sat_tol = tol * (1.0 + ky_fan.abs());
    let saturated = deficit.abs() <= sat_tol;

    let nx = x.norm()?;
    let comm = x.mul(p)?.sub(&p.mul(x)?)?;
    let commutator = comm.max_abs();
    let w_min = x
        .shape()
        .blocks()
        .iter()
        .filter_map(|b| b.w.finite())
        .fold(f64::INFINITY, f64::min);
    let w_min = if w_min.is_finite() { w_min } else { 1.0 };
    let commutator_tol = 2.0 * (nx * sat_tol / w_min).sqrt() + tol * (1.0 + nx);
    let hs2 = comm.adjoint().mul(&comm)?.trace()?.re;
    let quantitative_bound_holds = hs2 <= 4.0 * nx * deficit.max(0.0) + tol * (1.0 + nx * nx);
    Ok(SaturationReport {
        tau_p,
        tau_px,
        ky_fan,
        deficit,
        saturated,
        commutator,
        commutator_tol,
        commutes: commutator <= commutator_tol,
        quantitative_bound_holds,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DouglasFactor {
    #[serde(skip)]
    pub c: Operator,
    /// Largest entry modulus of `x − yc`.
    pub residual: f64,
    pub c_norm: f64,
}

/// Contraction-type factor `x = yc` under `xx* ≤ λ yy*`.
pub fn douglas_factor(x: &Operator, y: &Operator, lambda: f64) -> Result<DouglasFactor> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    let xx = x.mul(&x.adjoint())?;
    let yy = y.mul(&y.adjoint())?;
    let diff = yy.scale(lambda).sub(&xx)?;
    let scale = 1.0 + xx.norm()?.max(lambda * yy.norm()?);
    for (k, m) in diff.blocks().iter().enumerate() {
        let e = linalg::eigh(m)?;
        if let Some(&lo) = e.values.last() {
            if lo < -1e-9 * scale {
                return Err(Error::MajorizationViolated {
                    block: k,
                    excess: -lo,
                    witness: e.vectors.column(e.values.len() - 1),
                });
            }
        }
    }
    let c = y.pseudo_inverse(DOUGLAS_CUTOFF)?.mul(x)?;
    let residual = x.sub(&y.mul(&c)?)?.max_abs();
    let c_norm = c.norm()?;
    Ok(DouglasFactor { c, residual, c_norm })
}

#[derive(Debug, Clone)]
pub struct LpLocSplit {
    /// `r = μ_t(a)`.
    pub r: f64,
    /// `a·p^{|a|}(r, ∞)`.
    pub summable: Operator,
    /// `a·p^{|a|}[0, r]`.
    pub bounded: Operator,
}

/// Splits `a` at level `r = μ_t(a)` into a part with finite `∫ μ^p` and a
/// part of uniform norm at most `r`.
pub fn lp_loc_split(a: &Operator, p: f64, t: f64) -> Result<LpLocSplit> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("exponent must be >= 1, got {p}")));
    }
    let r = svalues::mu_at(a, t)?;
    let high = a.spectral_projection(Interval::above(r))?;
    let low = a.spectral_projection(Interval::up_to(r))?;
    Ok(LpLocSplit {
        r,
        summable: a.mul(high.operator())?,
        bounded: a.mul(low.operator())?,
    })
}

fn finite_or_refuse(v: ExtReal, what: &str) -> Result<f64> {
    v.finite()
        .ok_or_else(|| Error::Refused(format!("{what} is not finite")))
}

/// Double saturation in Hölder and the scalar Young inequality forces `a^p = b^q`.
pub fn hoelder_equality_oracle(a: &Operator, b: &Operator, p: f64, tol: f64) -> Result<PropertyReport> {
    check_exponent(p)?;
    a.check_positive()?;
    b.check_positive()?;
    let q = conjugate(p);
    let n1 = finite_or_refuse(svalues::mu(&a.mul(b)?)?.integral_to(Infinite), "trace norm of ab")?;
    let ap_int = finite_or_refuse(svalues::mu(a)?.power_integral(p), "p-norm of a")?;
    let bq_int = finite_or_refuse(svalues::mu(b)?.power_integral(q), "q-norm of b")?;
    let (na, nb) = (ap_int.powf(1.0 / p), bq_int.powf(1.0 / q));
    let mean = ap_int / p + bq_int / q;
    let scale = 1.0 + mean;

    let mut r = PropertyReport::new("Hoelder equality");
    r.push(PropertyItem::checked("|ab|_1 <= |a|_p |b|_q", na * nb - n1, tol * scale));
    r.push(PropertyItem::checked(
        "|a|_p |b|_q <= |a|_p^p/p + |b|_q^q/q",
        mean - na * nb,
        tol * scale,
    ));
    let saturated = (na * nb - n1).abs() <= tol * scale && (mean - n1).abs() <= tol * scale;
    r.hypotheses_met = saturated;
    if saturated {
        let ap = a.power(p)?;
        let bq = b.power(q)?;
        let kappa = 1.0 + a.norm()?.max(b.norm()?).powf(p.max(q));
        r.push(PropertyItem::checked("a^p = b^q", -ap.max_abs_diff(&bq)?, tol * kappa));
    } else {
        r.push(PropertyItem::vacuous("a^p = b^q"));
    }
    Ok(r)
}

/// Spectral truncation `|x|·χ_[0, r](|x|)`.
fn truncate_at(x: &Operator, r: f64) -> Result<Operator> {
    x.mul(x.spectral_projection(Interval::up_to(r))?.operator())
}

fn quantile_levels(x: &Operator, levels: usize) -> Result<Vec<f64>> {
    let mut vals: Vec<f64> = x.singular_values()?.into_iter().flatten().collect();
    vals.sort_by(f64::total_cmp);
    vals.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    if vals.is_empty() {
        vals.push(0.0);
    }
    let len = vals.len();
    Ok((1..=levels)
        .map(|n| vals[(n * len).div_ceil(levels) - 1])
        .collect())
}

/// Bounded truncations `x_n ↑ |a|`, `y_n ↑ |b|` give `μ(x_n y_n) ↑ μ(|a||b|) ≤ μ(D)`.
pub fn truncation_limit_check(a: &Operator, b: &Operator, p: f64, levels: usize) -> Result<PropertyReport> {
    check_exponent(p)?;
    if levels == 0 {
        return Err(Error::Domain("need at least one truncation level".into()));
    }
    let (aa, bb) = (a.abs()?, b.abs()?);
    let ra = quantile_levels(&aa, levels)?;
    let rb = quantile_levels(&bb, levels)?;
    let mu_d = svalues::mu(&young_mean(a, b, p)?)?;
    let limit = svalues::mu(&aa.mul(&bb)?)?;
    let scale = 1.0 + mu_d.sup();
    let tol = EQUALITY_TOL * scale;

    let mut report = PropertyReport::new("truncation limit");
    let mut prev: Option<SValueFunction> = None;
    let mut monotone = f64::INFINITY;
    let mut sandwich = f64::INFINITY;
    for n in 0..levels {
        let xn = truncate_at(&aa, ra[n])?;
        let yn = truncate_at(&bb, rb[n])?;
        let m = svalues::mu(&xn.mul(&yn)?)?;
        if let Some(prev) = &prev {
            for piece in svalues::compare(prev, &m) {
                monotone = monotone.min(piece.right - piece.left);
            }
        }
        for piece in svalues::compare(&m, &mu_d) {
            sandwich = sandwich.min(piece.right - piece.left);
        }
        prev = Some(m);
    }
    if levels > 1 {
        report.push(PropertyItem::checked("mu(x_n y_n) non-decreasing", monotone, tol));
    } else {
        report.push(PropertyItem::vacuous("mu(x_n y_n) non-decreasing"));
    }
    report.push(PropertyItem::checked("mu(x_n y_n) <= mu(D)", sandwich, tol));
    let last = prev.expect("levels >= 1");
    let dist = svalues::compare(&last, &limit)
        .iter()
        .map(|x| (x.left - x.right).abs())
        .fold(0.0, f64::max);
    report.push(PropertyItem::checked("mu(x_n y_n) -> mu(|a||b|)", -dist, tol));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraShape, BlockSpec};
    use crate::random::{self, SplitMix64};

    fn d(v: &[f64]) -> Operator {
        Operator::diag(v, 1.0)
    }

    #[test]
    fn projection_gap_is_zero() {
        let p = d(&[1.0, 0.0, 1.0]);
        for exp in [1.5, 2.0, 3.0] {
            let g = young_gap(&p, &p, exp).unwrap();
            assert!(g.equality);
            assert!(g.gap.iter().all(|x| x.abs() < 1e-14));
        }
    }

    #[test]
    fn diag_pair_gap() {
        let g = young_gap(&d(&[2.0, 1.0]), &d(&[1.0, 2.0]), 2.0).unwrap();
        assert_eq!(g.breakpoints, vec![0.0, 2.0]);
        assert!((g.mu_ab[0] - 2.0).abs() < 1e-14);
        assert!((g.mu_d[0] - 2.5).abs() < 1e-14);
        assert!((g.gap[0] - 0.5).abs() < 1e-14);
        assert!(!g.equality && !g.violation);
    }

    #[test]
    fn cubic_witness() {
        let (a, b) = equality_witness(&d(&[8.0, 1.0]), 3.0).unwrap();
        assert!(b.approx_eq(&d(&[64.0, 1.0])).unwrap());
        let g = young_gap(&a, &b, 3.0).unwrap();
        assert!(g.swapped && g.equality);
        assert!((g.p - 1.5).abs() < 1e-15);
        let v = equality_detect(&a, &b, 3.0, 1e-9).unwrap();
        assert!(v.equality_of_mu && v.theorem_consistent);
        assert!(v.power_identity_residual < 1e-9);
        assert_eq!(v.range_coincidence, Some(true));
    }

    #[test]
    fn witness_edge_cases() {
        let id = Operator::identity(&AlgebraShape::single(2, 1.0));
        let (_, b) = equality_witness(&id, 1.7).unwrap();
        assert!(b.approx_eq(&id).unwrap());
        let z = Operator::zeros(&AlgebraShape::single(2, 1.0));
        let (_, b) = equality_witness(&z, 3.0).unwrap();
        assert!(b.is_zero());
        assert!(young_gap(&z, &b, 3.0).unwrap().equality);
        assert!(matches!(young_gap(&id, &id, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn perturbed_witness_is_detected() {
        let a = d(&[8.0, 1.0]);
        let b = d(&[64.0, 1.001]);
        let v = equality_detect(&a, &b, 3.0, 1e-9).unwrap();
        assert!(!v.equality_of_mu);
        assert!(v.power_identity_residual > 0.0);
        assert!(v.theorem_consistent);
        let v = equality_detect(&d(&[2.0, 1.0]), &d(&[1.0, 2.0]), 2.0, 1e-9).unwrap();
        assert!(!v.equality_of_mu && v.theorem_consistent && v.p_equals_two);
    }

    #[test]
    fn detect_refuses_non_compact() {
        let shape = AlgebraShape::new(vec![BlockSpec::diffuse(1, Infinite)]).unwrap();
        let x = Operator::from_diagonals(&shape, &[vec![1.0]]).unwrap();
        assert!(matches!(
            equality_detect(&x, &x, 2.0, 1e-9),
            Err(Error::NotTauCompact { .. })
        ));
    }

    #[test]
    fn range_examples() {
        let (a, b) = equality_witness(&d(&[3.0, 0.0, 1.0]), 3.0).unwrap();
        let r = range_coincidence_check(&a, &b, 3.0).unwrap();
        assert!(r.hypotheses_met && r.all_hold());
        let r = range_coincidence_check(&d(&[1.0, 0.0]), &d(&[0.0, 1.0]), 3.0).unwrap();
        assert!(!r.hypotheses_met);
        assert!(matches!(
            range_coincidence_check(&a, &b, 2.0),
            Err(Error::Refused(_))
        ));
        let mut rng = SplitMix64::new(4);
        let x = random::random_positive(&mut rng, &AlgebraShape::single(4, 1.0));
        let (a, b) = equality_witness(&x, 1.5).unwrap();
        assert!(range_coincidence_check(&a, &b, 1.5).unwrap().all_hold());
    }

    #[test]
    fn saturation_examples() {
        let x = d(&[3.0, 2.0, 1.0]);
        let r = trace_saturation_commutes(&x, &d(&[1.0, 0.0, 0.0]), 1e-9).unwrap();
        assert!(r.saturated && r.commutes && r.quantitative_bound_holds);
        assert_eq!(r.tau_px, 3.0);

        let h = 0.5;
        let p = crate::linalg::Matrix::from_parts(
            &[vec![h, h, 0.0], vec![h, h, 0.0], vec![0.0, 0.0, 0.0]],
            None,
        )
        .unwrap();
        let p = Operator::new(x.shape().clone(), vec![p]).unwrap();
        let r = trace_saturation_commutes(&x, &p, 1e-9).unwrap();
        assert!((r.tau_px - 2.5).abs() < 1e-14);
        assert!(!r.saturated && !r.commutes && r.implication_holds());
        assert!(r.quantitative_bound_holds);

        let r = trace_saturation_commutes(&x, &Operator::identity(x.shape()), 1e-9).unwrap();
        assert!(r.saturated && r.commutes);
    }

    #[test]
    fn douglas_examples() {
        let mut rng = SplitMix64::new(8);
        let shape = AlgebraShape::single(3, 1.0);
        let y = random::random_general(&mut rng, &shape);
        let f = douglas_factor(&y, &y, 1.0).unwrap();
        assert!(f.residual < 1e-10 && f.c_norm <= 1.0 + 1e-8);

        let p = d(&[1.0, 0.0, 1.0]);
        let f = douglas_factor(&p, &Operator::identity(&shape), 1.0).unwrap();
        assert!(f.c.approx_eq(&p).unwrap());

        let c0 = random::random_contraction(&mut rng, &shape);
        let x = y.mul(&c0).unwrap();
        let f = douglas_factor(&x, &y, 1.0).unwrap();
        assert!(f.residual <= 1e-8 * (1.0 + x.norm().unwrap()));
        assert!(f.c_norm <= 1.0 + 1e-8);

        let err = douglas_factor(&d(&[1.0, 1.0, 0.0]), &d(&[1.0, 0.0, 0.0]), 1.0).unwrap_err();
        match err {
            Error::MajorizationViolated { block, excess, witness } => {
                assert_eq!(block, 0);
                assert!((excess - 1.0).abs() < 1e-12);
                assert!((witness[1].norm() - 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lp_loc_examples() {
        let shape = AlgebraShape::new(vec![BlockSpec::atomic(1, 1.0), BlockSpec::diffuse(1, Infinite)])
            .unwrap();
        let a = Operator::from_diagonals(&shape, &[vec![5.0], vec![0.5]]).unwrap();
        let s = lp_loc_split(&a, 1.0, 1.0).unwrap();
        assert_eq!(s.r, 0.5);
        assert!(s.summable.approx_eq(&Operator::from_diagonals(&shape, &[vec![5.0], vec![0.0]]).unwrap()).unwrap());
        assert_eq!(s.bounded.norm().unwrap(), 0.5);
        assert!(s.summable.add(&s.bounded).unwrap().approx_eq(&a).unwrap());
        assert_eq!(svalues::mu(&s.summable).unwrap().power_integral(2.0), Finite(25.0));

        let z = Operator::zeros(&shape);
        let s = lp_loc_split(&z, 2.0, 3.0).unwrap();
        assert!(s.summable.is_zero() && s.bounded.is_zero());
    }

    #[test]
    fn lp_loc_truncation_inside_a_segment() {
        // t = 1 falls inside the level-3 segment of width 2
        let a = d(&[3.0, 3.0, 1.0]);
        let s = lp_loc_split(&a, 1.0, 1.0).unwrap();
        assert_eq!(s.r, 3.0);
        assert!(s.summable.is_zero());
        let m = svalues::mu(&a).unwrap();
        assert_eq!(svalues::mu(&s.summable).unwrap(), m.truncate(m.distribution_at(s.r).finite().unwrap()));
        let s = lp_loc_split(&a, 1.0, 2.0).unwrap();
        assert_eq!(svalues::mu(&s.summable).unwrap(), m.truncate(2.0));
    }

    #[test]
    fn hoelder_examples() {
        let mut rng = SplitMix64::new(12);
        let a = random::random_positive(&mut rng, &AlgebraShape::single(3, 0.5));
        let r = hoelder_equality_oracle(&a, &a, 2.0, 1e-9).unwrap();
        assert!(r.hypotheses_met && r.all_hold(), "{r:?}");

        let r = hoelder_equality_oracle(&d(&[8.0, 1.0]), &d(&[64.0, 1.0]), 3.0, 1e-9).unwrap();
        assert!(r.hypotheses_met && r.all_hold(), "{r:?}");

        let r = hoelder_equality_oracle(&d(&[2.0, 1.0]), &d(&[1.0, 2.0]), 2.0, 1e-9).unwrap();
        assert!(!r.hypotheses_met && r.all_hold());
        assert!((r.items[0].worst_margin - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_examples() {
        let a = d(&[4.0, 2.0, 1.0]);
        let (a, b) = equality_witness(&a, 2.0).unwrap();
        let r = truncation_limit_check(&a, &b, 2.0, 3).unwrap();
        assert!(r.all_hold(), "{r:?}");
        let r = truncation_limit_check(&a, &b, 2.0, 1).unwrap();
        assert!(r.all_hold());
        let z = Operator::zeros(a.shape());
        assert!(truncation_limit_check(&z, &z, 3.0, 2).unwrap().all_hold());
    }

    #[test]
    fn gap_csv_and_json() {
        let g = young_gap(&d(&[2.0, 1.0]), &d(&[1.0, 2.0]), 2.0).unwrap();
        assert_eq!(g.to_csv(), "s_start,s_end,mu_ab,mu_D,gap\n0,2,2,2.5,0.5\n2,inf,0,0,0\n");
        let v = serde_json::to_value(&g).unwrap();
        for key in ["p", "breakpoints", "mu_ab", "mu_D", "gap", "equality"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
