//! Complete flags in the diffuse model.
//!
//! A flag is stored as an allocation: eigenvectors of `x` consumed in
//! non-increasing eigenvalue order, each occupying a trace interval of length
//! equal to its block weight. `e_t` is the prefix of trace `t`; when `t` cuts
//! an eigenvector in half the cut eigenvector contributes fractionally, which
//! only makes sense on a diffuse block (`x ⊗ 1` inside `A ⊗ L^∞[0,1]`). To turn
//! such an `e_t` into an honest projection the block is split into copies of
//! smaller weight; see [`Refinement`].

use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{AlgebraShape, BlockSpec, Operator, Projection, SUPPORT_TOL};
use crate::error::{Error, Result};
use crate::extreal::{ExtReal, Finite, Infinite};
use crate::linalg::{self, Matrix};
use crate::report::{PropertyItem, PropertyReport};
use crate::svalues::{self, LEVEL_MERGE_TOL};

/// Largest total dimension accepted by the proof replay.
pub const CI_MAX_DIM: usize = 16;
/// Tolerance for the identities checked by the proof replay.
pub const CI_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlagEntry {
    pub block: usize,
    pub eigenindex: usize,
    pub level: f64,
    pub start: f64,
    pub width: ExtReal,
}

impl FlagEntry {
    pub fn end(&self) -> ExtReal {
        self.width + self.start
    }
}

#[derive(Debug, Clone)]
pub struct CompleteFlag {
    shape: AlgebraShape,
    vectors: Vec<Matrix>,
    entries: Vec<FlagEntry>,
}

/// `e_t`: a set of whole eigenvectors plus at most one fractional one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlagProjection {
    pub full: Vec<(usize, usize)>,
    /// `(block, eigenindex, trace consumed)`.
    pub partial: Option<(usize, usize, f64)>,
}

impl FlagProjection {
    pub fn trace(&self, shape: &AlgebraShape) -> ExtReal {
        let whole: ExtReal = self.full.iter().map(|&(k, _)| shape.blocks()[k].w).sum();
        whole + self.partial.map_or(0.0, |(_, _, a)| a)
    }

    /// Range inclusion `self ≤ other`.
    pub fn le(&self, other: &FlagProjection) -> bool {
        let in_full = |kj: &(usize, usize)| other.full.contains(kj);
        self.full.iter().all(in_full)
            && match self.partial {
                None => true,
                Some((k, j, a)) => {
                    in_full(&(k, j))
                        || matches!(other.partial, Some((k2, j2, b)) if (k2, j2) == (k, j) && b >= a)
                }
            }
    }
}

/// Blockwise spectral data of `x` with ties ordered by `(block, eigenindex)`.
pub fn build_flag(x: &Operator) -> Result<CompleteFlag> {
    x.check_positive()?;
    let m = svalues::mu(x)?;
    if !m.is_tau_compact() {
        return Err(Error::NotTauCompact {
            level: m.segments().last().map_or(0.0, |s| s.level),
        });
    }
    let thr = SUPPORT_TOL * (1.0 + x.norm()?);
    let mut finite = Vec::new();
    let mut infinite = Vec::new();
    let mut vectors = Vec::with_capacity(x.blocks().len());
    for (k, (spec, block)) in x.shape().blocks().iter().zip(x.blocks()).enumerate() {
        let e = linalg::eigh(block)?;
        let nonzero = e.values.first().is_some_and(|&v| v > thr);
        if !spec.diffuse {
            if nonzero {
                return Err(Error::FlagNotConstructible { block: k });
            }
            vectors.push(e.vectors);
            continue;
        }
        for (j, &v) in e.values.iter().enumerate() {
            let item = (v.max(0.0), k, j, spec.w);
            match spec.w {
                Finite(_) => finite.push(item),
                Infinite => infinite.push(item),
            }
        }
        vectors.push(e.vectors);
    }
    finite.sort_by(|a, b| b.0.total_cmp(&a.0));
    // group near-equal levels, then order each group by (block, eigenindex)
    let mut ordered = Vec::with_capacity(finite.len() + infinite.len());
    let mut group: Vec<(f64, usize, usize, ExtReal)> = Vec::new();
    let mut anchor = f64::NAN;
    for item in finite {
        if !(anchor - item.0 <= LEVEL_MERGE_TOL * anchor.max(1.0)) {
            group.sort_by_key(|g| (g.1, g.2));
            ordered.append(&mut group);
            anchor = item.0;
        }
        group.push(item);
    }
    group.sort_by_key(|g| (g.1, g.2));
    ordered.append(&mut group);
    infinite.sort_by_key(|g| (g.1, g.2));
    ordered.extend(infinite);

    let mut entries = Vec::with_capacity(ordered.len());
    let mut start = 0.0;
    for (level, block, eigenindex, width) in ordered {
        entries.push(FlagEntry {
            block,
            eigenindex,
            level,
            start,
            width,
        });
        match width {
            Finite(w) => start += w,
            Infinite => break,
        }
    }
    Ok(CompleteFlag {
        shape: x.shape().clone(),
        vectors,
        entries,
    })
}

impl CompleteFlag {
    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn entries(&self) -> &[FlagEntry] {
        &self.entries
    }

    /// Trace of the join of all `e_t`.
    pub fn total(&self) -> ExtReal {
        self.entries.last().map_or(ExtReal::ZERO, |e| e.end())
    }

    pub fn eigenvector(&self, block: usize, eigenindex: usize) -> Vec<crate::linalg::C64> {
        self.vectors[block].column(eigenindex)
    }

    /// `e_t`; for `t` beyond the total trace this is the join of the flag.
    pub fn e(&self, t: f64) -> FlagProjection {
        let t = t.max(0.0);
        // entries are sorted by start; find the first one not entirely inside [0, t]
        let cut = self.entries.partition_point(|e| e.end() <= t);
        let full = self.entries[..cut]
            .iter()
            .map(|e| (e.block, e.eigenindex))
            .collect();
        let partial = self
            .entries
            .get(cut)
            .filter(|e| t > e.start)
            .map(|e| (e.block, e.eigenindex, t - e.start));
        FlagProjection { full, partial }
    }

    /// `τ(x e_t)` from the allocation alone.
    pub fn tau_x_e(&self, t: f64) -> f64 {
        let mut total = 0.0;
        for e in &self.entries {
            if t <= e.start {
                break;
            }
            let used = e.end().min(Finite(t)).minus(e.start);
            total += e.level * used.finite().expect("t is finite");
        }
        total
    }

    /// `∫ μ_s de(s)` rebuilt blockwise from the allocation.
    pub fn reconstruct(&self) -> Operator {
        let mut blocks: Vec<Matrix> = self.shape.blocks().iter().map(|b| Matrix::zeros(b.n)).collect();
        for e in &self.entries {
            let v = self.eigenvector(e.block, e.eigenindex);
            add_outer(&mut blocks[e.block], &v, e.level);
        }
        Operator::new(self.shape.clone(), blocks).expect("dimensions match")
    }

    /// CSV rows `t_start,t_end,block,eigenindex,portion`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                e.start,
                e.end(),
                e.block,
                e.eigenindex,
                e.width
            );
        }
        out
    }

    /// Materializes `e` on a refinement that resolves its fractional part.
    pub fn materialize(&self, e: &FlagProjection, r: &Refinement) -> Result<Projection> {
        let mut blocks = Vec::with_capacity(r.origin.len());
        for &(k, lo, hi) in &r.origin {
            let mut m = Matrix::zeros(self.shape.blocks()[k].n);
            for &(kk, j) in &e.full {
                if kk == k {
                    add_outer(&mut m, &self.eigenvector(k, j), 1.0);
                }
            }
            if let Some((kk, j, amount)) = e.partial {
                if kk == k {
                    let covered = hi <= Finite(amount * (1.0 + 1e-12));
                    let outside = lo >= amount * (1.0 - 1e-12);
                    if !covered && !outside {
                        return Err(Error::InvalidInput(format!(
                            "refinement does not resolve the cut at {amount} in block {k}"
                        )));
                    }
                    if covered {
                        add_outer(&mut m, &self.eigenvector(k, j), 1.0);
                    }
                }
            }
            blocks.push(m);
        }
        Projection::new(Operator::new(r.shape.clone(), blocks)?)
    }
}

fn add_outer(m: &mut Matrix, v: &[crate::linalg::C64], scale: f64) {
    let n = v.len();
    for r in 0..n {
        for c in 0..n {
            m[(r, c)] += v[r] * v[c].conj() * scale;
        }
    }
}

/// A shape whose diffuse blocks are cut into consecutive pieces.
///
/// Piece `i` records `(original block, start, end)` within the block's
/// weight interval `[0, w)`; operators are lifted by copying their blocks.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub shape: AlgebraShape,
    pub origin: Vec<(usize, f64, ExtReal)>,
}

impl Refinement {
    /// Cuts `(block, position)` with `0 < position < w`; others are ignored.
    pub fn new(shape: &AlgebraShape, cuts: &[(usize, f64)]) -> Result<Self> {
        let mut specs = Vec::new();
        let mut origin = Vec::new();
        for (k, spec) in shape.blocks().iter().enumerate() {
            let mut pts: Vec<f64> = cuts
                .iter()
                .filter(|&&(kk, c)| kk == k && c > 0.0 && spec.w > c)
                .map(|&(_, c)| c)
                .collect();
            if !pts.is_empty() && !spec.diffuse {
                return Err(Error::FlagNotConstructible { block: k });
            }
            pts.sort_by(f64::total_cmp);
            pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
            let mut lo = 0.0;
            for c in pts {
                specs.push(BlockSpec { w: Finite(c - lo), ..*spec });
                origin.push((k, lo, Finite(c)));
                lo = c;
            }
            specs.push(BlockSpec { w: spec.w.minus(lo), ..*spec });
            origin.push((k, lo, spec.w));
        }
        Ok(Self {
            shape: AlgebraShape::new(specs)?,
            origin,
        })
    }

    pub fn lift(&self, x: &Operator) -> Result<Operator> {
        let blocks = self.origin.iter().map(|&(k, _, _)| x.block(k).clone()).collect();
        Operator::new(self.shape.clone(), blocks)
    }
}

/// `x ⊗ 1`: the same operator with every block marked diffuse.
pub fn embed_diffuse(x: &Operator) -> Operator {
    x.with_shape(x.shape().diffused())
        .expect("diffusing keeps dimensions")
}

#[derive(Debug, Clone, Serialize)]
pub struct CiReport {
    /// Identities that hold for any positive `a` and invertible positive `b`.
    pub general: PropertyReport,
    /// Consequences of `μ(ab) = μ(a^p/p + b^q/q)`; expected only in the equality case.
    pub equality: PropertyReport,
    pub mu_equality: bool,
    /// Whether `range(b⁻¹ e_I)` and `support(c_I)` coincide.
    pub f_definitions_agree: bool,
}

/// Replays the `c_I = b⁻¹ e_I b⁻¹` construction for `I = [s, t]`.
///
/// The flag is that of `|ab|² = b a² b` on the diffuse embedding, and every
/// claim is checked by direct matrix arithmetic after refining the algebra so
/// that `e_s`, `e_t` are genuine projections.
pub fn proof_mechanics_ci(a: &Operator, b: &Operator, p: f64, s: f64, t: f64) -> Result<CiReport> {
    if !(p > 1.0) {
        return Err(Error::Domain(format!("exponent must exceed 1, got {p}")));
    }
    if !(0.0 <= s && s < t && t.is_finite()) {
        return Err(Error::Domain(format!("need 0 <= s < t, got [{s}, {t}]")));
    }
    let dim = a.shape().total_dim();
    if dim > CI_MAX_DIM {
        return Err(Error::TooLarge {
            dim,
            limit: CI_MAX_DIM,
        });
    }
    if a.shape().has_infinite_block() {
        return Err(Error::Refused(
            "proof replay needs b invertible on a finite-weight shape".into(),
        ));
    }
    a.check_positive()?;
    b.check_positive()?;
    let q = p / (p - 1.0);
    let a = embed_diffuse(a);
    let b = embed_diffuse(b);
    let b_inv = b.inverse()?;

    let ab = a.mul(&b)?;
    let lam = svalues::mu(&ab)?;
    let lam_t = lam.at(t);
    let x = b.mul(&a)?.mul(&a)?.mul(&b)?;
    let flag = build_flag(&x.hermitian_part())?;
    let (e_s, e_t) = (flag.e(s), flag.e(t));
    let cuts: Vec<(usize, f64)> = [&e_s, &e_t]
        .iter()
        .filter_map(|e| e.partial.map(|(k, _, amount)| (k, amount)))
        .collect();
    let r = Refinement::new(flag.shape(), &cuts)?;

    let (a, b, b_inv, x) = (r.lift(&a)?, r.lift(&b)?, r.lift(&b_inv)?, r.lift(&x)?);
    let e_s = flag.materialize(&e_s, &r)?.into_operator();
    let e_t = flag.materialize(&e_t, &r)?.into_operator();
    let e_i = e_t.sub(&e_s)?;
    let c_of = |e: &Operator| b_inv.mul(e)?.mul(&b_inv);
    let c_i = c_of(&e_i)?;
    let c_t = c_of(&e_t)?;
    let f_i = b_inv.mul(&e_i)?.range_projection()?.into_operator();
    let f_t = b_inv.mul(&e_t)?.range_projection()?.into_operator();
    let f_i_alt = c_i.support_projection()?.into_operator();

    let nb = b.norm()?;
    let nc = c_i.norm()?;
    let na = a.norm()?;
    let mut general = PropertyReport::new("c_I construction");
    let eq = |name: &str, lhs: &Operator, rhs: &Operator, scale: f64| -> Result<PropertyItem> {
        Ok(PropertyItem::checked(name, -lhs.max_abs_diff(rhs)?, CI_TOL * (1.0 + scale)))
    };
    let le = |name: &str, lhs: &Operator, rhs: &Operator, scale: f64| -> Result<PropertyItem> {
        let gap = rhs.sub(lhs)?.hermitian_part();
        Ok(PropertyItem::checked(name, gap.min_eigenvalue()?, CI_TOL * (1.0 + scale)))
    };
    let l2 = lam_t * lam_t;
    general.push(eq("b c_I b = e_I", &b.mul(&c_i)?.mul(&b)?, &e_i, nb * nb * nc)?);
    general.push(le("c_I >= 0", &Operator::zeros(&r.shape), &c_i, nc)?);
    general.push(le(
        "b a^2 b >= lambda_t^2 e_I",
        &e_i.scale(l2),
        &x,
        l2 + x.norm()?,
    )?);
    general.push(le(
        "lambda_t^2 c_I <= a^2",
        &c_i.scale(l2),
        &a.mul(&a)?,
        l2 * nc + na * na,
    )?);
    let fa2f = f_i.mul(&a)?.mul(&a)?.mul(&f_i)?;
    general.push(le(
        "lambda_t^2 c_I <= f_I a^2 f_I",
        &c_i.scale(l2),
        &fa2f,
        l2 * nc + na * na,
    )?);
    let bf = b.mul(&f_i)?;
    general.push(eq("e_I b f_I = b f_I", &e_i.mul(&bf)?, &bf, nb)?);
    let fb = f_i.mul(&b)?;
    general.push(eq("f_I b = f_I b e_I", &fb.mul(&e_i)?, &fb, nb)?);
    let fb2f = f_i.mul(&b)?.mul(&b)?.mul(&f_i)?;
    general.push(eq("f_I b^2 f_I c_I = f_I", &fb2f.mul(&c_i)?, &f_i, nb * nb * nc)?);
    general.push(eq("c_I f_I b^2 f_I = f_I", &c_i.mul(&fb2f)?, &f_i, nb * nb * nc)?);
    general.push(eq("f_I c_[0,t] = c_I", &f_i.mul(&c_t)?, &c_i, c_t.norm()?)?);
    general.push(eq("c_[0,t] f_I = c_I", &c_t.mul(&f_i)?, &c_i, c_t.norm()?)?);
    let tau_f = Projection::new(f_i.clone())?.trace();
    let tau_e = Projection::new(e_i.clone())?.trace();
    general.push(PropertyItem::boolean(
        "tau(f_I) = tau(e_I)",
        tau_f.approx_eq(tau_e, 1e-9),
    ));
    let cap = |v: f64| flag.total().min(Finite(v)).finite().unwrap_or(v);
    general.push(PropertyItem::checked(
        "tau(e_I) = t - s",
        -(tau_e.finite().unwrap_or(f64::INFINITY) - (cap(t) - cap(s))).abs(),
        CI_TOL * (1.0 + t),
    ));

    let d = a.power(p)?.scale(1.0 / p).add(&b.power(q)?.scale(1.0 / q))?;
    let mu_d = svalues::mu(&d)?;
    let mu_equality = lam.approx_eq(&mu_d, CI_TOL * (1.0 + mu_d.sup()));
    let mut equality = PropertyReport::new("equality consequences");
    equality.hypotheses_met = mu_equality;
    let ap = a.power(p)?;
    let nap = ap.norm()?;
    let nd = d.norm()?;
    equality.push(eq("a^p f_t = f_t a^p", &ap.mul(&f_t)?, &f_t.mul(&ap)?, nap)?);
    equality.push(eq("D f_t = f_t D", &d.mul(&f_t)?, &f_t.mul(&d)?, nd)?);
    equality.push(eq("f_t = e_t", &f_t, &e_t, 0.0)?);
    let sat = d.mul(&f_t)?.trace()?.re;
    let integral = lam.integral_to(Finite(t)).finite().unwrap_or(f64::INFINITY);
    equality.push(PropertyItem::checked(
        "tau(D f_t) = integral of lambda",
        -(sat - integral).abs(),
        CI_TOL * (1.0 + integral.abs()),
    ));
    equality.push(eq("a^p = b^q", &ap, &b.power(q)?, nap)?);

    let f_definitions_agree = f_i.approx_eq(&f_i_alt)?;
    Ok(CiReport {
        general,
        equality,
        mu_equality,
        f_definitions_agree,
    })
}
