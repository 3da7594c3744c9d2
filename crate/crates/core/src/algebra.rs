//! Elements of a model semi-finite tracial algebra.
//!
//! The algebra is a finite direct sum `⊕_k M_{n_k}` with trace
//! `τ = Σ_k w_k Tr_k`, implicitly followed by a zero block of infinite weight
//! so that `τ(1) = +∞`. Blocks flagged `diffuse` stand for `M_{n_k} ⊗ L^∞`
//! over an interval of length `w_k`; only they may carry infinite weight or be
//! subdivided by flags.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extreal::{ExtReal, Finite, Infinite};
use crate::linalg::{self, Matrix, C64};

/// Eigenvalues in `[-POSITIVITY_TOL·max(1,‖x‖), 0)` are roundoff and clamp to 0.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Relative threshold separating the support of `|x|` from its kernel.
pub const SUPPORT_TOL: f64 = 1e-10;
/// Operator equality: max-modulus difference `≤ OP_EQ_TOL·(1 + ‖·‖)`.
pub const OP_EQ_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub n: usize,
    pub w: ExtReal,
    #[serde(default)]
    pub diffuse: bool,
}

impl BlockSpec {
    pub fn atomic(n: usize, w: f64) -> Self {
        Self {
            n,
            w: Finite(w),
            diffuse: false,
        }
    }

    pub fn diffuse(n: usize, w: ExtReal) -> Self {
        Self {
            n,
            w,
            diffuse: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraShape {
    blocks: Vec<BlockSpec>,
}

impl AlgebraShape {
    pub fn new(blocks: Vec<BlockSpec>) -> Result<Self> {
        for (k, b) in blocks.iter().enumerate() {
            if b.n == 0 {
                return Err(Error::InvalidInput(format!("block {k} has dimension 0")));
            }
            match b.w {
                Finite(w) if !(w > 0.0 && w.is_finite()) => {
                    return Err(Error::InvalidInput(format!(
                        "block {k} has non-positive weight {w}"
                    )))
                }
                Infinite if !b.diffuse => {
                    return Err(Error::InvalidInput(format!(
                        "block {k} has infinite weight but is not diffuse"
                    )))
                }
                _ => {}
            }
        }
        Ok(Self { blocks })
    }

    /// One atomic block of dimension `n` and weight `w`.
    pub fn single(n: usize, w: f64) -> Self {
        Self::new(vec![BlockSpec::atomic(n, w)]).expect("valid single block")
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.n).sum()
    }

    /// `τ(1)` over the explicit blocks.
    pub fn total_weight(&self) -> ExtReal {
        self.blocks.iter().map(|b| b.w.times(b.n as f64)).sum()
    }

    pub fn has_infinite_block(&self) -> bool {
        self.blocks.iter().any(|b| b.w == Infinite)
    }

    /// Same blocks, all marked diffuse.
    pub fn diffused(&self) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockSpec { diffuse: true, ..*b })
                .collect(),
        }
    }
}

/// A Borel interval of `ℝ≥0` with independently open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: ExtReal,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    /// `(t, ∞)`
    pub fn above(t: f64) -> Self {
        Self {
            lo: t,
            hi: Infinite,
            lo_closed: false,
            hi_closed: false,
        }
    }

    /// `[t, ∞)`
    pub fn at_least(t: f64) -> Self {
        Self {
            lo_closed: true,
            ..Self::above(t)
        }
    }

    /// `[0, t]`
    pub fn up_to(t: f64) -> Self {
        Self::closed(0.0, t)
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi: Finite(hi),
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn open_closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi: Finite(hi),
            lo_closed: false,
            hi_closed: true,
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        let lo_ok = if self.lo_closed { v >= self.lo } else { v > self.lo };
        let hi_ok = match self.hi {
            Infinite => true,
            Finite(h) if self.hi_closed => v <= h,
            Finite(h) => v < h,
        };
        lo_ok && hi_ok
    }
}

/// `x = ν|x|` with `ν` a partial isometry.
#[derive(Debug, Clone)]
pub struct PolarData {
    pub partial_isometry: Operator,
    pub modulus: Operator,
}

/// Blockwise spectral data of `|x|`: singular values and right singular vectors.
#[derive(Debug, Clone)]
pub struct AbsSpectrum {
    pub blocks: Vec<linalg::Svd>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    shape: AlgebraShape,
    blocks: Vec<Matrix>,
}

impl Operator {
    pub fn new(shape: AlgebraShape, blocks: Vec<Matrix>) -> Result<Self> {
        if shape.len() != blocks.len() {
            return Err(Error::InvalidInput(format!(
                "shape has {} blocks but {} matrices were given",
                shape.len(),
                blocks.len()
            )));
        }
        for (k, (spec, m)) in shape.blocks().iter().zip(&blocks).enumerate() {
            if spec.n != m.dim() {
                return Err(Error::InvalidInput(format!(
                    "block {k}: shape says n = {} but matrix is {}x{}",
                    spec.n,
                    m.dim(),
                    m.dim()
                )));
            }
        }
        Ok(Self { shape, blocks })
    }

    pub fn zeros(shape: &AlgebraShape) -> Self {
        let blocks = shape.blocks().iter().map(|b| Matrix::zeros(b.n)).collect();
        Self {
            shape: shape.clone(),
            blocks,
        }
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        let blocks = shape.blocks().iter().map(|b| Matrix::identity(b.n)).collect();
        Self {
            shape: shape.clone(),
            blocks,
        }
    }

    /// Block-diagonal operator with real diagonal blocks.
    pub fn from_diagonals(shape: &AlgebraShape, diags: &[Vec<f64>]) -> Result<Self> {
        let blocks = diags.iter().map(|d| Matrix::from_real_diag(d)).collect();
        Self::new(shape.clone(), blocks)
    }

    /// Single atomic block of weight `w` holding `diag(values)`.
    pub fn diag(values: &[f64], w: f64) -> Self {
        Self::from_diagonals(&AlgebraShape::single(values.len(), w), &[values.to_vec()])
            .expect("consistent diagonal")
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &Matrix {
        &self.blocks[k]
    }

    /// Same matrices on a different (but dimension-compatible) shape.
    pub fn with_shape(&self, shape: AlgebraShape) -> Result<Self> {
        Self::new(shape, self.blocks.clone())
    }

    pub fn map_blocks<F>(&self, f: F) -> Self
    where
        F: Fn(&Matrix) -> Matrix,
    {
        Self {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    fn try_map_blocks<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(usize, &Matrix) -> Result<Matrix>,
    {
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(k, m)| f(k, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            shape: self.shape.clone(),
            blocks,
        })
    }

    fn zip_blocks<F>(&self, other: &Operator, f: F) -> Result<Self>
    where
        F: Fn(&Matrix, &Matrix) -> Matrix,
    {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch);
        }
        Ok(Self {
            shape: self.shape.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Operator) -> Result<Self> {
        self.zip_blocks(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Operator) -> Result<Self> {
        self.zip_blocks(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Operator) -> Result<Self> {
        self.zip_blocks(other, |a, b| a * b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_blocks(|m| m.scale(s))
    }

    pub fn adjoint(&self) -> Self {
        self.map_blocks(Matrix::adjoint)
    }

    /// Largest entry modulus over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(Matrix::max_abs).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    /// Complex trace `Σ w_k Tr(M_k)`; refuses nonzero infinite-weight blocks.
    pub fn trace(&self) -> Result<C64> {
        let mut total = C64::new(0.0, 0.0);
        for (spec, m) in self.shape.blocks().iter().zip(&self.blocks) {
            match spec.w {
                Finite(w) => total += m.trace() * w,
                Infinite if m.is_zero() => {}
                Infinite => return Err(Error::InfiniteTrace),
            }
        }
        Ok(total)
    }

    /// Extended trace of a positive operator.
    pub fn trace_positive(&self) -> Result<ExtReal> {
        self.check_positive()?;
        Ok(self.trace_positive_unchecked())
    }

    fn trace_positive_unchecked(&self) -> ExtReal {
        self.shape
            .blocks()
            .iter()
            .zip(&self.blocks)
            .map(|(spec, m)| {
                let t = m.trace().re.max(0.0);
                if m.is_zero() {
                    ExtReal::ZERO
                } else {
                    spec.w.times(t)
                }
            })
            .sum()
    }

    /// Per-block singular values (non-increasing).
    pub fn singular_values(&self) -> Result<Vec<Vec<f64>>> {
        self.blocks
            .iter()
            .map(|m| linalg::svd(m).map(|s| s.values))
            .collect()
    }

    pub fn abs_spectrum(&self) -> Result<AbsSpectrum> {
        let blocks = self.blocks.iter().map(linalg::svd).collect::<Result<_>>()?;
        Ok(AbsSpectrum { blocks })
    }

    /// Uniform norm: the largest singular value over all blocks.
    pub fn norm(&self) -> Result<f64> {
        Ok(self
            .singular_values()?
            .iter()
            .filter_map(|s| s.first().copied())
            .fold(0.0, f64::max))
    }

    /// `(x + x*)/2`.
    pub fn hermitian_part(&self) -> Self {
        self.map_blocks(Matrix::hermitian_part)
    }

    pub fn is_hermitian(&self) -> bool {
        let scale = 1.0 + self.max_abs();
        self.blocks
            .iter()
            .all(|m| m.hermitian_defect() <= OP_EQ_TOL * scale)
    }

    /// Smallest eigenvalue of the Hermitian part, over all blocks.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let mut lo = f64::INFINITY;
        for m in &self.blocks {
            let e = linalg::eigh(m)?;
            if let Some(&v) = e.values.last() {
                lo = lo.min(v);
            }
        }
        Ok(lo)
    }

    pub fn check_positive(&self) -> Result<()> {
        let scale = 1.0 + self.max_abs();
        if !self.is_hermitian() {
            return Err(Error::NotPositive {
                min_eigenvalue: f64::NAN,
            });
        }
        let lo = self.min_eigenvalue()?;
        if lo < -POSITIVITY_TOL * scale {
            return Err(Error::NotPositive { min_eigenvalue: lo });
        }
        Ok(())
    }

    pub fn is_positive(&self) -> bool {
        self.check_positive().is_ok()
    }

    /// `|x| = (x*x)^{1/2}`.
    pub fn abs(&self) -> Result<Self> {
        self.try_map_blocks(|_, m| {
            let s = linalg::svd(m)?;
            Ok(Matrix::from_spectral(&s.values, &s.v, |l| l))
        })
    }

    /// `x^r` for positive `x` and `r > 0`.
    pub fn power(&self, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("power exponent must be positive, got {r}")));
        }
        if !self.is_hermitian() {
            return Err(Error::NotPositive {
                min_eigenvalue: f64::NAN,
            });
        }
        let tol = POSITIVITY_TOL * (1.0 + self.max_abs());
        self.try_map_blocks(|_, m| {
            let e = linalg::eigh(m)?;
            if let Some(&lo) = e.values.last() {
                if lo < -tol {
                    return Err(Error::NotPositive { min_eigenvalue: lo });
                }
            }
            Ok(Matrix::from_spectral(&e.values, &e.vectors, |l| {
                if l <= 0.0 {
                    0.0
                } else {
                    l.powf(r)
                }
            }))
        })
    }

    /// `χ_B(|x|)`.
    pub fn spectral_projection(&self, b: Interval) -> Result<Projection> {
        let spec = self.abs_spectrum()?;
        Ok(Projection(spec.projection(&self.shape, |s| b.contains(s))))
    }

    /// Support projection of `|x|`, with the relative rank threshold.
    pub fn support_projection(&self) -> Result<Projection> {
        let spec = self.abs_spectrum()?;
        let thr = spec.support_threshold();
        Ok(Projection(spec.projection(&self.shape, |s| s > thr)))
    }

    /// Projection onto the closure of the range of `x`.
    pub fn range_projection(&self) -> Result<Projection> {
        self.adjoint().support_projection()
    }

    pub fn polar(&self) -> Result<PolarData> {
        let spec = self.abs_spectrum()?;
        let thr = spec.support_threshold();
        let mut isos = Vec::with_capacity(self.blocks.len());
        let mut mods = Vec::with_capacity(self.blocks.len());
        for s in &spec.blocks {
            let n = s.v.dim();
            let mut nu = Matrix::zeros(n);
            for (j, &sv) in s.values.iter().enumerate() {
                if sv <= thr {
                    continue;
                }
                for r in 0..n {
                    let ur = s.u[(r, j)];
                    for c in 0..n {
                        nu[(r, c)] += ur * s.v[(c, j)].conj();
                    }
                }
            }
            isos.push(nu);
            mods.push(Matrix::from_spectral(&s.values, &s.v, |l| l));
        }
        Ok(PolarData {
            partial_isometry: Operator::new(self.shape.clone(), isos)?,
            modulus: Operator::new(self.shape.clone(), mods)?,
        })
    }

    /// Moore–Penrose pseudo-inverse; singular values `≤ cutoff·‖x‖` count as zero.
    pub fn pseudo_inverse(&self, cutoff: f64) -> Result<Self> {
        let spec = self.abs_spectrum()?;
        let thr = cutoff * spec.max_singular();
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for s in &spec.blocks {
            let n = s.v.dim();
            let mut m = Matrix::zeros(n);
            for (j, &sv) in s.values.iter().enumerate() {
                if sv <= thr || sv == 0.0 {
                    continue;
                }
                for r in 0..n {
                    let vr = s.v[(r, j)] / sv;
                    for c in 0..n {
                        m[(r, c)] += vr * s.u[(c, j)].conj();
                    }
                }
            }
            blocks.push(m);
        }
        Operator::new(self.shape.clone(), blocks)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.try_map_blocks(|_, m| m.inverse())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Scale-aware operator equality.
    pub fn approx_eq(&self, other: &Operator) -> Result<bool> {
        self.approx_eq_tol(other, OP_EQ_TOL)
    }

    pub fn approx_eq_tol(&self, other: &Operator, tol: f64) -> Result<bool> {
        let diff = self.max_abs_diff(other)?;
        let scale = self.norm()?.max(other.norm()?);
        Ok(diff <= tol * (1.0 + scale))
    }

    /// Does `self ≤ other` hold in the Loewner order (up to `tol·scale`)?
    pub fn loewner_le(&self, other: &Operator, tol: f64) -> Result<bool> {
        let d = other.sub(self)?;
        let scale = 1.0 + self.max_abs().max(other.max_abs());
        Ok(d.min_eigenvalue()? >= -tol * scale)
    }
}

impl AbsSpectrum {
    fn max_singular(&self) -> f64 {
        self.blocks
            .iter()
            .filter_map(|s| s.values.first().copied())
            .fold(0.0, f64::max)
    }

    fn support_threshold(&self) -> f64 {
        SUPPORT_TOL * self.max_singular()
    }

    fn projection<F>(&self, shape: &AlgebraShape, keep: F) -> Operator
    where
        F: Fn(f64) -> bool,
    {
        let blocks = self
            .blocks
            .iter()
            .map(|s| Matrix::from_spectral(&s.values, &s.v, |l| if keep(l) { 1.0 } else { 0.0 }))
            .collect();
        Operator {
            shape: shape.clone(),
            blocks,
        }
    }
}

/// An operator that is a blockwise Hermitian idempotent.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection(Operator);

impl Projection {
    pub fn new(op: Operator) -> Result<Self> {
        let sq = op.mul(&op)?;
        if !op.is_hermitian() || !sq.approx_eq(&op)? {
            return Err(Error::NotProjection);
        }
        Ok(Self(op))
    }

    pub fn operator(&self) -> &Operator {
        &self.0
    }

    pub fn into_operator(self) -> Operator {
        self.0
    }

    /// Blockwise ranks.
    pub fn ranks(&self) -> Vec<usize> {
        self.0
            .blocks()
            .iter()
            .map(|m| m.trace().re.round().max(0.0) as usize)
            .collect()
    }

    /// `τ(P) = Σ w_k rank(P_k)`.
    pub fn trace(&self) -> ExtReal {
        self.0
            .shape()
            .blocks()
            .iter()
            .zip(self.ranks())
            .map(|(b, r)| b.w.times(r as f64))
            .sum()
    }

    /// Range inclusion `Ran(self) ⊆ Ran(other)`.
    pub fn le(&self, other: &Projection) -> Result<bool> {
        let prod = other.0.mul(&self.0)?;
        prod.approx_eq(&self.0)
    }
}

#[derive(Serialize, Deserialize)]
struct BlockJson {
    re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorJson {
    shape: Vec<BlockSpec>,
    blocks: Vec<BlockJson>,
}

impl Serialize for Operator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorJson {
            shape: self.shape.blocks().to_vec(),
            blocks: self
                .blocks
                .iter()
                .map(|m| BlockJson {
                    re: m.real_rows(),
                    im: Some(m.imag_rows()),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = OperatorJson::deserialize(d)?;
        let shape = AlgebraShape::new(raw.shape).map_err(D::Error::custom)?;
        let blocks = raw
            .blocks
            .iter()
            .map(|b| Matrix::from_parts(&b.re, b.im.as_deref()))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Operator::new(shape, blocks).map_err(D::Error::custom)
    }
}

impl Operator {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("operator serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nilpotent() -> Operator {
        let m = Matrix::from_parts(&[vec![0.0, 2.0], vec![0.0, 0.0]], None).unwrap();
        Operator::new(AlgebraShape::single(2, 1.0), vec![m]).unwrap()
    }

    #[test]
    fn trace_examples() {
        let id = Operator::identity(&AlgebraShape::single(2, 3.0));
        assert_eq!(id.trace().unwrap().re, 6.0);
        assert_eq!(id.trace_positive().unwrap(), Finite(6.0));
        let z = Operator::zeros(&AlgebraShape::single(3, 2.0));
        assert_eq!(z.trace().unwrap().re, 0.0);
        assert_eq!(Operator::diag(&[3.0, 2.0, 1.0], 1.0).trace().unwrap().re, 6.0);
    }

    #[test]
    fn infinite_trace_is_reported() {
        let shape = AlgebraShape::new(vec![BlockSpec::diffuse(1, Infinite)]).unwrap();
        let x = Operator::from_diagonals(&shape, &[vec![1.0]]).unwrap();
        assert!(matches!(x.trace(), Err(Error::InfiniteTrace)));
        assert_eq!(x.trace_positive().unwrap(), Infinite);
        assert_eq!(Operator::zeros(&shape).trace_positive().unwrap(), Finite(0.0));
    }

    #[test]
    fn shape_validation() {
        assert!(AlgebraShape::new(vec![BlockSpec::atomic(0, 1.0)]).is_err());
        assert!(AlgebraShape::new(vec![BlockSpec::atomic(1, -1.0)]).is_err());
        assert!(AlgebraShape::new(vec![BlockSpec {
            n: 1,
            w: Infinite,
            diffuse: false
        }])
        .is_err());
    }

    #[test]
    fn composability_requires_identical_shapes() {
        let a = Operator::diag(&[1.0, 2.0], 1.0);
        let b = Operator::diag(&[1.0, 2.0], 2.0);
        assert!(matches!(a.mul(&b), Err(Error::ShapeMismatch)));
    }

    #[test]
    fn abs_examples() {
        let minus_id = Operator::identity(&AlgebraShape::single(3, 1.0)).scale(-1.0);
        assert!(minus_id
            .abs()
            .unwrap()
            .approx_eq(&Operator::identity(&AlgebraShape::single(3, 1.0)))
            .unwrap());
        let a = nilpotent().abs().unwrap();
        assert!(a.max_abs_diff(&Operator::diag(&[0.0, 2.0], 1.0)).unwrap() < 1e-14);
        // a unitary: rotation with a phase
        let (c, s) = (0.6, 0.8);
        let mut u = Matrix::zeros(2);
        u[(0, 0)] = C64::new(c, 0.0);
        u[(0, 1)] = C64::new(0.0, -s);
        u[(1, 0)] = C64::new(0.0, -s);
        u[(1, 1)] = C64::new(c, 0.0);
        let u = Operator::new(AlgebraShape::single(2, 1.0), vec![u]).unwrap();
        let id = Operator::identity(u.shape());
        assert!(u.abs().unwrap().approx_eq(&id).unwrap());
    }

    #[test]
    fn power_examples() {
        let d = Operator::diag(&[4.0, 9.0], 1.0);
        assert!(d
            .power(0.5)
            .unwrap()
            .max_abs_diff(&Operator::diag(&[2.0, 3.0], 1.0))
            .unwrap()
            < 1e-14);
        let id = Operator::identity(&AlgebraShape::single(2, 1.0));
        assert_eq!(id.power(7.3).unwrap(), id);
        assert!(matches!(
            Operator::diag(&[1.0, -1.0], 1.0).power(2.0),
            Err(Error::NotPositive { .. })
        ));
        // roundoff negatives clamp
        assert!(Operator::diag(&[1.0, -1e-12], 1.0).power(2.0).is_ok());
        assert!(id.power(0.0).is_err());
    }

    #[test]
    fn spectral_projection_examples() {
        let x = Operator::diag(&[3.0, 1.0], 1.0);
        let p = x.spectral_projection(Interval::above(2.0)).unwrap();
        assert!(p.operator().max_abs_diff(&Operator::diag(&[1.0, 0.0], 1.0)).unwrap() < 1e-15);
        let p = x.spectral_projection(Interval::at_least(0.0)).unwrap();
        assert!(p
            .operator()
            .approx_eq(&Operator::identity(x.shape()))
            .unwrap());
        let y = Operator::diag(&[3.0, 2.0, 1.0], 1.0);
        let p = y.spectral_projection(Interval::open_closed(1.5, 2.5)).unwrap();
        assert!(
            p.operator()
                .max_abs_diff(&Operator::diag(&[0.0, 1.0, 0.0], 1.0))
                .unwrap()
                < 1e-15
        );
        assert_eq!(p.trace(), Finite(1.0));
    }

    #[test]
    fn polar_examples() {
        let x = nilpotent();
        let pd = x.polar().unwrap();
        let expected_nu = Matrix::from_parts(&[vec![0.0, 1.0], vec![0.0, 0.0]], None).unwrap();
        let expected_nu = Operator::new(x.shape().clone(), vec![expected_nu]).unwrap();
        assert!(pd.partial_isometry.approx_eq(&expected_nu).unwrap());
        assert!(pd.modulus.approx_eq(&Operator::diag(&[0.0, 2.0], 1.0)).unwrap());
        assert!(pd
            .partial_isometry
            .mul(&pd.modulus)
            .unwrap()
            .approx_eq(&x)
            .unwrap());

        let pos = Operator::diag(&[2.0, 0.0, 1.0], 1.0);
        let pd = pos.polar().unwrap();
        assert!(pd
            .partial_isometry
            .approx_eq(&Operator::diag(&[1.0, 0.0, 1.0], 1.0))
            .unwrap());
    }

    #[test]
    fn json_roundtrip_and_inf_weight() {
        let text = r#"{"shape":[{"n":2,"w":"inf","diffuse":true},{"n":1,"w":0.5,"diffuse":false}],
                       "blocks":[{"re":[[1,0],[0,0.5]]},{"re":[[2]],"im":[[0]]}]}"#;
        let x = Operator::from_json(text).unwrap();
        assert_eq!(x.shape().blocks()[0].w, Infinite);
        let back = Operator::from_json(&x.to_json()).unwrap();
        assert_eq!(back, x);
        assert!(Operator::from_json(r#"{"shape":[{"n":2,"w":1}],"blocks":[{"re":[[1]]}]}"#).is_err());
    }
}
