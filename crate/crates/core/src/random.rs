//! Seeded random instances.
//!
//! The generator is SplitMix64: state advances by the constant
//! `0x9E3779B97F4A7C15` and each output is the finalizer
//! `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31`
//! applied to the new state. Uniforms take the top 53 bits, normals use the
//! cosine branch of Box–Muller, exponentials use `-ln(1 - u)`. Case `i` of a
//! sweep with seed `s` draws from `SplitMix64::new(mix(s) ^ mix(i + 1))`, so
//! any case can be replayed alone and results do not depend on scheduling.

use crate::algebra::{AlgebraShape, BlockSpec, Operator};
use crate::extreal::{Finite, Infinite};
use crate::linalg::{Matrix, C64};

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream for case `index` of a sweep seeded with `seed`.
    pub fn for_case(seed: u64, index: u64) -> Self {
        Self::new(mix(seed.wrapping_add(GAMMA)) ^ mix(index.wrapping_add(1).wrapping_mul(GAMMA)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn exponential(&mut self) -> f64 {
        -(1.0 - self.uniform()).ln()
    }

    pub fn complex_normal(&mut self) -> C64 {
        C64::new(self.normal(), self.normal()) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Haar-distributed unitary: Gram–Schmidt on a complex Ginibre matrix.
pub fn haar_unitary(rng: &mut SplitMix64, n: usize) -> Matrix {
    let mut q = Matrix::zeros(n);
    for j in 0..n {
        let mut col: Vec<C64> = (0..n).map(|_| rng.complex_normal()).collect();
        // two passes of modified Gram–Schmidt keep orthogonality at eps level
        for _ in 0..2 {
            for k in 0..j {
                let dot: C64 = (0..n).map(|i| q[(i, k)].conj() * col[i]).sum();
                for (i, c) in col.iter_mut().enumerate() {
                    *c -= q[(i, k)] * dot;
                }
            }
        }
        let norm = col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for (i, c) in col.iter().enumerate() {
            q[(i, j)] = c / norm;
        }
    }
    q
}

/// `U diag(values) U*` with Haar `U`.
pub fn conjugated_diag(rng: &mut SplitMix64, values: &[f64]) -> Matrix {
    let u = haar_unitary(rng, values.len());
    &(&u * &Matrix::from_real_diag(values)) * &u.adjoint()
}

/// `n` independent Exp(1) samples.
pub fn exponential_spectrum(rng: &mut SplitMix64, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.exponential()).collect()
}

/// Shape-generation parameters for sweeps.
#[derive(Debug, Clone)]
pub struct ShapeParams {
    pub max_total_dim: usize,
    pub max_blocks: usize,
    pub weights: Vec<f64>,
    /// Chance of appending an explicit infinite-weight diffuse block.
    pub infinite_tail_prob: f64,
    pub diffuse_prob: f64,
}

impl Default for ShapeParams {
    fn default() -> Self {
        Self {
            max_total_dim: 12,
            max_blocks: 3,
            weights: vec![0.5, 1.0, 2.0],
            infinite_tail_prob: 0.25,
            diffuse_prob: 0.5,
        }
    }
}

/// Random shape; an explicit infinite block, when present, is always last.
pub fn random_shape(rng: &mut SplitMix64, params: &ShapeParams) -> AlgebraShape {
    let with_tail = rng.uniform() < params.infinite_tail_prob;
    let budget = params.max_total_dim - usize::from(with_tail);
    let nblocks = 1 + rng.below(params.max_blocks.min(budget));
    let mut remaining = budget;
    let mut specs = Vec::with_capacity(nblocks + 1);
    for k in 0..nblocks {
        let left = nblocks - k - 1;
        let cap = remaining - left;
        let n = 1 + rng.below(cap.min(6));
        remaining -= n;
        let w = *rng.pick(&params.weights);
        let diffuse = rng.uniform() < params.diffuse_prob;
        specs.push(BlockSpec {
            n,
            w: Finite(w),
            diffuse,
        });
    }
    if with_tail {
        specs.push(BlockSpec {
            n: 1,
            w: Infinite,
            diffuse: true,
        });
    }
    AlgebraShape::new(specs).expect("generated shape is valid")
}

/// Positive operator with Exp(1) spectra, zero on infinite-weight blocks.
pub fn random_positive(rng: &mut SplitMix64, shape: &AlgebraShape) -> Operator {
    let blocks = shape
        .blocks()
        .iter()
        .map(|b| {
            if b.w == Infinite {
                Matrix::zeros(b.n)
            } else {
                let spec = exponential_spectrum(rng, b.n);
                conjugated_diag(rng, &spec)
            }
        })
        .collect();
    Operator::new(shape.clone(), blocks).expect("dimensions match")
}

/// General operator `U diag(σ) V*` with Exp(1) singular values, zero on
/// infinite-weight blocks.
pub fn random_general(rng: &mut SplitMix64, shape: &AlgebraShape) -> Operator {
    let blocks = shape
        .blocks()
        .iter()
        .map(|b| {
            if b.w == Infinite {
                Matrix::zeros(b.n)
            } else {
                let spec = exponential_spectrum(rng, b.n);
                let u = haar_unitary(rng, b.n);
                let v = haar_unitary(rng, b.n);
                &(&u * &Matrix::from_real_diag(&spec)) * &v.adjoint()
            }
        })
        .collect();
    Operator::new(shape.clone(), blocks).expect("dimensions match")
}

/// Contraction `U diag(s) V*` with `s` uniform in `[0, 1)`.
pub fn random_contraction(rng: &mut SplitMix64, shape: &AlgebraShape) -> Operator {
    let blocks = shape
        .blocks()
        .iter()
        .map(|b| {
            let s: Vec<f64> = (0..b.n).map(|_| rng.uniform()).collect();
            let u = haar_unitary(rng, b.n);
            let v = haar_unitary(rng, b.n);
            &(&u * &Matrix::from_real_diag(&s)) * &v.adjoint()
        })
        .collect();
    Operator::new(shape.clone(), blocks).expect("dimensions match")
}

/// Haar-random rank-`r` projection in dimension `n`.
pub fn random_projection_matrix(rng: &mut SplitMix64, n: usize, r: usize) -> Matrix {
    let u = haar_unitary(rng, n);
    let keep: Vec<f64> = (0..n).map(|j| if j < r { 1.0 } else { 0.0 }).collect();
    Matrix::from_spectral(&keep, &u, |l| l)
}

/// Random projection with the given blockwise ranks.
pub fn random_projection(rng: &mut SplitMix64, shape: &AlgebraShape, ranks: &[usize]) -> Operator {
    let blocks = shape
        .blocks()
        .iter()
        .zip(ranks)
        .map(|(b, &r)| random_projection_matrix(rng, b.n, r))
        .collect();
    Operator::new(shape.clone(), blocks).expect("dimensions match")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // reference outputs of SplitMix64 seeded with 0
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<u64> = (0..4).map(|_| SplitMix64::for_case(7, 3).next_u64()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        assert_ne!(
            SplitMix64::for_case(7, 3).next_u64(),
            SplitMix64::for_case(7, 4).next_u64()
        );
    }

    #[test]
    fn haar_is_unitary() {
        let mut r = SplitMix64::new(11);
        let u = haar_unitary(&mut r, 6);
        let uu = &u.adjoint() * &u;
        assert!((&uu - &Matrix::identity(6)).max_abs() < 1e-13);
    }

    #[test]
    fn shapes_respect_budget() {
        let mut r = SplitMix64::new(5);
        let params = ShapeParams::default();
        for _ in 0..500 {
            let s = random_shape(&mut r, &params);
            assert!(s.total_dim() <= params.max_total_dim);
        }
    }
}
