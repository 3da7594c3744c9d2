//! Small dense complex matrices and the Jacobi-family eigensolvers behind
//! every block computation.
//!
//! All matrices are square and stored row-major. Sizes stay in the tens, so
//! the routines favour accuracy and simplicity over blocking or SIMD.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Off-diagonal Frobenius threshold (relative) for the cyclic Jacobi sweep.
pub const JACOBI_OFF_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Column-orthogonality threshold for the one-sided sweep (times `max(1, n/45)`).
const HESTENES_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let n = re.len();
        let mut m = Self::zeros(n);
        for (i, row) in re.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)].re = v;
            }
        }
        if let Some(im) = im {
            if im.len() != n {
                return Err(Error::InvalidInput(format!(
                    "imaginary part has {} rows, expected {n}",
                    im.len()
                )));
            }
            for (i, row) in im.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::InvalidInput(format!(
                        "imaginary row {i} has {} entries, expected {n}",
                        row.len()
                    )));
                }
                for (j, &v) in row.iter().enumerate() {
                    m[(i, j)].im = v;
                }
            }
        }
        Ok(m)
    }

    pub fn real_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].re).collect())
            .collect()
    }

    pub fn imag_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].im).collect())
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == ZERO)
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Returns `(A + A*)/2`.
    pub fn hermitian_part(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        m
    }

    /// `Σ_j f(λ_j) v_j v_j*` from an eigen/singular basis.
    pub fn from_spectral<F>(values: &[f64], vectors: &Matrix, f: F) -> Self
    where
        F: Fn(f64) -> f64,
    {
        let n = vectors.n;
        let mut m = Self::zeros(n);
        for (k, &lam) in values.iter().enumerate() {
            let fl = f(lam);
            if fl == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = vectors[(i, k)] * fl;
                for j in 0..n {
                    m[(i, j)] += vik * vectors[(j, k)].conj();
                }
            }
        }
        m
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let (piv, pmag) = (col..n)
                .map(|r| (r, a[(r, col)].norm()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pmag <= 1e-14 * scale {
                return Err(Error::Singular);
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let d = a[(col, col)].inv();
            for j in 0..n {
                a[(col, j)] *= d;
                inv[(col, j)] *= d;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == ZERO {
                    continue;
                }
                for j in 0..n {
                    let ac = a[(col, j)];
                    let ic = inv[(col, j)];
                    a[(r, j)] -= f * ac;
                    inv[(r, j)] -= f * ic;
                }
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        debug_assert_eq!(self.n, rhs.n);
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        debug_assert_eq!(self.n, rhs.n);
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

/// Unitary 2×2 rotation that diagonalizes `[[app, apq], [conj(apq), aqq]]`.
///
/// Returned as `(g_pp, g_pq, g_qp, g_qq)`; the transform is `A ← G* A G`.
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (C64, C64, C64, C64) {
    let r = apq.norm();
    let phase = apq / r; // e^{iφ}
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
    let conj_phase = phase.conj();
    (
        C64::new(c, 0.0),
        C64::new(s, 0.0),
        conj_phase * (-s),
        conj_phase * c,
    )
}

/// Hermitian eigendecomposition, eigenvalues in non-increasing order.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: Matrix,
}

/// Cyclic Jacobi for Hermitian matrices.
///
/// The input is symmetrized first; callers are expected to pass something
/// Hermitian up to roundoff.
pub fn eigh(m: &Matrix) -> Result<Eigen> {
    let n = m.n;
    let mut a = m.hermitian_part();
    let mut v = Matrix::identity(n);
    let total = a.frobenius();
    let mut converged = n <= 1 || total == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NumericFailure(format!(
                "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let (gpp, gpq, gqp, gqq) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                // columns: A ← A G
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * gpp + akq * gqp;
                    a[(k, q)] = akp * gpq + akq * gqq;
                }
                // rows: A ← G* A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * gpp + vkq * gqp;
                    v[(k, q)] = vkp * gpq + vkq * gqq;
                }
            }
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        converged = off <= JACOBI_OFF_TOL * total;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = Matrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, dst)] = v[(k, src)];
        }
    }
    Ok(Eigen { values, vectors })
}

/// Singular system of a square matrix: `x = U Σ V*`.
///
/// Columns of `u` belonging to zero singular values are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    pub u: Matrix,
    pub v: Matrix,
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// The rotations are exactly the Jacobi rotations of `x* x`, applied to the
/// columns of `x` so that `x* x` is never formed; small singular values keep
/// absolute accuracy `~ eps·‖x‖`.
pub fn svd(x: &Matrix) -> Result<Svd> {
    let n = x.n;
    let mut w = x.clone();
    let mut v = Matrix::identity(n);
    let tol = HESTENES_TOL * (n as f64 / 45.0).max(1.0);
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, ZERO);
                for k in 0..n {
                    let wp = w[(k, p)];
                    let wq = w[(k, q)];
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                if gamma.norm() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (gpp, gpq, gqp, gqq) = jacobi_rotation(alpha, beta, gamma);
                for k in 0..n {
                    let wp = w[(k, p)];
                    let wq = w[(k, q)];
                    w[(k, p)] = wp * gpp + wq * gqp;
                    w[(k, q)] = wp * gpq + wq * gqq;
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * gpp + vq * gqp;
                    v[(k, q)] = vp * gpq + vq * gqq;
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NumericFailure(format!(
                "one-sided Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps"
            )));
        }
    }
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|k| w[(k, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let mut u = Matrix::zeros(n);
    let mut vs = Matrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        for k in 0..n {
            vs[(k, dst)] = v[(k, src)];
            if s > 0.0 {
                u[(k, dst)] = w[(k, src)] / s;
            }
        }
    }
    Ok(Svd { values, u, v: vs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Matrix {
        let re = vec![
            vec![2.0, -1.0, 0.5],
            vec![0.3, 1.0, 0.0],
            vec![1.0, 0.2, -3.0],
        ];
        let im = vec![
            vec![0.0, 0.4, -0.2],
            vec![1.1, 0.0, 0.7],
            vec![0.0, -0.5, 0.3],
        ];
        Matrix::from_parts(&re, Some(&im)).unwrap()
    }

    #[test]
    fn eigh_reconstructs_hermitian() {
        let x = sample();
        let h = &(&x * &x.adjoint()) + &Matrix::identity(3);
        let e = eigh(&h).unwrap();
        let back = Matrix::from_spectral(&e.values, &e.vectors, |l| l);
        assert!((&back - &h).max_abs() < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let vv = &e.vectors.adjoint() * &e.vectors;
        assert!((&vv - &Matrix::identity(3)).max_abs() < 1e-12);
    }

    #[test]
    fn eigh_diagonal_is_sorted() {
        let e = eigh(&Matrix::from_real_diag(&[1.0, 3.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn svd_reconstructs() {
        let x = sample();
        let s = svd(&x).unwrap();
        let mut us = s.u.clone();
        for j in 0..3 {
            for i in 0..3 {
                us[(i, j)] *= s.values[j];
            }
        }
        let back = &us * &s.v.adjoint();
        assert!((&back - &x).max_abs() < 1e-12);
        // singular values squared are the eigenvalues of x*x
        let e = eigh(&(&x.adjoint() * &x)).unwrap();
        for (sv, ev) in s.values.iter().zip(&e.values) {
            assert!((sv * sv - ev).abs() < 1e-10);
        }
    }

    #[test]
    fn svd_rank_deficient() {
        let x = Matrix::from_parts(&[vec![0.0, 2.0], vec![0.0, 0.0]], None).unwrap();
        let s = svd(&x).unwrap();
        assert_eq!(s.values, vec![2.0, 0.0]);
    }

    #[test]
    fn inverse_roundtrip() {
        let x = sample();
        let inv = x.inverse().unwrap();
        assert!((&(&x * &inv) - &Matrix::identity(3)).max_abs() < 1e-12);
        assert!(matches!(Matrix::zeros(2).inverse(), Err(Error::Singular)));
    }
}
