//! Singular-value functions for weighted block algebras.
//!
//! Operators live in a finite direct sum of matrix algebras `⊕ M_{n_k}` with
//! trace `τ = Σ w_k Tr_k`, plus an implicit zero block of infinite weight so
//! that `τ(1) = ∞`. On top of that model the crate computes generalized
//! singular values `μ_s`, builds complete flags, audits the Young inequality
//! `μ(ab*) ≤ μ(|a|^p/p + |b|^q/q)` and its equality cases, and checks
//! strict monotonicity of symmetric norms.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod extreal;
pub mod flags;
pub mod linalg;
pub mod norms;
pub mod random;
pub mod report;
pub mod svalues;
pub mod sweeps;
pub mod young;

pub use algebra::{AlgebraShape, BlockSpec, Interval, Operator, Projection};
pub use error::{Error, Result};
pub use extreal::{ExtReal, Finite, Infinite};
pub use svalues::{mu, SValueFunction};
