//! Numerical core for murmurations of quadratic twist families of GL(1)
//! automorphic L-functions.
//!
//! For `φ = |·|^{iτ} χ` with `χ` a primitive Dirichlet character mod `q`, and a
//! family `F` of positive fundamental discriminants `D₀ < d < D` in a residue
//! class modulo `q*`, this crate computes both sides of the murmuration
//! asymptotics:
//!
//! - the empirical family averages of Dirichlet coefficients
//!   `(1/#F) Σ_d x^{-1/2} Σ_{n<x} n^{iτ} χ(n) χ_d(n)` (sharp and Gaussian-smoothed),
//! - the inverse-Mellin main terms built from `L(2-2s+2iτ, χ̄²)`, the removed
//!   Euler product `L^{(2q)}(3-2s+2iτ, χ̄²)`, a convergent local product and a
//!   residue term,
//!
//! together with the supporting machinery: exact arithmetic, Dirichlet
//! characters, fundamental-discriminant combinatorics, the smoothing weights
//! of an approximate functional equation, two independent L-function
//! evaluators, Euler-product identities and mean values over the family.
//!
//! The crate is `no_std` (it needs `alloc`). With the default `std` feature the
//! floating point kernels come from `std`; build with
//! `--no-default-features --features libm` for targets without it.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod characters;
pub mod complexfn;
pub mod discriminants;
mod error;
pub mod lfunc;
pub mod murmur;
pub mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
