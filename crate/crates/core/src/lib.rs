//! Exact parameterized Picard–Vessiot computations for linear differential
//! systems `dY/dx = A Y` over Q(t)(x).

pub mod alg;
pub mod factor;
pub mod field;
pub mod frac;
pub mod galois;
pub mod cli;
pub mod lattice;
pub mod linsys;
pub mod matrix;
pub mod poly;
pub mod qtx;
pub mod ratsol;

use num_rational::BigRational;

/// Rational numbers.
pub type Q = BigRational;
/// Polynomials in t over Q.
pub type PolyT = poly::Poly<Q>;
/// The constant field Q(t).
pub type RatT = frac::Frac<Q>;
/// Polynomials in x over Q(t).
pub type PolyX = poly::Poly<RatT>;
/// The base field Q(t)(x).
pub type RatFunc = frac::Frac<RatT>;

pub use alg::AlgElem;
pub use qtx::{DiffField, Derivation};
