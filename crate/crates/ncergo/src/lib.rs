//! Ergodic averaging and ergodic optimization over finite-dimensional
//! operator algebras.
//!
//! The algebras handled here are finite direct sums of full complex matrix
//! blocks `⊕ M_{n_i}(ℂ)`, acted on by amenable groups (`ℤ`, `ℤᵈ`, finite
//! products of cyclic groups) through block-permuting unitary conjugation.
//! On top of that the crate computes:
//!
//! - ergodic averages along canonical Følner windows and the fixed-point
//!   conditional expectation they converge to,
//! - Krylov–Bogolyubov invariant states,
//! - optimization values `m(a|K)` over invariant, tracial-invariant,
//!   annihilator, and finite-hull state sets, together with maximizing-face
//!   certificates,
//! - the gauge sequence `γ_k = ‖Avg_{F_k} a‖` and its limit,
//! - unique/strict ergodicity analysis, Herman-type seminorm checks, and
//!   extremal averages over finite hulls,
//! - quotients by invariant ideals and model checks for equivariant
//!   embeddings into a probability space.
//!
//! All numerics are generic over the real scalar (`f32` or `f64`) through
//! [`Real`]; the `*64` aliases below fix `f64`, which is what the CLI and
//! the documented tolerances assume.

pub mod algebra;
pub mod averaging;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod models;
pub mod optimization;
pub mod scalar;
pub mod sysfile;
pub mod tol;

pub use error::Error;
pub use scalar::Real;

/// Convenience alias used throughout the crate.
pub type Result<V> = std::result::Result<V, Error>;

pub type Complex64 = num_complex::Complex<f64>;
pub type CMat64 = linalg::CMat<f64>;
pub type Element64 = algebra::Element<f64>;
pub type State64 = algebra::State<f64>;
pub type SelfAdjointFunctional64 = algebra::SelfAdjointFunctional<f64>;
pub type Automorphism64 = dynamics::Automorphism<f64>;
pub type GroupAction64 = dynamics::GroupAction<f64>;
pub type FixedPointProjection64 = averaging::FixedPointProjection<f64>;
pub type BlockHomomorphism64 = models::BlockHomomorphism<f64>;
