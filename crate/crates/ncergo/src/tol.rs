//! Pinned tolerances.
//!
//! Every threshold the crate relies on is defined here once. The values
//! assume `f64` arithmetic with the Hermitian eigensolver as the single
//! numerical kernel: eigendecompositions of the matrices handled here are
//! accurate to roughly machine epsilon times the norm, so validation
//! thresholds sit at `1e-9`/`1e-10` and derived equalities are compared at
//! `1e-8`.

/// Input validation: Hermitian-PSD check on densities and unitarity checks.
pub const PSD: f64 = 1e-9;

/// Input validation: total-trace normalization of states.
pub const NORM: f64 = 1e-9;

/// Comparison tolerance for derived equalities (optimization values,
/// two-route identities).
pub const CMP: f64 = 1e-8;

/// Group-relation checks (commutation, cyclic orders) on a spanning basis.
pub const RELATION: f64 = 1e-9;

/// *-homomorphism laws and pullback round-trips on basis elements.
pub const HOM: f64 = 1e-10;

/// Invariance of Krylov–Bogolyubov states under the generators.
pub const INVARIANCE: f64 = 1e-9;

/// Commutator threshold deciding whether the fixed-point algebra is abelian.
pub const ABELIAN: f64 = 1e-9;

/// Eigenvalue threshold for faithfulness (full-rank density) decisions.
pub const FAITHFUL: f64 = 1e-10;

/// Null-space membership for the fixed-point subspace: an eigenvalue `λ` of
/// the stacked defect operator counts as zero when
/// `λ ≤ FIXED_SPACE * max(1, λ_max)`. The defect operator is assembled by
/// matrix additions only, so its spectrum carries absolute noise near
/// machine epsilon; this threshold sits three orders above that noise and
/// many orders below any genuine rotation eigenvalue.
pub const FIXED_SPACE: f64 = 1e-12;

/// Relative width below which a value interval counts as a singleton.
pub const SINGLETON: f64 = 1e-8;

/// Seminorm tail threshold for convergence verdicts.
pub const SEMINORM: f64 = 1e-6;
