//! Ergodic averages along Følner windows, the fixed-point projection they
//! converge to, and the Krylov–Bogolyubov construction of invariant states.
//!
//! The fixed-point projection is the conditional expectation onto the
//! subalgebra of elements fixed by every generator. For finite groups it is
//! the exact average over the group; for `ℤ`/`ℤᵈ` it is computed as the
//! null space of the stacked generator defects `Σ_g (2·id − U_g − U_g†)`,
//! assembled by matrix additions only, so long averaging never enters the
//! computation.

use num_complex::Complex;

use crate::algebra::{AlgebraShape, Element, State};
use crate::dynamics::{FolnerSchedule, GroupAction, GroupPresentation, GroupWord};
use crate::error::Error;
use crate::linalg::{self, CMat};
use crate::scalar::{real, Real};
use crate::{tol, Result};

/// `(1/|F|) Σ_{g∈F} Θ_g x` over an explicit finite word set.
pub fn average_over<T: Real>(
    action: &GroupAction<T>,
    words: &[GroupWord],
    x: &Element<T>,
) -> Result<Element<T>> {
    if words.is_empty() {
        return Err(Error::EmptyAverageSet);
    }
    let mut acc = Element::zero(x.shape());
    for w in words {
        acc = acc.add(&action.apply_word(w, x)?);
    }
    Ok(acc.scale_re(T::one() / real::<T>(words.len() as f64)))
}

/// The orthogonal (Hilbert–Schmidt) projection onto the fixed-point
/// subalgebra, with a self-adjoint orthonormal basis of its image.
#[derive(Debug, Clone)]
pub struct FixedPointProjection<T> {
    shape: AlgebraShape,
    matrix: CMat<T>,
    image_basis: Vec<Element<T>>,
}

impl<T: Real> FixedPointProjection<T> {
    /// Computes the projection for a validated action.
    pub fn compute(action: &GroupAction<T>) -> Result<Self> {
        let shape = action.shape().clone();
        match action.presentation() {
            GroupPresentation::CyclicProduct(_) => {
                // Exact average over the generated finite group.
                let words = action.schedule().enumerate(1)?;
                let d = shape.total_dim();
                let mut matrix = CMat::zeros(d, d);
                for w in &words {
                    matrix = matrix.add(&action.word_automorphism(w)?.superoperator()?);
                }
                matrix = matrix.scale_re(T::one() / real::<T>(words.len() as f64));
                let image_basis = image_basis_from_projection(&shape, &matrix)?;
                Ok(FixedPointProjection {
                    shape,
                    matrix,
                    image_basis,
                })
            }
            _ => {
                // Null space of Σ_g (2·id − U_g − U_g†). Each U_g is
                // Hilbert–Schmidt-unitary, so this operator is PSD and its
                // kernel is exactly the joint fixed space of the generators.
                let d = shape.total_dim();
                let mut defect = CMat::zeros(d, d);
                for gen in action.generators() {
                    let u = gen.superoperator()?;
                    let two = CMat::identity(d).scale_re(real::<T>(2.0));
                    defect = defect.add(&two.sub(&u).sub(&u.adjoint()));
                }
                let eig = linalg::hermitian_eigen(&defect)?;
                let lam_max = eig.values.first().copied().unwrap_or(T::zero());
                let cutoff = real::<T>(tol::FIXED_SPACE) * T::one().max(lam_max);
                let null_vectors: Vec<Vec<Complex<T>>> = eig
                    .values
                    .iter()
                    .enumerate()
                    .filter(|&(_, &lam)| lam <= cutoff)
                    .map(|(j, _)| eig.eigenvector(j))
                    .collect();
                let image_basis = self_adjoint_basis(&shape, &null_vectors)?;
                let matrix = projection_from_basis(d, &image_basis);
                Ok(FixedPointProjection {
                    shape,
                    matrix,
                    image_basis,
                })
            }
        }
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    /// Matrix on the canonically vectorized element space.
    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    /// Dimension of the fixed-point subalgebra.
    pub fn rank(&self) -> usize {
        self.image_basis.len()
    }

    /// Self-adjoint HS-orthonormal basis of the fixed-point subalgebra.
    pub fn image_basis(&self) -> &[Element<T>] {
        &self.image_basis
    }

    pub fn project(&self, x: &Element<T>) -> Result<Element<T>> {
        if *x.shape() != self.shape {
            return Err(Error::ShapeMismatch);
        }
        Ok(Element::from_vec(
            &self.shape,
            &self.matrix.mul_vec(&x.to_vec()),
        ))
    }

    /// Action of the Hilbert–Schmidt adjoint on a density element. The
    /// projection is self-adjoint, so this equals `project` up to rounding;
    /// the adjoint is applied literally to honor the duality contract.
    pub fn project_density(&self, rho: &Element<T>) -> Result<Element<T>> {
        if *rho.shape() != self.shape {
            return Err(Error::ShapeMismatch);
        }
        Ok(Element::from_vec(
            &self.shape,
            &self.matrix.adjoint().mul_vec(&rho.to_vec()),
        ))
    }

    /// `‖P x − x‖ ≤ tolerance`.
    pub fn contains(&self, x: &Element<T>, tolerance: T) -> Result<bool> {
        Ok(self.project(x)?.sub(x).operator_norm()? <= tolerance)
    }
}

/// Orthonormal self-adjoint basis spanning the same complex subspace as the
/// given vectors. The subspace must be *-closed (fixed spaces are), in which
/// case its self-adjoint part has the same real dimension.
fn self_adjoint_basis<T: Real>(
    shape: &AlgebraShape,
    vectors: &[Vec<Complex<T>>],
) -> Result<Vec<Element<T>>> {
    let half = real::<T>(0.5);
    let mut candidates = Vec::with_capacity(2 * vectors.len());
    for v in vectors {
        let b = Element::from_vec(shape, v);
        let adj = b.adjoint();
        candidates.push(b.add(&adj).scale_re(half));
        candidates.push(b.sub(&adj).scale(Complex::new(T::zero(), -half)));
    }
    // Real-linear modified Gram–Schmidt in the HS inner product, which is
    // real on self-adjoint elements.
    let drop_tol = real::<T>(1e-8);
    let mut basis: Vec<Element<T>> = Vec::new();
    for cand in candidates {
        let mut w = cand;
        for _ in 0..2 {
            for b in &basis {
                let coeff = b.hs_inner(&w).re;
                w = w.sub(&b.scale_re(coeff));
            }
        }
        let norm = w.hs_norm();
        if norm > drop_tol {
            basis.push(w.scale_re(T::one() / norm));
        }
    }
    if basis.len() != vectors.len() {
        return Err(Error::Numerical(format!(
            "self-adjoint basis has dimension {} but the fixed space has dimension {}",
            basis.len(),
            vectors.len()
        )));
    }
    Ok(basis)
}

fn projection_from_basis<T: Real>(d: usize, basis: &[Element<T>]) -> CMat<T> {
    let mut p = CMat::zeros(d, d);
    for b in basis {
        let v = b.to_vec();
        for r in 0..d {
            for c in 0..d {
                p[(r, c)] += v[r] * v[c].conj();
            }
        }
    }
    p
}

fn image_basis_from_projection<T: Real>(
    shape: &AlgebraShape,
    p: &CMat<T>,
) -> Result<Vec<Element<T>>> {
    let eig = linalg::hermitian_eigen(p)?;
    let half = real::<T>(0.5);
    let vectors: Vec<Vec<Complex<T>>> = eig
        .values
        .iter()
        .enumerate()
        .filter(|&(_, &lam)| lam >= half)
        .map(|(j, _)| eig.eigenvector(j))
        .collect();
    self_adjoint_basis(shape, &vectors)
}

/// One term of an ergodic average sequence.
#[derive(Debug, Clone)]
pub struct AverageTerm<T> {
    pub k: u64,
    pub average: Element<T>,
    /// `‖A_k − P x‖`.
    pub deviation: T,
}

/// The sequence `A_k = Avg_{F_k} x` for `k = 1..=k_max`, with convergence
/// diagnostics against the fixed-point projection.
#[derive(Debug, Clone)]
pub struct ErgodicAverageSequence<T> {
    pub terms: Vec<AverageTerm<T>>,
    pub limit: Element<T>,
}

/// Computes the ergodic averages along the canonical Følner schedule.
///
/// Cost is `O(k_max)` generator applications for `ℤ` (incremental partial
/// sums) and `O(k_max · d)` matrix products on the element space for `ℤᵈ`;
/// finite cyclic products average the whole group once.
pub fn average_sequence<T: Real>(
    action: &GroupAction<T>,
    x: &Element<T>,
    k_max: u64,
) -> Result<ErgodicAverageSequence<T>> {
    let projection = FixedPointProjection::compute(action)?;
    average_sequence_with(action, &projection, x, k_max)
}

/// Same as [`average_sequence`] but reusing a precomputed projection.
pub fn average_sequence_with<T: Real>(
    action: &GroupAction<T>,
    projection: &FixedPointProjection<T>,
    x: &Element<T>,
    k_max: u64,
) -> Result<ErgodicAverageSequence<T>> {
    if k_max == 0 {
        return Err(Error::InvalidWord("k_max must be >= 1".into()));
    }
    if *x.shape() != *action.shape() {
        return Err(Error::ShapeMismatch);
    }
    let limit = projection.project(x)?;
    let mut terms = Vec::with_capacity(k_max as usize);

    match action.presentation() {
        GroupPresentation::CyclicProduct(_) => {
            let avg = average_over(action, &action.schedule().enumerate(1)?, x)?;
            let dev = avg.sub(&limit).operator_norm()?;
            for k in 1..=k_max {
                terms.push(AverageTerm {
                    k,
                    average: avg.clone(),
                    deviation: dev,
                });
            }
        }
        GroupPresentation::Z => {
            let gen = &action.generators()[0];
            let mut transported = x.clone();
            let mut sum = Element::zero(x.shape());
            for k in 1..=k_max {
                sum = sum.add(&transported);
                let avg = sum.scale_re(T::one() / real::<T>(k as f64));
                let deviation = avg.sub(&limit).operator_norm()?;
                terms.push(AverageTerm {
                    k,
                    average: avg,
                    deviation,
                });
                if k < k_max {
                    transported = gen.apply(&transported)?;
                }
            }
        }
        GroupPresentation::Zd(d) => {
            // Per-dimension partial-sum operators L_i(k) = Σ_{j<k} U_i^j.
            let supers: Vec<CMat<T>> = action
                .generators()
                .iter()
                .map(|g| g.superoperator())
                .collect::<Result<_>>()?;
            let dim = action.shape().total_dim();
            let mut partial: Vec<CMat<T>> = vec![CMat::zeros(dim, dim); *d];
            let mut power: Vec<CMat<T>> = vec![CMat::identity(dim); *d];
            let xv = x.to_vec();
            for k in 1..=k_max {
                for i in 0..*d {
                    partial[i] = partial[i].add(&power[i]);
                    if k < k_max {
                        power[i] = supers[i].matmul(&power[i]);
                    }
                }
                let mut v = xv.clone();
                for l in partial.iter() {
                    v = l.mul_vec(&v);
                }
                let scale = T::one() / real::<T>(k as f64).powi(*d as i32);
                let avg = Element::from_vec(action.shape(), &v).scale_re(scale);
                let deviation = avg.sub(&limit).operator_norm()?;
                terms.push(AverageTerm {
                    k,
                    average: avg,
                    deviation,
                });
            }
        }
    }
    Ok(ErgodicAverageSequence { terms, limit })
}

/// The invariant state obtained by pushing a density through the dual of
/// the fixed-point projection. In finite dimension `φ ∘ Avg_{F_k}` converges
/// in norm, so the limit point is unique and this is it.
pub fn krylov_bogolyubov<T: Real>(
    projection: &FixedPointProjection<T>,
    phi: &State<T>,
) -> Result<State<T>> {
    let rho = projection.project_density(&phi.density_element())?;
    State::new(projection.shape().clone(), rho.blocks().to_vec())
}

/// Convenience wrapper computing the projection on the fly.
pub fn krylov_bogolyubov_for_action<T: Real>(
    action: &GroupAction<T>,
    phi: &State<T>,
) -> Result<State<T>> {
    krylov_bogolyubov(&FixedPointProjection::compute(action)?, phi)
}

/// Canonical Følner schedule of an action (re-exported convenience).
pub fn schedule_of<T: Real>(action: &GroupAction<T>) -> FolnerSchedule {
    action.schedule()
}
