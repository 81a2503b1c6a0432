//! Equivariant *-homomorphisms between block algebras, quotients by
//! invariant ideals, annihilator states, and checks for embeddings into a
//! probability space.
//!
//! Two-sided ideals of a block algebra are unions of blocks, so a
//! homomorphism is described per target block: which source block lands
//! there and with which unitary conjugation. Source blocks feeding no
//! target form the kernel.

use crate::algebra::{AlgebraShape, Element, State};
use crate::averaging::{krylov_bogolyubov, FixedPointProjection};
use crate::dynamics::{Automorphism, GroupAction};
use crate::error::Error;
use crate::linalg::CMat;
use crate::optimization::{gauge, m_value_with, StateSetDescriptor};
use crate::scalar::{real, to_f64, Real};
use crate::{tol, Result};

/// A *-homomorphism between block algebras in block-assignment form:
/// `π(x)_t = w_t · x_{src(t)} · w_t†` for assigned targets, `0` otherwise.
#[derive(Debug, Clone)]
pub struct BlockHomomorphism<T> {
    source: AlgebraShape,
    target: AlgebraShape,
    /// For each target block: `(source_block, conjugating_unitary)`.
    assignments: Vec<Option<(usize, CMat<T>)>>,
}

impl<T: Real> BlockHomomorphism<T> {
    pub fn new(
        source: AlgebraShape,
        target: AlgebraShape,
        assignments: Vec<Option<(usize, CMat<T>)>>,
    ) -> Result<Self> {
        if assignments.len() != target.block_count() {
            return Err(Error::InvalidHomomorphism(format!(
                "{} assignments for {} target blocks",
                assignments.len(),
                target.block_count()
            )));
        }
        for (t, a) in assignments.iter().enumerate() {
            if let Some((s, w)) = a {
                if *s >= source.block_count() {
                    return Err(Error::InvalidHomomorphism(format!(
                        "target {t} references missing source block {s}"
                    )));
                }
                if source.block_dim(*s) != target.block_dim(t) {
                    return Err(Error::InvalidHomomorphism(format!(
                        "target {t} (dim {}) fed by source {s} (dim {})",
                        target.block_dim(t),
                        source.block_dim(*s)
                    )));
                }
                let n = target.block_dim(t);
                if w.rows() != n || w.cols() != n {
                    return Err(Error::InvalidHomomorphism(format!(
                        "conjugator for target {t} has wrong size"
                    )));
                }
                if w.unitary_deviation() > real(tol::PSD) {
                    return Err(Error::InvalidHomomorphism(format!(
                        "conjugator for target {t} is not unitary"
                    )));
                }
            }
        }
        Ok(BlockHomomorphism {
            source,
            target,
            assignments,
        })
    }

    /// Identity homomorphism.
    pub fn identity(shape: &AlgebraShape) -> Self {
        BlockHomomorphism {
            source: shape.clone(),
            target: shape.clone(),
            assignments: shape
                .block_dims()
                .iter()
                .enumerate()
                .map(|(i, &n)| Some((i, CMat::identity(n))))
                .collect(),
        }
    }

    pub fn source(&self) -> &AlgebraShape {
        &self.source
    }

    pub fn target(&self) -> &AlgebraShape {
        &self.target
    }

    /// Source blocks mapped to zero everywhere: the kernel ideal.
    pub fn kernel_blocks(&self) -> Vec<usize> {
        let mut hit = vec![false; self.source.block_count()];
        for a in self.assignments.iter().flatten() {
            hit[a.0] = true;
        }
        hit.iter()
            .enumerate()
            .filter(|(_, &h)| !h)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn apply(&self, x: &Element<T>) -> Result<Element<T>> {
        if *x.shape() != self.source {
            return Err(Error::ShapeMismatch);
        }
        let mut out = Element::zero(&self.target);
        for (t, a) in self.assignments.iter().enumerate() {
            if let Some((s, w)) = a {
                *out.block_mut(t) = w.matmul(x.block(*s)).matmul(&w.adjoint());
            }
        }
        Ok(out)
    }

    /// Pulls a target state back along the homomorphism: the density of
    /// `φ ∘ π` is `Σ_t w_t† ρ_t w_t` routed to the source blocks.
    pub fn pull_back_state(&self, phi: &State<T>) -> Result<State<T>> {
        if *phi.shape() != self.target {
            return Err(Error::ShapeMismatch);
        }
        let mut densities: Vec<CMat<T>> = self
            .source
            .block_dims()
            .iter()
            .map(|&n| CMat::zeros(n, n))
            .collect();
        for (t, a) in self.assignments.iter().enumerate() {
            if let Some((s, w)) = a {
                let routed = w.adjoint().matmul(&phi.densities()[t]).matmul(w);
                densities[*s] = densities[*s].add(&routed);
            }
        }
        State::new(self.source.clone(), densities)
    }

    /// Max deviation from the *-homomorphism laws on the canonical basis.
    pub fn law_deviation(&self) -> Result<T> {
        let mut dev = T::zero();
        let coords: Vec<_> = self.source.basis_coords().collect();
        for &(b, r, c) in &coords {
            let e = Element::basis_element(&self.source, b, r, c);
            // Adjoint law.
            let lhs = self.apply(&e.adjoint())?;
            let rhs = self.apply(&e)?.adjoint();
            dev = dev.max(lhs.max_abs_diff(&rhs));
            // Product law against same-block partners (cross-block products
            // vanish on both sides by block structure).
            for cc in 0..self.source.block_dim(b) {
                let f = Element::basis_element(&self.source, b, c, cc);
                let lhs = self.apply(&e.mul(&f))?;
                let rhs = self.apply(&e)?.mul(&self.apply(&f)?);
                dev = dev.max(lhs.max_abs_diff(&rhs));
            }
        }
        Ok(dev)
    }

    /// Max deviation of `Θ̃_g ∘ π − π ∘ Θ_g` on the canonical basis.
    pub fn equivariance_deviation(
        &self,
        source_action: &GroupAction<T>,
        target_action: &GroupAction<T>,
    ) -> Result<T> {
        let mut dev = T::zero();
        for (b, r, c) in self.source.basis_coords() {
            let e = Element::basis_element(&self.source, b, r, c);
            for (src_gen, tgt_gen) in source_action
                .generators()
                .iter()
                .zip(target_action.generators())
            {
                let lhs = tgt_gen.apply(&self.apply(&e)?)?;
                let rhs = self.apply(&src_gen.apply(&e)?)?;
                dev = dev.max(lhs.max_abs_diff(&rhs));
            }
        }
        Ok(dev)
    }
}

/// Validates that the listed blocks form a proper ideal carried onto itself
/// by the action's block permutations; returns the sorted, deduplicated
/// block list.
pub fn validate_ideal<T: Real>(action: &GroupAction<T>, ideal: &[usize]) -> Result<Vec<usize>> {
    let b = action.shape().block_count();
    let mut blocks: Vec<usize> = ideal.to_vec();
    blocks.sort_unstable();
    blocks.dedup();
    if blocks.iter().any(|&i| i >= b) {
        return Err(Error::InvalidIdeal(format!(
            "block index out of range (algebra has {b} blocks)"
        )));
    }
    if blocks.len() == b {
        return Err(Error::InvalidIdeal(
            "ideal is the whole algebra; no state annihilates the unit".into(),
        ));
    }
    if let Some(g) = action.invariant_block_set_violation(&blocks) {
        return Err(Error::InvalidIdeal(format!(
            "ideal is not closed under the block permutation of generator {g}"
        )));
    }
    Ok(blocks)
}

/// The action induced on the blocks outside an invariant ideal, together
/// with the canonical projection homomorphism.
pub fn quotient_system<T: Real>(
    action: &GroupAction<T>,
    ideal: &[usize],
) -> Result<(GroupAction<T>, BlockHomomorphism<T>)> {
    let ideal = validate_ideal(action, ideal)?;
    let shape = action.shape();
    let kept: Vec<usize> = (0..shape.block_count())
        .filter(|i| !ideal.contains(i))
        .collect();
    let q_shape = shape.drop_blocks(&ideal)?;

    // Old index -> new index over the kept blocks.
    let mut renumber = vec![usize::MAX; shape.block_count()];
    for (new, &old) in kept.iter().enumerate() {
        renumber[old] = new;
    }

    let mut q_generators = Vec::with_capacity(action.generators().len());
    for gen in action.generators() {
        let mut perm = vec![0usize; kept.len()];
        let mut unitaries = Vec::with_capacity(kept.len());
        for &old in &kept {
            perm[renumber[old]] = renumber[gen.permutation()[old]];
            // Unitaries are indexed by target slot; kept slots keep theirs.
            unitaries.push(gen.unitaries()[old].clone());
        }
        q_generators.push(Automorphism::new(q_shape.clone(), perm, unitaries)?);
    }
    let q_action = GroupAction::new(action.presentation().clone(), q_generators)?;

    let assignments = kept
        .iter()
        .map(|&old| Some((old, CMat::identity(shape.block_dim(old)))))
        .collect();
    let pi = BlockHomomorphism::new(shape.clone(), q_shape, assignments)?;
    Ok((q_action, pi))
}

/// An invariant state vanishing on the ideal: the Krylov–Bogolyubov state
/// of the quotient, pulled back through the projection.
pub fn annihilator_state<T: Real>(action: &GroupAction<T>, ideal: &[usize]) -> Result<State<T>> {
    let (q_action, pi) = quotient_system(action, ideal)?;
    let seed = State::maximally_mixed(q_action.shape());
    let invariant = krylov_bogolyubov(&FixedPointProjection::compute(&q_action)?, &seed)?;
    pi.pull_back_state(&invariant)
}

/// An equivariant embedding of a system into a target system carrying a
/// distinguished state.
#[derive(Debug, Clone)]
pub struct WStarModel<T> {
    pub source_action: GroupAction<T>,
    pub target_action: GroupAction<T>,
    pub embedding: BlockHomomorphism<T>,
    /// The distinguished state on the target.
    pub rho: State<T>,
}

impl<T: Real> WStarModel<T> {
    /// `ρ ∘ ι` as a state on the source.
    pub fn pull_back_rho(&self) -> Result<State<T>> {
        self.embedding.pull_back_state(&self.rho)
    }

    /// Witness that the gauge cannot match `ρ∘ι` on every positive element
    /// when the source system is not uniquely ergodic: a minimal projection
    /// of the (abelian) fixed algebra on which `ρ∘ι` is small while the
    /// gauge is 1.
    pub fn gauge_mismatch_witness(&self) -> Result<Element<T>> {
        let rho_iota = self.pull_back_rho()?;
        crate::optimization::gauge_mismatch_witness(&self.source_action, &rho_iota)
    }
}

/// Axis-by-axis outcome of [`model_check`].
#[derive(Debug, Clone)]
pub struct ModelCheckReport<T> {
    pub violations: Vec<String>,
    pub rho_invariant: bool,
    pub rho_faithful: bool,
    pub rho_tracial: bool,
    /// Image of the embedding together with the action generates the whole
    /// target algebra (the finite-dimensional density condition).
    pub image_generates: bool,
    /// Worst `|Γ(ι(a)) − m(a | Ann(ker ι))|` over the positive battery.
    pub max_gauge_gap: T,
    pub gauge_identity_holds: bool,
}

impl<T> ModelCheckReport<T> {
    pub fn is_model(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies the model axioms and, on a battery of positive elements, the
/// identity between the target gauge of the embedded element and the
/// annihilator optimization on the source.
pub fn model_check<T: Real>(model: &WStarModel<T>, k_max: u64) -> Result<ModelCheckReport<T>> {
    let mut violations = Vec::new();

    let law = model.embedding.law_deviation()?;
    if law > real(tol::HOM) {
        violations.push(format!(
            "embedding violates *-homomorphism laws (deviation {:.3e})",
            to_f64(law)
        ));
    }
    let equiv = model
        .embedding
        .equivariance_deviation(&model.source_action, &model.target_action)?;
    if equiv > real(tol::HOM) {
        violations.push(format!(
            "embedding is not equivariant (deviation {:.3e})",
            to_f64(equiv)
        ));
    }

    // Image invariance: Ξ_g(ι(𝔄)) = ι(𝔄), checked on a basis against the
    // image subspace.
    let image_span: Vec<Vec<num_complex::Complex<T>>> = model
        .embedding
        .source()
        .basis_coords()
        .map(|(b, r, c)| {
            let e = Element::basis_element(model.embedding.source(), b, r, c);
            model.embedding.apply(&e).map(|img| img.to_vec())
        })
        .collect::<Result<_>>()?;
    let ortho = crate::linalg::orthonormalize(&image_span, real(1e-10));
    let mut image_invariant = true;
    for gen in model.target_action.generators() {
        for (b, r, c) in model.embedding.source().basis_coords() {
            let e = Element::basis_element(model.embedding.source(), b, r, c);
            let moved = gen.apply(&model.embedding.apply(&e)?)?.to_vec();
            let mut residual = moved.clone();
            for basis_vec in &ortho {
                let coeff = crate::linalg::inner(basis_vec, &residual);
                for (ri, bi) in residual.iter_mut().zip(basis_vec) {
                    *ri -= coeff * *bi;
                }
            }
            if crate::linalg::vec_norm(&residual) > real(tol::INVARIANCE) {
                image_invariant = false;
            }
        }
    }
    if !image_invariant {
        violations.push("the action does not preserve the embedded image".into());
    }

    // ρ ∘ Ξ_g = ρ.
    let mut rho_invariant = true;
    let rho_elem = model.rho.density_element();
    for gen in model.target_action.generators() {
        let transported = gen.inverse().apply(&rho_elem)?;
        if transported.max_abs_diff(&rho_elem) > real(tol::INVARIANCE) {
            rho_invariant = false;
        }
    }
    if !rho_invariant {
        violations.push("distinguished state is not invariant".into());
    }

    let rho_faithful = model.rho.is_faithful()?;
    let rho_tracial = model.rho.is_tracial(real(tol::PSD));
    if !rho_faithful {
        violations.push("distinguished state is not faithful".into());
    }
    if !rho_tracial {
        violations.push("distinguished state is not tracial".into());
    }

    // Density: the generated *-algebra of the image (plus unit, closed
    // under the action) must be the whole target algebra.
    let image_generates =
        generated_dimension(model, &ortho)? == model.embedding.target().total_dim();
    if !image_generates {
        violations.push("embedded image does not generate the target algebra".into());
    }

    // Gauge identity battery: runs only once the structural axioms hold.
    let kernel = model.embedding.kernel_blocks();
    let mut max_gap = T::zero();
    if violations.is_empty() {
        let projection = FixedPointProjection::compute(&model.target_action)?;
        let src_projection = FixedPointProjection::compute(&model.source_action)?;
        for a in positive_battery(model.embedding.source()) {
            let target_a = model.embedding.apply(&a)?;
            let g = gauge(&model.target_action, &projection, &target_a, k_max)?;
            let ann = m_value_with(
                &model.source_action,
                &src_projection,
                &a,
                &StateSetDescriptor::Annihilator {
                    ideal: kernel.clone(),
                },
            )?;
            max_gap = max_gap.max((g.m_value - ann.value).abs());
        }
    }
    let gauge_identity_holds = max_gap <= real(tol::CMP);
    if !gauge_identity_holds {
        violations.push(format!(
            "gauge identity fails on the battery (gap {:.3e})",
            to_f64(max_gap)
        ));
    }

    Ok(ModelCheckReport {
        violations,
        rho_invariant,
        rho_faithful,
        rho_tracial,
        image_generates,
        max_gauge_gap: max_gap,
        gauge_identity_holds,
    })
}

/// Deterministic battery of positive source elements for the gauge
/// identity: the unit and unit-shifted self-adjoint basis directions.
fn positive_battery<T: Real>(shape: &AlgebraShape) -> Vec<Element<T>> {
    let mut battery = vec![Element::unit(shape)];
    let half = real::<T>(0.5);
    for (b, r, c) in shape.basis_coords() {
        if battery.len() > 12 {
            break;
        }
        let e = Element::basis_element(shape, b, r, c);
        let sym = e.add(&e.adjoint()).scale_re(half);
        if sym.hs_norm() <= real(1e-12) {
            continue;
        }
        let normalized = sym.scale_re(half / sym.operator_norm().unwrap_or(T::one()));
        battery.push(normalized.shift(T::one()));
    }
    battery
}

/// Dimension of the unital *-algebra generated by the embedded image,
/// closed under the target action's generators.
fn generated_dimension<T: Real>(
    model: &WStarModel<T>,
    image_basis: &[Vec<num_complex::Complex<T>>],
) -> Result<usize> {
    let shape = model.embedding.target().clone();
    let mut span: Vec<Vec<num_complex::Complex<T>>> = image_basis.to_vec();
    span.push(Element::<T>::unit(&shape).to_vec());
    span = crate::linalg::orthonormalize(&span, real(1e-10));
    loop {
        let dim = span.len();
        let elements: Vec<Element<T>> = span.iter().map(|v| Element::from_vec(&shape, v)).collect();
        let mut next = span.clone();
        for x in &elements {
            next.push(x.adjoint().to_vec());
            for gen in model.target_action.generators() {
                next.push(gen.apply(x)?.to_vec());
            }
            for y in &elements {
                next.push(x.mul(y).to_vec());
            }
        }
        span = crate::linalg::orthonormalize(&next, real(1e-10));
        if span.len() == dim || span.len() == shape.total_dim() {
            return Ok(span.len());
        }
    }
}
