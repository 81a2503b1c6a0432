//! Ergodic optimization: the value `m(a|K)` over sets of invariant states,
//! maximizing-face certificates, the gauge sequence and its limit,
//! unique/strict ergodicity, seminorm convergence checks, and extremal
//! averages over finite hulls.
//!
//! Invariant states are exactly the states composed with the fixed-point
//! projection, so `m(a|𝒮^G)` has the closed form `λ_max(P a)`; the long
//! Følner averages `γ_k = ‖Avg_{F_k} a‖` are always reported alongside as
//! an independent cross-check rather than as the main computation path.

use num_complex::Complex;

use crate::algebra::{Element, State};
use crate::averaging::{average_sequence_with, krylov_bogolyubov, FixedPointProjection};
use crate::dynamics::{GroupAction, GroupPresentation};
use crate::error::Error;
use crate::linalg;
use crate::models::{quotient_system, validate_ideal};
use crate::scalar::{real, to_f64, Real};
use crate::{tol, Result};

/// The sets of states an optimization can range over.
#[derive(Debug, Clone)]
pub enum StateSetDescriptor<T> {
    /// All invariant states `𝒮^G`.
    InvariantStates,
    /// All invariant tracial states `𝒯^G`.
    InvariantTracialStates,
    /// Invariant states vanishing on an invariant block ideal.
    Annihilator { ideal: Vec<usize> },
    /// The convex hull of finitely many states (not necessarily invariant);
    /// optimization ranges over their invariant images.
    FiniteHull(Vec<State<T>>),
}

/// Description of the maximizing face `K_max(a)`.
#[derive(Debug, Clone)]
pub enum MaximizingFace<T> {
    /// Spectral data of `P a`: the top eigenvalue, its multiplicity, and
    /// the eigenprojector. The face is the set of invariant states
    /// supported on that eigenspace.
    Spectral {
        top_eigenvalue: T,
        multiplicity: usize,
        eigenprojector: Element<T>,
    },
    /// Tracial case: per-orbit values and the argmax orbits.
    OrbitVertices {
        orbits: Vec<Vec<usize>>,
        orbit_values: Vec<T>,
        argmax_orbits: Vec<usize>,
    },
    /// Finite-hull case: per-vertex values of the invariant images.
    HullVertices {
        vertex_values: Vec<T>,
        argmax_indices: Vec<usize>,
    },
}

/// Result of an ergodic optimization.
#[derive(Debug, Clone)]
pub struct OptimizationReport<T> {
    pub value: T,
    pub face: MaximizingFace<T>,
    /// A state in the descriptor's set achieving the value.
    pub certificate: State<T>,
    /// `certificate(a)`, for cross-checking against `value`.
    pub certificate_value: T,
}

/// `m(a|K) = sup_{ψ∈K} ψ(a)` with a maximizing certificate.
pub fn m_value<T: Real>(
    action: &GroupAction<T>,
    a: &Element<T>,
    set: &StateSetDescriptor<T>,
) -> Result<OptimizationReport<T>> {
    let projection = FixedPointProjection::compute(action)?;
    m_value_with(action, &projection, a, set)
}

/// Same as [`m_value`] with a precomputed fixed-point projection.
pub fn m_value_with<T: Real>(
    action: &GroupAction<T>,
    projection: &FixedPointProjection<T>,
    a: &Element<T>,
    set: &StateSetDescriptor<T>,
) -> Result<OptimizationReport<T>> {
    a.require_self_adjoint(real(tol::PSD))?;
    if *a.shape() != *action.shape() {
        return Err(Error::ShapeMismatch);
    }
    match set {
        StateSetDescriptor::InvariantStates => invariant_m(projection, a),
        StateSetDescriptor::InvariantTracialStates => tracial_m(action, a),
        StateSetDescriptor::Annihilator { ideal } => annihilator_m(action, a, ideal),
        StateSetDescriptor::FiniteHull(states) => hull_m(projection, a, states),
    }
}

fn invariant_m<T: Real>(
    projection: &FixedPointProjection<T>,
    a: &Element<T>,
) -> Result<OptimizationReport<T>> {
    let pa = projection.project(a)?;
    let spectral = top_eigendata(&pa)?;
    // Certificate: a vector state on the top eigenspace, pushed through the
    // dual projection (invariant by construction).
    let seed = State::vector_state(a.shape(), spectral.block, &spectral.vector)?;
    let certificate = krylov_bogolyubov(projection, &seed)?;
    let certificate_value = certificate.expect(a)?;
    Ok(OptimizationReport {
        value: spectral.value,
        face: MaximizingFace::Spectral {
            top_eigenvalue: spectral.value,
            multiplicity: spectral.multiplicity,
            eigenprojector: spectral.projector,
        },
        certificate,
        certificate_value,
    })
}

struct TopEigendata<T> {
    value: T,
    block: usize,
    vector: Vec<Complex<T>>,
    multiplicity: usize,
    projector: Element<T>,
}

/// Top eigenvalue of a self-adjoint element across blocks, with the
/// eigenprojector onto all eigenvalues within `1e-8·max(1,|λ|)` of the top.
fn top_eigendata<T: Real>(x: &Element<T>) -> Result<TopEigendata<T>> {
    let mut eigens = Vec::with_capacity(x.shape().block_count());
    let mut best: Option<(T, usize, Vec<Complex<T>>)> = None;
    for (b, block) in x.blocks().iter().enumerate() {
        let eig = linalg::hermitian_eigen(block)?;
        if let Some(&lam) = eig.values.first() {
            if best.as_ref().is_none_or(|(cur, _, _)| lam > *cur) {
                best = Some((lam, b, eig.eigenvector(0)));
            }
        }
        eigens.push(eig);
    }
    let (value, block, vector) =
        best.ok_or_else(|| Error::Numerical("element has no blocks".into()))?;
    let face_tol = real::<T>(tol::SINGLETON) * T::one().max(value.abs());
    let mut multiplicity = 0usize;
    let mut projector = Element::zero(x.shape());
    for (b, eig) in eigens.iter().enumerate() {
        for (j, &lam) in eig.values.iter().enumerate() {
            if value - lam <= face_tol {
                multiplicity += 1;
                let v = eig.eigenvector(j);
                let n = x.shape().block_dim(b);
                for r in 0..n {
                    for c in 0..n {
                        projector.block_mut(b)[(r, c)] =
                            projector.block_mut(b)[(r, c)] + v[r] * v[c].conj();
                    }
                }
            }
        }
    }
    Ok(TopEigendata {
        value,
        block,
        vector,
        multiplicity,
        projector,
    })
}

fn tracial_m<T: Real>(action: &GroupAction<T>, a: &Element<T>) -> Result<OptimizationReport<T>> {
    let orbits = action.permutation_orbits();
    let mut orbit_values = Vec::with_capacity(orbits.len());
    for orbit in &orbits {
        let mut acc = T::zero();
        for &i in orbit {
            acc += a.block(i).trace().re / real::<T>(action.shape().block_dim(i) as f64);
        }
        orbit_values.push(acc / real::<T>(orbit.len() as f64));
    }
    let value = orbit_values.iter().cloned().fold(T::neg_infinity(), T::max);
    let face_tol = real::<T>(tol::SINGLETON) * T::one().max(value.abs());
    let argmax_orbits: Vec<usize> = orbit_values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| value - v <= face_tol)
        .map(|(i, _)| i)
        .collect();

    // Certificate: the orbit-uniform tracial state on the first argmax
    // orbit.
    let best_orbit = &orbits[argmax_orbits[0]];
    let weight = T::one() / real::<T>(best_orbit.len() as f64);
    let mut densities: Vec<crate::linalg::CMat<T>> = action
        .shape()
        .block_dims()
        .iter()
        .map(|&n| crate::linalg::CMat::zeros(n, n))
        .collect();
    for &i in best_orbit {
        let n = action.shape().block_dim(i);
        densities[i] = crate::linalg::CMat::identity(n).scale_re(weight / real::<T>(n as f64));
    }
    let certificate = State::new(action.shape().clone(), densities)?;
    let certificate_value = certificate.expect(a)?;
    Ok(OptimizationReport {
        value,
        face: MaximizingFace::OrbitVertices {
            orbits,
            orbit_values,
            argmax_orbits,
        },
        certificate,
        certificate_value,
    })
}

fn annihilator_m<T: Real>(
    action: &GroupAction<T>,
    a: &Element<T>,
    ideal: &[usize],
) -> Result<OptimizationReport<T>> {
    let ideal = validate_ideal(action, ideal)?;
    let (q_action, pi) = quotient_system(action, &ideal)?;
    let q_projection = FixedPointProjection::compute(&q_action)?;
    let qa = pi.apply(a)?;
    let report = invariant_m(&q_projection, &qa)?;

    // Re-house the certificate and face on the full algebra: zero blocks on
    // the ideal.
    let kept: Vec<usize> = (0..action.shape().block_count())
        .filter(|i| !ideal.contains(i))
        .collect();
    let mut densities: Vec<crate::linalg::CMat<T>> = action
        .shape()
        .block_dims()
        .iter()
        .map(|&n| crate::linalg::CMat::zeros(n, n))
        .collect();
    for (new, &old) in kept.iter().enumerate() {
        densities[old] = report.certificate.densities()[new].clone();
    }
    let certificate = State::new(action.shape().clone(), densities)?;
    let certificate_value = certificate.expect(a)?;

    let face = match report.face {
        MaximizingFace::Spectral {
            top_eigenvalue,
            multiplicity,
            eigenprojector,
        } => {
            let mut lifted = Element::zero(action.shape());
            for (new, &old) in kept.iter().enumerate() {
                *lifted.block_mut(old) = eigenprojector.block(new).clone();
            }
            MaximizingFace::Spectral {
                top_eigenvalue,
                multiplicity,
                eigenprojector: lifted,
            }
        }
        other => other,
    };

    Ok(OptimizationReport {
        value: report.value,
        face,
        certificate,
        certificate_value,
    })
}

fn hull_m<T: Real>(
    projection: &FixedPointProjection<T>,
    a: &Element<T>,
    states: &[State<T>],
) -> Result<OptimizationReport<T>> {
    if states.is_empty() {
        return Err(Error::EmptyHull);
    }
    let mut vertex_values = Vec::with_capacity(states.len());
    let mut images = Vec::with_capacity(states.len());
    for phi in states {
        let image = krylov_bogolyubov(projection, phi)?;
        vertex_values.push(image.expect(a)?);
        images.push(image);
    }
    let value = vertex_values
        .iter()
        .cloned()
        .fold(T::neg_infinity(), T::max);
    let face_tol = real::<T>(tol::SINGLETON) * T::one().max(value.abs());
    let argmax_indices: Vec<usize> = vertex_values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| value - v <= face_tol)
        .map(|(i, _)| i)
        .collect();
    let certificate = images[argmax_indices[0]].clone();
    let certificate_value = vertex_values[argmax_indices[0]];
    Ok(OptimizationReport {
        value,
        face: MaximizingFace::HullVertices {
            vertex_values,
            argmax_indices,
        },
        certificate,
        certificate_value,
    })
}

/// Gauge data: the sequence `γ_k = ‖Avg_{F_k} a‖`, its spectral limit, and
/// the diagnostics tying the two together.
#[derive(Debug, Clone)]
pub struct GaugeReport<T> {
    /// `γ_k` for `k = 1..=k_max`.
    pub gammas: Vec<T>,
    /// `‖A_k − P a‖` per window.
    pub diagnostics: Vec<T>,
    /// `Σ_g |F_k g Δ F_k|/|F_k|` per window.
    pub defect_sums: Vec<T>,
    /// `λ_max(P a)`: the limit of the gauge sequence.
    pub m_value: T,
    /// Empirical estimate: `min_k γ_k` for `ℤ` (the sequence `k·γ_k` is
    /// subadditive, so the limit is the infimum), the final window
    /// otherwise.
    pub gamma_estimate: T,
    /// For `ℤ`: worst violation of `(k+ℓ)γ_{k+ℓ} ≤ kγ_k + ℓγ_ℓ`.
    pub subadditivity_violation: Option<T>,
    /// Worst excess of `|γ_k − m|` over the envelope
    /// `2‖a‖·Σ_g defect(k, g)`.
    pub envelope_excess: T,
}

/// Computes the gauge report for a positive element.
pub fn gauge<T: Real>(
    action: &GroupAction<T>,
    projection: &FixedPointProjection<T>,
    a: &Element<T>,
    k_max: u64,
) -> Result<GaugeReport<T>> {
    a.require_positive(real(tol::PSD))?;
    let seq = average_sequence_with(action, projection, a, k_max)?;
    let m_value = projection.project(a)?.max_spectrum()?;
    let schedule = action.schedule();
    let norm_a = a.operator_norm()?;

    let mut gammas = Vec::with_capacity(seq.terms.len());
    let mut diagnostics = Vec::with_capacity(seq.terms.len());
    let mut defect_sums = Vec::with_capacity(seq.terms.len());
    let mut envelope_excess = T::zero();
    let two = real::<T>(2.0);
    for term in &seq.terms {
        let gamma = term.average.operator_norm()?;
        let defect = schedule.generator_defect_sum::<T>(term.k)?;
        envelope_excess = envelope_excess.max((gamma - m_value).abs() - two * norm_a * defect);
        gammas.push(gamma);
        diagnostics.push(term.deviation);
        defect_sums.push(defect);
    }

    let (gamma_estimate, subadditivity_violation) = match action.presentation() {
        GroupPresentation::Z => {
            let est = gammas.iter().cloned().fold(T::infinity(), T::min);
            // k·γ_k over all split points.
            let weighted: Vec<T> = gammas
                .iter()
                .enumerate()
                .map(|(i, &g)| g * real::<T>((i + 1) as f64))
                .collect();
            let mut worst = T::zero();
            for k in 1..=weighted.len() {
                for l in 1..=weighted.len() - k.min(weighted.len()) {
                    if k + l > weighted.len() {
                        break;
                    }
                    let violation = weighted[k + l - 1] - weighted[k - 1] - weighted[l - 1];
                    worst = worst.max(violation);
                }
            }
            (est, Some(worst))
        }
        _ => (*gammas.last().expect("k_max >= 1"), None),
    };

    Ok(GaugeReport {
        gammas,
        diagnostics,
        defect_sums,
        m_value,
        gamma_estimate,
        subadditivity_violation,
        envelope_excess,
    })
}

/// Outcome of the unique-ergodicity analysis.
#[derive(Debug, Clone)]
pub struct UniqueErgodicityReport<T> {
    pub unique: bool,
    pub strict: bool,
    pub fixed_rank: usize,
    /// The unique invariant state, when `unique`.
    pub invariant_state: Option<State<T>>,
    /// Basis-wise convergence check at sampled windows, when `unique`:
    /// `(k, max basis deviation, bound used)`.
    pub convergence_samples: Vec<(u64, T, T)>,
    pub convergence_ok: bool,
}

/// Sampled windows for the convergence verification.
const CONVERGENCE_SAMPLES: [u64; 3] = [64, 256, 1024];
const ORDER_DETECTION_CAP: u64 = 4096;

/// Unique ergodicity ⟺ the fixed-point algebra is the scalars; strictness
/// adds faithfulness of the invariant state. When unique, the convergence
/// `‖Avg_{F_k} x − φ(x)·1‖ → 0` is verified on the canonical basis at
/// sampled windows.
pub fn unique_ergodicity<T: Real>(action: &GroupAction<T>) -> Result<UniqueErgodicityReport<T>> {
    let projection = FixedPointProjection::compute(action)?;
    let fixed_rank = projection.rank();
    let unique = fixed_rank == 1;
    if !unique {
        return Ok(UniqueErgodicityReport {
            unique,
            strict: false,
            fixed_rank,
            invariant_state: None,
            convergence_samples: Vec::new(),
            convergence_ok: false,
        });
    }
    let phi = krylov_bogolyubov(&projection, &State::maximally_mixed(action.shape()))?;
    let strict = phi.is_faithful()?;

    // Condition check: averages of every basis element converge to the
    // scalar φ(x)·1. For finite-order actions the bound 2‖x‖·period/k is a
    // theorem; otherwise the raw deviations are reported against a unit
    // slack and only monotone smallness is required.
    let order = action.finite_order(ORDER_DETECTION_CAP)?;
    let mut samples = Vec::new();
    let mut ok = true;
    let shape = action.shape();
    for &k in CONVERGENCE_SAMPLES.iter() {
        let mut worst = T::zero();
        let mut bound = T::zero();
        for (b, r, c) in shape.basis_coords() {
            let x = Element::basis_element(shape, b, r, c);
            let avg = crate::averaging::average_sequence_with(action, &projection, &x, k)?
                .terms
                .pop()
                .expect("k >= 1")
                .average;
            let scalar = Element::unit(shape).scale(phi.evaluate(&x)?);
            let dev = avg.sub(&scalar).operator_norm()?;
            let norm_x = x.operator_norm()?;
            let this_bound = match order {
                Some(period) => {
                    real::<T>(2.0) * norm_x * real::<T>(period as f64) / real::<T>(k as f64)
                }
                None => norm_x,
            };
            worst = worst.max(dev);
            bound = bound.max(this_bound);
            if dev > this_bound + real(tol::CMP) {
                ok = false;
            }
        }
        samples.push((k, worst, bound));
    }

    Ok(UniqueErgodicityReport {
        unique,
        strict,
        fixed_rank,
        invariant_state: Some(phi),
        convergence_samples: samples,
        convergence_ok: ok,
    })
}

/// Herman-type check relating the value set of the limit states to
/// convergence in the hull seminorm.
#[derive(Debug, Clone)]
pub struct HermanReport<T> {
    /// `[min, max]` of `{ψ(x) : ψ limit state}`.
    pub spectrum_interval: (T, T),
    pub lambda: T,
    pub spectrum_singleton: bool,
    /// `s_k = ‖Avg_{F_k} x − λ·1‖_S`.
    pub seminorm_sequence: Vec<T>,
    /// Window of trailing (period-aligned when available) indices checked.
    pub window: Vec<u64>,
    pub seminorm_converges: bool,
    pub consistent: bool,
}

const HERMAN_WINDOW: usize = 8;

/// Runs the equivalence check for a self-adjoint `x` and target value `λ`.
///
/// `set` must be `InvariantStates` (meaning `S` is the whole state space,
/// seminorm = operator norm) or `FiniteHull` (seminorm = max over the
/// vertices). When `lambda` is `None`, the candidate is taken from the
/// first hull vertex (midpoint of the value interval for the full state
/// space).
pub fn herman_check<T: Real>(
    action: &GroupAction<T>,
    set: &StateSetDescriptor<T>,
    x: &Element<T>,
    lambda: Option<T>,
    k_max: u64,
) -> Result<HermanReport<T>> {
    x.require_self_adjoint(real(tol::PSD))?;
    let projection = FixedPointProjection::compute(action)?;
    let px = projection.project(x)?;

    enum Mode<T> {
        FullStateSpace,
        Hull(Vec<State<T>>),
    }
    let mode = match set {
        StateSetDescriptor::InvariantStates => Mode::FullStateSpace,
        StateSetDescriptor::FiniteHull(states) if !states.is_empty() => Mode::Hull(states.clone()),
        StateSetDescriptor::FiniteHull(_) => return Err(Error::EmptyHull),
        _ => {
            return Err(Error::InvalidWord(
                "seminorm check supports the full state space or a finite hull".into(),
            ))
        }
    };

    let (lo, hi) = match &mode {
        Mode::FullStateSpace => (px.min_spectrum()?, px.max_spectrum()?),
        Mode::Hull(states) => {
            let mut lo = T::infinity();
            let mut hi = T::neg_infinity();
            for phi in states {
                let v = phi.expect(&px)?;
                lo = lo.min(v);
                hi = hi.max(v);
            }
            (lo, hi)
        }
    };
    let lambda = lambda.unwrap_or(match &mode {
        Mode::FullStateSpace => (lo + hi) / real::<T>(2.0),
        Mode::Hull(states) => states[0].expect(&px)?,
    });

    let norm_x = x.operator_norm()?;
    let singleton_tol = real::<T>(tol::SINGLETON) * T::one().max(norm_x);
    let spectrum_singleton = hi - lo <= singleton_tol && (hi - lambda).abs() <= singleton_tol;

    let seq = average_sequence_with(action, &projection, x, k_max)?;
    let shifted_unit = Element::unit(action.shape()).scale_re(lambda);
    let mut seminorm_sequence = Vec::with_capacity(seq.terms.len());
    for term in &seq.terms {
        let centered = term.average.sub(&shifted_unit);
        let s = match &mode {
            // For self-adjoint y the sup of |φ(y)| over all states is the
            // operator norm.
            Mode::FullStateSpace => centered.operator_norm()?,
            Mode::Hull(states) => {
                let mut worst = T::zero();
                for phi in states {
                    worst = worst.max(phi.expect(&centered)?.abs());
                }
                worst
            }
        };
        seminorm_sequence.push(s);
    }

    // Trailing window, aligned to full periods when the action has finite
    // order so that the within-period oscillation does not mask the limit.
    let order = action
        .finite_order(ORDER_DETECTION_CAP)?
        .filter(|&l| l <= k_max);
    let window: Vec<u64> = match order {
        Some(l) => (1..=k_max / l)
            .rev()
            .take(HERMAN_WINDOW)
            .map(|q| q * l)
            .collect(),
        None => (1..=k_max).rev().take(HERMAN_WINDOW).collect(),
    };
    let conv_tol = real::<T>(tol::SEMINORM);
    let seminorm_converges = window
        .iter()
        .all(|&k| seminorm_sequence[(k - 1) as usize] <= conv_tol);

    let consistent = spectrum_singleton == seminorm_converges;
    Ok(HermanReport {
        spectrum_interval: (lo, hi),
        lambda,
        spectrum_singleton,
        seminorm_sequence,
        window,
        seminorm_converges,
        consistent,
    })
}

/// Extremal averages over a hull of invariant states.
#[derive(Debug, Clone)]
pub struct JenkinsonReport<T> {
    pub a_upper: T,
    pub a_lower: T,
    pub d_upper_sequence: Vec<T>,
    pub d_lower_sequence: Vec<T>,
    /// `max_k |d̄_k − ā|` and `max_k |d̲_k − a̲|`.
    pub max_upper_gap: T,
    pub max_lower_gap: T,
}

/// Computes `ā, a̲` (extrema over the hull) and the window extrema
/// `d̄_k, d̲_k` of the averaged observable; with invariant vertices the two
/// agree for every `k`.
pub fn jenkinson_extrema<T: Real>(
    action: &GroupAction<T>,
    states: &[State<T>],
    x: &Element<T>,
    k_max: u64,
) -> Result<JenkinsonReport<T>> {
    x.require_self_adjoint(real(tol::PSD))?;
    if states.is_empty() {
        return Err(Error::EmptyHull);
    }
    for (index, phi) in states.iter().enumerate() {
        let rho = phi.density_element();
        for gen in action.generators() {
            let moved = gen.inverse().apply(&rho)?;
            let dev = moved.max_abs_diff(&rho);
            if dev > real(tol::INVARIANCE) {
                return Err(Error::NotInvariantState {
                    index,
                    deviation: to_f64(dev),
                });
            }
        }
    }

    let mut a_upper = T::neg_infinity();
    let mut a_lower = T::infinity();
    for phi in states {
        let v = phi.expect(x)?;
        a_upper = a_upper.max(v);
        a_lower = a_lower.min(v);
    }

    let projection = FixedPointProjection::compute(action)?;
    let seq = average_sequence_with(action, &projection, x, k_max)?;
    let mut d_upper_sequence = Vec::with_capacity(seq.terms.len());
    let mut d_lower_sequence = Vec::with_capacity(seq.terms.len());
    let mut max_upper_gap = T::zero();
    let mut max_lower_gap = T::zero();
    for term in &seq.terms {
        let mut hi = T::neg_infinity();
        let mut lo = T::infinity();
        for phi in states {
            let v = phi.expect(&term.average)?;
            hi = hi.max(v);
            lo = lo.min(v);
        }
        max_upper_gap = max_upper_gap.max((hi - a_upper).abs());
        max_lower_gap = max_lower_gap.max((lo - a_lower).abs());
        d_upper_sequence.push(hi);
        d_lower_sequence.push(lo);
    }

    Ok(JenkinsonReport {
        a_upper,
        a_lower,
        d_upper_sequence,
        d_lower_sequence,
        max_upper_gap,
        max_lower_gap,
    })
}

/// Structure of the fixed-point subalgebra.
#[derive(Debug, Clone)]
pub struct FixedAlgebraReport<T> {
    pub dimension: usize,
    pub abelian: bool,
    /// Minimal projections, present exactly when the algebra is abelian.
    pub minimal_projections: Vec<Element<T>>,
    /// Self-adjoint HS-orthonormal basis of the fixed algebra.
    pub basis: Vec<Element<T>>,
}

/// Computes a basis of the fixed-point algebra, decides commutativity, and
/// (in the abelian case) diagonalizes it into its minimal projections, which
/// are in bijection with the extreme invariant states.
pub fn fixed_algebra_analysis<T: Real>(action: &GroupAction<T>) -> Result<FixedAlgebraReport<T>> {
    let projection = FixedPointProjection::compute(action)?;
    fixed_algebra_analysis_with(&projection)
}

pub fn fixed_algebra_analysis_with<T: Real>(
    projection: &FixedPointProjection<T>,
) -> Result<FixedAlgebraReport<T>> {
    let basis = projection.image_basis().to_vec();
    let dimension = basis.len();
    let mut abelian = true;
    'outer: for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if basis[i].commutator(&basis[j]).operator_norm()? > real(tol::ABELIAN) {
                abelian = false;
                break 'outer;
            }
        }
    }
    let minimal_projections = if abelian {
        minimal_projections(projection, &basis)?
    } else {
        Vec::new()
    };
    Ok(FixedAlgebraReport {
        dimension,
        abelian,
        minimal_projections,
        basis,
    })
}

/// First 32 primes, used for deterministic generic coefficients.
const PRIMES: [u64; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131,
];

/// Splits an abelian fixed algebra into its minimal projections by
/// diagonalizing a generic element `h = Σ_j √p_j · b_j` and grouping
/// spectral projections by eigenvalue cluster. Retries with shifted prime
/// weights if a coincidence merges two clusters.
fn minimal_projections<T: Real>(
    projection: &FixedPointProjection<T>,
    basis: &[Element<T>],
) -> Result<Vec<Element<T>>> {
    let rank = basis.len();
    let shape = projection.shape();
    for attempt in 0..5 {
        let mut h = Element::zero(shape);
        for (j, b) in basis.iter().enumerate() {
            let w = real::<T>((PRIMES[(j + attempt) % PRIMES.len()] as f64).sqrt());
            h = h.add(&b.scale_re(w));
        }
        // Collect all eigenpairs across blocks and cluster by eigenvalue.
        type EigPair<T> = (T, usize, Vec<Complex<T>>);
        let mut pairs: Vec<EigPair<T>> = Vec::new();
        for (b, block) in h.blocks().iter().enumerate() {
            let eig = linalg::hermitian_eigen(block)?;
            for (j, &lam) in eig.values.iter().enumerate() {
                pairs.push((lam, b, eig.eigenvector(j)));
            }
        }
        pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
        let spread = pairs
            .first()
            .map(|f| f.0 - pairs.last().unwrap().0)
            .unwrap_or(T::zero());
        let cluster_gap = real::<T>(1e-6) * T::one().max(spread);

        let mut clusters: Vec<Vec<&EigPair<T>>> = Vec::new();
        for pair in &pairs {
            match clusters.last_mut() {
                Some(cluster) if (cluster.last().unwrap().0 - pair.0).abs() <= cluster_gap => {
                    cluster.push(pair)
                }
                _ => clusters.push(vec![pair]),
            }
        }
        if clusters.len() != rank {
            continue;
        }

        let mut projections = Vec::with_capacity(rank);
        let mut all_good = true;
        for cluster in &clusters {
            let mut q = Element::zero(shape);
            for (_, b, v) in cluster {
                let n = shape.block_dim(*b);
                for r in 0..n {
                    for c in 0..n {
                        q.block_mut(*b)[(r, c)] = q.block_mut(*b)[(r, c)] + v[r] * v[c].conj();
                    }
                }
            }
            let idem = q.mul(&q).max_abs_diff(&q);
            let in_fixed = projection.project(&q)?.max_abs_diff(&q);
            if idem > real(tol::CMP) || in_fixed > real(tol::CMP) {
                all_good = false;
                break;
            }
            projections.push(q);
        }
        if !all_good {
            continue;
        }
        // Partition of the unit.
        let mut total = Element::zero(shape);
        for q in &projections {
            total = total.add(q);
        }
        if total.max_abs_diff(&Element::unit(shape)) > real(tol::CMP) {
            continue;
        }
        return Ok(projections);
    }
    Err(Error::Numerical(
        "could not separate the minimal projections of the fixed algebra".into(),
    ))
}

/// An observable exposing one extreme invariant state.
#[derive(Debug, Clone)]
pub struct ExposingObservable<T> {
    /// The minimal projection serving as the observable.
    pub observable: Element<T>,
    /// The unique maximizing extreme invariant state.
    pub maximizing_state: State<T>,
    /// `m(observable | 𝒮^G)`; equals 1.
    pub m_value: T,
    /// Multiplicity of the top eigenvalue of `P(observable)`: the rank of
    /// the projection inside the full algebra.
    pub top_multiplicity: usize,
}

/// For an abelian fixed algebra, the minimal projection `p_j` exposes the
/// extreme invariant state carried by it: the maximizing face of `p_j` is
/// exactly the invariant states giving it full weight, whose only extreme
/// point is returned. Refuses non-abelian fixed algebras.
pub fn exposing_observable<T: Real>(
    action: &GroupAction<T>,
    extreme_index: usize,
) -> Result<ExposingObservable<T>> {
    let projection = FixedPointProjection::compute(action)?;
    let analysis = fixed_algebra_analysis_with(&projection)?;
    if !analysis.abelian {
        return Err(Error::NotAbelian);
    }
    let count = analysis.minimal_projections.len();
    let p = analysis
        .minimal_projections
        .get(extreme_index)
        .ok_or(Error::ProjectionIndex {
            index: extreme_index,
            count,
        })?
        .clone();

    let trace: T = p.blocks().iter().map(|b| b.trace().re).sum();
    let densities: Vec<crate::linalg::CMat<T>> = p
        .blocks()
        .iter()
        .map(|b| b.scale_re(T::one() / trace))
        .collect();
    let maximizing_state = State::new(action.shape().clone(), densities)?;

    let pp = projection.project(&p)?;
    let spectral = top_eigendata(&pp)?;
    Ok(ExposingObservable {
        observable: p,
        maximizing_state,
        m_value: spectral.value,
        top_multiplicity: spectral.multiplicity,
    })
}

/// For a non-uniquely-ergodic system with abelian fixed algebra, a positive
/// element whose gauge differs from the given invariant state's value: the
/// minimal projection with the least weight under the state (gauge 1,
/// state value at most 1/2).
pub fn gauge_mismatch_witness<T: Real>(
    action: &GroupAction<T>,
    phi: &State<T>,
) -> Result<Element<T>> {
    let analysis = fixed_algebra_analysis(action)?;
    if !analysis.abelian {
        return Err(Error::NotAbelian);
    }
    if analysis.minimal_projections.len() < 2 {
        return Err(Error::Numerical(
            "system is uniquely ergodic; no mismatch witness exists".into(),
        ));
    }
    let mut best: Option<(T, Element<T>)> = None;
    for q in &analysis.minimal_projections {
        let v = phi.expect(q)?;
        if best.as_ref().is_none_or(|(cur, _)| v < *cur) {
            best = Some((v, q.clone()));
        }
    }
    Ok(best.expect("at least two projections").1)
}

/// Two-route identity for a quotient: the optimization of the pushed
/// observable over the quotient's invariant states, the annihilator
/// optimization on the source, and the quotient gauge.
#[derive(Debug, Clone)]
pub struct HomomorphismIdentityReport<T> {
    pub m_quotient: T,
    pub m_annihilator: T,
    pub quotient_gauge: GaugeReport<T>,
    /// Worst pairwise discrepancy among the three values.
    pub max_discrepancy: T,
}

/// Checks `m(π(a) | S̃^G) = m(a | Ann(ker π)) = Γ(π(a))` for the block
/// quotient keeping `quotient_blocks`.
pub fn homomorphism_optimization_identity<T: Real>(
    action: &GroupAction<T>,
    quotient_blocks: &[usize],
    a: &Element<T>,
    k_max: u64,
) -> Result<HomomorphismIdentityReport<T>> {
    a.require_positive(real(tol::PSD))?;
    let ideal: Vec<usize> = (0..action.shape().block_count())
        .filter(|i| !quotient_blocks.contains(i))
        .collect();
    let (q_action, pi) = quotient_system(action, &ideal)?;
    let qa = pi.apply(a)?;
    let q_projection = FixedPointProjection::compute(&q_action)?;

    let m_quotient = m_value_with(
        &q_action,
        &q_projection,
        &qa,
        &StateSetDescriptor::InvariantStates,
    )?
    .value;
    let m_annihilator = m_value(action, a, &StateSetDescriptor::Annihilator { ideal })?.value;
    let quotient_gauge = gauge(&q_action, &q_projection, &qa, k_max)?;

    let d1 = (m_quotient - m_annihilator).abs();
    let d2 = (m_quotient - quotient_gauge.m_value).abs();
    let d3 = (m_annihilator - quotient_gauge.m_value).abs();
    Ok(HomomorphismIdentityReport {
        m_quotient,
        m_annihilator,
        quotient_gauge,
        max_discrepancy: d1.max(d2).max(d3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraShape;
    use crate::dynamics::Automorphism;
    use crate::linalg::CMat;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn shape(dims: &[usize]) -> AlgebraShape {
        AlgebraShape::new(dims.to_vec()).unwrap()
    }

    fn cyclic_shift_action(n: usize) -> GroupAction<f64> {
        let s = shape(&vec![1; n]);
        let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let theta = Automorphism::new(s, perm, vec![CMat::identity(1); n]).unwrap();
        GroupAction::new(GroupPresentation::Z, vec![theta]).unwrap()
    }

    fn identity_action(dims: &[usize]) -> GroupAction<f64> {
        let s = shape(dims);
        GroupAction::new(GroupPresentation::Z, vec![Automorphism::identity(&s)]).unwrap()
    }

    fn phase_action_quarter() -> GroupAction<f64> {
        let s = shape(&[2]);
        let mut u = CMat::zeros(2, 2);
        u[(0, 0)] = c(1.0, 0.0);
        u[(1, 1)] = c(0.0, 1.0);
        GroupAction::new(
            GroupPresentation::Z,
            vec![Automorphism::inner(&s, vec![u]).unwrap()],
        )
        .unwrap()
    }

    fn diag_element(values: &[f64]) -> Element<f64> {
        let s = shape(&vec![1; values.len()]);
        let blocks = values
            .iter()
            .map(|&v| CMat::from_rows(vec![vec![c(v, 0.0)]]).unwrap())
            .collect();
        Element::new(s, blocks).unwrap()
    }

    #[test]
    fn m_identity_action_is_top_eigenvalue() {
        let action = identity_action(&[1, 1]);
        let a = diag_element(&[2.0, 5.0]);
        let report = m_value(&action, &a, &StateSetDescriptor::InvariantStates).unwrap();
        assert_abs_diff_eq!(report.value, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.certificate_value, 5.0, epsilon = 1e-10);
    }

    #[test]
    fn m_cyclic_shift_averages_the_indicator() {
        // Oracle: the only shift-invariant distribution on 3 points is
        // uniform, so m(diag(1,0,0)) = 1/3.
        let action = cyclic_shift_action(3);
        let a = diag_element(&[1.0, 0.0, 0.0]);
        let report = m_value(&action, &a, &StateSetDescriptor::InvariantStates).unwrap();
        assert_abs_diff_eq!(report.value, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.certificate_value, 1.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn m_phase_action_on_correlation_observable() {
        // Exact 4-term group-average oracle: P a = I, so m = 1.
        let action = phase_action_quarter();
        let a = Element::new(
            shape(&[2]),
            vec![CMat::from_rows(vec![
                vec![c(1.0, 0.0), c(0.5, 0.0)],
                vec![c(0.5, 0.0), c(1.0, 0.0)],
            ])
            .unwrap()],
        )
        .unwrap();
        let report = m_value(&action, &a, &StateSetDescriptor::InvariantStates).unwrap();
        assert_abs_diff_eq!(report.value, 1.0, epsilon = 1e-12);
        match report.face {
            MaximizingFace::Spectral { multiplicity, .. } => assert_eq!(multiplicity, 2),
            _ => panic!("expected spectral face"),
        }
    }

    #[test]
    fn m_rejects_non_self_adjoint() {
        let action = identity_action(&[2]);
        let a = Element::basis_element(action.shape(), 0, 0, 1);
        assert!(matches!(
            m_value(&action, &a, &StateSetDescriptor::InvariantStates),
            Err(Error::NotSelfAdjoint { .. })
        ));
    }

    #[test]
    fn tracial_m_two_block_vertex_oracle() {
        // M_2 ⊕ M_1, trivial action: two orbit vertices with values
        // tr(a_0)/2 = 0.6 and a_1 = 0.2.
        let s = shape(&[2, 1]);
        let action =
            GroupAction::new(GroupPresentation::Z, vec![Automorphism::identity(&s)]).unwrap();
        let a = Element::new(
            s,
            vec![
                CMat::from_rows(vec![
                    vec![c(0.9, 0.0), c(0.0, 0.0)],
                    vec![c(0.0, 0.0), c(0.3, 0.0)],
                ])
                .unwrap(),
                CMat::from_rows(vec![vec![c(0.2, 0.0)]]).unwrap(),
            ],
        )
        .unwrap();
        let report = m_value(&action, &a, &StateSetDescriptor::InvariantTracialStates).unwrap();
        assert_abs_diff_eq!(report.value, 0.6, epsilon = 1e-12);
        assert!(report.certificate.is_tracial(1e-9));
        assert_abs_diff_eq!(report.certificate_value, 0.6, epsilon = 1e-10);
    }

    #[test]
    fn tracial_m_on_single_m2_block() {
        // a = diag(1, 0) on M_2: the normalized trace gives 1/2.
        let s = shape(&[2]);
        let action =
            GroupAction::new(GroupPresentation::Z, vec![Automorphism::identity(&s)]).unwrap();
        let a = Element::new(
            s,
            vec![CMat::from_rows(vec![
                vec![c(1.0, 0.0), c(0.0, 0.0)],
                vec![c(0.0, 0.0), c(0.0, 0.0)],
            ])
            .unwrap()],
        )
        .unwrap();
        let report = m_value(&action, &a, &StateSetDescriptor::InvariantTracialStates).unwrap();
        assert_abs_diff_eq!(report.value, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn tracial_m_merges_permuted_blocks() {
        // Cyclic C³: all three blocks in one orbit; m over tracial states
        // is the orbit mean.
        let action = cyclic_shift_action(3);
        let a = diag_element(&[1.0, 0.0, 0.0]);
        let report = m_value(&action, &a, &StateSetDescriptor::InvariantTracialStates).unwrap();
        assert_abs_diff_eq!(report.value, 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn annihilator_m_reduces_to_quotient() {
        // C³ cyclic ⊕ C¹ fixed; quotient onto the fixed C¹ block where the
        // observable has value 0.7.
        let s = shape(&[1, 1, 1, 1]);
        let theta =
            Automorphism::new(s.clone(), vec![1, 2, 0, 3], vec![CMat::identity(1); 4]).unwrap();
        let action = GroupAction::new(GroupPresentation::Z, vec![theta]).unwrap();
        let a = diag_element(&[0.9, 0.1, 0.2, 0.7]);
        let report = m_value(
            &action,
            &a,
            &StateSetDescriptor::Annihilator {
                ideal: vec![0, 1, 2],
            },
        )
        .unwrap();
        assert_abs_diff_eq!(report.value, 0.7, epsilon = 1e-12);
        // Certificate vanishes on the ideal.
        assert!(report.certificate.densities()[0].max_abs() < 1e-12);
        assert_abs_diff_eq!(report.certificate_value, 0.7, epsilon = 1e-10);

        // Empty ideal reduces to the invariant optimization.
        let full = m_value(
            &action,
            &a,
            &StateSetDescriptor::Annihilator { ideal: vec![] },
        )
        .unwrap();
        let plain = m_value(&action, &a, &StateSetDescriptor::InvariantStates).unwrap();
        assert_abs_diff_eq!(full.value, plain.value, epsilon = 1e-12);
    }

    #[test]
    fn annihilator_of_whole_algebra_is_rejected() {
        let action = cyclic_shift_action(3);
        let a = diag_element(&[1.0, 0.0, 0.0]);
        assert!(matches!(
            m_value(
                &action,
                &a,
                &StateSetDescriptor::Annihilator {
                    ideal: vec![0, 1, 2]
                }
            ),
            Err(Error::InvalidIdeal(_))
        ));
    }

    #[test]
    fn hull_m_takes_best_invariant_image() {
        let action = identity_action(&[1, 1]);
        let a = diag_element(&[2.0, 5.0]);
        let s = action.shape().clone();
        let hull = vec![
            State::point_mass(&s, 0).unwrap(),
            State::point_mass(&s, 1).unwrap(),
        ];
        let report = m_value(&action, &a, &StateSetDescriptor::FiniteHull(hull)).unwrap();
        assert_abs_diff_eq!(report.value, 5.0, epsilon = 1e-12);
        match &report.face {
            MaximizingFace::HullVertices { argmax_indices, .. } => {
                assert_eq!(argmax_indices, &vec![1])
            }
            _ => panic!("expected hull face"),
        }
    }

    #[test]
    fn monotonicity_of_state_set_inclusions() {
        let action = cyclic_shift_action(4);
        let a = diag_element(&[0.9, -0.3, 0.5, 0.1]);
        let m_all = m_value(&action, &a, &StateSetDescriptor::InvariantStates)
            .unwrap()
            .value;
        let m_tracial = m_value(&action, &a, &StateSetDescriptor::InvariantTracialStates)
            .unwrap()
            .value;
        assert!(m_tracial <= m_all + 1e-10);
    }

    #[test]
    fn translation_covariance_of_the_face() {
        let action = phase_action_quarter();
        let a = Element::new(
            shape(&[2]),
            vec![CMat::from_rows(vec![
                vec![c(0.4, 0.0), c(0.3, -0.1)],
                vec![c(0.3, 0.1), c(-0.2, 0.0)],
            ])
            .unwrap()],
        )
        .unwrap();
        let r = 1.75;
        let base = m_value(&action, &a, &StateSetDescriptor::InvariantStates).unwrap();
        let shifted = m_value(&action, &a.shift(r), &StateSetDescriptor::InvariantStates).unwrap();
        assert_abs_diff_eq!(shifted.value, base.value + r, epsilon = 1e-10);
        match (&base.face, &shifted.face) {
            (
                MaximizingFace::Spectral {
                    eigenprojector: p1, ..
                },
                MaximizingFace::Spectral {
                    eigenprojector: p2, ..
                },
            ) => assert!(p1.max_abs_diff(p2) < 1e-9),
            _ => panic!("expected spectral faces"),
        }
    }

    #[test]
    fn gauge_of_unit_is_constant_one() {
        let action = cyclic_shift_action(3);
        let projection = FixedPointProjection::compute(&action).unwrap();
        let one = Element::unit(action.shape());
        let report = gauge(&action, &projection, &one, 16).unwrap();
        for &g in &report.gammas {
            assert_abs_diff_eq!(g, 1.0, epsilon = 1e-13);
        }
        assert_abs_diff_eq!(report.m_value, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(report.gamma_estimate, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn gauge_cyclic_indicator_hits_third_at_full_periods() {
        let action = cyclic_shift_action(3);
        let projection = FixedPointProjection::compute(&action).unwrap();
        let a = diag_element(&[1.0, 0.0, 0.0]);
        let report = gauge(&action, &projection, &a, 6).unwrap();
        assert_abs_diff_eq!(report.gammas[2], 1.0 / 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(report.gammas[5], 1.0 / 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(report.m_value, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.gamma_estimate, 1.0 / 3.0, epsilon = 1e-12);
        assert!(report.subadditivity_violation.unwrap() <= 1e-10);
    }

    #[test]
    fn gauge_identity_action_is_constant_norm() {
        let action = identity_action(&[1, 1]);
        let projection = FixedPointProjection::compute(&action).unwrap();
        let a = diag_element(&[2.0, 0.5]);
        let report = gauge(&action, &projection, &a, 8).unwrap();
        for &g in &report.gammas {
            assert_abs_diff_eq!(g, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn gauge_rejects_non_positive() {
        let action = identity_action(&[1, 1]);
        let projection = FixedPointProjection::compute(&action).unwrap();
        let a = diag_element(&[1.0, -0.1]);
        assert!(matches!(
            gauge(&action, &projection, &a, 4),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn unique_ergodicity_of_cyclic_shift() {
        let action = cyclic_shift_action(3);
        let report = unique_ergodicity(&action).unwrap();
        assert!(report.unique);
        assert!(report.strict);
        assert_eq!(report.fixed_rank, 1);
        assert!(report.convergence_ok);
        let phi = report.invariant_state.unwrap();
        let uniform = State::maximally_mixed(action.shape());
        assert!(phi.max_abs_diff(&uniform) < 1e-10);
    }

    #[test]
    fn identity_action_is_not_uniquely_ergodic() {
        let action = identity_action(&[1, 1]);
        let report = unique_ergodicity(&action).unwrap();
        assert!(!report.unique);
        assert_eq!(report.fixed_rank, 2);
    }

    #[test]
    fn phase_action_is_not_uniquely_ergodic() {
        // Commutant oracle: the diagonal densities are all invariant.
        let action = phase_action_quarter();
        let report = unique_ergodicity(&action).unwrap();
        assert!(!report.unique);
        assert_eq!(report.fixed_rank, 2);
    }

    #[test]
    fn herman_true_instance_on_cyclic_shift() {
        let action = cyclic_shift_action(3);
        let x = diag_element(&[1.0, 2.0, 3.0]);
        let report = herman_check(
            &action,
            &StateSetDescriptor::InvariantStates,
            &x,
            Some(2.0),
            96,
        )
        .unwrap();
        assert!(report.spectrum_singleton);
        assert!(report.seminorm_converges);
        assert!(report.consistent);
    }

    #[test]
    fn herman_false_instance_on_identity_action() {
        let action = identity_action(&[1, 1]);
        let x = diag_element(&[0.0, 1.0]);
        let report = herman_check(
            &action,
            &StateSetDescriptor::InvariantStates,
            &x,
            Some(0.5),
            64,
        )
        .unwrap();
        assert!(!report.spectrum_singleton);
        assert!(!report.seminorm_converges);
        assert!(report.consistent);
        assert_abs_diff_eq!(report.spectrum_interval.0, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.spectrum_interval.1, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn herman_unit_instance_is_trivially_true() {
        let action = phase_action_quarter();
        let x = Element::unit(action.shape());
        let report = herman_check(
            &action,
            &StateSetDescriptor::InvariantStates,
            &x,
            Some(1.0),
            32,
        )
        .unwrap();
        assert!(report.spectrum_singleton);
        assert!(report.seminorm_converges);
        assert!(report.consistent);
    }

    #[test]
    fn jenkinson_single_invariant_vertex() {
        let action = cyclic_shift_action(3);
        let x = diag_element(&[1.0, 2.0, 3.0]);
        let hull = vec![State::maximally_mixed(action.shape())];
        let report = jenkinson_extrema(&action, &hull, &x, 16).unwrap();
        assert_abs_diff_eq!(report.a_upper, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.a_lower, 2.0, epsilon = 1e-12);
        assert!(report.max_upper_gap < 1e-10);
        assert!(report.max_lower_gap < 1e-10);
    }

    #[test]
    fn jenkinson_two_point_masses_on_identity_action() {
        let action = identity_action(&[1, 1]);
        let s = action.shape().clone();
        let hull = vec![
            State::point_mass(&s, 0).unwrap(),
            State::point_mass(&s, 1).unwrap(),
        ];
        let x = diag_element(&[0.0, 1.0]);
        let report = jenkinson_extrema(&action, &hull, &x, 8).unwrap();
        assert_abs_diff_eq!(report.a_upper, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.a_lower, 0.0, epsilon = 1e-12);
        assert!(report.max_upper_gap < 1e-10);
    }

    #[test]
    fn jenkinson_rejects_non_invariant_vertex() {
        let action = cyclic_shift_action(3);
        let hull = vec![State::point_mass(action.shape(), 0).unwrap()];
        let x = diag_element(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            jenkinson_extrema(&action, &hull, &x, 4),
            Err(Error::NotInvariantState { .. })
        ));
    }

    #[test]
    fn fixed_algebra_of_cyclic_shift_is_scalar() {
        let action = cyclic_shift_action(3);
        let report = fixed_algebra_analysis(&action).unwrap();
        assert_eq!(report.dimension, 1);
        assert!(report.abelian);
        assert_eq!(report.minimal_projections.len(), 1);
        let unit = Element::unit(action.shape());
        assert!(report.minimal_projections[0].max_abs_diff(&unit) < 1e-10);
    }

    #[test]
    fn fixed_algebra_of_phase_action_is_diagonal() {
        let action = phase_action_quarter();
        let report = fixed_algebra_analysis(&action).unwrap();
        assert_eq!(report.dimension, 2);
        assert!(report.abelian);
        let projections = &report.minimal_projections;
        assert_eq!(projections.len(), 2);
        // The two diagonal matrix units, in some order.
        let e11 = Element::basis_element(action.shape(), 0, 0, 0);
        let e22 = Element::basis_element(action.shape(), 0, 1, 1);
        let matches_units = (projections[0].max_abs_diff(&e11) < 1e-9
            && projections[1].max_abs_diff(&e22) < 1e-9)
            || (projections[0].max_abs_diff(&e22) < 1e-9
                && projections[1].max_abs_diff(&e11) < 1e-9);
        assert!(matches_units);
    }

    #[test]
    fn fixed_algebra_of_trivial_action_on_m2_is_not_abelian() {
        let s = shape(&[2]);
        let action: GroupAction<f64> =
            GroupAction::new(GroupPresentation::Z, vec![Automorphism::identity(&s)]).unwrap();
        let report = fixed_algebra_analysis(&action).unwrap();
        assert_eq!(report.dimension, 4);
        assert!(!report.abelian);
        assert!(report.minimal_projections.is_empty());
    }

    #[test]
    fn exposing_observable_on_identity_two_points() {
        let action = identity_action(&[1, 1]);
        let exp = exposing_observable(&action, 0).unwrap();
        assert_abs_diff_eq!(exp.m_value, 1.0, epsilon = 1e-10);
        assert_eq!(exp.top_multiplicity, 1);
        // The maximizing state is the point mass on the exposed coordinate.
        assert_abs_diff_eq!(
            exp.maximizing_state.expect(&exp.observable).unwrap(),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn exposing_observable_on_phase_action() {
        let action = phase_action_quarter();
        for idx in 0..2 {
            let exp = exposing_observable(&action, idx).unwrap();
            assert_abs_diff_eq!(exp.m_value, 1.0, epsilon = 1e-10);
            assert_eq!(exp.top_multiplicity, 1);
        }
        assert!(matches!(
            exposing_observable(&action, 5),
            Err(Error::ProjectionIndex { .. })
        ));
    }

    #[test]
    fn exposing_observable_refuses_non_abelian() {
        let s = shape(&[2]);
        let action: GroupAction<f64> =
            GroupAction::new(GroupPresentation::Z, vec![Automorphism::identity(&s)]).unwrap();
        assert!(matches!(
            exposing_observable(&action, 0),
            Err(Error::NotAbelian)
        ));
    }

    #[test]
    fn gauge_mismatch_witness_separates_two_orbits() {
        let action = identity_action(&[1, 1]);
        let phi = State::point_mass(action.shape(), 0).unwrap();
        let w = gauge_mismatch_witness(&action, &phi).unwrap();
        let projection = FixedPointProjection::compute(&action).unwrap();
        let g = gauge(&action, &projection, &w, 4).unwrap();
        let phi_value = phi.expect(&w).unwrap();
        assert!((g.m_value - phi_value).abs() > 0.5);
    }

    #[test]
    fn homomorphism_identity_on_mixed_system() {
        // C³ cyclic ⊕ C¹ fixed; quotient onto the fixed block.
        let s = shape(&[1, 1, 1, 1]);
        let theta =
            Automorphism::new(s.clone(), vec![1, 2, 0, 3], vec![CMat::identity(1); 4]).unwrap();
        let action = GroupAction::new(GroupPresentation::Z, vec![theta]).unwrap();
        let a = diag_element(&[0.9, 0.1, 0.2, 0.7]);
        let report = homomorphism_optimization_identity(&action, &[3], &a, 32).unwrap();
        assert_abs_diff_eq!(report.m_quotient, 0.7, epsilon = 1e-12);
        assert!(report.max_discrepancy < 1e-8);
    }

    #[test]
    fn homomorphism_identity_rejects_empty_quotient() {
        let action = cyclic_shift_action(3);
        let a = diag_element(&[1.0, 0.0, 0.0]);
        assert!(matches!(
            homomorphism_optimization_identity(&action, &[], &a, 8),
            Err(Error::InvalidIdeal(_))
        ));
    }
}
