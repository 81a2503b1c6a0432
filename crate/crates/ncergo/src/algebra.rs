//! Finite direct sums of complex matrix blocks, their elements, states, and
//! self-adjoint functionals.
//!
//! An algebra is described by its block dimensions `(n_1, …, n_B)`; elements
//! carry one dense `n_i × n_i` matrix per block. States are block density
//! matrices pairing with elements by `φ(x) = Σ_i tr(ρ_i x_i)`, and general
//! self-adjoint functionals use the same trace pairing with a self-adjoint
//! witness element.

use num_complex::Complex;

use crate::error::Error;
use crate::linalg::{self, CMat};
use crate::scalar::{real, to_f64, Real};
use crate::{tol, Result};

/// Block dimensions `(n_1, …, n_B)` of a direct sum of full matrix algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraShape {
    block_dims: Vec<usize>,
}

impl AlgebraShape {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() || block_dims.contains(&0) {
            return Err(Error::EmptyShape);
        }
        Ok(AlgebraShape { block_dims })
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn block_count(&self) -> usize {
        self.block_dims.len()
    }

    pub fn block_dim(&self, i: usize) -> usize {
        self.block_dims[i]
    }

    /// Complex dimension `Σ n_i²` of the element space.
    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    /// Offset of block `i` in the canonical vectorization.
    fn block_offset(&self, i: usize) -> usize {
        self.block_dims[..i].iter().map(|n| n * n).sum()
    }

    /// Canonical flat index of basis element `E^{(block)}_{r c}`.
    pub fn basis_index(&self, block: usize, r: usize, c: usize) -> usize {
        self.block_offset(block) + r * self.block_dims[block] + c
    }

    /// Enumerates `(block, row, col)` in canonical order.
    pub fn basis_coords(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.block_dims
            .iter()
            .enumerate()
            .flat_map(|(b, &n)| (0..n).flat_map(move |r| (0..n).map(move |c| (b, r, c))))
    }

    /// Shape with the listed blocks removed (used for quotients).
    pub fn drop_blocks(&self, removed: &[usize]) -> Result<Self> {
        let kept: Vec<usize> = self
            .block_dims
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, &n)| n)
            .collect();
        AlgebraShape::new(kept)
    }
}

/// An element of the block algebra: one dense complex matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct Element<T> {
    shape: AlgebraShape,
    blocks: Vec<CMat<T>>,
}

impl<T: Real> Element<T> {
    /// Builds an element, rejecting block data that does not match the shape.
    pub fn new(shape: AlgebraShape, blocks: Vec<CMat<T>>) -> Result<Self> {
        if blocks.len() != shape.block_count() {
            return Err(Error::DimensionMismatch {
                block: blocks.len().min(shape.block_count()),
                expected_rows: shape.block_dims().get(blocks.len()).copied().unwrap_or(0),
                expected_cols: 0,
                rows: 0,
                cols: 0,
            });
        }
        for (i, m) in blocks.iter().enumerate() {
            let n = shape.block_dim(i);
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch {
                    block: i,
                    expected_rows: n,
                    expected_cols: n,
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
        }
        Ok(Element { shape, blocks })
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&n| CMat::zeros(n, n))
            .collect();
        Element {
            shape: shape.clone(),
            blocks,
        }
    }

    /// The unit: identity matrix in every block.
    pub fn unit(shape: &AlgebraShape) -> Self {
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&n| CMat::identity(n))
            .collect();
        Element {
            shape: shape.clone(),
            blocks,
        }
    }

    /// Matrix unit `E^{(block)}_{r c}`.
    pub fn basis_element(shape: &AlgebraShape, block: usize, r: usize, c: usize) -> Self {
        let mut e = Self::zero(shape);
        e.blocks[block][(r, c)] = Complex::new(T::one(), T::zero());
        e
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[CMat<T>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMat<T> {
        &self.blocks[i]
    }

    pub fn block_mut(&mut self, i: usize) -> &mut CMat<T> {
        &mut self.blocks[i]
    }

    pub fn same_shape(&self, other: &Self) -> Result<()> {
        if self.shape == other.shape {
            Ok(())
        } else {
            Err(Error::ShapeMismatch)
        }
    }

    pub fn adjoint(&self) -> Self {
        Element {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Element {
            shape: self.shape.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Element {
            shape: self.shape.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Element {
            shape: self.shape.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.matmul(b))
                .collect(),
        }
    }

    pub fn scale(&self, z: Complex<T>) -> Self {
        Element {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(z)).collect(),
        }
    }

    pub fn scale_re(&self, t: T) -> Self {
        self.scale(Complex::new(t, T::zero()))
    }

    /// `r·1 + self` (shift by a real multiple of the unit).
    pub fn shift(&self, r: T) -> Self {
        self.add(&Self::unit(&self.shape).scale_re(r))
    }

    /// `xy − yx`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// C*-norm: max over blocks of the largest singular value.
    pub fn operator_norm(&self) -> Result<T> {
        let mut best = T::zero();
        for b in &self.blocks {
            best = best.max(linalg::spectral_norm(b)?);
        }
        Ok(best)
    }

    pub fn max_abs_entry(&self) -> T {
        self.blocks
            .iter()
            .map(|b| b.max_abs())
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Max-entry deviation from self-adjointness.
    pub fn self_adjoint_deviation(&self) -> T {
        self.blocks
            .iter()
            .map(|b| b.hermitian_deviation())
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn is_self_adjoint(&self, tolerance: T) -> bool {
        self.self_adjoint_deviation() <= tolerance
    }

    pub fn require_self_adjoint(&self, tolerance: T) -> Result<()> {
        let dev = self.self_adjoint_deviation();
        if dev <= tolerance {
            Ok(())
        } else {
            Err(Error::NotSelfAdjoint {
                deviation: to_f64(dev),
            })
        }
    }

    /// True iff the element is Hermitian within `tolerance` and all
    /// eigenvalues are `≥ −tolerance`.
    pub fn is_positive(&self, tolerance: T) -> Result<bool> {
        if !self.is_self_adjoint(tolerance) {
            return Ok(false);
        }
        Ok(self.min_spectrum()? >= -tolerance)
    }

    pub fn require_positive(&self, tolerance: T) -> Result<()> {
        self.require_self_adjoint(tolerance)?;
        let lo = self.min_spectrum()?;
        if lo >= -tolerance {
            Ok(())
        } else {
            Err(Error::NotPositive {
                min_eigenvalue: to_f64(lo),
            })
        }
    }

    /// Smallest eigenvalue across blocks (of the Hermitian part).
    pub fn min_spectrum(&self) -> Result<T> {
        let mut lo = T::infinity();
        for b in &self.blocks {
            lo = lo.min(linalg::min_eigenvalue(b)?);
        }
        Ok(lo)
    }

    /// Largest eigenvalue across blocks (of the Hermitian part).
    pub fn max_spectrum(&self) -> Result<T> {
        let mut hi = T::neg_infinity();
        for b in &self.blocks {
            hi = hi.max(linalg::max_eigenvalue(b)?);
        }
        Ok(hi)
    }

    /// Hilbert–Schmidt inner product `Σ_i tr(x_i† y_i)`.
    pub fn hs_inner(&self, other: &Self) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            acc += a.adjoint().matmul(b).trace();
        }
        acc
    }

    pub fn hs_norm(&self) -> T {
        self.hs_inner(self).re.max(T::zero()).sqrt()
    }

    /// Canonical vectorization: blocks in order, each row-major.
    pub fn to_vec(&self) -> Vec<Complex<T>> {
        let mut v = Vec::with_capacity(self.shape.total_dim());
        for b in &self.blocks {
            v.extend_from_slice(b.data());
        }
        v
    }

    pub fn from_vec(shape: &AlgebraShape, v: &[Complex<T>]) -> Self {
        debug_assert_eq!(v.len(), shape.total_dim());
        let mut blocks = Vec::with_capacity(shape.block_count());
        let mut off = 0;
        for &n in shape.block_dims() {
            let mut m = CMat::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    m[(r, c)] = v[off + r * n + c];
                }
            }
            blocks.push(m);
            off += n * n;
        }
        Element {
            shape: shape.clone(),
            blocks,
        }
    }
}

/// Trace pairing `Σ_i tr(w_i x_i)` of a witness block list with an element.
fn trace_pairing<T: Real>(witness: &[CMat<T>], x: &Element<T>) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (w, b) in witness.iter().zip(x.blocks()) {
        acc += w.matmul(b).trace();
    }
    acc
}

/// Max deviation of the blocks from being central (scalar multiples of the
/// identity).
fn central_deviation<T: Real>(blocks: &[CMat<T>]) -> T {
    let mut dev = T::zero();
    for m in blocks {
        let n = m.rows();
        let mean = m.trace().re / real::<T>(n as f64);
        for r in 0..n {
            for c in 0..n {
                let target = if r == c {
                    Complex::new(mean, T::zero())
                } else {
                    Complex::new(T::zero(), T::zero())
                };
                dev = dev.max((m[(r, c)] - target).norm());
            }
        }
    }
    dev
}

/// A state: block density matrices, Hermitian PSD, total trace one.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T> {
    shape: AlgebraShape,
    densities: Vec<CMat<T>>,
}

impl<T: Real> State<T> {
    /// Validates PSD within `tol::PSD` and normalization within `tol::NORM`.
    pub fn new(shape: AlgebraShape, densities: Vec<CMat<T>>) -> Result<Self> {
        let witness = Element::new(shape.clone(), densities)?;
        witness
            .require_self_adjoint(real(tol::PSD))
            .map_err(|_| Error::InvalidState("density is not Hermitian".into()))?;
        let lo = witness.min_spectrum()?;
        if lo < -real::<T>(tol::PSD) {
            return Err(Error::InvalidState(format!(
                "density has negative eigenvalue {:.3e}",
                to_f64(lo)
            )));
        }
        let total: T = witness.blocks().iter().map(|m| m.trace().re).sum();
        if (total - T::one()).abs() > real(tol::NORM) {
            return Err(Error::InvalidState(format!(
                "total trace {} is not 1",
                to_f64(total)
            )));
        }
        Ok(State {
            shape: witness.shape().clone(),
            densities: witness.blocks().to_vec(),
        })
    }

    /// The tracial state proportional to the identity in every block.
    pub fn maximally_mixed(shape: &AlgebraShape) -> Self {
        let total: usize = shape.block_dims().iter().sum();
        let w = T::one() / real::<T>(total as f64);
        let densities = shape
            .block_dims()
            .iter()
            .map(|&n| CMat::identity(n).scale_re(w))
            .collect();
        State {
            shape: shape.clone(),
            densities,
        }
    }

    /// Vector state `x ↦ ⟨v, x v⟩` living on a single block.
    pub fn vector_state(shape: &AlgebraShape, block: usize, v: &[Complex<T>]) -> Result<Self> {
        let n = shape.block_dim(block);
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                block,
                expected_rows: n,
                expected_cols: 1,
                rows: v.len(),
                cols: 1,
            });
        }
        let norm_sq = linalg::vec_norm(v).powi(2);
        if norm_sq <= T::zero() {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let mut densities: Vec<CMat<T>> = shape
            .block_dims()
            .iter()
            .map(|&m| CMat::zeros(m, m))
            .collect();
        for r in 0..n {
            for c in 0..n {
                // ρ = |v⟩⟨v| / ‖v‖², so that tr(ρ x) = ⟨v, x v⟩ / ‖v‖².
                densities[block][(r, c)] = v[r] * v[c].conj() / Complex::new(norm_sq, T::zero());
            }
        }
        Ok(State {
            shape: shape.clone(),
            densities,
        })
    }

    /// Point mass at a coordinate of a commutative (all dims 1) algebra.
    pub fn point_mass(shape: &AlgebraShape, block: usize) -> Result<Self> {
        if shape.block_dim(block) != 1 {
            return Err(Error::InvalidState(
                "point mass requires a one-dimensional block".into(),
            ));
        }
        let mut densities: Vec<CMat<T>> = shape
            .block_dims()
            .iter()
            .map(|&m| CMat::zeros(m, m))
            .collect();
        densities[block][(0, 0)] = Complex::new(T::one(), T::zero());
        Ok(State {
            shape: shape.clone(),
            densities,
        })
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn densities(&self) -> &[CMat<T>] {
        &self.densities
    }

    /// `φ(x) = Σ_i tr(ρ_i x_i)`.
    pub fn evaluate(&self, x: &Element<T>) -> Result<Complex<T>> {
        if self.shape != *x.shape() {
            return Err(Error::ShapeMismatch);
        }
        Ok(trace_pairing(&self.densities, x))
    }

    /// Real part of the pairing; exact for self-adjoint observables.
    pub fn expect(&self, x: &Element<T>) -> Result<T> {
        Ok(self.evaluate(x)?.re)
    }

    /// Central densities within `tolerance` ⟺ tracial.
    pub fn is_tracial(&self, tolerance: T) -> bool {
        central_deviation(&self.densities) <= tolerance
    }

    /// All density eigenvalues strictly above `tol::FAITHFUL`.
    pub fn is_faithful(&self) -> Result<bool> {
        let witness = Element::new(self.shape.clone(), self.densities.clone())?;
        Ok(witness.min_spectrum()? > real(tol::FAITHFUL))
    }

    pub fn density_element(&self) -> Element<T> {
        Element {
            shape: self.shape.clone(),
            blocks: self.densities.clone(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.densities
            .iter()
            .zip(&other.densities)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(T::zero(), |a, b| a.max(b))
    }
}

/// A self-adjoint bounded functional in its canonical trace-pairing
/// representation `φ(x) = Σ_i tr(h_i x_i)` with `h = h*`.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfAdjointFunctional<T> {
    witness: Element<T>,
}

impl<T: Real> SelfAdjointFunctional<T> {
    pub fn new(witness: Element<T>) -> Result<Self> {
        witness.require_self_adjoint(real(tol::PSD))?;
        Ok(SelfAdjointFunctional { witness })
    }

    pub fn from_state(state: &State<T>) -> Self {
        SelfAdjointFunctional {
            witness: state.density_element(),
        }
    }

    pub fn witness(&self) -> &Element<T> {
        &self.witness
    }

    pub fn shape(&self) -> &AlgebraShape {
        self.witness.shape()
    }

    pub fn evaluate(&self, x: &Element<T>) -> Result<Complex<T>> {
        if *self.shape() != *x.shape() {
            return Err(Error::ShapeMismatch);
        }
        Ok(trace_pairing(self.witness.blocks(), x))
    }

    /// Functional norm `‖φ‖ = Σ_i tr|h_i|`.
    pub fn norm(&self) -> Result<T> {
        let mut acc = T::zero();
        for b in self.witness.blocks() {
            let eig = linalg::hermitian_eigen(b)?;
            acc += eig.values.iter().map(|lam| lam.abs()).sum();
        }
        Ok(acc)
    }

    pub fn is_tracial(&self, tolerance: T) -> bool {
        central_deviation(self.witness.blocks()) <= tolerance
    }

    /// Jordan decomposition `φ = φ⁺ − φ⁻` through the spectral split of the
    /// witness, together with the support projection `z` of the positive
    /// part: `φ⁺(1−z) = 0` and `φ⁻(z) = 0` hold exactly in finite dimension.
    pub fn jordan_decompose(&self) -> Result<JordanDecomposition<T>> {
        let shape = self.shape().clone();
        let mut pos = Vec::with_capacity(shape.block_count());
        let mut neg = Vec::with_capacity(shape.block_count());
        let mut proj = Vec::with_capacity(shape.block_count());
        for b in self.witness.blocks() {
            let eig = linalg::hermitian_eigen(b)?;
            pos.push(eig.partial_reconstruct(|lam| (lam > T::zero()).then_some(lam)));
            neg.push(eig.partial_reconstruct(|lam| (lam < T::zero()).then_some(-lam)));
            proj.push(eig.partial_reconstruct(|lam| (lam > T::zero()).then_some(T::one())));
        }
        Ok(JordanDecomposition {
            positive: SelfAdjointFunctional {
                witness: Element::new(shape.clone(), pos)?,
            },
            negative: SelfAdjointFunctional {
                witness: Element::new(shape.clone(), neg)?,
            },
            support: Element::new(shape, proj)?,
        })
    }
}

/// Result of [`SelfAdjointFunctional::jordan_decompose`].
#[derive(Debug, Clone)]
pub struct JordanDecomposition<T> {
    /// `φ⁺`, with PSD witness.
    pub positive: SelfAdjointFunctional<T>,
    /// `φ⁻`, with PSD witness.
    pub negative: SelfAdjointFunctional<T>,
    /// Spectral projection onto the range of the positive part.
    pub support: Element<T>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn diag_shape(entries: usize) -> AlgebraShape {
        AlgebraShape::new(vec![1; entries]).unwrap()
    }

    fn diag_element(values: &[f64]) -> Element<f64> {
        let shape = diag_shape(values.len());
        let blocks = values
            .iter()
            .map(|&v| CMat::from_rows(vec![vec![c(v, 0.0)]]).unwrap())
            .collect();
        Element::new(shape, blocks).unwrap()
    }

    fn m2(rows: [[C; 2]; 2]) -> CMat<f64> {
        CMat::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn m2_element(rows: [[C; 2]; 2]) -> Element<f64> {
        Element::new(AlgebraShape::new(vec![2]).unwrap(), vec![m2(rows)]).unwrap()
    }

    #[test]
    fn make_element_diagonal_embedding() {
        let e = diag_element(&[2.0, 5.0]);
        assert_eq!(e.shape().block_count(), 2);
        assert_eq!(e.block(0)[(0, 0)], c(2.0, 0.0));
        assert_eq!(e.block(1)[(0, 0)], c(5.0, 0.0));
    }

    #[test]
    fn make_element_rejects_mismatched_blocks() {
        let shape = AlgebraShape::new(vec![2]).unwrap();
        let bad = CMat::<f64>::zeros(3, 3);
        let err = Element::new(shape, vec![bad]).unwrap_err();
        match err {
            Error::DimensionMismatch { block, rows, .. } => {
                assert_eq!(block, 0);
                assert_eq!(rows, 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn shape_rejects_zero_block() {
        assert!(AlgebraShape::new(vec![2, 0]).is_err());
        assert!(AlgebraShape::new(vec![]).is_err());
    }

    #[test]
    fn operator_norm_examples() {
        let shape = AlgebraShape::new(vec![3]).unwrap();
        assert_abs_diff_eq!(
            Element::<f64>::unit(&shape).operator_norm().unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            diag_element(&[2.0, 5.0]).operator_norm().unwrap(),
            5.0,
            epsilon = 1e-14
        );
        // Nilpotent [[0,3],[0,0]]: largest singular value 3.
        let x = m2_element([[c(0.0, 0.0), c(3.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
        assert_abs_diff_eq!(x.operator_norm().unwrap(), 3.0, epsilon = 1e-13);
    }

    #[test]
    fn positivity_examples() {
        let shape = AlgebraShape::new(vec![2]).unwrap();
        assert!(Element::<f64>::unit(&shape).is_positive(1e-9).unwrap());
        let d = m2_element([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]);
        assert!(!d.is_positive(1e-9).unwrap());
        // [[1, 0.5], [0.5, 1]] has eigenvalues 0.5 and 1.5.
        let p = m2_element([[c(1.0, 0.0), c(0.5, 0.0)], [c(0.5, 0.0), c(1.0, 0.0)]]);
        assert!(p.is_positive(1e-9).unwrap());
    }

    #[test]
    fn evaluate_uniform_state_is_arithmetic_mean() {
        let shape = diag_shape(3);
        let state = State::maximally_mixed(&shape);
        let x = diag_element(&[1.0, 2.0, 3.0]);
        assert_abs_diff_eq!(state.expect(&x).unwrap(), 2.0, epsilon = 1e-14);
        let one = Element::unit(&shape);
        assert_abs_diff_eq!(state.expect(&one).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn evaluate_mixed_state_on_m2() {
        let shape = AlgebraShape::new(vec![2]).unwrap();
        let state = State::maximally_mixed(&shape);
        let x = m2_element([[c(1.0, 0.0), c(0.5, 0.0)], [c(0.5, 0.0), c(1.0, 0.0)]]);
        // tr(x/2) = 1 by hand.
        assert_abs_diff_eq!(state.expect(&x).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn evaluate_conjugate_symmetry() {
        let shape = AlgebraShape::new(vec![2]).unwrap();
        let state = State::vector_state(&shape, 0, &[c(0.6, 0.2), c(0.0, 0.77)]).unwrap();
        let x = m2_element([[c(0.3, 0.0), c(1.0, -2.0)], [c(0.1, 0.4), c(0.0, 0.0)]]);
        let lhs = state.evaluate(&x.adjoint()).unwrap();
        let rhs = state.evaluate(&x).unwrap().conj();
        assert_abs_diff_eq!(lhs.re, rhs.re, epsilon = 1e-14);
        assert_abs_diff_eq!(lhs.im, rhs.im, epsilon = 1e-14);
    }

    #[test]
    fn evaluate_rejects_shape_mismatch() {
        let state = State::<f64>::maximally_mixed(&diag_shape(2));
        let x = diag_element(&[1.0, 2.0, 3.0]);
        assert!(matches!(state.evaluate(&x), Err(Error::ShapeMismatch)));
    }

    #[test]
    fn state_rejects_negative_density() {
        let shape = diag_shape(2);
        let blocks = vec![
            CMat::from_rows(vec![vec![c(1.5, 0.0)]]).unwrap(),
            CMat::from_rows(vec![vec![c(-0.5, 0.0)]]).unwrap(),
        ];
        assert!(State::new(shape, blocks).is_err());
    }

    #[test]
    fn jordan_diagonal_split() {
        let f = SelfAdjointFunctional::new(diag_element(&[1.0, -2.0])).unwrap();
        let jd = f.jordan_decompose().unwrap();
        assert_abs_diff_eq!(jd.positive.norm().unwrap(), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(jd.negative.norm().unwrap(), 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(f.norm().unwrap(), 3.0, epsilon = 1e-13);
        // z = diag(1, 0).
        assert_abs_diff_eq!(jd.support.block(0)[(0, 0)].re, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(jd.support.block(1)[(0, 0)].re, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn jordan_psd_witness_has_no_negative_part() {
        let f = SelfAdjointFunctional::new(diag_element(&[0.5, 2.0])).unwrap();
        let jd = f.jordan_decompose().unwrap();
        assert_abs_diff_eq!(jd.negative.norm().unwrap(), 0.0, epsilon = 1e-13);
        // Support projection of a strictly positive witness is the unit.
        let unit = Element::unit(f.shape());
        assert!(jd.support.max_abs_diff(&unit) < 1e-12);
    }

    #[test]
    fn jordan_off_diagonal_witness() {
        // h = [[0,1],[1,0]]: φ± are rank-one with norm 1 each.
        let f = SelfAdjointFunctional::new(m2_element([
            [c(0.0, 0.0), c(1.0, 0.0)],
            [c(1.0, 0.0), c(0.0, 0.0)],
        ]))
        .unwrap();
        let jd = f.jordan_decompose().unwrap();
        assert_abs_diff_eq!(jd.positive.norm().unwrap(), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(jd.negative.norm().unwrap(), 1.0, epsilon = 1e-13);
        // Positive witness is the projection onto (1,1)/√2.
        let expected = m2([[c(0.5, 0.0), c(0.5, 0.0)], [c(0.5, 0.0), c(0.5, 0.0)]]);
        assert!(jd.positive.witness().block(0).max_abs_diff(&expected) < 1e-12);
        // Orthogonality through the support projection.
        let one = Element::unit(f.shape());
        let z = &jd.support;
        let phi_plus_of_rest = jd.positive.evaluate(&one.sub(z)).unwrap().norm();
        let phi_minus_of_z = jd.negative.evaluate(z).unwrap().norm();
        assert!(phi_plus_of_rest < 1e-12);
        assert!(phi_minus_of_z < 1e-12);
    }

    #[test]
    fn jordan_rejects_non_self_adjoint() {
        let x = m2_element([[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(SelfAdjointFunctional::new(x).is_err());
    }

    #[test]
    fn traciality_checks() {
        let shape = AlgebraShape::new(vec![2]).unwrap();
        assert!(State::<f64>::maximally_mixed(&shape).is_tracial(1e-9));
        // Any state on a commutative shape is tracial.
        let comm = State::<f64>::point_mass(&diag_shape(3), 1).unwrap();
        assert!(comm.is_tracial(1e-9));
        // diag(0.7, 0.3) on M_2 is not central.
        let rho = State::new(
            shape,
            vec![m2([[c(0.7, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.3, 0.0)]])],
        )
        .unwrap();
        assert!(!rho.is_tracial(1e-9));
        // Oracle for the same fact: a pair x, y with φ(xy) ≠ φ(yx). A
        // deterministic sample stands in for the random pair.
        let x = m2_element([[c(0.1, 0.2), c(0.7, -0.3)], [c(0.4, 0.0), c(-0.5, 0.1)]]);
        let y = m2_element([[c(-0.2, 0.5), c(0.3, 0.3)], [c(0.9, -0.1), c(0.0, 0.6)]]);
        let xy = rho.evaluate(&x.mul(&y)).unwrap();
        let yx = rho.evaluate(&y.mul(&x)).unwrap();
        assert!((xy - yx).norm() > 1e-3);
        // And for a central density the pairing is symmetric on the same pair.
        let mixed = State::<f64>::maximally_mixed(&AlgebraShape::new(vec![2]).unwrap());
        let sxy = mixed.evaluate(&x.mul(&y)).unwrap();
        let syx = mixed.evaluate(&y.mul(&x)).unwrap();
        assert!((sxy - syx).norm() < 1e-14);
    }

    #[test]
    fn generic_scalar_instantiates_at_f32() {
        let shape = AlgebraShape::new(vec![2]).unwrap();
        let x: Element<f32> = Element::basis_element(&shape, 0, 0, 1);
        let norm = x.add(&x.adjoint()).operator_norm().unwrap();
        assert!((norm - 1.0).abs() < 1e-5);
        let phi: State<f32> = State::maximally_mixed(&shape);
        assert!((phi.expect(&Element::unit(&shape)).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn commutator_examples() {
        // Commutative shape: everything commutes.
        let x = diag_element(&[1.0, 7.0]);
        let y = diag_element(&[-2.0, 0.5]);
        assert_abs_diff_eq!(
            x.commutator(&y).operator_norm().unwrap(),
            0.0,
            epsilon = 1e-14
        );
        // x = E_12, y = x*: [x, y] = diag(1, -1) of norm 1.
        let e12 = m2_element([[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
        let comm = e12.commutator(&e12.adjoint());
        assert_abs_diff_eq!(comm.operator_norm().unwrap(), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(
            e12.commutator(&e12).operator_norm().unwrap(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn vector_state_pairing_matches_quadratic_form() {
        let shape = AlgebraShape::new(vec![2]).unwrap();
        let v = [c(1.0, 0.0), c(0.0, 1.0)];
        let state = State::vector_state(&shape, 0, &v).unwrap();
        let x = m2_element([[c(1.0, 0.0), c(0.0, -0.5)], [c(0.0, 0.5), c(2.0, 0.0)]]);
        // ⟨v, x v⟩ / 2 computed by hand: v†xv = 1 + 2 + (0.5 + 0.5) = 4; /2 = 2.
        assert_abs_diff_eq!(state.expect(&x).unwrap(), 2.0, epsilon = 1e-13);
    }
}
