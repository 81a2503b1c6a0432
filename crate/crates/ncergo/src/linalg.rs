//! Dense complex matrices and the Hermitian eigensolver.
//!
//! The eigensolver is the single numerical kernel of the crate: operator
//! norms, positivity checks, spectral splits, and fixed-space computations
//! all reduce to it. It is a cyclic complex Jacobi iteration, chosen because
//! it is deterministic for fixed input bits: pivots are visited in a fixed
//! order, eigenvalues are returned in descending order, ties are broken by
//! lexicographic comparison of the (phase-canonicalized) eigenvectors.

use num_complex::Complex;

use crate::error::Error;
use crate::scalar::{real, Real};
use crate::Result;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Numerical("ragged matrix rows".into()));
        }
        Ok(CMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, z: Complex<T>) -> Self {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * z).collect(),
        }
    }

    pub fn scale_re(&self, t: T) -> Self {
        self.scale(Complex::new(t, T::zero()))
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        debug_assert_eq!(self.cols, v.len());
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows.min(self.cols) {
            acc += self[(i, i)];
        }
        acc
    }

    pub fn frob_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        debug_assert!(self.is_square());
        let half = Complex::new(real::<T>(0.5), T::zero());
        self.add(&self.adjoint()).scale(half)
    }

    /// Max-entry deviation from being Hermitian.
    pub fn hermitian_deviation(&self) -> T {
        debug_assert!(self.is_square());
        self.max_abs_diff(&self.adjoint())
    }

    /// Max-entry deviation of `A A†` from the identity.
    pub fn unitary_deviation(&self) -> T {
        debug_assert!(self.is_square());
        self.matmul(&self.adjoint())
            .max_abs_diff(&Self::identity(self.rows))
    }
}

impl<T> std::ops::Index<(usize, usize)> for CMat<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for CMat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigendecomposition of a Hermitian matrix: `A = V Λ V†` with real
/// eigenvalues in descending order and orthonormal columns in `V`.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: CMat<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn eigenvector(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.vectors.rows())
            .map(|i| self.vectors[(i, j)])
            .collect()
    }

    /// Sum of `λ_j v_j v_j†` over the selected eigenpairs.
    pub fn partial_reconstruct(&self, select: impl Fn(T) -> Option<T>) -> CMat<T> {
        let n = self.vectors.rows();
        let mut out = CMat::zeros(n, n);
        for (j, &lam) in self.values.iter().enumerate() {
            if let Some(w) = select(lam) {
                let v = self.eigenvector(j);
                for r in 0..n {
                    for c in 0..n {
                        out[(r, c)] += v[r] * v[c].conj() * Complex::new(w, T::zero());
                    }
                }
            }
        }
        out
    }
}

const MAX_JACOBI_SWEEPS: usize = 64;

/// Deterministic Hermitian eigendecomposition by cyclic complex Jacobi.
///
/// The Hermitian part of the input is taken first, so nearly-Hermitian
/// matrices (up to the caller's own tolerance checks) are handled without
/// surprises. Fails with [`Error::NonConvergence`] only if the off-diagonal
/// mass does not shrink below `n·ε·‖A‖_F` within 64 sweeps.
pub fn hermitian_eigen<T: Real>(a: &CMat<T>) -> Result<HermitianEigen<T>> {
    if !a.is_square() {
        return Err(Error::Numerical(
            "eigendecomposition of a non-square matrix".into(),
        ));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: vec![],
            vectors: CMat::zeros(0, 0),
        });
    }

    let mut m = a.hermitian_part();
    let mut v = CMat::<T>::identity(n);

    let frob = m.frob_norm();
    if !frob.is_finite() {
        return Err(Error::Numerical("non-finite matrix entries".into()));
    }
    let target = T::epsilon() * frob * real::<T>(n as f64);
    // Pivots below this carry off-diagonal mass within the backward error of
    // the iteration itself; they are annihilated directly, which also keeps
    // the rotation formulas away from underflow.
    let skip = T::epsilon() * frob / real::<T>(((n * n) as f64).max(1.0));

    if n > 1 {
        let mut converged = false;
        for _ in 0..MAX_JACOBI_SWEEPS {
            let off = off_diagonal_norm(&m);
            if !off.is_finite() {
                return Err(Error::Numerical("eigeniteration diverged".into()));
            }
            if off <= target {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate_pivot(&mut m, &mut v, p, q, skip);
                }
            }
        }
        if !converged {
            let off = off_diagonal_norm(&m);
            if off.is_nan() || off > target {
                return Err(Error::NonConvergence);
            }
        }
    }

    // Collect eigenpairs, canonicalize phases, order deterministically.
    let mut pairs: Vec<(T, Vec<Complex<T>>)> = (0..n)
        .map(|j| {
            let mut col: Vec<Complex<T>> = (0..n).map(|i| v[(i, j)]).collect();
            canonicalize_phase(&mut col);
            (m[(j, j)].re, col)
        })
        .collect();
    pairs.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| lex_cmp(&a.1, &b.1))
    });

    let values = pairs.iter().map(|(lam, _)| *lam).collect();
    let vectors = CMat::from_fn(n, n, |i, j| pairs[j].1[i]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm<T: Real>(m: &CMat<T>) -> T {
    let n = m.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation annihilating the (p, q) entry.
///
/// The pivot unitary is `D·G` with `D = diag(1, e^{-iφ})` absorbing the
/// phase of `a_pq` and `G` the classic symmetric-Jacobi rotation.
fn rotate_pivot<T: Real>(m: &mut CMat<T>, v: &mut CMat<T>, p: usize, q: usize, skip: T) {
    let beta = m[(p, q)];
    let babs = beta.norm();
    if babs <= skip {
        m[(p, q)] = Complex::new(T::zero(), T::zero());
        m[(q, p)] = Complex::new(T::zero(), T::zero());
        return;
    }
    // Component-wise division: beta/|beta| through complex division would
    // square |beta| and can underflow for small pivots.
    let phase = Complex::new(beta.re / babs, beta.im / babs); // e^{iφ}
    let alpha = m[(p, p)].re;
    let gamma = m[(q, q)].re;

    let two = real::<T>(2.0);
    let tau = (gamma - alpha) / (two * babs);
    // For |tau| beyond 1/ε the rotation angle is below resolution; the
    // closed form keeps t finite either way.
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    let cc = Complex::new(c, T::zero());
    let sc = Complex::new(s, T::zero());
    let ephi_conj = phase.conj(); // e^{-iφ}

    // Column update: A ← A·U with u_pp = c, u_pq = s, u_qp = -s·e^{-iφ},
    // u_qq = c·e^{-iφ}.
    let n = m.rows();
    for i in 0..n {
        let aip = m[(i, p)];
        let aiq = m[(i, q)];
        m[(i, p)] = aip * cc - aiq * sc * ephi_conj;
        m[(i, q)] = aip * sc + aiq * cc * ephi_conj;
    }
    // Row update: A ← U†·A.
    for j in 0..n {
        let apj = m[(p, j)];
        let aqj = m[(q, j)];
        m[(p, j)] = apj * cc - aqj * sc * phase;
        m[(q, j)] = apj * sc + aqj * cc * phase;
    }
    // The pivot is annihilated by construction; pin it and keep the
    // diagonal exactly real.
    m[(p, q)] = Complex::new(T::zero(), T::zero());
    m[(q, p)] = Complex::new(T::zero(), T::zero());
    m[(p, p)] = Complex::new(m[(p, p)].re, T::zero());
    m[(q, q)] = Complex::new(m[(q, q)].re, T::zero());

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * cc - viq * sc * ephi_conj;
        v[(i, q)] = vip * sc + viq * cc * ephi_conj;
    }
}

/// Rotate a vector's global phase so its largest-modulus entry (first such
/// entry on ties) becomes real and nonnegative.
fn canonicalize_phase<T: Real>(v: &mut [Complex<T>]) {
    let mut best = 0usize;
    let mut best_norm = T::zero();
    for (i, z) in v.iter().enumerate() {
        let nz = z.norm();
        if nz > best_norm {
            best_norm = nz;
            best = i;
        }
    }
    if best_norm <= T::min_positive_value() {
        return;
    }
    let phase = v[best] / Complex::new(best_norm, T::zero());
    let rot = phase.conj();
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[best] = Complex::new(v[best].re, T::zero());
}

fn lex_cmp<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.re.partial_cmp(&y.re).unwrap_or(std::cmp::Ordering::Equal) {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
        match x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal) {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}

/// Largest eigenvalue of the Hermitian part.
pub fn max_eigenvalue<T: Real>(a: &CMat<T>) -> Result<T> {
    Ok(*hermitian_eigen(a)?
        .values
        .first()
        .ok_or_else(|| Error::Numerical("empty matrix".into()))?)
}

/// Smallest eigenvalue of the Hermitian part.
pub fn min_eigenvalue<T: Real>(a: &CMat<T>) -> Result<T> {
    Ok(*hermitian_eigen(a)?
        .values
        .last()
        .ok_or_else(|| Error::Numerical("empty matrix".into()))?)
}

/// Largest singular value, computed as `sqrt(λ_max(A†A))`.
pub fn spectral_norm<T: Real>(a: &CMat<T>) -> Result<T> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(T::zero());
    }
    let gram = a.adjoint().matmul(a);
    Ok(max_eigenvalue(&gram)?.max(T::zero()).sqrt())
}

/// Modified Gram–Schmidt over the complex inner product `⟨a, b⟩ = a†b`.
/// Vectors whose residual norm falls below `tol` are dropped.
pub fn orthonormalize<T: Real>(vectors: &[Vec<Complex<T>>], tol: T) -> Vec<Vec<Complex<T>>> {
    let mut basis: Vec<Vec<Complex<T>>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for b in &basis {
            let coeff = inner(b, &w);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= coeff * *bi;
            }
        }
        // Second pass for numerical orthogonality.
        for b in &basis {
            let coeff = inner(b, &w);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= coeff * *bi;
            }
        }
        let norm = vec_norm(&w);
        if norm > tol {
            let inv = Complex::new(T::one() / norm, T::zero());
            for wi in w.iter_mut() {
                *wi *= inv;
            }
            basis.push(w);
        }
    }
    basis
}

pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Complex::new(T::zero(), T::zero());
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * *y;
    }
    acc
}

pub fn vec_norm<T: Real>(a: &[Complex<T>]) -> T {
    a.iter()
        .map(|z| z.norm_sqr())
        .fold(T::zero(), |x, y| x + y)
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn reconstruct(e: &HermitianEigen<f64>) -> CMat<f64> {
        e.partial_reconstruct(Some)
    }

    #[test]
    fn eigen_of_diagonal_is_exact() {
        let m = CMat::from_rows(vec![
            vec![c(3.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eigen(&m).unwrap();
        assert_eq!(e.values, vec![3.0, -1.0]);
    }

    #[test]
    fn eigen_pauli_x() {
        // [[0,1],[1,0]] has eigenvalues ±1 with eigenvectors (1,±1)/√2.
        let m = CMat::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eigen(&m).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], -1.0, epsilon = 1e-14);
        let v0 = e.eigenvector(0);
        assert_abs_diff_eq!(v0[0].re, 1.0 / 2f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(v0[1].re, 1.0 / 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn eigen_complex_hermitian_3x3_matches_independent_solver() {
        // Golden eigenvalues computed with numpy.linalg.eigvalsh for
        // A = [[2, 1-2i, 0.5i], [1+2i, -1, 3], [-0.5i, 3, 0.7]].
        let m = CMat::from_rows(vec![
            vec![c(2.0, 0.0), c(1.0, -2.0), c(0.0, 0.5)],
            vec![c(1.0, 2.0), c(-1.0, 0.0), c(3.0, 0.0)],
            vec![c(0.0, -0.5), c(3.0, 0.0), c(0.7, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eigen(&m).unwrap();
        let expected = [
            3.807_771_960_795_531,
            1.884_610_350_655_026,
            -3.992_382_311_450_557,
        ];
        for (got, want) in e.values.iter().zip(expected) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        // Reconstruction and orthonormality.
        let r = reconstruct(&e);
        assert!(r.max_abs_diff(&m) < 1e-12);
        assert!(e.vectors.unitary_deviation() < 1e-12);
    }

    #[test]
    fn eigen_is_bitwise_deterministic() {
        let m = CMat::from_rows(vec![
            vec![c(1.0, 0.0), c(0.25, -0.5), c(0.0, 0.125)],
            vec![c(0.25, 0.5), c(-2.0, 0.0), c(1.5, 0.0)],
            vec![c(0.0, -0.125), c(1.5, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let e1 = hermitian_eigen(&m).unwrap();
        let e2 = hermitian_eigen(&m).unwrap();
        assert_eq!(e1.values, e2.values);
        assert_eq!(e1.vectors.data(), e2.vectors.data());
    }

    #[test]
    fn spectral_norm_of_nilpotent_block() {
        // [[0,3],[0,0]] has singular values {3, 0}.
        let m = CMat::from_rows(vec![
            vec![c(0.0, 0.0), c(3.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert_abs_diff_eq!(spectral_norm(&m).unwrap(), 3.0, epsilon = 1e-13);
    }

    #[test]
    fn orthonormalize_drops_dependent_vectors() {
        let v1 = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let v2 = vec![c(2.0, 0.0), c(0.0, 0.0)];
        let v3 = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let basis = orthonormalize(&[v1, v2, v3], 1e-10);
        assert_eq!(basis.len(), 2);
        assert_abs_diff_eq!(vec_norm(&basis[1]), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(inner(&basis[0], &basis[1]).norm(), 0.0, epsilon = 1e-13);
    }
}
