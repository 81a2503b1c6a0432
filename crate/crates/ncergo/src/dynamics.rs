//! Group actions on block algebras.
//!
//! Every *-automorphism of a finite direct sum of matrix blocks is a block
//! permutation composed with an inner unitary conjugation; that canonical
//! form is the storage format here. Supported phase groups are `ℤ`, `ℤᵈ`,
//! and finite products of cyclic groups, each with its canonical Følner
//! schedule.

use num_rational::Ratio;

use crate::algebra::{AlgebraShape, Element};
use crate::error::Error;
use crate::linalg::CMat;
use crate::scalar::{real, to_f64, Real};
use crate::{tol, Result};

/// Block permutation composed with per-slot unitary conjugation:
/// `(Θx)_{σ(i)} = u_{σ(i)} · x_i · u_{σ(i)}†`.
#[derive(Debug, Clone)]
pub struct Automorphism<T> {
    shape: AlgebraShape,
    /// `permutation[i]` is the destination slot of block `i`.
    permutation: Vec<usize>,
    /// `unitaries[j]` conjugates whatever lands in slot `j`.
    unitaries: Vec<CMat<T>>,
}

impl<T: Real> Automorphism<T> {
    pub fn new(
        shape: AlgebraShape,
        permutation: Vec<usize>,
        unitaries: Vec<CMat<T>>,
    ) -> Result<Self> {
        let b = shape.block_count();
        if permutation.len() != b {
            return Err(Error::InvalidPermutation(format!(
                "permutation has {} entries for {} blocks",
                permutation.len(),
                b
            )));
        }
        let mut seen = vec![false; b];
        for (i, &j) in permutation.iter().enumerate() {
            if j >= b {
                return Err(Error::InvalidPermutation(format!(
                    "block {i} maps to out-of-range slot {j}"
                )));
            }
            if seen[j] {
                return Err(Error::InvalidPermutation(format!(
                    "slot {j} receives two blocks"
                )));
            }
            seen[j] = true;
            if shape.block_dim(i) != shape.block_dim(j) {
                return Err(Error::InvalidPermutation(format!(
                    "block {i} (dim {}) maps to slot {j} (dim {})",
                    shape.block_dim(i),
                    shape.block_dim(j)
                )));
            }
        }
        if unitaries.len() != b {
            return Err(Error::InvalidPermutation(format!(
                "{} unitaries for {} blocks",
                unitaries.len(),
                b
            )));
        }
        for (j, u) in unitaries.iter().enumerate() {
            let n = shape.block_dim(j);
            if u.rows() != n || u.cols() != n {
                return Err(Error::DimensionMismatch {
                    block: j,
                    expected_rows: n,
                    expected_cols: n,
                    rows: u.rows(),
                    cols: u.cols(),
                });
            }
            let dev = u.unitary_deviation();
            if dev > real(tol::PSD) {
                return Err(Error::NotUnitary {
                    generator: 0,
                    block: j,
                    deviation: to_f64(dev),
                });
            }
        }
        Ok(Automorphism {
            shape,
            permutation,
            unitaries,
        })
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        Automorphism {
            shape: shape.clone(),
            permutation: (0..shape.block_count()).collect(),
            unitaries: shape
                .block_dims()
                .iter()
                .map(|&n| CMat::identity(n))
                .collect(),
        }
    }

    /// Inner automorphism `Ad_u` on a single-block algebra.
    pub fn inner(shape: &AlgebraShape, unitaries: Vec<CMat<T>>) -> Result<Self> {
        Self::new(shape.clone(), (0..shape.block_count()).collect(), unitaries)
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn unitaries(&self) -> &[CMat<T>] {
        &self.unitaries
    }

    pub fn apply(&self, x: &Element<T>) -> Result<Element<T>> {
        if *x.shape() != self.shape {
            return Err(Error::ShapeMismatch);
        }
        let mut out = Element::zero(&self.shape);
        for (i, block) in x.blocks().iter().enumerate() {
            let j = self.permutation[i];
            let u = &self.unitaries[j];
            *out.block_mut(j) = u.matmul(block).matmul(&u.adjoint());
        }
        Ok(out)
    }

    /// `self ∘ other` (apply `other` first).
    #[allow(clippy::needless_range_loop)]
    pub fn compose(&self, other: &Self) -> Self {
        let b = self.shape.block_count();
        let mut permutation = vec![0usize; b];
        let mut unitaries: Vec<CMat<T>> = self
            .shape
            .block_dims()
            .iter()
            .map(|&n| CMat::identity(n))
            .collect();
        for i in 0..b {
            let mid = other.permutation[i];
            let dst = self.permutation[mid];
            permutation[i] = dst;
            unitaries[dst] = self.unitaries[dst].matmul(&other.unitaries[mid]);
        }
        Automorphism {
            shape: self.shape.clone(),
            permutation,
            unitaries,
        }
    }

    #[allow(clippy::needless_range_loop)]
    pub fn inverse(&self) -> Self {
        let b = self.shape.block_count();
        let mut permutation = vec![0usize; b];
        let mut unitaries: Vec<CMat<T>> = self
            .shape
            .block_dims()
            .iter()
            .map(|&n| CMat::identity(n))
            .collect();
        for i in 0..b {
            let j = self.permutation[i];
            permutation[j] = i;
            unitaries[i] = self.unitaries[j].adjoint();
        }
        Automorphism {
            shape: self.shape.clone(),
            permutation,
            unitaries,
        }
    }

    /// Integer power by binary exponentiation.
    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::identity(&self.shape);
        }
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = Self::identity(&self.shape);
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = sq.compose(&acc);
            }
            sq = sq.compose(&sq);
            exp >>= 1;
        }
        acc
    }

    /// Max-entry deviation from the identity automorphism, measured on the
    /// canonical matrix units.
    pub fn identity_deviation(&self) -> Result<T> {
        let mut dev = T::zero();
        for (b, r, c) in self.shape.basis_coords() {
            let e = Element::basis_element(&self.shape, b, r, c);
            dev = dev.max(self.apply(&e)?.max_abs_diff(&e));
        }
        Ok(dev)
    }

    /// Matrix of the automorphism on the canonically vectorized element
    /// space. The matrix is unitary for the Hilbert–Schmidt inner product.
    pub fn superoperator(&self) -> Result<CMat<T>> {
        let d = self.shape.total_dim();
        let mut m = CMat::zeros(d, d);
        for (col, (b, r, c)) in self.shape.basis_coords().enumerate() {
            let e = Element::basis_element(&self.shape, b, r, c);
            let img = self.apply(&e)?.to_vec();
            for (row, z) in img.into_iter().enumerate() {
                m[(row, col)] = z;
            }
        }
        Ok(m)
    }
}

/// The supported phase groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupPresentation {
    /// The integers, one generator.
    Z,
    /// `ℤᵈ`, `d` pairwise-commuting generators.
    Zd(usize),
    /// `ℤ/m_1 × ⋯ × ℤ/m_r`, one generator of order `m_j` per factor.
    CyclicProduct(Vec<u64>),
}

impl GroupPresentation {
    pub fn generator_count(&self) -> usize {
        match self {
            GroupPresentation::Z => 1,
            GroupPresentation::Zd(d) => *d,
            GroupPresentation::CyclicProduct(orders) => orders.len(),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GroupPresentation::CyclicProduct(_))
    }

    pub fn group_order(&self) -> Option<u128> {
        match self {
            GroupPresentation::CyclicProduct(orders) => {
                let mut acc: u128 = 1;
                for &m in orders {
                    acc = acc.checked_mul(m as u128)?;
                }
                Some(acc)
            }
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupPresentation::Zd(0) => Err(Error::InvalidWord("Zd needs d >= 1".into())),
            GroupPresentation::CyclicProduct(orders)
                if orders.is_empty() || orders.contains(&0) =>
            {
                Err(Error::InvalidWord("cyclic orders must be positive".into()))
            }
            _ => Ok(()),
        }
    }
}

/// A group element as exponents of the generators, one entry per generator.
pub type GroupWord = Vec<i64>;

/// Structured outcome of [`GroupAction::validate`].
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub max_violation: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A group acting on the algebra through generator automorphisms.
#[derive(Debug, Clone)]
pub struct GroupAction<T> {
    presentation: GroupPresentation,
    generators: Vec<Automorphism<T>>,
    shape: AlgebraShape,
}

impl<T: Real> GroupAction<T> {
    pub fn new(presentation: GroupPresentation, generators: Vec<Automorphism<T>>) -> Result<Self> {
        presentation.validate()?;
        if generators.len() != presentation.generator_count() {
            return Err(Error::InvalidAction(format!(
                "presentation expects {} generators, got {}",
                presentation.generator_count(),
                generators.len()
            )));
        }
        let shape = generators
            .first()
            .map(|g| g.shape().clone())
            .ok_or(Error::EmptyShape)?;
        if generators.iter().any(|g| *g.shape() != shape) {
            return Err(Error::ShapeMismatch);
        }
        Ok(GroupAction {
            presentation,
            generators,
            shape,
        })
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn generators(&self) -> &[Automorphism<T>] {
        &self.generators
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn schedule(&self) -> FolnerSchedule {
        FolnerSchedule::new(self.presentation.clone())
    }

    fn check_word(&self, word: &GroupWord) -> Result<()> {
        if word.len() != self.presentation.generator_count() {
            return Err(Error::InvalidWord(format!(
                "word has {} exponents for {} generators",
                word.len(),
                self.presentation.generator_count()
            )));
        }
        Ok(())
    }

    /// The automorphism of a group word (generators commute in every
    /// supported presentation, so exponents are applied in index order).
    pub fn word_automorphism(&self, word: &GroupWord) -> Result<Automorphism<T>> {
        self.check_word(word)?;
        let mut acc = Automorphism::identity(&self.shape);
        for (gen, &e) in self.generators.iter().zip(word) {
            if e != 0 {
                acc = gen.pow(e).compose(&acc);
            }
        }
        Ok(acc)
    }

    pub fn apply_word(&self, word: &GroupWord, x: &Element<T>) -> Result<Element<T>> {
        self.word_automorphism(word)?.apply(x)
    }

    pub fn apply_generator(&self, g: usize, x: &Element<T>) -> Result<Element<T>> {
        self.generators[g].apply(x)
    }

    /// Checks unitarity, permutation compatibility (both enforced at
    /// construction already), and the presentation's relations on the whole
    /// canonical basis: commutation of every generator pair, and
    /// `Θ^{m_j} = id` for cyclic factors.
    pub fn validate(&self) -> Result<ValidationReport> {
        let mut violations = Vec::new();
        let mut max_violation = 0f64;
        let tolerance = real::<T>(tol::RELATION);

        let supers: Vec<CMat<T>> = self
            .generators
            .iter()
            .map(|g| g.superoperator())
            .collect::<Result<_>>()?;

        for i in 0..supers.len() {
            for j in i + 1..supers.len() {
                let dev = supers[i]
                    .matmul(&supers[j])
                    .max_abs_diff(&supers[j].matmul(&supers[i]));
                if dev > tolerance {
                    max_violation = max_violation.max(to_f64(dev));
                    violations.push(format!(
                        "generators {i} and {j} do not commute (deviation {:.3e})",
                        to_f64(dev)
                    ));
                }
            }
        }

        if let GroupPresentation::CyclicProduct(orders) = &self.presentation {
            for (j, (&m, sup)) in orders.iter().zip(&supers).enumerate() {
                let mut p = CMat::<T>::identity(sup.rows());
                for _ in 0..m {
                    p = sup.matmul(&p);
                }
                let dev = p.max_abs_diff(&CMat::identity(sup.rows()));
                if dev > tolerance {
                    max_violation = max_violation.max(to_f64(dev));
                    violations.push(format!(
                        "generator {j} does not have order {m} (deviation {:.3e})",
                        to_f64(dev)
                    ));
                }
            }
        }

        Ok(ValidationReport {
            violations,
            max_violation,
        })
    }

    pub fn require_valid(&self) -> Result<()> {
        let report = self.validate()?;
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidAction(report.violations.join("\n")))
        }
    }

    /// Smallest `L ≤ cap` with `Θ_g^L = id` for every generator `g`, if one
    /// exists. For cyclic products the declared orders are used directly.
    pub fn finite_order(&self, cap: u64) -> Result<Option<u64>> {
        if let GroupPresentation::CyclicProduct(orders) = &self.presentation {
            let mut l: u64 = 1;
            for &m in orders {
                l = lcm(l, m);
            }
            return Ok(Some(l));
        }
        let mut l: u64 = 1;
        for gen in &self.generators {
            let mut order = None;
            let mut acc = gen.clone();
            for k in 1..=cap {
                if acc.identity_deviation()? <= real(tol::RELATION) {
                    order = Some(k);
                    break;
                }
                acc = gen.compose(&acc);
            }
            match order {
                Some(k) => l = lcm(l, k),
                None => return Ok(None),
            }
        }
        Ok(Some(l))
    }

    /// Orbits of the block indices under the group generated by the
    /// generators' permutations, each orbit sorted, orbits ordered by their
    /// least element.
    pub fn permutation_orbits(&self) -> Vec<Vec<usize>> {
        let b = self.shape.block_count();
        let mut seen = vec![false; b];
        let mut orbits = Vec::new();
        for start in 0..b {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut frontier = vec![start];
            while let Some(i) = frontier.pop() {
                for gen in &self.generators {
                    // Permutations generate a group, so forward images
                    // suffice for connectivity.
                    let j = gen.permutation()[i];
                    if !seen[j] {
                        seen[j] = true;
                        orbit.push(j);
                        frontier.push(j);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    /// Checks that a set of blocks is carried onto itself by every
    /// generator's permutation; returns the first violating generator.
    pub fn invariant_block_set_violation(&self, blocks: &[usize]) -> Option<usize> {
        let set: std::collections::BTreeSet<usize> = blocks.iter().copied().collect();
        for (g, gen) in self.generators.iter().enumerate() {
            let image: std::collections::BTreeSet<usize> =
                set.iter().map(|&i| gen.permutation()[i]).collect();
            if image != set {
                return Some(g);
            }
        }
        None
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Default cap on `|F_k|` for explicit enumeration.
pub const FOLNER_ENUMERATION_CAP: u128 = 10_000_000;

/// Canonical Følner windows per group kind: initial segments `{0,…,k−1}`
/// for `ℤ`, boxes `{0,…,k−1}ᵈ` for `ℤᵈ`, and the whole group for finite
/// products of cyclic groups.
#[derive(Debug, Clone)]
pub struct FolnerSchedule {
    presentation: GroupPresentation,
}

impl FolnerSchedule {
    pub fn new(presentation: GroupPresentation) -> Self {
        FolnerSchedule { presentation }
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    /// `|F_k|`, exactly.
    pub fn set_size(&self, k: u64) -> Result<u128> {
        match &self.presentation {
            GroupPresentation::Z => Ok(k as u128),
            GroupPresentation::Zd(d) => (0..*d)
                .try_fold(1u128, |acc, _| acc.checked_mul(k as u128))
                .ok_or_else(|| Error::Numerical("|F_k| overflows".into())),
            GroupPresentation::CyclicProduct(_) => self
                .presentation
                .group_order()
                .ok_or_else(|| Error::Numerical("group order overflows".into())),
        }
    }

    /// Exact `|F_k g Δ F_k| / |F_k|`.
    pub fn defect(&self, k: u64, word: &GroupWord) -> Result<Ratio<u128>> {
        if k == 0 {
            return Err(Error::InvalidWord("k must be >= 1".into()));
        }
        if word.len() != self.presentation.generator_count() {
            return Err(Error::InvalidWord(format!(
                "word has {} exponents for {} generators",
                word.len(),
                self.presentation.generator_count()
            )));
        }
        match &self.presentation {
            GroupPresentation::CyclicProduct(_) => Ok(Ratio::new(0, 1)),
            _ => {
                // |F Δ (F + v)| = 2·(kᵈ − Π_i max(0, k − |v_i|)).
                let size = self.set_size(k)?;
                let mut overlap: u128 = 1;
                for &e in word {
                    let shift = e.unsigned_abs().min(k);
                    overlap = overlap
                        .checked_mul((k - shift) as u128)
                        .ok_or_else(|| Error::Numerical("defect overflows".into()))?;
                }
                Ok(Ratio::new(2 * (size - overlap), size))
            }
        }
    }

    /// Sum of the per-generator defects at window `k`, as a float.
    pub fn generator_defect_sum<T: Real>(&self, k: u64) -> Result<T> {
        let mut acc = T::zero();
        for g in 0..self.presentation.generator_count() {
            let mut word = vec![0i64; self.presentation.generator_count()];
            word[g] = 1;
            let d = self.defect(k, &word)?;
            acc += real::<T>(*d.numer() as f64) / real::<T>(*d.denom() as f64);
        }
        Ok(acc)
    }

    /// Enumerates `F_k` in lexicographic order of generator exponents.
    pub fn enumerate(&self, k: u64) -> Result<Vec<GroupWord>> {
        self.enumerate_with_cap(k, FOLNER_ENUMERATION_CAP)
    }

    pub fn enumerate_with_cap(&self, k: u64, cap: u128) -> Result<Vec<GroupWord>> {
        if k == 0 {
            return Err(Error::InvalidWord("k must be >= 1".into()));
        }
        let size = self.set_size(k)?;
        if size > cap {
            return Err(Error::FolnerCapExceeded { size, cap });
        }
        let ranges: Vec<u64> = match &self.presentation {
            GroupPresentation::Z => vec![k],
            GroupPresentation::Zd(d) => vec![k; *d],
            GroupPresentation::CyclicProduct(orders) => orders.clone(),
        };
        let mut words = Vec::with_capacity(size as usize);
        let mut current = vec![0i64; ranges.len()];
        loop {
            words.push(current.clone());
            // Odometer increment, last coordinate fastest.
            let mut pos = ranges.len();
            loop {
                if pos == 0 {
                    return Ok(words);
                }
                pos -= 1;
                current[pos] += 1;
                if (current[pos] as u64) < ranges[pos] {
                    break;
                }
                current[pos] = 0;
            }
        }
    }
}
