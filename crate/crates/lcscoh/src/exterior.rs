//! Exact exterior algebra of an m-dimensional vector space.
//!
//! Forms are rational linear combinations of monomials `e^{i1...ih}`
//! (strictly increasing indices, 1-based), stored sparsely. Operators are
//! materialized as dense per-degree matrices over the lexicographically
//! ordered monomial basis, which is how every identity in this crate is
//! verified: as an exact matrix equality.
//!
//! The degree-2 story is the interesting one. A nondegenerate 2-form ω
//! yields
//!
//! * the Lefschetz triple `L = ω∧·`, `Λ = −ι_{ω^{-1}}`, `H = [L,Λ]`,
//!   normalized so that `H` acts on degree h as `(n−h)·id` (m = 2n);
//! * the symplectic star `⋆` with `b ∧ ⋆a = G(b,a)·ωⁿ/n!`, satisfying
//!   `⋆⋆ = id`;
//! * together with a metric, the Hodge star `∗` with `∗∗ = (−1)^h` on
//!   degree h, and the compatibility `⋆ = J∗` for a compatible almost
//!   complex structure J.
//!
//! Contraction convention: `ι_{X∧Y} = ι_Y ∘ ι_X`, so `ι_{X∧Y}α = α(X,Y,…)`.
//! The sign of `ω^{-1}` is then forced by the normalization `H·1 = n·1`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::QMat;
use crate::scalar::Q;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("2-form is degenerate (its skew coefficient matrix is singular)")]
    DegenerateForm,
    #[error("metric is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("metric volume √det(g) = √({det}) is irrational; use a metric with square determinant")]
    IrrationalVolume { det: Q },
    #[error("matrix does not square to -identity")]
    NotAlmostComplex,
    #[error("dimension must be even for this operator (got {dim})")]
    OddDimension { dim: usize },
}

/// A basis monomial `e^{i1...ih}`, stored as a bitmask (bit i−1 ⟺ index i).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    pub fn from_sorted(indices: &[usize]) -> Self {
        let mut mask = 0u32;
        for &i in indices {
            debug_assert!(i >= 1 && i <= 32);
            debug_assert_eq!(mask >> (i - 1), 0, "indices must be strictly increasing");
            mask |= 1 << (i - 1);
        }
        MultiIndex(mask)
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 & (1 << (index - 1)) != 0
    }

    /// 1-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (1..=32).filter(|&i| self.contains(i)).collect()
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the increasing index tuple (the usual display order:
/// e^{13} < e^{14} < e^{23}), with shorter tuples first across degrees.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.indices().cmp(&other.indices())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^{{{}}}", self.indices().iter().join(""))
    }
}

/// Sorts an index list into a [`MultiIndex`] with the permutation sign;
/// sign 0 when an index repeats.
///
/// ```
/// use lcscoh::exterior::{canonical_sign, MultiIndex};
/// assert_eq!(canonical_sign(&[1, 2], 4).unwrap(), (MultiIndex::from_sorted(&[1, 2]), 1));
/// assert_eq!(canonical_sign(&[2, 1], 4).unwrap(), (MultiIndex::from_sorted(&[1, 2]), -1));
/// assert_eq!(canonical_sign(&[1, 1], 4).unwrap().1, 0);
/// ```
pub fn canonical_sign(indices: &[usize], dim: usize) -> Result<(MultiIndex, i32), ExteriorError> {
    for &i in indices {
        if i < 1 || i > dim {
            return Err(ExteriorError::IndexOutOfRange { index: i, dim });
        }
    }
    let mut sign = 1i32;
    let mut sorted = indices.to_vec();
    // insertion sort, counting transpositions
    for i in 1..sorted.len() {
        let mut j = i;
        while j > 0 && sorted[j - 1] > sorted[j] {
            sorted.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok((MultiIndex::EMPTY, 0));
    }
    Ok((MultiIndex::from_sorted(&sorted), sign))
}

/// A homogeneous form: ambient dimension, degree, sparse coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Form {
    pub dim: usize,
    pub degree: usize,
    coeffs: BTreeMap<MultiIndex, Q>,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

impl Form {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Form {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, value: Q) -> Self {
        let mut f = Form::zero(dim, 0);
        f.add_term(MultiIndex::EMPTY, value);
        f
    }

    pub fn one(dim: usize) -> Self {
        Form::constant(dim, Q::one())
    }

    /// The generator `e^i`.
    pub fn generator(dim: usize, i: usize) -> Self {
        let mut f = Form::zero(dim, 1);
        f.add_term(MultiIndex::from_sorted(&[i]), Q::one());
        f
    }

    /// The monomial `e^{i1...ih}` for strictly increasing indices.
    pub fn monomial(dim: usize, indices: &[usize]) -> Self {
        let mut f = Form::zero(dim, indices.len());
        f.add_term(MultiIndex::from_sorted(indices), Q::one());
        f
    }

    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Q)>,
    ) -> Self {
        let mut f = Form::zero(dim, degree);
        for (idx, c) in terms {
            assert_eq!(idx.degree(), degree, "term degree mismatch");
            f.add_term(idx, c);
        }
        f
    }

    pub fn add_term(&mut self, idx: MultiIndex, c: Q) {
        debug_assert_eq!(idx.degree(), self.degree);
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(idx).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, idx: MultiIndex) -> Q {
        self.coeffs.get(&idx).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Q)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &Form) -> Form {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree));
        let mut out = self.clone();
        for (&idx, c) in &other.coeffs {
            out.add_term(idx, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> Form {
        if s.is_zero() {
            return Form::zero(self.dim, self.degree);
        }
        Form {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, c * s)).collect(),
        }
    }

    /// Human-readable rendering, e.g. `e^{12} + 2·e^{34}`.
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".to_owned();
        }
        let mut out = String::new();
        for (idx, c) in &self.coeffs {
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let name = if idx.degree() == 0 {
                "1".to_owned()
            } else {
                format!("e^{{{}}}", idx.indices().iter().join(""))
            };
            if abs.is_one() && idx.degree() > 0 {
                out.push_str(&name);
            } else if idx.degree() == 0 {
                out.push_str(&abs.to_string());
            } else {
                out.push_str(&format!("{abs}*{name}"));
            }
        }
        out
    }
}

/// The exterior algebra of dimension m: per-degree monomial bases in
/// lexicographic order plus fast monomial lookup. All matrix
/// representations of operators in this crate refer to these bases.
#[derive(Clone, Debug)]
pub struct ExteriorAlgebra {
    pub dim: usize,
    bases: Vec<Vec<MultiIndex>>,
    positions: Vec<std::collections::HashMap<u32, usize>>,
}

impl ExteriorAlgebra {
    pub fn new(dim: usize) -> Self {
        assert!(dim <= 16, "ambient dimension capped at 16");
        let mut bases = Vec::with_capacity(dim + 1);
        let mut positions = Vec::with_capacity(dim + 1);
        for h in 0..=dim {
            let basis: Vec<MultiIndex> = (1..=dim)
                .combinations(h)
                .map(|ix| MultiIndex::from_sorted(&ix))
                .collect();
            let pos = basis
                .iter()
                .enumerate()
                .map(|(i, m)| (m.0, i))
                .collect();
            bases.push(basis);
            positions.push(pos);
        }
        ExteriorAlgebra {
            dim,
            bases,
            positions,
        }
    }

    /// Dimension of ∧^h; zero outside 0..=m.
    pub fn rank(&self, h: isize) -> usize {
        if h < 0 || h as usize > self.dim {
            0
        } else {
            self.bases[h as usize].len()
        }
    }

    pub fn basis(&self, h: usize) -> &[MultiIndex] {
        &self.bases[h]
    }

    pub fn position(&self, idx: MultiIndex) -> usize {
        self.positions[idx.degree()][&idx.0]
    }

    /// Dense coefficient vector of a form over the degree basis.
    pub fn to_vec(&self, f: &Form) -> Vec<Q> {
        assert_eq!(f.dim, self.dim);
        let mut v = vec![Q::zero(); self.rank(f.degree as isize)];
        for (&idx, c) in &f.coeffs {
            v[self.position(idx)] = c.clone();
        }
        v
    }

    pub fn from_vec(&self, degree: usize, v: &[Q]) -> Form {
        assert_eq!(v.len(), self.rank(degree as isize));
        Form::from_terms(
            self.dim,
            degree,
            self.bases[degree]
                .iter()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&i, c)| (i, c.clone())),
        )
    }

    /// Matrix of a linear map ∧^h → ∧^{h+shift} given its values on basis
    /// monomials; columns are images in the target basis.
    pub fn operator_matrix(
        &self,
        h: usize,
        shift: isize,
        f: impl Fn(&Form) -> Form,
    ) -> QMat {
        let target = h as isize + shift;
        let rows = self.rank(target);
        let cols = self.rank(h as isize);
        let mut m = QMat::zeros(rows, cols);
        if rows == 0 {
            return m;
        }
        for (j, &idx) in self.bases[h].iter().enumerate() {
            let mut basis_form = Form::zero(self.dim, h);
            basis_form.add_term(idx, Q::one());
            let image = f(&basis_form);
            assert_eq!(image.degree as isize, target, "operator degree shift mismatch");
            for (&t, c) in &image.coeffs {
                m[(self.position(t), j)] = c.clone();
            }
        }
        m
    }
}

/// Graded exterior multiplication.
///
/// ```
/// use lcscoh::exterior::{wedge, Form};
/// let omega = Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4]));
/// let top = wedge(&omega, &omega);
/// assert_eq!(top, Form::monomial(4, &[1, 2, 3, 4]).scale(&lcscoh::scalar::qz(2)));
/// assert!(wedge(&Form::monomial(4, &[1, 2]), &Form::monomial(4, &[1, 2])).is_zero());
/// ```
pub fn wedge(a: &Form, b: &Form) -> Form {
    assert_eq!(a.dim, b.dim, "ambient dimension mismatch");
    let degree = a.degree + b.degree;
    if degree > a.dim {
        return Form::zero(a.dim, a.dim);
    }
    let mut out = Form::zero(a.dim, degree);
    for (&ia, ca) in &a.coeffs {
        for (&ib, cb) in &b.coeffs {
            if ia.0 & ib.0 != 0 {
                continue;
            }
            out.add_term(MultiIndex(ia.0 | ib.0), ca * cb * merge_sign(ia, ib));
        }
    }
    out
}

/// Sign of sorting the concatenation (a-indices, b-indices): parity of the
/// number of pairs (i ∈ a, j ∈ b) with i > j.
fn merge_sign(a: MultiIndex, b: MultiIndex) -> Q {
    let mut inversions = 0u32;
    for j in b.indices() {
        inversions += (a.0 >> j).count_ones();
    }
    if inversions % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// A bivector Σ_{i<j} v_{ij}·e_i∧e_j, stored as its skew matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivector {
    pub dim: usize,
    /// Skew-symmetric: entry (i, j) is the coefficient of e_{i+1}∧e_{j+1}.
    pub matrix: QMat,
}

impl Bivector {
    pub fn from_matrix(matrix: QMat) -> Self {
        assert!(matrix.is_square());
        let n = matrix.rows();
        for i in 0..n {
            for j in 0..n {
                assert!(
                    matrix[(i, j)] == -matrix[(j, i)].clone(),
                    "bivector matrix must be skew-symmetric"
                );
            }
        }
        Bivector {
            dim: n,
            matrix,
        }
    }
}

/// Contraction of a form by a single vector e_i:
/// `ι_{e_i}(e^S) = (−1)^{#{s ∈ S : s < i}} e^{S∖i}` when i ∈ S, else 0.
fn contract_generator(i: usize, a: &Form) -> Form {
    if a.degree == 0 {
        return Form::zero(a.dim, 0);
    }
    let mut out = Form::zero(a.dim, a.degree - 1);
    let bit = 1u32 << (i - 1);
    for (&idx, c) in &a.coeffs {
        if idx.0 & bit == 0 {
            continue;
        }
        let below = (idx.0 & (bit - 1)).count_ones();
        let sign = if below % 2 == 0 { c.clone() } else { -c.clone() };
        out.add_term(MultiIndex(idx.0 & !bit), sign);
    }
    out
}

/// Contraction by a bivector with the convention `ι_{X∧Y} = ι_Y∘ι_X`, so
/// that `(ι_{e_i∧e_j}α) = α(e_i, e_j, …)`.
pub fn interior_product(v: &Bivector, a: &Form) -> Form {
    if a.degree < 2 {
        return Form::zero(a.dim, 0);
    }
    assert_eq!(v.dim, a.dim);
    let mut out = Form::zero(a.dim, a.degree - 2);
    for i in 0..v.dim {
        for j in (i + 1)..v.dim {
            let c = &v.matrix[(i, j)];
            if c.is_zero() {
                continue;
            }
            let contracted = contract_generator(j + 1, &contract_generator(i + 1, a));
            out = out.add(&contracted.scale(c));
        }
    }
    out
}

/// Skew coefficient matrix W of a 2-form: `W[i][j]` = coefficient of
/// `e^{i+1} ∧ e^{j+1}`.
pub fn skew_matrix(omega: &Form) -> QMat {
    assert_eq!(omega.degree, 2);
    let mut w = QMat::zeros(omega.dim, omega.dim);
    for (&idx, c) in &omega.coeffs {
        let ix = idx.indices();
        let (i, j) = (ix[0] - 1, ix[1] - 1);
        w[(i, j)] = c.clone();
        w[(j, i)] = -c.clone();
    }
    w
}

/// The bivector `ω^{-1}` entering `Λ = −ι_{ω^{-1}}`, normalized so that
/// `H·1 = n·1` for `H = [L, Λ]`: its matrix is −W^{-1} where W is ω's skew
/// coefficient matrix.
pub fn omega_inverse(omega: &Form) -> Result<Bivector, ExteriorError> {
    let w = skew_matrix(omega);
    let winv = w.inverse().ok_or(ExteriorError::DegenerateForm)?;
    Ok(Bivector::from_matrix(winv.neg()))
}

/// A degree-homogeneous linear operator on the whole exterior algebra:
/// one matrix per source degree.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedOperator {
    pub shift: isize,
    /// `blocks[h]`: matrix ∧^h → ∧^{h+shift} (zero-row matrix when the
    /// target degree falls outside 0..=m).
    pub blocks: Vec<QMat>,
}

impl fmt::Debug for GradedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedOperator(shift {})", self.shift)
    }
}

impl GradedOperator {
    pub fn build(
        alg: &ExteriorAlgebra,
        shift: isize,
        f: impl Fn(&Form) -> Form,
    ) -> Self {
        let blocks = (0..=alg.dim)
            .map(|h| alg.operator_matrix(h, shift, &f))
            .collect();
        GradedOperator { shift, blocks }
    }

    pub fn zero(alg: &ExteriorAlgebra, shift: isize) -> Self {
        let blocks = (0..=alg.dim)
            .map(|h| QMat::zeros(alg.rank(h as isize + shift), alg.rank(h as isize)))
            .collect();
        GradedOperator { shift, blocks }
    }

    pub fn identity(alg: &ExteriorAlgebra) -> Self {
        let blocks = (0..=alg.dim)
            .map(|h| QMat::identity(alg.rank(h as isize)))
            .collect();
        GradedOperator { shift: 0, blocks }
    }

    pub fn block(&self, h: usize) -> &QMat {
        &self.blocks[h]
    }

    pub fn apply(&self, alg: &ExteriorAlgebra, a: &Form) -> Form {
        let target = a.degree as isize + self.shift;
        if target < 0 || target as usize > alg.dim {
            return Form::zero(alg.dim, if target < 0 { 0 } else { alg.dim });
        }
        let v = alg.to_vec(a);
        let image = self.blocks[a.degree].mul_vec(&v);
        alg.from_vec(target as usize, &image)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &GradedOperator, alg: &ExteriorAlgebra) -> GradedOperator {
        let shift = self.shift + other.shift;
        let blocks = (0..=alg.dim)
            .map(|h| {
                let mid = h as isize + other.shift;
                if mid < 0 || mid as usize > alg.dim {
                    QMat::zeros(alg.rank(h as isize + shift), alg.rank(h as isize))
                } else {
                    self.blocks[mid as usize].mul(&other.blocks[h])
                }
            })
            .collect();
        GradedOperator { shift, blocks }
    }

    pub fn add(&self, other: &GradedOperator) -> GradedOperator {
        assert_eq!(self.shift, other.shift);
        GradedOperator {
            shift: self.shift,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &GradedOperator) -> GradedOperator {
        assert_eq!(self.shift, other.shift);
        GradedOperator {
            shift: self.shift,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> GradedOperator {
        GradedOperator {
            shift: self.shift,
            blocks: self.blocks.iter().map(|b| b.scale(s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(QMat::is_zero)
    }

    /// `[self, other] = self∘other − other∘self` (requires opposite or
    /// equal shifts summing consistently; any pair of graded operators).
    pub fn commutator(&self, other: &GradedOperator, alg: &ExteriorAlgebra) -> GradedOperator {
        self.compose(other, alg).sub(&other.compose(self, alg))
    }

    /// Iterated composition `self^p`.
    pub fn power(&self, p: usize, alg: &ExteriorAlgebra) -> GradedOperator {
        let mut out = GradedOperator::identity(alg);
        for _ in 0..p {
            out = self.compose(&out, alg);
        }
        out
    }
}

/// The Lefschetz triple (L, Λ, H) of a nondegenerate 2-form: `L = ω∧·`,
/// `Λ = −ι_{ω^{-1}}`, `H = [L,Λ]`, with `H` acting on degree h as
/// `(n−h)·id` where m = 2n.
pub fn lefschetz_operators(
    alg: &ExteriorAlgebra,
    omega: &Form,
) -> Result<(GradedOperator, GradedOperator, GradedOperator), ExteriorError> {
    if alg.dim % 2 != 0 {
        return Err(ExteriorError::OddDimension { dim: alg.dim });
    }
    let inv = omega_inverse(omega)?;
    let l = GradedOperator::build(alg, 2, |a| wedge(omega, a));
    let lam = GradedOperator::build(alg, -2, |a| interior_product(&inv, a).scale(&-Q::one()));
    let h = l.commutator(&lam, alg);
    Ok((l, lam, h))
}

/// Lefschetz decomposition `a = Σ_r L^r a_r` with every `a_r` primitive
/// (`Λ a_r = 0`). Returns the list of nonzero components `(r, a_r)`.
///
/// Solved as one linear system over the primitive subspaces
/// `P^{h−2r} = ker Λ|_{∧^{h−2r}}`; sl(2) representation theory makes the
/// system uniquely solvable.
pub fn lefschetz_decompose(
    alg: &ExteriorAlgebra,
    omega: &Form,
    a: &Form,
) -> Result<Vec<(usize, Form)>, ExteriorError> {
    let (l, lam, _) = lefschetz_operators(alg, omega)?;
    let h = a.degree;
    let mut columns: Vec<Vec<Q>> = Vec::new();
    // (r, primitive basis form) generating each column
    let mut gens: Vec<(usize, Vec<Q>)> = Vec::new();
    for r in 0..=(h / 2) {
        let low = h - 2 * r;
        let prim = lam.block(low).kernel_basis();
        let lr = l.power(r, alg);
        for c in 0..prim.cols() {
            let col = prim.col(c);
            columns.push(lr.block(low).mul_vec(&col));
            gens.push((r, col));
        }
    }
    let system = QMat::from_cols(columns);
    let system = if system.cols() == 0 {
        QMat::zeros(alg.rank(h as isize), 0)
    } else {
        system
    };
    let target = alg.to_vec(a);
    let sol = system
        .solve(&target)
        .expect("Lefschetz decomposition always solvable for nondegenerate omega");
    let mut parts: BTreeMap<usize, Form> = BTreeMap::new();
    for (coef, (r, gen)) in sol.iter().zip(&gens) {
        if coef.is_zero() {
            continue;
        }
        let low = h - 2 * r;
        let form = alg.from_vec(low, gen).scale(coef);
        parts
            .entry(*r)
            .and_modify(|f| *f = f.add(&form))
            .or_insert(form);
    }
    Ok(parts.into_iter().filter(|(_, f)| !f.is_zero()).collect())
}

/// A duality operator sending ∧^h to ∧^{m−h} (symplectic or Hodge star).
/// Kept distinct from [`GradedOperator`] because its degree shift depends
/// on the source degree.
#[derive(Clone, PartialEq, Eq)]
pub struct StarOperator {
    /// blocks[h]: matrix ∧^h → ∧^{m−h}.
    pub blocks: Vec<QMat>,
}

impl fmt::Debug for StarOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StarOperator({} degrees)", self.blocks.len())
    }
}

impl StarOperator {
    pub fn block(&self, h: usize) -> &QMat {
        &self.blocks[h]
    }

    pub fn apply(&self, alg: &ExteriorAlgebra, a: &Form) -> Form {
        let v = alg.to_vec(a);
        let image = self.blocks[a.degree].mul_vec(&v);
        alg.from_vec(alg.dim - a.degree, &image)
    }

    /// Conjugation `sign(h) · (★ ∘ op ∘ ★)` as a graded operator; for a
    /// shift-s `op` the result has shift −s. This is how the adjoint
    /// formulas `d_k^* = −∗d_{−k}∗` and `d_k^⋆ = (−1)^h ⋆d_{−k}⋆` are
    /// materialized.
    pub fn conjugate(
        &self,
        alg: &ExteriorAlgebra,
        op: &GradedOperator,
        sign: impl Fn(usize) -> Q,
    ) -> GradedOperator {
        let m = alg.dim;
        let shift = -op.shift;
        let blocks = (0..=m)
            .map(|h| {
                let mid = (m - h) as isize + op.shift;
                if mid < 0 || mid as usize > m {
                    return QMat::zeros(alg.rank(h as isize + shift), alg.rank(h as isize));
                }
                self.blocks[mid as usize]
                    .mul(&op.blocks[m - h])
                    .mul(&self.blocks[h])
                    .scale(&sign(h))
            })
            .collect();
        GradedOperator { shift, blocks }
    }
}

/// The symplectic star of Brylinski: `b ∧ ⋆a = G(b,a)·ωⁿ/n!` for all b of
/// the same degree as a, where G is the pairing induced by ω^{-1}.
/// Satisfies `⋆⋆ = id` and, for a compatible triple, `⋆ = J∗`.
pub fn symplectic_star(
    alg: &ExteriorAlgebra,
    omega: &Form,
) -> Result<StarOperator, ExteriorError> {
    if alg.dim % 2 != 0 {
        return Err(ExteriorError::OddDimension { dim: alg.dim });
    }
    let n = alg.dim / 2;
    let w = skew_matrix(omega);
    // The pairing on 1-forms has matrix +W^{-1} (unlike the Λ-bivector,
    // which carries the opposite sign); this is what makes ⋆ = J∗ hold for
    // compatible triples rather than (−1)^h·J∗.
    let p1 = w.inverse().ok_or(ExteriorError::DegenerateForm)?;
    // volume ωⁿ/n!
    let mut vol = Form::one(alg.dim);
    for _ in 0..n {
        vol = wedge(omega, &vol);
    }
    let mut fact = Q::one();
    for i in 2..=n {
        fact *= Q::from_integer(i.into());
    }
    let vol = vol.scale(&fact.recip());
    Ok(star_from_pairing(alg, &p1, &vol))
}

/// Builds a star operator from a 1-form pairing matrix `p1` and a chosen
/// volume form: degree by degree, `[★] = T⁻¹·G_h` where `T` is the wedge
/// pairing against the volume and `G_h` the Gram matrix of the induced
/// pairing on ∧^h (determinants of `p1` submatrices).
fn star_from_pairing(alg: &ExteriorAlgebra, p1: &QMat, vol: &Form) -> StarOperator {
    let m = alg.dim;
    let top = MultiIndex::from_sorted(&(1..=m).collect::<Vec<_>>());
    let vol_coeff = vol.coeff(top);
    assert!(!vol_coeff.is_zero(), "volume form vanishes");
    let mut blocks = Vec::with_capacity(m + 1);
    for h in 0..=m {
        let src = alg.basis(h);
        let dual = alg.basis(m - h);
        let k = src.len();
        // T[s][t] = coefficient of the volume in e^s ∧ e^t
        let mut t = QMat::zeros(k, k);
        for (si, &s) in src.iter().enumerate() {
            for (ti, &tm) in dual.iter().enumerate() {
                if s.0 & tm.0 != 0 {
                    continue;
                }
                t[(si, ti)] = merge_sign(s, tm) / vol_coeff.clone();
            }
        }
        // Gram matrix of the pairing on ∧^h
        let mut g = QMat::zeros(k, k);
        for (si, &s) in src.iter().enumerate() {
            for (ti, &tm) in src.iter().enumerate() {
                g[(si, ti)] = gram_det(p1, &s.indices(), &tm.indices());
            }
        }
        let tinv = t.inverse().expect("top wedge pairing is nondegenerate");
        blocks.push(tinv.mul(&g));
    }
    StarOperator { blocks }
}

/// det of the submatrix `p1[rows × cols]` (1-based index lists).
fn gram_det(p1: &QMat, rows: &[usize], cols: &[usize]) -> Q {
    let k = rows.len();
    if k == 0 {
        return Q::one();
    }
    let mut sub = QMat::zeros(k, k);
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            sub[(i, j)] = p1[(r - 1, c - 1)].clone();
        }
    }
    sub.det()
}

/// A rational metric on the underlying vector space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    pub matrix: QMat,
}

impl Metric {
    pub fn new(matrix: QMat) -> Result<Self, ExteriorError> {
        if !matrix.is_symmetric() || !matrix.is_positive_definite() {
            return Err(ExteriorError::NotPositiveDefinite);
        }
        Ok(Metric { matrix })
    }

    pub fn standard(dim: usize) -> Self {
        Metric {
            matrix: QMat::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Gram matrix of the induced inner product on ∧^h over the monomial
    /// basis: determinants of submatrices of g^{-1} (the metric on 1-forms).
    pub fn gram_on_forms(&self, alg: &ExteriorAlgebra, h: usize) -> QMat {
        let ginv = self
            .matrix
            .inverse()
            .expect("positive definite metrics are invertible");
        let basis = alg.basis(h);
        let k = basis.len();
        let mut g = QMat::zeros(k, k);
        for (i, &s) in basis.iter().enumerate() {
            for (j, &t) in basis.iter().enumerate() {
                g[(i, j)] = gram_det(&ginv, &s.indices(), &t.indices());
            }
        }
        g
    }
}

/// The Hodge star of a rational metric with orientation `e^{1…m}`:
/// `b ∧ ∗a = ⟨b,a⟩_g · vol_g` with `vol_g = √det(g)·e^{1…m}`.
///
/// Requires det(g) to be a perfect rational square (true for the standard
/// metric and for every synthesized compatible triple in this crate).
pub fn hodge_star(alg: &ExteriorAlgebra, g: &Metric) -> Result<StarOperator, ExteriorError> {
    assert_eq!(g.dim(), alg.dim, "metric/algebra dimension mismatch");
    if !g.matrix.is_positive_definite() {
        return Err(ExteriorError::NotPositiveDefinite);
    }
    let det = g.matrix.det();
    let sqrt = sqrt_q(&det).ok_or(ExteriorError::IrrationalVolume { det: det.clone() })?;
    let ginv = g.matrix.inverse().expect("positive definite");
    let mut vol = Form::monomial(alg.dim, &(1..=alg.dim).collect::<Vec<_>>());
    vol = vol.scale(&sqrt);
    Ok(star_from_pairing(alg, &ginv, &vol))
}

/// Exact square root of a nonnegative rational, if it exists.
pub fn sqrt_q(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// An almost complex structure as a matrix on the underlying vector space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostComplexStructure {
    pub matrix: QMat,
}

impl AlmostComplexStructure {
    pub fn new(matrix: QMat) -> Result<Self, ExteriorError> {
        let n = matrix.rows();
        if !matrix.is_square() || matrix.mul(&matrix) != QMat::identity(n).neg() {
            return Err(ExteriorError::NotAlmostComplex);
        }
        Ok(AlmostComplexStructure { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// Action of J on forms: `(Jα)(X₁,…,X_h) = α(J^{-1}X₁,…,J^{-1}X_h)`,
/// an algebra automorphism. On 1-form coefficient vectors this is
/// `(J^{-1})ᵀ = (−J)ᵀ`; higher degrees extend multiplicatively.
pub fn j_on_forms(alg: &ExteriorAlgebra, j: &AlmostComplexStructure) -> GradedOperator {
    let jt = j.matrix.neg().transpose();
    let on_one: Vec<Form> = (0..alg.dim)
        .map(|i| alg.from_vec(1, &jt.col(i)))
        .collect();
    GradedOperator::build(alg, 0, move |a| {
        let mut out = Form::zero(alg.dim, a.degree);
        for (&idx, c) in a.coeffs.iter() {
            let mut prod = Form::constant(alg.dim, c.clone());
            for i in idx.indices() {
                prod = wedge(&prod, &on_one[i - 1]);
            }
            for (&t, tc) in &prod.coeffs {
                out.add_term(t, tc.clone());
            }
        }
        out
    })
}

/// Sum, intersection, and quotient-complement of spans of same-degree
/// forms, all exact. The complement is taken orthogonal to `den` under
/// the monomial inner product, the representative convention used by
/// every cohomology quotient here.
pub fn subspace_ops(
    alg: &ExteriorAlgebra,
    a: &[Form],
    b: &[Form],
) -> (Vec<Form>, Vec<Form>, Vec<Form>) {
    let degree = a
        .first()
        .or(b.first())
        .map(|f| f.degree)
        .unwrap_or(0);
    let ma = forms_to_span(alg, degree, a);
    let mb = forms_to_span(alg, degree, b);
    let sum = crate::linalg::span_sum(&ma, &mb);
    let inter = crate::linalg::span_intersect(&ma, &mb);
    let quot = crate::linalg::complement_basis(&ma, &mb);
    (
        span_to_forms(alg, degree, &sum),
        span_to_forms(alg, degree, &inter),
        span_to_forms(alg, degree, &quot),
    )
}

pub fn forms_to_span(alg: &ExteriorAlgebra, degree: usize, forms: &[Form]) -> QMat {
    if forms.is_empty() {
        return QMat::empty_span(alg.rank(degree as isize));
    }
    QMat::from_cols(forms.iter().map(|f| alg.to_vec(f)).collect())
}

pub fn span_to_forms(alg: &ExteriorAlgebra, degree: usize, span: &QMat) -> Vec<Form> {
    (0..span.cols())
        .map(|c| alg.from_vec(degree, &span.col(c)))
        .collect()
}
