//! Univariate polynomials over ℚ and polynomial matrices, with Smith
//! normal form over ℚ[k]. Used to locate the weights where an operator
//! pencil A + k·B loses rank: the rational roots of the last invariant
//! factor are exactly the rational k with rank(A + kB) below generic.

use std::fmt;

use num::{One, Zero};

use crate::arith::{self, IntPoly};
use crate::linalg::QMat;
use crate::scalar::{Q, Z};

/// Dense polynomial over ℚ, ascending coefficients, trailing zeros
/// trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct QPoly {
    c: Vec<Q>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { c: Vec::new() }
    }

    pub fn constant(v: Q) -> Self {
        QPoly::from_coeffs(vec![v])
    }

    pub fn from_coeffs(c: Vec<Q>) -> Self {
        let mut p = QPoly { c };
        p.trim();
        p
    }

    /// a + b·k, the shape of every pencil entry.
    pub fn affine(a: Q, b: Q) -> Self {
        QPoly::from_coeffs(vec![a, b])
    }

    fn trim(&mut self) {
        while self.c.last().map(|v| v.is_zero()).unwrap_or(false) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.c.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.c.len().max(other.c.len());
        QPoly::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.c.len().max(other.c.len());
        QPoly::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::from_coeffs(self.c.iter().map(|v| -v.clone()).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(c)
    }

    pub fn scale(&self, s: &Q) -> QPoly {
        QPoly::from_coeffs(self.c.iter().map(|v| v * s).collect())
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn divrem(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        let dd = div.c.len() - 1;
        let lc = div.leading();
        let mut rem = self.c.clone();
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = rem[i].clone() / &lc;
            if q.is_zero() {
                continue;
            }
            quot[i - dd] = q.clone();
            for j in 0..=dd {
                let t = div.c[j].clone() * &q;
                rem[i - dd + j] -= t;
            }
        }
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    pub fn divides(&self, other: &QPoly) -> bool {
        if other.is_zero() {
            return true;
        }
        if self.is_zero() {
            return false;
        }
        other.divrem(self).1.is_zero()
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = Q::one() / self.leading();
        self.scale(&inv)
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for v in self.c.iter().rev() {
            acc = acc * x + v;
        }
        acc
    }

    /// Clears denominators and content into a primitive integer
    /// polynomial with the same roots.
    pub fn to_primitive_int(&self) -> IntPoly {
        use num::Integer;
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut den = Z::one();
        for v in &self.c {
            den = &den * v.denom() / den.gcd(v.denom());
        }
        IntPoly::from_coeffs(
            self.c
                .iter()
                .map(|v| v.numer() * (&den / v.denom()))
                .collect(),
        )
        .primitive()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.c.len()).rev() {
            let v = &self.c[i];
            if v.is_zero() {
                continue;
            }
            let (sign, abs) = if v < &Q::zero() {
                ("-", -v.clone())
            } else {
                ("+", v.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let show_coeff = !abs.is_one() || i == 0;
            if show_coeff {
                write!(f, "{}", crate::scalar::fmt_q(&abs))?;
            }
            if i > 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                write!(f, "k")?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Matrix with entries in ℚ[k].
#[derive(Clone, Debug)]
pub struct PMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<QPoly>,
}

impl PMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PMat {
            rows,
            cols,
            data: vec![QPoly::zero(); rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &QPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QPoly) {
        self.data[i * self.cols + j] = v;
    }

    /// Entries a[i][j] + k·b[i][j] from a matrix pencil.
    pub fn from_pencil(a: &QMat, b: &QMat) -> Self {
        assert_eq!(a.rows(), b.rows());
        assert_eq!(a.cols(), b.cols());
        let mut m = PMat::zeros(a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                m.set(i, j, QPoly::affine(a[(i, j)].clone(), b[(i, j)].clone()));
            }
        }
        m
    }

    /// Stacks two matrices with the same column count on top of each
    /// other.
    pub fn stack(top: &PMat, bottom: &PMat) -> Self {
        assert_eq!(top.cols, bottom.cols);
        let mut m = PMat::zeros(top.rows + bottom.rows, top.cols);
        for i in 0..top.rows {
            for j in 0..top.cols {
                m.set(i, j, top.get(i, j).clone());
            }
        }
        for i in 0..bottom.rows {
            for j in 0..bottom.cols {
                m.set(top.rows + i, j, bottom.get(i, j).clone());
            }
        }
        m
    }

    /// Places two matrices with the same row count side by side.
    pub fn concat(left: &PMat, right: &PMat) -> Self {
        assert_eq!(left.rows, right.rows);
        let mut m = PMat::zeros(left.rows, left.cols + right.cols);
        for i in 0..left.rows {
            for j in 0..left.cols {
                m.set(i, j, left.get(i, j).clone());
            }
            for j in 0..right.cols {
                m.set(i, left.cols + j, right.get(i, j).clone());
            }
        }
        m
    }

    /// Evaluates every entry at k = x.
    pub fn eval(&self, x: &Q) -> QMat {
        let mut m = QMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self.get(i, j).eval(x);
            }
        }
        m
    }
}

/// Monic invariant factors e₁ | e₂ | … | e_r of a polynomial matrix
/// (Smith normal form over the Euclidean domain ℚ[k]; r is the generic
/// rank). The transforms are unimodular, so for every rational k₀ the
/// rank of the evaluated matrix equals the number of invariant factors
/// nonvanishing at k₀.
pub fn invariant_factors(m: &PMat) -> Vec<QPoly> {
    let mut m = m.clone();
    let n = m.rows.min(m.cols);
    let mut factors: Vec<QPoly> = Vec::new();
    let mut t = 0usize;
    while t < n {
        // find the minimal-degree nonzero entry in the trailing block
        let mut pivot: Option<(usize, usize, usize)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                if let Some(d) = m.get(i, j).degree() {
                    if pivot.map(|(_, _, pd)| d < pd).unwrap_or(true) {
                        pivot = Some((i, j, d));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = pivot else {
            break; // trailing block is zero
        };
        swap_rows(&mut m, t, pi);
        swap_cols(&mut m, t, pj);

        // clear the pivot column and row; restart whenever a remainder
        // drops the minimal degree
        let mut dirty = false;
        for i in t + 1..m.rows {
            if m.get(i, t).is_zero() {
                continue;
            }
            let (q, r) = m.get(i, t).divrem(m.get(t, t));
            row_sub_mul(&mut m, i, t, &q);
            debug_assert_eq!(m.get(i, t), &r);
            if !r.is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        for j in t + 1..m.cols {
            if m.get(t, j).is_zero() {
                continue;
            }
            let (q, r) = m.get(t, j).divrem(m.get(t, t));
            col_sub_mul(&mut m, j, t, &q);
            debug_assert_eq!(m.get(t, j), &r);
            if !r.is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // enforce divisibility: the pivot must divide the whole trailing
        // block, else fold an offending row in and start over
        let mut offender = None;
        'scan: for i in t + 1..m.rows {
            for j in t + 1..m.cols {
                if !m.get(t, t).divides(m.get(i, j)) {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            row_add(&mut m, t, i);
            continue;
        }
        factors.push(m.get(t, t).monic());
        t += 1;
    }
    factors
}

fn swap_rows(m: &mut PMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        let va = m.get(a, j).clone();
        let vb = m.get(b, j).clone();
        m.set(a, j, vb);
        m.set(b, j, va);
    }
}

fn swap_cols(m: &mut PMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        let va = m.get(i, a).clone();
        let vb = m.get(i, b).clone();
        m.set(i, a, vb);
        m.set(i, b, va);
    }
}

/// row_i -= q · row_t
fn row_sub_mul(m: &mut PMat, i: usize, t: usize, q: &QPoly) {
    for j in 0..m.cols {
        let v = m.get(i, j).sub(&q.mul(m.get(t, j)));
        m.set(i, j, v);
    }
}

/// col_j -= q · col_t
fn col_sub_mul(m: &mut PMat, j: usize, t: usize, q: &QPoly) {
    for i in 0..m.rows {
        let v = m.get(i, j).sub(&q.mul(m.get(i, t)));
        m.set(i, j, v);
    }
}

/// row_t += row_i
fn row_add(m: &mut PMat, t: usize, i: usize) {
    for j in 0..m.cols {
        let v = m.get(t, j).add(m.get(i, j));
        m.set(t, j, v);
    }
}

/// Rational roots of the last invariant factor, i.e. every rational k
/// where the matrix rank is below generic; factors whose roots cannot
/// be extracted exactly come back as symbolic strings.
pub fn rank_drop_weights(m: &PMat) -> (Vec<Q>, Vec<String>) {
    let factors = invariant_factors(m);
    let Some(last) = factors.last() else {
        return (Vec::new(), Vec::new());
    };
    qpoly_rational_roots(last)
}

/// Splits a polynomial over ℚ into its rational roots and the symbolic
/// leftover factors (primitive integer polynomials without rational
/// roots, or unfactorable ones).
pub fn qpoly_rational_roots(p: &QPoly) -> (Vec<Q>, Vec<String>) {
    if p.is_zero() || p.degree() == Some(0) {
        return (Vec::new(), Vec::new());
    }
    let ip = p.to_primitive_int();
    match arith::rational_roots(&ip) {
        Some(rr) => {
            let roots = rr.roots.into_iter().map(|(r, _)| r).collect();
            let mut unresolved = Vec::new();
            if rr.cofactor.degree().unwrap_or(0) > 0 {
                unresolved.push(rr.cofactor.to_string());
            }
            (roots, unresolved)
        }
        None => (Vec::new(), vec![ip.to_string()]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qq, qz};

    fn kp(desc: &[i64]) -> QPoly {
        QPoly::from_coeffs(desc.iter().rev().map(|&v| Q::from(Z::from(v))).collect())
    }

    #[test]
    fn poly_arithmetic() {
        let a = kp(&[1, -1]); // k − 1
        let b = kp(&[1, 1]); // k + 1
        assert_eq!(a.mul(&b), kp(&[1, 0, -1]));
        let (q, r) = kp(&[1, 0, -1]).divrem(&a);
        assert_eq!(q, b);
        assert!(r.is_zero());
        let (q, r) = kp(&[1, 0, 0]).divrem(&kp(&[2, 1]));
        // k² = (2k+1)(k/2 − 1/4) + 1/4
        assert_eq!(q, QPoly::from_coeffs(vec![qq(-1, 4), qq(1, 2)]));
        assert_eq!(r, QPoly::constant(qq(1, 4)));
        assert_eq!(kp(&[2, 0, -2]).gcd(&kp(&[3, 3])), kp(&[1, 1]));
        assert_eq!(kp(&[4, 0, -2]).to_primitive_int().to_string(), "2*x^2 - 1");
        assert_eq!(
            QPoly::from_coeffs(vec![qq(1, 6), qq(1, 4)]).to_primitive_int().to_string(),
            "3*x + 2"
        );
        assert_eq!(kp(&[1, -1]).to_string(), "k - 1");
        assert_eq!(QPoly::from_coeffs(vec![qq(1, 2), qz(2)]).to_string(), "2*k + 1/2");
    }

    #[test]
    fn smith_form_known_matrices() {
        // diag(k, k(k+1)) is already in Smith form
        let mut m = PMat::zeros(2, 2);
        m.set(0, 0, kp(&[1, 0]));
        m.set(1, 1, kp(&[1, 1, 0]));
        assert_eq!(invariant_factors(&m), vec![kp(&[1, 0]), kp(&[1, 1, 0])]);
        // [[k, 0], [0, k+1]]: coprime diagonal → e₁ = 1, e₂ = k(k+1)
        let mut m = PMat::zeros(2, 2);
        m.set(0, 0, kp(&[1, 0]));
        m.set(1, 1, kp(&[1, 1]));
        assert_eq!(invariant_factors(&m), vec![kp(&[1]), kp(&[1, 1, 0])]);
        // zero matrix has no invariant factors
        assert!(invariant_factors(&PMat::zeros(3, 2)).is_empty());
        // constant full-rank matrix: all factors 1
        let mut m = PMat::zeros(2, 2);
        m.set(0, 0, kp(&[1]));
        m.set(0, 1, kp(&[5]));
        m.set(1, 1, kp(&[2]));
        assert_eq!(invariant_factors(&m), vec![kp(&[1]), kp(&[1])]);
    }

    #[test]
    fn smith_matches_minor_gcd_oracle() {
        // independent oracle on random small pencils: the t-th
        // determinantal divisor D_t = gcd of all t×t minors, and
        // e_t = D_t / D_{t−1}
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..25 {
            let rows = rng.random_range(1..=4usize);
            let cols = rng.random_range(1..=4usize);
            let mut m = PMat::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    let a = qz(rng.random_range(-2..=2));
                    let b = qz(rng.random_range(-2..=2));
                    m.set(i, j, QPoly::affine(a, b));
                }
            }
            let factors = invariant_factors(&m);
            let mut d_prev = QPoly::constant(Q::one());
            for t in 1..=factors.len() {
                let d_t = minor_gcd(&m, t);
                let (e_t, rem) = d_t.divrem(&d_prev);
                assert!(rem.is_zero(), "D_{t} not divisible by D_{}", t - 1);
                assert_eq!(factors[t - 1], e_t.monic(), "factor {t} of {m:?}");
                d_prev = d_t;
            }
            // rank beyond the factor count means a zero determinantal
            // divisor at the next size
            if factors.len() < rows.min(cols) {
                assert!(minor_gcd(&m, factors.len() + 1).is_zero());
            }
        }
    }

    fn minor_gcd(m: &PMat, t: usize) -> QPoly {
        let mut acc = QPoly::zero();
        let row_sets = subsets(m.rows, t);
        let col_sets = subsets(m.cols, t);
        for rs in &row_sets {
            for cs in &col_sets {
                let d = poly_det(m, rs, cs);
                acc = if acc.is_zero() { d } else { acc.gcd(&d) };
            }
        }
        acc.monic()
    }

    fn subsets(n: usize, t: usize) -> Vec<Vec<usize>> {
        use itertools::Itertools;
        (0..n).combinations(t).collect()
    }

    fn poly_det(m: &PMat, rows: &[usize], cols: &[usize]) -> QPoly {
        // Laplace expansion along the first row; fine for t ≤ 4
        if rows.is_empty() {
            return QPoly::constant(Q::one());
        }
        let mut acc = QPoly::zero();
        for (idx, &c) in cols.iter().enumerate() {
            let minor_cols: Vec<usize> =
                cols.iter().copied().filter(|&x| x != c).collect();
            let sub = poly_det(m, &rows[1..], &minor_cols);
            let term = m.get(rows[0], c).mul(&sub);
            acc = if idx % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    #[test]
    fn evaluation_rank_matches_surviving_factors() {
        // unimodular transforms are invertible at every k₀, so
        // rank(M(k₀)) = #{t : e_t(k₀) ≠ 0}
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31415);
        for _ in 0..20 {
            let rows = rng.random_range(1..=5usize);
            let cols = rng.random_range(1..=5usize);
            let mut m = PMat::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(
                        i,
                        j,
                        QPoly::affine(qz(rng.random_range(-3..=3)), qz(rng.random_range(-3..=3))),
                    );
                }
            }
            let factors = invariant_factors(&m);
            for k0 in [-2i64, -1, 0, 1, 2, 7] {
                let x = qz(k0);
                let expected = factors.iter().filter(|e| !e.eval(&x).is_zero()).count();
                assert_eq!(m.eval(&x).rank(), expected, "k₀ = {k0}");
            }
        }
    }

    #[test]
    fn rank_drop_weights_examples() {
        // [[k, 1], [2k, k+3]]: det = k(k+3) − 2k = k² + k,
        // generic rank 2, drops exactly at k = 0, −1
        let mut m = PMat::zeros(2, 2);
        m.set(0, 0, kp(&[1, 0]));
        m.set(0, 1, kp(&[1]));
        m.set(1, 0, kp(&[2, 0]));
        m.set(1, 1, kp(&[1, 3]));
        let (roots, unresolved) = rank_drop_weights(&m);
        assert_eq!(roots, vec![qz(-1), qz(0)]);
        assert!(unresolved.is_empty());
        // irrational drop locus: det = k² − 2 → symbolic leftover
        let mut m = PMat::zeros(2, 2);
        m.set(0, 0, kp(&[1, 0]));
        m.set(0, 1, kp(&[2]));
        m.set(1, 0, kp(&[1]));
        m.set(1, 1, kp(&[1, 0]));
        let (roots, unresolved) = rank_drop_weights(&m);
        assert!(roots.is_empty());
        assert_eq!(unresolved, vec!["x^2 - 2".to_string()]);
        // constant matrix never drops rank
        let mut m = PMat::zeros(1, 1);
        m.set(0, 0, kp(&[5]));
        let (roots, unresolved) = rank_drop_weights(&m);
        assert!(roots.is_empty() && unresolved.is_empty());
    }
}
