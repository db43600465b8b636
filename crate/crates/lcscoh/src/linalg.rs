//! Exact linear algebra over ℚ.
//!
//! Dense matrices of [`Q`] with Gauss–Jordan reduction, kernels, solving,
//! inverses, and subspace arithmetic (sum, intersection, orthogonal
//! complements). All results are exact; all bases are canonical (reduced
//! row echelon form of the spanning set), so repeated runs produce
//! byte-identical output.
//!
//! Subspaces are represented by matrices whose *columns* span them.
//!
//! ```
//! use lcscoh::linalg::QMat;
//! use lcscoh::scalar::qz;
//!
//! // x + y = 0 has a one-dimensional kernel.
//! let m = QMat::from_rows(vec![vec![qz(1), qz(1)]]);
//! let ker = m.kernel_basis();
//! assert_eq!(ker.cols(), 1);
//! assert!(m.mul(&ker).is_zero());
//! ```

use std::fmt;

use num::{One, Signed, Zero};

use crate::scalar::Q;

#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_cols(cols: Vec<Vec<Q>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    /// Column matrix whose columns span the same space but with a fixed row
    /// dimension, used to glue spans living in the same ambient space.
    pub fn empty_span(ambient_rows: usize) -> Self {
        Self::zeros(ambient_rows, 0)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> Vec<Q> {
        (0..self.cols).map(|c| self[(r, c)].clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Q::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat {
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
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat {
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

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, s: &Q) -> Self {
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| &self[(r, c)] * &v[c])
                    .fold(Q::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    /// `[self | other]` side by side.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..other.cols {
                m[(r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        m
    }

    /// `[self; other]` stacked.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut m = Self::zeros(self.rows + other.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)].clone();
            }
        }
        for r in 0..other.rows {
            for c in 0..self.cols {
                m[(self.rows + r, c)] = other[(r, c)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for pc in 0..m.cols {
            if pr >= m.rows {
                break;
            }
            let Some(nz) = (pr..m.rows).find(|&r| !m[(r, pc)].is_zero()) else {
                continue;
            };
            if nz != pr {
                for c in 0..m.cols {
                    m.data.swap(nz * m.cols + c, pr * m.cols + c);
                }
            }
            let inv = m[(pr, pc)].recip();
            for c in pc..m.cols {
                let v = &m[(pr, c)] * &inv;
                m[(pr, c)] = v;
            }
            for r in 0..m.rows {
                if r != pr && !m[(r, pc)].is_zero() {
                    let f = m[(r, pc)].clone();
                    for c in pc..m.cols {
                        let v = &m[(r, c)] - &(&f * &m[(pr, c)]);
                        m[(r, c)] = v;
                    }
                }
            }
            pivots.push(pc);
            pr += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the null space `{x : self·x = 0}`, one column per
    /// free variable, in ascending free-column order.
    pub fn kernel_basis(&self) -> QMat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut cols = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Q::zero(); self.cols];
            v[f] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, f)].clone();
            }
            cols.push(v);
        }
        QMat::from_cols(cols).with_rows(self.cols)
    }

    fn with_rows(self, rows: usize) -> Self {
        if self.cols == 0 {
            QMat::zeros(rows, 0)
        } else {
            assert_eq!(self.rows, rows);
            self
        }
    }

    /// One particular solution of `self·x = b`, free variables set to zero.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let sols = self.solve_matrix(&QMat::from_cols(vec![b.to_vec()]))?;
        Some(sols.col(0))
    }

    /// Solves `self·X = B` column by column; `None` if any column is
    /// inconsistent.
    pub fn solve_matrix(&self, b: &QMat) -> Option<QMat> {
        assert_eq!(self.rows, b.rows);
        let (r, pivots) = self.hstack(b).rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut out = QMat::zeros(self.cols, b.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                out[(pc, c)] = r[(row, self.cols + c)].clone();
            }
        }
        Some(out)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let sol = self.solve_matrix(&QMat::identity(self.rows))?;
        // solve_matrix succeeds for rank-deficient square systems with
        // consistent right-hand sides; full rank still has to be checked.
        if self.mul(&sol) == QMat::identity(self.rows) {
            Some(sol)
        } else {
            None
        }
    }

    pub fn det(&self) -> Q {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Q::one();
        for p in 0..n {
            let Some(nz) = (p..n).find(|&r| !m[(r, p)].is_zero()) else {
                return Q::zero();
            };
            if nz != p {
                for c in 0..n {
                    m.data.swap(nz * n + c, p * n + c);
                }
                det = -det;
            }
            det *= &m[(p, p)];
            let inv = m[(p, p)].recip();
            for r in p + 1..n {
                if m[(r, p)].is_zero() {
                    continue;
                }
                let f = &m[(r, p)] * &inv;
                for c in p..n {
                    let v = &m[(r, c)] - &(&f * &m[(p, c)]);
                    m[(r, c)] = v;
                }
            }
        }
        det
    }

    /// Positive definiteness via Sylvester's criterion (all leading
    /// principal minors positive). Exact, so only meaningful for symmetric
    /// matrices.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        (1..=self.rows).all(|k| {
            let mut minor = QMat::zeros(k, k);
            for r in 0..k {
                for c in 0..k {
                    minor[(r, c)] = self[(r, c)].clone();
                }
            }
            minor.det().is_positive()
        })
    }
}

/// Canonical basis of the column space: RREF the transposed matrix and
/// return its nonzero rows as columns. Two matrices span the same space
/// iff this returns equal results.
pub fn col_span_basis(m: &QMat) -> QMat {
    let (r, pivots) = m.transpose().rref();
    let cols: Vec<Vec<Q>> = (0..pivots.len()).map(|i| r.row(i)).collect();
    QMat::from_cols(cols).with_rows(m.rows())
}

pub fn span_dim(m: &QMat) -> usize {
    m.rank()
}

pub fn span_contains(span: &QMat, v: &[Q]) -> bool {
    span.solve(v).is_some()
}

/// Is every column of `inner` inside the column span of `outer`?
pub fn span_subset(inner: &QMat, outer: &QMat) -> bool {
    outer.solve_matrix(inner).is_some()
}

pub fn span_eq(a: &QMat, b: &QMat) -> bool {
    col_span_basis(a) == col_span_basis(b)
}

pub fn span_sum(a: &QMat, b: &QMat) -> QMat {
    col_span_basis(&a.hstack(b))
}

/// Intersection of two column spans: solve `a·x = b·y` through the kernel
/// of `[a | -b]`.
pub fn span_intersect(a: &QMat, b: &QMat) -> QMat {
    let ker = a.hstack(&b.neg()).kernel_basis();
    let mut xpart = QMat::zeros(a.cols(), ker.cols());
    for r in 0..a.cols() {
        for c in 0..ker.cols() {
            xpart[(r, c)] = ker[(r, c)].clone();
        }
    }
    col_span_basis(&a.mul(&xpart))
}

/// Basis of `{x ∈ span(num) : x ⟂ span(den)}` under the standard dot
/// product. When `span(den) ⊆ span(num)` this is a canonical complement of
/// the denominator inside the numerator, the representative space used for
/// every cohomology quotient in this crate.
pub fn complement_basis(num: &QMat, den: &QMat) -> QMat {
    let n = col_span_basis(num);
    if den.cols() == 0 {
        return n;
    }
    let constraints = den.transpose().mul(&n);
    let ker = constraints.kernel_basis();
    col_span_basis(&n.mul(&ker))
}
