//! Locally conformally symplectic structures and the twisted operator
//! calculus built on them.
//!
//! An lcs structure on a Lie algebra is a nondegenerate 2-form Ω together
//! with a closed 1-form θ (the Lee form) satisfying dΩ = θ∧Ω. For every
//! exact rational weight k this module builds the twisted differential
//! `d_k = d − kθ∧·` and its symplectic partner `δ_k = d_{k−1}Λ − Λd_k`,
//! both as matrix pencils affine in k, and verifies the commutation
//! framework the four cohomologies rest on.

use thiserror::Error;

use crate::exterior::{
    j_on_forms, lefschetz_operators, skew_matrix, wedge, AlmostComplexStructure,
    ExteriorAlgebra, ExteriorError, Form, GradedOperator, Metric,
};
use crate::liealg::{ce_differential, AlgebraBundle, LieAlgebra};
use crate::linalg::QMat;
use crate::report::{CheckItem, CheckReport};
use crate::scalar::{fmt_q, Q};

use num::{One, Zero};

#[derive(Debug, Error)]
pub enum LcsError {
    #[error("dΩ = θ∧Ω has no solution θ: the form is not locally conformally symplectic")]
    NotLcs,
    #[error("the Lee form solving dΩ = θ∧Ω is not closed")]
    LeeFormNotClosed,
    #[error("invalid lcs structure: {0}")]
    InvalidStructure(String),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

/// A compatible almost-Hermitian pair: J with Ω(J·,J·) = Ω and the metric
/// g = Ω(·,J·).
#[derive(Clone, Debug)]
pub struct Triple {
    pub j: AlmostComplexStructure,
    pub g: Metric,
}

/// An lcs Lie algebra with its cached operator suite.
#[derive(Clone, Debug)]
pub struct LcsStructure {
    pub name: String,
    pub lie: LieAlgebra,
    pub ext: ExteriorAlgebra,
    pub omega: Form,
    pub theta: Form,
    /// Half the dimension: dim = 2n.
    pub n: usize,
    pub triple: Option<Triple>,
    /// True when the triple was synthesized by [`compatible_triple`]
    /// rather than supplied with the input; recorded in output metadata.
    pub triple_synthesized: bool,
    d: GradedOperator,
    lef_l: GradedOperator,
    lef_lambda: GradedOperator,
}

impl LcsStructure {
    /// Validates everything: dθ = 0, dΩ = θ∧Ω, Ω nondegenerate, and when
    /// a triple is supplied, Ω(J·,J·) = Ω and g = Ω(·,J·) symmetric
    /// positive definite.
    pub fn new(
        name: &str,
        lie: LieAlgebra,
        omega: Form,
        theta: Form,
        triple: Option<Triple>,
    ) -> Result<Self, LcsError> {
        let dim = lie.dim;
        if dim % 2 != 0 {
            return Err(ExteriorError::OddDimension { dim }.into());
        }
        let ext = ExteriorAlgebra::new(dim);
        if omega.degree != 2 || omega.dim != dim {
            return Err(LcsError::InvalidStructure("Ω must be a 2-form".into()));
        }
        if theta.degree != 1 || theta.dim != dim {
            return Err(LcsError::InvalidStructure("θ must be a 1-form".into()));
        }
        // nondegeneracy and the sl(2) triple in one stroke
        let (lef_l, lef_lambda, _) = lefschetz_operators(&ext, &omega)?;
        if !crate::liealg::d_form(&lie, &theta).is_zero() {
            return Err(LcsError::LeeFormNotClosed);
        }
        let domega = crate::liealg::d_form(&lie, &omega);
        if domega != wedge(&theta, &omega) {
            return Err(LcsError::InvalidStructure(
                "dΩ ≠ θ∧Ω: θ is not the Lee form of Ω".into(),
            ));
        }
        if let Some(t) = &triple {
            validate_triple(&omega, t)?;
        }
        let d = ce_differential(&ext, &lie);
        Ok(LcsStructure {
            name: name.to_owned(),
            lie,
            ext,
            omega,
            theta,
            n: dim / 2,
            triple,
            triple_synthesized: false,
            d,
            lef_l,
            lef_lambda,
        })
    }

    /// Builds a structure without checking dΩ = θ∧Ω (still requires Ω
    /// nondegenerate and dθ = 0). Exists so the identity reports can
    /// demonstrate which relations fail when θ is not the Lee form.
    pub fn new_unchecked(
        name: &str,
        lie: LieAlgebra,
        omega: Form,
        theta: Form,
    ) -> Result<Self, LcsError> {
        let dim = lie.dim;
        if dim % 2 != 0 {
            return Err(ExteriorError::OddDimension { dim }.into());
        }
        let ext = ExteriorAlgebra::new(dim);
        let (lef_l, lef_lambda, _) = lefschetz_operators(&ext, &omega)?;
        if !crate::liealg::d_form(&lie, &theta).is_zero() {
            return Err(LcsError::LeeFormNotClosed);
        }
        let d = ce_differential(&ext, &lie);
        Ok(LcsStructure {
            name: name.to_owned(),
            lie,
            ext,
            omega,
            theta,
            n: dim / 2,
            triple: None,
            triple_synthesized: false,
            d,
            lef_l,
            lef_lambda,
        })
    }

    /// Loads from a JSON bundle: Ω is required, θ falls back to
    /// [`lee_form`], a supplied J is validated (with g = Ω(·,J·) when no
    /// metric is given).
    pub fn from_bundle(bundle: AlgebraBundle) -> Result<Self, LcsError> {
        let AlgebraBundle {
            name,
            algebra,
            omega,
            theta,
            j,
            metric,
        } = bundle;
        let omega = omega.ok_or_else(|| {
            LcsError::InvalidStructure("the bundle carries no symplectic form".into())
        })?;
        let dim = algebra.dim;
        if dim % 2 != 0 {
            return Err(ExteriorError::OddDimension { dim }.into());
        }
        let ext = ExteriorAlgebra::new(dim);
        let theta = match theta {
            Some(t) => t,
            None => lee_form(&ext, &algebra, &omega)?,
        };
        let triple = match (j, metric) {
            (Some(j), Some(g)) => Some(Triple { j, g }),
            (Some(j), None) => {
                let w = skew_matrix(&omega);
                let g = Metric::new(w.mul(&j.matrix)).map_err(|e| {
                    LcsError::InvalidStructure(format!("Ω(·,J·) is not a metric: {e}"))
                })?;
                Some(Triple { j, g })
            }
            (None, _) => None,
        };
        LcsStructure::new(&name, algebra, omega, theta, triple)
    }

    /// Replaces the triple with the Darboux-synthesized one.
    pub fn with_synthesized_triple(mut self) -> Result<Self, LcsError> {
        let (j, g) = compatible_triple(&self.ext, &self.omega)?;
        self.triple = Some(Triple { j, g });
        self.triple_synthesized = true;
        Ok(self)
    }

    /// The untwisted Chevalley–Eilenberg differential.
    pub fn d(&self) -> &GradedOperator {
        &self.d
    }

    /// Lefschetz operator L = Ω∧·.
    pub fn lefschetz_l(&self) -> &GradedOperator {
        &self.lef_l
    }

    /// Dual Lefschetz operator Λ = −ι_{Ω^{-1}}.
    pub fn lambda(&self) -> &GradedOperator {
        &self.lef_lambda
    }

    /// Multiplication by θ as a graded operator of shift +1.
    pub fn theta_wedge(&self) -> GradedOperator {
        let theta = self.theta.clone();
        GradedOperator::build(&self.ext, 1, move |f| wedge(&theta, f))
    }

    /// The pencil k ↦ d_k = d − kθ∧·.
    pub fn d_pencil(&self) -> OperatorPencil {
        OperatorPencil {
            shift: 1,
            a: self.d.clone(),
            b: self.theta_wedge().scale(&-Q::one()),
        }
    }

    /// The pencil k ↦ δ_k = d_{k−1}Λ − Λd_k. The composition stays affine
    /// in k because Λ carries no weight: with d_k = A + kB this is
    /// (AΛ − BΛ − ΛA) + k(BΛ − ΛB).
    pub fn delta_pencil(&self) -> OperatorPencil {
        let dp = self.d_pencil();
        let lam = &self.lef_lambda;
        let a = dp
            .a
            .compose(lam, &self.ext)
            .sub(&dp.b.compose(lam, &self.ext))
            .sub(&lam.compose(&dp.a, &self.ext));
        let b = dp
            .b
            .compose(lam, &self.ext)
            .sub(&lam.compose(&dp.b, &self.ext));
        OperatorPencil { shift: -1, a, b }
    }

    pub fn d_k(&self, k: &Q) -> GradedOperator {
        self.d_pencil().eval(k)
    }

    pub fn delta_k(&self, k: &Q) -> GradedOperator {
        self.delta_pencil().eval(k)
    }

    /// The triple to use for star operators: the stored one, or a
    /// synthesized compatible triple. The boolean reports synthesis.
    pub fn triple_or_synthesized(&self) -> Result<(Triple, bool), LcsError> {
        match &self.triple {
            Some(t) => Ok((t.clone(), self.triple_synthesized)),
            None => {
                let (j, g) = compatible_triple(&self.ext, &self.omega)?;
                Ok((Triple { j, g }, true))
            }
        }
    }
}

fn validate_triple(omega: &Form, t: &Triple) -> Result<(), LcsError> {
    let w = skew_matrix(omega);
    let j = &t.j.matrix;
    if j.transpose().mul(&w).mul(j) != w {
        return Err(LcsError::InvalidStructure("Ω(J·,J·) ≠ Ω".into()));
    }
    let g = w.mul(j);
    if g != t.g.matrix {
        return Err(LcsError::InvalidStructure(
            "supplied metric differs from Ω(·,J·)".into(),
        ));
    }
    // Metric::new already guaranteed symmetry and positive definiteness
    Ok(())
}

/// A family of graded operators affine in the weight: k ↦ A + k·B.
#[derive(Clone, Debug)]
pub struct OperatorPencil {
    pub shift: isize,
    pub a: GradedOperator,
    pub b: GradedOperator,
}

impl OperatorPencil {
    pub fn eval(&self, k: &Q) -> GradedOperator {
        if k.is_zero() {
            return self.a.clone();
        }
        self.a.add(&self.b.scale(k))
    }
}

/// Solves dΩ = θ∧Ω for θ. The solution is unique because wedging with a
/// nondegenerate Ω is injective on 1-forms; closedness of the solution is
/// part of the contract.
///
/// ```
/// use lcscoh::exterior::{ExteriorAlgebra, Form};
/// use lcscoh::liealg::parse_salamon;
/// use lcscoh::lcs::lee_form;
/// let ext = ExteriorAlgebra::new(4);
/// let rh3 = parse_salamon("(0,0,12,0)", 4).unwrap();
/// let omega = Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4]));
/// assert_eq!(lee_form(&ext, &rh3, &omega).unwrap(), Form::generator(4, 4));
/// ```
pub fn lee_form(
    ext: &ExteriorAlgebra,
    lie: &LieAlgebra,
    omega: &Form,
) -> Result<Form, LcsError> {
    let wedge_omega = ext.operator_matrix(1, 2, &|f: &Form| wedge(f, omega));
    let domega = crate::liealg::d_form(lie, omega);
    let rhs = ext.to_vec(&domega);
    let sol = wedge_omega.solve(&rhs).ok_or(LcsError::NotLcs)?;
    let theta = ext.from_vec(1, &sol);
    if !crate::liealg::d_form(lie, &theta).is_zero() {
        return Err(LcsError::LeeFormNotClosed);
    }
    Ok(theta)
}

/// Symplectic Gram–Schmidt: returns a rational S with SᵀWS equal to the
/// block diagonal of 2×2 blocks [[0,1],[−1,0]], W the Gram matrix of ω.
/// Equivalently, ω = Σ f^{2i−1}∧f^{2i} in the coframe dual to the columns
/// of S.
pub fn darboux_basis(ext: &ExteriorAlgebra, omega: &Form) -> Result<QMat, ExteriorError> {
    let m = ext.dim;
    if m % 2 != 0 {
        return Err(ExteriorError::OddDimension { dim: m });
    }
    let w = skew_matrix(omega);
    let pairing = |x: &[Q], y: &[Q]| -> Q {
        let wy = w.mul_vec(y);
        x.iter()
            .zip(wy.iter())
            .map(|(a, b)| a * b)
            .fold(Q::zero(), |acc, t| acc + t)
    };
    let mut remaining: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let mut v = vec![Q::zero(); m];
            v[i] = Q::one();
            v
        })
        .collect();
    let mut cols: Vec<Vec<Q>> = Vec::with_capacity(m);
    while !remaining.is_empty() {
        let u = remaining.remove(0);
        let partner = remaining
            .iter()
            .position(|x| !pairing(&u, x).is_zero())
            .ok_or(ExteriorError::DegenerateForm)?;
        let mut v = remaining.remove(partner);
        let c = pairing(&u, &v);
        for entry in v.iter_mut() {
            *entry = entry.clone() / c.clone();
        }
        // project the rest onto the symplectic complement of span(u, v)
        for x in remaining.iter_mut() {
            let a = pairing(x, &v);
            let b = pairing(x, &u);
            for i in 0..m {
                let correction = a.clone() * u[i].clone() - b.clone() * v[i].clone();
                x[i] = x[i].clone() - correction;
            }
        }
        cols.push(u);
        cols.push(v);
    }
    Ok(QMat::from_cols(cols))
}

/// Synthesizes a compatible almost-Hermitian pair from ω alone: in a
/// Darboux basis take the standard J (Je₁ = e₂, Je₂ = −e₁ per block), so
/// J = SJ₀S⁻¹ and g = Ω(·,J·) = S^{−T}S^{−1}, automatically symmetric
/// positive definite.
pub fn compatible_triple(
    ext: &ExteriorAlgebra,
    omega: &Form,
) -> Result<(AlmostComplexStructure, Metric), ExteriorError> {
    let m = ext.dim;
    let s = darboux_basis(ext, omega)?;
    let mut j0 = QMat::zeros(m, m);
    for i in 0..m / 2 {
        j0[(2 * i + 1, 2 * i)] = Q::one();
        j0[(2 * i, 2 * i + 1)] = -Q::one();
    }
    let s_inv = s.inverse().expect("darboux output is invertible");
    let j_mat = s.mul(&j0).mul(&s_inv);
    let g_mat = s_inv.transpose().mul(&s_inv);
    let j = AlmostComplexStructure::new(j_mat).expect("J₀ conjugates to a complex structure");
    let g = Metric::new(g_mat).expect("S^{-T}S^{-1} is symmetric positive definite");
    debug_assert!(validate_triple(
        omega,
        &Triple {
            j: j.clone(),
            g: g.clone()
        }
    )
    .is_ok());
    Ok((j, g))
}

/// The three relations making the weight-graded diagram a bi-differential
/// complex: (d_k)² = 0, δ_kδ_{k+1} = 0 and d_{k−1}δ_k + δ_kd_k = 0,
/// checked as exact matrix identities in every degree.
pub fn verify_bidifferential(s: &LcsStructure, k: &Q) -> CheckReport {
    let dp = s.d_pencil();
    let del = s.delta_pencil();
    let ext = &s.ext;
    let one = Q::one();
    let d_k = dp.eval(k);
    let d_km1 = dp.eval(&(k - &one));
    let del_k = del.eval(k);
    let del_kp1 = del.eval(&(k + &one));
    let mut report = CheckReport::new(&format!("bidifferential at k = {}", fmt_q(k)));
    report.push(CheckItem::expect_zero(
        "d_k∘d_k = 0",
        &d_k.compose(&d_k, ext),
    ));
    report.push(CheckItem::expect_zero(
        "δ_k∘δ_{k+1} = 0",
        &del_k.compose(&del_kp1, ext),
    ));
    report.push(CheckItem::expect_zero(
        "d_{k−1}∘δ_k + δ_k∘d_k = 0",
        &d_km1.compose(&del_k, ext).add(&del_k.compose(&d_k, ext)),
    ));
    report
}

/// The commutation relations tying the pencils to the sl(2) operators:
/// Ld_k = d_{k+1}L, Lδ_k − δ_{k+1}L = d_k, d_{k−1}Λ − Λd_k = δ_k
/// (definitional), δ_{k−1}Λ = Λδ_k, and the composition rule
/// d_k∘d_ℓ = (ℓ−k)·θ∧d(·), checked for ℓ ∈ {k−1, k+1, k+5/2}.
pub fn verify_commutations(s: &LcsStructure, k: &Q) -> CheckReport {
    let dp = s.d_pencil();
    let del = s.delta_pencil();
    let ext = &s.ext;
    let l = s.lefschetz_l();
    let lam = s.lambda();
    let one = Q::one();
    let d_k = dp.eval(k);
    let d_km1 = dp.eval(&(k - &one));
    let d_kp1 = dp.eval(&(k + &one));
    let del_k = del.eval(k);
    let del_km1 = del.eval(&(k - &one));
    let del_kp1 = del.eval(&(k + &one));
    let mut report = CheckReport::new(&format!("commutations at k = {}", fmt_q(k)));
    report.push(CheckItem::expect_zero(
        "L∘d_k − d_{k+1}∘L = 0",
        &l.compose(&d_k, ext).sub(&d_kp1.compose(l, ext)),
    ));
    report.push(CheckItem::expect_zero(
        "L∘δ_k − δ_{k+1}∘L = d_k",
        &l.compose(&del_k, ext)
            .sub(&del_kp1.compose(l, ext))
            .sub(&d_k),
    ));
    report.push(CheckItem::expect_zero(
        "d_{k−1}∘Λ − Λ∘d_k = δ_k",
        &d_km1
            .compose(lam, ext)
            .sub(&lam.compose(&d_k, ext))
            .sub(&del_k),
    ));
    report.push(CheckItem::expect_zero(
        "δ_{k−1}∘Λ − Λ∘δ_k = 0",
        &del_km1.compose(lam, ext).sub(&lam.compose(&del_k, ext)),
    ));
    let theta_d = s.theta_wedge().compose(&s.d, ext);
    for dl in [-&one, one.clone(), Q::new(5.into(), 2.into())] {
        let ell = k + &dl;
        let lhs = dp.eval(k).compose(&dp.eval(&ell), ext);
        let rhs = theta_d.scale(&(&ell - k));
        report.push(CheckItem::expect_zero(
            &format!("d_k∘d_ℓ = (ℓ−k)·θ∧d, ℓ = {}", fmt_q(&ell)),
            &lhs.sub(&rhs),
        ));
    }
    report
}

/// Twisted Leibniz rule: d_k(α∧β) = d_{k−h}α ∧ β + (−1)^{|α|} α ∧ d_hβ,
/// checked over every pair of basis monomials (a spanning set, so the
/// identity holds on all forms).
pub fn twisted_leibniz_check(s: &LcsStructure, k: &Q, h: &Q) -> bool {
    let dp = s.d_pencil();
    let ext = &s.ext;
    let d_k = dp.eval(k);
    let d_kmh = dp.eval(&(k - h));
    let d_h = dp.eval(h);
    for p in 0..=ext.dim {
        for q in 0..=(ext.dim - p) {
            for ai in 0..ext.rank(p as isize) {
                for bi in 0..ext.rank(q as isize) {
                    let alpha = Form::monomial(ext.dim, &ext.basis(p)[ai].indices());
                    let beta = Form::monomial(ext.dim, &ext.basis(q)[bi].indices());
                    let ab = wedge(&alpha, &beta);
                    let lhs = d_k.apply(ext, &ab);
                    let mut rhs = wedge(&d_kmh.apply(ext, &alpha), &beta);
                    let second = wedge(&alpha, &d_h.apply(ext, &beta));
                    rhs = if p % 2 == 0 {
                        rhs.add(&second)
                    } else {
                        rhs.sub(&second)
                    };
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Inner products on each ∧^h induced by a metric (Gram determinants).
pub fn gram_family(ext: &ExteriorAlgebra, g: &Metric) -> Vec<QMat> {
    (0..=ext.dim).map(|h| g.gram_on_forms(ext, h)).collect()
}

/// Adjoint of a graded operator with respect to a family of positive
/// definite Gram matrices, one per degree: the block ∧^q → ∧^{q−shift} is
/// G_p^{-1} M_pᵀ G_q with p = q − shift. For orthonormal Grams this is the
/// plain block transpose.
pub fn adjoint_operator(
    ext: &ExteriorAlgebra,
    op: &GradedOperator,
    grams: &[QMat],
) -> GradedOperator {
    let m = ext.dim;
    let shift = -op.shift;
    let blocks = (0..=m)
        .map(|q| {
            let p = q as isize - op.shift;
            if p < 0 || p as usize > m {
                return QMat::zeros(ext.rank(q as isize + shift), ext.rank(q as isize));
            }
            let p = p as usize;
            let gp_inv = grams[p]
                .inverse()
                .expect("Gram matrices are positive definite");
            gp_inv.mul(&op.blocks[p].transpose()).mul(&grams[q])
        })
        .collect();
    GradedOperator { shift, blocks }
}

/// d^c_k = J^{-1} d_k J on forms. (On ∧^h the inverse of J is (−1)^h J.)
pub fn dc_operator(
    s: &LcsStructure,
    j: &AlmostComplexStructure,
    k: &Q,
) -> GradedOperator {
    let ext = &s.ext;
    let jf = j_on_forms(ext, j);
    let j_inv = GradedOperator {
        shift: 0,
        blocks: jf
            .blocks
            .iter()
            .enumerate()
            .map(|(h, b)| if h % 2 == 0 { b.clone() } else { b.scale(&-Q::one()) })
            .collect(),
    };
    j_inv.compose(&s.d_k(k), ext).compose(&jf, ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{hodge_star, symplectic_star};
    use crate::liealg::parse_salamon;
    use crate::scalar::{qq, qz};

    fn rh3() -> LcsStructure {
        let lie = parse_salamon("(0,0,12,0)", 4).unwrap();
        let omega = Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4]));
        let theta = Form::generator(4, 4);
        LcsStructure::new("rh3", lie, omega, theta, Some(rh3_triple())).unwrap()
    }

    fn rh3_triple() -> Triple {
        // Je¹ = e², Je³ = e⁴ on the coframe means Je₁ = e₂, Je₃ = e₄ works
        // out to the matrix below, and g = Ω(·,J·) = id.
        let j = AlmostComplexStructure::new(QMat::from_rows(vec![
            vec![qz(0), qz(-1), qz(0), qz(0)],
            vec![qz(1), qz(0), qz(0), qz(0)],
            vec![qz(0), qz(0), qz(0), qz(-1)],
            vec![qz(0), qz(0), qz(1), qz(0)],
        ]))
        .unwrap();
        let g = Metric::standard(4);
        Triple { j, g }
    }

    fn d4() -> LcsStructure {
        let lie = parse_salamon("(14,-24,-12,0)", 4).unwrap();
        let omega = Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4]));
        let theta = Form::generator(4, 4).scale(&qz(-1));
        LcsStructure::new("d4", lie, omega, theta, None)
            .unwrap()
            .with_synthesized_triple()
            .unwrap()
    }

    fn combo(m: usize, deg: usize, terms: &[(&[usize], Q)]) -> Form {
        let mut f = Form::zero(m, deg);
        for (ix, c) in terms {
            f.add_term(crate::exterior::MultiIndex::from_sorted(ix), c.clone());
        }
        f
    }

    fn ot21() -> LcsStructure {
        // six-dimensional solvable example with parameters (c₁, c₂) = (1, 0)
        let m = 6;
        let half = qq(1, 2);
        let mut de = vec![Form::zero(m, 2); m];
        de[2] = Form::monomial(m, &[1, 3]).scale(&qz(-1));
        de[3] = Form::monomial(m, &[2, 4]).scale(&qz(-1));
        de[4] = combo(
            m,
            2,
            &[(&[1, 5], half.clone()), (&[1, 6], qz(1)), (&[2, 5], half.clone())],
        );
        de[5] = combo(
            m,
            2,
            &[(&[1, 5], qz(-1)), (&[1, 6], half.clone()), (&[2, 6], half)],
        );
        let lie = LieAlgebra::new(m, de);
        let omega = combo(
            m,
            2,
            &[
                (&[1, 3], qz(2)),
                (&[1, 4], qz(1)),
                (&[2, 3], qz(1)),
                (&[2, 4], qz(2)),
                (&[5, 6], qz(1)),
            ],
        );
        let theta = Form::generator(m, 1).add(&Form::generator(m, 2));
        LcsStructure::new("ot21", lie, omega, theta, None)
            .unwrap()
            .with_synthesized_triple()
            .unwrap()
    }

    #[test]
    fn lee_form_catalog_values() {
        let ext = ExteriorAlgebra::new(4);
        let omega = Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4]));
        let rh3 = parse_salamon("(0,0,12,0)", 4).unwrap();
        assert_eq!(lee_form(&ext, &rh3, &omega).unwrap(), Form::generator(4, 4));
        let d4 = parse_salamon("(14,-24,-12,0)", 4).unwrap();
        assert_eq!(
            lee_form(&ext, &d4, &omega).unwrap(),
            Form::generator(4, 4).scale(&qz(-1))
        );
        // symplectic case: abelian algebra gives θ = 0
        let ab = LieAlgebra::abelian(4);
        assert!(lee_form(&ext, &ab, &omega).unwrap().is_zero());
    }

    #[test]
    fn lee_form_scale_invariant() {
        let ext = ExteriorAlgebra::new(4);
        let rh3 = parse_salamon("(0,0,12,0)", 4).unwrap();
        let omega = Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4]));
        let scaled = omega.scale(&qq(7, 3));
        assert_eq!(
            lee_form(&ext, &rh3, &scaled).unwrap(),
            lee_form(&ext, &rh3, &omega).unwrap()
        );
    }

    #[test]
    fn lee_form_rejects_non_lcs() {
        // needs dim ≥ 6: in dim 4 wedging with Ω maps ∧¹ onto all of ∧³,
        // so a (possibly non-closed) solution always exists
        let ext = ExteriorAlgebra::new(6);
        let lie = parse_salamon("(35,0,0,0,0,0)", 6).unwrap();
        let omega = Form::monomial(6, &[1, 2])
            .add(&Form::monomial(6, &[3, 4]))
            .add(&Form::monomial(6, &[5, 6]));
        // dΩ = e^{35}∧e² = e^{235} up to sign, not of the form θ∧Ω
        assert!(matches!(
            lee_form(&ext, &lie, &omega),
            Err(LcsError::NotLcs)
        ));
    }

    #[test]
    fn d_pencil_values() {
        let s = rh3();
        let k = qz(1);
        // d_k(1) = −kθ
        assert_eq!(
            s.d_k(&k).apply(&s.ext, &Form::one(4)),
            s.theta.scale(&qz(-1))
        );
        // d₁(e³) = Ω
        assert_eq!(s.d_k(&k).apply(&s.ext, &Form::generator(4, 3)), s.omega);
        // d₀ is the plain Chevalley–Eilenberg differential
        assert_eq!(s.d_k(&qz(0)), *s.d());

        let t = d4();
        // d₁(−e³) = Ω
        assert_eq!(
            t.d_k(&qz(1))
                .apply(&t.ext, &Form::generator(4, 3).scale(&qz(-1))),
            t.omega
        );
    }

    #[test]
    fn delta_two_path_agreement() {
        for s in [rh3(), d4(), ot21()] {
            let dp = s.d_pencil();
            let del = s.delta_pencil();
            for k in [qz(-2), qz(0), qq(1, 2), qz(3)] {
                let direct = dp
                    .eval(&(&k - &qz(1)))
                    .compose(s.lambda(), &s.ext)
                    .sub(&s.lambda().compose(&dp.eval(&k), &s.ext));
                assert_eq!(del.eval(&k), direct, "delta mismatch at k = {k}");
            }
        }
    }

    #[test]
    fn delta_on_low_degrees() {
        let s = rh3();
        // Λ kills degrees ≤ 1, so δ_k vanishes on 0-forms and equals
        // −Λd_k on 1-forms
        let del = s.delta_k(&qq(3, 2));
        assert!(del.apply(&s.ext, &Form::one(4)).is_zero());
        let alpha = Form::generator(4, 3);
        let expect = s
            .lambda()
            .apply(&s.ext, &s.d_k(&qq(3, 2)).apply(&s.ext, &alpha))
            .scale(&qz(-1));
        assert_eq!(del.apply(&s.ext, &alpha), expect);
    }

    #[test]
    fn bidifferential_identities_hold() {
        for s in [rh3(), d4()] {
            for num in -6..=6 {
                let k = qq(num, 2);
                let report = verify_bidifferential(&s, &k);
                assert!(report.all_ok(), "{}: {report}", s.name);
            }
        }
        let s = ot21();
        for k in [qz(-1), qq(1, 2), qz(2)] {
            assert!(verify_bidifferential(&s, &k).all_ok());
        }
    }

    #[test]
    fn commutation_identities_hold() {
        for s in [rh3(), d4()] {
            for num in -6..=6 {
                let k = qq(num, 2);
                let report = verify_commutations(&s, &k);
                assert!(report.all_ok(), "{}: {report}", s.name);
            }
        }
        let s = ot21();
        for k in [qz(-1), qq(1, 2), qz(2)] {
            assert!(verify_commutations(&s, &k).all_ok());
        }
    }

    #[test]
    fn abelian_symplectic_collapses_to_untwisted_identities() {
        let lie = LieAlgebra::abelian(4);
        let omega = Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4]));
        let s = LcsStructure::new("r4", lie, omega, Form::zero(4, 1), None).unwrap();
        for k in [qz(-1), qz(0), qz(2)] {
            assert!(verify_bidifferential(&s, &k).all_ok());
            assert!(verify_commutations(&s, &k).all_ok());
        }
        // with θ = 0 the pencil is constant in k
        assert!(s.d_pencil().b.is_zero());
    }

    #[test]
    fn wrong_lee_form_breaks_lefschetz_commutation_only() {
        // θ := e¹ is closed but is not the Lee form of Ω on rh3; the
        // bidifferential anticommutator survives, the L-commutation fails
        let lie = parse_salamon("(0,0,12,0)", 4).unwrap();
        let omega = Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4]));
        let s =
            LcsStructure::new_unchecked("rh3-wrong-theta", lie, omega, Form::generator(4, 1))
                .unwrap();
        let k = qz(1);
        let bid = verify_bidifferential(&s, &k);
        assert!(bid.items[0].ok, "(d_k)² = 0 needs only dθ = 0");
        assert!(bid.items[2].ok, "anticommutator is formal");
        let comm = verify_commutations(&s, &k);
        assert!(!comm.items[0].ok, "Ld_k = d_{{k+1}}L requires dΩ = θ∧Ω");
        assert!(!comm.all_ok());
    }

    #[test]
    fn twisted_leibniz() {
        let s = rh3();
        assert!(twisted_leibniz_check(&s, &qz(0), &qz(0)));
        assert!(twisted_leibniz_check(&s, &qz(2), &qz(1)));
        assert!(twisted_leibniz_check(&s, &qq(-3, 2), &qq(5, 2)));
        // spot value: k=2, h=1, α = e³, β = e⁴
        let d2 = s.d_k(&qz(2));
        let d1 = s.d_k(&qz(1));
        let alpha = Form::generator(4, 3);
        let beta = Form::generator(4, 4);
        let lhs = d2.apply(&s.ext, &wedge(&alpha, &beta));
        let rhs = wedge(&d1.apply(&s.ext, &alpha), &beta)
            .sub(&wedge(&alpha, &d1.apply(&s.ext, &beta)));
        assert_eq!(lhs, rhs);
        let ab = LcsStructure::new(
            "r4",
            LieAlgebra::abelian(4),
            Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4])),
            Form::zero(4, 1),
            None,
        )
        .unwrap();
        assert!(twisted_leibniz_check(&ab, &qz(5), &qz(-3)));
    }

    #[test]
    fn darboux_standard_and_scaled() {
        let ext = ExteriorAlgebra::new(4);
        let std_omega = Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4]));
        let s = darboux_basis(&ext, &std_omega).unwrap();
        assert_eq!(s, QMat::identity(4));
        let ext2 = ExteriorAlgebra::new(2);
        let s2 = darboux_basis(&ext2, &Form::monomial(2, &[1, 2]).scale(&qz(2))).unwrap();
        let mut expect = QMat::identity(2);
        expect[(1, 1)] = qq(1, 2);
        assert_eq!(s2, expect);
    }

    #[test]
    fn darboux_certifies_output_form() {
        let s = ot21();
        let sb = darboux_basis(&s.ext, &s.omega).unwrap();
        let w = skew_matrix(&s.omega);
        let transformed = sb.transpose().mul(&w).mul(&sb);
        let mut w0 = QMat::zeros(6, 6);
        for i in 0..3 {
            w0[(2 * i, 2 * i + 1)] = qz(1);
            w0[(2 * i + 1, 2 * i)] = qz(-1);
        }
        assert_eq!(transformed, w0);
        // degenerate input is refused
        let bad = Form::monomial(6, &[1, 2]);
        assert!(matches!(
            darboux_basis(&s.ext, &bad),
            Err(ExteriorError::DegenerateForm)
        ));
    }

    #[test]
    fn compatible_triples_validate() {
        // the supplied rh3 triple passes the constructor's validator
        let _ = rh3();
        // synthesized triples for d4 and ot21 pass the same validator
        let t = d4();
        assert!(t.triple.is_some() && t.triple_synthesized);
        validate_triple(&t.omega, t.triple.as_ref().unwrap()).unwrap();
        let o = ot21();
        validate_triple(&o.omega, o.triple.as_ref().unwrap()).unwrap();
    }

    #[test]
    fn constructor_rejects_invalid_data() {
        let lie = parse_salamon("(0,0,12,0)", 4).unwrap();
        let omega = Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4]));
        // θ = e¹ is closed on rh3 but is not the Lee form of Ω
        assert!(matches!(
            LcsStructure::new("x", lie.clone(), omega.clone(), Form::generator(4, 1), None),
            Err(LcsError::InvalidStructure(_))
        ));
        // θ not closed on d4: e¹ has de¹ = e^{14}
        let d4 = parse_salamon("(14,-24,-12,0)", 4).unwrap();
        assert!(matches!(
            LcsStructure::new("x", d4, omega.clone(), Form::generator(4, 1), None),
            Err(LcsError::LeeFormNotClosed)
        ));
        // degenerate Ω
        assert!(matches!(
            LcsStructure::new(
                "x",
                lie,
                Form::monomial(4, &[1, 2]),
                Form::generator(4, 4),
                None
            ),
            Err(LcsError::Exterior(ExteriorError::DegenerateForm))
        ));
    }

    #[test]
    fn orthonormal_adjoint_is_transpose() {
        let s = rh3();
        let grams = gram_family(&s.ext, &Metric::standard(4));
        let d = s.d();
        let adj = adjoint_operator(&s.ext, d, &grams);
        assert_eq!(adj.shift, -1);
        for h in 0..=4usize {
            let q = h + 1;
            if q <= 4 {
                assert_eq!(adj.blocks[q], d.blocks[h].transpose());
            }
        }
    }

    #[test]
    fn hodge_adjoint_formula() {
        // d_k^* = −∗d_{−k}∗ with the catalog triple on rh3
        let s = rh3();
        let t = s.triple.as_ref().unwrap();
        let star = hodge_star(&s.ext, &t.g).unwrap();
        let grams = gram_family(&s.ext, &t.g);
        for k in [qz(-2), qz(0), qz(1), qq(3, 2)] {
            let adj = adjoint_operator(&s.ext, &s.d_k(&k), &grams);
            let conj = star.conjugate(&s.ext, &s.d_k(&(-&k)), |_| -Q::one());
            assert_eq!(adj, conj, "k = {k}");
        }
    }

    #[test]
    fn delta_equals_star_conjugate_and_dc_adjoint() {
        // δ_k|∧^h = (−1)^h ⋆d_{n+k−h}⋆ = (d^c_{−(n+k−h)})^*
        for s in [rh3(), d4()] {
            let (t, _) = s.triple_or_synthesized().unwrap();
            let star = symplectic_star(&s.ext, &s.omega).unwrap();
            let grams = gram_family(&s.ext, &t.g);
            let n = s.n as i64;
            for k in [qz(-1), qz(0), qz(2), qq(1, 2)] {
                let delta = s.delta_k(&k);
                for h in 0..=s.ext.dim {
                    let ell = &k + qz(n) - qz(h as i64);
                    // star path
                    let conj = star.conjugate(&s.ext, &s.d_k(&ell), |deg| {
                        if deg % 2 == 0 {
                            Q::one()
                        } else {
                            -Q::one()
                        }
                    });
                    assert_eq!(delta.blocks[h], conj.blocks[h], "{}: star path", s.name);
                    // metric path through d^c
                    let dc = dc_operator(&s, &t.j, &-&ell);
                    let adj = adjoint_operator(&s.ext, &dc, &grams);
                    assert_eq!(delta.blocks[h], adj.blocks[h], "{}: dc path", s.name);
                }
            }
        }
    }
}
