//! The four cohomologies of the twisted complexes of an lcs Lie algebra
//! and everything computed from them: the natural-map diagram, harmonic
//! (Laplacian) cross-checks, the star dualities, hard Lefschetz
//! diagnostics and the critical weights where dimensions can jump.
//!
//! All subspaces are column spans over ℚ in the monomial coordinates of
//! each ∧^h; quotients are realized as orthogonal complements of the
//! coboundary space inside the cocycle space under the standard dot
//! product, so representatives are canonical and exact.

use std::fmt;

use num::One;
use thiserror::Error;

use crate::exterior::{
    hodge_star, symplectic_star, ExteriorAlgebra, ExteriorError, Form, GradedOperator,
};
use crate::lcs::{adjoint_operator, gram_family, LcsError, LcsStructure, OperatorPencil};
use crate::liealg::is_unimodular;
use crate::linalg::{
    col_span_basis, complement_basis, span_contains, span_dim, span_eq, span_intersect, span_sum,
    QMat,
};
use crate::qpoly::{rank_drop_weights, PMat, QPoly};
use crate::report::{CheckItem, CheckReport};
use crate::scalar::{fmt_q, qz, Q};

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("the algebra is not unimodular, so it has no invariant volume pairing and the duality statement does not apply")]
    NotUnimodular,
    #[error("the form is not closed under the weight-{0} differential")]
    ClassNotClosed(String),
    #[error("offset {h} exceeds n = {n}: the statement pairs degrees n−h and n+h")]
    OffsetOutOfRange { h: usize, n: usize },
    #[error(transparent)]
    Lcs(#[from] LcsError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

/// The four cohomology theories of the weight-k twisted complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    /// `ker d_k / im d_k` (Morse–Novikov at weight k).
    DeRham,
    /// `ker δ_k / im δ_{k+1}`.
    Delta,
    /// Bott–Chern type: `(ker d_k ∩ ker δ_k) / im δ_{k+1}d_{k+1}`.
    BottChern,
    /// Aeppli type: `ker δ_kd_k / (im d_k + im δ_{k+1})`.
    Aeppli,
}

impl Theory {
    pub const ALL: [Theory; 4] = [
        Theory::DeRham,
        Theory::Delta,
        Theory::BottChern,
        Theory::Aeppli,
    ];

    /// Short label used in tables, CSV output and on the command line.
    pub fn short_name(self) -> &'static str {
        match self {
            Theory::DeRham => "d",
            Theory::Delta => "delta",
            Theory::BottChern => "bc",
            Theory::Aeppli => "a",
        }
    }

    pub fn parse(s: &str) -> Option<Theory> {
        match s.trim().to_ascii_lowercase().as_str() {
            "d" | "derham" | "de-rham" | "mn" | "morse-novikov" => Some(Theory::DeRham),
            "delta" => Some(Theory::Delta),
            "bc" | "bott-chern" => Some(Theory::BottChern),
            "a" | "aeppli" => Some(Theory::Aeppli),
            _ => None,
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// One cohomology space H^h at weight k: its exact dimension and a basis
/// of representatives, each orthogonal to the coboundary subspace under
/// the monomial inner product. Published spans are compared by span
/// equality; individual coefficients are an artifact of the reduction.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub theory: Theory,
    pub degree: usize,
    pub weight: Q,
    pub dimension: usize,
    pub representatives: Vec<Form>,
}

/// Cocycle and coboundary bases of one (theory, h, k) cell, as column
/// spans in the monomial coordinates of ∧^h.
struct Cell {
    numerator: QMat,
    denominator: QMat,
}

/// Empty spans coming out of `from_cols`-based helpers collapse to 0×0
/// and lose the ambient row count; pin it back so stacking stays legal.
fn with_ambient(m: QMat, ambient: usize) -> QMat {
    if m.cols() == 0 {
        QMat::empty_span(ambient)
    } else {
        m
    }
}

/// Column span of the `src → src+shift` block, or the empty span in the
/// ambient target coordinates when the source degree is out of range.
fn image_of(op: &GradedOperator, src: isize, ambient: usize) -> QMat {
    if src < 0 || src as usize >= op.blocks.len() {
        return QMat::empty_span(ambient);
    }
    with_ambient(col_span_basis(&op.blocks[src as usize]), ambient)
}

fn cell(s: &LcsStructure, theory: Theory, h: usize, k: &Q) -> Cell {
    let ext = &s.ext;
    if h > ext.dim {
        return Cell {
            numerator: QMat::empty_span(0),
            denominator: QMat::empty_span(0),
        };
    }
    let rows = ext.rank(h as isize);
    let k1 = k.clone() + Q::one();
    let c = match theory {
        Theory::DeRham => {
            let dk = s.d_k(k);
            Cell {
                numerator: dk.block(h).kernel_basis(),
                denominator: image_of(&dk, h as isize - 1, rows),
            }
        }
        Theory::Delta => Cell {
            numerator: s.delta_k(k).block(h).kernel_basis(),
            denominator: image_of(&s.delta_k(&k1), h as isize + 1, rows),
        },
        Theory::BottChern => {
            let dk = s.d_k(k);
            let dd1 = s.delta_k(&k1).compose(&s.d_k(&k1), ext);
            Cell {
                numerator: dk.block(h).vstack(s.delta_k(k).block(h)).kernel_basis(),
                denominator: image_of(&dd1, h as isize, rows),
            }
        }
        Theory::Aeppli => {
            let dk = s.d_k(k);
            let dd = s.delta_k(k).compose(&dk, ext);
            Cell {
                numerator: dd.block(h).kernel_basis(),
                denominator: with_ambient(
                    span_sum(
                        &image_of(&dk, h as isize - 1, rows),
                        &image_of(&s.delta_k(&k1), h as isize + 1, rows),
                    ),
                    rows,
                ),
            }
        }
    };
    Cell {
        numerator: with_ambient(c.numerator, rows),
        denominator: c.denominator,
    }
}

impl Cell {
    /// Canonical representative basis: the orthogonal complement of the
    /// coboundaries inside the cocycles.
    fn representatives(&self, ambient: usize) -> QMat {
        with_ambient(
            complement_basis(&self.numerator, &self.denominator),
            ambient,
        )
    }

    fn quotient_dim(&self) -> usize {
        span_dim(&self.numerator) - span_dim(&self.denominator)
    }
}

/// Computes H^h at weight k in the requested theory.
pub fn cohomology(s: &LcsStructure, theory: Theory, h: usize, k: &Q) -> CohomologyGroup {
    if h > s.ext.dim {
        return CohomologyGroup {
            theory,
            degree: h,
            weight: k.clone(),
            dimension: 0,
            representatives: Vec::new(),
        };
    }
    let c = cell(s, theory, h, k);
    debug_assert!(
        crate::linalg::span_subset(&c.denominator, &c.numerator),
        "coboundaries must be cocycles"
    );
    let reps = c.representatives(s.ext.rank(h as isize));
    let representatives: Vec<Form> = (0..reps.cols())
        .map(|j| s.ext.from_vec(h, &reps.col(j)))
        .collect();
    CohomologyGroup {
        theory,
        degree: h,
        weight: k.clone(),
        dimension: representatives.len(),
        representatives,
    }
}

/// A full grid of cohomology groups over a weight list.
#[derive(Clone, Debug)]
pub struct CohomologyTable {
    pub name: String,
    pub weights: Vec<Q>,
    pub groups: Vec<CohomologyGroup>,
    /// Where the compatible triple would come from for harmonic
    /// cross-checks on this structure: "supplied", "synthesized" or
    /// "none". Cohomology itself never touches the triple; the tag
    /// travels with exported tables so star and Laplacian runs can be
    /// reproduced.
    pub triple_provenance: String,
}

impl CohomologyTable {
    pub fn get(&self, theory: Theory, h: usize, k: &Q) -> Option<&CohomologyGroup> {
        self.groups
            .iter()
            .find(|g| g.theory == theory && g.degree == h && &g.weight == k)
    }

    /// Dimension of a cell, zero when the cell is outside the grid.
    pub fn dimension(&self, theory: Theory, h: usize, k: &Q) -> usize {
        self.get(theory, h, k).map_or(0, |g| g.dimension)
    }
}

/// Every (theory, degree, weight) cell over the given weights.
///
/// Asserts Σ_h (−1)^h dim H^h_{d_k} = 0 for each weight: the twisted
/// complex runs over the same spaces ∧^0, …, ∧^{2n} for every k, so by
/// rank-nullity the alternating sum collapses to Σ (−1)^h dim ∧^h =
/// (1−1)^{2n} = 0 regardless of k.
pub fn full_table(s: &LcsStructure, weights: &[Q]) -> CohomologyTable {
    let mut groups = Vec::new();
    for k in weights {
        let mut euler = 0isize;
        for h in 0..=s.ext.dim {
            for theory in Theory::ALL {
                let g = cohomology(s, theory, h, k);
                if theory == Theory::DeRham {
                    let signed = g.dimension as isize;
                    euler += if h % 2 == 0 { signed } else { -signed };
                }
                groups.push(g);
            }
        }
        assert_eq!(
            euler,
            0,
            "Euler characteristic of the d-pencil complex must vanish at weight {}",
            fmt_q(k)
        );
    }
    let triple_provenance = match (&s.triple, s.triple_synthesized) {
        (Some(_), true) => "synthesized",
        (Some(_), false) => "supplied",
        (None, _) => "none",
    };
    CohomologyTable {
        name: s.name.clone(),
        weights: weights.to_vec(),
        groups,
        triple_provenance: triple_provenance.to_owned(),
    }
}

/// Rank data of one identity-induced map between two theories at the
/// same (h, k).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InducedMap {
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl InducedMap {
    pub fn injective(&self) -> bool {
        self.rank == self.source_dim
    }

    pub fn surjective(&self) -> bool {
        self.rank == self.target_dim
    }

    pub fn isomorphism(&self) -> bool {
        self.injective() && self.surjective()
    }
}

/// Ranks of the five maps induced by the identity at one (h, k):
/// Bott–Chern into the d, δ and Aeppli theories, and d/δ into Aeppli.
#[derive(Clone, Debug)]
pub struct NaturalMapReport {
    pub degree: usize,
    pub weight: Q,
    pub bc_to_d: InducedMap,
    pub bc_to_delta: InducedMap,
    pub bc_to_a: InducedMap,
    pub d_to_a: InducedMap,
    pub delta_to_a: InducedMap,
}

/// Rank of the map sending a class of `source` to its class in `target`,
/// assuming (as the pencil identities guarantee for the five diagram
/// maps) that source cocycles and coboundaries land in the target ones.
fn induced_rank(source: &Cell, target: &Cell, ambient: usize) -> InducedMap {
    let reps = source.representatives(ambient);
    let den_dim = span_dim(&target.denominator);
    let rank = span_dim(&span_sum(&reps, &target.denominator)) - den_dim;
    InducedMap {
        source_dim: reps.cols(),
        target_dim: target.quotient_dim(),
        rank,
    }
}

pub fn natural_maps(s: &LcsStructure, h: usize, k: &Q) -> NaturalMapReport {
    let ambient = s.ext.rank(h as isize);
    let bc = cell(s, Theory::BottChern, h, k);
    let d = cell(s, Theory::DeRham, h, k);
    let delta = cell(s, Theory::Delta, h, k);
    let a = cell(s, Theory::Aeppli, h, k);
    NaturalMapReport {
        degree: h,
        weight: k.clone(),
        bc_to_d: induced_rank(&bc, &d, ambient),
        bc_to_delta: induced_rank(&bc, &delta, ambient),
        bc_to_a: induced_rank(&bc, &a, ambient),
        d_to_a: induced_rank(&d, &a, ambient),
        delta_to_a: induced_rank(&delta, &a, ambient),
    }
}

/// Verdict of the δ_kd_k-Lemma at one weight: the identity-induced map
/// from the Bott–Chern to the Aeppli theory must be injective in every
/// degree.
#[derive(Clone, Debug)]
pub struct LemmaVerdict {
    pub weight: Q,
    pub per_degree: Vec<bool>,
    pub holds: bool,
}

pub fn satisfies_lemma(s: &LcsStructure, k: &Q) -> LemmaVerdict {
    let per_degree: Vec<bool> = (0..=s.ext.dim)
        .map(|h| {
            let bc = cell(s, Theory::BottChern, h, k);
            let a = cell(s, Theory::Aeppli, h, k);
            induced_rank(&bc, &a, s.ext.rank(h as isize)).injective()
        })
        .collect();
    let holds = per_degree.iter().all(|&b| b);
    LemmaVerdict {
        weight: k.clone(),
        per_degree,
        holds,
    }
}

/// Kernel dimensions of the four weight-k Laplacians at degree h, in the
/// order (d, δ, Bott–Chern, Aeppli).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LaplacianKernels {
    pub de_rham: usize,
    pub delta: usize,
    pub bott_chern: usize,
    pub aeppli: usize,
}

/// Assembles the four Laplacians of the weight-k complex with adjoints
/// taken against the metric of the structure's triple (synthesizing one
/// if needed) and returns the kernel dimension of each degree-h block:
///
/// * Δ_{d_k} = d_kd_k^* + d_k^*d_k
/// * Δ_{δ_k} = δ_k^*δ_k + δ_{k+1}δ_{k+1}^*
/// * Δ_{d_k+δ_k} = d_k^*d_k + δ_k^*δ_k + (δ_{k+1}d_{k+1})(δ_{k+1}d_{k+1})^*
///   + (δ_kd_k)^*(δ_kd_k) + (d_k^*δ_{k+1})(d_k^*δ_{k+1})^* + (d_{k−1}^*δ_k)^*(d_{k−1}^*δ_k)
/// * Δ_{δ_kd_k} = d_kd_k^* + δ_{k+1}δ_{k+1}^* + (δ_kd_k)^*(δ_kd_k)
///   + (δ_{k+1}d_{k+1})(δ_{k+1}d_{k+1})^* + (δ_{k+1}d_{k+1}^*)(δ_{k+1}d_{k+1}^*)^* + (d_kδ_k^*)(d_kδ_k^*)^*
///
/// Each kernel dimension equals the corresponding quotient dimension for
/// any positive definite inner product; that equality is what the
/// cross-check tests assert.
pub fn laplacian_kernels(
    s: &LcsStructure,
    h: usize,
    k: &Q,
) -> Result<LaplacianKernels, CohomologyError> {
    let ext = &s.ext;
    if h > ext.dim {
        return Ok(LaplacianKernels {
            de_rham: 0,
            delta: 0,
            bott_chern: 0,
            aeppli: 0,
        });
    }
    let (triple, _) = s.triple_or_synthesized()?;
    let grams = gram_family(ext, &triple.g);
    let adj = |op: &GradedOperator| adjoint_operator(ext, op, &grams);
    let comp = |a: &GradedOperator, b: &GradedOperator| a.compose(b, ext);

    let km1 = k.clone() - Q::one();
    let kp1 = k.clone() + Q::one();
    let d_km1 = s.d_k(&km1);
    let dk = s.d_k(k);
    let dk1 = s.d_k(&kp1);
    let del_k = s.delta_k(k);
    let del_k1 = s.delta_k(&kp1);

    let dk_star = adj(&dk);
    let dk1_star = adj(&dk1);
    let d_km1_star = adj(&d_km1);
    let del_k_star = adj(&del_k);
    let del_k1_star = adj(&del_k1);

    let lap_d = comp(&dk, &dk_star).add(&comp(&dk_star, &dk));
    let lap_delta = comp(&del_k_star, &del_k).add(&comp(&del_k1, &del_k1_star));

    let dd1 = comp(&del_k1, &dk1);
    let dd = comp(&del_k, &dk);
    let bc5 = comp(&dk_star, &del_k1);
    let bc6 = comp(&d_km1_star, &del_k);
    let lap_bc = comp(&dk_star, &dk)
        .add(&comp(&del_k_star, &del_k))
        .add(&comp(&dd1, &adj(&dd1)))
        .add(&comp(&adj(&dd), &dd))
        .add(&comp(&bc5, &adj(&bc5)))
        .add(&comp(&adj(&bc6), &bc6));

    let a5 = comp(&del_k1, &dk1_star);
    let a6 = comp(&dk, &del_k_star);
    let lap_a = comp(&dk, &dk_star)
        .add(&comp(&del_k1, &del_k1_star))
        .add(&comp(&adj(&dd), &dd))
        .add(&comp(&dd1, &adj(&dd1)))
        .add(&comp(&a5, &adj(&a5)))
        .add(&comp(&a6, &adj(&a6)));

    let nullity = |op: &GradedOperator| {
        let b = op.block(h);
        b.cols() - b.rank()
    };
    Ok(LaplacianKernels {
        de_rham: nullity(&lap_d),
        delta: nullity(&lap_delta),
        bott_chern: nullity(&lap_bc),
        aeppli: nullity(&lap_a),
    })
}

fn cell_label(theory: Theory, h: usize, k: &Q) -> String {
    format!("H^{}_{{{},{}}}", h, theory.short_name(), fmt_q(k))
}

/// Checks that the given block matrix ∧^{source degree} → ∧^{target
/// degree} induces an isomorphism between the two cohomology cells:
/// dimension equality, images landing in target cocycles, and the
/// induced map having full rank.
fn iso_items(
    s: &LcsStructure,
    map_name: &str,
    block: &QMat,
    source: (Theory, usize, Q),
    target: (Theory, usize, Q),
) -> Vec<CheckItem> {
    let (st, sh, sk) = source;
    let (tt, th, tk) = target;
    let src = cell(s, st, sh, &sk);
    let tgt = cell(s, tt, th, &tk);
    let reps = src.representatives(s.ext.rank(sh as isize));
    let src_dim = reps.cols();
    let tgt_den_dim = span_dim(&tgt.denominator);
    let tgt_dim = tgt.quotient_dim();
    let prefix = format!(
        "{map_name}: {} -> {}",
        cell_label(st, sh, &sk),
        cell_label(tt, th, &tk)
    );
    let mut items = Vec::new();
    items.push(CheckItem::from_bool(
        &format!("{prefix}: dimensions agree"),
        src_dim == tgt_dim,
        &format!("source dim {src_dim}, target dim {tgt_dim}"),
    ));
    let mapped = block.mul(&reps);
    let closed = (0..mapped.cols()).all(|j| span_contains(&tgt.numerator, &mapped.col(j)));
    items.push(CheckItem::from_bool(
        &format!("{prefix}: images are cocycles"),
        closed,
        "a mapped representative violates the target closedness conditions",
    ));
    let rank = span_dim(&span_sum(&mapped, &tgt.denominator)) - tgt_den_dim;
    items.push(CheckItem::from_bool(
        &format!("{prefix}: induced map bijective"),
        rank == src_dim && rank == tgt_dim,
        &format!("rank {rank} against source {src_dim}, target {tgt_dim}"),
    ));
    items
}

fn require_offset(h: usize, n: usize) -> Result<(), CohomologyError> {
    if h > n {
        Err(CohomologyError::OffsetOutOfRange { h, n })
    } else {
        Ok(())
    }
}

fn require_unimodular(s: &LcsStructure) -> Result<(), CohomologyError> {
    if is_unimodular(&s.lie) {
        Ok(())
    } else {
        Err(CohomologyError::NotUnimodular)
    }
}

/// Duality through the symplectic star: ⋆ must induce an isomorphism
/// `H^{n−h}_{d_k} → H^{n+h}_{δ_{k+h}}`.
///
/// Gated on unimodularity: the pairing argument behind the statement
/// needs an invariant volume, which exists exactly when every adjoint
/// action is traceless. On a non-unimodular algebra a failure would be
/// noise, so the check refuses to run instead.
pub fn poincare_symplectic(
    s: &LcsStructure,
    h: usize,
    k: &Q,
) -> Result<CheckReport, CohomologyError> {
    let n = s.n;
    require_offset(h, n)?;
    require_unimodular(s)?;
    let star = symplectic_star(&s.ext, &s.omega)?;
    let mut report = CheckReport::new(&format!(
        "symplectic star duality on {} at offset {h}, weight {}",
        s.name,
        fmt_q(k)
    ));
    for item in iso_items(
        s,
        "star",
        star.block(n - h),
        (Theory::DeRham, n - h, k.clone()),
        (Theory::Delta, n + h, k.clone() + qz(h as i64)),
    ) {
        report.push(item);
    }
    Ok(report)
}

/// The two dualities through the Hodge star of the compatible metric:
/// `∗: H^{n−h}_{d_k} → H^{n+h}_{d_{−k}}` and
/// `∗: H^{n−h}_{δ_{−k−h}} → H^{n+h}_{δ_{k+h}}`. Unimodular only.
pub fn poincare_hodge(s: &LcsStructure, h: usize, k: &Q) -> Result<CheckReport, CohomologyError> {
    let n = s.n;
    require_offset(h, n)?;
    require_unimodular(s)?;
    let (triple, _) = s.triple_or_synthesized()?;
    let star = hodge_star(&s.ext, &triple.g)?;
    let mut report = CheckReport::new(&format!(
        "hodge star dualities on {} at offset {h}, weight {}",
        s.name,
        fmt_q(k)
    ));
    for item in iso_items(
        s,
        "hodge star",
        star.block(n - h),
        (Theory::DeRham, n - h, k.clone()),
        (Theory::DeRham, n + h, -k.clone()),
    ) {
        report.push(item);
    }
    let kh = k.clone() + qz(h as i64);
    for item in iso_items(
        s,
        "hodge star",
        star.block(n - h),
        (Theory::Delta, n - h, -kh.clone()),
        (Theory::Delta, n + h, kh),
    ) {
        report.push(item);
    }
    Ok(report)
}

/// Duality between the Bott–Chern and Aeppli theories through the Hodge
/// star: `∗: H^{n−h}_{bc,k} → H^{n+h}_{a,−k}`. Unimodular only.
pub fn duality_bc_aeppli(
    s: &LcsStructure,
    h: usize,
    k: &Q,
) -> Result<CheckReport, CohomologyError> {
    let n = s.n;
    require_offset(h, n)?;
    require_unimodular(s)?;
    let (triple, _) = s.triple_or_synthesized()?;
    let star = hodge_star(&s.ext, &triple.g)?;
    let mut report = CheckReport::new(&format!(
        "bott-chern/aeppli duality on {} at offset {h}, weight {}",
        s.name,
        fmt_q(k)
    ));
    for item in iso_items(
        s,
        "hodge star",
        star.block(n - h),
        (Theory::BottChern, n - h, k.clone()),
        (Theory::Aeppli, n + h, -k.clone()),
    ) {
        report.push(item);
    }
    Ok(report)
}

/// Hard Lefschetz on the Bott–Chern and Aeppli theories:
/// `L^h: H^{n−h}_{bc,k} → H^{n+h}_{bc,k+h}` and likewise on the Aeppli
/// side. Holds for every lcs structure, no unimodularity needed.
pub fn hlc_bc_aeppli(s: &LcsStructure, h: usize, k: &Q) -> Result<CheckReport, CohomologyError> {
    let n = s.n;
    require_offset(h, n)?;
    let lh = s.lefschetz_l().power(h, &s.ext);
    let kh = k.clone() + qz(h as i64);
    let mut report = CheckReport::new(&format!(
        "hard Lefschetz on bott-chern/aeppli for {} at offset {h}, weight {}",
        s.name,
        fmt_q(k)
    ));
    for item in iso_items(
        s,
        "L^h",
        lh.block(n - h),
        (Theory::BottChern, n - h, k.clone()),
        (Theory::BottChern, n + h, kh.clone()),
    ) {
        report.push(item);
    }
    for item in iso_items(
        s,
        "L^h",
        lh.block(n - h),
        (Theory::Aeppli, n - h, k.clone()),
        (Theory::Aeppli, n + h, kh),
    ) {
        report.push(item);
    }
    Ok(report)
}

/// One failing cell of the hard Lefschetz test on the d-pencil.
#[derive(Clone, Debug)]
pub struct HlcWitness {
    pub offset: usize,
    pub weight: Q,
    pub source_dim: usize,
    pub target_dim: usize,
}

/// Outcome of the hard Lefschetz sweep on the d-pencil: `L^h` as a map
/// `H^{n−h}_{d_k} → H^{n+h}_{d_{k+h}}` over every offset and grid weight.
#[derive(Clone, Debug)]
pub struct HlcCheck {
    pub holds: bool,
    pub cells_tested: usize,
    pub witness: Option<HlcWitness>,
}

/// Sweeps hard Lefschetz on the d-pencil. For structures with a nonzero
/// Lee form this must fail, and (h, k) = (n, −n) is the canonical
/// witness whenever the grid contains −n: `H^0_{d_{−n}}` vanishes
/// because constants are never d_{−n}-closed when θ ≠ 0, while the top
/// degree at weight 0 survives on unimodular algebras. The canonical
/// witness is preferred; otherwise the first failing cell is reported.
pub fn lcs_hlc_check(s: &LcsStructure, weights: &[Q]) -> HlcCheck {
    let n = s.n;
    let ext = &s.ext;
    let mut cells_tested = 0;
    let mut failures: Vec<HlcWitness> = Vec::new();
    for h in 0..=n {
        let lh = s.lefschetz_l().power(h, ext);
        for k in weights {
            cells_tested += 1;
            let src = cell(s, Theory::DeRham, n - h, k);
            let tgt = cell(s, Theory::DeRham, n + h, &(k.clone() + qz(h as i64)));
            let reps = src.representatives(ext.rank((n - h) as isize));
            let src_dim = reps.cols();
            let tgt_den_dim = span_dim(&tgt.denominator);
            let tgt_dim = tgt.quotient_dim();
            let mapped = lh.block(n - h).mul(&reps);
            let rank = span_dim(&span_sum(&mapped, &tgt.denominator)) - tgt_den_dim;
            if src_dim != tgt_dim || rank != src_dim {
                failures.push(HlcWitness {
                    offset: h,
                    weight: k.clone(),
                    source_dim: src_dim,
                    target_dim: tgt_dim,
                });
            }
        }
    }
    let canonical = failures
        .iter()
        .find(|w| w.offset == n && w.weight == qz(-(n as i64)))
        .cloned();
    HlcCheck {
        holds: failures.is_empty(),
        cells_tested,
        witness: canonical.or_else(|| failures.first().cloned()),
    }
}

/// Decides whether the d_k-class of `alpha` contains a δ_k-closed
/// representative: exact feasibility of δ_k(α + d_kβ) = 0 over β.
/// The input must be d_k-closed.
pub fn has_delta_closed_representative(
    s: &LcsStructure,
    alpha: &Form,
    k: &Q,
) -> Result<bool, CohomologyError> {
    let ext = &s.ext;
    let dk = s.d_k(k);
    if !dk.apply(ext, alpha).is_zero() {
        return Err(CohomologyError::ClassNotClosed(fmt_q(k)));
    }
    let del = s.delta_k(k);
    let rhs = del.apply(ext, alpha);
    if rhs.is_zero() {
        return Ok(true);
    }
    // δ_kd_k β = −δ_k α over β ∈ ∧^{h−1}; rhs nonzero forces h ≥ 1.
    let system = del.compose(&dk, ext);
    let b: Vec<Q> = ext.to_vec(&rhs).into_iter().map(|x| -x).collect();
    Ok(system.block(alpha.degree - 1).solve(&b).is_some())
}

/// Diagnostic for the two subspace equalities tying the pencils together
/// at degree h: `im δ_{k+1} ∩ ker d_k` and `im d_k ∩ ker δ_k`, both
/// compared against `im d_k ∩ im δ_{k+1}`. They are theorems when hard
/// Lefschetz holds and can genuinely fail without it, so the outcome is
/// reported, never asserted.
pub fn verify_image_equalities(s: &LcsStructure, h: usize, k: &Q) -> CheckReport {
    let ext = &s.ext;
    let mut report = CheckReport::new(&format!(
        "image equalities on {} at degree {h}, weight {}",
        s.name,
        fmt_q(k)
    ));
    if h > ext.dim {
        report.push(CheckItem::pass("degree outside the algebra: all spaces trivial"));
        return report;
    }
    let rows = ext.rank(h as isize);
    let dk = s.d_k(k);
    let del1 = s.delta_k(&(k.clone() + Q::one()));
    let im_d = image_of(&dk, h as isize - 1, rows);
    let im_del1 = image_of(&del1, h as isize + 1, rows);
    let ker_d = with_ambient(dk.block(h).kernel_basis(), rows);
    let ker_del = with_ambient(s.delta_k(k).block(h).kernel_basis(), rows);
    let both = with_ambient(span_intersect(&im_d, &im_del1), rows);
    let left = with_ambient(span_intersect(&im_del1, &ker_d), rows);
    let right = with_ambient(span_intersect(&im_d, &ker_del), rows);
    report.push(CheckItem::from_bool(
        "im δ_{k+1} ∩ ker d_k = im d_k ∩ im δ_{k+1}",
        span_eq(&left, &both),
        &format!("dims {} vs {}", span_dim(&left), span_dim(&both)),
    ));
    report.push(CheckItem::from_bool(
        "im d_k ∩ ker δ_k = im d_k ∩ im δ_{k+1}",
        span_eq(&right, &both),
        &format!("dims {} vs {}", span_dim(&right), span_dim(&both)),
    ));
    report
}

/// A graded-operator family polynomial in the weight, k ↦ Σ coeffs[i]·k^i.
/// The affine pencils and their composites (quadratic in k) both fit.
struct WeightFamily {
    coeffs: Vec<GradedOperator>,
}

impl WeightFamily {
    fn from_pencil(p: &OperatorPencil) -> Self {
        WeightFamily {
            coeffs: vec![p.a.clone(), p.b.clone()],
        }
    }

    fn compose(&self, other: &WeightFamily, ext: &ExteriorAlgebra) -> Self {
        let shift = self.coeffs[0].shift + other.coeffs[0].shift;
        let deg = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs: Vec<GradedOperator> =
            (0..deg).map(|_| GradedOperator::zero(ext, shift)).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.compose(b, ext));
            }
        }
        WeightFamily { coeffs }
    }

    /// Substitution k ↦ k + t by binomial expansion.
    fn shift_weight(&self, t: &Q) -> Self {
        let len = self.coeffs.len();
        let mut coeffs = Vec::with_capacity(len);
        for j in 0..len {
            let mut acc = self.coeffs[j].clone();
            let mut tp = t.clone();
            for i in (j + 1)..len {
                acc = acc.add(&self.coeffs[i].scale(&(binom(i, j) * tp.clone())));
                tp *= t.clone();
            }
            coeffs.push(acc);
        }
        WeightFamily { coeffs }
    }

    /// The degree-h block as a matrix of polynomials in the weight.
    fn block(&self, h: usize) -> PMat {
        let rows = self.coeffs[0].blocks[h].rows();
        let cols = self.coeffs[0].blocks[h].cols();
        let mut m = PMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let entry: Vec<Q> = self
                    .coeffs
                    .iter()
                    .map(|op| op.blocks[h][(r, c)].clone())
                    .collect();
                m.set(r, c, QPoly::from_coeffs(entry));
            }
        }
        m
    }
}

fn binom(n: usize, k: usize) -> Q {
    let mut out = 1u64;
    for i in 0..k.min(n - k) {
        out = out * (n - i) as u64 / (i + 1) as u64;
    }
    qz(out as i64)
}

/// The polynomial matrices whose rank drops drive dimension jumps of the
/// theory: cocycle and coboundary blocks of every degree, expressed in
/// the weight variable.
fn weight_families(s: &LcsStructure, theory: Theory) -> Vec<PMat> {
    let ext = &s.ext;
    let m = ext.dim;
    let d = WeightFamily::from_pencil(&s.d_pencil());
    let del = WeightFamily::from_pencil(&s.delta_pencil());
    let mut out = Vec::new();
    match theory {
        Theory::DeRham => {
            for h in 0..m {
                out.push(d.block(h));
            }
        }
        Theory::Delta => {
            let del1 = del.shift_weight(&Q::one());
            for h in 1..=m {
                out.push(del.block(h));
                out.push(del1.block(h));
            }
        }
        Theory::BottChern => {
            let dd1 = del
                .shift_weight(&Q::one())
                .compose(&d.shift_weight(&Q::one()), ext);
            for h in 0..=m {
                out.push(PMat::stack(&d.block(h), &del.block(h)));
                out.push(dd1.block(h));
            }
        }
        Theory::Aeppli => {
            let del1 = del.shift_weight(&Q::one());
            let dd = del.compose(&d, ext);
            for h in 0..=m {
                out.push(dd.block(h));
                match (h >= 1, h + 1 <= m) {
                    (true, true) => out.push(PMat::concat(&d.block(h - 1), &del1.block(h + 1))),
                    (true, false) => out.push(d.block(h - 1)),
                    (false, true) => out.push(del1.block(h + 1)),
                    (false, false) => {}
                }
            }
        }
    }
    out
}

/// Every rational weight where some cohomology dimension of the listed
/// theories can jump, plus the symbolic leftovers.
#[derive(Clone, Debug, Default)]
pub struct CriticalWeights {
    pub weights: Vec<Q>,
    /// Non-linear factors of the minor gcds that resisted factorization
    /// into rational roots, printed as primitive integer polynomials in
    /// the weight. Rational roots cannot hide in these, but irrational
    /// algebraic critical weights could; they are reported rather than
    /// silently dropped.
    pub unresolved: Vec<String>,
}

/// Rational critical weights of the listed theories (union).
///
/// Away from the returned set, every relevant cocycle/coboundary matrix
/// keeps its generic rank, so all dimensions are locally constant:
/// jumps happen only at rational roots of the last invariant factor of
/// each polynomial block, and those are collected exhaustively.
pub fn critical_weights(s: &LcsStructure, theories: &[Theory]) -> CriticalWeights {
    let mut weights: Vec<Q> = Vec::new();
    let mut unresolved: Vec<String> = Vec::new();
    for &t in theories {
        for fam in weight_families(s, t) {
            let (mut w, mut u) = rank_drop_weights(&fam);
            weights.append(&mut w);
            unresolved.append(&mut u);
        }
    }
    weights.sort();
    weights.dedup();
    unresolved.sort();
    unresolved.dedup();
    CriticalWeights {
        weights,
        unresolved,
    }
}

/// Default weight grid: the integers −n..n, widened until every rational
/// critical weight of every theory lies inside, with non-integer
/// critical weights included as extra grid points.
pub fn default_weights(s: &LcsStructure) -> Vec<Q> {
    let cw = critical_weights(s, &Theory::ALL);
    let mut lo = -qz(s.n as i64);
    let mut hi = qz(s.n as i64);
    for w in &cw.weights {
        lo = lo.min(w.floor());
        hi = hi.max(w.ceil());
    }
    let mut out: Vec<Q> = Vec::new();
    let mut cursor = lo;
    while cursor <= hi {
        out.push(cursor.clone());
        cursor += Q::one();
    }
    out.extend(cw.weights.iter().cloned());
    out.sort();
    out.dedup();
    out
}
