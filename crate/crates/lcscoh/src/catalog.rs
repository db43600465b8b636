//! Built-in example structures and their published cohomology tables.
//!
//! The catalog carries three entries. `rh3` is the four-dimensional
//! nilpotent algebra `(0,0,12,0)` with Ω = e¹²+e³⁴ and θ = e⁴, together
//! with its standard almost-Kähler triple. `d4` is the solvable algebra
//! `(14,-24,-12,0)` with the same Ω and θ = −e⁴. `ot21` is a
//! six-dimensional solvable algebra in two rational parameters c₁, c₂
//! with Ω = 2e¹³+e¹⁴+e²³+2e²⁴+e⁵⁶ and θ = e¹+e²; when c₁ ≠ c₂ it also
//! admits the opposite Lee form −e¹−e², selected by
//! [`CatalogParams::negative_lee`].
//!
//! Every entry ships with the known dimension grid (and representative
//! spans where recorded) as a JSON document under `data/`, in the same
//! [`TableDoc`] schema the exporter writes, so `golden_diff` can compare
//! a computed table against its reference cell by cell.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{CohomologyGroup, CohomologyTable, Theory};
use crate::exterior::{
    AlmostComplexStructure, ExteriorAlgebra, ExteriorError, Form, Metric, MultiIndex,
};
use crate::lcs::{LcsError, LcsStructure, Triple};
use crate::liealg::{
    check_jacobi, parse_salamon, pretty_salamon, AlgebraBundle, LieAlgError, LieAlgebra,
};
use crate::linalg::{span_eq, QMat};
use crate::scalar::{fmt_q, parse_q, qq, qz, Q};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`; available: rh3, d4, ot21")]
    UnknownEntry(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("table grids differ: {0}")]
    GridMismatch(String),
    #[error("malformed table document: {0}")]
    BadTable(String),
    #[error(transparent)]
    Lcs(#[from] LcsError),
    #[error(transparent)]
    LieAlg(#[from] LieAlgError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

pub const BUILTIN_NAMES: [&str; 3] = ["rh3", "d4", "ot21"];

/// Rational parameters accepted by [`builtin`]. Only `ot21` consumes
/// them; the four-dimensional entries reject anything non-default.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogParams {
    pub c1: Q,
    pub c2: Q,
    /// Selects the −e¹−e² Lee form of `ot21`, which exists only when
    /// c₁ ≠ c₂.
    pub negative_lee: bool,
}

impl Default for CatalogParams {
    fn default() -> Self {
        CatalogParams {
            c1: qz(1),
            c2: qz(0),
            negative_lee: false,
        }
    }
}

impl fmt::Display for CatalogParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c1={}, c2={}", fmt_q(&self.c1), fmt_q(&self.c2))?;
        if self.negative_lee {
            write!(f, ", negative Lee form")?;
        }
        Ok(())
    }
}

/// A catalog entry: the validated structure plus its reference table.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    /// Structure equations in Salamon tuple notation.
    pub equations: String,
    pub structure: LcsStructure,
    /// The published dimension grid, with representative spans where the
    /// source records them.
    pub golden: TableGrid,
    pub params: CatalogParams,
}

pub fn builtin(name: &str, params: &CatalogParams) -> Result<CatalogEntry, CatalogError> {
    match name {
        "rh3" => rh3_entry(params),
        "d4" => d4_entry(params),
        "ot21" => ot21_entry(params),
        _ => Err(CatalogError::UnknownEntry(name.to_owned())),
    }
}

fn reject_params(name: &str, params: &CatalogParams) -> Result<(), CatalogError> {
    if params != &CatalogParams::default() {
        return Err(CatalogError::InvalidParameters(format!(
            "{name} takes no parameters; c1, c2 and the negative Lee form apply to ot21 only"
        )));
    }
    Ok(())
}

fn finish_entry(
    structure: LcsStructure,
    golden_json: &str,
    params: &CatalogParams,
) -> Result<CatalogEntry, CatalogError> {
    let golden = doc_to_grid(&parse_table_doc(golden_json)?)?;
    let equations = pretty_salamon(&structure.lie)?;
    Ok(CatalogEntry {
        name: structure.name.clone(),
        equations,
        structure,
        golden,
        params: params.clone(),
    })
}

fn rh3_entry(params: &CatalogParams) -> Result<CatalogEntry, CatalogError> {
    reject_params("rh3", params)?;
    let lie = parse_salamon("(0,0,12,0)", 4)?;
    let omega = Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4]));
    let theta = Form::generator(4, 4);
    // almost-Kähler triple: J e1 = e2, J e3 = e4, standard metric
    let j = AlmostComplexStructure::new(QMat::from_rows(vec![
        vec![qz(0), qz(-1), qz(0), qz(0)],
        vec![qz(1), qz(0), qz(0), qz(0)],
        vec![qz(0), qz(0), qz(0), qz(-1)],
        vec![qz(0), qz(0), qz(1), qz(0)],
    ]))?;
    let triple = Triple {
        j,
        g: Metric::standard(4),
    };
    let structure = LcsStructure::new("rh3", lie, omega, theta, Some(triple))?;
    finish_entry(structure, include_str!("../data/rh3_tables.json"), params)
}

fn d4_entry(params: &CatalogParams) -> Result<CatalogEntry, CatalogError> {
    reject_params("d4", params)?;
    let lie = parse_salamon("(14,-24,-12,0)", 4)?;
    let omega = Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4]));
    let theta = Form::generator(4, 4).scale(&qz(-1));
    let structure =
        LcsStructure::new("d4", lie, omega, theta, None)?.with_synthesized_triple()?;
    finish_entry(structure, include_str!("../data/d4_tables.json"), params)
}

fn ot21_entry(params: &CatalogParams) -> Result<CatalogEntry, CatalogError> {
    let (c1, c2) = (&params.c1, &params.c2);
    let lie = ot21_algebra(c1, c2);
    debug_assert!(check_jacobi(&ExteriorAlgebra::new(6), &lie));
    let (omega, theta) = if params.negative_lee {
        if c1 == c2 {
            return Err(CatalogError::InvalidParameters(
                "the negative Lee form -e1-e2 exists only when c1 != c2".into(),
            ));
        }
        // a symplectic form with Lee form −(e¹+e²); its nondegeneracy
        // factor is 36(c₁−c₂)/(4c₂²+9), nonzero exactly when c₁ ≠ c₂
        let den = qz(4) * c2.clone() * c2.clone() + qz(9);
        let mut om = Form::zero(6, 2);
        om.add_term(
            MultiIndex::from_sorted(&[1, 5]),
            (qz(4) * c1.clone() * c2.clone() + qz(9)) / den.clone(),
        );
        om.add_term(
            MultiIndex::from_sorted(&[1, 6]),
            qz(6) * (c1.clone() - c2.clone()) / den,
        );
        om.add_term(MultiIndex::from_sorted(&[2, 5]), qz(1));
        om.add_term(MultiIndex::from_sorted(&[3, 4]), qz(1));
        let th = Form::generator(6, 1)
            .add(&Form::generator(6, 2))
            .scale(&qz(-1));
        (om, th)
    } else {
        let mut om = Form::zero(6, 2);
        om.add_term(MultiIndex::from_sorted(&[1, 3]), qz(2));
        om.add_term(MultiIndex::from_sorted(&[1, 4]), qz(1));
        om.add_term(MultiIndex::from_sorted(&[2, 3]), qz(1));
        om.add_term(MultiIndex::from_sorted(&[2, 4]), qz(2));
        om.add_term(MultiIndex::from_sorted(&[5, 6]), qz(1));
        let th = Form::generator(6, 1).add(&Form::generator(6, 2));
        (om, th)
    };
    let structure =
        LcsStructure::new("ot21", lie, omega, theta, None)?.with_synthesized_triple()?;
    finish_entry(structure, include_str!("../data/ot21_tables.json"), params)
}

/// de³ = −e¹³, de⁴ = −e²⁴, de⁵ = ½e¹⁵+c₁e¹⁶+½e²⁵+c₂e²⁶,
/// de⁶ = −c₁e¹⁵+½e¹⁶−c₂e²⁵+½e²⁶. Jacobi holds identically in c₁, c₂.
fn ot21_algebra(c1: &Q, c2: &Q) -> LieAlgebra {
    let dim = 6;
    let half = qq(1, 2);
    let mut de = vec![Form::zero(dim, 2); dim];
    de[2] = Form::monomial(dim, &[1, 3]).scale(&qz(-1));
    de[3] = Form::monomial(dim, &[2, 4]).scale(&qz(-1));
    de[4] = Form::from_terms(
        dim,
        2,
        [
            (MultiIndex::from_sorted(&[1, 5]), half.clone()),
            (MultiIndex::from_sorted(&[1, 6]), c1.clone()),
            (MultiIndex::from_sorted(&[2, 5]), half.clone()),
            (MultiIndex::from_sorted(&[2, 6]), c2.clone()),
        ],
    );
    de[5] = Form::from_terms(
        dim,
        2,
        [
            (MultiIndex::from_sorted(&[1, 5]), -c1.clone()),
            (MultiIndex::from_sorted(&[1, 6]), half.clone()),
            (MultiIndex::from_sorted(&[2, 5]), -c2.clone()),
            (MultiIndex::from_sorted(&[2, 6]), half),
        ],
    );
    LieAlgebra::new(dim, de)
}

/// Repackages an entry in the JSON algebra-document schema so an export
/// can be reloaded through `--algebra file.json`. The triple travels
/// only when it was supplied with the entry; synthesized ones are
/// rebuilt deterministically on load.
pub fn entry_bundle(entry: &CatalogEntry) -> AlgebraBundle {
    let s = &entry.structure;
    let (j, metric) = match (&s.triple, s.triple_synthesized) {
        (Some(t), false) => (Some(t.j.clone()), Some(t.g.clone())),
        _ => (None, None),
    };
    AlgebraBundle {
        name: s.name.clone(),
        algebra: s.lie.clone(),
        omega: Some(s.omega.clone()),
        theta: Some(s.theta.clone()),
        j,
        metric,
    }
}

/// JSON schema shared by exported tables and the golden files under
/// `data/`. Only nonzero cells are listed; any (theory, degree, weight)
/// inside the grid that does not appear has dimension zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    pub name: String,
    /// Dimension of the underlying algebra; degrees run 0..=dim.
    pub dim: usize,
    /// Weights of the grid, as exact rationals "p/q".
    pub weights: Vec<String>,
    /// Short names of the theories the document covers.
    pub theories: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple_provenance: Option<String>,
    pub cells: Vec<CellDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub theory: String,
    pub degree: usize,
    pub weight: String,
    pub dim: usize,
    /// One entry per basis representative; may be omitted when only the
    /// dimension is recorded.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub representatives: Vec<Vec<TermDoc>>,
}

/// One monomial term `coeff · e^{i1…ih}` of a representative.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub indices: Vec<usize>,
    pub coeff: String,
}

pub fn parse_table_doc(s: &str) -> Result<TableDoc, CatalogError> {
    serde_json::from_str(s).map_err(|e| CatalogError::BadTable(e.to_string()))
}

pub fn doc_to_json(doc: &TableDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("the table schema serializes");
    s.push('\n');
    s
}

fn form_to_terms(f: &Form) -> Vec<TermDoc> {
    f.terms()
        .map(|(idx, c)| TermDoc {
            indices: idx.indices(),
            coeff: fmt_q(c),
        })
        .collect()
}

fn terms_to_form(dim: usize, degree: usize, terms: &[TermDoc]) -> Result<Form, CatalogError> {
    let mut f = Form::zero(dim, degree);
    for t in terms {
        if t.indices.len() != degree {
            return Err(CatalogError::BadTable(format!(
                "a degree-{degree} representative has a term with {} indices",
                t.indices.len()
            )));
        }
        if t.indices.windows(2).any(|w| w[0] >= w[1])
            || t.indices.iter().any(|&i| i < 1 || i > dim)
        {
            return Err(CatalogError::BadTable(format!(
                "indices {:?} must be strictly increasing within 1..={dim}",
                t.indices
            )));
        }
        let c = parse_q(&t.coeff).map_err(|e| CatalogError::BadTable(e.to_string()))?;
        f.add_term(MultiIndex::from_sorted(&t.indices), c);
    }
    if f.is_zero() {
        return Err(CatalogError::BadTable(
            "a representative reduces to zero".into(),
        ));
    }
    Ok(f)
}

/// A cohomology table together with the grid it covers: which theories
/// and which total degrees are meaningful to compare.
#[derive(Clone, Debug)]
pub struct TableGrid {
    pub table: CohomologyTable,
    pub theories: Vec<Theory>,
    pub dim: usize,
}

impl TableGrid {
    /// Wraps a freshly computed full table (all four theories).
    pub fn computed(table: CohomologyTable, dim: usize) -> TableGrid {
        TableGrid {
            table,
            theories: Theory::ALL.to_vec(),
            dim,
        }
    }
}

/// Parses and fully validates a table document: recognised theories,
/// distinct weights, cells inside the grid with representative counts
/// matching their dimensions, and a vanishing alternating sum of the
/// d-theory dimensions at each weight (forced by rank-nullity, so any
/// violation is a transcription error).
pub fn doc_to_grid(doc: &TableDoc) -> Result<TableGrid, CatalogError> {
    if doc.dim == 0 || doc.dim > 16 {
        return Err(CatalogError::BadTable(format!(
            "dim must be between 1 and 16, got {}",
            doc.dim
        )));
    }
    let weights = doc
        .weights
        .iter()
        .map(|w| parse_q(w).map_err(|e| CatalogError::BadTable(e.to_string())))
        .collect::<Result<Vec<Q>, _>>()?;
    if BTreeSet::from_iter(&weights).len() != weights.len() {
        return Err(CatalogError::BadTable("repeated weight".into()));
    }
    let theories = doc
        .theories
        .iter()
        .map(|t| {
            Theory::parse(t)
                .ok_or_else(|| CatalogError::BadTable(format!("unknown theory `{t}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut groups = Vec::new();
    let mut seen = BTreeSet::new();
    for cell in &doc.cells {
        let theory = Theory::parse(&cell.theory).ok_or_else(|| {
            CatalogError::BadTable(format!("unknown theory `{}`", cell.theory))
        })?;
        let k = parse_q(&cell.weight).map_err(|e| CatalogError::BadTable(e.to_string()))?;
        if !theories.contains(&theory) || !weights.contains(&k) || cell.degree > doc.dim {
            return Err(CatalogError::BadTable(format!(
                "cell ({}, {}, {}) lies outside the declared grid",
                cell.theory, cell.degree, cell.weight
            )));
        }
        if cell.dim == 0 {
            return Err(CatalogError::BadTable(
                "zero cells are implied by omission".into(),
            ));
        }
        if !seen.insert(format!("{}|{}|{}", theory.short_name(), cell.degree, fmt_q(&k))) {
            return Err(CatalogError::BadTable(format!(
                "duplicate cell ({}, {}, {})",
                cell.theory, cell.degree, cell.weight
            )));
        }
        let representatives = if cell.representatives.is_empty() {
            Vec::new()
        } else {
            if cell.representatives.len() != cell.dim {
                return Err(CatalogError::BadTable(format!(
                    "cell ({}, {}, {}) lists {} representatives for dimension {}",
                    cell.theory,
                    cell.degree,
                    cell.weight,
                    cell.representatives.len(),
                    cell.dim
                )));
            }
            cell.representatives
                .iter()
                .map(|terms| terms_to_form(doc.dim, cell.degree, terms))
                .collect::<Result<Vec<_>, _>>()?
        };
        groups.push(CohomologyGroup {
            theory,
            degree: cell.degree,
            weight: k,
            dimension: cell.dim,
            representatives,
        });
    }
    let table = CohomologyTable {
        name: doc.name.clone(),
        weights,
        groups,
        triple_provenance: doc
            .triple_provenance
            .clone()
            .unwrap_or_else(|| "published".to_owned()),
    };
    if theories.contains(&Theory::DeRham) {
        for k in &table.weights {
            let euler: isize = (0..=doc.dim)
                .map(|h| {
                    let d = table.dimension(Theory::DeRham, h, k) as isize;
                    if h % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .sum();
            if euler != 0 {
                return Err(CatalogError::BadTable(format!(
                    "alternating sum of the d-theory dimensions at weight {} is {euler}, expected 0",
                    fmt_q(k)
                )));
            }
        }
    }
    Ok(TableGrid {
        table,
        theories,
        dim: doc.dim,
    })
}

/// Serializes a computed table into the document schema. Zero cells are
/// dropped; representatives are included on demand.
pub fn table_to_doc(
    table: &CohomologyTable,
    dim: usize,
    theories: &[Theory],
    with_representatives: bool,
) -> TableDoc {
    let mut cells = Vec::new();
    for &theory in theories {
        for h in 0..=dim {
            for k in &table.weights {
                let Some(g) = table.get(theory, h, k) else {
                    continue;
                };
                if g.dimension == 0 {
                    continue;
                }
                cells.push(CellDoc {
                    theory: theory.short_name().to_owned(),
                    degree: h,
                    weight: fmt_q(k),
                    dim: g.dimension,
                    representatives: if with_representatives {
                        g.representatives.iter().map(form_to_terms).collect()
                    } else {
                        Vec::new()
                    },
                });
            }
        }
    }
    TableDoc {
        name: table.name.clone(),
        dim,
        weights: table.weights.iter().map(fmt_q).collect(),
        theories: theories.iter().map(|t| t.short_name().to_owned()).collect(),
        triple_provenance: Some(table.triple_provenance.clone()),
        cells,
    }
}

/// Flat CSV dump `theory,h,k,dim` over the full grid, zero cells
/// included.
pub fn table_to_csv(table: &CohomologyTable, dim: usize, theories: &[Theory]) -> String {
    let mut out = String::from("theory,h,k,dim\n");
    for &theory in theories {
        for h in 0..=dim {
            for k in &table.weights {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    theory.short_name(),
                    h,
                    fmt_q(k),
                    table.dimension(theory, h, k)
                ));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffKind {
    Dimension,
    Span,
}

/// One disagreeing cell between a computed table and its reference.
#[derive(Clone, Debug)]
pub struct CellDiff {
    pub theory: Theory,
    pub degree: usize,
    pub weight: Q,
    pub computed_dim: usize,
    pub golden_dim: usize,
    pub kind: DiffKind,
}

impl fmt::Display for CellDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "H^{}_{{{},{}}}: ",
            self.degree,
            self.theory.short_name(),
            fmt_q(&self.weight)
        )?;
        match self.kind {
            DiffKind::Dimension => write!(
                f,
                "computed dimension {}, reference {}",
                self.computed_dim, self.golden_dim
            ),
            DiffKind::Span => write!(
                f,
                "dimension {} agrees but the representative spans differ",
                self.computed_dim
            ),
        }
    }
}

/// Compares a computed grid against a reference grid cell by cell.
///
/// The computed side must cover the reference: same algebra dimension,
/// a superset of its weights and of its theories, otherwise
/// `GridMismatch`. A dimension disagreement is reported per cell; when
/// dimensions agree and the reference records representatives, the two
/// spans are compared as subspaces. An empty result is a pass.
pub fn golden_diff(
    computed: &TableGrid,
    golden: &TableGrid,
) -> Result<Vec<CellDiff>, CatalogError> {
    if computed.dim != golden.dim {
        return Err(CatalogError::GridMismatch(format!(
            "computed table is for a {}-dimensional algebra, reference for {}-dimensional",
            computed.dim, golden.dim
        )));
    }
    for k in &golden.table.weights {
        if !computed.table.weights.contains(k) {
            return Err(CatalogError::GridMismatch(format!(
                "reference weight {} is outside the computed window",
                fmt_q(k)
            )));
        }
    }
    for t in &golden.theories {
        if !computed.theories.contains(t) {
            return Err(CatalogError::GridMismatch(format!(
                "computed table does not cover the {t} theory"
            )));
        }
    }
    let ext = ExteriorAlgebra::new(golden.dim);
    let mut diffs = Vec::new();
    for &theory in &golden.theories {
        for h in 0..=golden.dim {
            for k in &golden.table.weights {
                let gdim = golden.table.dimension(theory, h, k);
                let cdim = computed.table.dimension(theory, h, k);
                if cdim != gdim {
                    diffs.push(CellDiff {
                        theory,
                        degree: h,
                        weight: k.clone(),
                        computed_dim: cdim,
                        golden_dim: gdim,
                        kind: DiffKind::Dimension,
                    });
                    continue;
                }
                if gdim == 0 {
                    continue;
                }
                let (Some(gg), Some(cg)) = (
                    golden.table.get(theory, h, k),
                    computed.table.get(theory, h, k),
                ) else {
                    continue;
                };
                if gg.representatives.is_empty() || cg.representatives.is_empty() {
                    continue;
                }
                let a = QMat::from_cols(
                    gg.representatives.iter().map(|f| ext.to_vec(f)).collect(),
                );
                let b = QMat::from_cols(
                    cg.representatives.iter().map(|f| ext.to_vec(f)).collect(),
                );
                if !span_eq(&a, &b) {
                    diffs.push(CellDiff {
                        theory,
                        degree: h,
                        weight: k.clone(),
                        computed_dim: cdim,
                        golden_dim: gdim,
                        kind: DiffKind::Span,
                    });
                }
            }
        }
    }
    Ok(diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::full_table;
    use crate::lcs::{verify_bidifferential, verify_commutations};
    use crate::liealg::{bundle_to_json, load_algebra};

    fn weights(lo: i64, hi: i64) -> Vec<Q> {
        (lo..=hi).map(qz).collect()
    }

    #[test]
    fn builtin_entries_validate() {
        let rh3 = builtin("rh3", &CatalogParams::default()).unwrap();
        assert_eq!(rh3.equations, "(0,0,12,0)");
        assert!(rh3.structure.triple.is_some());
        assert!(!rh3.structure.triple_synthesized);
        assert_eq!(rh3.structure.theta, Form::generator(4, 4));

        let d4 = builtin("d4", &CatalogParams::default()).unwrap();
        assert_eq!(d4.equations, "(14,-24,-12,0)");
        assert!(d4.structure.triple_synthesized);
        assert_eq!(d4.structure.theta, Form::generator(4, 4).scale(&qz(-1)));

        let ot = builtin("ot21", &CatalogParams::default()).unwrap();
        assert_eq!(ot.structure.ext.dim, 6);
        assert!(ot.structure.triple_synthesized);
        assert_eq!(
            ot.structure.theta,
            Form::generator(6, 1).add(&Form::generator(6, 2))
        );
        // the operator identities hold on the six-dimensional entry too,
        // including at a non-integer weight
        assert!(verify_bidifferential(&ot.structure, &qq(1, 2)).all_ok());
        assert!(verify_commutations(&ot.structure, &qz(-2)).all_ok());
    }

    #[test]
    fn parameters_are_validated() {
        let e = builtin("t1234", &CatalogParams::default());
        assert!(matches!(e, Err(CatalogError::UnknownEntry(_))));

        let neg = CatalogParams {
            negative_lee: true,
            ..Default::default()
        };
        assert!(matches!(
            builtin("rh3", &neg),
            Err(CatalogError::InvalidParameters(_))
        ));
        let equal = CatalogParams {
            c1: qq(2, 7),
            c2: qq(2, 7),
            negative_lee: true,
        };
        assert!(matches!(
            builtin("ot21", &equal),
            Err(CatalogError::InvalidParameters(_))
        ));
        // the same parameters are fine for the standard Lee form
        let pos = CatalogParams {
            negative_lee: false,
            ..equal
        };
        assert!(builtin("ot21", &pos).is_ok());

        let stray = CatalogParams {
            c1: qz(3),
            ..Default::default()
        };
        assert!(matches!(
            builtin("d4", &stray),
            Err(CatalogError::InvalidParameters(_))
        ));
    }

    #[test]
    fn negative_lee_variant_is_lcs() {
        // construction succeeds only because dΩ = θ∧Ω holds for the
        // chosen Ω; the validator would reject any transcription slip
        let p = CatalogParams {
            negative_lee: true,
            ..Default::default()
        };
        let ot = builtin("ot21", &p).unwrap();
        assert_eq!(
            ot.structure.theta,
            Form::generator(6, 1)
                .add(&Form::generator(6, 2))
                .scale(&qz(-1))
        );
        let p2 = CatalogParams {
            c1: qq(-2, 3),
            c2: qq(1, 5),
            negative_lee: true,
        };
        assert!(builtin("ot21", &p2).is_ok());
    }

    #[test]
    fn golden_docs_load() {
        for name in BUILTIN_NAMES {
            let e = builtin(name, &CatalogParams::default()).unwrap();
            assert_eq!(e.golden.table.name, name);
            assert_eq!(e.golden.dim, e.structure.ext.dim);
        }
        let rh3 = builtin("rh3", &CatalogParams::default()).unwrap();
        assert_eq!(rh3.golden.table.dimension(Theory::DeRham, 1, &qz(0)), 3);
        assert_eq!(rh3.golden.table.dimension(Theory::BottChern, 2, &qz(-1)), 3);
        assert_eq!(rh3.golden.table.dimension(Theory::Aeppli, 3, &qz(2)), 1);
        let ot = builtin("ot21", &CatalogParams::default()).unwrap();
        assert_eq!(ot.golden.theories, vec![Theory::DeRham]);
        assert_eq!(ot.golden.table.dimension(Theory::DeRham, 3, &qz(-1)), 2);
    }

    #[test]
    fn rh3_matches_published_tables() {
        let e = builtin("rh3", &CatalogParams::default()).unwrap();
        let table = full_table(&e.structure, &weights(-2, 2));
        let computed = TableGrid::computed(table, 4);
        let diff = golden_diff(&computed, &e.golden).unwrap();
        assert!(diff.is_empty(), "{diff:#?}");
    }

    #[test]
    fn d4_matches_published_tables() {
        let e = builtin("d4", &CatalogParams::default()).unwrap();
        let table = full_table(&e.structure, &weights(-2, 2));
        let computed = TableGrid::computed(table, 4);
        let diff = golden_diff(&computed, &e.golden).unwrap();
        assert!(diff.is_empty(), "{diff:#?}");
    }

    #[test]
    fn ot21_matches_published_table() {
        let e = builtin("ot21", &CatalogParams::default()).unwrap();
        let table = full_table(&e.structure, &weights(-1, 1));
        let computed = TableGrid::computed(table, 6);
        let diff = golden_diff(&computed, &e.golden).unwrap();
        assert!(diff.is_empty(), "{diff:#?}");
    }

    #[test]
    fn perturbed_reference_reports_exact_cells() {
        let e = builtin("rh3", &CatalogParams::default()).unwrap();
        let table = full_table(&e.structure, &weights(-2, 2));
        let computed = TableGrid::computed(table, 4);

        let mut doc = parse_table_doc(include_str!("../data/rh3_tables.json")).unwrap();
        // drop H^1_{bc,-2} so the reference claims dimension 0 there, and
        // flip a sign inside the H^2_{bc,1} representative e12+e34
        doc.cells
            .retain(|c| !(c.theory == "bc" && c.degree == 1 && c.weight == "-2"));
        let cell = doc
            .cells
            .iter_mut()
            .find(|c| c.theory == "bc" && c.degree == 2 && c.weight == "1")
            .unwrap();
        cell.representatives[0][1].coeff = "-1".to_owned();
        let golden = doc_to_grid(&doc).unwrap();

        let diff = golden_diff(&computed, &golden).unwrap();
        assert_eq!(diff.len(), 2, "{diff:#?}");
        assert_eq!(
            diff[0].to_string(),
            "H^1_{bc,-2}: computed dimension 1, reference 0"
        );
        assert_eq!(
            diff[1].to_string(),
            "H^2_{bc,1}: dimension 1 agrees but the representative spans differ"
        );
    }

    #[test]
    fn grid_mismatches_are_errors() {
        let rh3 = builtin("rh3", &CatalogParams::default()).unwrap();
        let narrow = TableGrid::computed(full_table(&rh3.structure, &weights(-1, 1)), 4);
        assert!(matches!(
            golden_diff(&narrow, &rh3.golden),
            Err(CatalogError::GridMismatch(_))
        ));

        let ot = builtin("ot21", &CatalogParams::default()).unwrap();
        let other = TableGrid::computed(full_table(&ot.structure, &weights(-1, 1)), 6);
        assert!(matches!(
            golden_diff(&other, &rh3.golden),
            Err(CatalogError::GridMismatch(_))
        ));

        // reference asking for a theory the computed side lacks
        let mut doc = table_to_doc(&narrow.table, 4, &[Theory::DeRham], false);
        doc.theories = vec!["bc".to_owned()];
        doc.cells.clear();
        let golden = doc_to_grid(&doc).unwrap();
        let mut computed_d_only = narrow.clone();
        computed_d_only.theories = vec![Theory::DeRham];
        assert!(matches!(
            golden_diff(&computed_d_only, &golden),
            Err(CatalogError::GridMismatch(_))
        ));
    }

    #[test]
    fn document_validation_rejects_malformed_tables() {
        let mut doc = parse_table_doc(include_str!("../data/rh3_tables.json")).unwrap();
        doc.cells[0].dim = 2; // one representative listed
        assert!(matches!(
            doc_to_grid(&doc),
            Err(CatalogError::BadTable(_))
        ));

        let mut doc = parse_table_doc(include_str!("../data/rh3_tables.json")).unwrap();
        doc.cells[0].weight = "7".to_owned(); // outside the grid
        assert!(matches!(
            doc_to_grid(&doc),
            Err(CatalogError::BadTable(_))
        ));

        let mut doc = parse_table_doc(include_str!("../data/rh3_tables.json")).unwrap();
        doc.cells[1].representatives[0][0].indices = vec![2, 1];
        assert!(matches!(
            doc_to_grid(&doc),
            Err(CatalogError::BadTable(_))
        ));

        // breaking one d-theory dimension breaks the alternating sum
        let mut doc = parse_table_doc(include_str!("../data/rh3_tables.json")).unwrap();
        let cell = doc
            .cells
            .iter_mut()
            .find(|c| c.theory == "d" && c.degree == 2)
            .unwrap();
        cell.dim = 5;
        cell.representatives.clear();
        assert!(matches!(
            doc_to_grid(&doc),
            Err(CatalogError::BadTable(_))
        ));
    }

    #[test]
    fn export_round_trips_and_is_deterministic() {
        let e = builtin("d4", &CatalogParams::default()).unwrap();
        let table = full_table(&e.structure, &weights(-2, 2));
        let doc = table_to_doc(&table, 4, &Theory::ALL, true);
        let json = doc_to_json(&doc);
        let reparsed = doc_to_grid(&parse_table_doc(&json).unwrap()).unwrap();
        let computed = TableGrid::computed(table.clone(), 4);
        assert!(golden_diff(&computed, &reparsed).unwrap().is_empty());

        let again = doc_to_json(&table_to_doc(&table, 4, &Theory::ALL, true));
        assert_eq!(json, again);

        let csv = table_to_csv(&table, 4, &Theory::ALL);
        assert!(csv.starts_with("theory,h,k,dim\n"));
        assert!(csv.contains("d,1,-1,1\n"));
        assert!(csv.contains("bc,2,1,3\n"));
        assert_eq!(csv.lines().count(), 1 + 4 * 5 * 5);
    }

    #[test]
    fn bundle_round_trips() {
        let rh3 = builtin("rh3", &CatalogParams::default()).unwrap();
        let json = bundle_to_json(&entry_bundle(&rh3));
        let s = LcsStructure::from_bundle(load_algebra(&json).unwrap()).unwrap();
        assert_eq!(s.omega, rh3.structure.omega);
        assert_eq!(s.theta, rh3.structure.theta);
        assert!(s.triple.is_some());

        let d4 = builtin("d4", &CatalogParams::default()).unwrap();
        let json = bundle_to_json(&entry_bundle(&d4));
        let s = LcsStructure::from_bundle(load_algebra(&json).unwrap()).unwrap();
        assert_eq!(pretty_salamon(&s.lie).unwrap(), "(14,-24,-12,0)");
        assert!(s.triple.is_none());

        let ot = builtin("ot21", &CatalogParams::default()).unwrap();
        let json = bundle_to_json(&entry_bundle(&ot));
        let s = LcsStructure::from_bundle(load_algebra(&json).unwrap()).unwrap();
        assert_eq!(s.lie.de, ot.structure.lie.de);
        assert_eq!(s.omega, ot.structure.omega);
        assert_eq!(s.theta, ot.structure.theta);
    }
}
