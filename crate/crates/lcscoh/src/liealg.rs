//! Lie algebras by structure constants and their Chevalley–Eilenberg
//! complex.
//!
//! An m-dimensional Lie algebra is stored through the 2-forms
//! `de^k = −Σ_{i<j} c^k_{ij} e^i∧e^j` on the dual basis; the Jacobi
//! identity is exactly `d∘d = 0`. Algebras enter either in Salamon's
//! digit-pair shorthand (`"(0,0,12,0)"` reads `de³ = e¹∧e²`, everything
//! else closed) or as explicit JSON documents (see [`load_algebra`]).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exterior::{
    canonical_sign, AlmostComplexStructure, ExteriorAlgebra, Form, GradedOperator, Metric,
    MultiIndex,
};
use crate::linalg::QMat;
use crate::scalar::{parse_q, Q};

use num::{One, Signed, Zero};

#[derive(Debug, Error)]
pub enum LieAlgError {
    #[error("parse error at byte {pos}: {msg}")]
    ParseError { pos: usize, msg: String },
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("structure constants violate the Jacobi identity: d²e^{generator} ≠ 0")]
    JacobiFailure { generator: usize },
    #[error(transparent)]
    Exterior(#[from] crate::exterior::ExteriorError),
}

/// A finite-dimensional Lie algebra presented through its Chevalley–
/// Eilenberg structure 2-forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    pub dim: usize,
    /// `de[k]` is the 2-form de^{k+1}.
    pub de: Vec<Form>,
}

impl LieAlgebra {
    pub fn new(dim: usize, de: Vec<Form>) -> Self {
        assert_eq!(de.len(), dim);
        for f in &de {
            assert_eq!(f.dim, dim);
            assert_eq!(f.degree, 2);
        }
        LieAlgebra { dim, de }
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra::new(dim, (0..dim).map(|_| Form::zero(dim, 2)).collect())
    }

    /// Structure constant c^k_{ij} = −(coefficient of e^{ij} in de^k),
    /// extended antisymmetrically in (i, j). All arguments 1-based.
    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> Q {
        if i == j {
            return Q::zero();
        }
        let (lo, hi, sign) = if i < j { (i, j, -1) } else { (j, i, 1) };
        let c = self.de[k - 1].coeff(MultiIndex::from_sorted(&[lo, hi]));
        if sign < 0 {
            -c
        } else {
            c
        }
    }
}

/// Parses Salamon's shorthand: a parenthesized comma list of m terms, one
/// per generator; each term is `0` or a ±-joined list of digit pairs with
/// optional rational coefficients (`"1/2*15"` for ½e¹∧e⁵).
///
/// ```
/// use lcscoh::liealg::parse_salamon;
/// let rh3 = parse_salamon("(0,0,12,0)", 4).unwrap();
/// assert_eq!(rh3.de[2], lcscoh::exterior::Form::monomial(4, &[1, 2]));
/// assert!(rh3.de[0].is_zero());
/// ```
pub fn parse_salamon(s: &str, dim: usize) -> Result<LieAlgebra, LieAlgError> {
    if dim > 9 {
        return Err(LieAlgError::SchemaError(
            "Salamon notation caps indices at 9; use the explicit JSON structure".into(),
        ));
    }
    let trimmed = s.trim();
    let inner = trimmed
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| LieAlgError::ParseError {
            pos: 0,
            msg: "expected parenthesized list".into(),
        })?;
    let slots: Vec<&str> = inner.split(',').collect();
    if slots.len() != dim {
        return Err(LieAlgError::ParseError {
            pos: 0,
            msg: format!("expected {dim} comma-separated terms, found {}", slots.len()),
        });
    }
    let mut de = Vec::with_capacity(dim);
    for slot in &slots {
        de.push(parse_salamon_term(slot.trim(), dim, slot.as_ptr() as usize)?);
    }
    Ok(LieAlgebra::new(dim, de))
}

fn parse_salamon_term(term: &str, dim: usize, _base: usize) -> Result<Form, LieAlgError> {
    if term == "0" {
        return Ok(Form::zero(dim, 2));
    }
    let mut out = Form::zero(dim, 2);
    let bytes = term.as_bytes();
    let mut pos = 0usize;
    let mut first = true;
    while pos < bytes.len() {
        let mut sign = Q::one();
        match bytes[pos] {
            b'+' => pos += 1,
            b'-' => {
                sign = -sign;
                pos += 1;
            }
            _ if first => {}
            _ => {
                return Err(LieAlgError::ParseError {
                    pos,
                    msg: "expected '+' or '-' between parts".into(),
                })
            }
        }
        first = false;
        // optional "coeff*" prefix: everything up to '*' parses as p/q,
        // searching only within the current part (up to the next +/-)
        let rest = &term[pos..];
        let part_end = rest
            .find(['+', '-'])
            .unwrap_or(rest.len());
        let coeff = if let Some(star) = rest[..part_end].find('*') {
            let c = parse_q(&rest[..star]).map_err(|e| LieAlgError::ParseError {
                pos,
                msg: e.to_string(),
            })?;
            pos += star + 1;
            c
        } else {
            Q::one()
        };
        if pos + 2 > bytes.len() {
            return Err(LieAlgError::ParseError {
                pos,
                msg: "expected a digit pair".into(),
            });
        }
        let digit = |b: u8, at: usize| -> Result<usize, LieAlgError> {
            if b.is_ascii_digit() && b != b'0' {
                Ok((b - b'0') as usize)
            } else {
                Err(LieAlgError::ParseError {
                    pos: at,
                    msg: format!("expected an index digit 1-9, found {:?}", b as char),
                })
            }
        };
        let i = digit(bytes[pos], pos)?;
        let j = digit(bytes[pos + 1], pos + 1)?;
        pos += 2;
        for idx in [i, j] {
            if idx > dim {
                return Err(LieAlgError::IndexOutOfRange { index: idx, dim });
            }
        }
        let (mi, s) = canonical_sign(&[i, j], dim).expect("indices validated");
        if s == 0 {
            return Err(LieAlgError::ParseError {
                pos: pos - 2,
                msg: format!("repeated index in pair {i}{j}"),
            });
        }
        let signed = if s < 0 { -(sign * coeff) } else { sign * coeff };
        out.add_term(mi, signed);
    }
    Ok(out)
}

/// Renders a Lie algebra back into Salamon notation; inverse of
/// [`parse_salamon`] on its image.
pub fn pretty_salamon(g: &LieAlgebra) -> Result<String, LieAlgError> {
    if g.dim > 9 {
        return Err(LieAlgError::SchemaError(
            "Salamon notation caps indices at 9".into(),
        ));
    }
    let mut slots = Vec::with_capacity(g.dim);
    for f in &g.de {
        if f.is_zero() {
            slots.push("0".to_owned());
            continue;
        }
        let mut term = String::new();
        for (idx, c) in f.terms() {
            let ix = idx.indices();
            let pair = format!("{}{}", ix[0], ix[1]);
            let neg = c.is_negative();
            let abs = c.abs();
            if term.is_empty() {
                if neg {
                    term.push('-');
                }
            } else {
                term.push(if neg { '-' } else { '+' });
            }
            if abs.is_one() {
                term.push_str(&pair);
            } else {
                term.push_str(&format!("{abs}*{pair}"));
            }
        }
        slots.push(term);
    }
    Ok(format!("({})", slots.join(",")))
}

/// The Chevalley–Eilenberg differential as a graded operator of shift +1:
/// `d e^k` is the stored structure 2-form, extended to all degrees by the
/// Leibniz rule, with `d = 0` on constants.
pub fn ce_differential(alg: &ExteriorAlgebra, g: &LieAlgebra) -> GradedOperator {
    assert_eq!(alg.dim, g.dim);
    GradedOperator::build(alg, 1, |f| d_form(g, f))
}

/// d on an arbitrary form: for a monomial e^{s1…sh},
/// `d e^S = Σ_j (−1)^{j−1} de^{s_j} ∧ e^{S∖s_j}` (the structure 2-forms
/// have even degree, so they commute to the front).
pub fn d_form(g: &LieAlgebra, f: &Form) -> Form {
    let mut out = Form::zero(g.dim, (f.degree + 1).min(g.dim));
    for (&idx, c) in f.terms().map(|(i, c)| (i, c)) {
        let indices = idx.indices();
        for (j, &sj) in indices.iter().enumerate() {
            let dsj = &g.de[sj - 1];
            if dsj.is_zero() {
                continue;
            }
            let rest = MultiIndex(idx.0 & !(1 << (sj - 1)));
            let mut rest_form = Form::zero(g.dim, indices.len() - 1);
            rest_form.add_term(rest, Q::one());
            let sign = if j % 2 == 0 { c.clone() } else { -c.clone() };
            let contrib = crate::exterior::wedge(dsj, &rest_form).scale(&sign);
            if contrib.degree == out.degree {
                out = out.add(&contrib);
            }
        }
    }
    out
}

/// Jacobi identity as `d∘d = 0`, checked on every degree.
pub fn check_jacobi(alg: &ExteriorAlgebra, g: &LieAlgebra) -> bool {
    let d = ce_differential(alg, g);
    d.compose(&d, alg).is_zero()
}

/// Unimodularity: `trace(ad_x) = 0` for every basis vector, computed as
/// `Σ_k c^k_{ak}`. This is what licenses an invariant volume pairing, so
/// every duality check is gated on it.
pub fn is_unimodular(g: &LieAlgebra) -> bool {
    (1..=g.dim).all(|a| {
        let trace: Q = (1..=g.dim)
            .map(|k| g.structure_constant(k, a, k))
            .fold(Q::zero(), |acc, x| acc + x);
        trace.is_zero()
    })
}

/// Everything a JSON document can carry besides the algebra itself.
#[derive(Clone, Debug)]
pub struct AlgebraBundle {
    pub name: String,
    pub algebra: LieAlgebra,
    pub omega: Option<Form>,
    pub theta: Option<Form>,
    pub j: Option<AlmostComplexStructure>,
    pub metric: Option<Metric>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraDoc {
    dim: usize,
    structure: StructureField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<Vec<(usize, usize, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<Vec<(usize, String)>>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    j: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metric: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum StructureField {
    Salamon(String),
    Explicit(Vec<(usize, usize, usize, String)>),
}

/// Loads and fully validates a JSON algebra document.
///
/// Schema (all scalars as exact strings `"p/q"`):
///
/// ```json
/// { "dim": 4,
///   "structure": "(0,0,12,0)",
///   "omega": [[1,2,"1"],[3,4,"1"]],
///   "theta": [[4,"1"]],
///   "J": [["0","-1","0","0"],["1","0","0","0"],["0","0","0","-1"],["0","0","1","0"]],
///   "metric": [["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]],
///   "name": "rh3" }
/// ```
///
/// `structure` may instead be a list of quadruples `[k, i, j, "p/q"]`,
/// each contributing `p/q · e^i∧e^j` to `de^k`. Jacobi failure is a hard
/// load error: every downstream theorem assumes it.
pub fn load_algebra(document: &str) -> Result<AlgebraBundle, LieAlgError> {
    let doc: AlgebraDoc = serde_json::from_str(document)
        .map_err(|e| LieAlgError::SchemaError(e.to_string()))?;
    bundle_from_doc(doc)
}

fn bundle_from_doc(doc: AlgebraDoc) -> Result<AlgebraBundle, LieAlgError> {
    let dim = doc.dim;
    if dim == 0 || dim > 16 {
        return Err(LieAlgError::SchemaError(format!(
            "dim must be between 1 and 16, got {dim}"
        )));
    }
    let algebra = match &doc.structure {
        StructureField::Salamon(s) => parse_salamon(s, dim)?,
        StructureField::Explicit(quads) => {
            let mut de = vec![Form::zero(dim, 2); dim];
            for &(k, i, j, ref v) in quads {
                if k < 1 || k > dim {
                    return Err(LieAlgError::IndexOutOfRange { index: k, dim });
                }
                let (mi, sign) = canonical_sign(&[i, j], dim)?;
                if sign == 0 {
                    return Err(LieAlgError::SchemaError(format!(
                        "structure term [{k},{i},{j}] has a repeated index"
                    )));
                }
                let c = parse_q(v).map_err(|e| LieAlgError::SchemaError(e.to_string()))?;
                de[k - 1].add_term(mi, if sign < 0 { -c } else { c });
            }
            LieAlgebra::new(dim, de)
        }
    };
    let alg = ExteriorAlgebra::new(dim);
    if let Some(gen) = (1..=dim).find(|&k| {
        !d_form(&algebra, &d_form(&algebra, &Form::generator(dim, k))).is_zero()
    }) {
        return Err(LieAlgError::JacobiFailure { generator: gen });
    }
    debug_assert!(check_jacobi(&alg, &algebra));

    let omega = doc
        .omega
        .as_ref()
        .map(|terms| {
            let mut f = Form::zero(dim, 2);
            for &(i, j, ref v) in terms {
                let (mi, sign) = canonical_sign(&[i, j], dim)?;
                if sign == 0 {
                    return Err(LieAlgError::SchemaError(format!(
                        "omega term [{i},{j}] has a repeated index"
                    )));
                }
                let c = parse_q(v).map_err(|e| LieAlgError::SchemaError(e.to_string()))?;
                f.add_term(mi, if sign < 0 { -c } else { c });
            }
            Ok(f)
        })
        .transpose()?;
    let theta = doc
        .theta
        .as_ref()
        .map(|terms| {
            let mut f = Form::zero(dim, 1);
            for &(i, ref v) in terms {
                if i < 1 || i > dim {
                    return Err(LieAlgError::IndexOutOfRange { index: i, dim });
                }
                let c = parse_q(v).map_err(|e| LieAlgError::SchemaError(e.to_string()))?;
                f.add_term(MultiIndex::from_sorted(&[i]), c);
            }
            Ok(f)
        })
        .transpose()?;
    let j = doc
        .j
        .as_ref()
        .map(|rows| {
            let m = parse_matrix(rows, dim)?;
            AlmostComplexStructure::new(m)
                .map_err(|e| LieAlgError::SchemaError(format!("J: {e}")))
        })
        .transpose()?;
    let metric = doc
        .metric
        .as_ref()
        .map(|rows| {
            let m = parse_matrix(rows, dim)?;
            Metric::new(m).map_err(|e| LieAlgError::SchemaError(format!("metric: {e}")))
        })
        .transpose()?;
    Ok(AlgebraBundle {
        name: doc.name.unwrap_or_else(|| "unnamed".to_owned()),
        algebra,
        omega,
        theta,
        j,
        metric,
    })
}

fn parse_matrix(rows: &[Vec<String>], dim: usize) -> Result<QMat, LieAlgError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(LieAlgError::SchemaError(format!(
            "matrix must be {dim}x{dim}"
        )));
    }
    let parsed: Result<Vec<Vec<Q>>, _> = rows
        .iter()
        .map(|r| r.iter().map(|v| parse_q(v)).collect::<Result<Vec<_>, _>>())
        .collect();
    Ok(QMat::from_rows(parsed.map_err(|e| {
        LieAlgError::SchemaError(e.to_string())
    })?))
}

/// Serializes a bundle back into the JSON document schema (used by the
/// catalog export and for round-trip tests).
pub fn bundle_to_json(bundle: &AlgebraBundle) -> String {
    let structure = match pretty_salamon(&bundle.algebra) {
        Ok(s) => StructureField::Salamon(s),
        Err(_) => StructureField::Explicit(
            (1..=bundle.algebra.dim)
                .flat_map(|k| {
                    bundle.algebra.de[k - 1]
                        .terms()
                        .map(move |(idx, c)| {
                            let ix = idx.indices();
                            (k, ix[0], ix[1], c.to_string())
                        })
                        .collect::<Vec<_>>()
                })
                .collect(),
        ),
    };
    let doc = AlgebraDoc {
        dim: bundle.algebra.dim,
        structure,
        omega: bundle.omega.as_ref().map(|f| {
            f.terms()
                .map(|(idx, c)| {
                    let ix = idx.indices();
                    (ix[0], ix[1], c.to_string())
                })
                .collect()
        }),
        theta: bundle.theta.as_ref().map(|f| {
            f.terms()
                .map(|(idx, c)| (idx.indices()[0], c.to_string()))
                .collect()
        }),
        j: bundle.j.as_ref().map(|j| matrix_to_rows(&j.matrix)),
        metric: bundle.metric.as_ref().map(|g| matrix_to_rows(&g.matrix)),
        name: Some(bundle.name.clone()),
    };
    serde_json::to_string_pretty(&doc).expect("document serialization cannot fail")
}

fn matrix_to_rows(m: &QMat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(Q::to_string).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qq, qz};

    #[test]
    fn parse_salamon_rh3() {
        let g = parse_salamon("(0,0,12,0)", 4).unwrap();
        assert!(g.de[0].is_zero());
        assert_eq!(g.de[2], Form::monomial(4, &[1, 2]));
        assert_eq!(g.structure_constant(3, 1, 2), qz(-1));
        assert_eq!(g.structure_constant(3, 2, 1), qz(1));
    }

    #[test]
    fn parse_salamon_d4_and_coefficients() {
        let g = parse_salamon("(14,-24,-12,0)", 4).unwrap();
        assert_eq!(g.de[0], Form::monomial(4, &[1, 4]));
        assert_eq!(g.de[1], Form::monomial(4, &[2, 4]).scale(&qz(-1)));
        assert_eq!(g.de[2], Form::monomial(4, &[1, 2]).scale(&qz(-1)));
        let h = parse_salamon("(0,0,1/2*12+21,0)", 4).unwrap();
        // 1/2·e^{12} + e^{21} = −1/2·e^{12}
        assert_eq!(h.de[2], Form::monomial(4, &[1, 2]).scale(&qq(-1, 2)));
    }

    #[test]
    fn parse_salamon_rejects_bad_input() {
        assert!(parse_salamon("(0,0,12)", 4).is_err());
        assert!(parse_salamon("0,0,12,0", 4).is_err());
        assert!(parse_salamon("(0,0,1x,0)", 4).is_err());
        assert!(parse_salamon("(0,0,15,0)", 4).is_err());
        assert!(parse_salamon("(0,0,11,0)", 4).is_err());
    }

    #[test]
    fn pretty_round_trip() {
        for s in ["(0,0,12,0)", "(14,-24,-12,0)", "(0,0,0,0)", "(23+14,0,-12+1/2*34,0)"] {
            let g = parse_salamon(s, 4).unwrap();
            let printed = pretty_salamon(&g).unwrap();
            assert_eq!(parse_salamon(&printed, 4).unwrap(), g);
        }
        // canonical output for the catalog strings
        let g = parse_salamon("(0,0,12,0)", 4).unwrap();
        assert_eq!(pretty_salamon(&g).unwrap(), "(0,0,12,0)");
    }

    #[test]
    fn ce_differential_leibniz_values() {
        let alg = ExteriorAlgebra::new(4);
        let rh3 = parse_salamon("(0,0,12,0)", 4).unwrap();
        let d = ce_differential(&alg, &rh3);
        // d(e^{34}) = de³∧e⁴ = e^{124}
        assert_eq!(
            d.apply(&alg, &Form::monomial(4, &[3, 4])),
            Form::monomial(4, &[1, 2, 4])
        );
        let d4 = parse_salamon("(14,-24,-12,0)", 4).unwrap();
        let dd4 = ce_differential(&alg, &d4);
        // d(e^{12}) = e^{14}∧e² − e¹∧(−e^{24}) = 0
        assert!(dd4.apply(&alg, &Form::monomial(4, &[1, 2])).is_zero());
        // abelian: d = 0 in every degree
        let ab = ce_differential(&alg, &LieAlgebra::abelian(4));
        assert!(ab.is_zero());
    }

    #[test]
    fn jacobi_checks() {
        let alg = ExteriorAlgebra::new(4);
        assert!(check_jacobi(&alg, &parse_salamon("(0,0,12,0)", 4).unwrap()));
        assert!(check_jacobi(&alg, &parse_salamon("(14,-24,-12,0)", 4).unwrap()));
        // corrupt rh3: de⁴ := e^{34} gives d²e⁴ = e^{12}∧e⁴ ≠ 0
        assert!(!check_jacobi(&alg, &parse_salamon("(0,0,12,34)", 4).unwrap()));
        // while de⁴ := e^{13} stays consistent (filiform algebra)
        assert!(check_jacobi(&alg, &parse_salamon("(0,0,12,13)", 4).unwrap()));
    }

    #[test]
    fn unimodularity() {
        assert!(is_unimodular(&parse_salamon("(0,0,12,0)", 4).unwrap()));
        assert!(is_unimodular(&parse_salamon("(14,-24,-12,0)", 4).unwrap()));
        // affine line: de¹ = e^{12} has trace(ad_{e2}) ≠ 0
        assert!(!is_unimodular(&parse_salamon("(12,0)", 2).unwrap()));
    }

    #[test]
    fn load_algebra_document() {
        let doc = r#"{
            "dim": 4,
            "structure": "(0,0,12,0)",
            "omega": [[1,2,"1"],[3,4,"1"]],
            "theta": [[4,"1"]],
            "name": "rh3"
        }"#;
        let bundle = load_algebra(doc).unwrap();
        assert_eq!(bundle.name, "rh3");
        assert_eq!(
            bundle.omega.unwrap(),
            Form::monomial(4, &[1, 2]).add(&Form::monomial(4, &[3, 4]))
        );
        assert_eq!(bundle.theta.unwrap(), Form::generator(4, 4));
        assert!(bundle.j.is_none());
    }

    #[test]
    fn load_algebra_explicit_structure() {
        let doc = r#"{
            "dim": 3,
            "structure": [[3, 1, 2, "1"], [3, 2, 1, "1/2"]],
            "name": "heisenberg-ish"
        }"#;
        let bundle = load_algebra(doc).unwrap();
        // e^{12} − 1/2 e^{12} = 1/2 e^{12}
        assert_eq!(
            bundle.algebra.de[2],
            Form::monomial(3, &[1, 2]).scale(&qq(1, 2))
        );
    }

    #[test]
    fn load_algebra_rejects_jacobi_failure() {
        let doc = r#"{ "dim": 4, "structure": "(0,0,12,34)" }"#;
        match load_algebra(doc) {
            Err(LieAlgError::JacobiFailure { .. }) => {}
            other => panic!("expected JacobiFailure, got {other:?}"),
        }
    }

    #[test]
    fn load_algebra_rejects_bad_omega() {
        let doc = r#"{ "dim": 4, "structure": "(0,0,12,0)", "omega": [[1,1,"1"]] }"#;
        assert!(matches!(
            load_algebra(doc),
            Err(LieAlgError::SchemaError(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let doc = r#"{
            "dim": 4,
            "structure": "(14,-24,-12,0)",
            "omega": [[1,2,"1"],[3,4,"1"]],
            "theta": [[4,"-1"]],
            "name": "d4"
        }"#;
        let bundle = load_algebra(doc).unwrap();
        let emitted = bundle_to_json(&bundle);
        let reloaded = load_algebra(&emitted).unwrap();
        assert_eq!(reloaded.algebra, bundle.algebra);
        assert_eq!(reloaded.omega, bundle.omega);
        assert_eq!(reloaded.theta, bundle.theta);
        assert_eq!(reloaded.name, bundle.name);
    }
}
