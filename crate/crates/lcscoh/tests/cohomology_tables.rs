//! Table-level behavior: shipped reference documents, parameter and
//! Lee-sign invariances, lemma verdicts, and critical-weight coverage.

use std::fs;
use std::path::PathBuf;

use lcscoh::catalog::{
    builtin, doc_to_grid, doc_to_json, golden_diff, parse_table_doc, table_to_doc, CatalogParams,
    TableGrid,
};
use lcscoh::cohomology::{cohomology, critical_weights, full_table, satisfies_lemma, Theory};
use lcscoh::lcs::LcsStructure;
use lcscoh::liealg::load_algebra;
use lcscoh::scalar::{fmt_q, qq, qz, Q};

fn data_file(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn window(a: i64, b: i64) -> Vec<Q> {
    (a..=b).map(qz).collect()
}

#[test]
fn computed_tables_match_the_shipped_documents() {
    for (name, file, a, b) in [
        ("rh3", "rh3_tables.json", -2i64, 2i64),
        ("d4", "d4_tables.json", -2, 2),
        ("ot21", "ot21_tables.json", -1, 1),
    ] {
        let golden = doc_to_grid(&parse_table_doc(&data_file(file)).unwrap()).unwrap();
        let s = builtin(name, &CatalogParams::default()).unwrap().structure;
        let computed = TableGrid::computed(full_table(&s, &window(a, b)), s.ext.dim);
        let diffs = golden_diff(&computed, &golden).unwrap();
        assert!(
            diffs.is_empty(),
            "{name}: {}",
            diffs
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        );
    }
}

#[test]
fn shipped_documents_round_trip_through_the_schema() {
    for file in ["rh3_tables.json", "d4_tables.json", "ot21_tables.json"] {
        let doc = parse_table_doc(&data_file(file)).unwrap();
        let grid = doc_to_grid(&doc).unwrap();
        let exported = table_to_doc(&grid.table, grid.dim, &grid.theories, true);
        let reparsed = doc_to_grid(&parse_table_doc(&doc_to_json(&exported)).unwrap()).unwrap();
        let diffs = golden_diff(&grid, &reparsed).unwrap();
        assert!(diffs.is_empty(), "{file}: round trip changed the table");
    }
}

#[test]
fn ot21_dimensions_are_parameter_independent() {
    let golden = builtin("ot21", &CatalogParams::default()).unwrap().golden;
    for (c1, c2) in [(qz(2), qq(1, 3)), (qq(-2, 3), qq(1, 5))] {
        let params = CatalogParams {
            c1: c1.clone(),
            c2: c2.clone(),
            negative_lee: false,
        };
        let s = builtin("ot21", &params).unwrap().structure;
        for h in 0..=6usize {
            for k in window(-1, 1) {
                assert_eq!(
                    cohomology(&s, Theory::DeRham, h, &k).dimension,
                    golden.table.dimension(Theory::DeRham, h, &k),
                    "c1 = {}, c2 = {}, H^{h} at k = {}",
                    fmt_q(&c1),
                    fmt_q(&c2),
                    fmt_q(&k)
                );
            }
        }
    }
}

#[test]
fn negative_lee_variant_mirrors_the_weight_axis() {
    // Flipping theta sends d_k to d_{-k}; the twisted de Rham dimensions
    // of the negative-Lee variant must be the reference ones at -k.
    let golden = builtin("ot21", &CatalogParams::default()).unwrap().golden;
    let params = CatalogParams {
        negative_lee: true,
        ..CatalogParams::default()
    };
    let s = builtin("ot21", &params).unwrap().structure;
    for h in 0..=6usize {
        for k in window(-1, 1) {
            assert_eq!(
                cohomology(&s, Theory::DeRham, h, &k).dimension,
                golden.table.dimension(Theory::DeRham, h, &-k.clone()),
                "negative Lee form, H^{h} at k = {}",
                fmt_q(&k)
            );
        }
    }
}

#[test]
fn lemma_verdicts_split_by_lee_form() {
    // rh3 has theta != 0: the lemma must fail at every integer weight in
    // the window, each failure localized to some degree.
    let rh3 = builtin("rh3", &CatalogParams::default()).unwrap().structure;
    for k in window(-2, 2) {
        let v = satisfies_lemma(&rh3, &k);
        assert!(!v.holds, "rh3: lemma unexpectedly holds at k = {}", fmt_q(&k));
        assert!(v.per_degree.iter().any(|ok| !ok));
        assert_eq!(v.per_degree.len(), 5);
    }

    // The symplectic torus satisfies it everywhere.
    let torus = LcsStructure::from_bundle(
        load_algebra(
            r#"{"name":"torus4","dim":4,"structure":[],"omega":[[1,2,"1"],[3,4,"1"]],"theta":[]}"#,
        )
        .unwrap(),
    )
    .unwrap();
    for k in window(-2, 2) {
        let v = satisfies_lemma(&torus, &k);
        assert!(v.holds, "torus: lemma fails at k = {}", fmt_q(&k));
        assert!(v.per_degree.iter().all(|ok| *ok));
    }
}

#[test]
fn twisted_de_rham_localizes_on_critical_weights() {
    // Per-theory critical sets, frozen from the minor-gcd factorizations.
    let cases = [
        ("rh3", vec![qz(0)]),
        ("d4", vec![qz(-1), qz(0), qz(1)]),
        ("ot21", vec![qz(-1), qz(0), qz(1)]),
    ];
    for (name, expected) in cases {
        let s = builtin(name, &CatalogParams::default()).unwrap().structure;
        let cw = critical_weights(&s, &[Theory::DeRham]);
        assert_eq!(cw.weights, expected, "{name}: twisted de Rham critical set");
        assert!(cw.unresolved.is_empty());

        // Off the critical set the twisted complex is exact.
        for k in [qz(5), qq(1, 2), qq(-7, 3)] {
            if cw.weights.contains(&k) {
                continue;
            }
            for h in 0..=s.ext.dim {
                assert_eq!(
                    cohomology(&s, Theory::DeRham, h, &k).dimension,
                    0,
                    "{name}: H^{h} at non-critical k = {} is nonzero",
                    fmt_q(&k)
                );
            }
        }
    }

    // The union over all four theories covers the reference windows.
    for (name, a, b) in [("rh3", -2i64, 2i64), ("d4", -2, 2), ("ot21", -3, 3)] {
        let s = builtin(name, &CatalogParams::default()).unwrap().structure;
        let cw = critical_weights(&s, &Theory::ALL);
        assert_eq!(cw.weights, window(a, b), "{name}: full critical set");
    }
}

#[test]
fn representatives_generate_their_groups() {
    // Each returned representative list is linearly independent with the
    // advertised cardinality, and every member is a cocycle.
    for name in ["rh3", "d4"] {
        let s = builtin(name, &CatalogParams::default()).unwrap().structure;
        for t in Theory::ALL {
            for h in 0..=s.ext.dim {
                for k in window(-2, 2) {
                    let g = cohomology(&s, t, h, &k);
                    assert_eq!(g.representatives.len(), g.dimension);
                    for rep in &g.representatives {
                        assert!(!rep.is_zero());
                        assert_eq!(rep.degree, h);
                        match t {
                            Theory::DeRham => {
                                assert!(s.d_k(&k).apply(&s.ext, rep).is_zero());
                            }
                            Theory::Delta => {
                                assert!(s.delta_k(&k).apply(&s.ext, rep).is_zero());
                            }
                            Theory::BottChern => {
                                assert!(s.d_k(&k).apply(&s.ext, rep).is_zero());
                                assert!(s.delta_k(&k).apply(&s.ext, rep).is_zero());
                            }
                            Theory::Aeppli => {
                                let dk = s.d_k(&k);
                                let del = s.delta_k(&k);
                                assert!(del.compose(&dk, &s.ext).apply(&s.ext, rep).is_zero());
                            }
                        }
                    }
                }
            }
        }
    }
}
