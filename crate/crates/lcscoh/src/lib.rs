//! Exact cohomology of locally conformally symplectic Lie algebras.
//!
//! A locally conformally symplectic (lcs) structure on a Lie algebra is a
//! nondegenerate 2-form Ω with `dΩ = θ∧Ω` for a closed 1-form θ (the Lee
//! form). The twisted differentials `d_k = d − kθ∧·` and their symplectic
//! counterparts `δ_k = d_{k−1}Λ − Λd_k` organize into weight pencils, and
//! each weight carries four cohomologies: the Morse–Novikov theory of
//! `d_k`, the `δ_k`-theory, and lcs analogues of Bott–Chern and Aeppli.
//!
//! This crate computes all of them exactly over ℚ, verifies the operator
//! calculus (bi-differential identities, sl(2) commutation relations,
//! twisted Leibniz rules), checks star-dualities and Hard Lefschetz maps
//! on the quotients, cross-checks every dimension against the kernel of
//! the matching Laplacian, and locates the critical weights where the
//! pencil ranks jump. A small integer-polynomial toolbox (Sturm chains,
//! mod-p factorization patterns, quartic resolvents, a reality-test
//! recurrence) covers the arithmetic side of the solvmanifold examples.
//!
//! ```
//! use lcscoh::catalog::builtin;
//! use lcscoh::cohomology::{cohomology, Theory};
//! use lcscoh::scalar::qz;
//!
//! let kt = builtin("rh3", &Default::default()).unwrap();
//! let h1 = cohomology(&kt.structure, Theory::DeRham, 1, &qz(0));
//! assert_eq!(h1.dimension, 3);
//! ```

pub mod arith;
pub mod catalog;
pub mod cohomology;
pub mod exterior;
pub mod liealg;
pub mod lcs;
pub mod linalg;
pub mod qpoly;
pub mod report;
pub mod scalar;
