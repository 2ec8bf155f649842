//! Property-based invariants for the exact arithmetic and the
//! decomposition pipeline.

use std::collections::BTreeMap;

use num::BigInt;
use proptest::prelude::*;

use jcf_core::eigen::{char_poly, find_eigenvalues, multiplicity_by_stabilization};
use jcf_core::generate::conjugated_jordan;
use jcf_core::jordan::{
    canonical_jordan_matrix, jordan_decompose, kernel_profile, range_filtration,
};
use jcf_core::similarity::{fingerprint, is_similar, structure_from_fingerprint};
use jcf_core::{ExactMatrix, GaussianRational, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9)
        .prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

fn scalar() -> impl Strategy<Value = GaussianRational> {
    (rational(), rational()).prop_map(|(re, im)| GaussianRational::new(re, im))
}

/// Small integer matrices keep ranks interesting and runtimes low.
fn small_matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(-2i64..=2, n * n).prop_map(move |v| {
            ExactMatrix::new(
                n,
                n,
                v.into_iter().map(GaussianRational::from_int).collect(),
            )
        })
    })
}

fn rect_matrix() -> impl Strategy<Value = ExactMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-2i64..=2, r * c).prop_map(move |v| {
            ExactMatrix::new(
                r,
                c,
                v.into_iter().map(GaussianRational::from_int).collect(),
            )
        })
    })
}

/// Random Jordan structure over a small eigenvalue pool, total size <= 5.
fn structure() -> impl Strategy<Value = BTreeMap<GaussianRational, Vec<usize>>> {
    let pool = ["0", "1", "-1", "2", "1/2", "1i", "-1i", "1+1i"];
    proptest::collection::vec((0..pool.len(), 1usize..=3), 1..=3).prop_map(move |parts| {
        let mut out: BTreeMap<GaussianRational, Vec<usize>> = BTreeMap::new();
        let mut total = 0usize;
        for (idx, size) in parts {
            if total + size > 5 {
                break;
            }
            total += size;
            out.entry(GaussianRational::parse(pool[idx]).unwrap())
                .or_default()
                .push(size);
        }
        if out.is_empty() {
            out.insert(GaussianRational::from_int(0), vec![1]);
        }
        for sizes in out.values_mut() {
            sizes.sort_unstable_by(|a, b| b.cmp(a));
        }
        out
    })
}

proptest! {
    #[test]
    fn field_axioms_hold_exactly(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn nonzero_scalars_have_exact_inverses(a in scalar()) {
        prop_assume!(!a.is_zero());
        prop_assert_eq!(&a * &a.inv().unwrap(), GaussianRational::one());
    }

    #[test]
    fn parse_format_round_trip(a in scalar()) {
        prop_assert_eq!(GaussianRational::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn rank_nullity(m in rect_matrix()) {
        prop_assert_eq!(m.rank() + m.kernel_basis().dim(), m.cols());
    }

    #[test]
    fn rref_is_idempotent(m in rect_matrix()) {
        let once = m.rref();
        let twice = once.reduced.rref();
        prop_assert_eq!(&twice.reduced, &once.reduced);
        prop_assert_eq!(twice.pivot_cols, once.pivot_cols);
    }

    #[test]
    fn solve_particular_is_sound(m in rect_matrix(), rhs in proptest::collection::vec(-2i64..=2, 1..=4)) {
        prop_assume!(rhs.len() == m.rows());
        let b: Vec<GaussianRational> = rhs.into_iter().map(GaussianRational::from_int).collect();
        match m.solve_particular(&b) {
            Some(x) => prop_assert_eq!(m.mul_vec(&x), b),
            None => {
                // Unsolvable iff appending b raises the rank.
                let aug = m.hstack(&ExactMatrix::from_columns(m.rows(), std::slice::from_ref(&b)));
                prop_assert!(aug.rank() > m.rank());
            }
        }
    }

    #[test]
    fn restriction_commutes_with_inclusion(m in small_matrix()) {
        // The image of A^2 is invariant under A, whatever A is.
        let s = jcf_core::Subspace::canonical_column_space(&m.pow(2));
        let restricted = jcf_core::linalg::restrict_operator(&m, &s).unwrap();
        prop_assert_eq!(s.basis().mul(&restricted), m.mul(s.basis()));
    }

    #[test]
    fn char_poly_is_conjugation_invariant(st in structure(), seed in 0u64..500) {
        let g = conjugated_jordan(&st, seed).unwrap();
        prop_assert_eq!(char_poly(&g.matrix), char_poly(&g.jordan_form));
    }

    #[test]
    fn structure_recovery_under_conjugation(st in structure(), seed in 0u64..500) {
        let g = conjugated_jordan(&st, seed).unwrap();
        let hints: Vec<GaussianRational> = st.keys().cloned().collect();
        let dec = jordan_decompose(&g.matrix, Some(&hints)).unwrap();
        prop_assert_eq!(dec.structure, st);
    }

    #[test]
    fn canonical_jordan_matrices_are_fixed_points(st in structure()) {
        let j = canonical_jordan_matrix(&st);
        let hints: Vec<GaussianRational> = st.keys().cloned().collect();
        let dec = jordan_decompose(&j, Some(&hints)).unwrap();
        prop_assert_eq!(dec.j, j);
        let n = dec.p.rows();
        prop_assert_eq!(dec.p, ExactMatrix::identity(n));
    }

    #[test]
    fn block_counts_match_kernel_profile(st in structure(), seed in 0u64..500) {
        let g = conjugated_jordan(&st, seed).unwrap();
        let hints: Vec<GaussianRational> = st.keys().cloned().collect();
        let dec = jordan_decompose(&g.matrix, Some(&hints)).unwrap();
        for (lambda, sizes) in &dec.structure {
            let f = range_filtration(&g.matrix, lambda).unwrap();
            let profile = kernel_profile(&f);
            for (k, &n_k) in profile.counts.iter().enumerate() {
                let at_least = sizes.iter().filter(|&&s| s > k).count();
                prop_assert_eq!(at_least, n_k);
            }
        }
    }

    #[test]
    fn fingerprint_is_conjugation_invariant_and_matches_structure(st in structure(), seed in 0u64..500) {
        let g = conjugated_jordan(&st, seed).unwrap();
        let hints: Vec<GaussianRational> = st.keys().cloned().collect();
        let fa = fingerprint(&g.matrix, Some(&hints)).unwrap();
        let fj = fingerprint(&g.jordan_form, Some(&hints)).unwrap();
        prop_assert_eq!(&fa, &fj);
        // Two independent computation paths agree on the block structure.
        prop_assert_eq!(structure_from_fingerprint(&fa), st);
    }

    #[test]
    fn eigen_multiplicity_matches_filtration(st in structure(), seed in 0u64..500) {
        let g = conjugated_jordan(&st, seed).unwrap();
        let hints: Vec<GaussianRational> = st.keys().cloned().collect();
        let report = find_eigenvalues(&g.matrix, Some(&hints)).unwrap();
        prop_assert!(report.complete);
        for (lambda, mult) in &report.eigenvalues {
            prop_assert_eq!(*mult, multiplicity_by_stabilization(&g.matrix, lambda));
            let f = range_filtration(&g.matrix, lambda).unwrap();
            prop_assert_eq!(*mult, f.dims[0] - f.dims[f.stabilization]);
        }
    }
}

#[test]
fn is_similar_is_an_equivalence_relation_on_a_small_set() {
    // Three structures, two conjugates each.
    let specs = ["2:2,1", "2:1,1,1", "0:2;3:1"];
    let mut set = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let st: BTreeMap<GaussianRational, Vec<usize>> = spec
            .split(';')
            .map(|group| {
                let (l, sizes) = group.split_once(':').unwrap();
                (
                    GaussianRational::parse(l).unwrap(),
                    sizes.split(',').map(|s| s.parse().unwrap()).collect(),
                )
            })
            .collect();
        for seed in [0u64, 1] {
            set.push((i, conjugated_jordan(&st, seed + 10 * i as u64).unwrap().matrix));
        }
    }
    for (ia, a) in &set {
        assert!(is_similar(a, a).unwrap(), "reflexivity");
        for (ib, b) in &set {
            let ab = is_similar(a, b).unwrap();
            assert_eq!(ab, is_similar(b, a).unwrap(), "symmetry");
            assert_eq!(ab, ia == ib, "similar iff generated from the same spec");
            for (ic, c) in &set {
                if ab && is_similar(b, c).unwrap() {
                    assert!(is_similar(a, c).unwrap(), "transitivity {ia} {ib} {ic}");
                }
            }
        }
    }
}
