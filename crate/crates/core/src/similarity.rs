//! Similarity decision and explicit similarity transforms.
//!
//! Two operators are similar iff, for every eigenvalue `λ` and every `k ≥ 1`,
//! the dimensions of `(A−λ)^k X` and `(B−λ)^k X` agree. The fingerprint below
//! records exactly those dimensions (cut at stabilization), is computed from
//! ranks of powers alone — independently of chain construction — and is
//! therefore a complete similarity invariant. The explicit transform runs
//! both full decompositions instead: the canonical ordering forces equal
//! Jordan matrices, so `S = P_B · P_A^{-1}` conjugates one operator into the
//! other.

use std::collections::BTreeMap;

use crate::eigen::{self, EigenvalueReport};
use crate::error::Error;
use crate::jordan;
use crate::linalg::ExactMatrix;
use crate::scalar::GaussianRational;

/// Map eigenvalue → `[d_1, …, d_a]` with `d_k = dim (A−λ)^k X`, cut at the
/// first repeat. Together with the ambient dimension this determines the
/// whole block structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityFingerprint {
    pub ambient_dim: usize,
    pub entries: BTreeMap<GaussianRational, Vec<usize>>,
}

/// Everything `is_similar`/`similarity_transform` learn about a pair.
#[derive(Clone, Debug)]
pub struct PairVerdict {
    pub similar: bool,
    pub fingerprint_a: SimilarityFingerprint,
    pub fingerprint_b: SimilarityFingerprint,
    /// Invertible `S` with `B·S = S·A`, present iff `similar`.
    pub transform: Option<ExactMatrix>,
}

/// Rank sequence of powers of the shifted operator, strictly decreasing up
/// to stabilization.
fn rank_sequence(a: &ExactMatrix, lambda: &GaussianRational) -> Vec<usize> {
    let m = a.shifted(lambda);
    let mut power = m.clone();
    let mut prev = a.rows();
    let mut out = Vec::new();
    loop {
        let r = power.rank();
        if r == prev {
            return out;
        }
        out.push(r);
        prev = r;
        power = power.mul(&m);
    }
}

fn complete_report(
    a: &ExactMatrix,
    hints: Option<&[GaussianRational]>,
) -> Result<EigenvalueReport, Error> {
    let report = eigen::find_eigenvalues(a, hints)?;
    if !report.complete {
        return Err(Error::RequiresEigenvalueHint {
            detail: format!(
                "supplied eigenvalues account for {} of {} dimensions",
                report.multiplicity_sum(),
                a.rows()
            ),
        });
    }
    Ok(report)
}

/// Rank sequences of all eigenvalues of `a`.
pub fn fingerprint(
    a: &ExactMatrix,
    hints: Option<&[GaussianRational]>,
) -> Result<SimilarityFingerprint, Error> {
    assert!(a.is_square());
    let report = complete_report(a, hints)?;
    let entries = report
        .eigenvalues
        .iter()
        .map(|(lambda, _)| (lambda.clone(), rank_sequence(a, lambda)))
        .collect();
    Ok(SimilarityFingerprint {
        ambient_dim: a.rows(),
        entries,
    })
}

/// Hints resolved per side of a pair; `None` means "use the built-in
/// search".
pub type PairHints = (Option<Vec<GaussianRational>>, Option<Vec<GaussianRational>>);

/// Splits a shared candidate list between the two matrices of a pair: each
/// hint is kept for the matrices it verifies on, and a hint that is an
/// eigenvalue of neither is rejected. A side left with no verified hints
/// falls back to the built-in search.
pub fn split_pair_hints(
    a: &ExactMatrix,
    b: &ExactMatrix,
    hints: &[GaussianRational],
) -> Result<PairHints, Error> {
    let mut for_a = Vec::new();
    let mut for_b = Vec::new();
    for h in hints {
        let va = eigen::verify_eigenvalue(a, h);
        let vb = eigen::verify_eigenvalue(b, h);
        if !va && !vb {
            return Err(Error::InvalidHint {
                hint: h.to_string(),
            });
        }
        if va {
            for_a.push(h.clone());
        }
        if vb {
            for_b.push(h.clone());
        }
    }
    let opt = |v: Vec<GaussianRational>| if v.is_empty() { None } else { Some(v) };
    Ok((opt(for_a), opt(for_b)))
}

/// Decides similarity and, on success, produces the explicit transform.
pub fn pair_analysis(
    a: &ExactMatrix,
    hints_a: Option<&[GaussianRational]>,
    b: &ExactMatrix,
    hints_b: Option<&[GaussianRational]>,
) -> Result<PairVerdict, Error> {
    let fa = fingerprint(a, hints_a)?;
    let fb = fingerprint(b, hints_b)?;
    let similar = fa == fb;
    let transform = if similar {
        let da = jordan::jordan_decompose(a, hints_a)?;
        let db = jordan::jordan_decompose(b, hints_b)?;
        if da.j != db.j {
            return Err(Error::VerificationFailed(
                "equal fingerprints must canonicalize to the same Jordan matrix".into(),
            ));
        }
        let s = db.p.mul(&da.p.invert()?);
        if b.mul(&s) != s.mul(a) {
            return Err(Error::VerificationFailed("B*S != S*A".into()));
        }
        Some(s)
    } else {
        None
    };
    Ok(PairVerdict {
        similar,
        fingerprint_a: fa,
        fingerprint_b: fb,
        transform,
    })
}

/// The rank-sequence criterion: true iff the fingerprints agree as maps.
pub fn is_similar(a: &ExactMatrix, b: &ExactMatrix) -> Result<bool, Error> {
    if a.rows() != b.rows() {
        return Ok(false);
    }
    Ok(pair_analysis(a, None, b, None)?.similar)
}

/// Invertible `S` with `B·S = S·A`, or `None` when the matrices are not
/// similar.
pub fn similarity_transform(
    a: &ExactMatrix,
    b: &ExactMatrix,
) -> Result<Option<ExactMatrix>, Error> {
    if a.rows() != b.rows() {
        return Ok(None);
    }
    Ok(pair_analysis(a, None, b, None)?.transform)
}

/// Recovers the block structure from a fingerprint alone: with `d_0 = n`,
/// the number of λ-blocks of size ≥ k is `d_{k−1} − d_k`, so the number of
/// size exactly `k` is `d_{k−1} − 2 d_k + d_{k+1}` (ranks frozen past
/// stabilization).
pub fn structure_from_fingerprint(
    f: &SimilarityFingerprint,
) -> BTreeMap<GaussianRational, Vec<usize>> {
    let mut out = BTreeMap::new();
    for (lambda, dims) in &f.entries {
        let a = dims.len();
        let d = |k: usize| -> usize {
            if k == 0 {
                f.ambient_dim
            } else if k <= a {
                dims[k - 1]
            } else {
                dims[a - 1]
            }
        };
        let mut sizes = Vec::new();
        for k in (1..=a).rev() {
            let exactly = (d(k - 1) - d(k)) - (d(k) - d(k + 1));
            for _ in 0..exactly {
                sizes.push(k);
            }
        }
        out.insert(lambda.clone(), sizes);
    }
    out
}

/// The Cayley–Hamilton corollary, tested exactly: the product of
/// `(A−λI)^{m_λ}` over the distinct eigenvalues is the zero matrix (with
/// `m_λ = dim X − dim R_a` taken from the rank stabilization), and so is the
/// characteristic polynomial evaluated at `A`. The eigenvalue report's
/// multiplicities are cross-checked against the filtration values.
pub fn cayley_hamilton_check(
    a: &ExactMatrix,
    hints: Option<&[GaussianRational]>,
) -> Result<bool, Error> {
    assert!(a.is_square());
    let n = a.rows();
    let report = complete_report(a, hints)?;
    let mut product = ExactMatrix::identity(n);
    for (lambda, multiplicity) in &report.eigenvalues {
        let m_lambda = n - rank_sequence(a, lambda).last().copied().unwrap_or(n);
        if m_lambda != *multiplicity {
            return Err(Error::CountingViolation(format!(
                "eigenvalue {lambda}: multiplicity {multiplicity} vs filtration {m_lambda}"
            )));
        }
        product = product.mul(&a.shifted(lambda).pow(m_lambda));
    }
    Ok(product.is_zero() && eigen::char_poly(a).eval_matrix(a).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[&str]]) -> ExactMatrix {
        ExactMatrix::from_str_rows(rows).unwrap()
    }

    fn g(s: &str) -> GaussianRational {
        GaussianRational::parse(s).unwrap()
    }

    fn fp(n: usize, pairs: &[(&str, &[usize])]) -> SimilarityFingerprint {
        SimilarityFingerprint {
            ambient_dim: n,
            entries: pairs
                .iter()
                .map(|(l, dims)| (g(l), dims.to_vec()))
                .collect(),
        }
    }

    #[test]
    fn fingerprint_examples() {
        assert_eq!(
            fingerprint(&ExactMatrix::zeros(2, 2), None).unwrap(),
            fp(2, &[("0", &[0])])
        );
        assert_eq!(
            fingerprint(&m(&[&["0", "1"], &["0", "0"]]), None).unwrap(),
            fp(2, &[("0", &[1, 0])])
        );
        assert_eq!(
            fingerprint(&m(&[&["2", "0"], &["0", "3"]]), None).unwrap(),
            fp(2, &[("2", &[1]), ("3", &[1])])
        );
    }

    #[test]
    fn is_similar_examples() {
        let a = m(&[&["0", "1"], &["0", "0"]]);
        assert!(is_similar(&a, &a).unwrap());
        assert!(!is_similar(&a, &ExactMatrix::zeros(2, 2)).unwrap());
        assert!(!is_similar(&a, &ExactMatrix::zeros(3, 3)).unwrap());
    }

    #[test]
    fn transform_for_identical_matrices_is_identity() {
        let a = m(&[&["2", "0"], &["0", "3"]]);
        let s = similarity_transform(&a, &a).unwrap().unwrap();
        assert_eq!(s, ExactMatrix::identity(2));
    }

    #[test]
    fn transform_for_swapped_diagonal_is_the_permutation() {
        let a = m(&[&["2", "0"], &["0", "3"]]);
        let b = m(&[&["3", "0"], &["0", "2"]]);
        let s = similarity_transform(&a, &b).unwrap().unwrap();
        assert_eq!(s, m(&[&["0", "1"], &["1", "0"]]));
        assert_eq!(b.mul(&s), s.mul(&a));
    }

    #[test]
    fn transform_absent_for_non_similar_pair() {
        let a = m(&[&["0", "1"], &["0", "0"]]);
        assert_eq!(similarity_transform(&a, &ExactMatrix::zeros(2, 2)).unwrap(), None);
    }

    #[test]
    fn structure_from_fingerprint_examples() {
        assert_eq!(
            structure_from_fingerprint(&fp(2, &[("0", &[1, 0])])),
            [(g("0"), vec![2])].into_iter().collect()
        );
        assert_eq!(
            structure_from_fingerprint(&fp(2, &[("0", &[0])])),
            [(g("0"), vec![1, 1])].into_iter().collect()
        );
        assert_eq!(
            structure_from_fingerprint(&fp(2, &[("2", &[1]), ("3", &[1])])),
            [(g("2"), vec![1]), (g("3"), vec![1])].into_iter().collect()
        );
    }

    #[test]
    fn cayley_hamilton_examples() {
        assert!(cayley_hamilton_check(&m(&[&["2", "0"], &["0", "3"]]), None).unwrap());
        let jb = jordan::jordan_block(&g("4"), 3);
        assert!(cayley_hamilton_check(&jb, None).unwrap());
    }

    #[test]
    fn split_pair_hints_filters_per_side() {
        let a = m(&[&["1i", "0"], &["0", "-1i"]]);
        let b = m(&[&["2", "0"], &["0", "2"]]);
        let (ha, hb) = split_pair_hints(&a, &b, &[g("1i"), g("-1i"), g("2")]).unwrap();
        assert_eq!(ha, Some(vec![g("1i"), g("-1i")]));
        assert_eq!(hb, Some(vec![g("2")]));

        match split_pair_hints(&a, &b, &[g("7")]) {
            Err(Error::InvalidHint { hint }) => assert_eq!(hint, "7"),
            other => panic!("expected InvalidHint, got {other:?}"),
        }
    }
}
