//! Data-parallel helpers for sweeping many independent matrices.
//!
//! Every decomposition is pure and self-contained, so corpora parallelize
//! trivially. With the default `parallel` feature the work is spread over a
//! rayon pool; without it the same entry points run sequentially. Results
//! are collected in input order either way, so output is identical across
//! both modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Error;
use crate::jordan::{jordan_decompose, Decomposition};
use crate::linalg::ExactMatrix;

/// Maps `f` over the items, in parallel when the `parallel` feature is
/// enabled. Order of results matches the input.
pub fn run<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential twin of [`run`], kept unconditionally for baseline
/// comparisons.
pub fn run_sequential<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Decomposes a corpus of matrices (no hints).
pub fn decompose_batch(matrices: &[ExactMatrix]) -> Vec<Result<Decomposition, Error>> {
    run(matrices, |m| jordan_decompose(m, None))
}

/// Sequential twin of [`decompose_batch`].
pub fn decompose_batch_sequential(
    matrices: &[ExactMatrix],
) -> Vec<Result<Decomposition, Error>> {
    run_sequential(matrices, |m| jordan_decompose(m, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::conjugated_jordan;
    use crate::scalar::GaussianRational;
    use std::collections::BTreeMap;

    #[test]
    fn parallel_and_sequential_agree() {
        let spec: BTreeMap<_, _> = [(GaussianRational::from_int(2), vec![2, 1])]
            .into_iter()
            .collect();
        let matrices: Vec<ExactMatrix> = (0..8)
            .map(|seed| conjugated_jordan(&spec, seed).unwrap().matrix)
            .collect();
        let par = decompose_batch(&matrices);
        let seq = decompose_batch_sequential(&matrices);
        assert_eq!(par.len(), seq.len());
        for (p, s) in par.iter().zip(seq.iter()) {
            let (p, s) = (p.as_ref().unwrap(), s.as_ref().unwrap());
            assert_eq!(p.p, s.p);
            assert_eq!(p.j, s.j);
            assert_eq!(p.structure, s.structure);
        }
    }
}
