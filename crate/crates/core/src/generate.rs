//! Test-case generator: matrices with known Jordan structure.
//!
//! The canonical Jordan matrix of the requested structure is conjugated by a
//! pseudo-random unimodular integer matrix built as a product of elementary
//! row operations with multipliers in `{-3..3}`. The determinant is ±1 by
//! construction, so the conjugation is exactly invertible and entry growth
//! stays modest. Output is fully determined by the structure and the seed.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::jordan::canonical_jordan_matrix;
use crate::linalg::ExactMatrix;
use crate::scalar::GaussianRational;

/// A generated matrix together with the data that produced it.
#[derive(Clone, Debug)]
pub struct GeneratedMatrix {
    /// `S · J · S^{-1}`.
    pub matrix: ExactMatrix,
    /// The canonical Jordan matrix of the requested structure.
    pub jordan_form: ExactMatrix,
    /// The unimodular conjugator `S`.
    pub conjugator: ExactMatrix,
}

/// Pseudo-random unimodular integer matrix, deterministic per seed.
pub fn unimodular_matrix(n: usize, seed: u64) -> ExactMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = ExactMatrix::identity(n);
    if n < 2 {
        return s;
    }
    for _ in 0..2 * n {
        match rng.random_range(0..10u32) {
            8 => {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                if i != j {
                    for c in 0..n {
                        let tmp = s.at(i, c).clone();
                        *s.at_mut(i, c) = s.at(j, c).clone();
                        *s.at_mut(j, c) = tmp;
                    }
                }
            }
            9 => {
                let i = rng.random_range(0..n);
                for c in 0..n {
                    let v = -s.at(i, c);
                    *s.at_mut(i, c) = v;
                }
            }
            _ => {
                let i = rng.random_range(0..n);
                let mut j = rng.random_range(0..n);
                while j == i {
                    j = rng.random_range(0..n);
                }
                let mut c = 0i64;
                while c == 0 {
                    c = rng.random_range(-3..=3i64);
                }
                let factor = GaussianRational::from_int(c);
                for col in 0..n {
                    let v = s.at(i, col) + &(s.at(j, col) * &factor);
                    *s.at_mut(i, col) = v;
                }
            }
        }
    }
    s
}

/// Builds `S · J · S^{-1}` for the requested block structure.
pub fn conjugated_jordan(
    structure: &BTreeMap<GaussianRational, Vec<usize>>,
    seed: u64,
) -> Result<GeneratedMatrix, Error> {
    let mut normalized = BTreeMap::new();
    for (lambda, sizes) in structure {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::VerificationFailed(format!(
                "structure for eigenvalue {lambda} must list positive block sizes"
            )));
        }
        let mut sorted = sizes.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        normalized.insert(lambda.clone(), sorted);
    }
    let jordan_form = canonical_jordan_matrix(&normalized);
    let n = jordan_form.rows();
    let conjugator = unimodular_matrix(n, seed);
    let inverse = conjugator
        .invert()
        .expect("unimodular matrices are invertible");
    let matrix = conjugator.mul(&jordan_form).mul(&inverse);
    Ok(GeneratedMatrix {
        matrix,
        jordan_form,
        conjugator,
    })
}
