//! Jordan chain construction and the full decomposition driver.
//!
//! For one eigenvalue the engine computes the descending range filtration
//! `R_0 ⊇ R_1 ⊇ … ⊇ R_a` of images of powers of the shifted operator, reads
//! the kernel dimensions `n_k = r_k − r_{k+1}` off it, picks nested kernel
//! bases level by level, and lifts each new kernel vector `x^0` to a full
//! chain `x^0, …, x^k` by solving `(A−λ)^k x^k = x^0` exactly. The counting
//! identity `Σ (k+1)(n_k − n_{k+1}) = dim X − dim R_a` and an exact rank
//! check on all chain vectors together with a basis of `R_a` are asserted at
//! runtime for every eigenvalue. The driver then recurses on the restriction
//! of the operator to `R_a`, which no longer has this eigenvalue, and maps
//! the returned chains back through the accumulated change of basis.

use std::collections::BTreeMap;

use crate::eigen::{self, Polynomial};
use crate::error::Error;
use crate::linalg::{extend_basis, restrict_operator, ExactMatrix, Subspace};
use crate::scalar::GaussianRational;

/// Per-eigenvalue descending chain of range spaces `R_k = (A−λ)^k X`, kept
/// up to the stabilization index `a` (the first `k` with `r_{k+1} = r_k`).
///
/// Construction certifies stabilization by computing one step past `a` and
/// checking that the dimension really repeats, and that the dimensions are
/// strictly decreasing before that.
#[derive(Clone, Debug)]
pub struct RangeFiltration {
    pub lambda: GaussianRational,
    /// `R_0 .. R_a`; `R_0` is the full ambient space.
    pub spaces: Vec<Subspace>,
    /// `r_0 .. r_a`.
    pub dims: Vec<usize>,
    /// The stabilization index `a`.
    pub stabilization: usize,
}

/// Kernel dimensions `n_k = dim ker((A−λ)|R_k)` for `k = 0 .. a-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelProfile {
    pub lambda: GaussianRational,
    pub counts: Vec<usize>,
}

/// One Jordan chain: `(A−λ)x^0 = 0` and `(A−λ)x^j = x^{j−1}` for `j ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanChain {
    pub lambda: GaussianRational,
    /// `x^0, x^1, …, x^k`; the chain length is `k+1`.
    pub vectors: Vec<Vec<GaussianRational>>,
}

impl JordanChain {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Exact check of the chain property against the operator.
    pub fn verify(&self, a: &ExactMatrix) -> bool {
        if self.vectors.is_empty() {
            return false;
        }
        let m = a.shifted(&self.lambda);
        if self.vectors.iter().any(|v| v.iter().all(GaussianRational::is_zero)) {
            return false;
        }
        let zero = vec![GaussianRational::zero(); a.rows()];
        if m.mul_vec(&self.vectors[0]) != zero {
            return false;
        }
        for j in 1..self.vectors.len() {
            if m.mul_vec(&self.vectors[j]) != self.vectors[j - 1] {
                return false;
            }
        }
        true
    }
}

/// A complete exact decomposition `A·P = P·J`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub p: ExactMatrix,
    pub j: ExactMatrix,
    pub chains: Vec<JordanChain>,
    /// Eigenvalue → descending block sizes.
    pub structure: BTreeMap<GaussianRational, Vec<usize>>,
}

/// Result of removing one eigenvalue from the operator.
#[derive(Clone, Debug)]
pub struct PeeledEigenvalue {
    /// All chains for this eigenvalue, longest first.
    pub chains: Vec<JordanChain>,
    /// `R_a`, the subspace the remaining eigenvalues live in.
    pub rest_space: Subspace,
    /// The operator restricted to `R_a`, in `R_a` coordinates.
    pub rest_operator: ExactMatrix,
}

/// Computes the range filtration of `a` at `lambda`.
///
/// Each `R_{k+1}` is the image of the shifted operator applied to the basis
/// of `R_k`, stored with its canonical reduced column-echelon basis.
pub fn range_filtration(
    a: &ExactMatrix,
    lambda: &GaussianRational,
) -> Result<RangeFiltration, Error> {
    assert!(a.is_square());
    let n = a.rows();
    let m = a.shifted(lambda);
    let mut spaces = vec![Subspace::full_space(n)];
    let mut dims = vec![n];
    loop {
        let image = Subspace::canonical_column_space(&m.mul(spaces.last().unwrap().basis()));
        let r = image.dim();
        let r_prev = *dims.last().unwrap();
        if r == r_prev {
            // Stabilized: this extra step is the certificate r_{a+1} = r_a.
            let a_index = spaces.len() - 1;
            if a_index == 0 {
                return Err(Error::NotAnEigenvalue {
                    lambda: lambda.to_string(),
                });
            }
            return Ok(RangeFiltration {
                lambda: lambda.clone(),
                spaces,
                dims,
                stabilization: a_index,
            });
        }
        assert!(r < r_prev, "range dimensions cannot grow");
        spaces.push(image);
        dims.push(r);
    }
}

/// `n_k = r_k − r_{k+1}` for `k = 0 .. a−1`, by rank-nullity applied to the
/// restriction of the shifted operator to `R_k`.
pub fn kernel_profile(f: &RangeFiltration) -> KernelProfile {
    let counts: Vec<usize> = (0..f.stabilization)
        .map(|k| f.dims[k] - f.dims[k + 1])
        .collect();
    for k in 1..counts.len() {
        assert!(
            counts[k - 1] >= counts[k],
            "kernel dimensions must be non-increasing"
        );
    }
    KernelProfile {
        lambda: f.lambda.clone(),
        counts,
    }
}

/// Verifies the counting identity
/// `Σ_{k=0}^{a−1} (k+1)(n_k − n_{k+1}) = Σ n_k = Σ (r_k − r_{k+1}) = dim X − dim R_a`
/// and returns the common value (the number of chain vectors for this
/// eigenvalue).
pub fn counting_check(f: &RangeFiltration, profile: &KernelProfile) -> Result<usize, Error> {
    let a = f.stabilization;
    let n_at = |k: usize| -> usize {
        if k < profile.counts.len() {
            profile.counts[k]
        } else {
            0
        }
    };
    let weighted: usize = (0..a).map(|k| (k + 1) * (n_at(k) - n_at(k + 1))).sum();
    let plain: usize = profile.counts.iter().sum();
    let telescoped: usize = (0..a).map(|k| f.dims[k] - f.dims[k + 1]).sum();
    let expected = f.dims[0] - f.dims[a];
    if weighted != expected || plain != expected || telescoped != expected {
        return Err(Error::CountingViolation(format!(
            "lambda {}: weighted {weighted}, plain {plain}, telescoped {telescoped}, expected {expected}",
            f.lambda
        )));
    }
    Ok(weighted)
}

/// Chooses nested kernel bases level by level, descending from `k = a−1` to
/// `k = 0`: the vectors returned at level `k` extend the basis chosen so far
/// (a basis of `N_{k+1}`) to a basis of `N_k`, and each spawns a chain of
/// length `k+1`.
pub fn nested_kernel_bases(
    a: &ExactMatrix,
    f: &RangeFiltration,
) -> Result<Vec<Vec<Vec<GaussianRational>>>, Error> {
    let n = a.rows();
    let m = a.shifted(&f.lambda);
    let top = f.stabilization;
    let mut levels: Vec<Vec<Vec<GaussianRational>>> = vec![Vec::new(); top];
    let mut chosen: Vec<Vec<GaussianRational>> = Vec::new();
    for k in (0..top).rev() {
        let bk = f.spaces[k].basis();
        // Kernel of (A−λ) restricted to R_k, expressed in R_k coordinates
        // and mapped back into the ambient space.
        let coords = m.mul(bk).kernel_basis();
        let vectors: Vec<Vec<GaussianRational>> = coords
            .basis_columns()
            .iter()
            .map(|c| f.spaces[k].to_ambient(c))
            .collect();
        let nk = Subspace::new(ExactMatrix::from_columns(n, &vectors))?;
        let expected = f.dims[k] - f.dims[k + 1];
        if nk.dim() != expected {
            return Err(Error::CountingViolation(format!(
                "dim N_{k} = {} but r_{k} - r_{} = {expected}",
                nk.dim(),
                k + 1
            )));
        }
        let inner = Subspace::new(ExactMatrix::from_columns(n, &chosen))?;
        let added = extend_basis(&inner, &nk)?;
        chosen.extend(added.iter().cloned());
        levels[k] = added;
    }
    Ok(levels)
}

/// Lifts a kernel vector `x0 ∈ N_k` to a chain of length `k+1`: the top
/// vector is the canonical solution of `(A−λ)^k x = x0` (free variables
/// zero) and the intermediate vectors are its images under `A−λ`.
pub fn lift_chain(
    a: &ExactMatrix,
    lambda: &GaussianRational,
    x0: &[GaussianRational],
    k: usize,
) -> Result<JordanChain, Error> {
    let m = a.shifted(lambda);
    let mut vectors = vec![x0.to_vec()];
    if k > 0 {
        let top = m.pow(k).solve_particular(x0).ok_or(Error::NoPreimage)?;
        let mut downward = vec![top];
        for _ in 1..k {
            let next = m.mul_vec(downward.last().unwrap());
            downward.push(next);
        }
        downward.reverse();
        vectors.extend(downward);
    }
    Ok(JordanChain {
        lambda: lambda.clone(),
        vectors,
    })
}

/// Removes one eigenvalue: constructs all of its chains and returns the
/// stabilized range space with the operator restricted to it.
pub fn peel_eigenvalue(
    a: &ExactMatrix,
    lambda: &GaussianRational,
) -> Result<PeeledEigenvalue, Error> {
    let n = a.rows();
    let f = range_filtration(a, lambda)?;
    let profile = kernel_profile(&f);
    let expected_total = counting_check(&f, &profile)?;

    let levels = nested_kernel_bases(a, &f)?;
    let mut chains = Vec::new();
    for k in (0..f.stabilization).rev() {
        for x0 in &levels[k] {
            chains.push(lift_chain(a, lambda, x0, k)?);
        }
    }
    let total: usize = chains.iter().map(JordanChain::len).sum();
    if total != expected_total {
        return Err(Error::CountingViolation(format!(
            "constructed {total} chain vectors, expected {expected_total}"
        )));
    }

    // The chain vectors together with a basis of R_a must span the whole
    // space: one exact rank check replaces the independence induction.
    let rest_space = f.spaces[f.stabilization].clone();
    let mut columns = rest_space.basis_columns();
    for chain in &chains {
        columns.extend(chain.vectors.iter().cloned());
    }
    if ExactMatrix::from_columns(n, &columns).rank() != n {
        return Err(Error::IndependenceViolation);
    }

    let rest_operator = restrict_operator(a, &rest_space)?;
    Ok(PeeledEigenvalue {
        chains,
        rest_space,
        rest_operator,
    })
}

/// A single Jordan block.
pub fn jordan_block(lambda: &GaussianRational, size: usize) -> ExactMatrix {
    ExactMatrix::from_fn(size, size, |r, c| {
        if r == c {
            lambda.clone()
        } else if c == r + 1 {
            GaussianRational::one()
        } else {
            GaussianRational::zero()
        }
    })
}

/// Block-diagonal Jordan matrix for a structure map, in canonical order:
/// eigenvalues ascending, block sizes descending within each eigenvalue.
pub fn canonical_jordan_matrix(
    structure: &BTreeMap<GaussianRational, Vec<usize>>,
) -> ExactMatrix {
    let n: usize = structure.values().flatten().sum();
    let mut j = ExactMatrix::zeros(n, n);
    let mut offset = 0;
    for (lambda, sizes) in structure {
        for &size in sizes {
            for t in 0..size {
                *j.at_mut(offset + t, offset + t) = lambda.clone();
                if t + 1 < size {
                    *j.at_mut(offset + t, offset + t + 1) = GaussianRational::one();
                }
            }
            offset += size;
        }
    }
    j
}

/// Full Jordan decomposition: peels eigenvalues in canonical ascending
/// order, recursing through the stabilized range spaces, and assembles
/// `(P, J)` with the exact verification `A·P = P·J` before returning.
pub fn jordan_decompose(
    a: &ExactMatrix,
    hints: Option<&[GaussianRational]>,
) -> Result<Decomposition, Error> {
    assert!(a.is_square());
    let n = a.rows();
    let report = eigen::find_eigenvalues(a, hints)?;
    if !report.complete {
        return Err(Error::RequiresEigenvalueHint {
            detail: format!(
                "supplied eigenvalues account for {} of {n} dimensions",
                report.multiplicity_sum()
            ),
        });
    }

    let mut chains: Vec<JordanChain> = Vec::new();
    let mut current = a.clone();
    // Maps coordinates of the current restricted operator back to the
    // ambient space of the original matrix.
    let mut embedding = ExactMatrix::identity(n);
    for (lambda, multiplicity) in &report.eigenvalues {
        let peeled = peel_eigenvalue(&current, lambda)?;
        let found: usize = peeled.chains.iter().map(JordanChain::len).sum();
        if found != *multiplicity {
            return Err(Error::CountingViolation(format!(
                "eigenvalue {lambda}: {found} chain vectors vs multiplicity {multiplicity}"
            )));
        }
        for chain in &peeled.chains {
            chains.push(JordanChain {
                lambda: chain.lambda.clone(),
                vectors: chain
                    .vectors
                    .iter()
                    .map(|v| embedding.mul_vec(v))
                    .collect(),
            });
        }
        embedding = embedding.mul(peeled.rest_space.basis());
        current = peeled.rest_operator;
    }
    if current.rows() != 0 {
        return Err(Error::VerificationFailed(format!(
            "{} dimensions left after all eigenvalues were peeled",
            current.rows()
        )));
    }

    let mut structure: BTreeMap<GaussianRational, Vec<usize>> = BTreeMap::new();
    let mut columns: Vec<Vec<GaussianRational>> = Vec::new();
    for chain in &chains {
        structure
            .entry(chain.lambda.clone())
            .or_default()
            .push(chain.len());
        columns.extend(chain.vectors.iter().cloned());
    }
    for sizes in structure.values() {
        debug_assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
    }
    let p = ExactMatrix::from_columns(n, &columns);
    let j = canonical_jordan_matrix(&structure);
    let dec = Decomposition {
        p,
        j,
        chains,
        structure,
    };
    dec.verify(a)?;
    Ok(dec)
}

impl Decomposition {
    /// Exact checks: `P` invertible, `A·P = P·J`, and every chain satisfies
    /// the chain property.
    pub fn verify(&self, a: &ExactMatrix) -> Result<(), Error> {
        let n = a.rows();
        if self.p.rows() != n || self.p.cols() != n {
            return Err(Error::VerificationFailed("P has the wrong shape".into()));
        }
        if self.p.rank() != n {
            return Err(Error::VerificationFailed("P is singular".into()));
        }
        if a.mul(&self.p) != self.p.mul(&self.j) {
            return Err(Error::VerificationFailed("A*P != P*J".into()));
        }
        for (idx, chain) in self.chains.iter().enumerate() {
            if !chain.verify(a) {
                return Err(Error::VerificationFailed(format!(
                    "chain {idx} violates the chain property"
                )));
            }
        }
        Ok(())
    }
}

/// Product of `(x − λ)^{a_λ}` over the distinct eigenvalues, where `a_λ` is
/// the stabilization index (equivalently the largest λ-block). Evaluating it
/// at the matrix gives zero, and no proper divisor does.
pub fn minimal_polynomial(
    a: &ExactMatrix,
    hints: Option<&[GaussianRational]>,
) -> Result<Polynomial, Error> {
    let dec = jordan_decompose(a, hints)?;
    let mut p = Polynomial::one();
    for (lambda, sizes) in &dec.structure {
        for _ in 0..sizes[0] {
            p = p.mul_linear(lambda);
        }
    }
    Ok(p)
}
