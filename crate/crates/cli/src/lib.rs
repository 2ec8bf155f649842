//! Command implementations and document formats for the `jcf` binary.
//!
//! Matrices travel as JSON documents whose entries are scalar-grammar
//! strings (`5`, `-3/7`, `1/2+1/3i`, `-1i`), never floats, so files are
//! exact and human-readable. All map keys are emitted in sorted order and
//! every command is deterministic: identical inputs produce byte-identical
//! outputs.
//!
//! Exit-code contract (see [`CliError::exit_code`] and the per-command
//! verdicts): 0 success / positive verdict, 1 negative verdict, 2 parse or
//! input error, 3 eigenvalue hints required, 4 invalid hint.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use jcf_core::eigen;
use jcf_core::generate::conjugated_jordan;
use jcf_core::jordan::{self, JordanChain};
use jcf_core::similarity::{self, SimilarityFingerprint};
use jcf_core::{Error, ExactMatrix, GaussianRational};

/// A square matrix with optional eigenvalue hints, as stored on disk.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixDocument {
    pub n: usize,
    pub entries: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalue_hints: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ChainDocument {
    pub lambda: String,
    pub vectors: Vec<Vec<String>>,
}

/// Output of `decompose`; `verified` is always true because emission happens
/// only after the exact `A*P = P*J` check inside the decomposition.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DecompositionDocument {
    pub structure: BTreeMap<String, Vec<usize>>,
    #[serde(rename = "J")]
    pub j: Vec<Vec<String>>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<String>>,
    pub chains: Vec<ChainDocument>,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FingerprintDocument {
    pub ambient_dim: usize,
    pub eigenvalues: BTreeMap<String, Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SimilarityDocument {
    pub similar: bool,
    pub fingerprint_a: FingerprintDocument,
    pub fingerprint_b: FingerprintDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transform: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerifyDocument {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Command-level error with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed input of any kind: bad JSON, bad scalar, non-square grid,
    /// bad structure spec, unreadable file. Exit 2.
    Input(String),
    /// Eigenvalues outside what the built-in search covers. Exit 3.
    HintRequired(String),
    /// A supplied hint is not an eigenvalue. Exit 4.
    InvalidHint(String),
    /// Internal invariant violation; must be unreachable. Exit 70.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::HintRequired(_) => 3,
            CliError::InvalidHint(_) => 4,
            CliError::Internal(_) => 70,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m)
            | CliError::HintRequired(m)
            | CliError::InvalidHint(m)
            | CliError::Internal(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => CliError::Input(e.to_string()),
            Error::RequiresEigenvalueHint { .. } => CliError::HintRequired(e.to_string()),
            Error::InvalidHint { .. } => CliError::InvalidHint(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message())
    }
}

impl std::error::Error for CliError {}

fn parse_scalar(s: &str) -> Result<GaussianRational, CliError> {
    GaussianRational::parse(s).map_err(|e| CliError::Input(format!("scalar {s:?}: {e}")))
}

/// Parses the matrix grid and embedded hints out of a document.
pub fn matrix_from_document(
    doc: &MatrixDocument,
) -> Result<(ExactMatrix, Option<Vec<GaussianRational>>), CliError> {
    if doc.entries.len() != doc.n {
        return Err(CliError::Input(format!(
            "document declares n={} but has {} rows",
            doc.n,
            doc.entries.len()
        )));
    }
    let mut rows = Vec::with_capacity(doc.n);
    for (r, row) in doc.entries.iter().enumerate() {
        if row.len() != doc.n {
            return Err(CliError::Input(format!(
                "row {r} has {} entries, expected {}",
                row.len(),
                doc.n
            )));
        }
        rows.push(
            row.iter()
                .map(|s| parse_scalar(s))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let matrix = if doc.n == 0 {
        ExactMatrix::zeros(0, 0)
    } else {
        ExactMatrix::from_rows(rows)
    };
    let hints = match &doc.eigenvalue_hints {
        None => None,
        Some(hs) => Some(
            hs.iter()
                .map(|s| parse_scalar(s))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    Ok((matrix, hints))
}

pub fn matrix_to_document(m: &ExactMatrix) -> MatrixDocument {
    MatrixDocument {
        n: m.rows(),
        entries: matrix_to_strings(m),
        eigenvalue_hints: None,
    }
}

fn matrix_to_strings(m: &ExactMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.at(r, c).to_string()).collect())
        .collect()
}

fn strings_to_matrix(rows: &[Vec<String>], n: usize, what: &str) -> Result<ExactMatrix, CliError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Input(format!("{what} is not {n}x{n}")));
    }
    let mut parsed = Vec::with_capacity(n);
    for row in rows {
        parsed.push(
            row.iter()
                .map(|s| parse_scalar(s))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(if n == 0 {
        ExactMatrix::zeros(0, 0)
    } else {
        ExactMatrix::from_rows(parsed)
    })
}

/// Parses a comma-separated list of scalar-grammar hints.
pub fn parse_hint_list(text: &str) -> Result<Vec<GaussianRational>, CliError> {
    text.split(',').map(|s| parse_scalar(s.trim())).collect()
}

/// Parses a structure spec of the form `lambda:size,size;lambda:size`, e.g.
/// `2:2,1;3:1` or `1i:2;-1i:2`.
pub fn parse_structure_spec(
    text: &str,
) -> Result<BTreeMap<GaussianRational, Vec<usize>>, CliError> {
    let mut out = BTreeMap::new();
    for group in text.split(';') {
        let (lambda_text, sizes_text) = group.split_once(':').ok_or_else(|| {
            CliError::Input(format!("structure group {group:?} is missing ':'"))
        })?;
        let lambda = parse_scalar(lambda_text.trim())?;
        let sizes: Vec<usize> = sizes_text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&v| v > 0)
                    .ok_or_else(|| {
                        CliError::Input(format!("bad block size {s:?} in structure spec"))
                    })
            })
            .collect::<Result<_, _>>()?;
        if out.insert(lambda.clone(), sizes).is_some() {
            return Err(CliError::Input(format!(
                "eigenvalue {lambda} appears twice in the structure spec"
            )));
        }
    }
    Ok(out)
}

fn fingerprint_to_document(f: &SimilarityFingerprint) -> FingerprintDocument {
    FingerprintDocument {
        ambient_dim: f.ambient_dim,
        eigenvalues: f
            .entries
            .iter()
            .map(|(l, dims)| (l.to_string(), dims.clone()))
            .collect(),
    }
}

fn effective_hints(
    cli_hints: Option<&[GaussianRational]>,
    doc_hints: Option<Vec<GaussianRational>>,
) -> Option<Vec<GaussianRational>> {
    match cli_hints {
        Some(h) => Some(h.to_vec()),
        None => doc_hints,
    }
}

/// `decompose`: full exact decomposition of the matrix in the document.
/// Explicit `--hints` take precedence over hints embedded in the document.
pub fn cmd_decompose(
    doc: &MatrixDocument,
    cli_hints: Option<&[GaussianRational]>,
) -> Result<DecompositionDocument, CliError> {
    let (matrix, doc_hints) = matrix_from_document(doc)?;
    let hints = effective_hints(cli_hints, doc_hints);
    let dec = jordan::jordan_decompose(&matrix, hints.as_deref())?;
    Ok(DecompositionDocument {
        structure: dec
            .structure
            .iter()
            .map(|(l, sizes)| (l.to_string(), sizes.clone()))
            .collect(),
        j: matrix_to_strings(&dec.j),
        p: matrix_to_strings(&dec.p),
        chains: dec
            .chains
            .iter()
            .map(|c| ChainDocument {
                lambda: c.lambda.to_string(),
                vectors: c
                    .vectors
                    .iter()
                    .map(|v| v.iter().map(ToString::to_string).collect())
                    .collect(),
            })
            .collect(),
        verified: true,
    })
}

/// `fingerprint`: eigenvalue → rank sequence of shifted-operator powers.
pub fn cmd_fingerprint(
    doc: &MatrixDocument,
    cli_hints: Option<&[GaussianRational]>,
) -> Result<FingerprintDocument, CliError> {
    let (matrix, doc_hints) = matrix_from_document(doc)?;
    let hints = effective_hints(cli_hints, doc_hints);
    let f = similarity::fingerprint(&matrix, hints.as_deref())?;
    Ok(fingerprint_to_document(&f))
}

/// `similar`: rank-sequence similarity verdict plus the explicit transform
/// when the matrices are similar.
///
/// Explicit `--hints` act as a shared candidate pool: each hint must be an
/// eigenvalue of at least one of the two matrices and is used for the sides
/// it verifies on. Without `--hints`, hints embedded in each document apply
/// to that document's matrix only.
pub fn cmd_similar(
    doc_a: &MatrixDocument,
    doc_b: &MatrixDocument,
    cli_hints: Option<&[GaussianRational]>,
) -> Result<SimilarityDocument, CliError> {
    let (a, doc_hints_a) = matrix_from_document(doc_a)?;
    let (b, doc_hints_b) = matrix_from_document(doc_b)?;
    let (hints_a, hints_b) = match cli_hints {
        Some(pool) => similarity::split_pair_hints(&a, &b, pool)?,
        None => (doc_hints_a, doc_hints_b),
    };
    if a.rows() != b.rows() {
        // Different dimensions are trivially not similar; still report both
        // fingerprints.
        let fa = similarity::fingerprint(&a, hints_a.as_deref())?;
        let fb = similarity::fingerprint(&b, hints_b.as_deref())?;
        return Ok(SimilarityDocument {
            similar: false,
            fingerprint_a: fingerprint_to_document(&fa),
            fingerprint_b: fingerprint_to_document(&fb),
            transform: None,
        });
    }
    let verdict = similarity::pair_analysis(&a, hints_a.as_deref(), &b, hints_b.as_deref())?;
    Ok(SimilarityDocument {
        similar: verdict.similar,
        fingerprint_a: fingerprint_to_document(&verdict.fingerprint_a),
        fingerprint_b: fingerprint_to_document(&verdict.fingerprint_b),
        transform: verdict.transform.as_ref().map(matrix_to_strings),
    })
}

/// `generate`: conjugates the canonical Jordan matrix of the spec by a
/// seeded unimodular matrix. The eigenvalues are embedded as hints so the
/// output document round-trips through `decompose` unaided.
pub fn cmd_generate(spec: &str, seed: u64) -> Result<MatrixDocument, CliError> {
    let structure = parse_structure_spec(spec)?;
    let generated =
        conjugated_jordan(&structure, seed).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(MatrixDocument {
        n: generated.matrix.rows(),
        entries: matrix_to_strings(&generated.matrix),
        eigenvalue_hints: Some(structure.keys().map(ToString::to_string).collect()),
    })
}

/// `verify`: re-checks a claimed decomposition against the matrix. The first
/// failing identity is named in the report.
pub fn cmd_verify(
    matrix_doc: &MatrixDocument,
    dec_doc: &DecompositionDocument,
) -> Result<VerifyDocument, CliError> {
    let (a, _) = matrix_from_document(matrix_doc)?;
    let n = a.rows();
    let j = strings_to_matrix(&dec_doc.j, n, "J")?;
    let p = strings_to_matrix(&dec_doc.p, n, "P")?;

    let fail = |msg: String| VerifyDocument {
        valid: false,
        failure: Some(msg),
    };

    if p.rank() != n {
        return Ok(fail("P is singular".into()));
    }
    if a.mul(&p) != p.mul(&j) {
        return Ok(fail("A*P != P*J".into()));
    }
    let mut column = 0usize;
    for (idx, chain_doc) in dec_doc.chains.iter().enumerate() {
        let lambda = parse_scalar(&chain_doc.lambda)?;
        let mut vectors = Vec::with_capacity(chain_doc.vectors.len());
        for v in &chain_doc.vectors {
            if v.len() != n {
                return Err(CliError::Input(format!(
                    "chain {idx} has a vector of length {}, expected {n}",
                    v.len()
                )));
            }
            vectors.push(
                v.iter()
                    .map(|s| parse_scalar(s))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        let chain = JordanChain { lambda, vectors };
        if !chain.verify(&a) {
            return Ok(fail(format!("chain {idx} violates the chain property")));
        }
        // The chain vectors must be exactly the corresponding columns of P:
        // A*P = P*J alone survives shifting a chain top by an eigenvector,
        // so the column identity is what pins P to the claimed chains.
        for v in &chain.vectors {
            if column >= n || p.column(column) != *v {
                return Ok(fail(format!(
                    "P column {column} differs from its chain vector"
                )));
            }
            column += 1;
        }
    }
    if !dec_doc.chains.is_empty() && column != n {
        return Ok(fail(format!(
            "chains cover {column} of {n} columns of P"
        )));
    }
    Ok(VerifyDocument {
        valid: true,
        failure: None,
    })
}

/// `find_eigenvalues` at the document level, so hint errors map onto the
/// exit-code contract.
pub fn document_eigenvalues(
    doc: &MatrixDocument,
    cli_hints: Option<&[GaussianRational]>,
) -> Result<Vec<(String, usize)>, CliError> {
    let (matrix, doc_hints) = matrix_from_document(doc)?;
    let hints = effective_hints(cli_hints, doc_hints);
    let report = eigen::find_eigenvalues(&matrix, hints.as_deref())?;
    Ok(report
        .eigenvalues
        .into_iter()
        .map(|(l, m)| (l.to_string(), m))
        .collect())
}
