//! Exact dense linear algebra over [`GaussianRational`].
//!
//! Rank, kernels, images, solving, and inversion are all decidable here
//! because the arithmetic never rounds. Row reduction uses the first nonzero
//! entry in each column as the pivot (no magnitude-based pivoting), which
//! makes every result fully deterministic across runs.

use std::fmt;

use crate::error::Error;
use crate::scalar::GaussianRational;

/// Dense row-major matrix of exact scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

/// Result of reduced-row-echelon-form computation.
#[derive(Clone, Debug)]
pub struct RowEchelonForm {
    pub reduced: ExactMatrix,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<GaussianRational>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        ExactMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, &GaussianRational::one())
    }

    /// `lambda * I`.
    pub fn scaled_identity(n: usize, lambda: &GaussianRational) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            *m.at_mut(k, k) = lambda.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for row in &rows {
            assert_eq!(row.len(), ncols, "ragged rows");
        }
        ExactMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix whose columns are the given ambient vectors.
    pub fn from_columns(ambient_dim: usize, columns: &[Vec<GaussianRational>]) -> Self {
        for col in columns {
            assert_eq!(col.len(), ambient_dim, "column length mismatch");
        }
        let mut m = Self::zeros(ambient_dim, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                *m.at_mut(r, c) = v.clone();
            }
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> GaussianRational,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        ExactMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Parses a grid of scalar-grammar strings; convenient in tests.
    pub fn from_str_rows(rows: &[&[&str]]) -> Result<Self, Error> {
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            let mut r = Vec::with_capacity(row.len());
            for s in *row {
                r.push(GaussianRational::parse(s)?);
            }
            parsed.push(r);
        }
        Ok(Self::from_rows(parsed))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &GaussianRational {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut GaussianRational {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[GaussianRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<GaussianRational> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) + rhs.at(r, c))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) - rhs.at(r, c))
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) * k)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(r, c) + &(a * b);
                    *out.at_mut(r, c) = cur;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = GaussianRational::zero();
                for (c, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = &acc + &(self.at(r, c) * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// `self^k` with `self^0 = I`.
    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `self - lambda*I`, the shifted operator used throughout.
    pub fn shifted(&self, lambda: &GaussianRational) -> Self {
        assert!(self.is_square());
        self.sub(&Self::scaled_identity(self.rows, lambda))
    }

    pub fn trace(&self) -> GaussianRational {
        assert!(self.is_square());
        let mut t = GaussianRational::zero();
        for k in 0..self.rows {
            t = &t + self.at(k, k);
        }
        t
    }

    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows);
        Self::from_fn(self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                rhs.at(r, c - self.cols).clone()
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GaussianRational::is_zero)
    }

    /// Unique reduced row echelon form, with pivot columns and rank.
    ///
    /// Pivot rule: scan each column top to bottom and take the first nonzero
    /// entry. Exact arithmetic makes magnitude-based pivoting unnecessary and
    /// the fixed rule keeps every downstream basis deterministic.
    pub fn rref(&self) -> RowEchelonForm {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let found = (pivot_row..m.rows).find(|&r| !m.at(r, col).is_zero());
            let Some(r) = found else { continue };
            m.swap_rows(pivot_row, r);
            let inv = m
                .at(pivot_row, col)
                .inv()
                .expect("pivot entry is nonzero");
            m.scale_row(pivot_row, &inv);
            for r2 in 0..m.rows {
                if r2 != pivot_row && !m.at(r2, col).is_zero() {
                    let factor = m.at(r2, col).clone();
                    m.sub_scaled_row(r2, pivot_row, &factor);
                }
            }
            pivot_cols.push(col);
            pivot_row += 1;
        }
        let rank = pivot_cols.len();
        RowEchelonForm {
            reduced: m,
            pivot_cols,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{x : Mx = 0}`, with dimension `cols - rank` by rank-nullity.
    ///
    /// One basis vector per free column, in ascending column order: the free
    /// coordinate is set to 1 and the pivot coordinates are read off the
    /// reduced form.
    pub fn kernel_basis(&self) -> Subspace {
        let ech = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<usize> = ech.pivot_cols.clone();
        for free_col in 0..self.cols {
            if pivot_set.contains(&free_col) {
                continue;
            }
            let mut v = vec![GaussianRational::zero(); self.cols];
            v[free_col] = GaussianRational::one();
            for (row, &pcol) in pivot_set.iter().enumerate() {
                v[pcol] = -ech.reduced.at(row, free_col);
            }
            basis.push(v);
        }
        Subspace::new(ExactMatrix::from_columns(self.cols, &basis))
            .expect("kernel basis vectors are independent by construction")
    }

    /// Basis of the column space: the pivot columns of `self` itself, in
    /// ascending index order, so the basis vectors come straight from the
    /// actual columns.
    pub fn image_basis(&self) -> Subspace {
        let ech = self.rref();
        let cols: Vec<Vec<GaussianRational>> = ech
            .pivot_cols
            .iter()
            .map(|&c| self.column(c))
            .collect();
        Subspace::new(ExactMatrix::from_columns(self.rows, &cols))
            .expect("pivot columns are independent by construction")
    }

    /// One exact solution of `Mx = b`, or `None` when `b` is outside the
    /// image. Free variables are fixed to 0, so the answer is canonical.
    pub fn solve_particular(&self, b: &[GaussianRational]) -> Option<Vec<GaussianRational>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let augmented = self.hstack(&ExactMatrix::from_columns(self.rows, &[b.to_vec()]));
        let ech = augmented.rref();
        if ech.pivot_cols.contains(&self.cols) {
            return None;
        }
        let mut x = vec![GaussianRational::zero(); self.cols];
        for (row, &pcol) in ech.pivot_cols.iter().enumerate() {
            x[pcol] = ech.reduced.at(row, self.cols).clone();
        }
        Some(x)
    }

    /// Exact inverse; `Err(Singular)` when the rank is deficient.
    pub fn invert(&self) -> Result<ExactMatrix, Error> {
        assert!(self.is_square());
        let n = self.rows;
        let ech = self.hstack(&ExactMatrix::identity(n)).rref();
        // A pivot in the identity half means the left block is rank
        // deficient.
        if ech.pivot_cols.iter().any(|&c| c >= n) {
            return Err(Error::Singular);
        }
        Ok(ExactMatrix::from_fn(n, n, |r, c| {
            ech.reduced.at(r, n + c).clone()
        }))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, k: &GaussianRational) {
        for c in 0..self.cols {
            let v = self.at(r, c) * k;
            *self.at_mut(r, c) = v;
        }
    }

    /// `row[r] -= k * row[src]`.
    fn sub_scaled_row(&mut self, r: usize, src: usize, k: &GaussianRational) {
        for c in 0..self.cols {
            let v = self.at(r, c) - &(self.at(src, c) * k);
            *self.at_mut(r, c) = v;
        }
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{}", self.rows, self.cols)?;
        write!(f, "{self}")
    }
}

/// A subspace of an ambient coordinate space, carried as an explicit basis
/// matrix whose columns are the basis vectors. Full column rank is verified
/// on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ExactMatrix,
}

impl Subspace {
    pub fn new(basis: ExactMatrix) -> Result<Self, Error> {
        if basis.rank() != basis.cols() {
            return Err(Error::DependentBasis);
        }
        Ok(Subspace {
            ambient_dim: basis.rows(),
            basis,
        })
    }

    pub fn full_space(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: ExactMatrix::identity(n),
        }
    }

    pub fn zero_space(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: ExactMatrix::zeros(n, 0),
        }
    }

    /// The unique reduced column-echelon basis of the column space of `m`.
    ///
    /// Canonicalizing subspace bases this way keeps the whole decomposition
    /// pipeline scale-free: feeding it an already-canonical Jordan matrix
    /// reproduces the standard basis exactly.
    pub fn canonical_column_space(m: &ExactMatrix) -> Self {
        let ech = m.transpose().rref();
        let cols: Vec<Vec<GaussianRational>> = (0..ech.rank)
            .map(|r| ech.reduced.row(r).to_vec())
            .collect();
        Subspace::new(ExactMatrix::from_columns(m.rows(), &cols))
            .expect("echelon rows are independent")
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn basis_columns(&self) -> Vec<Vec<GaussianRational>> {
        (0..self.dim()).map(|c| self.basis.column(c)).collect()
    }

    pub fn contains(&self, v: &[GaussianRational]) -> bool {
        self.basis.solve_particular(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_columns().iter().all(|v| self.contains(v))
    }

    /// Maps coordinates relative to this basis back into the ambient space.
    pub fn to_ambient(&self, coords: &[GaussianRational]) -> Vec<GaussianRational> {
        self.basis.mul_vec(coords)
    }
}

/// The operator `a` expressed in the coordinates of an invariant subspace:
/// returns `M` with `a * basis(s) = basis(s) * M`.
pub fn restrict_operator(a: &ExactMatrix, s: &Subspace) -> Result<ExactMatrix, Error> {
    assert!(a.is_square());
    assert_eq!(a.rows(), s.ambient_dim(), "ambient dimension mismatch");
    let mut cols = Vec::with_capacity(s.dim());
    for v in s.basis_columns() {
        let image = a.mul_vec(&v);
        let coords = s
            .basis()
            .solve_particular(&image)
            .ok_or(Error::NotInvariant)?;
        cols.push(coords);
    }
    Ok(ExactMatrix::from_columns(s.dim(), &cols))
}

/// Completes a basis of `inner` to a basis of `outer`.
///
/// Exactly `dim(outer) - dim(inner)` vectors are returned, drawn greedily
/// from `outer`'s basis columns in order; a column is kept iff it increases
/// the rank of what has been collected so far.
pub fn extend_basis(
    inner: &Subspace,
    outer: &Subspace,
) -> Result<Vec<Vec<GaussianRational>>, Error> {
    assert_eq!(inner.ambient_dim(), outer.ambient_dim());
    if !outer.contains_subspace(inner) {
        return Err(Error::NotNested);
    }
    let n = inner.ambient_dim();
    let mut collected = inner.basis_columns();
    let mut rank = inner.dim();
    let mut added = Vec::new();
    for v in outer.basis_columns() {
        let mut candidate = collected.clone();
        candidate.push(v.clone());
        let r = ExactMatrix::from_columns(n, &candidate).rank();
        if r > rank {
            rank = r;
            collected = candidate;
            added.push(v);
        }
    }
    if added.len() != outer.dim() - inner.dim() {
        return Err(Error::VerificationFailed(
            "basis extension produced the wrong number of vectors".into(),
        ));
    }
    Ok(added)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[&str]]) -> ExactMatrix {
        ExactMatrix::from_str_rows(rows).unwrap()
    }

    fn v(entries: &[&str]) -> Vec<GaussianRational> {
        entries
            .iter()
            .map(|s| GaussianRational::parse(s).unwrap())
            .collect()
    }

    #[test]
    fn rref_identity() {
        let ech = ExactMatrix::identity(3).rref();
        assert_eq!(ech.reduced, ExactMatrix::identity(3));
        assert_eq!(ech.pivot_cols, vec![0, 1, 2]);
        assert_eq!(ech.rank, 3);
    }

    #[test]
    fn rref_zero() {
        let ech = ExactMatrix::zeros(2, 2).rref();
        assert_eq!(ech.reduced, ExactMatrix::zeros(2, 2));
        assert!(ech.pivot_cols.is_empty());
        assert_eq!(ech.rank, 0);
    }

    #[test]
    fn rref_proportional_rows() {
        let ech = m(&[&["1", "2"], &["2", "4"]]).rref();
        assert_eq!(ech.rank, 1);
        assert_eq!(ech.pivot_cols, vec![0]);
        assert_eq!(ech.reduced, m(&[&["1", "2"], &["0", "0"]]));
    }

    #[test]
    fn kernel_of_nilpotent_block() {
        let k = m(&[&["0", "1"], &["0", "0"]]).kernel_basis();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis().column(0), v(&["1", "0"]));
    }

    #[test]
    fn kernel_of_invertible_is_trivial() {
        let k = m(&[&["1", "1"], &["0", "1"]]).kernel_basis();
        assert_eq!(k.dim(), 0);
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        let k = ExactMatrix::zeros(3, 3).kernel_basis();
        assert_eq!(k.dim(), 3);
        assert_eq!(*k.basis(), ExactMatrix::identity(3));
    }

    #[test]
    fn image_examples() {
        assert_eq!(ExactMatrix::identity(3).image_basis().dim(), 3);
        assert_eq!(ExactMatrix::zeros(2, 2).image_basis().dim(), 0);
        let s = m(&[&["0", "1"], &["0", "0"]]).image_basis();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis().column(0), v(&["1", "0"]));
    }

    #[test]
    fn solve_particular_examples() {
        let a = m(&[&["0", "1"], &["0", "0"]]);
        assert_eq!(a.solve_particular(&v(&["1", "0"])), Some(v(&["0", "1"])));
        assert_eq!(a.solve_particular(&v(&["0", "1"])), None);
        let id = ExactMatrix::identity(2);
        let b = v(&["7", "-3/2"]);
        assert_eq!(id.solve_particular(&b), Some(b.clone()));
    }

    #[test]
    fn restrict_operator_examples() {
        let a = m(&[&["2", "0"], &["0", "3"]]);
        let full = Subspace::full_space(2);
        assert_eq!(restrict_operator(&a, &full).unwrap(), a);

        let e2 = Subspace::new(ExactMatrix::from_columns(2, &[v(&["0", "1"])])).unwrap();
        assert_eq!(restrict_operator(&a, &e2).unwrap(), m(&[&["3"]]));

        let a3 = m(&[&["2", "0", "0"], &["0", "3", "0"], &["0", "0", "3"]]);
        let tail =
            Subspace::new(ExactMatrix::from_columns(3, &[v(&["0", "1", "0"]), v(&["0", "0", "1"])]))
                .unwrap();
        assert_eq!(
            restrict_operator(&a3, &tail).unwrap(),
            m(&[&["3", "0"], &["0", "3"]])
        );
    }

    #[test]
    fn restrict_operator_rejects_non_invariant_subspace() {
        let a = m(&[&["0", "1"], &["0", "0"]]);
        let e2 = Subspace::new(ExactMatrix::from_columns(2, &[v(&["0", "1"])])).unwrap();
        assert_eq!(restrict_operator(&a, &e2), Err(Error::NotInvariant));
    }

    #[test]
    fn extend_basis_examples() {
        let plane = Subspace::full_space(2);
        assert!(extend_basis(&plane, &plane).unwrap().is_empty());

        let zero = Subspace::zero_space(2);
        assert_eq!(
            extend_basis(&zero, &plane).unwrap(),
            vec![v(&["1", "0"]), v(&["0", "1"])]
        );

        let diag = Subspace::new(ExactMatrix::from_columns(2, &[v(&["1", "1"])])).unwrap();
        assert_eq!(extend_basis(&diag, &plane).unwrap(), vec![v(&["1", "0"])]);
    }

    #[test]
    fn extend_basis_rejects_non_nested() {
        let e1 = Subspace::new(ExactMatrix::from_columns(2, &[v(&["1", "0"])])).unwrap();
        let e2 = Subspace::new(ExactMatrix::from_columns(2, &[v(&["0", "1"])])).unwrap();
        assert_eq!(extend_basis(&e1, &e2), Err(Error::NotNested));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(
            ExactMatrix::identity(2).invert().unwrap(),
            ExactMatrix::identity(2)
        );
        assert_eq!(
            m(&[&["2", "0"], &["0", "1/2"]]).invert().unwrap(),
            m(&[&["1/2", "0"], &["0", "2"]])
        );
        assert_eq!(
            m(&[&["1", "1"], &["0", "1"]]).invert().unwrap(),
            m(&[&["1", "-1"], &["0", "1"]])
        );
        assert_eq!(m(&[&["1", "2"], &["2", "4"]]).invert(), Err(Error::Singular));
    }

    #[test]
    fn canonical_column_space_normalizes_scaling() {
        let s = Subspace::canonical_column_space(&m(&[&["0", "0"], &["0", "2"]]));
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis().column(0), v(&["0", "1"]));
    }

    #[test]
    fn complex_entries_work_end_to_end() {
        let a = m(&[&["1i", "1"], &["0", "-1i"]]);
        let inv = a.invert().unwrap();
        assert_eq!(a.mul(&inv), ExactMatrix::identity(2));
    }
}
