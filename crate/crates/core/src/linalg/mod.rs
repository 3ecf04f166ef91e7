//! Sparse exact linear algebra over a [`Field`]: rank, kernel, solve and
//! polynomial interpolation.
//!
//! All eliminations share one pivot rule: columns are processed left to
//! right, and among the rows whose leading entry sits in the current column
//! the sparsest one is chosen (ties go to the lowest original row index).
//! Kernel bases and particular solutions are read off the resulting reduced
//! echelon form, so they are canonical for a given input.

pub(crate) mod bareiss;
pub(crate) mod elim;
mod poly;

use alloc::format;
use alloc::vec::Vec;

use crate::error::Error;
use crate::field::Field;

pub use poly::interpolate_polynomial;

pub(crate) type Row<E> = Vec<(usize, E)>;

/// A vector stored as sorted `(index, value)` pairs with no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVector<E> {
    len: usize,
    entries: Vec<(usize, E)>,
}

impl<E: Clone> SparseVector<E> {
    pub fn zero(len: usize) -> Self {
        SparseVector { len, entries: Vec::new() }
    }

    /// Builds a vector from unsorted entries, summing duplicates and dropping zeros.
    ///
    /// Panics if an index is out of range.
    pub fn from_entries<F>(field: &F, len: usize, entries: impl IntoIterator<Item = (usize, E)>) -> Self
    where
        F: Field<Elem = E>,
    {
        let mut raw: Vec<(usize, E)> = entries.into_iter().collect();
        for (i, _) in &raw {
            assert!(*i < len, "index {i} out of range for length {len}");
        }
        raw.sort_by_key(|(i, _)| *i);
        SparseVector { len, entries: elim::merge_sorted(field, raw) }
    }

    pub fn unit<F: Field<Elem = E>>(field: &F, len: usize, index: usize) -> Self {
        assert!(index < len);
        SparseVector { len, entries: alloc::vec![(index, field.one())] }
    }

    pub(crate) fn from_row(len: usize, entries: Row<E>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.last().map_or(true, |(i, _)| *i < len));
        SparseVector { len, entries }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn entries(&self) -> &[(usize, E)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, E)> {
        self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&E> {
        self.entries.binary_search_by_key(&index, |(i, _)| *i).ok().map(|k| &self.entries[k].1)
    }

    /// `self + alpha * other`.
    pub fn axpy<F: Field<Elem = E>>(&self, field: &F, alpha: &E, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "vector length mismatch");
        SparseVector { len: self.len, entries: elim::axpy(field, &self.entries, alpha, &other.entries) }
    }

    pub fn add<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        self.axpy(field, &field.one(), other)
    }

    pub fn sub<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        self.axpy(field, &field.neg(&field.one()), other)
    }

    pub fn scale<F: Field<Elem = E>>(&self, field: &F, alpha: &E) -> Self {
        if field.is_zero(alpha) {
            return Self::zero(self.len);
        }
        SparseVector { len: self.len, entries: self.entries.iter().map(|(i, v)| (*i, field.mul(v, alpha))).collect() }
    }

    /// Restriction to the given coordinates, renumbered in the order given.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut out: Vec<(usize, E)> =
            indices.iter().enumerate().filter_map(|(new, old)| self.get(*old).map(|v| (new, v.clone()))).collect();
        out.sort_by_key(|(i, _)| *i);
        SparseVector { len: indices.len(), entries: out }
    }
}

/// A row-major sparse matrix over a field instance.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<F: Field> {
    field: F,
    nrows: usize,
    ncols: usize,
    rows: Vec<Row<F::Elem>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(field: &F, nrows: usize, ncols: usize) -> Self {
        SparseMatrix { field: field.clone(), nrows, ncols, rows: alloc::vec![Vec::new(); nrows] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let rows = (0..n).map(|i| alloc::vec![(i, field.one())]).collect();
        SparseMatrix { field: field.clone(), nrows: n, ncols: n, rows }
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        field: &F,
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, F::Elem)>,
    ) -> Result<Self, Error> {
        let mut buckets: Vec<Row<F::Elem>> = alloc::vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::DimensionMismatch(format!("entry ({r}, {c}) outside {nrows}x{ncols}")));
            }
            buckets[r].push((c, v));
        }
        let rows = buckets
            .into_iter()
            .map(|mut row| {
                row.sort_by_key(|(c, _)| *c);
                elim::merge_sorted(field, row)
            })
            .collect();
        Ok(SparseMatrix { field: field.clone(), nrows, ncols, rows })
    }

    /// Builds a matrix from a dense row list (test and small-case convenience).
    pub fn from_dense(field: &F, dense: &[Vec<F::Elem>]) -> Self {
        let nrows = dense.len();
        let ncols = dense.first().map_or(0, |r| r.len());
        let rows = dense
            .iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "ragged dense matrix");
                r.iter().enumerate().filter(|(_, v)| !field.is_zero(v)).map(|(c, v)| (c, v.clone())).collect()
            })
            .collect();
        SparseMatrix { field: field.clone(), nrows, ncols, rows }
    }

    pub(crate) fn from_rows_unchecked(field: &F, ncols: usize, rows: Vec<Row<F::Elem>>) -> Self {
        SparseMatrix { field: field.clone(), nrows: rows.len(), ncols, rows }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &F, nrows: usize, columns: &[SparseVector<F::Elem>]) -> Result<Self, Error> {
        let triplets =
            columns.iter().enumerate().flat_map(|(c, v)| v.entries().iter().map(move |(r, x)| (*r, c, x.clone())));
        Self::from_triplets(field, nrows, columns.len(), triplets)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nrows(&self) -> usize {
        self.nrows
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn row(&self, r: usize) -> &[(usize, F::Elem)] {
        &self.rows[r]
    }

    pub fn row_vector(&self, r: usize) -> SparseVector<F::Elem> {
        SparseVector::from_row(self.ncols, self.rows[r].clone())
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        self.rows[r]
            .binary_search_by_key(&c, |(j, _)| *j)
            .map(|k| self.rows[r][k].1.clone())
            .unwrap_or_else(|_| self.field.zero())
    }

    /// Iterates over all stored `(row, col, value)` entries.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &F::Elem)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn column(&self, c: usize) -> SparseVector<F::Elem> {
        let entries = self
            .rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| row.binary_search_by_key(&c, |(j, _)| *j).ok().map(|k| (r, row[k].1.clone())))
            .collect();
        SparseVector::from_row(self.nrows, entries)
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Row<F::Elem>> = alloc::vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                rows[*c].push((r, v.clone()));
            }
        }
        SparseMatrix { field: self.field.clone(), nrows: self.ncols, ncols: self.nrows, rows }
    }

    fn check_field(&self, other: &Self) -> Result<(), Error> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { left: self.field.descriptor(), right: other.field.descriptor() });
        }
        Ok(())
    }

    pub fn mul_vec(&self, v: &SparseVector<F::Elem>) -> Result<SparseVector<F::Elem>, Error> {
        if v.len() != self.ncols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has length {}",
                self.ncols,
                v.len()
            )));
        }
        let f = &self.field;
        let entries = self
            .rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| {
                let s = elim::dot(f, row, v.entries());
                (!f.is_zero(&s)).then_some((r, s))
            })
            .collect();
        Ok(SparseVector::from_row(self.nrows, entries))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_field(other)?;
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let f = &self.field;
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: Row<F::Elem> = Vec::new();
                for (k, a) in row {
                    acc = elim::axpy(f, &acc, a, &other.rows[*k]);
                }
                acc
            })
            .collect();
        Ok(SparseMatrix { field: f.clone(), nrows: self.nrows, ncols: other.ncols, rows })
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: &F::Elem, other: &Self) -> Result<Self, Error> {
        self.check_field(other)?;
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} plus {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let f = &self.field;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| elim::axpy(f, a, alpha, b)).collect();
        Ok(SparseMatrix { field: f.clone(), nrows: self.nrows, ncols: self.ncols, rows })
    }

    pub fn scale(&self, alpha: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(alpha) {
            return Self::zeros(f, self.nrows, self.ncols);
        }
        let rows = self.rows.iter().map(|row| row.iter().map(|(c, v)| (*c, f.mul(v, alpha))).collect()).collect();
        SparseMatrix { field: f.clone(), nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn pow(&self, e: u64) -> Result<Self, Error> {
        if self.nrows != self.ncols {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", self.nrows, self.ncols)));
        }
        let mut acc = Self::identity(&self.field, self.nrows);
        for _ in 0..e {
            acc = self.mul(&acc)?;
        }
        Ok(acc)
    }

    /// Submatrix on the given columns (renumbered in the order given).
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut map = alloc::vec![usize::MAX; self.ncols];
        for (new, old) in cols.iter().enumerate() {
            map[*old] = new;
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out: Row<F::Elem> =
                    row.iter().filter(|(c, _)| map[*c] != usize::MAX).map(|(c, v)| (map[*c], v.clone())).collect();
                out.sort_by_key(|(c, _)| *c);
                out
            })
            .collect();
        SparseMatrix { field: self.field.clone(), nrows: self.nrows, ncols: cols.len(), rows }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        SparseMatrix {
            field: self.field.clone(),
            nrows: rows.len(),
            ncols: self.ncols,
            rows: rows.iter().map(|r| self.rows[*r].clone()).collect(),
        }
    }

    /// Stacks two matrices with the same number of columns.
    pub fn vstack(&self, other: &Self) -> Result<Self, Error> {
        self.check_field(other)?;
        if self.ncols != other.ncols {
            return Err(Error::DimensionMismatch(format!("cannot stack {} and {} columns", self.ncols, other.ncols)));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(SparseMatrix { field: self.field.clone(), nrows: rows.len(), ncols: self.ncols, rows })
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        (0..self.nrows).map(|r| (0..self.ncols).map(|c| self.get(r, c)).collect()).collect()
    }
}

/// Rank options. The modular pre-pass only changes how a characteristic-zero
/// rank is obtained, never its value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RankOptions {
    pub modular_prepass: bool,
}

/// Rank of `m` over its field.
pub fn rank<F: Field>(m: &SparseMatrix<F>) -> usize {
    rank_with(m, RankOptions::default())
}

pub fn rank_with<F: Field>(m: &SparseMatrix<F>, options: RankOptions) -> usize {
    let rows: Vec<Row<F::Elem>> = m.rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    if rows.is_empty() {
        return 0;
    }
    if options.modular_prepass {
        if let Some(lower) = m.field.modular_rank_bound(&rows, m.ncols) {
            let mut used = alloc::vec![false; m.ncols];
            for row in &rows {
                for (c, _) in row {
                    used[*c] = true;
                }
            }
            let upper = rows.len().min(used.iter().filter(|u| **u).count());
            if lower == upper {
                return lower;
            }
        }
    }
    m.field.rank_rows(rows, m.ncols)
}

/// Canonical basis of the right null space `{v : M v = 0}`.
///
/// One vector per non-pivot column `f` (ascending), with `v[f] = 1` and the
/// pivot coordinates read off the reduced echelon form.
pub fn kernel_basis<F: Field>(m: &SparseMatrix<F>) -> Vec<SparseVector<F::Elem>> {
    let mut ech = elim::echelon(&m.field, m.rows.clone(), m.ncols);
    ech.make_reduced();
    ech.kernel()
}

/// A particular solution of `M x = b`, or `None` when the system is inconsistent.
///
/// Free variables are set to zero.
pub fn solve<F: Field>(m: &SparseMatrix<F>, b: &SparseVector<F::Elem>) -> Result<Option<SparseVector<F::Elem>>, Error> {
    if b.len() != m.nrows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            m.nrows
        )));
    }
    let n = m.ncols;
    let mut rows = m.rows.clone();
    for (r, v) in b.entries() {
        rows[*r].push((n, v.clone()));
    }
    let mut ech = elim::echelon(&m.field, rows, n + 1);
    if ech.pivot_cols().last() == Some(&n) {
        return Ok(None);
    }
    ech.make_reduced();
    let f = &m.field;
    let mut x: Vec<(usize, F::Elem)> = ech
        .rows()
        .iter()
        .zip(ech.pivot_cols())
        .filter_map(|(row, pc)| match row.last() {
            Some((c, v)) if *c == n && !f.is_zero(v) => Some((*pc, v.clone())),
            _ => None,
        })
        .collect();
    x.sort_by_key(|(i, _)| *i);
    Ok(Some(SparseVector::from_row(n, x)))
}

/// Incrementally maintained echelon basis of a subspace of `F^n`.
///
/// Used for span membership, independence tests and canonical reduction of
/// vectors modulo a subspace.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    ech: elim::Echelon<F>,
}

impl<F: Field> Subspace<F> {
    pub fn new(field: &F, ambient_dim: usize) -> Self {
        Subspace { ech: elim::Echelon::empty(field, ambient_dim) }
    }

    /// Span of the given vectors, eliminated with the canonical pivot rule.
    pub fn spanned_by(field: &F, ambient_dim: usize, vectors: &[SparseVector<F::Elem>]) -> Self {
        let rows = vectors.iter().map(|v| v.entries().to_vec()).collect();
        Subspace { ech: elim::echelon(field, rows, ambient_dim) }
    }

    pub fn dim(&self) -> usize {
        self.ech.rows().len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ech.ncols()
    }

    /// Remainder of `v` after clearing every pivot coordinate of the basis.
    pub fn reduce(&self, v: &SparseVector<F::Elem>) -> SparseVector<F::Elem> {
        SparseVector::from_row(v.len(), self.ech.reduce(v.entries().to_vec()))
    }

    pub fn contains(&self, v: &SparseVector<F::Elem>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns `false` if it was already contained.
    pub fn insert(&mut self, v: &SparseVector<F::Elem>) -> bool {
        self.ech.insert(v.entries().to_vec())
    }

    /// Echelon basis vectors (leading coefficient one).
    pub fn basis(&self) -> Vec<SparseVector<F::Elem>> {
        let n = self.ech.ncols();
        self.ech.rows().iter().map(|r| SparseVector::from_row(n, r.clone())).collect()
    }
}
