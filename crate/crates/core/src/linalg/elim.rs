//! Sparse Gauss–Jordan elimination shared by rank, kernel, solve and spans.

use alloc::vec::Vec;

use super::{Row, SparseVector};
use crate::field::Field;

/// Collapses a column-sorted row with possible duplicate indices.
pub(crate) fn merge_sorted<F: Field>(field: &F, raw: Row<F::Elem>) -> Row<F::Elem> {
    let mut out: Row<F::Elem> = Vec::with_capacity(raw.len());
    for (c, v) in raw {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = field.add(lv, &v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !field.is_zero(v));
    out
}

/// `x + alpha * y` on sorted rows.
pub(crate) fn axpy<F: Field>(
    field: &F,
    x: &[(usize, F::Elem)],
    alpha: &F::Elem,
    y: &[(usize, F::Elem)],
) -> Row<F::Elem> {
    if field.is_zero(alpha) {
        return x.to_vec();
    }
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, field.mul(alpha, &y[j].1)));
            j += 1;
        } else {
            let v = field.add(&x[i].1, &field.mul(alpha, &y[j].1));
            if !field.is_zero(&v) {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub(crate) fn dot<F: Field>(field: &F, x: &[(usize, F::Elem)], y: &[(usize, F::Elem)]) -> F::Elem {
    let mut acc = field.zero();
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                acc = field.add(&acc, &field.mul(&x[i].1, &y[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

pub(crate) fn lookup<E>(row: &[(usize, E)], c: usize) -> Option<&E> {
    row.binary_search_by_key(&c, |(j, _)| *j).ok().map(|k| &row[k].1)
}

/// Row echelon form: leading coefficient one, leading columns strictly
/// increasing.
#[derive(Clone, Debug)]
pub(crate) struct Echelon<F: Field> {
    field: F,
    ncols: usize,
    rows: Vec<Row<F::Elem>>,
    pivots: Vec<usize>,
}

/// Eliminates `rows` with the canonical pivot rule.
///
/// Rows are bucketed by leading column. For each column in ascending order the
/// sparsest row of its bucket (lowest original index on ties) becomes the
/// pivot, and every other row of the bucket is reduced against it and moved
/// to the bucket of its new leading column.
pub(crate) fn echelon<F: Field>(field: &F, rows: Vec<Row<F::Elem>>, ncols: usize) -> Echelon<F> {
    let mut store: Vec<Row<F::Elem>> = rows;
    let mut buckets: Vec<Vec<usize>> = alloc::vec![Vec::new(); ncols];
    for (id, row) in store.iter().enumerate() {
        if let Some((c, _)) = row.first() {
            buckets[*c].push(id);
        }
    }
    let mut out_rows = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let ids = core::mem::take(&mut buckets[col]);
        if ids.is_empty() {
            continue;
        }
        let pid = *ids.iter().min_by_key(|id| (store[**id].len(), **id)).expect("non-empty bucket");
        let mut pivot = core::mem::take(&mut store[pid]);
        let inv = field.inv(&pivot[0].1).expect("leading entry is nonzero");
        if !field.is_one(&pivot[0].1) {
            for (_, v) in pivot.iter_mut() {
                *v = field.mul(v, &inv);
            }
        }
        for id in ids {
            if id == pid {
                continue;
            }
            let row = core::mem::take(&mut store[id]);
            let alpha = field.neg(&row[0].1);
            let reduced = axpy(field, &row, &alpha, &pivot);
            debug_assert!(reduced.first().map_or(true, |(c, _)| *c > col));
            if let Some((c, _)) = reduced.first() {
                buckets[*c].push(id);
            }
            store[id] = reduced;
        }
        out_rows.push(pivot);
        pivots.push(col);
    }
    Echelon { field: field.clone(), ncols, rows: out_rows, pivots }
}

pub(crate) fn generic_rank<F: Field>(field: &F, rows: Vec<Row<F::Elem>>, ncols: usize) -> usize {
    echelon(field, rows, ncols).rows.len()
}

impl<F: Field> Echelon<F> {
    pub(crate) fn empty(field: &F, ncols: usize) -> Self {
        Echelon { field: field.clone(), ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub(crate) fn ncols(&self) -> usize {
        self.ncols
    }

    pub(crate) fn rows(&self) -> &[Row<F::Elem>] {
        &self.rows
    }

    pub(crate) fn pivot_cols(&self) -> &[usize] {
        &self.pivots
    }

    /// Clears every entry above a pivot (reduced row echelon form).
    pub(crate) fn make_reduced(&mut self) {
        let f = &self.field;
        for i in (0..self.rows.len()).rev() {
            let pc = self.pivots[i];
            let (head, tail) = self.rows.split_at_mut(i);
            let pivot_row = &tail[0];
            for row in head.iter_mut() {
                if let Some(v) = lookup(row, pc) {
                    let alpha = f.neg(v);
                    *row = axpy(f, row, &alpha, pivot_row);
                }
            }
        }
    }

    /// Null-space basis; requires reduced form.
    pub(crate) fn kernel(&self) -> Vec<SparseVector<F::Elem>> {
        let f = &self.field;
        let mut is_pivot = alloc::vec![false; self.ncols];
        for p in &self.pivots {
            is_pivot[*p] = true;
        }
        let mut by_free: Vec<Row<F::Elem>> = alloc::vec![Vec::new(); self.ncols];
        for (row, pc) in self.rows.iter().zip(&self.pivots) {
            for (c, v) in row.iter().skip(1) {
                debug_assert!(!is_pivot[*c]);
                by_free[*c].push((*pc, f.neg(v)));
            }
        }
        (0..self.ncols)
            .filter(|c| !is_pivot[*c])
            .map(|c| {
                let mut entries = core::mem::take(&mut by_free[c]);
                entries.push((c, f.one()));
                entries.sort_by_key(|(i, _)| *i);
                SparseVector::from_row(self.ncols, entries)
            })
            .collect()
    }

    pub(crate) fn reduce(&self, mut v: Row<F::Elem>) -> Row<F::Elem> {
        let f = &self.field;
        for (row, pc) in self.rows.iter().zip(&self.pivots) {
            if let Some(c) = lookup(&v, *pc) {
                let alpha = f.neg(c);
                v = axpy(f, &v, &alpha, row);
            }
        }
        v
    }

    pub(crate) fn insert(&mut self, v: Row<F::Elem>) -> bool {
        let r = self.reduce(v);
        let Some((lead, lv)) = r.first().cloned() else {
            return false;
        };
        let f = &self.field;
        let inv = f.inv(&lv).expect("nonzero leading entry");
        let r: Row<F::Elem> = r.into_iter().map(|(c, x)| (c, f.mul(&x, &inv))).collect();
        let pos = self.pivots.partition_point(|p| *p < lead);
        self.pivots.insert(pos, lead);
        self.rows.insert(pos, r);
        true
    }
}
