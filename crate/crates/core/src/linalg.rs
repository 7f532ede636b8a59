//! Sparse exact linear algebra.
//!
//! Matrices are stored column-major with sorted sparse columns. Every
//! elimination goes through [`Echelon`], an incremental echelon basis keyed by
//! leading index. Reduction only ever touches rows that share a pivot with the
//! vector being reduced, so block-diagonal (or permuted block-diagonal) inputs
//! are processed block by block without any explicit decomposition step.

use crate::error::{Error, Result};
use crate::field::Field;

/// Sparse vector: `(index, value)` pairs sorted by index, no explicit zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

const NO_ROW: u32 = u32::MAX;

/// `x + c * y`
pub fn axpy<F: Field>(field: &F, x: &[(usize, F::Elem)], c: &F::Elem, y: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    if field.is_zero(c) {
        return x.to_vec();
    }
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        let (xi, xv) = &x[i];
        let (yj, yv) = &y[j];
        if xi < yj {
            out.push((*xi, xv.clone()));
            i += 1;
        } else if yj < xi {
            out.push((*yj, field.mul(c, yv)));
            j += 1;
        } else {
            let v = field.mul_add(xv, c, yv);
            if !field.is_zero(&v) {
                out.push((*xi, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend(x[i..].iter().cloned());
    out.extend(y[j..].iter().map(|(k, v)| (*k, field.mul(c, v))));
    out
}

pub fn scale<F: Field>(field: &F, x: &[(usize, F::Elem)], c: &F::Elem) -> SparseVec<F::Elem> {
    if field.is_zero(c) {
        return Vec::new();
    }
    x.iter().map(|(k, v)| (*k, field.mul(c, v))).collect()
}

/// Builds a canonical sparse vector from unsorted entries, summing duplicates.
pub fn collect_sparse<F: Field>(field: &F, mut entries: Vec<(usize, F::Elem)>) -> SparseVec<F::Elem> {
    entries.sort_by_key(|e| e.0);
    let mut out: SparseVec<F::Elem> = Vec::with_capacity(entries.len());
    for (k, v) in entries {
        match out.last_mut() {
            Some((lk, lv)) if *lk == k => *lv = field.add(lv, &v),
            _ => out.push((k, v)),
        }
    }
    out.retain(|(_, v)| !field.is_zero(v));
    out
}

pub fn dense_to_sparse<F: Field>(field: &F, v: &[F::Elem]) -> SparseVec<F::Elem> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !field.is_zero(x))
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense<F: Field>(field: &F, v: &[(usize, F::Elem)], len: usize) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); len];
    for (k, x) in v {
        out[*k] = x.clone();
    }
    out
}

/// Shifts all indices of `v` by `offset`.
pub fn offset_sparse<E: Clone>(v: &[(usize, E)], offset: usize) -> SparseVec<E> {
    v.iter().map(|(k, x)| (k + offset, x.clone())).collect()
}

/// Incremental echelon basis of a subspace of `F^dim`.
///
/// Rows are normalized so that their leading (smallest-index) coefficient is
/// one; no two rows share a leading index. Optionally each row carries a tag
/// vector recording how it was assembled from the inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    dim: usize,
    pivot_row: Vec<u32>,
    rows: Vec<SparseVec<F::Elem>>,
    tags: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, dim: usize) -> Self {
        Echelon { field, dim, pivot_row: vec![NO_ROW; dim], rows: Vec::new(), tags: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    pub fn tags(&self) -> &[SparseVec<F::Elem>] {
        &self.tags
    }

    pub fn is_pivot(&self, index: usize) -> bool {
        self.pivot_row[index] != NO_ROW
    }

    fn row_at(&self, index: usize) -> Option<usize> {
        match self.pivot_row[index] {
            NO_ROW => None,
            r => Some(r as usize),
        }
    }

    /// Reduces until the leading index is not a pivot; the tag is updated alongside.
    pub fn reduce_leading(&self, mut v: SparseVec<F::Elem>, mut tag: SparseVec<F::Elem>) -> (SparseVec<F::Elem>, SparseVec<F::Elem>) {
        while let Some((lead, c)) = v.first() {
            let Some(r) = self.row_at(*lead) else { break };
            let c = self.field.neg(c);
            v = axpy(&self.field, &v, &c, &self.rows[r]);
            if let Some(t) = self.tags.get(r) {
                tag = axpy(&self.field, &tag, &c, t);
            }
        }
        (v, tag)
    }

    /// Eliminates every pivot coordinate of `v`.
    pub fn reduce_full(&self, mut v: SparseVec<F::Elem>, mut tag: SparseVec<F::Elem>) -> (SparseVec<F::Elem>, SparseVec<F::Elem>) {
        let mut k = 0;
        while k < v.len() {
            let idx = v[k].0;
            match self.row_at(idx) {
                Some(r) => {
                    let c = self.field.neg(&v[k].1);
                    v = axpy(&self.field, &v, &c, &self.rows[r]);
                    if let Some(t) = self.tags.get(r) {
                        tag = axpy(&self.field, &tag, &c, t);
                    }
                }
                None => k += 1,
            }
        }
        (v, tag)
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.reduce_leading(v.to_vec(), Vec::new()).0.is_empty()
    }

    /// Inserts `v`; returns `true` when it was independent of the current rows.
    pub fn insert(&mut self, v: SparseVec<F::Elem>) -> bool {
        self.insert_tagged(v, Vec::new()).is_ok()
    }

    /// Inserts `v` with a tag. On dependence returns the reduced tag, i.e. a
    /// relation `tag - sum(c_r * tag_r)` whose combination vanishes.
    pub fn insert_tagged(&mut self, v: SparseVec<F::Elem>, tag: SparseVec<F::Elem>) -> std::result::Result<usize, SparseVec<F::Elem>> {
        let track = !tag.is_empty() || !self.tags.is_empty();
        let (v, tag) = self.reduce_leading(v, tag);
        if v.is_empty() {
            return Err(tag);
        }
        let lead = v[0].0;
        let inv = self.field.inv(&v[0].1).expect("leading coefficient is nonzero");
        let row = scale(&self.field, &v, &inv);
        if track {
            if self.tags.len() < self.rows.len() {
                self.tags.resize(self.rows.len(), Vec::new());
            }
            self.tags.push(scale(&self.field, &tag, &inv));
        }
        self.pivot_row[lead] = self.rows.len() as u32;
        self.rows.push(row);
        Ok(lead)
    }

    /// Leading indices in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|r| r[0].0).collect();
        p.sort_unstable();
        p
    }

    /// Fully reduced rows sorted by pivot: the reduced row echelon basis.
    pub fn into_rref(self) -> Vec<SparseVec<F::Elem>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r][0].0));
        let mut done = Echelon::new(self.field.clone(), self.dim);
        for r in order {
            let row = self.rows[r].clone();
            let lead = row[0].0;
            // entries before the first pivot-coordinate past `lead` are untouched
            let (reduced, _) = done.reduce_full(row, Vec::new());
            debug_assert_eq!(reduced[0].0, lead);
            done.pivot_row[lead] = done.rows.len() as u32;
            done.rows.push(reduced);
        }
        let mut rows = done.rows;
        rows.sort_by_key(|r| r[0].0);
        rows
    }
}

/// Dense-shaped matrix with sparse column storage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, field.one())]).collect();
        Matrix { field: field.clone(), rows: n, cols: n, columns }
    }

    /// Builds a matrix from sparse columns; columns are canonicalized.
    pub fn from_columns(field: &F, rows: usize, columns: Vec<SparseVec<F::Elem>>) -> Self {
        let columns = columns
            .into_iter()
            .map(|c| {
                debug_assert!(c.iter().all(|(k, _)| *k < rows));
                if c.windows(2).all(|w| w[0].0 < w[1].0) && c.iter().all(|(_, v)| !field.is_zero(v)) {
                    c
                } else {
                    collect_sparse(field, c)
                }
            })
            .collect::<Vec<_>>();
        Matrix { field: field.clone(), rows, cols: columns.len(), columns }
    }

    /// Builds a matrix from `(row, col, value)` triples, summing duplicates.
    pub fn from_triplets(field: &F, rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, F::Elem)>) -> Self {
        let mut columns: Vec<SparseVec<F::Elem>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r}, {c}) outside {rows}x{cols}");
            columns[c].push((r, v));
        }
        Self::from_columns(field, rows, columns)
    }

    pub fn from_dense(field: &F, data: &[Vec<F::Elem>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        let triplets = data
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (i, j, v.clone())));
        Self::from_triplets(field, rows, cols, triplets)
    }

    pub fn from_i64(field: &F, data: &[&[i64]]) -> Self {
        let dense: Vec<Vec<F::Elem>> = data.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        let mut m = Self::from_dense(field, &dense);
        if data.is_empty() {
            m.cols = 0;
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn column(&self, j: usize) -> &SparseVec<F::Elem> {
        &self.columns[j]
    }
    pub fn columns(&self) -> &[SparseVec<F::Elem>] {
        &self.columns
    }
    pub fn into_columns(self) -> Vec<SparseVec<F::Elem>> {
        self.columns
    }
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        match self.columns[c].binary_search_by_key(&r, |e| e.0) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        let mut out = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    /// Entries as `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &F::Elem)> + '_ {
        self.columns.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn mul_vec(&self, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let mut acc: Vec<(usize, F::Elem)> = Vec::new();
        for (j, x) in v {
            for (i, m) in &self.columns[*j] {
                acc.push((*i, self.field.mul(m, x)));
            }
        }
        collect_sparse(&self.field, acc)
    }

    pub fn mul(&self, other: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let columns = other.columns.iter().map(|c| self.mul_vec(c)).collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: other.cols, columns })
    }

    pub fn add(&self, other: &Matrix<F>) -> Result<Matrix<F>> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!("{}x{} + {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let one = self.field.one();
        let columns = self.columns.iter().zip(&other.columns).map(|(a, b)| axpy(&self.field, a, &one, b)).collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, columns })
    }

    pub fn sub(&self, other: &Matrix<F>) -> Result<Matrix<F>> {
        self.add(&other.scaled(&self.field.neg(&self.field.one())))
    }

    pub fn scaled(&self, c: &F::Elem) -> Matrix<F> {
        let columns = self.columns.iter().map(|col| scale(&self.field, col, c)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, columns }
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut columns: Vec<SparseVec<F::Elem>> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                columns[*i].push((j, v.clone()));
            }
        }
        Matrix { field: self.field.clone(), rows: self.cols, cols: self.rows, columns }
    }

    /// Kronecker product, `self` major.
    pub fn kron(&self, other: &Matrix<F>) -> Matrix<F> {
        let rows = self.rows * other.rows;
        let mut columns = Vec::with_capacity(self.cols * other.cols);
        for a in &self.columns {
            for b in &other.columns {
                let mut col = Vec::with_capacity(a.len() * b.len());
                for (i, x) in a {
                    for (k, y) in b {
                        col.push((i * other.rows + k, self.field.mul(x, y)));
                    }
                }
                columns.push(col);
            }
        }
        Matrix { field: self.field.clone(), rows, cols: self.cols * other.cols, columns }
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &Matrix<F>) -> Result<Matrix<F>> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!("hstack of {} and {} rows", self.rows, other.rows)));
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: columns.len(), columns })
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Matrix<F>) -> Result<Matrix<F>> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("vstack of {} and {} cols", self.cols, other.cols)));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.extend(offset_sparse(b, self.rows));
                c
            })
            .collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, columns })
    }

    fn column_echelon(&self, tagged: bool) -> (Echelon<F>, Vec<SparseVec<F::Elem>>) {
        let mut ech = Echelon::new(self.field.clone(), self.rows);
        let mut relations = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            let tag = if tagged { vec![(j, self.field.one())] } else { Vec::new() };
            if let Err(rel) = ech.insert_tagged(col.clone(), tag) {
                if tagged {
                    relations.push(rel);
                }
            }
        }
        (ech, relations)
    }

    pub fn rank(&self) -> usize {
        self.column_echelon(false).0.rank()
    }

    /// Reduced-echelon basis of the null space, one column per non-pivot column.
    pub fn kernel_basis(&self) -> Matrix<F> {
        self.kernel_with_free().0
    }

    /// Kernel basis together with its free columns: basis vector `k` has a one
    /// at `free[k]` and zeros at every other free column, so the coordinates of
    /// a null vector are its entries at the free columns.
    pub fn kernel_with_free(&self) -> (Matrix<F>, Vec<usize>) {
        let mut ech = Echelon::new(self.field.clone(), self.rows);
        let mut rels = Vec::new();
        let mut free = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            if let Err(rel) = ech.insert_tagged(col.clone(), vec![(j, self.field.one())]) {
                rels.push(rel);
                free.push(j);
            }
        }
        (Matrix::from_columns(&self.field, self.cols, rels), free)
    }

    /// Reduced-echelon basis of the column space.
    pub fn image_basis(&self) -> Matrix<F> {
        let (ech, _) = self.column_echelon(false);
        Matrix::from_columns(&self.field, self.rows, ech.into_rref())
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[(usize, F::Elem)]) -> Option<SparseVec<F::Elem>> {
        let (ech, _) = self.column_echelon(true);
        solve_with(&ech, b)
    }

    pub fn solve_dense(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let x = self.solve(&dense_to_sparse(&self.field, b))?;
        Some(sparse_to_dense(&self.field, &x, self.cols))
    }

    /// True iff square and invertible.
    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Keeps the listed rows (in the given order) and renumbers them.
    pub fn select_rows(&self, rows: &[usize]) -> Matrix<F> {
        let mut renumber = vec![usize::MAX; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            renumber[r] = k;
        }
        let columns = self
            .columns
            .iter()
            .map(|c| {
                let mut out: SparseVec<F::Elem> =
                    c.iter().filter(|(i, _)| renumber[*i] != usize::MAX).map(|(i, v)| (renumber[*i], v.clone())).collect();
                out.sort_by_key(|e| e.0);
                out
            })
            .collect();
        Matrix { field: self.field.clone(), rows: rows.len(), cols: self.cols, columns }
    }

    /// Restricts to a subset of columns.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix<F> {
        let columns = cols.iter().map(|&j| self.columns[j].clone()).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: cols.len(), columns }
    }
}

/// Solves against a column echelon built with unit tags.
pub fn solve_with<F: Field>(ech: &Echelon<F>, b: &[(usize, F::Elem)]) -> Option<SparseVec<F::Elem>> {
    let (rest, tag) = ech.reduce_leading(b.to_vec(), Vec::new());
    if !rest.is_empty() {
        return None;
    }
    let minus = ech.field.neg(&ech.field.one());
    Some(scale(&ech.field, &tag, &minus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f = f7();
        assert_eq!(Matrix::identity(&f, 2).rank(), 2);
        assert_eq!(Matrix::zero(&f, 3, 4).rank(), 0);
        let q = Rationals;
        assert_eq!(Matrix::from_i64(&q, &[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let f = f7();
        assert_eq!(Matrix::identity(&f, 2).kernel_basis().cols(), 0);
        let k = Matrix::zero(&f, 2, 3).kernel_basis();
        assert_eq!(k.cols(), 3);
        assert_eq!(k.rank(), 3);
        let f5 = PrimeField::new(5).unwrap();
        let m = Matrix::from_i64(&f5, &[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).unwrap().is_zero());
        assert_eq!(k.to_dense(), vec![vec![4], vec![1]]);
    }

    #[test]
    fn image_examples() {
        let q = Rationals;
        assert_eq!(Matrix::identity(&q, 3).image_basis(), Matrix::identity(&q, 3));
        assert_eq!(Matrix::zero(&q, 2, 2).image_basis().cols(), 0);
        let im = Matrix::from_i64(&q, &[&[1, 2], &[2, 4]]).image_basis();
        assert_eq!(im, Matrix::from_i64(&q, &[&[1], &[2]]));
    }

    #[test]
    fn solve_examples() {
        let q = Rationals;
        let x = Matrix::identity(&q, 2).solve_dense(&[q.from_i64(3), q.from_i64(4)]).unwrap();
        assert_eq!(x, vec![q.from_i64(3), q.from_i64(4)]);
        assert!(Matrix::zero(&q, 2, 2).solve_dense(&[q.one(), q.zero()]).is_none());
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(Matrix::from_i64(&f5, &[&[2]]).solve_dense(&[1]).unwrap(), vec![3]);
    }

    #[test]
    fn rref_is_canonical() {
        let q = Rationals;
        let a = Matrix::from_i64(&q, &[&[1, 0, 1], &[1, 1, 2], &[0, 1, 1]]);
        let b = Matrix::from_i64(&q, &[&[2, 1, 0], &[3, 2, 1], &[1, 1, 1]]);
        // same column space, different generators
        assert_eq!(a.image_basis(), b.image_basis());
    }

    #[test]
    fn kron_and_stack_shapes() {
        let f = f7();
        let a = Matrix::from_i64(&f, &[&[1, 2], &[0, 1]]);
        let i = Matrix::identity(&f, 3);
        let k = a.kron(&i);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(k.get(0, 3), 2);
        assert_eq!(a.hstack(&a).unwrap().cols(), 4);
        assert_eq!(a.vstack(&a).unwrap().rows(), 4);
        assert_eq!(a.transpose().get(1, 0), 2);
    }
}
