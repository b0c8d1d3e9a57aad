//! Exact linear algebra: canonical RREF, solving, subspaces and quotients.
//!
//! Elimination runs on sparse rows. The systems built by the algebra layer
//! (commutation equations for permutation-like actions, tensor relations)
//! have a handful of nonzeros per row, and dense elimination over the
//! rationals would dominate every decision otherwise.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// A sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn sparse_from_dense(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn dense_from_sparse(v: &SparseVec, n: usize, field: Field) -> Vec<Scalar> {
    let mut out = vec![field.zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `a + s*b` for sparse vectors.
pub fn sparse_axpy(a: &SparseVec, s: &Scalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = s.mul(&b[j].1);
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = a[i].1.add(&s.mul(&b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Accumulates `coef * e_idx` into a dense vector.
#[inline]
pub fn dense_axpy(acc: &mut [Scalar], s: &Scalar, v: &[Scalar]) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        a.add_mul_assign(s, x);
    }
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Incremental row reduction to the canonical reduced row echelon form.
///
/// Rows are inserted one at a time and kept in semi-echelon form; `finish`
/// back-substitutes so that each pivot column is zero outside its own row.
#[derive(Clone, Debug)]
pub struct RowReducer {
    ncols: usize,
    field: Field,
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl RowReducer {
    pub fn new(ncols: usize, field: Field) -> Self {
        RowReducer { ncols, field, rows: Vec::new(), pivot_row: HashMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Eliminates every pivot column from `v`.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut start = 0;
        loop {
            let hit = v[start.min(v.len())..].iter().position(|(c, _)| self.pivot_row.contains_key(c)).map(|k| k + start.min(v.len()));
            let Some(k) = hit else { return v };
            let (col, coef) = v[k].clone();
            let row = &self.rows[self.pivot_row[&col]];
            v = sparse_axpy(&v, &coef.neg(), row);
            // Entries left of `col` are untouched by the pivot row.
            start = k;
        }
    }

    /// Inserts a row; returns true when it increased the rank.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce(v);
        let Some((col, lead)) = v.first().cloned() else { return false };
        let inv = lead.inv();
        let v: SparseVec = v.into_iter().map(|(c, x)| (c, x.mul(&inv))).collect();
        self.pivot_row.insert(col, self.rows.len());
        self.rows.push(v);
        true
    }

    pub fn insert_dense(&mut self, v: &[Scalar]) -> bool {
        self.insert(sparse_from_dense(v))
    }

    /// True when `v` lies in the row span.
    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Canonical RREF rows sorted by pivot column.
    pub fn finish(mut self) -> Rref {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.rows[r].first().map(|e| e.0).unwrap_or(usize::MAX));
        // Back-substitute from the rightmost pivot leftwards.
        for idx in (0..order.len()).rev() {
            let r = order[idx];
            let row = std::mem::take(&mut self.rows[r]);
            let (head, tail) = row.split_first().map(|(h, t)| (h.clone(), t.to_vec())).unwrap();
            let mut tail = tail;
            let mut k = 0;
            while k < tail.len() {
                let col = tail[k].0;
                if let Some(&pr) = self.pivot_row.get(&col) {
                    let coef = tail[k].1.clone();
                    tail = sparse_axpy(&tail, &coef.neg(), &self.rows[pr]);
                    // The pivot row never touches columns left of `col`.
                } else {
                    k += 1;
                }
            }
            let mut row = Vec::with_capacity(tail.len() + 1);
            row.push(head);
            row.extend(tail);
            self.rows[r] = row;
        }
        let rows: Vec<SparseVec> = order.iter().map(|&r| std::mem::take(&mut self.rows[r])).collect();
        let pivots = rows.iter().map(|r| r[0].0).collect();
        Rref { ncols: self.ncols, field: self.field, rows, pivots }
    }
}

/// A matrix in canonical reduced row echelon form, stored sparsely.
#[derive(Clone, Debug)]
pub struct Rref {
    pub ncols: usize,
    pub field: Field,
    pub rows: Vec<SparseVec>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Columns without a pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Basis of the null space `{x : R x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let free = self.free_columns();
        let mut pos = vec![usize::MAX; self.ncols];
        for (i, &f) in free.iter().enumerate() {
            pos[f] = i;
        }
        let mut out: Vec<SparseVec> = free.iter().map(|&f| vec![(f, self.field.one())]).collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            for (c, x) in &row[1..] {
                out[pos[*c]].push((p, x.neg()));
            }
        }
        for v in &mut out {
            v.sort_by_key(|e| e.0);
        }
        out
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows.len(), self.ncols, self.field);
        for (i, r) in self.rows.iter().enumerate() {
            for (c, x) in r {
                m.set(i, *c, x.clone());
            }
        }
        m
    }
}

/// Dense matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize, field: Field) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            data.extend(r);
        }
        Ok(Matrix { rows: n, cols, field, data })
    }

    pub fn from_i64(rows: &[&[i64]], field: Field) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| field.from_i64(x))).collect();
        Matrix { rows: rows.len(), cols, field, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Scalar>], nrows: usize, field: Field) -> Self {
        let mut m = Matrix::zeros(nrows, cols.len(), field);
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    /// Row-major flattening, used to treat a matrix as a vector of unknowns.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Scalar>, field: Field) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, field, data }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: o.rows });
        }
        let mut out = Matrix::zeros(self.rows, o.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let row = o.row(k).to_vec();
                dense_axpy(&mut out.data[i * o.cols..(i + 1) * o.cols], a, &row);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    acc.add_mul_assign(a, x);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, field: self.field, data }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        self.add(&o.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a.mul(s)).collect();
        Matrix { rows: self.rows, cols: self.cols, field: self.field, data }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Canonical RREF and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let r = self.rref_sparse();
        let mut m = Matrix::zeros(self.rows, self.cols, self.field);
        for (i, row) in r.rows.iter().enumerate() {
            for (c, x) in row {
                m.set(i, *c, x.clone());
            }
        }
        let pivots = r.pivots.clone();
        (m, pivots)
    }

    pub fn rref_sparse(&self) -> Rref {
        let mut red = RowReducer::new(self.cols, self.field);
        for i in 0..self.rows {
            red.insert_dense(self.row(i));
        }
        red.finish()
    }

    pub fn rank(&self) -> usize {
        self.rref_sparse().rank()
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n, self.field);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n, self.field);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Solves `self * x = b`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Solution> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let mut sys = LinearSystem::new(self.cols, self.field);
        for i in 0..self.rows {
            sys.push(sparse_from_dense(self.row(i)), b[i].clone());
        }
        Ok(sys.solve())
    }

    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        self.rref_sparse().kernel().iter().map(|v| dense_from_sparse(v, self.cols, self.field)).collect()
    }
}

/// Result of solving a linear system.
#[derive(Clone, Debug)]
pub struct Solution {
    /// One solution (free variables set to zero), or `None` if inconsistent.
    pub particular: Option<Vec<Scalar>>,
    /// Basis of the homogeneous solution space.
    pub kernel: Vec<Vec<Scalar>>,
}

/// A sparse linear system `A x = b` assembled equation by equation.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    nvars: usize,
    field: Field,
    red: RowReducer,
}

impl LinearSystem {
    pub fn new(nvars: usize, field: Field) -> Self {
        // The right-hand side lives in the extra last column.
        LinearSystem { nvars, field, red: RowReducer::new(nvars + 1, field) }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn push(&mut self, mut lhs: SparseVec, rhs: Scalar) {
        if !rhs.is_zero() {
            lhs.push((self.nvars, rhs));
        }
        self.red.insert(lhs);
    }

    pub fn push_homogeneous(&mut self, lhs: SparseVec) {
        self.red.insert(lhs);
    }

    pub fn solve(self) -> Solution {
        let n = self.nvars;
        let field = self.field;
        let r = self.red.finish();
        if r.pivots.last() == Some(&n) {
            // A row `0 = 1`; still report the homogeneous kernel.
            let hom = Rref { ncols: n, field, rows: r.rows[..r.rows.len() - 1].to_vec(), pivots: r.pivots[..r.pivots.len() - 1].to_vec() };
            let kernel = hom.kernel().iter().map(|v| dense_from_sparse(v, n, field)).collect();
            return Solution { particular: None, kernel };
        }
        let mut x = vec![field.zero(); n];
        for (row, &p) in r.rows.iter().zip(&r.pivots) {
            if let Some((c, v)) = row.last() {
                if *c == n {
                    x[p] = v.clone();
                }
            }
        }
        let hom = Rref {
            ncols: n,
            field,
            rows: r.rows.iter().map(|row| row.iter().filter(|e| e.0 < n).cloned().collect()).collect(),
            pivots: r.pivots.clone(),
        };
        let kernel = hom.kernel().iter().map(|v| dense_from_sparse(v, n, field)).collect();
        Solution { particular: Some(x), kernel }
    }

    /// Kernel only, as sparse vectors (no dense expansion).
    pub fn kernel_sparse(self) -> Vec<SparseVec> {
        let n = self.nvars;
        let r = self.red.finish();
        let hom = Rref { ncols: n, field: r.field, rows: r.rows, pivots: r.pivots };
        hom.kernel()
    }
}

/// A subspace of `field^ambient`, stored by its canonical RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    pub field: Field,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize, field: Field) -> Self {
        Subspace { ambient, field, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize, field: Field) -> Self {
        let id = Matrix::identity(ambient, field);
        Subspace::span(ambient, field, (0..ambient).map(|i| id.row(i).to_vec()))
    }

    pub fn span<I: IntoIterator<Item = Vec<Scalar>>>(ambient: usize, field: Field, vecs: I) -> Self {
        let mut red = RowReducer::new(ambient, field);
        for v in vecs {
            assert_eq!(v.len(), ambient, "vector length differs from ambient dimension");
            red.insert_dense(&v);
        }
        Subspace::from_rref(red.finish())
    }

    pub fn span_sparse<I: IntoIterator<Item = SparseVec>>(ambient: usize, field: Field, vecs: I) -> Self {
        let mut red = RowReducer::new(ambient, field);
        for v in vecs {
            red.insert(v);
        }
        Subspace::from_rref(red.finish())
    }

    pub fn from_rref(r: Rref) -> Self {
        let basis = r.rows.iter().map(|row| dense_from_sparse(row, r.ncols, r.field)).collect();
        Subspace { ambient: r.ncols, field: r.field, basis, pivots: r.pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, got: v.len() });
        }
        // In RREF, the coordinate on row i is the entry at pivot i.
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut r = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                dense_axpy(&mut r, &c.neg(), b);
            }
        }
        Ok(if is_zero_vec(&r) { Some(coords) } else { None })
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        matches!(self.coordinates(v), Ok(Some(_)))
    }

    pub fn contains_subspace(&self, o: &Subspace) -> bool {
        o.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        Subspace::span(self.ambient, self.field, self.basis.iter().chain(&o.basis).cloned())
    }

    pub fn intersect(&self, o: &Subspace) -> Subspace {
        // Solve sum_i a_i s_i = sum_j b_j o_j.
        let n1 = self.dim();
        let n2 = o.dim();
        let mut sys = LinearSystem::new(n1 + n2, self.field);
        for k in 0..self.ambient {
            let mut row = Vec::new();
            for (i, b) in self.basis.iter().enumerate() {
                if !b[k].is_zero() {
                    row.push((i, b[k].clone()));
                }
            }
            for (j, b) in o.basis.iter().enumerate() {
                if !b[k].is_zero() {
                    row.push((n1 + j, b[k].neg()));
                }
            }
            sys.push_homogeneous(row);
        }
        let sol = sys.solve();
        let vecs = sol.kernel.into_iter().map(|c| self.combine(&c[..n1]));
        Subspace::span(self.ambient, self.field, vecs)
    }

    /// `sum_i c_i basis_i`.
    pub fn combine(&self, coeffs: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.ambient];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            dense_axpy(&mut out, c, b);
        }
        out
    }
}

/// Membership test with coordinates, as a free function.
pub fn membership(s: &Subspace, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    s.coordinates(v)
}

/// `field^ambient / relations`, with the complement spanned by the
/// non-pivot coordinates of the relation RREF.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub ambient: usize,
    pub field: Field,
    /// Ambient index of each quotient coordinate.
    pub section: Vec<usize>,
    /// Image of every ambient basis vector in quotient coordinates.
    projection: Vec<SparseVec>,
}

impl Quotient {
    pub fn from_rref(r: &Rref) -> Self {
        let section = r.free_columns();
        let mut coord = vec![usize::MAX; r.ncols];
        for (i, &c) in section.iter().enumerate() {
            coord[c] = i;
        }
        let mut projection: Vec<SparseVec> = vec![Vec::new(); r.ncols];
        for &c in &section {
            projection[c] = vec![(coord[c], r.field.one())];
        }
        for (row, &p) in r.rows.iter().zip(&r.pivots) {
            // e_p == -(rest of the row) modulo relations.
            let mut img: SparseVec = row[1..].iter().map(|(c, x)| (coord[*c], x.neg())).collect();
            img.sort_by_key(|e| e.0);
            projection[p] = img;
        }
        Quotient { ambient: r.ncols, field: r.field, section, projection }
    }

    pub fn from_relations<I: IntoIterator<Item = SparseVec>>(ambient: usize, field: Field, rels: I) -> Self {
        let mut red = RowReducer::new(ambient, field);
        for r in rels {
            red.insert(r);
        }
        Quotient::from_rref(&red.finish())
    }

    pub fn dim(&self) -> usize {
        self.section.len()
    }

    /// Quotient coordinates of the ambient basis vector `i`.
    #[inline]
    pub fn project_basis(&self, i: usize) -> &SparseVec {
        &self.projection[i]
    }

    /// Accumulates `s * [e_i]` into a dense quotient vector.
    #[inline]
    pub fn add_basis_image(&self, acc: &mut [Scalar], s: &Scalar, i: usize) {
        if s.is_zero() {
            return;
        }
        for (c, x) in &self.projection[i] {
            acc[*c].add_mul_assign(s, x);
        }
    }

    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, x) in v.iter().enumerate() {
            self.add_basis_image(&mut out, x, i);
        }
        out
    }

    pub fn lift(&self, q: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.ambient];
        for (i, x) in q.iter().enumerate() {
            out[self.section[i]] = x.clone();
        }
        out
    }

    pub fn projection_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim(), self.ambient, self.field);
        for (i, img) in self.projection.iter().enumerate() {
            for (c, x) in img {
                m.set(*c, i, x.clone());
            }
        }
        m
    }
}

/// Section basis (as ambient vectors) and projection matrix for
/// `field^ambient / relations`.
pub fn quotient_space(ambient: usize, relations: &Subspace) -> (Vec<Vec<Scalar>>, Matrix) {
    let q = Quotient::from_relations(ambient, relations.field, relations.basis().iter().map(|v| sparse_from_dense(v)));
    let id = Matrix::identity(ambient, relations.field);
    let section = q.section.iter().map(|&i| id.row(i).to_vec()).collect();
    (section, q.projection_matrix())
}

/// A linear map between coordinate spaces, stored by the images of the
/// source basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    pub src: usize,
    pub dst: usize,
    pub field: Field,
    pub cols: Vec<SparseVec>,
}

impl LinMap {
    pub fn zero(src: usize, dst: usize, field: Field) -> Self {
        LinMap { src, dst, field, cols: vec![Vec::new(); src] }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        LinMap { src: n, dst: n, field, cols: (0..n).map(|i| vec![(i, field.one())]).collect() }
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        let cols = (0..m.cols).map(|j| sparse_from_dense(&m.column(j))).collect();
        LinMap { src: m.cols, dst: m.rows, field: m.field, cols }
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dst, self.src, self.field);
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c {
                m.set(*i, j, x.clone());
            }
        }
        m
    }

    /// Reads a map from a row-major flattened vector of its matrix.
    pub fn from_flat_rowmajor(src: usize, dst: usize, v: &SparseVec, field: Field) -> Self {
        let mut cols = vec![Vec::new(); src];
        for (k, x) in v {
            cols[k % src].push((k / src, x.clone()));
        }
        for c in &mut cols {
            c.sort_by_key(|e| e.0);
        }
        LinMap { src, dst, field, cols }
    }

    /// Column-major flattening: entry `(r, c)` at `c * dst + r`.
    pub fn flatten(&self) -> SparseVec {
        let mut out = Vec::new();
        for (c, col) in self.cols.iter().enumerate() {
            for (r, x) in col {
                out.push((c * self.dst + r, x.clone()));
            }
        }
        out
    }

    pub fn from_flat(src: usize, dst: usize, v: &SparseVec, field: Field) -> Self {
        let mut cols = vec![Vec::new(); src];
        for (k, x) in v {
            cols[k / dst].push((k % dst, x.clone()));
        }
        LinMap { src, dst, field, cols }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dst];
        for (x, col) in v.iter().zip(&self.cols) {
            if x.is_zero() {
                continue;
            }
            for (i, y) in col {
                out[*i].add_mul_assign(x, y);
            }
        }
        out
    }

    pub fn apply_sparse(&self, v: &SparseVec) -> SparseVec {
        let mut acc: std::collections::BTreeMap<usize, Scalar> = std::collections::BTreeMap::new();
        for (j, x) in v {
            for (i, y) in &self.cols[*j] {
                let e = acc.entry(*i).or_insert_with(|| self.field.zero());
                e.add_mul_assign(x, y);
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &LinMap) -> LinMap {
        assert_eq!(o.dst, self.src, "composition dimension mismatch");
        LinMap { src: o.src, dst: self.dst, field: self.field, cols: o.cols.iter().map(|c| self.apply_sparse(c)).collect() }
    }

    pub fn add(&self, o: &LinMap) -> LinMap {
        self.axpy(&self.field.one(), o)
    }

    /// `self + s * o`.
    pub fn axpy(&self, s: &Scalar, o: &LinMap) -> LinMap {
        assert_eq!((self.src, self.dst), (o.src, o.dst));
        let cols = self.cols.iter().zip(&o.cols).map(|(a, b)| sparse_axpy(a, s, b)).collect();
        LinMap { src: self.src, dst: self.dst, field: self.field, cols }
    }

    pub fn scale(&self, s: &Scalar) -> LinMap {
        LinMap::zero(self.src, self.dst, self.field).axpy(s, self)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst && self.cols.iter().enumerate().all(|(j, c)| c.len() == 1 && c[0].0 == j && c[0].1.is_one())
    }

    /// Rows of the matrix as sparse vectors.
    pub fn rows(&self) -> Vec<SparseVec> {
        let mut rows = vec![Vec::new(); self.dst];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c {
                rows[*i].push((j, x.clone()));
            }
        }
        rows
    }

    pub fn transpose(&self) -> LinMap {
        LinMap { src: self.dst, dst: self.src, field: self.field, cols: self.rows() }
    }

    pub fn rank(&self) -> usize {
        let mut red = RowReducer::new(self.dst, self.field);
        for c in &self.cols {
            red.insert(c.clone());
        }
        red.rank()
    }

    /// Image subspace.
    pub fn image(&self) -> Subspace {
        Subspace::span_sparse(self.dst, self.field, self.cols.iter().cloned())
    }

    /// Kernel basis.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut sys = LinearSystem::new(self.src, self.field);
        for r in self.rows() {
            sys.push_homogeneous(r);
        }
        sys.kernel_sparse()
    }

    /// Two-sided inverse, if the map is bijective.
    pub fn inverse(&self) -> Option<LinMap> {
        if self.src != self.dst {
            return None;
        }
        self.to_matrix().inverse().map(|m| LinMap::from_matrix(&m))
    }

    /// Restriction of a map to the coordinates `idx` of its source and
    /// `jdx` of its target (other target coordinates must vanish).
    pub fn block(&self, idx: &[usize], jdx: &[usize]) -> LinMap {
        let mut pos = std::collections::HashMap::new();
        for (k, &j) in jdx.iter().enumerate() {
            pos.insert(j, k);
        }
        let cols = idx.iter().map(|&i| self.cols[i].iter().filter_map(|(r, x)| pos.get(r).map(|&k| (k, x.clone()))).collect()).collect();
        LinMap { src: idx.len(), dst: jdx.len(), field: self.field, cols }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = Matrix::identity(3, Q);
        let (r, p) = id.rref();
        assert_eq!(r, id);
        assert_eq!(p, vec![0, 1, 2]);
        let z = Matrix::zeros(2, 3, Q);
        let (r, p) = z.rref();
        assert_eq!(r, z);
        assert!(p.is_empty());
    }

    #[test]
    fn rref_hand_example() {
        // [[2,4],[1,2]]: R1/2 = [1,2]; R2 - R1 = 0.
        let m = Matrix::from_i64(&[&[2, 4], &[1, 2]], Q);
        let (r, p) = m.rref();
        assert_eq!(r, Matrix::from_i64(&[&[1, 2], &[0, 0]], Q));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_needs_back_substitution() {
        let m = Matrix::from_i64(&[&[0, 1, 1], &[1, 1, 0], &[1, 0, 0]], Q);
        let (r, p) = m.rref();
        assert!(r.is_identity());
        assert_eq!(p, vec![0, 1, 2]);
    }

    #[test]
    fn solve_examples() {
        let b = v(&[3, -1, 7]);
        let s = Matrix::identity(3, Q).solve(&b).unwrap();
        assert_eq!(s.particular.unwrap(), b);
        assert!(s.kernel.is_empty());

        let s = Matrix::zeros(2, 2, Q).solve(&v(&[0, 0])).unwrap();
        assert_eq!(s.particular.unwrap(), v(&[0, 0]));
        assert_eq!(s.kernel.len(), 2);

        // rank [A] = 1 < rank [A|b] = 2.
        let a = Matrix::from_i64(&[&[1, 1], &[2, 2]], Q);
        assert!(a.solve(&v(&[1, 3])).unwrap().particular.is_none());
        assert!(a.solve(&v(&[1, 3, 4])).is_err());
    }

    #[test]
    fn membership_examples() {
        let s = Subspace::span(2, Q, vec![v(&[1, 0])]);
        assert!(s.contains(&v(&[1, 0])));
        assert_eq!(membership(&s, &v(&[0, 0])).unwrap(), Some(v(&[0])));
        assert_eq!(membership(&s, &v(&[0, 1])).unwrap(), None);
        assert!(membership(&s, &v(&[0, 1, 0])).is_err());
    }

    #[test]
    fn quotient_examples() {
        let (sec, proj) = quotient_space(3, &Subspace::zero(3, Q));
        assert_eq!(sec.len(), 3);
        assert!(proj.is_identity());
        let (sec, _) = quotient_space(3, &Subspace::full(3, Q));
        assert!(sec.is_empty());
        let rel = Subspace::span(3, Q, vec![v(&[1, -1, 0])]);
        let (sec, proj) = quotient_space(3, &rel);
        assert_eq!(sec.len(), 2);
        assert!(proj.mul_vec(&v(&[1, -1, 0])).iter().all(Scalar::is_zero));
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::span(3, Q, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, Q, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let i = a.intersect(&b);
        assert_eq!(i, Subspace::span(3, Q, vec![v(&[0, 2, 0])]));
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c)
                .prop_map(move |xs| Matrix::from_flat(r, c, xs.into_iter().map(|x| Q.from_i64(x)).collect(), Q))
        })
    }

    proptest! {
        #[test]
        fn rref_idempotent_and_rank(m in small_matrix()) {
            let (r, p) = m.rref();
            let (r2, p2) = r.rref();
            prop_assert_eq!(&r, &r2);
            prop_assert_eq!(&p, &p2);
            prop_assert_eq!(m.rank(), p.len());
        }

        #[test]
        fn solutions_are_exact(m in small_matrix(), seed in proptest::collection::vec(-3i64..4, 5)) {
            let x0: Vec<Scalar> = (0..m.cols).map(|i| Q.from_i64(seed[i])).collect();
            let b = m.mul_vec(&x0);
            let s = m.solve(&b).unwrap();
            let x = s.particular.expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&x), b);
            for k in &s.kernel {
                prop_assert!(is_zero_vec(&m.mul_vec(k)));
            }
            prop_assert_eq!(s.kernel.len(), m.cols - m.rank());
        }

        #[test]
        fn quotient_projection_section(m in small_matrix()) {
            let rel = Subspace::span(m.cols, Q, (0..m.rows).map(|i| m.row(i).to_vec()));
            let (sec, proj) = quotient_space(m.cols, &rel);
            for (i, s) in sec.iter().enumerate() {
                let img = proj.mul_vec(s);
                for (j, x) in img.iter().enumerate() {
                    prop_assert_eq!(x.is_one(), i == j);
                    prop_assert!(i == j || x.is_zero());
                }
            }
            let sec_space = Subspace::span(m.cols, Q, sec.clone());
            prop_assert_eq!(sec_space.intersect(&rel).dim(), 0);
            for b in rel.basis() {
                prop_assert!(is_zero_vec(&proj.mul_vec(b)));
            }
        }
    }
}
