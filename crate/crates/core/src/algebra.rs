//! Finite-dimensional associative algebras given by structure constants,
//! algebra maps between them, and towers `C -> B -> A`.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{dense_from_sparse, sparse_from_dense, LinMap, RowReducer, Solution, SparseVec, Subspace};

/// A unital associative algebra with basis `e_0, .., e_{d-1}` and products
/// `e_i e_j = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug)]
pub struct Algebra {
    field: Field,
    labels: Vec<String>,
    mult: Vec<Vec<SparseVec>>,
    unit: Vec<Scalar>,
    /// Elements generating the algebra (words in them span it).
    gens: Vec<Vec<Scalar>>,
}

impl Algebra {
    /// Builds and validates an algebra. When `gens` is `None`, a generating
    /// set is chosen greedily from the basis.
    pub fn new(
        field: Field,
        labels: Vec<String>,
        mult: Vec<Vec<SparseVec>>,
        unit: Vec<Scalar>,
        gens: Option<Vec<Vec<Scalar>>>,
    ) -> Result<Algebra> {
        let d = labels.len();
        if mult.len() != d || mult.iter().any(|r| r.len() != d) || unit.len() != d {
            return Err(Error::InvalidAlgebra("structure constant table has the wrong shape".into()));
        }
        let mut a = Algebra { field, labels, mult, unit, gens: Vec::new() };
        a.check_unit()?;
        a.check_associative()?;
        a.gens = match gens {
            Some(g) => g,
            None => a.greedy_generators(),
        };
        Ok(a)
    }

    /// Builds an algebra from a dense table `c[i][j][k]`, locating the unit.
    pub fn from_dense(field: Field, labels: Vec<String>, c: &[Vec<Vec<Scalar>>]) -> Result<Algebra> {
        let d = labels.len();
        let mult: Vec<Vec<SparseVec>> = c.iter().map(|r| r.iter().map(|v| sparse_from_dense(v)).collect()).collect();
        if mult.len() != d || mult.iter().any(|r| r.len() != d) || c.iter().flatten().any(|v| v.len() != d) {
            return Err(Error::InvalidAlgebra("structure constant table has the wrong shape".into()));
        }
        // Σ_i u_i c[i][j][k] = δ_jk and Σ_i u_i c[j][i][k] = δ_jk.
        let mut sys = crate::linalg::LinearSystem::new(d, field);
        for j in 0..d {
            for k in 0..d {
                let rhs = if j == k { field.one() } else { field.zero() };
                let l: SparseVec = (0..d).filter(|&i| !c[i][j][k].is_zero()).map(|i| (i, c[i][j][k].clone())).collect();
                sys.push(l, rhs.clone());
                let r: SparseVec = (0..d).filter(|&i| !c[j][i][k].is_zero()).map(|i| (i, c[j][i][k].clone())).collect();
                sys.push(r, rhs);
            }
        }
        let Solution { particular, .. } = sys.solve();
        let unit = particular.ok_or_else(|| Error::InvalidAlgebra("no two-sided unit".into()))?;
        Algebra::new(field, labels, mult, unit, None)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn generators(&self) -> &[Vec<Scalar>] {
        &self.gens
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    pub fn zero_vec(&self) -> Vec<Scalar> {
        vec![self.field.zero(); self.dim()]
    }

    #[inline]
    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i][j]
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vec();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.mul(b);
                for (k, c) in &self.mult[i][j] {
                    out[*k].add_mul_assign(&ab, c);
                }
            }
        }
        out
    }

    pub fn mul_sparse(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = self.zero_vec();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a.mul(b);
                for (k, c) in &self.mult[*i][*j] {
                    out[*k].add_mul_assign(&ab, c);
                }
            }
        }
        sparse_from_dense(&out)
    }

    /// Left multiplication `y ↦ x y`.
    pub fn left_mul(&self, x: &[Scalar]) -> LinMap {
        let xs = sparse_from_dense(x);
        let cols = (0..self.dim()).map(|j| self.mul_sparse(&xs, &vec![(j, self.field.one())])).collect();
        LinMap { src: self.dim(), dst: self.dim(), field: self.field, cols }
    }

    /// Right multiplication `y ↦ y x`.
    pub fn right_mul(&self, x: &[Scalar]) -> LinMap {
        let xs = sparse_from_dense(x);
        let cols = (0..self.dim()).map(|j| self.mul_sparse(&vec![(j, self.field.one())], &xs)).collect();
        LinMap { src: self.dim(), dst: self.dim(), field: self.field, cols }
    }

    fn check_unit(&self) -> Result<()> {
        for i in 0..self.dim() {
            let e = self.basis_vec(i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::InvalidAlgebra(format!("unit fails on basis element {}", self.labels[i])));
            }
        }
        Ok(())
    }

    /// Checks `(e_i e_j) e_k = e_i (e_j e_k)` on every basis triple.
    pub fn check_associative(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let ij = &self.mult[i][j];
                for k in 0..d {
                    let mut lhs = self.zero_vec();
                    for (m, a) in ij {
                        for (t, b) in &self.mult[*m][k] {
                            lhs[*t].add_mul_assign(a, b);
                        }
                    }
                    let mut rhs = self.zero_vec();
                    for (m, a) in &self.mult[j][k] {
                        for (t, b) in &self.mult[i][*m] {
                            rhs[*t].add_mul_assign(a, b);
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::InvalidAlgebra(format!(
                            "not associative on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The subalgebra generated by `gens`, as a subspace.
    pub fn generated_subalgebra(&self, gens: &[Vec<Scalar>]) -> Subspace {
        let mut red = RowReducer::new(self.dim(), self.field);
        let mut queue = vec![self.unit.clone()];
        red.insert_dense(&self.unit);
        let maps: Vec<LinMap> = gens.iter().map(|g| self.right_mul(g)).collect();
        while let Some(v) = queue.pop() {
            for m in &maps {
                let w = m.apply(&v);
                if red.insert_dense(&w) {
                    queue.push(w);
                }
            }
        }
        Subspace::from_rref(red.finish())
    }

    fn greedy_generators(&self) -> Vec<Vec<Scalar>> {
        let mut gens: Vec<Vec<Scalar>> = Vec::new();
        let mut span = self.generated_subalgebra(&gens);
        for i in 0..self.dim() {
            if span.dim() == self.dim() {
                break;
            }
            let e = self.basis_vec(i);
            if !span.contains(&e) {
                gens.push(e);
                span = self.generated_subalgebra(&gens);
            }
        }
        gens
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.mult[i][j] == self.mult[j][i]))
    }

    /// Center, as the common kernel of `L_g - R_g` over the generators.
    pub fn center(&self) -> Subspace {
        let pairs: Vec<(LinMap, LinMap)> = self.gens.iter().map(|g| (self.left_mul(g), self.right_mul(g))).collect();
        crate::bimodule::centralizer(self.dim(), self.field, &pairs)
    }

    /// A two-sided inverse of `x`, if one exists.
    pub fn inverse(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        let l = self.left_mul(x).to_matrix();
        let y = l.solve(&self.unit).ok()?.particular?;
        (self.mul(&y, x) == self.unit).then_some(y)
    }

    /// Structure constants as nested dense vectors.
    pub fn dense_constants(&self) -> Vec<Vec<Vec<Scalar>>> {
        self.mult.iter().map(|r| r.iter().map(|v| dense_from_sparse(v, self.dim(), self.field)).collect()).collect()
    }

    /// Replaces the generating set (used when a structured one is known).
    pub fn with_generators(mut self, gens: Vec<Vec<Scalar>>) -> Algebra {
        self.gens = gens;
        self
    }

    /// The opposite algebra `x ∘ y = y x`.
    pub fn opposite(&self) -> Algebra {
        let d = self.dim();
        let mult = (0..d).map(|i| (0..d).map(|j| self.mult[j][i].clone()).collect()).collect();
        Algebra { field: self.field, labels: self.labels.clone(), mult, unit: self.unit.clone(), gens: self.gens.clone() }
    }

    /// The subalgebra spanned by `basis`, as a new algebra with an embedding.
    pub fn subalgebra(&self, basis: &[Vec<Scalar>], labels: Vec<String>) -> Result<(Algebra, AlgebraMap)> {
        let s = Subspace::span(self.dim(), self.field, basis.iter().cloned());
        if s.dim() != basis.len() {
            return Err(Error::InvalidAlgebra("subalgebra basis is linearly dependent".into()));
        }
        // Coordinates with respect to the given basis, via the RREF basis.
        let m = crate::linalg::Matrix::from_columns(basis, self.dim(), self.field);
        let coords = |v: &[Scalar]| -> Result<Vec<Scalar>> {
            m.solve(v)?.particular.ok_or_else(|| Error::InvalidAlgebra("span is not closed under products".into()))
        };
        let d = basis.len();
        let mut mult = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                mult[i][j] = sparse_from_dense(&coords(&self.mul(&basis[i], &basis[j]))?);
            }
        }
        let unit = coords(&self.unit)?;
        let sub = Algebra::new(self.field, labels, mult, unit, None)?;
        let map = AlgebraMap::new(&sub, self, basis.to_vec())?;
        Ok((sub, map))
    }
}

/// A unital algebra homomorphism, stored by basis images.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    pub src_dim: usize,
    pub dst_dim: usize,
    pub images: Vec<Vec<Scalar>>,
}

impl AlgebraMap {
    /// Validates multiplicativity on basis pairs, unitality and injectivity.
    pub fn new(src: &Algebra, dst: &Algebra, images: Vec<Vec<Scalar>>) -> Result<AlgebraMap> {
        if images.len() != src.dim() || images.iter().any(|v| v.len() != dst.dim()) {
            return Err(Error::DimensionMismatch { expected: src.dim(), got: images.len() });
        }
        let f = AlgebraMap { src_dim: src.dim(), dst_dim: dst.dim(), images };
        if f.apply(src.unit()) != dst.unit() {
            return Err(Error::InvalidAlgebra("embedding does not preserve the unit".into()));
        }
        for i in 0..src.dim() {
            for j in 0..src.dim() {
                let lhs = f.apply(&dense_from_sparse(src.mul_basis(i, j), src.dim(), src.field()));
                let rhs = dst.mul(&f.images[i], &f.images[j]);
                if lhs != rhs {
                    return Err(Error::InvalidAlgebra("embedding is not multiplicative".into()));
                }
            }
        }
        if f.as_linmap(src.field()).rank() != src.dim() {
            return Err(Error::InvalidAlgebra("embedding is not injective".into()));
        }
        Ok(f)
    }

    pub fn identity(a: &Algebra) -> AlgebraMap {
        AlgebraMap { src_dim: a.dim(), dst_dim: a.dim(), images: (0..a.dim()).map(|i| a.basis_vec(i)).collect() }
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        let field = x.first().map(Scalar::field).unwrap_or(Field::Rational);
        let mut out = vec![field.zero(); self.dst_dim];
        for (c, img) in x.iter().zip(&self.images) {
            crate::linalg::dense_axpy(&mut out, c, img);
        }
        out
    }

    pub fn as_linmap(&self, field: Field) -> LinMap {
        LinMap { src: self.src_dim, dst: self.dst_dim, field, cols: self.images.iter().map(|v| sparse_from_dense(v)).collect() }
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &AlgebraMap) -> AlgebraMap {
        AlgebraMap { src_dim: o.src_dim, dst_dim: self.dst_dim, images: o.images.iter().map(|v| self.apply(v)).collect() }
    }

    pub fn image(&self, field: Field) -> Subspace {
        Subspace::span(self.dst_dim, field, self.images.iter().cloned())
    }
}

/// A tower `C -> B -> A` of algebras with unital embeddings.
#[derive(Clone, Debug)]
pub struct Tower {
    pub a: Algebra,
    pub b: Algebra,
    pub c: Algebra,
    pub ba: AlgebraMap,
    pub cb: AlgebraMap,
}

impl Tower {
    pub fn new(a: Algebra, b: Algebra, c: Algebra, ba: AlgebraMap, cb: AlgebraMap) -> Result<Tower> {
        if a.field() != b.field() || b.field() != c.field() {
            return Err(Error::AlgebraMismatch("tower algebras over different fields".into()));
        }
        if ba.src_dim != b.dim() || ba.dst_dim != a.dim() || cb.src_dim != c.dim() || cb.dst_dim != b.dim() {
            return Err(Error::AlgebraMismatch("embedding dimensions do not match the tower".into()));
        }
        Ok(Tower { a, b, c, ba, cb })
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn ca(&self) -> AlgebraMap {
        self.ba.compose(&self.cb)
    }

    pub fn b_gens_in_a(&self) -> Vec<Vec<Scalar>> {
        self.b.generators().iter().map(|g| self.ba.apply(g)).collect()
    }

    pub fn c_gens_in_a(&self) -> Vec<Vec<Scalar>> {
        let ca = self.ca();
        self.c.generators().iter().map(|g| ca.apply(g)).collect()
    }

    pub fn c_gens_in_b(&self) -> Vec<Vec<Scalar>> {
        self.c.generators().iter().map(|g| self.cb.apply(g)).collect()
    }

    pub fn b_image(&self) -> Subspace {
        self.ba.image(self.field())
    }

    pub fn c_image(&self) -> Subspace {
        self.ca().image(self.field())
    }

    /// The tower `B -> B -> A` (taking `C = B`).
    pub fn with_c_equal_b(&self) -> Tower {
        Tower { a: self.a.clone(), b: self.b.clone(), c: self.b.clone(), ba: self.ba.clone(), cb: AlgebraMap::identity(&self.b) }
    }

    /// The tower `C -> C -> A`.
    pub fn with_b_equal_c(&self) -> Tower {
        Tower { a: self.a.clone(), b: self.c.clone(), c: self.c.clone(), ba: self.ca(), cb: AlgebraMap::identity(&self.c) }
    }

    /// The tower of opposite algebras.
    pub fn opposite(&self) -> Tower {
        Tower { a: self.a.opposite(), b: self.b.opposite(), c: self.c.opposite(), ba: self.ba.clone(), cb: self.cb.clone() }
    }
}
