//! Bimodules given by the actions of algebra generators, and the linear
//! systems for bimodule maps and centralizers.

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{LinMap, LinearSystem, RowReducer, SparseVec, Subspace};

/// A finite-dimensional `L`–`R` bimodule. `left[i]` is the action of the
/// `i`-th generator of `L`, `right[j]` the action `m ↦ m·r_j` of the `j`-th
/// generator of `R`. Two bimodules are over the same pair of algebras when
/// their generator lists correspond.
#[derive(Clone, Debug)]
pub struct Bimodule {
    pub dim: usize,
    pub field: Field,
    pub left: Vec<LinMap>,
    pub right: Vec<LinMap>,
}

impl Bimodule {
    pub fn new(dim: usize, field: Field, left: Vec<LinMap>, right: Vec<LinMap>) -> Result<Bimodule> {
        for m in left.iter().chain(&right) {
            if m.src != dim || m.dst != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: m.src });
            }
        }
        for l in &left {
            for r in &right {
                if l.compose(r) != r.compose(l) {
                    return Err(Error::InvalidAlgebra("left and right actions do not commute".into()));
                }
            }
        }
        Ok(Bimodule { dim, field, left, right })
    }

    /// `A` as a bimodule over the subalgebras generated by `left` and
    /// `right` (elements of `A`), acting by multiplication.
    pub fn regular(a: &Algebra, left: &[Vec<Scalar>], right: &[Vec<Scalar>]) -> Bimodule {
        Bimodule {
            dim: a.dim(),
            field: a.field(),
            left: left.iter().map(|x| a.left_mul(x)).collect(),
            right: right.iter().map(|x| a.right_mul(x)).collect(),
        }
    }

    /// Direct sum of `k` copies.
    pub fn power(&self, k: usize) -> Bimodule {
        let stack = |m: &LinMap| {
            let mut cols = Vec::with_capacity(m.src * k);
            for c in 0..k {
                for col in &m.cols {
                    cols.push(col.iter().map(|(i, x)| (c * m.dst + i, x.clone())).collect());
                }
            }
            LinMap { src: m.src * k, dst: m.dst * k, field: m.field, cols }
        };
        Bimodule {
            dim: self.dim * k,
            field: self.field,
            left: self.left.iter().map(stack).collect(),
            right: self.right.iter().map(stack).collect(),
        }
    }

    pub fn same_algebras(&self, o: &Bimodule) -> Result<()> {
        if self.left.len() != o.left.len() || self.right.len() != o.right.len() || self.field != o.field {
            return Err(Error::AlgebraMismatch(format!(
                "bimodules act through ({}, {}) and ({}, {}) generators",
                self.left.len(),
                self.right.len(),
                o.left.len(),
                o.right.len()
            )));
        }
        Ok(())
    }

    fn actions(&self) -> impl Iterator<Item = &LinMap> {
        self.left.iter().chain(&self.right)
    }

    /// True when `f: self -> n` commutes with every generator action.
    pub fn is_map_to(&self, f: &LinMap, n: &Bimodule) -> bool {
        f.src == self.dim && f.dst == n.dim && self.actions().zip(n.actions()).all(|(xm, xn)| f.compose(xm) == xn.compose(f))
    }

    /// The sub-bimodule generated by `vecs`.
    pub fn generated(&self, vecs: &[SparseVec]) -> Subspace {
        let mut red = RowReducer::new(self.dim, self.field);
        self.close(&mut red, vecs.to_vec());
        Subspace::from_rref(red.finish())
    }

    fn close(&self, red: &mut RowReducer, seeds: Vec<SparseVec>) {
        let mut queue = Vec::new();
        for v in seeds {
            if red.insert(v.clone()) {
                queue.push(v);
            }
        }
        while let Some(v) = queue.pop() {
            for m in self.actions() {
                let w = m.apply_sparse(&v);
                if red.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
    }

    /// A bimodule generating set, chosen greedily among basis vectors.
    pub fn generating_set(&self) -> Vec<SparseVec> {
        let mut red = RowReducer::new(self.dim, self.field);
        let mut gens = Vec::new();
        for i in 0..self.dim {
            if red.rank() == self.dim {
                break;
            }
            let e = vec![(i, self.field.one())];
            if red.contains(e.clone()) {
                continue;
            }
            gens.push(e.clone());
            self.close(&mut red, vec![e]);
        }
        gens
    }

    /// Coordinate blocks: connected components of the support graph of the
    /// generator actions. Each block spans a sub-bimodule and the module is
    /// their direct sum.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.dim).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for m in self.actions() {
            for (j, col) in m.cols.iter().enumerate() {
                for (i, _) in col {
                    let (a, b) = (find(&mut parent, *i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for x in 0..self.dim {
            let r = find(&mut parent, x);
            groups.entry(r).or_default().push(x);
        }
        groups.into_values().collect()
    }

    /// The sub-bimodule on a coordinate block.
    pub fn restrict(&self, block: &[usize]) -> Bimodule {
        Bimodule {
            dim: block.len(),
            field: self.field,
            left: self.left.iter().map(|m| m.block(block, block)).collect(),
            right: self.right.iter().map(|m| m.block(block, block)).collect(),
        }
    }
}

/// All bimodule maps `m -> n`, as a basis of matrices.
pub fn hom_space(m: &Bimodule, n: &Bimodule) -> Result<Vec<LinMap>> {
    m.same_algebras(n)?;
    let (dm, dn) = (m.dim, n.dim);
    let nvars = dm * dn;
    // Unknown φ[r][c] sits at c * dn + r (column-major).
    let var = |c: usize, r: usize| c * dn + r;
    let mut sys = LinearSystem::new(nvars, m.field);
    for (xm, xn) in m.actions().zip(n.actions()) {
        let xn_rows = xn.rows();
        for c in 0..dm {
            for r in 0..dn {
                // (φ xm)[r][c] - (xn φ)[r][c]
                let mut row: Vec<(usize, Scalar)> = Vec::new();
                for (k, a) in &xm.cols[c] {
                    row.push((var(*k, r), a.clone()));
                }
                for (k, a) in &xn_rows[r] {
                    row.push((var(c, *k), a.neg()));
                }
                sys.push_homogeneous(merge(row));
            }
        }
    }
    Ok(sys.kernel_sparse().iter().map(|v| LinMap::from_flat(dm, dn, v, m.field)).collect())
}

/// Sorts a sparse row and merges repeated indices.
pub fn merge(mut row: Vec<(usize, Scalar)>) -> SparseVec {
    row.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(row.len());
    for (i, x) in row {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y = y.add(&x),
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

/// `{m : λ(x) m = ρ(x) m}` over the given pairs of actions.
pub fn centralizer(dim: usize, field: Field, pairs: &[(LinMap, LinMap)]) -> Subspace {
    let mut sys = LinearSystem::new(dim, field);
    for (l, r) in pairs {
        let diff = l.axpy(&field.from_i64(-1), r);
        for row in diff.rows() {
            sys.push_homogeneous(row);
        }
    }
    Subspace::span_sparse(dim, field, sys.kernel_sparse())
}

/// Centralizer of a bimodule over `(X, X)`: left and right generators are
/// paired index by index.
pub fn bimodule_centralizer(m: &Bimodule) -> Result<Subspace> {
    if m.left.len() != m.right.len() {
        return Err(Error::AlgebraMismatch("centralizer needs the same algebra on both sides".into()));
    }
    let pairs: Vec<(LinMap, LinMap)> = m.left.iter().cloned().zip(m.right.iter().cloned()).collect();
    Ok(centralizer(m.dim, m.field, &pairs))
}

/// A space of linear maps `src -> dst` with its canonical RREF basis, so
/// that elements have well-defined coordinates.
#[derive(Clone, Debug)]
pub struct MapSpace {
    pub src: usize,
    pub dst: usize,
    space: Subspace,
    basis: Vec<LinMap>,
}

impl MapSpace {
    pub fn new(src: usize, dst: usize, field: Field, maps: &[LinMap]) -> MapSpace {
        let space = Subspace::span_sparse(src * dst, field, maps.iter().map(LinMap::flatten));
        let basis = space.basis().iter().map(|v| LinMap::from_flat(src, dst, &crate::linalg::sparse_from_dense(v), field)).collect();
        MapSpace { src, dst, space, basis }
    }

    pub fn field(&self) -> Field {
        self.space.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LinMap] {
        &self.basis
    }

    pub fn subspace(&self) -> &Subspace {
        &self.space
    }

    pub fn coordinates(&self, f: &LinMap) -> Option<Vec<Scalar>> {
        if f.src != self.src || f.dst != self.dst {
            return None;
        }
        let v = crate::linalg::dense_from_sparse(&f.flatten(), self.src * self.dst, self.field());
        self.space.coordinates(&v).ok().flatten()
    }

    pub fn contains(&self, f: &LinMap) -> bool {
        self.coordinates(f).is_some()
    }

    pub fn combine(&self, coeffs: &[Scalar]) -> LinMap {
        let mut out = LinMap::zero(self.src, self.dst, self.field());
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.axpy(c, b);
            }
        }
        out
    }

    /// Matrix of a linear operator `T` on this space, column `k` holding the
    /// coordinates of `T(basis_k)`. Fails if `T` leaves the space.
    pub fn operator(&self, t: impl Fn(&LinMap) -> LinMap) -> Option<LinMap> {
        let cols =
            self.basis.iter().map(|b| self.coordinates(&t(b)).map(|c| crate::linalg::sparse_from_dense(&c))).collect::<Option<Vec<_>>>()?;
        Some(LinMap { src: self.dim(), dst: self.dim(), field: self.field(), cols })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::matrix_algebra;

    #[test]
    fn endomorphisms_of_matrix_algebra_bimodule_are_scalars() {
        let a = matrix_algebra(2, Field::Rational);
        let g = a.generators().to_vec();
        let m = Bimodule::regular(&a, &g, &g);
        let h = hom_space(&m, &m).unwrap();
        assert_eq!(h.len(), 1);
        assert!(h.iter().all(|f| m.is_map_to(f, &m)));
        assert!(m.generated(&[vec![(0, Field::Rational.one())]]).dim() == 4);
    }
}
