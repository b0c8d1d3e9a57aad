//! Balanced tensor products `M ⊗_X N` as quotients of `M ⊗ N`, and iterated
//! tensor powers `A ⊗_X A ⊗_X .. ⊗_X A`.
//!
//! The relations `m x ⊗ n - m ⊗ x n` are imposed only for generators `x` of
//! `X`; the relation for a product of generators is a sum of generator
//! relations, so the quotient is the same.

use crate::algebra::Algebra;
use crate::bimodule::Bimodule;
use crate::field::{Field, Scalar};
use crate::linalg::{dense_from_sparse, sparse_axpy, LinMap, Quotient, RowReducer, SparseVec};

/// `M ⊗_X N` with ambient index `i * dim N + j` for `m_i ⊗ n_j`.
#[derive(Clone, Debug)]
pub struct BalancedTensor {
    pub dim_m: usize,
    pub dim_n: usize,
    pub field: Field,
    quotient: Quotient,
}

impl BalancedTensor {
    /// `pairs[k] = (ρ_k, λ_k)`: right action of the `k`-th generator of `X`
    /// on `M` and its left action on `N`.
    pub fn new(dim_m: usize, dim_n: usize, field: Field, pairs: &[(LinMap, LinMap)]) -> BalancedTensor {
        let mut red = RowReducer::new(dim_m * dim_n, field);
        for (rho, lam) in pairs {
            for i in 0..dim_m {
                for j in 0..dim_n {
                    let mut row: Vec<(usize, Scalar)> = Vec::new();
                    for (k, x) in &rho.cols[i] {
                        row.push((k * dim_n + j, x.clone()));
                    }
                    for (l, x) in &lam.cols[j] {
                        row.push((i * dim_n + l, x.neg()));
                    }
                    let row = crate::bimodule::merge(row);
                    if !row.is_empty() {
                        red.insert(row);
                    }
                }
            }
        }
        BalancedTensor { dim_m, dim_n, field, quotient: Quotient::from_rref(&red.finish()) }
    }

    /// `A ⊗_X A` where `x_gens` are elements of `A` generating `X`.
    pub fn over(a: &Algebra, x_gens: &[Vec<Scalar>]) -> BalancedTensor {
        let pairs: Vec<(LinMap, LinMap)> = x_gens.iter().map(|x| (a.right_mul(x), a.left_mul(x))).collect();
        BalancedTensor::new(a.dim(), a.dim(), a.field(), &pairs)
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    /// Class of `m_i ⊗ n_j` in quotient coordinates.
    #[inline]
    pub fn class(&self, i: usize, j: usize) -> &SparseVec {
        self.quotient.project_basis(i * self.dim_n + j)
    }

    /// The pair `(i, j)` whose class is the `q`-th quotient basis vector.
    #[inline]
    pub fn section(&self, q: usize) -> (usize, usize) {
        let s = self.quotient.section[q];
        (s / self.dim_n, s % self.dim_n)
    }

    /// `x ⊗ y` for sparse `x ∈ M`, `y ∈ N`.
    pub fn tensor_sparse(&self, x: &SparseVec, y: &SparseVec) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, a) in x {
            for (j, b) in y {
                let ab = a.mul(b);
                for (q, c) in self.class(*i, *j) {
                    out[*q].add_mul_assign(&ab, c);
                }
            }
        }
        out
    }

    pub fn tensor(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.tensor_sparse(&crate::linalg::sparse_from_dense(x), &crate::linalg::sparse_from_dense(y))
    }

    /// `f ⊗ g` into `target`, for `f` right `X`-linear and `g` left
    /// `X`-linear (so the map is well defined).
    pub fn map_pair(&self, f: &LinMap, g: &LinMap, target: &BalancedTensor) -> LinMap {
        let cols = (0..self.dim())
            .map(|q| {
                let (i, j) = self.section(q);
                crate::linalg::sparse_from_dense(&target.tensor_sparse(&f.cols[i], &g.cols[j]))
            })
            .collect();
        LinMap { src: self.dim(), dst: target.dim(), field: self.field, cols }
    }

    /// Sweedler terms `Σ c · m_i ⊗ n_j` of a quotient vector, via the section.
    pub fn terms(&self, v: &[Scalar]) -> Vec<(usize, usize, Scalar)> {
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(q, c)| {
                let (i, j) = self.section(q);
                (i, j, c.clone())
            })
            .collect()
    }

    /// The `A`–`A` bimodule `A ⊗_X A` restricted to the subalgebras
    /// generated by `left` and `right` (elements of `A`).
    pub fn bimodule(&self, a: &Algebra, left: &[Vec<Scalar>], right: &[Vec<Scalar>]) -> Bimodule {
        let id = LinMap::identity(a.dim(), a.field());
        Bimodule {
            dim: self.dim(),
            field: self.field,
            left: left.iter().map(|x| self.map_pair(&a.left_mul(x), &id, self)).collect(),
            right: right.iter().map(|x| self.map_pair(&id, &a.right_mul(x), self)).collect(),
        }
    }

    /// The multiplication `x ⊗ y ↦ xy` of `A ⊗_X A`.
    pub fn multiplication(&self, a: &Algebra) -> LinMap {
        let cols = (0..self.dim())
            .map(|q| {
                let (i, j) = self.section(q);
                a.mul_basis(i, j).clone()
            })
            .collect();
        LinMap { src: self.dim(), dst: a.dim(), field: self.field, cols }
    }
}

/// The tensor powers `T_n = A ⊗_X .. ⊗_X A` (`n` factors) up to a given
/// `n`, built as `T_n = T_{n-1} ⊗_X A`.
#[derive(Clone, Debug)]
pub struct TensorPower {
    pub a: Algebra,
    x_gens: Vec<Vec<Scalar>>,
    /// `levels[k]` realizes `T_{k+2}`.
    levels: Vec<BalancedTensor>,
}

impl TensorPower {
    pub fn new(a: &Algebra, x_gens: &[Vec<Scalar>], max_n: usize) -> TensorPower {
        let mut tp = TensorPower { a: a.clone(), x_gens: x_gens.to_vec(), levels: Vec::new() };
        if max_n >= 2 {
            tp.levels.push(BalancedTensor::over(a, x_gens));
        }
        for _ in 3..=max_n {
            tp.extend();
        }
        tp
    }

    /// Adds `T_{n+1}`.
    pub fn extend(&mut self) {
        let n = self.max_n();
        let pairs: Vec<(LinMap, LinMap)> =
            self.x_gens.iter().map(|x| (self.right_action(n, &self.a.right_mul(x)), self.a.left_mul(x))).collect();
        let dim_prev = self.dim(n);
        self.levels.push(BalancedTensor::new(dim_prev, self.a.dim(), self.a.field(), &pairs));
    }

    pub fn max_n(&self) -> usize {
        self.levels.len() + 1
    }

    pub fn dim(&self, n: usize) -> usize {
        if n == 1 {
            self.a.dim()
        } else {
            self.levels[n - 2].dim()
        }
    }

    pub fn level(&self, n: usize) -> &BalancedTensor {
        &self.levels[n - 2]
    }

    /// `f` applied to the last factor of `T_n` (`f` left `X`-linear).
    pub fn right_action(&self, n: usize, f: &LinMap) -> LinMap {
        if n == 1 {
            return f.clone();
        }
        let lv = self.level(n);
        let id = LinMap::identity(lv.dim_m, self.a.field());
        lv.map_pair(&id, f, lv)
    }

    /// `f` applied to the first factor of `T_n` (`f` right `X`-linear).
    pub fn left_action(&self, n: usize, f: &LinMap) -> LinMap {
        if n == 1 {
            return f.clone();
        }
        let inner = self.left_action(n - 1, f);
        let lv = self.level(n);
        lv.map_pair(&inner, &LinMap::identity(self.a.dim(), self.a.field()), lv)
    }

    /// Class of the pure tensor of basis elements `e_{t_1} ⊗ .. ⊗ e_{t_n}`.
    pub fn basis_class(&self, tuple: &[usize]) -> SparseVec {
        let mut v: SparseVec = vec![(tuple[0], self.a.field().one())];
        for (k, &t) in tuple.iter().enumerate().skip(1) {
            let lv = self.level(k + 1);
            let mut acc: SparseVec = Vec::new();
            for (q, c) in &v {
                acc = sparse_axpy(&acc, c, lv.class(*q, t));
            }
            v = acc;
        }
        v
    }

    /// Class of `x_1 ⊗ .. ⊗ x_n` for dense factors.
    pub fn pure(&self, xs: &[Vec<Scalar>]) -> Vec<Scalar> {
        let mut v = crate::linalg::sparse_from_dense(&xs[0]);
        for (k, x) in xs.iter().enumerate().skip(1) {
            let lv = self.level(k + 1);
            v = crate::linalg::sparse_from_dense(&lv.tensor_sparse(&v, &crate::linalg::sparse_from_dense(x)));
        }
        dense_from_sparse(&v, self.dim(xs.len()), self.a.field())
    }

    /// Expands an element of `T_n` into basis tuples with coefficients.
    pub fn expand(&self, n: usize, v: &[Scalar]) -> Vec<(Vec<usize>, Scalar)> {
        if n == 1 {
            return v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (vec![i], c.clone())).collect();
        }
        let lv = self.level(n);
        let mut out = Vec::new();
        for (q, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, j) = lv.section(q);
            // Section coordinates of T_n are single basis vectors of T_{n-1}.
            let mut prev = vec![self.a.field().zero(); self.dim(n - 1)];
            prev[i] = self.a.field().one();
            for (mut t, d) in self.expand(n - 1, &prev) {
                t.push(j);
                out.push((t, d.mul(c)));
            }
        }
        out
    }

    /// `x ⊗ y ∈ T_{k+l}` for `x ∈ T_k`, `y ∈ T_l`.
    pub fn concat(&self, k: usize, x: &[Scalar], l: usize, y: &[Scalar]) -> Vec<Scalar> {
        let xs = self.expand(k, x);
        let ys = self.expand(l, y);
        let mut out = vec![self.a.field().zero(); self.dim(k + l)];
        for (tx, cx) in &xs {
            for (ty, cy) in &ys {
                let mut t = tx.clone();
                t.extend(ty);
                let c = cx.mul(cy);
                for (q, d) in self.basis_class(&t) {
                    out[q].add_mul_assign(&c, &d);
                }
            }
        }
        out
    }

    /// Left multiplication by `a` on the first factor of `T_n`.
    pub fn left_mul(&self, n: usize, a: &[Scalar]) -> LinMap {
        self.left_action(n, &self.a.left_mul(a))
    }

    /// Right multiplication by `a` on the last factor of `T_n`.
    pub fn right_mul(&self, n: usize, a: &[Scalar]) -> LinMap {
        self.right_action(n, &self.a.right_mul(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{group_algebra, matrix_algebra, subgroup_algebra};
    use crate::groups::{FiniteGroup, Perm};

    const Q: Field = Field::Rational;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(&[Perm::parse("(1 2)").unwrap(), Perm::parse("(1 2 3)").unwrap()], 200).unwrap()
    }

    #[test]
    fn tensor_square_dimensions() {
        let g = s3();
        let a = group_algebra(&g, Q);
        let all = a.generators().to_vec();
        assert_eq!(BalancedTensor::over(&a, &all).dim(), 6);
        assert_eq!(BalancedTensor::over(&a, &[]).dim(), 36);
        let a3 = g.subgroup_from_perms(&[Perm::parse("(1 2 3)").unwrap()]).unwrap();
        let b = subgroup_algebra(&g, &a3, Q);
        let gens: Vec<Vec<Scalar>> = b
            .generators()
            .iter()
            .map(|v| {
                let mut w = vec![Q.zero(); 6];
                for (i, x) in v.iter().enumerate() {
                    w[a3[i]] = x.clone();
                }
                w
            })
            .collect();
        let t = BalancedTensor::over(&a, &gens);
        assert_eq!(t.dim(), 12);
        // μ(section(x ⊗ y)) = xy.
        let mu = t.multiplication(&a);
        for i in 0..6 {
            for j in 0..6 {
                let xy = a.mul(&a.basis_vec(i), &a.basis_vec(j));
                assert_eq!(mu.apply(&t.tensor(&a.basis_vec(i), &a.basis_vec(j))), xy);
            }
        }
    }

    #[test]
    fn tensor_powers_of_matrix_algebra() {
        let a = matrix_algebra(2, Q);
        let tp = TensorPower::new(&a, &[], 3);
        assert_eq!(tp.dim(3), 64);
        let x: Vec<Vec<Scalar>> = (0..3).map(|i| a.basis_vec(i)).collect();
        let p = tp.pure(&x);
        let ex = tp.expand(3, &p);
        assert_eq!(ex, vec![(vec![0, 1, 2], Q.one())]);
        let two = tp.pure(&x[..2]);
        assert_eq!(tp.concat(2, &two, 1, &x[2]), p);
        let gens = a.generators().to_vec();
        let tpa = TensorPower::new(&a, &gens, 3);
        assert_eq!(tpa.dim(3), 4);
    }
}
