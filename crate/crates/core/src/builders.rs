//! Standard algebras: group algebras and their towers, matrix algebras,
//! quaternion algebras, finite fields, groupoid algebras and tensor
//! products, plus the Frobenius system of a group-algebra extension.

use crate::algebra::{Algebra, AlgebraMap, Tower};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::groups::{FiniteGroup, SubgroupChain};
use crate::linalg::{sparse_from_dense, LinMap, SparseVec};

/// The group algebra `F[G]` on the basis of group elements.
pub fn group_algebra(g: &FiniteGroup, field: Field) -> Algebra {
    let all: Vec<usize> = (0..g.order()).collect();
    subgroup_algebra(g, &all, field)
}

/// `F[S]` for a subgroup `S` (sorted element list), with basis in the
/// order of `s`. Generators are a small generating set of `S`.
pub fn subgroup_algebra(g: &FiniteGroup, s: &[usize], field: Field) -> Algebra {
    let pos: std::collections::HashMap<usize, usize> = s.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let one = field.one();
    let mult: Vec<Vec<SparseVec>> = s.iter().map(|&a| s.iter().map(|&b| vec![(pos[&g.mul(a, b)], one.clone())]).collect()).collect();
    let labels = s.iter().map(|&x| g.label(x).to_string()).collect();
    let mut unit = vec![field.zero(); s.len()];
    unit[pos[&0]] = field.one();
    let gens = subgroup_generators(g, s)
        .into_iter()
        .map(|x| {
            let mut v = vec![field.zero(); s.len()];
            v[pos[&x]] = field.one();
            v
        })
        .collect();
    Algebra::new(field, labels, mult, unit, Some(gens)).expect("group algebra axioms hold")
}

/// A small generating set of a subgroup, chosen greedily by element order.
pub fn subgroup_generators(g: &FiniteGroup, s: &[usize]) -> Vec<usize> {
    let mut cands: Vec<usize> = s.iter().copied().filter(|&x| x != 0).collect();
    cands.sort_by_key(|&a| (std::cmp::Reverse(g.element_order(a)), a));
    let mut gens = Vec::new();
    let mut span = vec![0];
    for a in cands {
        if span.len() == s.len() {
            break;
        }
        if span.binary_search(&a).is_err() {
            gens.push(a);
            span = g.generate(&gens);
        }
    }
    gens
}

fn inclusion(small: &[usize], big: &[usize], a_small: &Algebra, a_big: &Algebra) -> AlgebraMap {
    let pos: std::collections::HashMap<usize, usize> = big.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let field = a_big.field();
    let images = small
        .iter()
        .map(|x| {
            let mut v = vec![field.zero(); big.len()];
            v[pos[x]] = field.one();
            v
        })
        .collect();
    AlgebraMap::new(a_small, a_big, images).expect("subgroup inclusion is an algebra map")
}

/// `F[G] ⊇ F[H] ⊇ F[K]` with the inclusions of group elements.
pub fn tower_from_chain(chain: &SubgroupChain, field: Field) -> Tower {
    let g = chain.g;
    let all: Vec<usize> = (0..g.order()).collect();
    let a = group_algebra(g, field);
    let b = subgroup_algebra(g, &chain.h, field);
    let c = subgroup_algebra(g, &chain.k, field);
    let ba = inclusion(&chain.h, &all, &b, &a);
    let cb = inclusion(&chain.k, &chain.h, &c, &b);
    Tower::new(a, b, c, ba, cb).expect("group algebra tower is valid")
}

/// `M_n(F)` with basis `e_ij` at index `i * n + j`.
pub fn matrix_algebra(n: usize, field: Field) -> Algebra {
    let idx = |i: usize, j: usize| i * n + j;
    let mut mult = vec![vec![Vec::new(); n * n]; n * n];
    let mut labels = Vec::new();
    for i in 0..n {
        for j in 0..n {
            labels.push(format!("e{}{}", i + 1, j + 1));
            for l in 0..n {
                mult[idx(i, j)][idx(j, l)] = vec![(idx(i, l), field.one())];
            }
        }
    }
    let mut unit = vec![field.zero(); n * n];
    for i in 0..n {
        unit[idx(i, i)] = field.one();
    }
    Algebra::new(field, labels, mult, unit, None).expect("matrix algebra axioms hold")
}

/// The quaternion algebra `(a, b)_F` with basis `1, i, j, k`, `i² = a`,
/// `j² = b`, `ij = -ji = k`.
pub fn quaternion_algebra(field: Field, a: i64, b: i64) -> Result<Algebra> {
    if a == 0 || b == 0 || field.from_i64(a).is_zero() || field.from_i64(b).is_zero() {
        return Err(Error::InvalidAlgebra("quaternion parameters must be nonzero".into()));
    }
    let f = |x: i64| field.from_i64(x);
    let t = |k: usize, x: i64| -> SparseVec { vec![(k, f(x))] };
    // Rows: 1, i, j, k.
    let mult = vec![
        vec![t(0, 1), t(1, 1), t(2, 1), t(3, 1)],
        vec![t(1, 1), t(0, a), t(3, 1), t(2, a)],
        vec![t(2, 1), t(3, -1), t(0, b), t(1, -b)],
        vec![t(3, 1), t(2, -a), t(1, b), t(0, -a * b)],
    ];
    let labels = ["1", "i", "j", "k"].iter().map(|s| s.to_string()).collect();
    let mut unit = vec![field.zero(); 4];
    unit[0] = field.one();
    Algebra::new(field, labels, mult, unit, None)
}

/// Polynomials over `F_p` as coefficient vectors, constant term first.
pub type Poly = Vec<u64>;

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = Field::Prime(p).from_i64(m[dm] as i64).inv();
    let Scalar::Fp { r: li, .. } = lead_inv else { unreachable!() };
    while r.len() > dm {
        let top = r.pop().unwrap();
        if top == 0 {
            continue;
        }
        let q = top * li % p;
        let shift = r.len() - dm;
        for (k, &c) in m[..dm].iter().enumerate() {
            r[shift + k] = (r[shift + k] + p - q * c % p) % p;
        }
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Monic polynomial of degree `deg` numbered by `k` (base-`p` digits give
/// the lower coefficients).
fn monic(p: u64, deg: usize, mut k: u64) -> Poly {
    let mut c = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        c.push(k % p);
        k /= p;
    }
    c.push(1);
    c
}

pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        for k in 0..p.pow(d as u32) {
            if poly_rem(f, &monic(p, d, k), p).is_empty() {
                return false;
            }
        }
    }
    n >= 1
}

/// The least monic irreducible polynomial of degree `n` over `F_p`,
/// ordering by coefficients from the top down.
pub fn least_irreducible(p: u64, n: usize) -> Poly {
    // Counting k upwards runs through coefficients from the top down
    // since the most significant base-p digit is the x^{n-1} coefficient.
    (0..p.pow(n as u32)).map(|k| monic(p, n, k)).find(|f| is_irreducible(f, p)).expect("irreducible polynomials exist in every degree")
}

/// `F_{p^n} = F_p[x]/(f)` over `F_p`, basis `1, x, .., x^{n-1}`.
pub fn finite_field_algebra(p: u64, n: usize) -> Result<(Algebra, Poly)> {
    let field = Field::prime(p)?;
    if n == 0 {
        return Err(Error::Precondition("extension degree must be positive".into()));
    }
    let f = least_irreducible(p, n);
    let mut mult = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut mono = vec![0u64; i + j + 1];
            mono[i + j] = 1;
            let r = poly_rem(&mono, &f, p);
            mult[i][j] = r.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, field.from_i64(c as i64))).collect();
        }
    }
    let labels = (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("x^{i}") }).collect();
    let mut unit = vec![field.zero(); n];
    unit[0] = field.one();
    let gens = if n > 1 {
        let mut x = vec![field.zero(); n];
        x[1] = field.one();
        vec![x]
    } else {
        Vec::new()
    };
    Ok((Algebra::new(field, labels, mult, unit, Some(gens))?, f))
}

/// A connected component of a groupoid: `objects` objects, all with
/// vertex group `group`.
#[derive(Clone, Debug)]
pub struct GroupoidComponent {
    pub objects: usize,
    pub group: FiniteGroup,
}

/// An arrow `s -> t` labelled by a vertex-group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub component: usize,
    pub target: usize,
    pub source: usize,
    pub element: usize,
}

/// The groupoid algebra: arrows as basis, `g h` the composite when
/// `s(g) = t(h)` and zero otherwise. Returns the arrows in basis order.
pub fn groupoid_algebra(components: &[GroupoidComponent], field: Field) -> Result<(Algebra, Vec<Arrow>)> {
    let mut arrows = Vec::new();
    for (c, comp) in components.iter().enumerate() {
        for t in 0..comp.objects {
            for s in 0..comp.objects {
                for e in 0..comp.group.order() {
                    arrows.push(Arrow { component: c, target: t, source: s, element: e });
                }
            }
        }
    }
    let index = |a: &Arrow| arrows.iter().position(|x| x == a).unwrap();
    let d = arrows.len();
    let mut mult = vec![vec![Vec::new(); d]; d];
    for (i, g) in arrows.iter().enumerate() {
        for (j, h) in arrows.iter().enumerate() {
            if g.component == h.component && g.source == h.target {
                let grp = &components[g.component].group;
                let prod = Arrow { component: g.component, target: g.target, source: h.source, element: grp.mul(g.element, h.element) };
                mult[i][j] = vec![(index(&prod), field.one())];
            }
        }
    }
    let mut unit = vec![field.zero(); d];
    for (i, a) in arrows.iter().enumerate() {
        if a.source == a.target && a.element == 0 {
            unit[i] = field.one();
        }
    }
    let labels = arrows
        .iter()
        .map(|a| {
            let grp = &components[a.component].group;
            if grp.order() == 1 {
                format!("e{}{}", a.target + 1, a.source + 1)
            } else {
                format!("c{}:{}<-{}:{}", a.component, a.target + 1, a.source + 1, grp.label(a.element))
            }
        })
        .collect();
    Ok((Algebra::new(field, labels, mult, unit, None)?, arrows))
}

/// `A ⊗ B` over the common field, basis `(i, j)` at `i * dim B + j`.
pub fn tensor_algebra(a: &Algebra, b: &Algebra) -> Result<Algebra> {
    if a.field() != b.field() {
        return Err(Error::AlgebraMismatch("tensor factors over different fields".into()));
    }
    let (da, db) = (a.dim(), b.dim());
    let mut mult = vec![vec![Vec::new(); da * db]; da * db];
    for i in 0..da {
        for j in 0..db {
            for k in 0..da {
                for l in 0..db {
                    let mut row = Vec::new();
                    for (x, s) in a.mul_basis(i, k) {
                        for (y, t) in b.mul_basis(j, l) {
                            row.push((x * db + y, s.mul(t)));
                        }
                    }
                    mult[i * db + j][k * db + l] = crate::bimodule::merge(row);
                }
            }
        }
    }
    let labels = a.labels().iter().flat_map(|x| b.labels().iter().map(move |y| format!("{x}*{y}"))).collect();
    let unit = a.unit().iter().flat_map(|x| b.unit().iter().map(move |y| x.mul(y))).collect();
    Algebra::new(a.field(), labels, mult, unit, None)
}

/// A Frobenius system `(E, x_i, y_i)` for `B | C`: `E: B -> C` is a
/// `C`–`C` bimodule map with `Σ E(a x_i) y_i = a = Σ x_i E(y_i a)`.
#[derive(Clone, Debug)]
pub struct FrobeniusSystem {
    pub e: LinMap,
    pub x: Vec<Vec<Scalar>>,
    pub y: Vec<Vec<Scalar>>,
}

impl FrobeniusSystem {
    /// Checks the bimodule property on generators and the dual-basis
    /// identities on every basis element of `B`.
    pub fn verify(&self, b: &Algebra, c: &Algebra, cb: &AlgebraMap) -> bool {
        let field = b.field();
        for g in c.generators() {
            let gb = cb.apply(g);
            let left = self.e.compose(&b.left_mul(&gb));
            let right = self.e.compose(&b.right_mul(&gb));
            if left != c.left_mul(g).compose(&self.e) || right != c.right_mul(g).compose(&self.e) {
                return false;
            }
        }
        let e_in_b = |v: &[Scalar]| cb.apply(&self.e.apply(v));
        (0..b.dim()).all(|i| {
            let a = b.basis_vec(i);
            let mut l = vec![field.zero(); b.dim()];
            let mut r = vec![field.zero(); b.dim()];
            for (x, y) in self.x.iter().zip(&self.y) {
                let t = b.mul(&e_in_b(&b.mul(&a, x)), y);
                let u = b.mul(x, &e_in_b(&b.mul(y, &a)));
                crate::linalg::dense_axpy(&mut l, &field.one(), &t);
                crate::linalg::dense_axpy(&mut r, &field.one(), &u);
            }
            l == a && r == a
        })
    }
}

/// The Frobenius system of `F[H] ⊇ F[K]` for the tower's `B | C`: `E`
/// keeps the `K`-coefficients, `x_i` are the left coset representatives of
/// `K` in `H` and `y_i = x_i^{-1}`.
pub fn frobenius_system_group(chain: &SubgroupChain, tower: &Tower) -> FrobeniusSystem {
    let g = chain.g;
    let field = tower.field();
    let kpos: std::collections::HashMap<usize, usize> = chain.k.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let hpos: std::collections::HashMap<usize, usize> = chain.h.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let cols = chain.h.iter().map(|h| kpos.get(h).map(|&i| vec![(i, field.one())]).unwrap_or_default()).collect();
    let e = LinMap { src: chain.h.len(), dst: chain.k.len(), field, cols };
    let basis = |x: usize| {
        let mut v = vec![field.zero(); chain.h.len()];
        v[hpos[&x]] = field.one();
        v
    };
    let reps = g.left_coset_reps(&chain.h, &chain.k);
    FrobeniusSystem { e, x: reps.iter().map(|&r| basis(r)).collect(), y: reps.iter().map(|&r| basis(g.inv(r))).collect() }
}

/// Dense vector from a sparse one, for builders working on algebra elements.
pub fn vec_of(a: &Algebra, v: &SparseVec) -> Vec<Scalar> {
    crate::linalg::dense_from_sparse(v, a.dim(), a.field())
}

/// Sparse vector for an algebra element.
pub fn sparse_of(v: &[Scalar]) -> SparseVec {
    sparse_from_dense(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Perm;

    const Q: Field = Field::Rational;

    fn g(gens: &[&str]) -> FiniteGroup {
        FiniteGroup::from_permutations(&gens.iter().map(|s| Perm::parse(s).unwrap()).collect::<Vec<_>>(), 200).unwrap()
    }

    #[test]
    fn group_algebra_examples() {
        assert_eq!(group_algebra(&g(&[]), Q).dim(), 1);
        let c2 = group_algebra(&g(&["(1 2)"]), Q);
        assert_eq!(c2.mul(&c2.basis_vec(1), &c2.basis_vec(1)), c2.basis_vec(0));
        let s3 = group_algebra(&g(&["(1 2)", "(1 2 3)"]), Q);
        assert_eq!(s3.dim(), 6);
        assert!(s3.check_associative().is_ok());
        assert_eq!(s3.unit(), &s3.basis_vec(0)[..]);
    }

    #[test]
    fn tower_dims() {
        let s4 = g(&["(1 2)", "(1 2 3 4)"]);
        let a4 = s4.subgroup_from_perms(&[Perm::parse("(1 2 3)").unwrap(), Perm::parse("(2 3 4)").unwrap()]).unwrap();
        let v4 = s4.subgroup_from_perms(&[Perm::parse("(1 2)(3 4)").unwrap(), Perm::parse("(1 3)(2 4)").unwrap()]).unwrap();
        let t = tower_from_chain(&SubgroupChain::new(&s4, a4, v4).unwrap(), Q);
        assert_eq!((t.a.dim(), t.b.dim(), t.c.dim()), (24, 12, 4));
        let all: Vec<usize> = (0..24).collect();
        let t = tower_from_chain(&SubgroupChain::new(&s4, all.clone(), all).unwrap(), Q);
        assert_eq!((t.a.dim(), t.b.dim(), t.c.dim()), (24, 24, 24));
    }

    #[test]
    fn quaternion_relations() {
        let h = quaternion_algebra(Q, -1, -1).unwrap();
        let (i, j, k) = (h.basis_vec(1), h.basis_vec(2), h.basis_vec(3));
        let minus_one: Vec<Scalar> = h.unit().iter().map(|x| x.neg()).collect();
        assert_eq!(h.mul(&i, &i), minus_one);
        assert_eq!(h.mul(&j, &j), minus_one);
        assert_eq!(h.mul(&i, &j), k);
        assert_eq!(h.mul(&j, &i), k.iter().map(|x| x.neg()).collect::<Vec<_>>());
        assert!(h.center().dim() == 1);
    }

    #[test]
    fn finite_fields() {
        let (f16, poly) = finite_field_algebra(2, 4).unwrap();
        assert_eq!(poly, vec![1, 1, 0, 0, 1]);
        assert!(f16.is_commutative());
        // Every nonzero element is invertible.
        for i in 0..f16.dim() {
            assert!(f16.inverse(&f16.basis_vec(i)).is_some());
        }
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
        assert!(finite_field_algebra(4, 2).is_err());
    }

    #[test]
    fn two_object_groupoid_is_matrix_algebra() {
        let comp = GroupoidComponent { objects: 2, group: g(&[]) };
        let (h, arrows) = groupoid_algebra(&[comp], Q).unwrap();
        assert_eq!(h.dim(), 4);
        assert_eq!(arrows.len(), 4);
        let e12 = h.basis_vec(1);
        let e21 = h.basis_vec(2);
        assert_eq!(h.mul(&e12, &e21), h.basis_vec(0));
        assert!(h.mul(&e12, &e12).iter().all(Scalar::is_zero));
        assert!(h.center().dim() == 1);
    }

    #[test]
    fn frobenius_systems() {
        let s3 = g(&["(1 2)", "(1 2 3)"]);
        let all: Vec<usize> = (0..6).collect();
        let t12 = s3.subgroup_from_perms(&[Perm::parse("(1 2)").unwrap()]).unwrap();
        let a3 = s3.subgroup_from_perms(&[Perm::parse("(1 2 3)").unwrap()]).unwrap();
        for (h, k, n) in [(all.clone(), t12, 3), (a3, vec![0], 3), (all.clone(), all, 1)] {
            let chain = SubgroupChain::new(&s3, h, k).unwrap();
            let t = tower_from_chain(&chain, Q);
            let fs = frobenius_system_group(&chain, &t);
            assert_eq!(fs.x.len(), n);
            assert!(fs.verify(&t.b, &t.c, &t.cb));
        }
    }
}
