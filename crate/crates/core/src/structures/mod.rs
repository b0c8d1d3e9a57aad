//! The module and ring structures carried by a depth-three tower: the
//! centralizer spaces `P, Q, T, U, R, V`, the endomorphism rings `E, S, J`,
//! and the checks built on them (Morita context, anchors, pairing, coring,
//! pre-Galois map, coproducts, smash products, invariants).
//!
//! Elements of `A ⊗_X A` are vectors in quotient coordinates. The products
//! of the Morita context and the module actions are all instances of
//! [`wrap`]: `x` wrapped around `y` is `x¹y¹ ⊗ y²x²`.

mod bialgebroid;
mod coring;
mod morita;
mod report;
mod smash;
mod weakhopf;

pub use bialgebroid::{coproduct_on_s, d2_quasibases, CoproductReport, D2Quasibases};
pub use coring::{coring_on_p, pairing, pregalois, pregalois_natural, CoringReport, PairingReport, PregaloisReport};
pub use morita::{anchor_maps, morita_products, AnchorReport, MoritaReport};
pub use report::{structure_report, Check, CheckResult, StructureReport};
pub use smash::{fixed_ring, fixed_ring_right, invariants, smash_decomposition, InvariantsReport, SmashReport};
pub use weakhopf::{weak_hopf_groupoid, WeakHopfReport};

use sha2::{Digest, Sha256};

use crate::algebra::{Algebra, Tower};
use crate::bimodule::{centralizer, hom_space, Bimodule, MapSpace};
use crate::error::Result;
use crate::field::{Field, Scalar};
use crate::linalg::{dense_axpy, sparse_from_dense, LinMap, Subspace};
use crate::tensor::BalancedTensor;

/// Exhaustive checks over basis tuples switch to evenly spaced sampling
/// above this many tuples.
pub const EXHAUSTIVE_LIMIT: usize = 20_000;

/// All spaces attached to a tower `A | B | C`.
#[derive(Clone, Debug)]
pub struct DepthContext {
    pub tower: Tower,
    /// Generators of `B` and `C` as elements of `A`.
    pub b_gens: Vec<Vec<Scalar>>,
    pub c_gens: Vec<Vec<Scalar>>,
    /// `A ⊗_B A` and `A ⊗_C A`.
    pub ab: BalancedTensor,
    pub ac: BalancedTensor,
    /// `(A ⊗_B A)^C`.
    pub p: Subspace,
    /// `(A ⊗_C A)^B`.
    pub q: Subspace,
    /// `(A ⊗_B A)^B`.
    pub t: Subspace,
    /// `(A ⊗_C A)^C`.
    pub u: Subspace,
    /// `A^B`.
    pub r: Subspace,
    /// `A^C`.
    pub v: Subspace,
    /// `End _B A_C`.
    pub e: MapSpace,
    /// `End _C A_C`.
    pub s: MapSpace,
    /// `End _C A_B`.
    pub j: MapSpace,
}

impl DepthContext {
    pub fn new(tower: &Tower) -> Result<DepthContext> {
        let a = &tower.a;
        let b_gens = tower.b_gens_in_a();
        let c_gens = tower.c_gens_in_a();
        let ab = BalancedTensor::over(a, &b_gens);
        let ac = BalancedTensor::over(a, &c_gens);
        let p = tensor_centralizer(a, &ab, &c_gens);
        let q = tensor_centralizer(a, &ac, &b_gens);
        let t = tensor_centralizer(a, &ab, &b_gens);
        let u = tensor_centralizer(a, &ac, &c_gens);
        let r = element_centralizer(a, &b_gens);
        let v = element_centralizer(a, &c_gens);
        let e = end_space(a, &b_gens, &c_gens)?;
        let s = end_space(a, &c_gens, &c_gens)?;
        let j = end_space(a, &c_gens, &b_gens)?;
        Ok(DepthContext { tower: tower.clone(), b_gens, c_gens, ab, ac, p, q, t, u, r, v, e, s, j })
    }

    pub fn a(&self) -> &Algebra {
        &self.tower.a
    }

    pub fn field(&self) -> Field {
        self.tower.field()
    }

    /// `1 ⊗_B 1`.
    pub fn one_b(&self) -> Vec<Scalar> {
        let one = self.a().unit();
        self.ab.tensor(one, one)
    }

    /// `1 ⊗_C 1`.
    pub fn one_c(&self) -> Vec<Scalar> {
        let one = self.a().unit();
        self.ac.tensor(one, one)
    }

    /// `End A_B`, the right `B`-linear endomorphisms of `A`.
    pub fn end_right_b(&self) -> Result<MapSpace> {
        end_space(self.a(), &[], &self.b_gens)
    }

    /// A small set of elements generating `V` as an algebra.
    pub fn v_generators(&self) -> Vec<Vec<Scalar>> {
        let a = self.a();
        let mut gens: Vec<Vec<Scalar>> = Vec::new();
        let mut span = a.generated_subalgebra(&gens);
        for b in self.v.basis() {
            if span.dim() == self.v.dim() {
                break;
            }
            if !span.contains(b) {
                gens.push(b.clone());
                span = a.generated_subalgebra(&gens);
            }
        }
        gens
    }

    /// `λ_x` as a linear map on `A`.
    pub fn lambda(&self, x: &[Scalar]) -> LinMap {
        self.a().left_mul(x)
    }

    /// `ρ_x` as a linear map on `A`.
    pub fn rho(&self, x: &[Scalar]) -> LinMap {
        self.a().right_mul(x)
    }
}

/// `{x ∈ A ⊗_X A : g x = x g}` for the given elements `g`.
pub fn tensor_centralizer(a: &Algebra, sq: &BalancedTensor, gens: &[Vec<Scalar>]) -> Subspace {
    let m = sq.bimodule(a, gens, gens);
    let pairs: Vec<(LinMap, LinMap)> = m.left.into_iter().zip(m.right).collect();
    centralizer(sq.dim(), a.field(), &pairs)
}

/// `{x ∈ A : g x = x g}`.
pub fn element_centralizer(a: &Algebra, gens: &[Vec<Scalar>]) -> Subspace {
    let pairs: Vec<(LinMap, LinMap)> = gens.iter().map(|g| (a.left_mul(g), a.right_mul(g))).collect();
    centralizer(a.dim(), a.field(), &pairs)
}

/// `End _X A_Y` for generators of `X` (acting on the left) and `Y`.
pub fn end_space(a: &Algebra, left: &[Vec<Scalar>], right: &[Vec<Scalar>]) -> Result<MapSpace> {
    let m = Bimodule::regular(a, left, right);
    Ok(MapSpace::new(a.dim(), a.dim(), a.field(), &hom_space(&m, &m)?))
}

/// `x¹y¹ ⊗ y²x²` in `target`, for `x ∈ sx`, `y ∈ sy` in quotient
/// coordinates.
pub fn wrap(a: &Algebra, sx: &BalancedTensor, x: &[Scalar], sy: &BalancedTensor, y: &[Scalar], target: &BalancedTensor) -> Vec<Scalar> {
    let mut out = vec![a.field().zero(); target.dim()];
    let ty = sy.terms(y);
    for (i, j, c) in sx.terms(x) {
        for (k, l, d) in &ty {
            let cd = c.mul(d);
            let v = target.tensor_sparse(a.mul_basis(i, *k), a.mul_basis(*l, j));
            dense_axpy(&mut out, &cd, &v);
        }
    }
    out
}

/// `x¹ m x²` for `x ∈ sx`.
pub fn sandwich(a: &Algebra, sx: &BalancedTensor, x: &[Scalar], m: &[Scalar]) -> Vec<Scalar> {
    let mut out = a.zero_vec();
    let ms = sparse_from_dense(m);
    for (i, j, c) in sx.terms(x) {
        let left = a.mul_sparse(&vec![(i, c)], &ms);
        let v = a.mul_sparse(&left, &vec![(j, a.field().one())]);
        for (k, s) in v {
            out[k] = out[k].add(&s);
        }
    }
    out
}

/// `x¹ ⊗ f(x²)` for `f` left `X`-linear.
pub fn apply_right_factor(sx: &BalancedTensor, f: &LinMap, x: &[Scalar]) -> Vec<Scalar> {
    let id = LinMap::identity(sx.dim_m, sx.field);
    sx.map_pair(&id, f, sx).apply(x)
}

/// The matrix of `op` restricted to `sub`, in the coordinates of the
/// subspace basis. `None` if `op` leaves the subspace.
pub fn restrict(sub: &Subspace, op: impl Fn(&[Scalar]) -> Vec<Scalar>) -> Option<LinMap> {
    let cols =
        sub.basis().iter().map(|b| sub.coordinates(&op(b)).ok().flatten().map(|c| sparse_from_dense(&c))).collect::<Option<Vec<_>>>()?;
    Some(LinMap { src: sub.dim(), dst: sub.dim(), field: sub.field, cols })
}

/// Evenly spaced indices into `0..total`, all of them when `total <= limit`.
pub fn sample_indices(total: usize, limit: usize) -> Vec<usize> {
    if total <= limit {
        return (0..total).collect();
    }
    let mut v: Vec<usize> = (0..limit).map(|k| k * total / limit).collect();
    v.dedup();
    v
}

/// `sha256` of a canonical text rendering of a list of maps.
pub fn maps_hash(maps: &[LinMap]) -> String {
    let mut h = Sha256::new();
    for m in maps {
        h.update(format!("{}x{}:", m.dst, m.src));
        for (c, col) in m.cols.iter().enumerate() {
            for (r, x) in col {
                h.update(format!("{c},{r},{x};"));
            }
        }
        h.update(b"|");
    }
    hex::encode(h.finalize())
}

/// `sha256` of a list of vectors.
pub fn vecs_hash(vs: &[Vec<Scalar>]) -> String {
    let mut h = Sha256::new();
    for v in vs {
        for x in v {
            h.update(format!("{x},"));
        }
        h.update(b"|");
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::tower_from_chain;
    use crate::groups::{FiniteGroup, Perm, SubgroupChain};

    #[test]
    fn degenerate_contexts() {
        let g = FiniteGroup::from_permutations(&[Perm::parse("(1 2)").unwrap(), Perm::parse("(1 2 3)").unwrap()], 200).unwrap();
        let a3 = g.subgroup_from_perms(&[Perm::parse("(1 2 3)").unwrap()]).unwrap();
        let ctx = DepthContext::new(&tower_from_chain(&SubgroupChain::new(&g, a3.clone(), a3).unwrap(), Field::Rational)).unwrap();
        assert_eq!(ctx.p.basis(), ctx.t.basis());
        assert_eq!(ctx.q.basis(), ctx.u.basis());
        assert!(ctx.v.contains_subspace(&ctx.r));
        let t12 = g.subgroup_from_perms(&[Perm::parse("(1 2)").unwrap()]).unwrap();
        let ctx = DepthContext::new(&tower_from_chain(&SubgroupChain::new(&g, t12, vec![0]).unwrap(), Field::Rational)).unwrap();
        assert_eq!(ctx.p.dim(), ctx.ab.dim());
        assert_eq!(ctx.v.dim(), 6);
    }
}
