use serde::Serialize;

use super::{restrict, sample_indices, sandwich, wrap, DepthContext, EXHAUSTIVE_LIMIT};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{sparse_from_dense, LinMap, RowReducer, Subspace};
use crate::tensor::BalancedTensor;

#[derive(Clone, Debug, Serialize)]
pub struct MoritaReport {
    pub dim_p: usize,
    pub dim_q: usize,
    pub dim_t: usize,
    pub dim_u: usize,
    /// `T` and `U` are closed under their products and contain `1 ⊗ 1`.
    pub t_ring: bool,
    pub u_ring: bool,
    /// `(1⊗1)(1⊗1)` gives the units of `T` and `U`; only defined when
    /// `1 ⊗_C 1` commutes with `B`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit_products: Option<bool>,
    /// Every product `pq` lies in `T` and every `qp` in `U`.
    pub products_land: bool,
    pub triples_checked: usize,
    pub exhaustive: bool,
    /// `p(qp') = (pq)p'` and `q(pq') = (qp)q'` on the checked triples.
    pub associative: bool,
    /// `1_T ∈ PQ` and `1_U ∈ QP`, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full: Option<bool>,
}

impl MoritaReport {
    pub fn passed(&self) -> bool {
        self.t_ring
            && self.u_ring
            && self.unit_products != Some(false)
            && self.products_land
            && self.associative
            && self.full != Some(false)
    }
}

/// Checks the Morita context `(T, U, P, Q)` with `pq = q¹p¹ ⊗_B p²q²` and
/// `qp = p¹q¹ ⊗_C q²p²`.
pub fn morita_products(ctx: &DepthContext, check_full: bool) -> MoritaReport {
    let a = ctx.a();
    let (ab, ac) = (&ctx.ab, &ctx.ac);
    let pq = |p: &[Scalar], q: &[Scalar]| wrap(a, ac, q, ab, p, ab);
    let qp = |q: &[Scalar], p: &[Scalar]| wrap(a, ab, p, ac, q, ac);
    // t·p = p¹t¹ ⊗ t²p², p·u = u¹p¹ ⊗ p²u², u·q = q¹u¹ ⊗ u²q², q·t = t¹q¹ ⊗ q²t².
    let tp = |t: &[Scalar], p: &[Scalar]| wrap(a, ab, p, ab, t, ab);
    let pu = |p: &[Scalar], u: &[Scalar]| wrap(a, ac, u, ab, p, ab);
    let uq = |u: &[Scalar], q: &[Scalar]| wrap(a, ac, q, ac, u, ac);
    let qt = |q: &[Scalar], t: &[Scalar]| wrap(a, ab, t, ac, q, ac);

    let (one_b, one_c) = (ctx.one_b(), ctx.one_c());
    let ring = |sub: &Subspace, sq: &BalancedTensor, one: &[Scalar]| {
        let b = sub.basis();
        let pairs = sample_indices(b.len() * b.len(), EXHAUSTIVE_LIMIT);
        sub.contains(one)
            && pairs.iter().all(|&k| {
                let (x, y) = (&b[k / b.len()], &b[k % b.len()]);
                sub.contains(&wrap(a, sq, y, sq, x, sq))
            })
    };
    let t_ring = ring(&ctx.t, ab, &one_b);
    let u_ring = ring(&ctx.u, ac, &one_c);
    let unit_products = ctx.q.contains(&one_c).then(|| pq(&one_b, &one_c) == one_b && qp(&one_c, &one_b) == one_c);

    let (pb, qb) = (ctx.p.basis(), ctx.q.basis());
    let (np, nq) = (pb.len(), qb.len());
    let total = np * nq * np.max(nq);
    let idx = sample_indices(total, EXHAUSTIVE_LIMIT);
    let mut products_land = true;
    let mut associative = true;
    for &k in &idx {
        let (i, rest) = (k % np.max(1), k / np.max(1));
        let (jq, l) = (rest % nq.max(1), rest / nq.max(1));
        if np == 0 || nq == 0 {
            break;
        }
        let (p, q) = (&pb[i], &qb[jq]);
        let t = pq(p, q);
        let u = qp(q, p);
        if !ctx.t.contains(&t) || !ctx.u.contains(&u) {
            products_land = false;
        }
        if l < np {
            let p2 = &pb[l];
            if pu(p, &qp(q, p2)) != tp(&t, p2) {
                associative = false;
            }
        }
        if l < nq {
            let q2 = &qb[l];
            if qt(q, &pq(p, q2)) != uq(&u, q2) {
                associative = false;
            }
        }
    }
    let full = check_full.then(|| {
        let contains_unit = |sub_dim: usize, prods: &mut dyn Iterator<Item = Vec<Scalar>>, one: &[Scalar]| {
            let mut red = RowReducer::new(sub_dim, ctx.field());
            for v in prods {
                red.insert(sparse_from_dense(&v));
                if red.contains(sparse_from_dense(one)) {
                    return true;
                }
            }
            false
        };
        let mut it = (0..np * nq).map(|k| pq(&pb[k / nq], &qb[k % nq]));
        let t_full = contains_unit(ab.dim(), &mut it, &one_b);
        let mut it = (0..np * nq).map(|k| qp(&qb[k % nq], &pb[k / nq]));
        let u_full = contains_unit(ac.dim(), &mut it, &one_c);
        t_full && u_full
    });
    MoritaReport {
        dim_p: np,
        dim_q: nq,
        dim_t: ctx.t.dim(),
        dim_u: ctx.u.dim(),
        t_ring,
        u_ring,
        unit_products,
        products_land,
        triples_checked: idx.len(),
        exhaustive: idx.len() == total,
        associative,
        full,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnchorReport {
    /// `dim R ⊗_T P`, `dim V`, rank of `r ⊗ p ↦ p¹ r p²`.
    pub rp_dim: usize,
    pub v_dim: usize,
    pub rp_rank: usize,
    /// `dim V ⊗_U Q`, `dim R`, rank of `v ⊗ q ↦ q¹ v q²`.
    pub vq_dim: usize,
    pub r_dim: usize,
    pub vq_rank: usize,
    /// `1 ⊗ (1⊗1) ↦ 1` on both maps.
    pub units: bool,
    #[serde(skip)]
    pub rp_map: LinMap,
    #[serde(skip)]
    pub vq_map: LinMap,
}

impl AnchorReport {
    pub fn bijective(&self) -> bool {
        self.rp_dim == self.v_dim && self.rp_rank == self.v_dim && self.vq_dim == self.r_dim && self.vq_rank == self.r_dim
    }
}

/// The anchor maps `R ⊗_T P -> V` and `V ⊗_U Q -> R`, with the balanced
/// products built as quotients over the bases of `T` and `U`.
pub fn anchor_maps(ctx: &DepthContext) -> Result<AnchorReport> {
    let a = ctx.a();
    let field = ctx.field();
    let (ab, ac) = (&ctx.ab, &ctx.ac);
    let leaves = || Error::Invariant("anchor action leaves its subspace".into());
    let coords = |sub: &Subspace, v: &[Scalar]| sub.coordinates(v).ok().flatten().ok_or_else(leaves);

    let mut pairs = Vec::new();
    for t in ctx.t.basis() {
        let on_r = restrict(&ctx.r, |r| sandwich(a, ab, t, r)).ok_or_else(leaves)?;
        let on_p = restrict(&ctx.p, |p| wrap(a, ab, p, ab, t, ab)).ok_or_else(leaves)?;
        pairs.push((on_r, on_p));
    }
    let rp = BalancedTensor::new(ctx.r.dim(), ctx.p.dim(), field, &pairs);
    let rp_map = anchor_matrix(&rp, ctx.v.dim(), |i, j| coords(&ctx.v, &sandwich(a, ab, &ctx.p.basis()[j], &ctx.r.basis()[i])))?;

    let mut pairs = Vec::new();
    for u in ctx.u.basis() {
        let on_v = restrict(&ctx.v, |v| sandwich(a, ac, u, v)).ok_or_else(leaves)?;
        let on_q = restrict(&ctx.q, |q| wrap(a, ac, q, ac, u, ac)).ok_or_else(leaves)?;
        pairs.push((on_v, on_q));
    }
    let vq = BalancedTensor::new(ctx.v.dim(), ctx.q.dim(), field, &pairs);
    let vq_map = anchor_matrix(&vq, ctx.r.dim(), |i, j| coords(&ctx.r, &sandwich(a, ac, &ctx.q.basis()[j], &ctx.v.basis()[i])))?;

    let one = a.unit();
    let units = sandwich(a, ab, &ctx.one_b(), one) == one && sandwich(a, ac, &ctx.one_c(), one) == one;
    Ok(AnchorReport {
        rp_dim: rp.dim(),
        v_dim: ctx.v.dim(),
        rp_rank: rp_map.rank(),
        vq_dim: vq.dim(),
        r_dim: ctx.r.dim(),
        vq_rank: vq_map.rank(),
        units,
        rp_map,
        vq_map,
    })
}

fn anchor_matrix(t: &BalancedTensor, dst: usize, f: impl Fn(usize, usize) -> Result<Vec<Scalar>>) -> Result<LinMap> {
    let cols = (0..t.dim())
        .map(|q| {
            let (i, j) = t.section(q);
            f(i, j).map(|v| sparse_from_dense(&v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LinMap { src: t.dim(), dst, field: t.field, cols })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraMap, Tower};
    use crate::builders::{matrix_algebra, tower_from_chain};
    use crate::field::Field;
    use crate::groups::{FiniteGroup, Perm, SubgroupChain};

    #[test]
    fn h_separable_matrix_tower_is_full_with_bijective_anchors() {
        let q = Field::Rational;
        let m2 = matrix_algebra(2, q);
        let k = crate::algebra::Algebra::new(q, vec!["1".into()], vec![vec![vec![(0, q.one())]]], vec![q.one()], Some(vec![])).unwrap();
        let cb = AlgebraMap::new(&k, &m2, vec![m2.unit().to_vec()]).unwrap();
        let t = Tower::new(m2.clone(), m2.clone(), k, AlgebraMap::identity(&m2), cb).unwrap();
        let ctx = DepthContext::new(&t).unwrap();
        let m = morita_products(&ctx, true);
        assert!(m.passed(), "{m:?}");
        assert_eq!(m.full, Some(true));
        let an = anchor_maps(&ctx).unwrap();
        assert!(an.units && an.bijective(), "{an:?}");
    }

    #[test]
    fn group_tower_context_is_associative() {
        let g = FiniteGroup::from_permutations(&[Perm::parse("(1 2)").unwrap(), Perm::parse("(1 2 3)").unwrap()], 200).unwrap();
        let a3 = g.subgroup_from_perms(&[Perm::parse("(1 2 3)").unwrap()]).unwrap();
        let t = tower_from_chain(&SubgroupChain::new(&g, a3, vec![0]).unwrap(), Field::Rational);
        let ctx = DepthContext::new(&t).unwrap();
        let m = morita_products(&ctx, false);
        assert!(m.passed() && m.exhaustive, "{m:?}");
        assert!(anchor_maps(&ctx).unwrap().units);
    }
}
