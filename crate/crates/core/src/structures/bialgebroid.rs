use serde::Serialize;

use super::{maps_hash, sample_indices, DepthContext, EXHAUSTIVE_LIMIT};
use crate::bimodule::MapSpace;
use crate::depth::{extract_quasibases, QuasibaseSet, Side};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{sparse_from_dense, LinMap, RowReducer, Subspace};
use crate::tensor::BalancedTensor;

/// Largest ambient dimension `(dim S)²` accepted for `S ⊗_V S`.
pub const COPRODUCT_AMBIENT_CAP: usize = 250_000;

/// Right and left depth-two quasibases of `A | C`.
#[derive(Clone, Debug)]
pub struct D2Quasibases {
    /// `γ̃_k ∈ S`, `ũ_k ∈ U` with `1 ⊗ y = Σ γ̃_k(y) ũ_k`.
    pub right: QuasibaseSet,
    /// `β_j ∈ S`, `t_j ∈ U` with `x ⊗ 1 = Σ t_j β_j(x)`.
    pub left: QuasibaseSet,
}

pub fn d2_quasibases(ctx: &DepthContext) -> Result<D2Quasibases> {
    let ac = ctx.tower.with_b_equal_c();
    let not_d2 = |e: Error| match e {
        Error::NotDepth(_) => Error::NotDepth("depth two over C".into()),
        e => e,
    };
    let right = extract_quasibases(&ac, Side::Right).map_err(not_d2)?;
    let left = extract_quasibases(&ac, Side::Left).map_err(not_d2)?;
    Ok(D2Quasibases { right, left })
}

/// `x ↦ Σ y¹ β(y² x)` for `y ∈ A ⊗_X A`.
pub fn inner_twist(ctx: &DepthContext, sq: &BalancedTensor, y: &[Scalar], beta: &LinMap) -> LinMap {
    let a = ctx.a();
    let mut out = LinMap::zero(a.dim(), a.dim(), a.field());
    for (i, j, c) in sq.terms(y) {
        let m = ctx.lambda(&a.basis_vec(i)).compose(beta).compose(&ctx.lambda(&a.basis_vec(j)));
        out = out.axpy(&c, &m);
    }
    out
}

/// `x ↦ Σ β(x y¹) y²` for `y ∈ A ⊗_X A`.
pub fn outer_twist(ctx: &DepthContext, sq: &BalancedTensor, y: &[Scalar], beta: &LinMap) -> LinMap {
    let a = ctx.a();
    let mut out = LinMap::zero(a.dim(), a.dim(), a.field());
    for (i, j, c) in sq.terms(y) {
        let m = ctx.rho(&a.basis_vec(j)).compose(beta).compose(&ctx.rho(&a.basis_vec(i)));
        out = out.axpy(&c, &m);
    }
    out
}

/// Sweedler terms `Σ_k γ̃_k ⊗ ũ_k¹β(ũ_k²-)` of `Δ(β)`.
pub fn sweedler_right(ctx: &DepthContext, qb: &QuasibaseSet, beta: &LinMap) -> Vec<(LinMap, LinMap)> {
    qb.maps.iter().zip(&qb.elems).map(|(g, u)| (g.clone(), inner_twist(ctx, &ctx.ac, u, beta))).collect()
}

/// Sweedler terms `Σ_j β(-t_j¹)t_j² ⊗ β_j` of `Δ(β)`.
pub fn sweedler_left(ctx: &DepthContext, qb: &QuasibaseSet, beta: &LinMap) -> Vec<(LinMap, LinMap)> {
    qb.maps.iter().zip(&qb.elems).map(|(b, t)| (outer_twist(ctx, &ctx.ac, t, beta), b.clone())).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CoproductReport {
    pub dim_s: usize,
    pub dim_v: usize,
    pub dim_s_tensor_s: usize,
    pub dim_e: usize,
    pub dim_j: usize,
    /// The two Sweedler forms agree in `S ⊗_V S` for every basis map.
    pub forms_agree: bool,
    /// `β(ab) = Σ β₍₁₎(a) β₍₂₎(b)`.
    pub measuring: bool,
    pub measuring_checks: usize,
    pub counit_laws: bool,
    /// `E` and `J` contain `id` and are closed under composition.
    pub e_subring: bool,
    pub j_subring: bool,
    /// `Δ(E) ⊆ E ⊗_V S`, by components and by span.
    pub e_right_coideal: bool,
    /// `Δ(J) ⊆ S ⊗_V J`, by components and by span.
    pub j_left_coideal: bool,
    /// The coaction of `E` through depth-two quasibases of `A | B`, when
    /// those exist: components in `End _B A_B` and `E`, and the measuring
    /// identity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_coaction: Option<bool>,
    pub hash: String,
}

impl CoproductReport {
    pub fn passed(&self) -> bool {
        self.forms_agree
            && self.measuring
            && self.counit_laws
            && self.e_subring
            && self.j_subring
            && self.e_right_coideal
            && self.j_left_coideal
            && self.e_coaction != Some(false)
    }
}

fn s_coords(s: &MapSpace, f: &LinMap) -> Result<Vec<Scalar>> {
    s.coordinates(f).ok_or_else(|| Error::Invariant("Sweedler component leaves S".into()))
}

fn subring(space: &MapSpace, d: usize) -> bool {
    let b = space.basis();
    let n = b.len();
    space.contains(&LinMap::identity(d, space.field()))
        && sample_indices(n * n, EXHAUSTIVE_LIMIT).into_iter().all(|k| space.contains(&b[k / n].compose(&b[k % n])))
}

/// The coproduct `S -> S ⊗_V S` on `S = End _C A_C` for `A | C` depth two,
/// with its restrictions to `E = End _B A_C` and `J = End _C A_B`.
pub fn coproduct_on_s(ctx: &DepthContext) -> Result<CoproductReport> {
    let a = ctx.a();
    let d = a.dim();
    let field = ctx.field();
    let s = &ctx.s;
    let ns = s.dim();
    if ns * ns > COPRODUCT_AMBIENT_CAP {
        return Err(Error::DimensionCap { dim: ns * ns, cap: COPRODUCT_AMBIENT_CAP });
    }
    let qb = d2_quasibases(ctx)?;

    // (α v) ⊗ β = α ⊗ (v β): (α v)(x) = α(x) v, (v β)(x) = v β(x).
    let vg = ctx.v_generators();
    let leaves = || Error::Invariant("V does not act on S".into());
    let mut pairs = Vec::with_capacity(vg.len());
    for v in &vg {
        let (rv, lv) = (ctx.rho(v), ctx.lambda(v));
        let right = s.operator(|f| rv.compose(f)).ok_or_else(leaves)?;
        let left = s.operator(|f| lv.compose(f)).ok_or_else(leaves)?;
        pairs.push((right, left));
    }
    let ss = BalancedTensor::new(ns, ns, field, &pairs);
    let embed = |terms: &[(LinMap, LinMap)]| -> Result<Vec<Scalar>> {
        let mut out = vec![field.zero(); ss.dim()];
        for (f, g) in terms {
            let x = sparse_from_dense(&s_coords(s, f)?);
            let y = sparse_from_dense(&s_coords(s, g)?);
            crate::linalg::dense_axpy(&mut out, &field.one(), &ss.tensor_sparse(&x, &y));
        }
        Ok(out)
    };

    let mut forms_agree = true;
    let mut delta_cols = Vec::with_capacity(ns);
    for beta in s.basis() {
        let r = embed(&sweedler_right(ctx, &qb.right, beta))?;
        if embed(&sweedler_left(ctx, &qb.left, beta))? != r {
            forms_agree = false;
        }
        delta_cols.push(r);
    }

    // Sweedler terms of Δ(basis_k) through the section of S ⊗_V S.
    let terms: Vec<Vec<(usize, usize, Scalar)>> = delta_cols.iter().map(|w| ss.terms(w)).collect();
    let sb = s.basis();

    let idx = sample_indices(ns * d * d, EXHAUSTIVE_LIMIT);
    let measuring = idx.iter().all(|&k| {
        let (bi, rest) = (k / (d * d), k % (d * d));
        let (x, y) = (a.basis_vec(rest / d), a.basis_vec(rest % d));
        let lhs = sb[bi].apply(&a.mul(&x, &y));
        let mut rhs = a.zero_vec();
        for (i, j, c) in &terms[bi] {
            let p = a.mul(&sb[*i].apply(&x), &sb[*j].apply(&y));
            crate::linalg::dense_axpy(&mut rhs, c, &p);
        }
        lhs == rhs
    });

    let one = a.unit();
    let counit_laws = (0..ns).all(|k| {
        let mut left = LinMap::zero(d, d, field);
        let mut right = LinMap::zero(d, d, field);
        for (i, j, c) in &terms[k] {
            left = left.axpy(c, &ctx.lambda(&sb[*i].apply(one)).compose(&sb[*j]));
            right = right.axpy(c, &ctx.rho(&sb[*j].apply(one)).compose(&sb[*i]));
        }
        left == sb[k] && right == sb[k]
    });

    let e_subring = subring(&ctx.e, d);
    let j_subring = subring(&ctx.j, d);

    // Span of the classes x ⊗ y with x in `first` and y in `second`.
    let span = |first: &MapSpace, second: &MapSpace| -> Result<Subspace> {
        let mut red = RowReducer::new(ss.dim(), field);
        for f in first.basis() {
            let x = sparse_from_dense(&s_coords(s, f)?);
            for g in second.basis() {
                let y = sparse_from_dense(&s_coords(s, g)?);
                red.insert(sparse_from_dense(&ss.tensor_sparse(&x, &y)));
            }
        }
        Ok(Subspace::from_rref(red.finish()))
    };
    let es = span(&ctx.e, s)?;
    let sj = span(s, &ctx.j)?;
    let mut e_right_coideal = true;
    for alpha in ctx.e.basis() {
        let comps = sweedler_left(ctx, &qb.left, alpha);
        e_right_coideal &= comps.iter().all(|(f, _)| ctx.e.contains(f));
        e_right_coideal &= es.contains(&embed(&comps)?);
    }
    let mut j_left_coideal = true;
    for beta in ctx.j.basis() {
        let comps = sweedler_right(ctx, &qb.right, beta);
        j_left_coideal &= comps.iter().all(|(_, g)| ctx.j.contains(g));
        j_left_coideal &= sj.contains(&embed(&comps)?);
    }

    let e_coaction = match extract_quasibases(&ctx.tower.with_c_equal_b(), Side::Right) {
        Ok(bq) => Some(e_coaction(ctx, &bq)?),
        Err(Error::NotDepth(_)) => None,
        Err(e) => return Err(e),
    };

    let delta = LinMap { src: ns, dst: ss.dim(), field, cols: delta_cols.iter().map(|c| sparse_from_dense(c)).collect() };
    Ok(CoproductReport {
        dim_s: ns,
        dim_v: ctx.v.dim(),
        dim_s_tensor_s: ss.dim(),
        dim_e: ctx.e.dim(),
        dim_j: ctx.j.dim(),
        forms_agree,
        measuring,
        measuring_checks: idx.len(),
        counit_laws,
        e_subring,
        j_subring,
        e_right_coideal,
        j_left_coideal,
        e_coaction,
        hash: maps_hash(&[delta]),
    })
}

/// `α ↦ Σ_i γ̃_i ⊗ ũ_i¹α(ũ_i²-)` with depth-two quasibases of `A | B`.
fn e_coaction(ctx: &DepthContext, bq: &QuasibaseSet) -> Result<bool> {
    let a = ctx.a();
    let d = a.dim();
    let bb = super::end_space(a, &ctx.b_gens, &ctx.b_gens)?;
    if !bq.maps.iter().all(|g| bb.contains(g)) {
        return Ok(false);
    }
    let idx = sample_indices(d * d, EXHAUSTIVE_LIMIT / ctx.e.dim().max(1));
    for alpha in ctx.e.basis() {
        let comps: Vec<LinMap> = bq.elems.iter().map(|u| inner_twist(ctx, &ctx.ab, u, alpha)).collect();
        if !comps.iter().all(|f| ctx.e.contains(f)) {
            return Ok(false);
        }
        for &k in &idx {
            let (x, y) = (a.basis_vec(k / d), a.basis_vec(k % d));
            let mut rhs = a.zero_vec();
            for (g, f) in bq.maps.iter().zip(&comps) {
                crate::linalg::dense_axpy(&mut rhs, &ctx.field().one(), &a.mul(&g.apply(&x), &f.apply(&y)));
            }
            if rhs != alpha.apply(&a.mul(&x, &y)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
