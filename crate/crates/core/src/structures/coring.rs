use serde::Serialize;

use super::{restrict, sample_indices, vecs_hash, DepthContext, EXHAUSTIVE_LIMIT};
use crate::bimodule::{hom_space, Bimodule, MapSpace};
use crate::depth::{summand_of_power, QuasibaseSet, Side};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{dense_axpy, sparse_from_dense, LinMap, Subspace};
use crate::tensor::{BalancedTensor, TensorPower};

fn coords(sub: &Subspace, v: &[Scalar], what: &str) -> Result<Vec<Scalar>> {
    sub.coordinates(v)?.ok_or_else(|| Error::Invariant(format!("{what} leaves its subspace")))
}

fn right_quasibases(qb: &QuasibaseSet) -> Result<()> {
    if qb.side != Side::Right {
        return Err(Error::Precondition("right depth-three quasibases required".into()));
    }
    Ok(())
}

/// `⟨p, α⟩ = p¹ α(p²)`.
fn pair(ctx: &DepthContext, p: &[Scalar], alpha: &LinMap) -> Vec<Scalar> {
    let a = ctx.a();
    let mut out = a.zero_vec();
    for (i, j, c) in ctx.ab.terms(p) {
        let v = a.mul_sparse(&vec![(i, c)], &alpha.cols[j]);
        for (k, x) in v {
            out[k] = out[k].add(&x);
        }
    }
    out
}

/// Left actions of the generators of `V` on `P`, in `P`-coordinates.
fn v_on_p(ctx: &DepthContext) -> Result<Vec<LinMap>> {
    let a = ctx.a();
    let id = LinMap::identity(a.dim(), a.field());
    ctx.v_generators()
        .iter()
        .map(|v| {
            let lam = ctx.ab.map_pair(&a.left_mul(v), &id, &ctx.ab);
            restrict(&ctx.p, |p| lam.apply(p)).ok_or_else(|| Error::Invariant("V does not act on P".into()))
        })
        .collect()
}

/// Left actions of the generators of `V` on `V`.
fn v_on_v(ctx: &DepthContext) -> Result<Vec<LinMap>> {
    let a = ctx.a();
    ctx.v_generators()
        .iter()
        .map(|v| restrict(&ctx.v, |w| a.mul(v, w)).ok_or_else(|| Error::Invariant("V is not a subalgebra".into())))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub dim_p: usize,
    pub dim_e: usize,
    /// `dim Hom(_V P, _V V)`.
    pub dim_dual: usize,
    /// `⟨1⊗1, id⟩ = 1`.
    pub unit: bool,
    /// Every value lies in `V`.
    pub values_in_v: bool,
    /// No nonzero `p` pairs to zero with all of `E`.
    pub left_nondegenerate: bool,
    /// No nonzero `α` pairs to zero with all of `P`.
    pub right_nondegenerate: bool,
    /// `α ↦ ⟨-, α⟩` is a bijection `E -> Hom(_V P, _V V)`.
    pub induces_iso: bool,
    /// Both round trips through `F ↦ Σ γ_i(-) F(u_i)` are identities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverse_round_trip: Option<bool>,
    pub hash: String,
}

impl PairingReport {
    pub fn nondegenerate(&self) -> bool {
        self.left_nondegenerate && self.right_nondegenerate
    }

    pub fn passed(&self) -> bool {
        self.unit && self.values_in_v && self.nondegenerate() && self.induces_iso && self.inverse_round_trip != Some(false)
    }
}

/// The pairing `P × E -> V`, `⟨p, α⟩ = p¹ α(p²)`.
pub fn pairing(ctx: &DepthContext, qb: Option<&QuasibaseSet>) -> Result<PairingReport> {
    let field = ctx.field();
    let (np, ne, nv) = (ctx.p.dim(), ctx.e.dim(), ctx.v.dim());
    let mut values_in_v = true;
    // table[k][i] = ⟨p_i, α_k⟩ in V-coordinates.
    let mut table: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(ne);
    for alpha in ctx.e.basis() {
        let mut row = Vec::with_capacity(np);
        for p in ctx.p.basis() {
            match ctx.v.coordinates(&pair(ctx, p, alpha))? {
                Some(c) => row.push(c),
                None => {
                    values_in_v = false;
                    row.push(vec![field.zero(); nv]);
                }
            }
        }
        table.push(row);
    }
    let one = ctx.a().unit().to_vec();
    let unit = pair(ctx, &ctx.one_b(), &LinMap::identity(ctx.a().dim(), field)) == one;

    // Φ(α) as a map P -> V.
    let phi: Vec<LinMap> =
        table.iter().map(|row| LinMap { src: np, dst: nv, field, cols: row.iter().map(|c| sparse_from_dense(c)).collect() }).collect();
    let stacked_p = LinMap {
        src: np,
        dst: nv * ne,
        field,
        cols: (0..np)
            .map(|i| {
                table
                    .iter()
                    .enumerate()
                    .flat_map(|(k, row)| sparse_from_dense(&row[i]).into_iter().map(move |(r, x)| (k * nv + r, x)))
                    .collect()
            })
            .collect(),
    };
    let left_nondegenerate = stacked_p.rank() == np;
    let flat = MapSpace::new(np, nv, field, &phi);
    let right_nondegenerate = flat.dim() == ne;

    let pm = Bimodule { dim: np, field, left: v_on_p(ctx)?, right: vec![] };
    let vm = Bimodule { dim: nv, field, left: v_on_v(ctx)?, right: vec![] };
    let dual = MapSpace::new(np, nv, field, &hom_space(&pm, &vm)?);
    let induces_iso = values_in_v && phi.iter().all(|f| dual.contains(f)) && flat.dim() == ne && ne == dual.dim();

    let inverse_round_trip = match qb {
        Some(qb) => {
            right_quasibases(qb)?;
            let u_coords = qb.elems.iter().map(|u| coords(&ctx.p, u, "quasibase element")).collect::<Result<Vec<_>>>()?;
            let psi = |f: &LinMap| -> LinMap {
                let mut out = LinMap::zero(ctx.a().dim(), ctx.a().dim(), field);
                for (g, u) in qb.maps.iter().zip(&u_coords) {
                    let fu = ctx.v.combine(&f.apply(u));
                    out = out.add(&ctx.a().right_mul(&fu).compose(g));
                }
                out
            };
            let back = ctx.e.basis().iter().zip(&phi).all(|(alpha, f)| psi(f) == *alpha);
            let forth = dual.basis().iter().all(|f| {
                let alpha = psi(f);
                let g = ctx.p.basis().iter().map(|p| ctx.v.coordinates(&pair(ctx, p, &alpha)).ok().flatten());
                g.zip(&f.cols).all(|(x, col)| x.map(|x| sparse_from_dense(&x) == *col).unwrap_or(false))
            });
            Some(back && forth)
        }
        None => None,
    };
    let hash = vecs_hash(&table.iter().flatten().cloned().collect::<Vec<_>>());
    Ok(PairingReport {
        dim_p: np,
        dim_e: ne,
        dim_dual: dual.dim(),
        unit,
        values_in_v,
        left_nondegenerate,
        right_nondegenerate,
        induces_iso,
        inverse_round_trip,
        hash,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoringReport {
    pub dim_p: usize,
    /// `dim (A ⊗_B A ⊗_B A)^C`, the model of `P ⊗_V P`.
    pub dim_w3: usize,
    /// `p = Σ_i p¹γ_i(p²) u_i` with every `p¹γ_i(p²) ∈ V`.
    pub dual_basis: bool,
    /// `p¹ ⊗ γ_i(p²) ∈ P`.
    pub sweedler_in_p: bool,
    /// `P ⊗_V P -> W3` and the quasibase inverse compose to the identity.
    pub identification: bool,
    /// `Δ(p) = p¹ ⊗ 1 ⊗ p²` lies in `W3` and matches the Sweedler form.
    pub coproduct: bool,
    pub counit_in_v: bool,
    pub counit_laws: bool,
    pub coassociative: bool,
    /// `Δ(g_P) = g_P ⊗ g_P`, `ε(g_P) = 1`.
    pub grouplike: bool,
    /// `⟨-,α⟩ * ⟨-,β⟩ = ⟨-, α∘β⟩` on the checked triples.
    pub dual_ring: bool,
    pub dual_ring_triples: usize,
}

impl CoringReport {
    pub fn passed(&self) -> bool {
        self.dual_basis
            && self.sweedler_in_p
            && self.identification
            && self.coproduct
            && self.counit_in_v
            && self.counit_laws
            && self.coassociative
            && self.grouplike
            && self.dual_ring
    }
}

/// `Γ(y) = Σ_i γ_i(y) u_i ∈ A ⊗_B A` for every basis element `y`.
fn gamma_table(ctx: &DepthContext, qb: &QuasibaseSet) -> Vec<Vec<Scalar>> {
    let a = ctx.a();
    let acts: Vec<LinMap> = qb.elems.iter().map(|u| crate::depth::element_action(a, &ctx.ab, u, Side::Right)).collect();
    (0..a.dim())
        .map(|b| {
            let mut out = vec![a.field().zero(); ctx.ab.dim()];
            for (g, act) in qb.maps.iter().zip(&acts) {
                let y = g.apply(&a.basis_vec(b));
                dense_axpy(&mut out, &a.field().one(), &act.apply(&y));
            }
            out
        })
        .collect()
}

/// The coring `(P, Δ, ε)` over `V`, with `P ⊗_V P` identified with
/// `W3 = (A ⊗_B A ⊗_B A)^C`.
pub fn coring_on_p(ctx: &DepthContext, qb: &QuasibaseSet) -> Result<CoringReport> {
    right_quasibases(qb)?;
    let a = ctx.a();
    let field = ctx.field();
    let one = a.unit().to_vec();
    let ab = &ctx.ab;
    let tp = TensorPower::new(a, &ctx.b_gens, 3);
    let t3 = tp.level(3);
    let pairs: Vec<(LinMap, LinMap)> = ctx.c_gens.iter().map(|c| (tp.left_mul(3, c), tp.right_mul(3, c))).collect();
    let w3 = crate::bimodule::centralizer(t3.dim(), field, &pairs);
    let gamma = gamma_table(ctx, qb);
    let class3 = |t: &[usize]| tp.basis_class(t);
    let mu = ab.multiplication(a);
    let eps = |p: &[Scalar]| mu.apply(p);

    // f_i(p) = p¹ γ_i(p²) and the Sweedler components p¹ ⊗ γ_i(p²).
    let mut dual_basis = true;
    let mut sweedler_in_p = true;
    let id = LinMap::identity(a.dim(), field);
    let act_v = |v: &[Scalar], u: &[Scalar]| ab.map_pair(&a.left_mul(v), &id, ab).apply(u);
    let right_v = |p: &[Scalar], v: &[Scalar]| ab.map_pair(&id, &a.right_mul(v), ab).apply(p);
    let comps: Vec<Vec<Vec<Scalar>>> =
        ctx.p.basis().iter().map(|p| qb.maps.iter().map(|g| super::apply_right_factor(ab, g, p)).collect()).collect();
    let mut counit_in_v = true;
    let mut counit_laws = true;
    for (p, cs) in ctx.p.basis().iter().zip(&comps) {
        let mut acc = vec![field.zero(); ab.dim()];
        let mut acc2 = vec![field.zero(); ab.dim()];
        for (c, u) in cs.iter().zip(&qb.elems) {
            if !ctx.p.contains(c) {
                sweedler_in_p = false;
            }
            let f = eps(c);
            if !ctx.v.contains(&f) {
                dual_basis = false;
            }
            dense_axpy(&mut acc, &field.one(), &act_v(&f, u));
            dense_axpy(&mut acc2, &field.one(), &right_v(c, &eps(u)));
        }
        if acc != *p {
            dual_basis = false;
        }
        if !ctx.v.contains(&eps(p)) {
            counit_in_v = false;
        }
        // (ε ⊗ id)Δ = id is the dual-basis identity; (id ⊗ ε)Δ = id:
        if acc != *p || acc2 != *p {
            counit_laws = false;
        }
    }

    // φψ = id on W3: w¹ ⊗ w² Γ(w³)¹ ⊗ Γ(w³)².
    let join_gamma = |w: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![field.zero(); t3.dim()];
        for (t, c) in tp.expand(3, w) {
            for (k, l, d) in ab.terms(&gamma[t[2]]) {
                for (m, x) in a.mul_basis(t[1], k) {
                    let s = c.mul(&d).mul(x);
                    for (q, y) in class3(&[t[0], *m, l]) {
                        out[q].add_mul_assign(&s, &y);
                    }
                }
            }
        }
        out
    };
    let w_idx = sample_indices(w3.dim(), EXHAUSTIVE_LIMIT / 10);
    let identification = dual_basis && w_idx.iter().all(|&k| join_gamma(&w3.basis()[k]) == w3.basis()[k]);

    // Δ(p) = p¹ ⊗ 1 ⊗ p² versus the Sweedler form Σ p¹ ⊗ Γ(p²).
    let unit_terms = sparse_from_dense(&one);
    let insert_one = |p: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![field.zero(); t3.dim()];
        for (i, j, c) in ab.terms(p) {
            for (m, x) in &unit_terms {
                let s = c.mul(x);
                for (q, y) in class3(&[i, *m, j]) {
                    out[q].add_mul_assign(&s, &y);
                }
            }
        }
        out
    };
    let prepend = |i: usize, v: &[Scalar], c: &Scalar, out: &mut Vec<Scalar>| {
        for (k, l, d) in ab.terms(v) {
            let s = c.mul(&d);
            for (q, y) in class3(&[i, k, l]) {
                out[q].add_mul_assign(&s, &y);
            }
        }
    };
    let sweedler = |p: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![field.zero(); t3.dim()];
        for (i, j, c) in ab.terms(p) {
            prepend(i, &gamma[j], &c, &mut out);
        }
        out
    };
    let coproduct = ctx.p.basis().iter().all(|p| {
        let d = insert_one(p);
        w3.contains(&d) && sweedler(p) == d
    });

    // Coassociativity: for every y, Σ_i Γ(γ_i(y)) u_i and Σ_i γ_i(y)u_i¹ ⊗ Γ(u_i²)
    // both equal 1 ⊗ 1 ⊗ y in A ⊗_B A ⊗_B A.
    let gamma_of = |y: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![field.zero(); ab.dim()];
        for (b, c) in y.iter().enumerate() {
            if !c.is_zero() {
                dense_axpy(&mut out, c, &gamma[b]);
            }
        }
        out
    };
    let mut coassociative = true;
    for b in 0..a.dim() {
        let eb = a.basis_vec(b);
        let target = tp.pure(&[one.clone(), one.clone(), eb.clone()]);
        let mut lhs = vec![field.zero(); t3.dim()];
        let mut rhs = vec![field.zero(); t3.dim()];
        for (g, u) in qb.maps.iter().zip(&qb.elems) {
            let y = g.apply(&eb);
            let gy = gamma_of(&y);
            let ut = ab.terms(u);
            for (k, l, d) in ab.terms(&gy) {
                for (u1, u2, e) in &ut {
                    for (m, x) in a.mul_basis(l, *u1) {
                        let s = d.mul(e).mul(x);
                        for (q, z) in class3(&[k, *m, *u2]) {
                            lhs[q].add_mul_assign(&s, &z);
                        }
                    }
                }
            }
            for (u1, u2, e) in &ut {
                let left = a.mul(&y, &a.basis_vec(*u1));
                for (m, x) in sparse_from_dense(&left) {
                    prepend(m, &gamma[*u2], &e.mul(&x), &mut rhs);
                }
            }
        }
        if lhs != target || rhs != target {
            coassociative = false;
            break;
        }
    }

    let g_p = ctx.one_b();
    let grouplike = eps(&g_p) == one && sweedler(&g_p) == tp.pure(&[one.clone(), one.clone(), one.clone()]);

    // (f * g)(p) = Σ_i ⟨p¹ ⊗ γ_i(p²)⟨u_i, β⟩, α⟩ against ⟨p, α∘β⟩.
    let (np, ne) = (ctx.p.dim(), ctx.e.dim());
    let idx = sample_indices(np * ne * ne, EXHAUSTIVE_LIMIT / 4);
    let eb = ctx.e.basis();
    let mut dual_ring = true;
    for &k in &idx {
        let (pi, rest) = (k % np, k / np);
        let (ai, bi) = (rest % ne, rest / ne);
        let (p, alpha, beta) = (&ctx.p.basis()[pi], &eb[ai], &eb[bi]);
        let mut lhs = a.zero_vec();
        for (c, u) in comps[pi].iter().zip(&qb.elems) {
            let v = pair(ctx, u, beta);
            dense_axpy(&mut lhs, &field.one(), &pair(ctx, &right_v(c, &v), alpha));
        }
        if lhs != pair(ctx, p, &alpha.compose(beta)) {
            dual_ring = false;
            break;
        }
    }

    Ok(CoringReport {
        dim_p: np,
        dim_w3: w3.dim(),
        dual_basis,
        sweedler_in_p,
        identification,
        coproduct,
        counit_in_v,
        counit_laws,
        coassociative,
        grouplike,
        dual_ring,
        dual_ring_triples: idx.len(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PregaloisReport {
    /// `_V P` is a direct summand of a power of `_V V`.
    pub p_projective: bool,
    pub dim_avp: usize,
    pub dim_aba: usize,
    /// `κ: a ⊗ p ↦ a p¹ ⊗ p²` is left `A`-linear and bijective.
    pub kappa_bijective: bool,
    /// `β(a ⊗ a') = Σ a γ_i(a') ⊗ u_i` and `κ` are mutually inverse.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_inverse: Option<bool>,
    /// `β(1 ⊗ 1) = 1 ⊗ g_P`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_unit: Option<bool>,
}

impl PregaloisReport {
    /// The two conditions characterizing right depth three.
    pub fn characterizes_rd3(&self) -> bool {
        self.p_projective && self.kappa_bijective
    }

    pub fn passed(&self) -> bool {
        self.characterizes_rd3() && self.beta_inverse != Some(false) && self.beta_unit != Some(false)
    }
}

struct AvP {
    t: BalancedTensor,
    kappa: LinMap,
}

fn avp(ctx: &DepthContext) -> Result<AvP> {
    let a = ctx.a();
    let field = ctx.field();
    let vp = v_on_p(ctx)?;
    let pairs: Vec<(LinMap, LinMap)> = ctx.v_generators().iter().map(|v| a.right_mul(v)).zip(vp).collect();
    let t = BalancedTensor::new(a.dim(), ctx.p.dim(), field, &pairs);
    let id = LinMap::identity(a.dim(), field);
    let cols = (0..t.dim())
        .map(|q| {
            let (i, j) = t.section(q);
            let lam = ctx.ab.map_pair(&a.left_mul(&a.basis_vec(i)), &id, &ctx.ab);
            sparse_from_dense(&lam.apply(&ctx.p.basis()[j]))
        })
        .collect();
    Ok(AvP { kappa: LinMap { src: t.dim(), dst: ctx.ab.dim(), field, cols }, t })
}

/// The quasibase-free half: `_V P` projective and `A ⊗_V P -> A ⊗_B A`
/// bijective.
pub fn pregalois_natural(ctx: &DepthContext) -> Result<PregaloisReport> {
    let field = ctx.field();
    let pm = Bimodule { dim: ctx.p.dim(), field, left: v_on_p(ctx)?, right: vec![] };
    let vm = Bimodule { dim: ctx.v.dim(), field, left: v_on_v(ctx)?, right: vec![] };
    let p_projective = summand_of_power(&pm, &vm)?.0;
    let m = avp(ctx)?;
    let a = ctx.a();
    let left_linear = a.generators().iter().all(|x| {
        let lt = m.t.map_pair(&a.left_mul(x), &LinMap::identity(ctx.p.dim(), field), &m.t);
        let lb = ctx.ab.map_pair(&a.left_mul(x), &LinMap::identity(a.dim(), field), &ctx.ab);
        m.kappa.compose(&lt) == lb.compose(&m.kappa)
    });
    let kappa_bijective = left_linear && m.t.dim() == ctx.ab.dim() && m.kappa.rank() == ctx.ab.dim();
    Ok(PregaloisReport { p_projective, dim_avp: m.t.dim(), dim_aba: ctx.ab.dim(), kappa_bijective, beta_inverse: None, beta_unit: None })
}

/// The pre-Galois map `β: A ⊗_B A -> A ⊗_V P` built from right quasibases,
/// checked against its inverse `κ`, together with the natural half.
pub fn pregalois(ctx: &DepthContext, qb: &QuasibaseSet) -> Result<PregaloisReport> {
    right_quasibases(qb)?;
    let mut rep = pregalois_natural(ctx)?;
    let a = ctx.a();
    let field = ctx.field();
    let m = avp(ctx)?;
    let u_coords = qb.elems.iter().map(|u| coords(&ctx.p, u, "quasibase element")).collect::<Result<Vec<_>>>()?;
    let beta_pair = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![field.zero(); m.t.dim()];
        for (g, u) in qb.maps.iter().zip(&u_coords) {
            let left = a.mul(x, &g.apply(y));
            dense_axpy(&mut out, &field.one(), &m.t.tensor(&left, u));
        }
        out
    };
    let cols = (0..ctx.ab.dim())
        .map(|q| {
            let (i, j) = ctx.ab.section(q);
            sparse_from_dense(&beta_pair(&a.basis_vec(i), &a.basis_vec(j)))
        })
        .collect();
    let beta = LinMap { src: ctx.ab.dim(), dst: m.t.dim(), field, cols };
    rep.beta_inverse = Some(beta.compose(&m.kappa).is_identity() && m.kappa.compose(&beta).is_identity());
    let one = a.unit();
    let gp = coords(&ctx.p, &ctx.one_b(), "g_P")?;
    rep.beta_unit = Some(beta_pair(one, one) == m.t.tensor(one, &gp));
    Ok(rep)
}
