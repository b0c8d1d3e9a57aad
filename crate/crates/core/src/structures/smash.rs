use serde::Serialize;

use super::bialgebroid::{d2_quasibases, sweedler_right};
use super::{maps_hash, sample_indices, DepthContext, EXHAUSTIVE_LIMIT};
use crate::algebra::Algebra;
use crate::bimodule::{hom_space, Bimodule, MapSpace};
use crate::depth::{extract_quasibases, is_ld3, QuasibaseSet, Side};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{dense_axpy, sparse_from_dense, LinMap, Subspace};
use crate::tensor::BalancedTensor;

#[derive(Clone, Debug, Serialize)]
pub struct SmashReport {
    pub dim_end_a_b: usize,
    pub dim_j: usize,
    /// `dim A ⊗_V J`.
    pub dim_smash: usize,
    /// `a ⊗ α ↦ λ_a ∘ α` and `f ↦ Σ_j f(t_j¹)t_j² ⊗ β_j` are mutually inverse.
    pub bijective: bool,
    /// `a ⊗ id ↦ λ_a`.
    pub unit_embedding: bool,
    /// The smash product `(a#α)(b#β) = a(α₍₁₎ ▷ b) # α₍₂₎ ∘ β` agrees with
    /// composition in `End A_B`; present when `A | C` is depth two.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product_matches: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unital: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub associative: Option<bool>,
    pub pairs_checked: usize,
    pub hash: String,
}

impl SmashReport {
    pub fn passed(&self) -> bool {
        self.bijective
            && self.unit_embedding
            && self.product_matches != Some(false)
            && self.unital != Some(false)
            && self.associative != Some(false)
    }
}

/// `A ⊗_V J` with `V` acting on `A` by right and on `J` by left
/// multiplication.
fn a_tensor_j(ctx: &DepthContext) -> Result<BalancedTensor> {
    let a = ctx.a();
    let leaves = || Error::Invariant("V does not act on J".into());
    let pairs = ctx
        .v_generators()
        .iter()
        .map(|v| {
            let lv = ctx.lambda(v);
            Ok((ctx.rho(v), ctx.j.operator(|f| lv.compose(f)).ok_or_else(leaves)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BalancedTensor::new(a.dim(), ctx.j.dim(), a.field(), &pairs))
}

fn j_coords(ctx: &DepthContext, f: &LinMap) -> Result<Vec<Scalar>> {
    ctx.j.coordinates(f).ok_or_else(|| Error::Invariant("map leaves End _C A_B".into()))
}

/// The decomposition `End A_B ≅ A ⊗_V End _C A_B` for a left depth-three
/// tower, with the smash product when `A | C` is depth two.
pub fn smash_decomposition(ctx: &DepthContext, lqb: Option<&QuasibaseSet>) -> Result<SmashReport> {
    let a = ctx.a();
    let (d, field) = (a.dim(), ctx.field());
    let owned;
    let lqb = match lqb {
        Some(q) if q.side == Side::Left => q,
        Some(_) => return Err(Error::Precondition("left depth-three quasibases required".into())),
        None => {
            owned = extract_quasibases(&ctx.tower, Side::Left)?;
            &owned
        }
    };
    let end = ctx.end_right_b()?;
    let aj = a_tensor_j(ctx)?;
    let jb = ctx.j.basis();

    let to_end = |x: &[Scalar]| -> LinMap {
        let mut f = LinMap::zero(d, d, field);
        for (i, j, c) in aj.terms(x) {
            f = f.axpy(&c, &ctx.lambda(&a.basis_vec(i)).compose(&jb[j]));
        }
        f
    };
    let from_end = |f: &LinMap| -> Result<Vec<Scalar>> {
        let mut out = vec![field.zero(); aj.dim()];
        for (beta, t) in lqb.maps.iter().zip(&lqb.elems) {
            let mut x = a.zero_vec();
            for (i, j, c) in ctx.ab.terms(t) {
                dense_axpy(&mut x, &c, &a.mul(&f.apply(&a.basis_vec(i)), &a.basis_vec(j)));
            }
            let y = sparse_from_dense(&j_coords(ctx, beta)?);
            dense_axpy(&mut out, &field.one(), &aj.tensor_sparse(&sparse_from_dense(&x), &y));
        }
        Ok(out)
    };

    let mut bijective = aj.dim() == end.dim();
    let mut images = Vec::with_capacity(aj.dim());
    for q in 0..aj.dim() {
        let mut e = vec![field.zero(); aj.dim()];
        e[q] = field.one();
        let f = to_end(&e);
        bijective &= end.contains(&f) && from_end(&f)? == e;
        images.push(f);
    }
    for f in end.basis() {
        bijective &= to_end(&from_end(f)?) == *f;
    }
    let id = LinMap::identity(d, field);
    let id_j = sparse_from_dense(&j_coords(ctx, &id)?);
    let unit_embedding = (0..d).all(|i| {
        let e = a.basis_vec(i);
        to_end(&aj.tensor_sparse(&sparse_from_dense(&e), &id_j)) == ctx.lambda(&e)
    });

    let n = aj.dim();
    let (mut product_matches, mut unital, mut associative) = (None, None, None);
    let mut pairs_checked = 0;
    match d2_quasibases(ctx) {
        Ok(d2) => {
            // (a#α)(b#β) = Σ_k a γ̃_k(b) # (ũ_k¹α(ũ_k²-)) ∘ β
            let smash = |x: &[Scalar], y: &[Scalar]| -> Result<Vec<Scalar>> {
                let mut out = vec![field.zero(); n];
                let ty = aj.terms(y);
                for (i, j, c) in aj.terms(x) {
                    let sw = sweedler_right(ctx, &d2.right, &jb[j]);
                    for (k, l, e) in &ty {
                        let ce = c.mul(e);
                        for (g, h) in &sw {
                            let left = a.mul(&a.basis_vec(i), &g.apply(&a.basis_vec(*k)));
                            let right = j_coords(ctx, &h.compose(&jb[*l]))?;
                            dense_axpy(&mut out, &ce, &aj.tensor_sparse(&sparse_from_dense(&left), &sparse_from_dense(&right)));
                        }
                    }
                }
                Ok(out)
            };
            let basis = |q: usize| {
                let mut e = vec![field.zero(); n];
                e[q] = field.one();
                e
            };
            let one = aj.tensor_sparse(&sparse_from_dense(a.unit()), &id_j);
            let idx = sample_indices(n * n, EXHAUSTIVE_LIMIT / 4);
            pairs_checked = idx.len();
            let mut pm = true;
            let mut un = true;
            for &k in &idx {
                let (x, y) = (basis(k / n), basis(k % n));
                pm &= smash(&x, &y)? == from_end(&images[k / n].compose(&images[k % n]))?;
            }
            for q in 0..n {
                let x = basis(q);
                un &= smash(&one, &x)? == x && smash(&x, &one)? == x;
            }
            let triples = sample_indices(n * n * n, 200);
            let mut assoc = true;
            for &k in &triples {
                let (x, y, z) = (basis(k / (n * n)), basis((k / n) % n), basis(k % n));
                assoc &= smash(&smash(&x, &y)?, &z)? == smash(&x, &smash(&y, &z)?)?;
            }
            product_matches = Some(pm);
            unital = Some(un);
            associative = Some(assoc);
        }
        Err(Error::NotDepth(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(SmashReport {
        dim_end_a_b: end.dim(),
        dim_j: ctx.j.dim(),
        dim_smash: aj.dim(),
        bijective,
        unit_embedding,
        product_matches,
        unital,
        associative,
        pairs_checked,
        hash: maps_hash(&images),
    })
}

/// `{x ∈ A : α(x) = α(1) x for all α}`.
pub fn fixed_ring(a: &Algebra, maps: &[LinMap]) -> Subspace {
    fixed_by(a, maps, |y| a.left_mul(y))
}

/// `{x ∈ A : α(x) = x α(1) for all α}`.
pub fn fixed_ring_right(a: &Algebra, maps: &[LinMap]) -> Subspace {
    fixed_by(a, maps, |y| a.right_mul(y))
}

fn fixed_by(a: &Algebra, maps: &[LinMap], mul: impl Fn(&[Scalar]) -> LinMap) -> Subspace {
    let one = a.unit();
    let mut sys = crate::linalg::LinearSystem::new(a.dim(), a.field());
    for f in maps {
        let m = f.axpy(&a.field().one().neg(), &mul(&f.apply(one)));
        for row in m.rows() {
            if !row.is_empty() {
                sys.push_homogeneous(row);
            }
        }
    }
    Subspace::span_sparse(a.dim(), a.field(), sys.kernel_sparse())
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantsReport {
    /// `dim A^J`, `J = End _C A_B`.
    pub dim_a_j: usize,
    /// `dim End_E A`, `E = End A_B`.
    pub dim_end_e: usize,
    /// `x ↦ ρ_x` maps `A^J` bijectively onto `End_E A`.
    pub rho_bijective: bool,
    /// `ρ_x ∘ ρ_y = ρ_{yx}`.
    pub anti_hom: bool,
    pub contains_b: bool,
    /// `End_E A = ρ(B)`.
    pub balanced: bool,
    /// For `B = C`: `dim A^S` computed with `α(x) = α(1)x` and with
    /// `α(x) = xα(1)`, and whether `A^S = B` when balanced.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_a_s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_a_s_right: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_s_is_b: Option<bool>,
    pub convention: &'static str,
}

impl InvariantsReport {
    pub fn passed(&self) -> bool {
        self.rho_bijective && self.anti_hom && self.contains_b && self.a_s_is_b != Some(false)
    }
}

/// Invariants of `J` in `A` against the bicommutant `End_E A`.
pub fn invariants(ctx: &DepthContext) -> Result<InvariantsReport> {
    if !is_ld3(&ctx.tower)? {
        return Err(Error::NotDepth("left depth three".into()));
    }
    let a = ctx.a();
    let (d, field) = (a.dim(), ctx.field());
    let a_j = fixed_ring(a, ctx.j.basis());
    let end = ctx.end_right_b()?;
    let module = Bimodule { dim: d, field, left: end.basis().to_vec(), right: vec![] };
    let end_e = MapSpace::new(d, d, field, &hom_space(&module, &module)?);

    let rho_bijective = a_j.dim() == end_e.dim() && a_j.basis().iter().all(|x| end_e.contains(&ctx.rho(x)));
    let ab = a_j.basis();
    let n = ab.len();
    let anti_hom = sample_indices(n * n, EXHAUSTIVE_LIMIT).into_iter().all(|k| {
        let (x, y) = (&ab[k / n], &ab[k % n]);
        ctx.rho(x).compose(&ctx.rho(y)) == ctx.rho(&a.mul(y, x))
    });
    let b = ctx.tower.b_image();
    let contains_b = a_j.contains_subspace(&b);
    let balanced = end_e.dim() == b.dim() && b.basis().iter().all(|x| end_e.contains(&ctx.rho(x)));

    let (mut dim_a_s, mut dim_a_s_right, mut a_s_is_b) = (None, None, None);
    if ctx.tower.c_image() == b {
        let left = fixed_ring(a, ctx.s.basis());
        let right = fixed_ring_right(a, ctx.s.basis());
        dim_a_s = Some(left.dim());
        dim_a_s_right = Some(right.dim());
        if balanced {
            a_s_is_b = Some(right == b);
        }
    }
    Ok(InvariantsReport {
        dim_a_j: a_j.dim(),
        dim_end_e: end_e.dim(),
        rho_bijective,
        anti_hom,
        contains_b,
        balanced,
        dim_a_s,
        dim_a_s_right,
        a_s_is_b,
        convention: "x ↦ ρ_x with ρ_x ∘ ρ_y = ρ_{yx}",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::tower_from_chain;
    use crate::field::Field;
    use crate::groups::{FiniteGroup, Perm, SubgroupChain};

    fn s3_tower(b: &str, c: Option<&str>) -> crate::algebra::Tower {
        let g = FiniteGroup::from_permutations(&[Perm::parse("(1 2)").unwrap(), Perm::parse("(1 2 3)").unwrap()], 200).unwrap();
        let h = g.subgroup_from_perms(&[Perm::parse(b).unwrap()]).unwrap();
        let k = match c {
            Some(c) => g.subgroup_from_perms(&[Perm::parse(c).unwrap()]).unwrap(),
            None => vec![0],
        };
        tower_from_chain(&SubgroupChain::new(&g, h, k).unwrap(), Field::Rational)
    }

    #[test]
    fn smash_decomposition_over_trivial_bottom() {
        let ctx = DepthContext::new(&s3_tower("(1 2 3)", None)).unwrap();
        let r = smash_decomposition(&ctx, None).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.dim_end_a_b, r.dim_smash);
        assert_eq!(r.product_matches, Some(true));
    }

    #[test]
    fn identity_alone_fixes_everything() {
        let ctx = DepthContext::new(&s3_tower("(1 2 3)", None)).unwrap();
        let id = LinMap::identity(6, Field::Rational);
        assert_eq!(fixed_ring(ctx.a(), &[id]).dim(), 6);
    }

    #[test]
    fn normal_subgroup_invariants_recover_b() {
        let ctx = DepthContext::new(&s3_tower("(1 2 3)", Some("(1 2 3)"))).unwrap();
        let r = invariants(&ctx).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.balanced);
        assert_eq!(r.a_s_is_b, Some(true));
        assert_eq!(r.dim_a_j, 3);
    }
}
