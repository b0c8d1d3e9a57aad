//! Direct-summand-of-a-power decisions and the depth verdicts built on
//! them, quasibase extraction and verification, and the endomorphism-ring
//! tower.
//!
//! `M ⊕ * ≅ N^k` for some `k` exactly when `id_M` lies in the span of the
//! composites `f ∘ g` with `f: N -> M`, `g: M -> N` bimodule maps. The test
//! runs block by block over the support-connected pieces of `M`, and the
//! identity only needs checking on a bimodule generating set of each block.

use serde::Serialize;

use crate::algebra::{Algebra, AlgebraMap, Tower};
use crate::bimodule::{hom_space, Bimodule, MapSpace};
use crate::builders::FrobeniusSystem;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{sparse_from_dense, LinMap, LinearSystem, SparseVec};
use crate::tensor::BalancedTensor;

/// Maps `f_i: N -> M`, `g_i: M -> N` with `Σ f_i ∘ g_i = id_M`.
#[derive(Clone, Debug)]
pub struct SummandCertificate {
    pub fs: Vec<LinMap>,
    pub gs: Vec<LinMap>,
}

impl SummandCertificate {
    pub fn count(&self) -> usize {
        self.fs.len()
    }

    /// Re-checks that every map is a bimodule map and that the composites
    /// sum to the identity.
    pub fn verify(&self, m: &Bimodule, n: &Bimodule) -> bool {
        if self.fs.len() != self.gs.len() {
            return false;
        }
        if !self.fs.iter().all(|f| n.is_map_to(f, m)) || !self.gs.iter().all(|g| m.is_map_to(g, n)) {
            return false;
        }
        let mut sum = LinMap::zero(m.dim, m.dim, m.field);
        for (f, g) in self.fs.iter().zip(&self.gs) {
            sum = sum.add(&f.compose(g));
        }
        sum.is_identity() || (m.dim == 0 && sum.is_zero())
    }
}

/// Decides `M ⊕ * ≅ N^k` and returns a certificate when it holds.
pub fn summand_of_power(m: &Bimodule, n: &Bimodule) -> Result<(bool, Option<SummandCertificate>)> {
    m.same_algebras(n)?;
    let field = m.field;
    let mut fs = Vec::new();
    let mut gs = Vec::new();
    for block in m.blocks() {
        let mj = m.restrict(&block);
        let h1 = hom_space(n, &mj)?;
        let h2 = hom_space(&mj, n)?;
        if h1.is_empty() || h2.is_empty() {
            return Ok((false, None));
        }
        let gens = mj.generating_set();
        let (n1, n2) = (h1.len(), h2.len());
        // Column (a, b) holds f_a(g_b(x)) stacked over the generators x.
        let mut sys = LinearSystem::new(n1 * n2, field);
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); gens.len() * mj.dim];
        for (gi, x) in gens.iter().enumerate() {
            for (b, g) in h2.iter().enumerate() {
                let y = g.apply_sparse(x);
                if y.is_empty() {
                    continue;
                }
                for (a, f) in h1.iter().enumerate() {
                    for (t, v) in f.apply_sparse(&y) {
                        rows[gi * mj.dim + t].push((a * n2 + b, v));
                    }
                }
            }
        }
        for (gi, x) in gens.iter().enumerate() {
            for t in 0..mj.dim {
                let rhs = x.iter().find(|e| e.0 == t).map(|e| e.1.clone()).unwrap_or_else(|| field.zero());
                let row = std::mem::take(&mut rows[gi * mj.dim + t]);
                sys.push(crate::bimodule::merge(row), rhs);
            }
        }
        let Some(c) = sys.solve().particular else {
            return Ok((false, None));
        };
        for (k, coef) in c.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let (a, b) = (k / n2, k % n2);
            fs.push(embed_target(&h1[a].scale(coef), &block, m.dim));
            gs.push(embed_source(&h2[b], &block, m.dim));
        }
    }
    let cert = SummandCertificate { fs, gs };
    if !cert.verify(m, n) {
        return Err(Error::Invariant("summand certificate fails re-verification".into()));
    }
    Ok((true, Some(cert)))
}

/// Extends `f: N -> M_block` to `N -> M`.
fn embed_target(f: &LinMap, block: &[usize], dim: usize) -> LinMap {
    let cols = f.cols.iter().map(|c| c.iter().map(|(i, x)| (block[*i], x.clone())).collect()).collect();
    LinMap { src: f.src, dst: dim, field: f.field, cols }
}

/// Extends `g: M_block -> N` by zero to `M -> N`.
fn embed_source(g: &LinMap, block: &[usize], dim: usize) -> LinMap {
    let mut cols = vec![Vec::new(); dim];
    for (k, &i) in block.iter().enumerate() {
        cols[i] = g.cols[k].clone();
    }
    LinMap { src: dim, dst: g.dst, field: g.field, cols }
}

/// Which side a depth condition or quasibase refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

/// `A ⊗_B A` with `B` given by generators inside `A`.
pub fn tensor_square(a: &Algebra, b_gens: &[Vec<Scalar>]) -> BalancedTensor {
    BalancedTensor::over(a, b_gens)
}

/// The pair of bimodules compared by the depth-three test on `side`:
/// `A ⊗_B A` and `A`, as `A`–`C` (right) or `C`–`A` (left) bimodules.
pub fn d3_bimodules(a: &Algebra, t: &BalancedTensor, c_gens: &[Vec<Scalar>], side: Side) -> (Bimodule, Bimodule) {
    let ag = a.generators().to_vec();
    match side {
        Side::Right => (t.bimodule(a, &ag, c_gens), Bimodule::regular(a, &ag, c_gens)),
        Side::Left => (t.bimodule(a, c_gens, &ag), Bimodule::regular(a, c_gens, &ag)),
    }
}

/// Depth-three test for `A ⊇ B ⊇ C` given by generators in `A`.
pub fn d3(a: &Algebra, b_gens: &[Vec<Scalar>], c_gens: &[Vec<Scalar>], side: Side) -> Result<bool> {
    let t = tensor_square(a, b_gens);
    let (m, n) = d3_bimodules(a, &t, c_gens, side);
    Ok(summand_of_power(&m, &n)?.0)
}

pub fn is_rd3(t: &Tower) -> Result<bool> {
    d3(&t.a, &t.b_gens_in_a(), &t.c_gens_in_a(), Side::Right)
}

pub fn is_ld3(t: &Tower) -> Result<bool> {
    d3(&t.a, &t.b_gens_in_a(), &t.c_gens_in_a(), Side::Left)
}

/// Both sides.
pub fn is_d3(t: &Tower) -> Result<bool> {
    Ok(is_rd3(t)? && is_ld3(t)?)
}

/// `A | B` right depth two, `B` given by generators in `A`.
pub fn is_rd2(a: &Algebra, b_gens: &[Vec<Scalar>]) -> Result<bool> {
    d3(a, b_gens, b_gens, Side::Right)
}

pub fn is_ld2(a: &Algebra, b_gens: &[Vec<Scalar>]) -> Result<bool> {
    d3(a, b_gens, b_gens, Side::Left)
}

/// `A ⊕ * ≅ (A ⊗_B A)^k` as `A`–`C` bimodules. Always true, the
/// multiplication map being split by `a ↦ a ⊗ 1`.
pub fn reverse_summand(t: &Tower) -> Result<bool> {
    let sq = tensor_square(&t.a, &t.b_gens_in_a());
    let (m, n) = d3_bimodules(&t.a, &sq, &t.c_gens_in_a(), Side::Right);
    Ok(summand_of_power(&n, &m)?.0)
}

/// `_B A` finitely generated projective (a summand of a power of `_B B`).
pub fn is_left_projective(a: &Algebra, b: &Algebra, ba: &AlgebraMap) -> Result<bool> {
    let bg: Vec<Vec<Scalar>> = b.generators().iter().map(|g| ba.apply(g)).collect();
    let m = Bimodule::regular(a, &bg, &[]);
    let n = Bimodule::regular(b, b.generators(), &[]);
    Ok(summand_of_power(&m, &n)?.0)
}

/// `A_B` finitely generated projective.
pub fn is_right_projective(a: &Algebra, b: &Algebra, ba: &AlgebraMap) -> Result<bool> {
    let bg: Vec<Vec<Scalar>> = b.generators().iter().map(|g| ba.apply(g)).collect();
    let m = Bimodule::regular(a, &[], &bg);
    let n = Bimodule::regular(b, &[], b.generators());
    Ok(summand_of_power(&m, &n)?.0)
}

/// `B | C` separable: some `e ∈ (B ⊗_C B)^B` has `μ(e) = 1`.
pub fn is_separable(b: &Algebra, c_gens: &[Vec<Scalar>]) -> Result<bool> {
    Ok(separability_element(b, c_gens)?.is_some())
}

/// A separability element in quotient coordinates of `B ⊗_C B`.
pub fn separability_element(b: &Algebra, c_gens: &[Vec<Scalar>]) -> Result<Option<Vec<Scalar>>> {
    let t = BalancedTensor::over(b, c_gens);
    let bg = b.generators().to_vec();
    let bm = t.bimodule(b, &bg, &bg);
    let cent = crate::bimodule::bimodule_centralizer(&bm)?;
    let mu = t.multiplication(b);
    // Solve μ(Σ λ_k e_k) = 1 over the centralizer basis.
    let cols: Vec<Vec<Scalar>> = cent.basis().iter().map(|e| mu.apply(e)).collect();
    let mat = crate::linalg::Matrix::from_columns(&cols, b.dim(), b.field());
    let sol = mat.solve(b.unit())?;
    Ok(sol.particular.map(|lam| cent.combine(&lam)))
}

/// `B | C` H-separable: `B ⊗_C B ⊕ * ≅ B^n` as `B`–`B` bimodules.
pub fn is_h_separable(b: &Algebra, c_gens: &[Vec<Scalar>]) -> Result<bool> {
    let t = BalancedTensor::over(b, c_gens);
    let bg = b.generators().to_vec();
    let m = t.bimodule(b, &bg, &bg);
    let n = Bimodule::regular(b, &bg, &bg);
    Ok(summand_of_power(&m, &n)?.0)
}

/// Quasibases: on the right `γ_i ∈ End _B A_C`, `u_i ∈ (A ⊗_B A)^C` with
/// `x ⊗ y = Σ x γ_i(y) u_i`; on the left `β_j ∈ End _C A_B`,
/// `t_j ∈ (A ⊗_B A)^C` with `x ⊗ y = Σ t_j β_j(x) y`.
#[derive(Clone, Debug)]
pub struct QuasibaseSet {
    pub side: Side,
    /// `γ_i` or `β_j`, as endomorphisms of `A`.
    pub maps: Vec<LinMap>,
    /// `u_i` or `t_j`, in quotient coordinates of `A ⊗_B A`.
    pub elems: Vec<Vec<Scalar>>,
}

impl QuasibaseSet {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

/// Outcome of checking a quasibase set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum QuasibaseStatus {
    Verified,
    /// Map `index` is not a bimodule endomorphism of the required kind.
    MapNotInEnd {
        index: usize,
    },
    /// Element `index` does not commute with `C`.
    ElementNotCentralized {
        index: usize,
    },
    /// The defining identity fails on basis elements `(x, y)`.
    IdentityFails {
        x: usize,
        y: usize,
    },
}

impl QuasibaseStatus {
    pub fn is_verified(&self) -> bool {
        *self == QuasibaseStatus::Verified
    }
}

/// Extracts quasibases from a summand certificate of `A ⊗_B A` in `A^N`.
pub fn extract_quasibases(t: &Tower, side: Side) -> Result<QuasibaseSet> {
    let sq = tensor_square(&t.a, &t.b_gens_in_a());
    let (m, n) = d3_bimodules(&t.a, &sq, &t.c_gens_in_a(), side);
    let (holds, cert) = summand_of_power(&m, &n)?;
    let cert = match (holds, cert) {
        (true, Some(c)) => c,
        _ => {
            let name = if side == Side::Right { "right depth three" } else { "left depth three" };
            return Err(Error::NotDepth(name.into()));
        }
    };
    let a = &t.a;
    let one = a.unit().to_vec();
    let elems: Vec<Vec<Scalar>> = cert.fs.iter().map(|f| f.apply(&one)).collect();
    let maps: Vec<LinMap> = cert
        .gs
        .iter()
        .map(|g| {
            let cols = (0..a.dim())
                .map(|j| {
                    let e = a.basis_vec(j);
                    let pure = match side {
                        Side::Right => sq.tensor(&one, &e),
                        Side::Left => sq.tensor(&e, &one),
                    };
                    sparse_from_dense(&g.apply(&pure))
                })
                .collect();
            LinMap { src: a.dim(), dst: a.dim(), field: a.field(), cols }
        })
        .collect();
    let qb = QuasibaseSet { side, maps, elems };
    let status = verify_quasibases(t, &qb)?;
    if !status.is_verified() {
        return Err(Error::Invariant(format!("extracted quasibases fail verification: {status:?}")));
    }
    Ok(qb)
}

/// Checks membership of every quasibase component and the defining
/// identity on all basis pairs.
pub fn verify_quasibases(t: &Tower, qb: &QuasibaseSet) -> Result<QuasibaseStatus> {
    let a = &t.a;
    let d = a.dim();
    let bg = t.b_gens_in_a();
    let cg = t.c_gens_in_a();
    let sq = tensor_square(a, &bg);
    let (left_gens, right_gens) = match qb.side {
        Side::Right => (&bg, &cg),
        Side::Left => (&cg, &bg),
    };
    for (i, f) in qb.maps.iter().enumerate() {
        if f.src != d || f.dst != d {
            return Err(Error::DimensionMismatch { expected: d, got: f.src });
        }
        let ok = left_gens.iter().all(|x| {
            let l = a.left_mul(x);
            f.compose(&l) == l.compose(f)
        }) && right_gens.iter().all(|x| {
            let r = a.right_mul(x);
            f.compose(&r) == r.compose(f)
        });
        if !ok {
            return Ok(QuasibaseStatus::MapNotInEnd { index: i });
        }
    }
    let id = LinMap::identity(d, a.field());
    let lc: Vec<LinMap> = cg.iter().map(|c| sq.map_pair(&a.left_mul(c), &id, &sq)).collect();
    let rc: Vec<LinMap> = cg.iter().map(|c| sq.map_pair(&id, &a.right_mul(c), &sq)).collect();
    for (i, u) in qb.elems.iter().enumerate() {
        if u.len() != sq.dim() {
            return Err(Error::DimensionMismatch { expected: sq.dim(), got: u.len() });
        }
        if lc.iter().zip(&rc).any(|(l, r)| l.apply(u) != r.apply(u)) {
            return Ok(QuasibaseStatus::ElementNotCentralized { index: i });
        }
    }
    // act[i]: a ↦ a·u_i (right side) or a ↦ t_i·a (left side), A -> A ⊗_B A.
    let act: Vec<LinMap> = qb.elems.iter().map(|u| element_action(a, &sq, u, qb.side)).collect();
    for x in 0..d {
        for y in 0..d {
            let (ex, ey) = (a.basis_vec(x), a.basis_vec(y));
            let mut sum = vec![a.field().zero(); sq.dim()];
            for (f, w) in qb.maps.iter().zip(&act) {
                let coef = match qb.side {
                    Side::Right => a.mul(&ex, &f.apply(&ey)),
                    Side::Left => a.mul(&f.apply(&ex), &ey),
                };
                crate::linalg::dense_axpy(&mut sum, &a.field().one(), &w.apply(&coef));
            }
            if sum != sq.tensor(&ex, &ey) {
                return Ok(QuasibaseStatus::IdentityFails { x, y });
            }
        }
    }
    Ok(QuasibaseStatus::Verified)
}

/// `a ↦ a·u` (`Side::Right`) or `a ↦ u·a` (`Side::Left`) from `A` to
/// `A ⊗_B A`.
pub fn element_action(a: &Algebra, sq: &BalancedTensor, u: &[Scalar], side: Side) -> LinMap {
    let terms = sq.terms(u);
    let cols = (0..a.dim())
        .map(|k| {
            let mut acc = vec![a.field().zero(); sq.dim()];
            for (i, j, c) in &terms {
                let (l, r): (SparseVec, SparseVec) = match side {
                    Side::Right => (a.mul_basis(k, *i).clone(), vec![(*j, a.field().one())]),
                    Side::Left => (vec![(*i, a.field().one())], a.mul_basis(*j, k).clone()),
                };
                crate::linalg::dense_axpy(&mut acc, c, &sq.tensor_sparse(&l, &r));
            }
            sparse_from_dense(&acc)
        })
        .collect();
    LinMap { src: a.dim(), dst: sq.dim(), field: a.field(), cols }
}

/// `End A_B` as a natural `A`–`C` bimodule, `(a·f·c)(x) = a f(c x)`,
/// together with its basis.
pub fn end_right_b_as_a_c(t: &Tower) -> Result<(MapSpace, Bimodule)> {
    let a = &t.a;
    let bg = t.b_gens_in_a();
    let ab = Bimodule::regular(a, &[], &bg);
    let maps = hom_space(&ab, &ab)?;
    let space = MapSpace::new(a.dim(), a.dim(), a.field(), &maps);
    let invariant = || Error::Invariant("End A_B is not closed under the A–C actions".into());
    let left = a
        .generators()
        .iter()
        .map(|x| {
            let l = a.left_mul(x);
            space.operator(|f| l.compose(f)).ok_or_else(invariant)
        })
        .collect::<Result<Vec<_>>>()?;
    let right = t
        .c_gens_in_a()
        .iter()
        .map(|x| {
            let l = a.left_mul(x);
            space.operator(|f| f.compose(&l)).ok_or_else(invariant)
        })
        .collect::<Result<Vec<_>>>()?;
    let dim = space.dim();
    Ok((space, Bimodule { dim, field: a.field(), left, right }))
}

/// Left depth three through `End A_B ⊕ * ≅ A^N` as `A`–`C` bimodules,
/// valid when `A_B` is finitely generated projective.
pub fn is_ld3_via_endo(t: &Tower) -> Result<bool> {
    if !is_right_projective(&t.a, &t.b, &t.ba)? {
        return Err(Error::Precondition("A is not finitely generated projective over B".into()));
    }
    let (_, e) = end_right_b_as_a_c(t)?;
    let n = Bimodule::regular(&t.a, t.a.generators(), &t.c_gens_in_a());
    Ok(summand_of_power(&e, &n)?.0)
}

/// The endomorphism-ring tower `C -> B -> End B_C` with `B` embedded by
/// left multiplication, and the isomorphism `B ⊗_C B -> End B_C`,
/// `x ⊗ y ↦ λ_x ∘ E ∘ λ_y` (columns in the top algebra's basis).
#[derive(Clone, Debug)]
pub struct EndomorphismTower {
    pub tower: Tower,
    pub tensor_iso: LinMap,
}

pub fn endomorphism_tower(b: &Algebra, c: &Algebra, cb: &AlgebraMap, frob: &FrobeniusSystem) -> Result<EndomorphismTower> {
    if !frob.verify(b, c, cb) {
        return Err(Error::Precondition("not a Frobenius system for B | C".into()));
    }
    let field = b.field();
    let cg: Vec<Vec<Scalar>> = c.generators().iter().map(|g| cb.apply(g)).collect();
    let bc = Bimodule::regular(b, &[], &cg);
    let space = MapSpace::new(b.dim(), b.dim(), field, &hom_space(&bc, &bc)?);
    let d = space.dim();
    let outside = || Error::Invariant("map outside End B_C".into());
    let mut mult = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let prod = space.basis()[i].compose(&space.basis()[j]);
            mult[i][j] = sparse_from_dense(&space.coordinates(&prod).ok_or_else(outside)?);
        }
    }
    let unit = space.coordinates(&LinMap::identity(b.dim(), field)).ok_or_else(outside)?;
    let labels = (0..d).map(|k| format!("E{k}")).collect();
    let a = Algebra::new(field, labels, mult, unit, None)?;
    let lambda: Vec<Vec<Scalar>> =
        (0..b.dim()).map(|k| space.coordinates(&b.left_mul(&b.basis_vec(k))).ok_or_else(outside)).collect::<Result<_>>()?;
    let ba = AlgebraMap::new(b, &a, lambda)?;
    let tower = Tower::new(a, b.clone(), c.clone(), ba, cb.clone())?;

    let sq = BalancedTensor::over(b, &cg);
    let e_in_b = cb.as_linmap(field).compose(&frob.e);
    let cols = (0..sq.dim())
        .map(|q| {
            let (i, j) = sq.section(q);
            let f = b.left_mul(&b.basis_vec(i)).compose(&e_in_b).compose(&b.left_mul(&b.basis_vec(j)));
            space.coordinates(&f).map(|v| sparse_from_dense(&v)).ok_or_else(outside)
        })
        .collect::<Result<Vec<_>>>()?;
    let tensor_iso = LinMap { src: sq.dim(), dst: d, field, cols };
    if tensor_iso.src != d || tensor_iso.rank() != d {
        return Err(Error::Invariant("B ⊗_C B -> End B_C is not bijective".into()));
    }
    Ok(EndomorphismTower { tower, tensor_iso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{frobenius_system_group, matrix_algebra, tower_from_chain};
    use crate::field::Field;
    use crate::groups::{FiniteGroup, Perm, SubgroupChain};

    const Q: Field = Field::Rational;

    fn grp(gens: &[&str]) -> FiniteGroup {
        FiniteGroup::from_permutations(&gens.iter().map(|s| Perm::parse(s).unwrap()).collect::<Vec<_>>(), 200).unwrap()
    }

    fn sub(g: &FiniteGroup, gens: &[&str]) -> Vec<usize> {
        g.subgroup_from_perms(&gens.iter().map(|s| Perm::parse(s).unwrap()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn trivial_summands() {
        let a = matrix_algebra(2, Q);
        let g = a.generators().to_vec();
        let m = Bimodule::regular(&a, &g, &g);
        let (ok, cert) = summand_of_power(&m, &m).unwrap();
        assert!(ok && cert.unwrap().verify(&m, &m));
        let z = Bimodule { dim: 0, field: Q, left: vec![LinMap::zero(0, 0, Q); g.len()], right: vec![LinMap::zero(0, 0, Q); g.len()] };
        assert!(summand_of_power(&z, &m).unwrap().0);
    }

    #[test]
    fn s3_over_transposition_is_not_rd3() {
        let g = grp(&["(1 2)", "(1 2 3)"]);
        let t12 = sub(&g, &["(1 2)"]);
        let t = tower_from_chain(&SubgroupChain::new(&g, t12.clone(), t12).unwrap(), Q);
        assert!(!is_rd3(&t).unwrap());
        assert!(!is_ld3(&t).unwrap());
        assert!(reverse_summand(&t).unwrap());
    }

    #[test]
    fn s4_a4_v4_is_d3_with_quasibases() {
        let g = grp(&["(1 2)", "(1 2 3 4)"]);
        let a4 = sub(&g, &["(1 2 3)", "(2 3 4)"]);
        let v4 = sub(&g, &["(1 2)(3 4)", "(1 3)(2 4)"]);
        let t = tower_from_chain(&SubgroupChain::new(&g, a4, v4).unwrap(), Q);
        assert!(is_rd3(&t).unwrap());
        assert!(is_ld3(&t).unwrap());
        for side in [Side::Right, Side::Left] {
            let qb = extract_quasibases(&t, side).unwrap();
            assert!(verify_quasibases(&t, &qb).unwrap().is_verified());
        }
    }

    #[test]
    fn quasibase_perturbations_are_reported() {
        let g = grp(&["(1 2)", "(1 2 3)"]);
        let a3 = sub(&g, &["(1 2 3)"]);
        let t = tower_from_chain(&SubgroupChain::new(&g, a3.clone(), a3).unwrap(), Q);
        let qb = extract_quasibases(&t, Side::Right).unwrap();
        assert!(verify_quasibases(&t, &qb).unwrap().is_verified());

        let mut bad = qb.clone();
        bad.maps[0] = LinMap::from_flat(6, 6, &vec![(1, Q.one())], Q);
        assert_eq!(verify_quasibases(&t, &bad).unwrap(), QuasibaseStatus::MapNotInEnd { index: 0 });

        let sq = tensor_square(&t.a, &t.b_gens_in_a());
        let s = g.index_of(&Perm::parse("(1 2)").unwrap()).unwrap();
        let mut bad = qb.clone();
        bad.elems[0] = sq.tensor(&t.a.basis_vec(s), t.a.unit());
        assert_eq!(verify_quasibases(&t, &bad).unwrap(), QuasibaseStatus::ElementNotCentralized { index: 0 });

        let mut bad = qb;
        bad.maps.pop();
        bad.elems.pop();
        assert!(matches!(verify_quasibases(&t, &bad).unwrap(), QuasibaseStatus::IdentityFails { .. }));
    }

    #[test]
    fn endomorphism_tower_dimensions() {
        let g = grp(&["(1 2)", "(1 2 3)"]);
        let all: Vec<usize> = (0..6).collect();
        let t12 = sub(&g, &["(1 2)"]);
        let a3 = sub(&g, &["(1 2 3)"]);
        for (h, k, dim) in [(a3, vec![0], 9), (all, t12, 18)] {
            let chain = SubgroupChain::new(&g, h, k).unwrap();
            let t = tower_from_chain(&chain, Q);
            let frob = frobenius_system_group(&chain, &t);
            let et = endomorphism_tower(&t.b, &t.c, &t.cb, &frob).unwrap();
            assert_eq!(et.tower.a.dim(), dim);
            assert!(is_rd2(&et.tower.a, &et.tower.c_gens_in_a()).unwrap());
            assert!(is_ld2(&et.tower.a, &et.tower.c_gens_in_a()).unwrap());
        }
    }

    #[test]
    fn projectivity_and_separability() {
        let g = grp(&["(1 2)", "(1 2 3)"]);
        let t12 = sub(&g, &["(1 2)"]);
        let t = tower_from_chain(&SubgroupChain::new(&g, t12, vec![0]).unwrap(), Q);
        assert!(is_left_projective(&t.a, &t.b, &t.ba).unwrap());
        assert!(is_right_projective(&t.a, &t.b, &t.ba).unwrap());
        assert!(is_separable(&t.b, &t.c_gens_in_b()).unwrap());
        assert!(!is_h_separable(&t.a, &t.b_gens_in_a()).unwrap());
        let m2 = matrix_algebra(2, Q);
        assert!(is_h_separable(&m2, &[]).unwrap());
    }
}
