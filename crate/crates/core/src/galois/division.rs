use serde::Serialize;

use super::{commutant, map_closure, same_space, subtower, FieldTower, GaloisSubring};
use crate::algebra::{Algebra, Tower};
use crate::bimodule::{Bimodule, MapSpace};
use crate::builders::quaternion_algebra;
use crate::depth::{is_ld2, is_ld3, is_rd2, summand_of_power, verify_quasibases, QuasibaseSet, QuasibaseStatus, Side};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{dense_from_sparse, sparse_from_dense, LinMap, LinearSystem, Subspace};
use crate::structures::{coproduct_on_s, fixed_ring, restrict, sample_indices, DepthContext, EXHAUSTIVE_LIMIT};
use crate::tensor::BalancedTensor;

/// Elements of a box of coordinate vectors: all of `F_p^d`, or coefficients
/// in `-2..=2` over `Q`. Exhaustive up to `EXHAUSTIVE_LIMIT` elements.
pub(super) fn box_elements(d: usize, field: Field) -> (Vec<Vec<Scalar>>, bool) {
    let base = match field {
        Field::Prime(p) => p as usize,
        Field::Rational => 5,
    };
    let total = base.checked_pow(d as u32).unwrap_or(usize::MAX);
    let exhaustive = total <= EXHAUSTIVE_LIMIT;
    let idx = if exhaustive { (0..total).collect() } else { sample_indices(total, EXHAUSTIVE_LIMIT) };
    let elems = idx
        .into_iter()
        .map(|mut k| {
            (0..d)
                .map(|_| {
                    let digit = (k % base) as i64;
                    k /= base;
                    match field {
                        Field::Prime(_) => field.from_i64(digit),
                        Field::Rational => field.from_i64(digit - 2),
                    }
                })
                .collect()
        })
        .collect();
    (elems, exhaustive)
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisionCheck {
    pub checked: usize,
    pub exhaustive: bool,
}

/// Every nonzero element in the search box has full-rank left
/// multiplication. Errors with a witness otherwise.
pub fn division_check(a: &Algebra) -> Result<DivisionCheck> {
    let (elems, exhaustive) = box_elements(a.dim(), a.field());
    let mut checked = 0;
    for x in &elems {
        if x.iter().all(Scalar::is_zero) {
            continue;
        }
        checked += 1;
        if a.left_mul(x).rank() < a.dim() {
            let shown: Vec<String> = x.iter().map(|s| s.to_string()).collect();
            return Err(Error::NotDivision(format!("[{}] is a nonzero non-invertible element", shown.join(", "))));
        }
    }
    Ok(DivisionCheck { checked, exhaustive })
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisionReport {
    pub dim_a: usize,
    pub dim_b: usize,
    pub dim_c: usize,
    pub division: DivisionCheck,
    /// `C a_i ⊆ a_i B` for all `i`.
    pub c_a_in_a_b: bool,
    /// `a_i B = B a_i` for all `i`.
    pub a_b_eq_b_a: bool,
    pub ld3: bool,
    pub b_rd2: bool,
    pub b_ld2: bool,
    /// Quasibases `β_i`, `t_i = a_i ⊗ a_i⁻¹`, built when `C a_i ⊆ a_i B`.
    pub quasibases: Option<QuasibaseStatus>,
}

impl DivisionReport {
    pub fn passed(&self) -> bool {
        (!self.c_a_in_a_b || self.ld3)
            && (!self.a_b_eq_b_a || (self.b_rd2 && self.b_ld2))
            && self.quasibases.as_ref().is_none_or(QuasibaseStatus::is_verified)
    }
}

/// Tests both basis criteria against the depth engine. `basis` is a right
/// `B`-basis of `A`, in `A` coordinates.
pub fn division_criteria(t: &Tower, basis: &[Vec<Scalar>]) -> Result<DivisionReport> {
    let a = &t.a;
    let field = a.field();
    let division = division_check(a)?;
    let b_basis: Vec<Vec<Scalar>> = t.b_image().basis().to_vec();
    let c_basis: Vec<Vec<Scalar>> = t.c_image().basis().to_vec();
    if basis.iter().any(|v| v.len() != a.dim()) {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: basis.first().map_or(0, Vec::len) });
    }
    let products: Vec<Vec<Scalar>> = basis.iter().flat_map(|x| b_basis.iter().map(move |b| a.mul(x, b))).collect();
    if basis.len() * b_basis.len() != a.dim() || Subspace::span(a.dim(), field, products.iter().cloned()).dim() != a.dim() {
        return Err(Error::Precondition("not a right basis of A over B".into()));
    }
    let right_span = |x: &Vec<Scalar>| Subspace::span(a.dim(), field, b_basis.iter().map(|b| a.mul(x, b)));
    let left_span = |x: &Vec<Scalar>| Subspace::span(a.dim(), field, b_basis.iter().map(|b| a.mul(b, x)));
    let c_a_in_a_b = basis.iter().all(|x| {
        let xb = right_span(x);
        c_basis.iter().all(|c| xb.contains(&a.mul(c, x)))
    });
    let a_b_eq_b_a = basis.iter().all(|x| right_span(x) == left_span(x));
    let bg = t.b_gens_in_a();
    let quasibases = if c_a_in_a_b { Some(verify_quasibases(t, &basis_quasibases(a, &bg, basis, &b_basis)?)?) } else { None };
    Ok(DivisionReport {
        dim_a: a.dim(),
        dim_b: t.b.dim(),
        dim_c: t.c.dim(),
        division,
        c_a_in_a_b,
        a_b_eq_b_a,
        ld3: is_ld3(t)?,
        b_rd2: is_rd2(a, &bg)?,
        b_ld2: is_ld2(a, &bg)?,
        quasibases,
    })
}

/// `β_i` the projection onto `a_i B` along the other summands and
/// `t_i = a_i ⊗_B a_i⁻¹`.
fn basis_quasibases(a: &Algebra, bg: &[Vec<Scalar>], basis: &[Vec<Scalar>], b_basis: &[Vec<Scalar>]) -> Result<QuasibaseSet> {
    let field = a.field();
    let d = a.dim();
    let k = b_basis.len();
    let cols = basis.iter().flat_map(|x| b_basis.iter().map(move |b| sparse_from_dense(&a.mul(x, b)))).collect();
    let m = LinMap { src: d, dst: d, field, cols };
    let minv = m.inverse().ok_or_else(|| Error::Invariant("basis products are not independent".into()))?;
    let ab = BalancedTensor::over(a, bg);
    let mut maps = Vec::new();
    let mut elems = Vec::new();
    for (i, x) in basis.iter().enumerate() {
        let cols = (0..d).map(|j| if j / k == i { vec![(j, field.one())] } else { vec![] }).collect();
        let block = LinMap { src: d, dst: d, field, cols };
        maps.push(m.compose(&block).compose(&minv));
        let xinv = a.inverse(x).ok_or_else(|| Error::NotDivision("basis element is not invertible".into()))?;
        elems.push(ab.tensor(x, &xinv));
    }
    Ok(QuasibaseSet { side: Side::Left, maps, elems })
}

/// `F_{p^n} ⊇ F_{p^{db}} ⊇ F_{p^{dc}}`.
pub fn field_subtower(p: u64, n: usize, db: usize, dc: usize) -> Result<Tower> {
    let ft = FieldTower::new(p, n)?;
    let sub = |d: usize| ft.subfield(d).cloned().ok_or_else(|| Error::Precondition(format!("{d} does not divide {n}")));
    let (b, c) = (sub(db)?, sub(dc)?);
    if !db.is_multiple_of(dc) {
        return Err(Error::ChainViolation(format!("F_{p}^{dc} is not contained in F_{p}^{db}")));
    }
    subtower(&ft.e, &b, &c)
}

/// The rational quaternions `(-1,-1)_Q` over `B = Q(i)`, with `C = Q` or
/// `C = B`.
pub fn quaternion_tower(c_equal_b: bool) -> Result<Tower> {
    let h = quaternion_algebra(Field::Rational, -1, -1)?;
    let b = Subspace::span(4, Field::Rational, [h.basis_vec(0), h.basis_vec(1)]);
    let c = if c_equal_b { b.clone() } else { Subspace::span(4, Field::Rational, [h.basis_vec(0)]) };
    subtower(&h, &b, &c)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub dim_s: usize,
    pub dim_j: usize,
    pub j_left_coideal: bool,
    /// `_V J` is a direct summand of a power of `_V V`.
    pub j_projective: bool,
    /// The subring generated by `λ(A)` and `J` is `End A_B`.
    pub closure_is_end: bool,
    /// The span of `λ_a ∘ α` is `End A_B`.
    pub smash_image_is_end: bool,
    /// Every nonzero vector in the search box generates `A` under `J` and `λ(A)`.
    pub simple: bool,
    pub simple_checked: usize,
    pub simple_exhaustive: bool,
    /// `A^J = B`.
    pub invariants_are_b: bool,
    /// `{f(1) : f in the commutant of the closure} = B`.
    pub recovered_b: bool,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.j_left_coideal
            && self.j_projective
            && self.closure_is_end
            && self.smash_image_is_end
            && self.simple
            && self.invariants_are_b
            && self.recovered_b
    }
}

/// Forward and backward passes of the correspondence between intermediate
/// division rings and coideal subrings, on one tower.
pub fn coideal_correspondence(t: &Tower) -> Result<CorrespondenceReport> {
    let a = &t.a;
    let field = a.field();
    let d = a.dim();
    let cg = t.c_gens_in_a();
    if !(is_rd2(a, &cg)? && is_ld2(a, &cg)?) {
        return Err(Error::Precondition("A is not depth two over C".into()));
    }
    division_check(&t.b)?;
    division_check(&t.c)?;
    if !is_ld3(t)? {
        return Err(Error::Precondition("the tower is not left depth three".into()));
    }
    let ctx = DepthContext::new(t)?;
    let cop = coproduct_on_s(&ctx)?;
    let j_projective = {
        let vg = ctx.v_generators();
        let on_j: Option<Vec<LinMap>> = vg.iter().map(|v| ctx.j.operator(|f| ctx.lambda(v).compose(f))).collect();
        let on_v: Option<Vec<LinMap>> = vg.iter().map(|v| restrict(&ctx.v, |x| a.mul(v, x))).collect();
        match (on_j, on_v) {
            (Some(lj), Some(lv)) => {
                let jm = Bimodule { dim: ctx.j.dim(), field, left: lj, right: vec![] };
                let vm = Bimodule { dim: ctx.v.dim(), field, left: lv, right: vec![] };
                summand_of_power(&jm, &vm)?.0
            }
            _ => return Err(Error::Invariant("V does not act on J".into())),
        }
    };
    let lambda: Vec<LinMap> = (0..d).map(|i| a.left_mul(&a.basis_vec(i))).collect();
    let gens: Vec<LinMap> = lambda.iter().chain(ctx.j.basis()).cloned().collect();
    let closure = map_closure(d, field, &gens);
    let end_ab = ctx.end_right_b()?;
    let smash: Vec<LinMap> = lambda.iter().flat_map(|l| ctx.j.basis().iter().map(move |f| l.compose(f))).collect();
    let smash_image = MapSpace::new(d, d, field, &smash);
    let galois = GaloisSubring::new(a, &gens)?;
    let b_image = t.b_image();
    let comm = commutant(d, field, closure.basis())?;
    let recovered = Subspace::span(d, field, comm.basis().iter().map(|f| f.apply(a.unit())));
    Ok(CorrespondenceReport {
        dim_s: ctx.s.dim(),
        dim_j: ctx.j.dim(),
        j_left_coideal: cop.j_left_coideal,
        j_projective,
        closure_is_end: same_space(&closure, &end_ab),
        smash_image_is_end: same_space(&smash_image, &end_ab),
        simple: galois.simple_module,
        simple_checked: galois.simple_checked,
        simple_exhaustive: galois.simple_exhaustive,
        invariants_are_b: fixed_ring(a, ctx.j.basis()) == b_image,
        recovered_b: recovered == b_image,
    })
}

/// An augmentation `A -> D` into a division algebra.
#[derive(Clone, Debug)]
pub struct Augmentation {
    pub target: Algebra,
    pub images: Vec<Vec<Scalar>>,
}

impl Augmentation {
    /// Validates unitality, multiplicativity on basis pairs, and that the
    /// target is a division algebra.
    pub fn new(src: &Algebra, target: Algebra, images: Vec<Vec<Scalar>>) -> Result<Augmentation> {
        if images.len() != src.dim() || images.iter().any(|v| v.len() != target.dim()) {
            return Err(Error::DimensionMismatch { expected: src.dim(), got: images.len() });
        }
        division_check(&target)?;
        let aug = Augmentation { target, images };
        if aug.apply(src.unit()) != aug.target.unit() {
            return Err(Error::InvalidAlgebra("augmentation does not preserve the unit".into()));
        }
        for i in 0..src.dim() {
            for j in 0..src.dim() {
                let lhs = aug.apply(&dense_from_sparse(src.mul_basis(i, j), src.dim(), src.field()));
                if lhs != aug.target.mul(&aug.images[i], &aug.images[j]) {
                    return Err(Error::InvalidAlgebra("augmentation is not multiplicative".into()));
                }
            }
        }
        Ok(aug)
    }

    pub fn identity(a: &Algebra) -> Augmentation {
        Augmentation { target: a.clone(), images: (0..a.dim()).map(|i| a.basis_vec(i)).collect() }
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.target.zero_vec();
        for (c, img) in x.iter().zip(&self.images) {
            crate::linalg::dense_axpy(&mut out, c, img);
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RankBoundReport {
    pub m: usize,
    pub n: usize,
    /// `(d)(z)` is the identity matrix over the augmentation target.
    pub product_is_identity: bool,
    /// Rank of `(z)` over the prime field, at least `m · dim D` when the
    /// product is the identity.
    pub rank_z: usize,
    pub bound_holds: bool,
}

/// Finds `a_ij` with `r_i = Σ_j λ_{a_ij} ∘ s_j`, pushes them and `s_j(e_k)`
/// through the augmentation and checks `(d)(z) = 1`.
pub fn augmented_rank_bound(a: &Algebra, s: &[LinMap], r: &[LinMap], e: &[Vec<Scalar>], aug: &Augmentation) -> Result<RankBoundReport> {
    let da = a.dim();
    let field = a.field();
    let (m, n) = (r.len(), s.len());
    if e.len() != m {
        return Err(Error::Precondition(format!("{} elements e_k for {m} maps r_i", e.len())));
    }
    if s.iter().chain(r).any(|f| f.src != da || f.dst != da) {
        return Err(Error::DimensionMismatch { expected: da, got: s.iter().chain(r).map(|f| f.src).find(|&x| x != da).unwrap_or(0) });
    }
    for (i, ri) in r.iter().enumerate() {
        for (k, ek) in e.iter().enumerate() {
            let want = if i == k { a.unit().to_vec() } else { a.zero_vec() };
            if ri.apply(ek) != want {
                return Err(Error::Precondition(format!("r_{}(e_{}) is not δ", i + 1, k + 1)));
            }
        }
    }
    // Column (j, l) of the system: q ↦ x_l · s_j(x_q), flattened over q.
    let columns: Vec<Vec<Scalar>> = (0..n)
        .flat_map(|j| (0..da).map(move |l| (j, l)))
        .map(|(j, l)| {
            let lam = a.left_mul(&a.basis_vec(l));
            (0..da).flat_map(|q| lam.apply(&s[j].apply(&a.basis_vec(q)))).collect()
        })
        .collect();
    let mut coeffs: Vec<Vec<Vec<Scalar>>> = Vec::new();
    for (i, ri) in r.iter().enumerate() {
        let mut sys = LinearSystem::new(n * da, field);
        for row in 0..da * da {
            let lhs = columns.iter().enumerate().filter(|(_, c)| !c[row].is_zero()).map(|(v, c)| (v, c[row].clone())).collect();
            let (q, o) = (row / da, row % da);
            sys.push(lhs, ri.apply(&a.basis_vec(q))[o].clone());
        }
        let x = sys.solve().particular.ok_or_else(|| Error::Precondition(format!("r_{} is not in the left span of the s_j", i + 1)))?;
        coeffs.push(x.chunks(da).map(<[Scalar]>::to_vec).collect());
    }
    let dd = &aug.target;
    let dmat: Vec<Vec<Vec<Scalar>>> = coeffs.iter().map(|row| row.iter().map(|x| aug.apply(x)).collect()).collect();
    let zmat: Vec<Vec<Vec<Scalar>>> = s.iter().map(|sj| e.iter().map(|ek| aug.apply(&sj.apply(ek))).collect()).collect();
    let mut product_is_identity = true;
    for i in 0..m {
        for k in 0..m {
            let mut acc = dd.zero_vec();
            for j in 0..n {
                crate::linalg::dense_axpy(&mut acc, &field.one(), &dd.mul(&dmat[i][j], &zmat[j][k]));
            }
            let want = if i == k { dd.unit().to_vec() } else { dd.zero_vec() };
            product_is_identity &= acc == want;
        }
    }
    // `(z)` as an `(n·dim D) × (m·dim D)` matrix of right multiplications.
    let dim_d = dd.dim();
    let mut cols = Vec::new();
    for k in 0..m {
        for c in 0..dim_d {
            let mut col = Vec::new();
            for (j, zrow) in zmat.iter().enumerate() {
                let v = dd.mul(&dd.basis_vec(c), &zrow[k]);
                col.extend(sparse_from_dense(&v).into_iter().map(|(t, x)| (j * dim_d + t, x)));
            }
            cols.push(col);
        }
    }
    let rank_z = LinMap { src: m * dim_d, dst: n * dim_d, field, cols }.rank();
    Ok(RankBoundReport { m, n, product_is_identity, rank_z, bound_holds: product_is_identity && m <= n })
}

/// From `s_j` and coefficients `a_ij`, sets `r_i = Σ_j λ_{a_ij} ∘ s_j` and
/// solves for `e_k` with `r_i(e_k) = δ_ik`. `None` when no such `e_k` exist.
pub fn rank_bound_witness(a: &Algebra, s: &[LinMap], coeffs: &[Vec<Vec<Scalar>>]) -> Option<(Vec<LinMap>, Vec<Vec<Scalar>>)> {
    let da = a.dim();
    let field = a.field();
    let r: Vec<LinMap> = coeffs
        .iter()
        .map(|row| row.iter().zip(s).fold(LinMap::zero(da, da, field), |acc, (x, sj)| acc.add(&a.left_mul(x).compose(sj))))
        .collect();
    let m = r.len();
    let rows: Vec<Vec<(usize, Scalar)>> = r.iter().flat_map(LinMap::rows).collect();
    let mut e = Vec::new();
    for k in 0..m {
        let mut sys = LinearSystem::new(da, field);
        for (idx, row) in rows.iter().enumerate() {
            let (i, o) = (idx / da, idx % da);
            let rhs = if i == k { a.unit()[o].clone() } else { field.zero() };
            sys.push(row.clone(), rhs);
        }
        e.push(sys.solve().particular?);
    }
    Some((r, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternions_over_gaussian_rationals() {
        let t = quaternion_tower(true).unwrap();
        let basis = vec![t.a.basis_vec(0), t.a.basis_vec(2)];
        let r = division_criteria(&t, &basis).unwrap();
        assert!(r.a_b_eq_b_a && r.c_a_in_a_b && r.b_rd2 && r.b_ld2, "{r:?}");
        assert!(r.passed());
        assert_eq!(r.quasibases, Some(QuasibaseStatus::Verified));
    }

    #[test]
    fn split_matrices_are_rejected() {
        let h = quaternion_algebra(Field::Rational, 1, 1).unwrap();
        assert!(matches!(division_check(&h), Err(Error::NotDivision(_))));
    }

    #[test]
    fn f16_over_f4_over_f2() {
        let t = field_subtower(2, 4, 2, 1).unwrap();
        let r = coideal_correspondence(&t).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!((r.dim_s, r.dim_j), (16, 8));
        assert!(r.simple_exhaustive);
    }

    #[test]
    fn quaternion_round_trip() {
        let r = coideal_correspondence(&quaternion_tower(false).unwrap()).unwrap();
        assert!(r.passed(), "{r:?}");
        let t = quaternion_tower(true).unwrap().with_b_equal_c();
        let r = coideal_correspondence(&t).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.dim_s, r.dim_j);
    }

    #[test]
    fn identity_rank_bound_instance() {
        let (a, _) = crate::builders::finite_field_algebra(5, 2).unwrap();
        let s = vec![LinMap::identity(2, a.field())];
        let (r, e) = rank_bound_witness(&a, &s, &[vec![a.unit().to_vec()]]).unwrap();
        let rep = augmented_rank_bound(&a, &s, &r, &e, &Augmentation::identity(&a)).unwrap();
        assert!(rep.bound_holds && rep.product_is_identity);
        assert!(rank_bound_witness(&a, &s, &[vec![a.unit().to_vec()], vec![a.unit().to_vec()]]).is_none());
    }
}
