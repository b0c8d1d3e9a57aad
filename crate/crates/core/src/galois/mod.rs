//! Gal/Fix correspondences on computable instances: finite field towers,
//! division algebras over `Q`, and simple algebras.
//!
//! `Gal(F) = End E_F` is the space of right `F`-linear endomorphisms of
//! `E`; `Fix(W) = {x : α(x) = α(1)x for all α ∈ W}`.

mod division;
mod simple;

pub use division::{
    augmented_rank_bound, coideal_correspondence, division_check, division_criteria, field_subtower, quaternion_tower, rank_bound_witness,
    Augmentation, CorrespondenceReport, DivisionCheck, DivisionReport, RankBoundReport,
};
pub use simple::{simple_algebra_correspondence, SimpleReport};

use serde::Serialize;

use crate::algebra::{Algebra, Tower};
use crate::bimodule::{hom_space, Bimodule, MapSpace};
use crate::builders::{finite_field_algebra, Poly};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{sparse_from_dense, LinMap, RowReducer, Subspace};
use crate::structures::fixed_ring;

/// `F_{p^n}` over `F_p` with its subfields `F_{p^d}`, `d | n`.
#[derive(Clone, Debug)]
pub struct FieldTower {
    pub p: u64,
    pub n: usize,
    pub e: Algebra,
    pub poly: Poly,
    /// `(d, F_{p^d})` for each divisor `d` of `n`, increasing.
    pub subfields: Vec<(usize, Subspace)>,
}

impl FieldTower {
    pub fn new(p: u64, n: usize) -> Result<FieldTower> {
        let (e, poly) = finite_field_algebra(p, n)?;
        let mut subfields = Vec::new();
        for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
            let f = frobenius(&e, p, d);
            let fixed = f.axpy(&e.field().one().neg(), &LinMap::identity(n, e.field()));
            let sub = Subspace::span_sparse(n, e.field(), fixed.kernel());
            if sub.dim() != d {
                return Err(Error::Invariant(format!("F_{p}^{d} has dimension {}", sub.dim())));
            }
            subfields.push((d, sub));
        }
        Ok(FieldTower { p, n, e, poly, subfields })
    }

    pub fn subfield(&self, d: usize) -> Option<&Subspace> {
        self.subfields.iter().find(|(k, _)| *k == d).map(|(_, s)| s)
    }
}

/// `x ↦ x^{p^k}` as an `F_p`-linear map.
pub fn frobenius(e: &Algebra, p: u64, k: usize) -> LinMap {
    let q = p.pow(k as u32);
    let cols = (0..e.dim())
        .map(|i| {
            let x = e.basis_vec(i);
            sparse_from_dense(&power(e, &x, q))
        })
        .collect();
    LinMap { src: e.dim(), dst: e.dim(), field: e.field(), cols }
}

fn power(a: &Algebra, x: &[Scalar], mut k: u64) -> Vec<Scalar> {
    let mut base = x.to_vec();
    let mut acc = a.unit().to_vec();
    while k > 0 {
        if k & 1 == 1 {
            acc = a.mul(&acc, &base);
        }
        base = a.mul(&base, &base);
        k >>= 1;
    }
    acc
}

/// `End A_F`: endomorphisms of `A` commuting with right multiplication by
/// every element of `f`.
pub fn gal(a: &Algebra, f: &Subspace) -> Result<MapSpace> {
    if !f.contains(a.unit()) || !f.basis().iter().all(|x| f.basis().iter().all(|y| f.contains(&a.mul(x, y)))) {
        return Err(Error::Precondition("subspace is not a unital subalgebra".into()));
    }
    let right: Vec<LinMap> = f.basis().iter().map(|x| a.right_mul(x)).collect();
    let m = Bimodule { dim: a.dim(), field: a.field(), left: vec![], right };
    Ok(MapSpace::new(a.dim(), a.dim(), a.field(), &hom_space(&m, &m)?))
}

/// `Fix(W)`.
pub fn fix(a: &Algebra, w: &[LinMap]) -> Subspace {
    fixed_ring(a, w)
}

/// The subalgebra of `End(k^d)` generated by `gens` and the identity.
pub fn map_closure(d: usize, field: crate::field::Field, gens: &[LinMap]) -> MapSpace {
    let mut red = RowReducer::new(d * d, field);
    let id = LinMap::identity(d, field);
    red.insert(id.flatten());
    let mut found = vec![id];
    let mut queue = vec![0usize];
    while let Some(k) = queue.pop() {
        for g in gens {
            let h = g.compose(&found[k]);
            if red.insert(h.flatten()) {
                found.push(h);
                queue.push(found.len() - 1);
            }
        }
    }
    MapSpace::new(d, d, field, &found)
}

/// Maps commuting with every map in `maps`.
pub fn commutant(d: usize, field: crate::field::Field, maps: &[LinMap]) -> Result<MapSpace> {
    let m = Bimodule { dim: d, field, left: maps.to_vec(), right: vec![] };
    Ok(MapSpace::new(d, d, field, &hom_space(&m, &m)?))
}

pub(crate) fn same_space(x: &MapSpace, y: &MapSpace) -> bool {
    x.subspace() == y.subspace()
}

fn lambda_maps(a: &Algebra) -> Vec<LinMap> {
    (0..a.dim()).map(|i| a.left_mul(&a.basis_vec(i))).collect()
}

/// The tower `A ⊇ B ⊇ C` for subalgebras given as subspaces of `A`.
pub fn subtower(a: &Algebra, b: &Subspace, c: &Subspace) -> Result<Tower> {
    if !b.contains_subspace(c) {
        return Err(Error::ChainViolation("C is not contained in B".into()));
    }
    let labels = |n: &str, k: usize| (0..k).map(|i| format!("{n}{i}")).collect();
    let (bb, ba) = a.subalgebra(b.basis(), labels("b", b.dim()))?;
    let c_in_b: Vec<Vec<Scalar>> = c
        .basis()
        .iter()
        .map(|v| {
            let m = crate::linalg::Matrix::from_columns(b.basis(), a.dim(), a.field());
            m.solve(v)?.particular.ok_or_else(|| Error::ChainViolation("C is not contained in B".into()))
        })
        .collect::<Result<_>>()?;
    let (cc, cb) = bb.subalgebra(&c_in_b, labels("c", c.dim()))?;
    Tower::new(a.clone(), bb, cc, ba, cb)
}

/// A subring of `End A` containing `λ(A)`, given by generators over `λ(A)`.
#[derive(Clone, Debug)]
pub struct GaloisSubring {
    pub space: MapSpace,
    pub contains_lambda: bool,
    /// Left generators over `λ(A)`; finite generation is automatic here.
    pub generators: usize,
    /// Every nonzero vector in the search box generates `A`.
    pub simple_module: bool,
    pub simple_checked: usize,
    pub simple_exhaustive: bool,
}

impl GaloisSubring {
    /// The closure of `λ(A)` and `gens` under composition.
    pub fn new(a: &Algebra, gens: &[LinMap]) -> Result<GaloisSubring> {
        let lambda = lambda_maps(a);
        let all: Vec<LinMap> = lambda.iter().chain(gens).cloned().collect();
        let space = map_closure(a.dim(), a.field(), &all);
        let (elems, exhaustive) = division::box_elements(a.dim(), a.field());
        let mut checked = 0;
        let mut simple = true;
        for x in elems.iter().filter(|x| x.iter().any(|c| !c.is_zero())) {
            checked += 1;
            if Subspace::span(a.dim(), a.field(), space.basis().iter().map(|f| f.apply(x))).dim() != a.dim() {
                simple = false;
                break;
            }
        }
        Ok(GaloisSubring {
            contains_lambda: lambda.iter().all(|l| space.contains(l)),
            space,
            generators: gens.len(),
            simple_module: simple,
            simple_checked: checked,
            simple_exhaustive: exhaustive,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct JbEntry {
    pub d: usize,
    pub dim_f: usize,
    pub dim_gal: usize,
    /// `(n/d)² · d`.
    pub expected_dim_gal: usize,
    pub contains_lambda: bool,
    /// `Fix(Gal(F)) = F`.
    pub fix_gal: bool,
    /// `Gal(Fix(Gal(F))) = Gal(F)`.
    pub gal_fix_gal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureEntry {
    pub extra_maps: usize,
    pub dim_closure: usize,
    pub dim_fix: usize,
    pub dim_gal_fix: usize,
    /// The closure of `λ(E)` and the extra maps equals `End E_{Fix(W)}`.
    pub closure_is_gal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct JbReport {
    pub p: u64,
    pub n: usize,
    pub poly: Vec<u64>,
    pub entries: Vec<JbEntry>,
    /// `F ⊆ F'` implies `Gal(F') ⊆ Gal(F)`, and conversely, on all pairs.
    pub order_reversing: bool,
    pub closures: Vec<ClosureEntry>,
}

impl JbReport {
    pub fn passed(&self) -> bool {
        self.order_reversing
            && self.entries.iter().all(|e| e.contains_lambda && e.fix_gal && e.gal_fix_gal && e.dim_gal == e.expected_dim_gal)
            && self.closures.iter().all(|c| c.closure_is_gal)
    }
}

/// Round trips over the whole subfield lattice, plus the closure check for
/// each list in `extra` (maps adjoined to `λ(E)`).
pub fn jb_roundtrip(t: &FieldTower, extra: &[Vec<LinMap>]) -> Result<JbReport> {
    let e = &t.e;
    let n = t.n;
    let lambda = lambda_maps(e);
    let mut entries = Vec::new();
    let mut gals = Vec::new();
    for (d, f) in &t.subfields {
        let g = gal(e, f)?;
        let fx = fix(e, g.basis());
        let back = gal(e, &fx)?;
        entries.push(JbEntry {
            d: *d,
            dim_f: f.dim(),
            dim_gal: g.dim(),
            expected_dim_gal: (n / d) * (n / d) * d,
            contains_lambda: lambda.iter().all(|l| g.contains(l)),
            fix_gal: fx == *f,
            gal_fix_gal: same_space(&back, &g),
        });
        gals.push(g);
    }
    let mut order_reversing = true;
    for (i, (_, f)) in t.subfields.iter().enumerate() {
        for (j, (_, f2)) in t.subfields.iter().enumerate() {
            let sub = f2.contains_subspace(f);
            let sup = gals[i].subspace().contains_subspace(gals[j].subspace());
            order_reversing &= sub == sup;
        }
    }
    let mut closures = Vec::new();
    for maps in extra {
        let gens: Vec<LinMap> = lambda.iter().chain(maps).cloned().collect();
        let w = map_closure(n, e.field(), &gens);
        let fx = fix(e, w.basis());
        let g = gal(e, &fx)?;
        closures.push(ClosureEntry {
            extra_maps: maps.len(),
            dim_closure: w.dim(),
            dim_fix: fx.dim(),
            dim_gal_fix: g.dim(),
            closure_is_gal: same_space(&w, &g),
        });
    }
    Ok(JbReport { p: t.p, n, poly: t.poly.clone(), entries, order_reversing, closures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f16_lattice() {
        let t = FieldTower::new(2, 4).unwrap();
        assert_eq!(t.subfields.iter().map(|(d, _)| *d).collect::<Vec<_>>(), vec![1, 2, 4]);
        let frob = frobenius(&t.e, 2, 1);
        let r = jb_roundtrip(&t, &[vec![frob]]).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.entries[1].dim_gal, 8);
        assert_eq!(r.closures[0].dim_fix, 1);
        assert_eq!(r.closures[0].dim_closure, 16);
    }

    #[test]
    fn all_instances_round_trip() {
        for (p, n) in [(2, 6), (3, 2), (3, 4), (5, 2)] {
            let t = FieldTower::new(p, n).unwrap();
            let r = jb_roundtrip(&t, &[vec![frobenius(&t.e, p, 1)]]).unwrap();
            assert!(r.passed(), "{p} {n}");
        }
    }

    #[test]
    fn extreme_subfields() {
        let t = FieldTower::new(3, 2).unwrap();
        let e = &t.e;
        let full = gal(e, t.subfield(2).unwrap()).unwrap();
        assert_eq!(full.dim(), 2);
        assert_eq!(fix(e, &lambda_maps(e)).dim(), 2);
        assert_eq!(gal(e, t.subfield(1).unwrap()).unwrap().dim(), 4);
        let all: Vec<LinMap> = gal(e, t.subfield(1).unwrap()).unwrap().basis().to_vec();
        assert_eq!(fix(e, &all), *t.subfield(1).unwrap());
    }

    #[test]
    fn non_subalgebra_is_rejected() {
        let t = FieldTower::new(2, 4).unwrap();
        let x = Subspace::span(4, t.e.field(), [t.e.basis_vec(1)]);
        assert!(matches!(gal(&t.e, &x), Err(Error::Precondition(_))));
    }
}
