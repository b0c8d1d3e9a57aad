//! Group-algebra towers `F[G] ⊇ F[H] ⊇ F[K]`: the double-coset quasibases
//! available when `K^G <= H`, and the census comparing that criterion with
//! the computed depth-three verdict over a catalog of small groups.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Tower;
use crate::builders::{subgroup_generators, tower_from_chain};
use crate::catalog::{small_group_catalog, CatalogGroup};
use crate::depth::{is_ld3, is_rd3, tensor_square, verify_quasibases, QuasibaseSet, Side};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groups::{FiniteGroup, SubgroupChain};
use crate::linalg::LinMap;

/// Quasibases read off the double cosets. Right side: one pair per
/// `H g_i K`, with `γ_i` the projection onto the span of the coset and
/// `u_i = g_i^{-1} ⊗ g_i`. Left side: one pair per `K g_j H`, with `β_j`
/// the projection and `t_j = g_j ⊗ g_j^{-1}`.
pub fn group_quasibases(chain: &SubgroupChain, tower: &Tower, side: Side) -> Result<QuasibaseSet> {
    if !chain.d3_criterion() {
        return Err(Error::Precondition("the normal closure of K is not contained in H".into()));
    }
    let g = chain.g;
    let field = tower.field();
    let n = g.order();
    let sq = tensor_square(&tower.a, &tower.b_gens_in_a());
    let classes = match side {
        Side::Right => g.double_cosets(&chain.h, &chain.k),
        Side::Left => g.double_cosets(&chain.k, &chain.h),
    };
    let e = |x: usize| tower.a.basis_vec(x);
    let mut maps = Vec::with_capacity(classes.len());
    let mut elems = Vec::with_capacity(classes.len());
    for (rep, members) in &classes {
        let mut cols = vec![Vec::new(); n];
        for &m in members {
            cols[m] = vec![(m, field.one())];
        }
        maps.push(LinMap { src: n, dst: n, field, cols });
        let inv = g.inv(*rep);
        elems.push(match side {
            Side::Right => sq.tensor(&e(inv), &e(*rep)),
            Side::Left => sq.tensor(&e(*rep), &e(inv)),
        });
    }
    Ok(QuasibaseSet { side, maps, elems })
}

/// Group quasibases on both sides, each checked with `verify_quasibases`.
pub fn verified_group_quasibases(chain: &SubgroupChain, tower: &Tower) -> Result<(QuasibaseSet, QuasibaseSet)> {
    let mut out = Vec::with_capacity(2);
    for side in [Side::Right, Side::Left] {
        let qb = group_quasibases(chain, tower, side)?;
        let status = verify_quasibases(tower, &qb)?;
        if !status.is_verified() {
            return Err(Error::Invariant(format!("double-coset quasibases fail on the {side:?} side: {status:?}")));
        }
        out.push(qb);
    }
    let left = out.pop().unwrap_or_else(|| unreachable!());
    let right = out.pop().unwrap_or_else(|| unreachable!());
    Ok((right, left))
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub max_order: usize,
    pub field: Field,
    /// Record wall-clock time per tower. Off by default so that output is
    /// reproducible byte for byte.
    pub timings: bool,
    /// Over `F_p`, also run groups whose order is divisible by `p`.
    pub include_modular: bool,
    /// Build and verify the double-coset quasibases whenever the criterion
    /// holds.
    pub check_quasibases: bool,
    /// Restrict to these catalog ids when non-empty.
    pub groups: Vec<String>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            max_order: 16,
            field: Field::Rational,
            timings: false,
            include_modular: false,
            check_quasibases: true,
            groups: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub group: String,
    pub order: usize,
    pub h_order: usize,
    pub k_order: usize,
    pub h_generators: Vec<String>,
    pub k_generators: Vec<String>,
    pub field: String,
    /// `K^G <= H`.
    pub criterion: bool,
    pub rd3: bool,
    pub ld3: bool,
    /// Present when the criterion holds and quasibases were checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quasibases_verified: Option<bool>,
    /// `p` divides `|G|`.
    pub modular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl CensusRecord {
    pub fn d3(&self) -> bool {
        self.rd3 && self.ld3
    }

    /// Criterion holds but the computation disagrees.
    pub fn is_violation(&self) -> bool {
        self.criterion && (!self.d3() || self.quasibases_verified == Some(false))
    }

    /// Depth three without the criterion, relative to the field used.
    pub fn is_candidate(&self) -> bool {
        !self.criterion && self.d3()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub field: String,
    pub max_order: usize,
    pub groups: usize,
    pub towers: usize,
    pub criterion_true: usize,
    pub d3_true: usize,
    pub rd3_ld3_disagreements: usize,
    pub violations: usize,
    /// Field-relative: a depth-three verdict over this field does not
    /// settle the question over the complex numbers.
    pub counterexample_candidates: Vec<String>,
    pub skipped_modular_groups: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub records: Vec<CensusRecord>,
    pub summary: CensusSummary,
}

/// One representative per simultaneous-conjugacy class of pairs
/// `K <= H <= G`, ordered by `(|H|, H, |K|, K)` of the canonical form.
pub fn tower_classes(g: &FiniteGroup, subgroups: &[Vec<usize>]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut seen: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
    let mut out = Vec::new();
    for h in subgroups {
        for k in subgroups {
            if k.len() > h.len() || h.len() % k.len() != 0 || !k.iter().all(|x| h.binary_search(x).is_ok()) {
                continue;
            }
            let canon =
                (0..g.order()).map(|x| (g.conjugate_set(h, x), g.conjugate_set(k, x))).min().unwrap_or_else(|| (h.clone(), k.clone()));
            if seen.insert(canon.clone()) {
                out.push(canon);
            }
        }
    }
    out.sort_by(|a, b| (a.0.len(), &a.0, a.1.len(), &a.1).cmp(&(b.0.len(), &b.0, b.1.len(), &b.1)));
    out
}

fn labels(g: &FiniteGroup, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| g.label(x).to_string()).collect()
}

fn field_name(f: Field) -> String {
    match f {
        Field::Rational => "Q".into(),
        Field::Prime(p) => format!("F{p}"),
    }
}

/// Decides one tower and fills in its census record.
pub fn census_record(cg: &CatalogGroup, h: &[usize], k: &[usize], opts: &CensusOptions) -> Result<CensusRecord> {
    let start = Instant::now();
    let g = &cg.group;
    let chain = SubgroupChain::new(g, h.to_vec(), k.to_vec())?;
    let tower = tower_from_chain(&chain, opts.field);
    let criterion = chain.d3_criterion();
    let rd3 = is_rd3(&tower)?;
    let ld3 = is_ld3(&tower)?;
    let quasibases_verified =
        if criterion && opts.check_quasibases { Some(verified_group_quasibases(&chain, &tower).is_ok()) } else { None };
    let modular = matches!(opts.field, Field::Prime(p) if (g.order() as u64).is_multiple_of(p));
    Ok(CensusRecord {
        group: cg.id.clone(),
        order: g.order(),
        h_order: h.len(),
        k_order: k.len(),
        h_generators: labels(g, &subgroup_generators(g, h)),
        k_generators: labels(g, &subgroup_generators(g, k)),
        field: field_name(opts.field),
        criterion,
        rd3,
        ld3,
        quasibases_verified,
        modular,
        millis: opts.timings.then(|| start.elapsed().as_millis() as u64),
    })
}

/// Runs the census over the catalog. Towers are decided in parallel and
/// merged in catalog order.
pub fn census(opts: &CensusOptions) -> Result<Census> {
    let catalog = small_group_catalog(opts.max_order)?;
    let mut skipped = Vec::new();
    let mut jobs: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
    let mut groups = 0;
    for (gi, cg) in catalog.iter().enumerate() {
        if !opts.groups.is_empty() && !opts.groups.contains(&cg.id) {
            continue;
        }
        if let Field::Prime(p) = opts.field {
            if (cg.group.order() as u64).is_multiple_of(p) && !opts.include_modular {
                skipped.push(cg.id.clone());
                continue;
            }
        }
        groups += 1;
        for (h, k) in tower_classes(&cg.group, &cg.subgroups) {
            jobs.push((gi, h, k));
        }
    }
    let records = jobs.par_iter().map(|(gi, h, k)| census_record(&catalog[*gi], h, k, opts)).collect::<Result<Vec<_>>>()?;
    let summary = CensusSummary {
        field: field_name(opts.field),
        max_order: opts.max_order,
        groups,
        towers: records.len(),
        criterion_true: records.iter().filter(|r| r.criterion).count(),
        d3_true: records.iter().filter(|r| r.d3()).count(),
        rd3_ld3_disagreements: records.iter().filter(|r| r.rd3 != r.ld3).count(),
        violations: records.iter().filter(|r| r.is_violation()).count(),
        counterexample_candidates: records
            .iter()
            .filter(|r| r.is_candidate())
            .map(|r| format!("{} H=<{}> K=<{}>", r.group, r.h_generators.join(","), r.k_generators.join(",")))
            .collect(),
        skipped_modular_groups: skipped,
    };
    Ok(Census { records, summary })
}

/// JSON lines: one record per tower followed by the summary.
pub fn census_jsonl(c: &Census) -> String {
    let mut out = String::new();
    for r in &c.records {
        out.push_str(&serde_json::to_string(r).unwrap_or_default());
        out.push('\n');
    }
    out.push_str(&serde_json::json!({ "summary": c.summary }).to_string());
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Perm;

    fn grp(gens: &[&str]) -> FiniteGroup {
        FiniteGroup::from_permutations(&gens.iter().map(|s| Perm::parse(s).unwrap()).collect::<Vec<_>>(), 200).unwrap()
    }

    #[test]
    fn s3_a3_trivial_has_two_pairs() {
        let g = grp(&["(1 2)", "(1 2 3)"]);
        let a3 = g.subgroup_from_perms(&[Perm::parse("(1 2 3)").unwrap()]).unwrap();
        let chain = SubgroupChain::new(&g, a3, vec![0]).unwrap();
        let t = tower_from_chain(&chain, Field::Rational);
        let (r, l) = verified_group_quasibases(&chain, &t).unwrap();
        assert_eq!((r.len(), l.len()), (2, 2));
    }

    #[test]
    fn criterion_false_is_rejected() {
        let g = grp(&["(1 2)", "(1 2 3)"]);
        let t12 = g.subgroup_from_perms(&[Perm::parse("(1 2)").unwrap()]).unwrap();
        let chain = SubgroupChain::new(&g, t12.clone(), t12).unwrap();
        let t = tower_from_chain(&chain, Field::Rational);
        assert!(group_quasibases(&chain, &t, Side::Right).is_err());
    }

    #[test]
    fn s3_tower_classes() {
        let g = grp(&["(1 2)", "(1 2 3)"]);
        // Subgroup classes {e}, C2, C3, S3; pairs: e<=each (4), C2<=C2, C2<=S3,
        // C3<=C3, C3<=S3, S3<=S3.
        assert_eq!(tower_classes(&g, &g.subgroups()).len(), 9);
    }

    #[test]
    fn tiny_census() {
        let opts = CensusOptions { max_order: 3, ..Default::default() };
        let c = census(&opts).unwrap();
        assert_eq!(c.summary.violations, 0);
        assert!(c.records.iter().all(|r| r.criterion && r.d3()));
    }
}
