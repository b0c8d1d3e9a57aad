//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. All comparisons are exact.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;

use depthtower::algebra::Tower;
use depthtower::builders::{frobenius_system_group, tower_from_chain, GroupoidComponent};
use depthtower::catalog::{small_group_catalog, CatalogGroup};
use depthtower::depth::{
    d3_bimodules, endomorphism_tower, extract_quasibases, is_ld2, is_ld3, is_ld3_via_endo, is_left_projective, is_rd2, is_right_projective,
    is_separable, QuasibaseStatus, Side,
};
use depthtower::galois::{division_criteria, frobenius, jb_roundtrip, quaternion_tower, FieldTower};
use depthtower::groups::{FiniteGroup, Perm, SubgroupChain};
use depthtower::grouptower::{census, census_jsonl, tower_classes, Census, CensusOptions};
use depthtower::structures::{
    coring_on_p, invariants, morita_products, pairing, pregalois, pregalois_natural, smash_decomposition, weak_hopf_groupoid, DepthContext,
};
use depthtower::{bimodule::hom_space, Field};

const Q: Field = Field::Rational;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// One catalog tower with its census verdicts and depth-two data for `H`
/// and `K` in `G`.
struct Case {
    order: usize,
    h: Vec<usize>,
    k: Vec<usize>,
    tower: Tower,
    rd3: bool,
    ld3: bool,
    rd2_h: bool,
    rd2_k: bool,
}

fn census_q16() -> Census {
    census(&CensusOptions { max_order: 16, ..CensusOptions::default() }).expect("census runs")
}

fn subgroup_tower(g: &FiniteGroup, s: &[usize]) -> Tower {
    tower_from_chain(&SubgroupChain::new(g, s.to_vec(), s.to_vec()).expect("subgroup chain"), Q)
}

/// Catalog towers aligned with the census records, which list them in
/// catalog order.
fn cases(catalog: &[CatalogGroup], c: &Census) -> Vec<Case> {
    let per_group: Vec<Vec<Case>> = catalog
        .par_iter()
        .map(|cg| {
            let g = &cg.group;
            let mut rd2: HashMap<Vec<usize>, bool> = HashMap::new();
            let mut rd2_of = |s: &[usize]| {
                *rd2.entry(s.to_vec()).or_insert_with(|| {
                    let t = subgroup_tower(g, s);
                    is_rd2(&t.a, &t.b_gens_in_a()).expect("rd2 decides")
                })
            };
            tower_classes(g, &cg.subgroups)
                .into_iter()
                .map(|(h, k)| {
                    let chain = SubgroupChain::new(g, h.clone(), k.clone()).expect("chain");
                    let (rd2_h, rd2_k) = (rd2_of(&h), rd2_of(&k));
                    Case { order: g.order(), tower: tower_from_chain(&chain, Q), h, k, rd3: false, ld3: false, rd2_h, rd2_k }
                })
                .collect()
        })
        .collect();
    let mut out: Vec<Case> = per_group.into_iter().flatten().collect();
    assert_eq!(out.len(), c.records.len(), "census and catalog disagree on tower count");
    for (case, r) in out.iter_mut().zip(&c.records) {
        assert_eq!((case.order, case.h.len(), case.k.len()), (r.order, r.h_order, r.k_order));
        case.rd3 = r.rd3;
        case.ld3 = r.ld3;
    }
    out
}

fn criterion_1(c: &Census) -> Outcome {
    let crit: Vec<_> = c.records.iter().filter(|r| r.criterion).collect();
    let bad = crit.iter().filter(|r| !r.d3() || r.quasibases_verified != Some(true)).count();
    outcome(bad == 0 && c.summary.violations == 0, format!("{} towers, {} with K^G <= H, {} violations", c.records.len(), crit.len(), bad))
}

fn criterion_2(cases: &[Case]) -> Outcome {
    let results: Vec<[(bool, bool); 4]> = cases
        .par_iter()
        .map(|c| {
            let t = &c.tower;
            let item1 = (c.h == c.k, c.rd3 == c.rd2_h);
            let item2 = (c.rd2_h, c.rd3);
            let item3 = if c.order <= 12 && c.rd2_k {
                (is_separable(&t.b, &t.c_gens_in_b()).expect("separability decides"), c.rd3)
            } else {
                (false, true)
            };
            let item5 =
                if c.k.len() == 1 { (is_left_projective(&t.a, &t.b, &t.ba).expect("projectivity decides"), c.rd3) } else { (false, true) };
            [item1, item2, item3, item5]
        })
        .collect();
    let mut detail = Vec::new();
    let mut passed = true;
    for (i, name) in ["(1)", "(2)", "(3)", "(5)"].iter().enumerate() {
        let applicable = results.iter().filter(|r| r[i].0).count();
        let bad = results.iter().filter(|r| r[i].0 && !r[i].1).count();
        passed &= bad == 0 && applicable > 0;
        detail.push(format!("{name} {applicable} applicable/{bad} bad"));
    }
    outcome(passed, detail.join(", "))
}

fn criterion_3(cases: &[Case]) -> Outcome {
    let small: Vec<_> = cases.iter().filter(|c| c.order <= 12).collect();
    let bad = small.iter().filter(|c| c.rd3 != c.ld3).count();
    outcome(bad == 0, format!("{} towers, {} disagreements", small.len(), bad))
}

fn perms(gens: &[&str]) -> Vec<Perm> {
    gens.iter().map(|s| Perm::parse(s).expect("cycle notation")).collect()
}

fn endo_d2(g: &FiniteGroup, k: &[usize]) -> (bool, usize) {
    let all: Vec<usize> = (0..g.order()).collect();
    let chain = SubgroupChain::new(g, all, k.to_vec()).expect("chain");
    let t = tower_from_chain(&chain, Q);
    let frob = frobenius_system_group(&chain, &t);
    let et = endomorphism_tower(&t.b, &t.c, &t.cb, &frob).expect("endomorphism tower");
    let cg = et.tower.c_gens_in_a();
    let ok = is_rd2(&et.tower.a, &cg).expect("rd2 decides") && is_ld2(&et.tower.a, &cg).expect("ld2 decides");
    (ok, et.tower.a.dim())
}

fn criterion_4() -> Outcome {
    let mut detail = Vec::new();
    let mut passed = true;
    for (name, g, k) in [
        ("(A3,{e})", vec!["(1 2 3)"], vec![]),
        ("(S3,<(1 2)>)", vec!["(1 2 3)", "(1 2)"], vec!["(1 2)"]),
        ("(C4,C2)", vec!["(1 2 3 4)"], vec!["(1 3)(2 4)"]),
    ] {
        let start = Instant::now();
        let grp = FiniteGroup::from_permutations(&perms(&g), 100).expect("group");
        let ks = grp.subgroup_from_perms(&perms(&k)).expect("subgroup");
        let (ok, dim) = endo_d2(&grp, &ks);
        let secs = start.elapsed().as_secs_f64();
        passed &= ok && secs < 60.0;
        detail.push(format!("{name} dim {dim} {}{secs:.1}s", if ok { "" } else { "NOT D2 " }));
    }
    let catalog = small_group_catalog(6).expect("catalog");
    let sweep: Vec<(bool, usize)> = catalog
        .par_iter()
        .flat_map_iter(|cg| {
            let g = cg.group.clone();
            tower_classes(&cg.group, &cg.subgroups)
                .into_iter()
                .filter(move |(h, _)| h.len() == g.order())
                .map(|(_, k)| endo_d2(&cg.group, &k))
                .collect::<Vec<_>>()
        })
        .collect();
    let bad = sweep.iter().filter(|(ok, _)| !ok).count();
    let max_dim = sweep.iter().map(|s| s.1).max().unwrap_or(0);
    passed &= bad == 0;
    detail.push(format!("sweep |H| <= 6: {} pairs, max dim {max_dim}, {bad} failures", sweep.len()));
    outcome(passed, detail.join("; "))
}

#[derive(Default)]
struct StructureTally {
    rd3: usize,
    rd3_bad: Vec<String>,
    non_rd3: usize,
    non_rd3_witnessed: usize,
    smash: usize,
    smash_bad: Vec<String>,
    ld3: usize,
    invariants_bad: Vec<String>,
    balanced_a_s_is_b: usize,
}

fn label(c: &Case) -> String {
    format!("|G|={} |H|={} |K|={}", c.order, c.h.len(), c.k.len())
}

/// Criteria 5 and 6 share one context per tower.
fn structure_sweep(cases: &[Case]) -> StructureTally {
    let per: Vec<StructureTally> = cases
        .par_iter()
        .filter(|c| c.order <= 12)
        .map(|c| {
            let mut tally = StructureTally::default();
            let ctx = DepthContext::new(&c.tower).expect("depth context");
            let t = &c.tower;
            let (m, n) = d3_bimodules(&t.a, &ctx.ab, &ctx.c_gens, Side::Right);
            let eq6 = hom_space(&n, &m).expect("hom").len() == ctx.p.dim();
            let eq7 = hom_space(&m, &n).expect("hom").len() == ctx.e.dim();
            if !(eq6 && eq7) {
                tally.rd3_bad.push(format!("{} hom dimensions", label(c)));
            }
            if c.rd3 {
                tally.rd3 += 1;
                let qb = extract_quasibases(t, Side::Right).expect("rd3 quasibases");
                let morita = morita_products(&ctx, false).passed();
                let pair = pairing(&ctx, Some(&qb)).expect("pairing");
                let coring = coring_on_p(&ctx, &qb).expect("coring").passed();
                let galois = pregalois(&ctx, &qb).expect("pregalois").passed();
                let checks =
                    [("morita", morita), ("pairing", pair.passed() && pair.nondegenerate()), ("coring", coring), ("pregalois", galois)];
                for (name, ok) in checks {
                    if !ok {
                        tally.rd3_bad.push(format!("{} {name}", label(c)));
                    }
                }
            } else {
                tally.non_rd3 += 1;
                if !pregalois_natural(&ctx).expect("pregalois").characterizes_rd3() {
                    tally.non_rd3_witnessed += 1;
                } else {
                    tally.rd3_bad.push(format!("{} characterizes rd3 without rd3", label(c)));
                }
            }
            if c.ld3 {
                tally.ld3 += 1;
                let inv = invariants(&ctx).expect("invariants");
                if !(inv.rho_bijective && inv.anti_hom && inv.contains_b) {
                    tally.invariants_bad.push(label(c));
                }
                let a_c_d2 = c.rd2_k && is_ld2(&t.a, &ctx.c_gens).expect("ld2 decides");
                if a_c_d2 {
                    tally.smash += 1;
                    let s = smash_decomposition(&ctx, None).expect("smash");
                    if !(s.passed() && s.product_matches == Some(true) && s.unital == Some(true) && s.associative == Some(true)) {
                        tally.smash_bad.push(label(c));
                    }
                    if c.h == c.k && inv.balanced {
                        if inv.a_s_is_b == Some(true) {
                            tally.balanced_a_s_is_b += 1;
                        } else {
                            tally.invariants_bad.push(format!("{} A^S != B", label(c)));
                        }
                    }
                }
            }
            tally
        })
        .collect();
    let mut all = StructureTally::default();
    for t in per {
        all.rd3 += t.rd3;
        all.rd3_bad.extend(t.rd3_bad);
        all.non_rd3 += t.non_rd3;
        all.non_rd3_witnessed += t.non_rd3_witnessed;
        all.smash += t.smash;
        all.smash_bad.extend(t.smash_bad);
        all.ld3 += t.ld3;
        all.invariants_bad.extend(t.invariants_bad);
        all.balanced_a_s_is_b += t.balanced_a_s_is_b;
    }
    all
}

fn criterion_5(s: &StructureTally) -> Outcome {
    let passed = s.rd3_bad.is_empty() && s.rd3 > 0 && s.non_rd3_witnessed > 0 && s.non_rd3_witnessed == s.non_rd3;
    let mut detail = format!(
        "{} towers with hom dimensions checked, {} rD3 towers, {} non-rD3 witnessed of {}",
        s.rd3 + s.non_rd3,
        s.rd3,
        s.non_rd3_witnessed,
        s.non_rd3
    );
    if !s.rd3_bad.is_empty() {
        detail += &format!("; failures: {}", s.rd3_bad.join(", "));
    }
    outcome(passed, detail)
}

fn criterion_6(s: &StructureTally) -> Outcome {
    let passed = s.smash_bad.is_empty() && s.invariants_bad.is_empty() && s.smash > 0 && s.balanced_a_s_is_b >= 3;
    let mut detail = format!(
        "{} lD3 towers with A|C D2, {} lD3 towers with A^J = End_E A, {} balanced with A^S = B",
        s.smash, s.ld3, s.balanced_a_s_is_b
    );
    for (name, bad) in [("smash", &s.smash_bad), ("invariants", &s.invariants_bad)] {
        if !bad.is_empty() {
            detail += &format!("; {name} failures: {}", bad.join(", "));
        }
    }
    outcome(passed, detail)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    let mut passed = true;
    for (p, n) in [(2, 4), (2, 6), (3, 2), (3, 4), (5, 2)] {
        let t = FieldTower::new(p, n).expect("field tower");
        let r = jb_roundtrip(&t, &[vec![frobenius(&t.e, t.p, 1)]]).expect("round trip");
        let divisors = (1..=n).filter(|d| n % d == 0).count();
        let dims = r.entries.iter().all(|e| e.dim_gal == e.expected_dim_gal && e.dim_gal == (n / e.d).pow(2) * e.d);
        let ok = r.passed() && dims && r.entries.len() == divisors && r.entries.iter().all(|e| e.fix_gal && e.gal_fix_gal);
        passed &= ok;
        detail.push(format!("F{p}^{n}:{}", if ok { "ok" } else { "FAIL" }));
    }
    let secs = start.elapsed().as_secs_f64();
    passed &= secs < 10.0;
    outcome(passed, format!("{} in {secs:.1}s", detail.join(" ")))
}

fn criterion_8() -> Outcome {
    let mut detail = Vec::new();
    let d2 = quaternion_tower(true).expect("quaternions");
    let basis = vec![d2.a.basis_vec(0), d2.a.basis_vec(2)];
    let r = division_criteria(&d2, &basis).expect("division criteria");
    let eq_ok = r.a_b_eq_b_a && r.b_rd2 && r.b_ld2 && r.quasibases == Some(QuasibaseStatus::Verified) && r.passed();
    detail.push(format!("H|Q(i): aB = Ba {}, D2 {}", r.a_b_eq_b_a, r.b_rd2 && r.b_ld2));
    let d3 = quaternion_tower(false).expect("quaternions");
    let r = division_criteria(&d3, &basis).expect("division criteria");
    let qb_ok = r.c_a_in_a_b && r.ld3 && r.quasibases == Some(QuasibaseStatus::Verified);
    detail.push(format!("H|Q(i)|Q: quasibases {:?}", r.quasibases));

    let trivial = FiniteGroup::from_table(vec![vec![0]], None).expect("trivial group");
    let w = weak_hopf_groupoid(&[GroupoidComponent { objects: 2, group: trivial }], Q).expect("groupoid");
    let idem = |s: &str, pick: usize| {
        let b = s.as_bytes();
        format!("e{}{}", b[pick] as char, b[pick] as char)
    };
    let pi_l = w.pi_l.len() == 4 && w.pi_l.iter().all(|(x, y)| *y == idem(x, 1));
    let pi_r = w.pi_r.len() == 4 && w.pi_r.iter().all(|(x, y)| *y == idem(x, 2));
    let groupoid_ok = w.passed() && pi_l && pi_r && !w.delta_unit_is_trivial;
    detail.push(format!("groupoid: pi_l {pi_l}, pi_r {pi_r}, delta(1) != 1x1 {}", !w.delta_unit_is_trivial));
    outcome(eq_ok && qb_ok && groupoid_ok, detail.join("; "))
}

fn criterion_9(cases: &[Case]) -> Outcome {
    let mut towers: Vec<(Tower, Option<bool>)> = cases.iter().filter(|c| c.order <= 12).map(|c| (c.tower.clone(), Some(c.ld3))).collect();
    // Modular group algebras over F2, where the algebras are not semisimple.
    let f2 = Field::prime(2).expect("prime");
    for cg in small_group_catalog(8).expect("catalog") {
        for (h, k) in tower_classes(&cg.group, &cg.subgroups) {
            let chain = SubgroupChain::new(&cg.group, h, k).expect("chain");
            towers.push((tower_from_chain(&chain, f2), None));
        }
    }
    let results: Vec<Option<bool>> = towers
        .par_iter()
        .map(|(t, ld3)| {
            if !is_right_projective(&t.a, &t.b, &t.ba).expect("projectivity decides") {
                return None;
            }
            let direct = ld3.unwrap_or_else(|| is_ld3(t).expect("ld3 decides"));
            Some(direct == is_ld3_via_endo(t).expect("endo route decides"))
        })
        .collect();
    let compared = results.iter().flatten().count();
    let bad = results.iter().flatten().filter(|ok| !**ok).count();
    outcome(bad == 0 && compared > 0, format!("{compared} towers compared, {bad} disagreements"))
}

fn criterion_10(first: &Census) -> Outcome {
    let second = census_q16();
    let identical = census_jsonl(first) == census_jsonl(&second);
    let mut detail = vec![format!("order 16 over Q byte-identical {identical}")];
    let mut passed = identical;
    for (p, max_order) in [(2, 8), (3, 12)] {
        let opts = CensusOptions { max_order, field: Field::prime(p).expect("prime"), include_modular: true, ..CensusOptions::default() };
        let (a, b) = (census(&opts), census(&opts));
        let ok = match (&a, &b) {
            (Ok(a), Ok(b)) => a.summary.violations == 0 && census_jsonl(a) == census_jsonl(b),
            _ => false,
        };
        passed &= ok;
        let towers = a.map(|c| c.records.len()).unwrap_or(0);
        detail.push(format!("F{p} up to {max_order} ({towers} towers, modular included) {}", if ok { "ok" } else { "FAIL" }));
    }
    outcome(passed, detail.join("; "))
}

fn report(n: usize, name: &str, start: Instant, o: Outcome, failures: &mut usize) {
    if !o.passed {
        *failures += 1;
    }
    println!("criterion {n:>2} {:<4} {name} [{:.1}s]: {}", if o.passed { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64(), o.detail);
}

fn main() -> ExitCode {
    let mut failures = 0;
    let start = Instant::now();
    let c = census_q16();
    report(1, "double-coset criterion is sound over the order-16 census", start, criterion_1(&c), &mut failures);

    let start = Instant::now();
    let catalog = small_group_catalog(16).expect("catalog");
    let cases = cases(&catalog, &c);
    report(2, "depth consistency properties", start, criterion_2(&cases), &mut failures);

    let start = Instant::now();
    report(3, "right and left depth three agree on group towers", start, criterion_3(&cases), &mut failures);

    let start = Instant::now();
    report(4, "endomorphism towers are depth two", start, criterion_4(), &mut failures);

    let start = Instant::now();
    let tally = structure_sweep(&cases);
    report(5, "structure suite on right depth-three towers", start, criterion_5(&tally), &mut failures);
    let start = Instant::now();
    report(6, "smash products and invariants", start, criterion_6(&tally), &mut failures);

    let start = Instant::now();
    report(7, "finite field Galois round trips", start, criterion_7(), &mut failures);

    let start = Instant::now();
    report(8, "division algebra criteria and groupoid maps", start, criterion_8(), &mut failures);

    let start = Instant::now();
    report(9, "left depth three through End A_B", start, criterion_9(&cases), &mut failures);

    let start = Instant::now();
    report(10, "census integrity", start, criterion_10(&c), &mut failures);

    if failures == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
