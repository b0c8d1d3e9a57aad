use depthtower::catalog::{small_group_catalog, GROUP_COUNTS};

#[test]
fn catalog_counts_match_known_classification() {
    let cat = small_group_catalog(24).unwrap();
    for n in 1..=24 {
        let got = cat.iter().filter(|g| g.group.order() == n).count();
        assert_eq!(got, GROUP_COUNTS[n - 1], "order {n}");
    }
    for g in &cat {
        assert!(g.subgroups.iter().all(|s| g.group.is_subgroup(s)));
        assert_eq!(g.subgroups.first().map(|s| s.len()), Some(1));
        assert_eq!(g.subgroups.last().map(|s| s.len()), Some(g.group.order()));
    }
}
