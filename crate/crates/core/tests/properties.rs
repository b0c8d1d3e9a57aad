use proptest::prelude::*;
use proptest::sample::{select, Index};

use depthtower::algebra::Algebra;
use depthtower::builders::finite_field_algebra;
use depthtower::galois::{augmented_rank_bound, gal, rank_bound_witness, Augmentation, FieldTower};
use depthtower::groups::{d3_group_criterion, FiniteGroup, Perm, SubgroupChain};
use depthtower::linalg::{LinMap, Matrix};
use depthtower::{Field, Scalar};

fn perm(degree: usize) -> impl Strategy<Value = Perm> {
    Just((0..degree as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Perm::from_images(v).unwrap())
}

/// A permutation group on at most five points with two subgroups `K <= H`.
fn group_with_chain() -> impl Strategy<Value = (FiniteGroup, Vec<usize>, Vec<usize>)> {
    (perm(5), perm(5), any::<Index>(), any::<Index>()).prop_map(|(x, y, i, j)| {
        let g = FiniteGroup::from_permutations(&[x, y], 120).unwrap();
        let subs = g.subgroups();
        let h = subs[i.index(subs.len())].clone();
        let below: Vec<&Vec<usize>> = subs.iter().filter(|s| s.iter().all(|e| h.contains(e))).collect();
        let k = below[j.index(below.len())].clone();
        (g, h, k)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_closure_is_least_normal_overgroup((g, _h, k) in group_with_chain()) {
        let nc = g.normal_closure(&k);
        prop_assert!(k.iter().all(|e| nc.contains(e)));
        prop_assert!(g.is_normal(&nc));
        prop_assert_eq!(g.normal_closure(&nc), nc.clone());
        for n in g.subgroups().iter().filter(|s| g.is_normal(s) && k.iter().all(|e| s.contains(e))) {
            prop_assert!(nc.iter().all(|e| n.contains(e)));
        }
    }

    #[test]
    fn double_cosets_partition_the_group((g, h, k) in group_with_chain()) {
        let classes = g.double_cosets(&h, &k);
        prop_assert_eq!(classes.iter().map(|(_, c)| c.len()).sum::<usize>(), g.order());
        let mut all: Vec<usize> = classes.iter().flat_map(|(_, c)| c.iter().copied()).collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..g.order()).collect::<Vec<_>>());
        for (rep, c) in &classes {
            prop_assert_eq!(c.iter().min(), Some(rep));
        }
    }

    #[test]
    fn normal_subgroups_satisfy_the_criterion((g, h, k) in group_with_chain()) {
        let chain = SubgroupChain::new(&g, h.clone(), k.clone()).unwrap();
        if g.is_normal(&k) || g.is_normal(&h) {
            prop_assert!(d3_group_criterion(&chain));
        }
        prop_assert_eq!(d3_group_criterion(&chain), g.normal_closure(&k).iter().all(|e| h.contains(e)));
    }

    #[test]
    fn gal_reverses_inclusions((p, n) in select(vec![(2u64, 4usize), (2, 6), (3, 4), (5, 2)])) {
        let t = FieldTower::new(p, n).unwrap();
        let gals: Vec<(usize, _)> = t.subfields.iter().map(|(d, f)| (*d, gal(&t.e, f).unwrap())).collect();
        for (d, small) in &gals {
            for (d2, large) in &gals {
                if d2 % d == 0 {
                    prop_assert!(large.basis().iter().all(|f| small.contains(f)), "Gal(F_{}) not inside Gal(F_{})", d2, d);
                }
            }
        }
    }
}

/// `F_5[x]/(x²)`, a local ring, with the augmentation `x ↦ 0` onto `F_5`.
fn dual_numbers() -> (Algebra, Augmentation) {
    let f = Field::Prime(5);
    let one = f.one();
    let mult = vec![vec![vec![(0, one.clone())], vec![(1, one.clone())]], vec![vec![(1, one.clone())], vec![]]];
    let a = Algebra::new(f, vec!["1".into(), "x".into()], mult, vec![one.clone(), f.zero()], None).unwrap();
    let f5 = finite_field_algebra(5, 1).unwrap().0;
    let aug = Augmentation::new(&a, f5, vec![vec![one], vec![f.zero()]]).unwrap();
    (a, aug)
}

fn ring(which: usize) -> (Algebra, Augmentation) {
    match which {
        0 => {
            let a = finite_field_algebra(5, 1).unwrap().0;
            let aug = Augmentation::identity(&a);
            (a, aug)
        }
        1 => {
            let a = finite_field_algebra(5, 2).unwrap().0;
            let aug = Augmentation::identity(&a);
            (a, aug)
        }
        _ => dual_numbers(),
    }
}

fn scalars(f: Field, xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| f.from_i64(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rank_bound_never_fails(
        which in 0usize..3,
        n in 1usize..4,
        m in 1usize..5,
        entries in proptest::collection::vec(0i64..5, 64),
        identity_first in any::<bool>(),
    ) {
        let (a, aug) = ring(which);
        let (d, f) = (a.dim(), a.field());
        let mut it = entries.iter().copied().cycle();
        let s: Vec<LinMap> = (0..n)
            .map(|j| {
                if j == 0 && identity_first {
                    LinMap::identity(d, f)
                } else {
                    let data = scalars(f, &(0..d * d).map(|_| it.next().unwrap()).collect::<Vec<_>>());
                    LinMap::from_matrix(&Matrix::from_flat(d, d, data, f))
                }
            })
            .collect();
        let coeffs: Vec<Vec<Vec<Scalar>>> = (0..m)
            .map(|_| {
                (0..n)
                    .map(|j| {
                        if identity_first && m == 1 {
                            if j == 0 { a.unit().to_vec() } else { a.zero_vec() }
                        } else {
                            scalars(f, &(0..d).map(|_| it.next().unwrap()).collect::<Vec<_>>())
                        }
                    })
                    .collect()
            })
            .collect();
        let witness = rank_bound_witness(&a, &s, &coeffs);
        if identity_first && m == 1 {
            prop_assert!(witness.is_some());
        }
        if m > n {
            prop_assert!(witness.is_none());
        }
        if let Some((r, e)) = witness {
            let rep = augmented_rank_bound(&a, &s, &r, &e, &aug).unwrap();
            prop_assert!(rep.product_is_identity && rep.bound_holds);
            prop_assert!(m <= n);
            prop_assert!(rep.rank_z >= m * aug.target.dim());
        }
    }
}
