use serde::Serialize;

use crate::builders::{groupoid_algebra, Arrow, GroupoidComponent};
use crate::error::Result;
use crate::field::{Field, Scalar};
use crate::linalg::SparseVec;

#[derive(Clone, Debug, Serialize)]
pub struct WeakHopfReport {
    pub objects: usize,
    pub arrows: usize,
    /// `Δ(1) = 1 ⊗ 1`; false as soon as there are two objects.
    pub delta_unit_is_trivial: bool,
    /// `Δ(gh) = Δ(g)Δ(h)` on basis pairs.
    pub multiplicative: bool,
    pub counit_laws: bool,
    /// A pair `(g, h)` with `gh = 0`, so `ε(gh) ≠ ε(g)ε(h)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counit_witness: Option<(String, String)>,
    /// `ε(xyz) = ε(xy₁)ε(y₂z) = ε(xy₂)ε(y₁z)`.
    pub weak_counit: bool,
    /// `(Δ(1) ⊗ 1)(1 ⊗ Δ(1)) = Δ²(1) = (1 ⊗ Δ(1))(Δ(1) ⊗ 1)`.
    pub weak_unit: bool,
    /// `x₁S(x₂) = Π^L(x)`, `S(x₁)x₂ = Π^R(x)`, `S(x₁)x₂S(x₃) = S(x)`.
    pub antipode_laws: bool,
    /// `Π^L(x) = ε(1₁x)1₂` and `Π^R(x) = 1₁ε(x1₂)` on every arrow.
    pub pi_l: Vec<(String, String)>,
    pub pi_r: Vec<(String, String)>,
    /// `Π^L(g)` is the identity at the target of `g` and `Π^R(g)` the
    /// identity at its source.
    pub pi_targets: bool,
}

impl WeakHopfReport {
    pub fn passed(&self) -> bool {
        let degenerate = self.objects >= 2;
        self.multiplicative
            && self.counit_laws
            && self.weak_counit
            && self.weak_unit
            && self.antipode_laws
            && self.pi_targets
            && self.delta_unit_is_trivial != degenerate
            && self.counit_witness.is_some() == degenerate
    }
}

/// Weak Hopf structure of a groupoid algebra: `Δ(g) = g ⊗ g`, `ε(g) = 1`,
/// `S(g) = g⁻¹`.
pub fn weak_hopf_groupoid(components: &[GroupoidComponent], field: Field) -> Result<WeakHopfReport> {
    let (h, arrows) = groupoid_algebra(components, field)?;
    let d = h.dim();
    let one = field.one();
    let index = |a: &Arrow| arrows.iter().position(|x| x == a).expect("arrow in basis");
    let inverse: Vec<usize> = arrows
        .iter()
        .map(|a| {
            let g = &components[a.component].group;
            index(&Arrow { component: a.component, target: a.source, source: a.target, element: g.inv(a.element) })
        })
        .collect();
    let identities: Vec<usize> = (0..d).filter(|&i| arrows[i].source == arrows[i].target && arrows[i].element == 0).collect();
    let objects = identities.len();
    let prod = |i: usize, j: usize| -> Option<usize> { h.mul_basis(i, j).first().map(|(k, _)| *k) };
    let eps = |v: &SparseVec| v.iter().fold(field.zero(), |acc, (_, c)| acc.add(c));

    // Δ(1) = Σ_x e_x ⊗ e_x in H ⊗ H, indices i*d + j.
    let mut delta_one: Vec<(usize, usize)> = identities.iter().map(|&e| (e, e)).collect();
    delta_one.sort();
    let mut one_one: Vec<(usize, usize)> = identities.iter().flat_map(|&x| identities.iter().map(move |&y| (x, y))).collect();
    one_one.sort();
    let delta_unit_is_trivial = delta_one == one_one;

    let mut multiplicative = true;
    let mut counit_witness = None;
    for i in 0..d {
        for j in 0..d {
            let gh = h.mul_basis(i, j);
            let mut lhs: Vec<(usize, usize, Scalar)> = gh.iter().map(|(k, c)| (*k, *k, c.clone())).collect();
            let mut rhs: Vec<(usize, usize, Scalar)> =
                gh.iter().flat_map(|(k, c)| gh.iter().map(move |(l, e)| (*k, *l, c.mul(e)))).collect();
            lhs.sort_by_key(|t| (t.0, t.1));
            rhs.sort_by_key(|t| (t.0, t.1));
            multiplicative &= lhs == rhs;
            if gh.is_empty() && counit_witness.is_none() {
                counit_witness = Some((h.labels()[i].clone(), h.labels()[j].clone()));
            }
        }
    }
    // (ε ⊗ id)Δ(g) = ε(g) g = g.
    let counit_laws = (0..d).all(|i| eps(&vec![(i, one.clone())]) == one);

    let eps_prod = |xs: &[usize]| -> Scalar {
        let mut cur = Some(xs[0]);
        for &y in &xs[1..] {
            cur = cur.and_then(|c| prod(c, y));
        }
        if cur.is_some() {
            one.clone()
        } else {
            field.zero()
        }
    };
    let mut weak_counit = true;
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let lhs = eps_prod(&[x, y, z]);
                // Δ(y) = y ⊗ y, so both Sweedler orders coincide.
                let rhs = eps_prod(&[x, y]).mul(&eps_prod(&[y, z]));
                weak_counit &= lhs == rhs;
            }
        }
    }

    // Δ²(1) = Σ e_x ⊗ e_x ⊗ e_x, with 1 = Σ_b e_b in the free slots.
    let left: Vec<[usize; 3]> = identities.iter().flat_map(|&x| identities.iter().map(move |&b| [x, x, b])).collect();
    let right: Vec<[usize; 3]> = identities.iter().flat_map(|&y| identities.iter().map(move |&b| [b, y, y])).collect();
    let mul3 = |l: &[[usize; 3]], r: &[[usize; 3]]| -> Vec<[usize; 3]> {
        let mut out: Vec<[usize; 3]> = l
            .iter()
            .flat_map(|x| r.iter().map(move |y| (x, y)))
            .filter_map(|(x, y)| Some([prod(x[0], y[0])?, prod(x[1], y[1])?, prod(x[2], y[2])?]))
            .collect();
        out.sort();
        out
    };
    let cube: Vec<[usize; 3]> = identities.iter().map(|&e| [e, e, e]).collect();
    let weak_unit = mul3(&left, &right) == cube && mul3(&right, &left) == cube;

    // Π^L(g) = Σ_x ε(e_x g) e_x, Π^R(g) = Σ_x e_x ε(g e_x).
    let pi = |g: usize, left: bool| -> Vec<usize> {
        identities.iter().copied().filter(|&e| if left { prod(e, g).is_some() } else { prod(g, e).is_some() }).collect()
    };
    let mut antipode_laws = true;
    let mut pi_targets = true;
    let mut pi_l = Vec::with_capacity(d);
    let mut pi_r = Vec::with_capacity(d);
    for g in 0..d {
        let (pl, pr) = (pi(g, true), pi(g, false));
        let s = inverse[g];
        antipode_laws &= prod(g, s).map(|k| vec![k]).unwrap_or_default() == pl;
        antipode_laws &= prod(s, g).map(|k| vec![k]).unwrap_or_default() == pr;
        antipode_laws &= prod(s, g).and_then(|k| prod(k, s)) == Some(s);
        let a = &arrows[g];
        let target = index(&Arrow { component: a.component, target: a.target, source: a.target, element: 0 });
        let source = index(&Arrow { component: a.component, target: a.source, source: a.source, element: 0 });
        pi_targets &= pl == vec![target] && pr == vec![source];
        let label = |v: &[usize]| v.iter().map(|&k| h.labels()[k].clone()).collect::<Vec<_>>().join("+");
        pi_l.push((h.labels()[g].clone(), label(&pl)));
        pi_r.push((h.labels()[g].clone(), label(&pr)));
    }

    Ok(WeakHopfReport {
        objects,
        arrows: d,
        delta_unit_is_trivial,
        multiplicative,
        counit_laws,
        counit_witness,
        weak_counit,
        weak_unit,
        antipode_laws,
        pi_l,
        pi_r,
        pi_targets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{FiniteGroup, Perm};

    fn trivial() -> FiniteGroup {
        FiniteGroup::from_table(vec![vec![0]], None).unwrap()
    }

    #[test]
    fn matrix_units_project_to_diagonal() {
        let r = weak_hopf_groupoid(&[GroupoidComponent { objects: 2, group: trivial() }], Field::Rational).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(!r.delta_unit_is_trivial);
        assert!(r.pi_l.contains(&("e12".into(), "e11".into())));
        assert!(r.pi_r.contains(&("e12".into(), "e22".into())));
    }

    #[test]
    fn one_object_is_a_hopf_algebra() {
        let g = FiniteGroup::from_permutations(&[Perm::parse("(1 2 3)").unwrap()], 10).unwrap();
        let r = weak_hopf_groupoid(&[GroupoidComponent { objects: 1, group: g }], Field::Rational).unwrap();
        assert!(r.passed() && r.delta_unit_is_trivial && r.counit_witness.is_none(), "{r:?}");
    }

    #[test]
    fn mixed_components() {
        let z2 = FiniteGroup::from_permutations(&[Perm::parse("(1 2)").unwrap()], 10).unwrap();
        let comps = [GroupoidComponent { objects: 2, group: z2 }, GroupoidComponent { objects: 1, group: trivial() }];
        let r = weak_hopf_groupoid(&comps, Field::Rational).unwrap();
        assert_eq!(r.arrows, 9);
        assert!(r.passed(), "{r:?}");
    }
}
