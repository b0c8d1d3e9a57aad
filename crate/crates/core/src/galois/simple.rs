use serde::Serialize;

use super::{fix, frobenius, gal, same_space};
use crate::algebra::Algebra;
use crate::bimodule::{hom_space, Bimodule, MapSpace};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{LinMap, RowReducer, Subspace};

#[derive(Clone, Debug, Serialize)]
pub struct SimpleEntry {
    pub dim_e: usize,
    pub dim_end: usize,
    /// `End A_E` contains every `λ_x ∘ ρ_y`.
    pub contains_ae: bool,
    pub fix_gal: bool,
    pub gal_fix_gal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimpleReport {
    pub dim_a: usize,
    pub dim_center: usize,
    /// `End_{A^e} A`, read off at `1`, agrees with the center.
    pub center_matches: bool,
    /// Dimension of the image of `A^e` in `End A`.
    pub dim_ae_image: usize,
    /// All intermediate fields of the ground field and the center are listed
    /// (always over `F_p`; over `Q` only when the center is the ground field).
    pub fields_complete: bool,
    pub entries: Vec<SimpleEntry>,
}

impl SimpleReport {
    pub fn passed(&self) -> bool {
        self.center_matches && self.entries.iter().all(|e| e.contains_ae && e.fix_gal && e.gal_fix_gal)
    }
}

fn ideal_closure(a: &Algebra, x: &[Scalar]) -> usize {
    let maps: Vec<LinMap> = a.generators().iter().flat_map(|g| [a.left_mul(g), a.right_mul(g)]).collect();
    let mut red = RowReducer::new(a.dim(), a.field());
    red.insert_dense(x);
    let mut queue = vec![x.to_vec()];
    while let Some(v) = queue.pop() {
        for m in &maps {
            let w = m.apply(&v);
            if red.insert_dense(&w) {
                queue.push(w);
            }
        }
    }
    red.rank()
}

/// Gal/Fix round trips for the fields between the ground field and the
/// center of a simple algebra.
pub fn simple_algebra_correspondence(a: &Algebra) -> Result<SimpleReport> {
    let d = a.dim();
    let field = a.field();
    if (0..d).any(|i| ideal_closure(a, &a.basis_vec(i)) != d) {
        return Err(Error::Precondition("algebra is not simple: a basis element generates a proper ideal".into()));
    }
    let reg = Bimodule::regular(a, a.generators(), a.generators());
    let ends = hom_space(&reg, &reg)?;
    let from_ends = Subspace::span(d, field, ends.iter().map(|f| f.apply(a.unit())));
    let center = a.center();
    let (z, z_in_a) = a.subalgebra(center.basis(), (0..center.dim()).map(|i| format!("z{i}")).collect())?;
    super::division_check(&z).map_err(|_| Error::Precondition("algebra is not simple: the center is not a field".into()))?;
    let ae: Vec<LinMap> = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| a.left_mul(&a.basis_vec(i)).compose(&a.right_mul(&a.basis_vec(j))))
        .collect();
    let ae_space = MapSpace::new(d, d, field, &ae);
    if ae_space.dim() * center.dim() != d * d {
        return Err(Error::Precondition("algebra is not simple: A^e does not act densely".into()));
    }
    let (fields, complete) = match field {
        Field::Prime(p) => {
            let m = z.dim();
            let subs = (1..=m)
                .filter(|k| m % k == 0)
                .map(|k| {
                    let f = frobenius(&z, p, k).axpy(&field.one().neg(), &LinMap::identity(m, field));
                    Subspace::span(d, field, f.kernel().iter().map(|v| z_in_a.apply(&crate::linalg::dense_from_sparse(v, m, field))))
                })
                .collect::<Vec<_>>();
            (subs, true)
        }
        Field::Rational => {
            let ground = Subspace::span(d, field, [a.unit().to_vec()]);
            if center.dim() == 1 {
                (vec![ground], true)
            } else {
                (vec![ground, center.clone()], false)
            }
        }
    };
    let mut entries = Vec::new();
    for e in &fields {
        let g = gal(a, e)?;
        let fx = fix(a, g.basis());
        entries.push(SimpleEntry {
            dim_e: e.dim(),
            dim_end: g.dim(),
            contains_ae: ae.iter().all(|f| g.contains(f)),
            fix_gal: fx == *e,
            gal_fix_gal: same_space(&gal(a, &fx)?, &g),
        });
    }
    Ok(SimpleReport {
        dim_a: d,
        dim_center: center.dim(),
        center_matches: from_ends == center,
        dim_ae_image: ae_space.dim(),
        fields_complete: complete,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{finite_field_algebra, matrix_algebra, quaternion_algebra, tensor_algebra};

    #[test]
    fn matrices_over_f2() {
        let r = simple_algebra_correspondence(&matrix_algebra(2, Field::prime(2).unwrap())).unwrap();
        assert!(r.passed());
        assert_eq!((r.dim_center, r.entries.len()), (1, 1));
    }

    #[test]
    fn matrices_over_f4_viewed_over_f2() {
        let f4 = finite_field_algebra(2, 2).unwrap().0;
        let a = tensor_algebra(&matrix_algebra(2, Field::prime(2).unwrap()), &f4).unwrap();
        let r = simple_algebra_correspondence(&a).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.dim_center, 2);
        assert_eq!(r.entries.iter().map(|e| e.dim_e).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn quaternions_have_rational_center() {
        let r = simple_algebra_correspondence(&quaternion_algebra(Field::Rational, -1, -1).unwrap()).unwrap();
        assert!(r.passed());
        assert_eq!(r.dim_center, 1);
    }

    #[test]
    fn non_simple_is_rejected() {
        let f2 = Field::prime(2).unwrap();
        let a = tensor_algebra(&matrix_algebra(1, f2), &finite_field_algebra(2, 1).unwrap().0).unwrap();
        let b = crate::builders::group_algebra(
            &crate::groups::FiniteGroup::from_permutations(&[crate::groups::Perm::parse("(1 2)").unwrap()], 10).unwrap(),
            Field::Rational,
        );
        assert!(simple_algebra_correspondence(&a).is_ok());
        assert!(matches!(simple_algebra_correspondence(&b), Err(Error::Precondition(_))));
    }
}
