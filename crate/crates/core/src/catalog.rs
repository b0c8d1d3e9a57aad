//! All groups of order at most 24, up to isomorphism.
//!
//! Candidates are cyclic groups, the generalized quaternion groups of
//! orders 8 and 16, and every semidirect product `N ⋊ H` of smaller catalog
//! groups (direct products included via the trivial action). Duplicates are
//! removed by fingerprint and then by brute-force isomorphism search. This
//! family is exhaustive up to order 24: every group of such order is either
//! cyclic, generalized quaternion, or splits over a normal subgroup.

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Perm, DEFAULT_ORDER_CAP};

pub const MAX_CATALOG_ORDER: usize = 24;

/// Number of isomorphism classes of groups of order `n`, `n = 1..=24`.
pub const GROUP_COUNTS: [usize; 24] = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14, 1, 5, 1, 5, 2, 2, 1, 15];

/// A catalog entry: the group, a stable id and its subgroup list.
#[derive(Clone, Debug)]
pub struct CatalogGroup {
    /// `"<order>.<index>"`, index in catalog order within the order.
    pub id: String,
    pub group: FiniteGroup,
    pub subgroups: Vec<Vec<usize>>,
}

pub fn cyclic(n: usize) -> FiniteGroup {
    let p = Perm((0..n as u32).map(|i| (i + 1) % n as u32).collect());
    FiniteGroup::from_permutations(&[p], DEFAULT_ORDER_CAP).expect("cyclic group within cap")
}

/// Generalized quaternion group of order `4m`, as a Cayley table on pairs
/// `x^i y^e` with `x^{2m} = 1`, `y^2 = x^m`, `y x y^-1 = x^-1`.
pub fn quaternion(m: usize) -> FiniteGroup {
    let n2 = 2 * m;
    let idx = |i: usize, e: usize| e * n2 + i % n2;
    let mut table = vec![vec![0; 2 * n2]; 2 * n2];
    for e1 in 0..2 {
        for i1 in 0..n2 {
            for e2 in 0..2 {
                for i2 in 0..n2 {
                    // x^i1 y^e1 x^i2 y^e2 = x^(i1 ± i2) y^(e1+e2)
                    let i2s = if e1 == 1 { n2 - i2 } else { i2 };
                    let mut i = i1 + i2s;
                    let mut e = e1 + e2;
                    if e == 2 {
                        e = 0;
                        i += m;
                    }
                    table[idx(i1, e1)][idx(i2, e2)] = idx(i, e);
                }
            }
        }
    }
    regularize(&FiniteGroup::from_table(table, None).expect("quaternion table is a group"))
}

/// Rebuilds a group from its right regular representation so that element
/// order and labels follow the breadth-first convention.
pub fn regularize(g: &FiniteGroup) -> FiniteGroup {
    let reg = g.regular_permutations();
    let gens: Vec<Perm> = g.small_generating_set().iter().map(|&a| reg[a].clone()).collect();
    FiniteGroup::from_permutations(&gens, DEFAULT_ORDER_CAP.max(g.order())).expect("regular rep within cap")
}

/// Automorphisms of `n` as element maps.
pub fn automorphisms(n: &FiniteGroup) -> Vec<Vec<usize>> {
    let gens = n.small_generating_set();
    let cands: Vec<Vec<usize>> =
        gens.iter().map(|&g| (0..n.order()).filter(|&x| n.element_order(x) == n.element_order(g)).collect()).collect();
    let mut out = Vec::new();
    for_each_choice(&cands, |imgs| {
        if let Some(f) = n.extend_hom(&gens, imgs, n) {
            let mut s = f.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() == n.order() {
                out.push(f);
            }
        }
    });
    out
}

fn for_each_choice(cands: &[Vec<usize>], mut f: impl FnMut(&[usize])) {
    if cands.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut choice = vec![0usize; cands.len()];
    loop {
        let imgs: Vec<usize> = choice.iter().enumerate().map(|(i, &c)| cands[i][c]).collect();
        f(&imgs);
        let mut i = 0;
        loop {
            if i == cands.len() {
                return;
            }
            choice[i] += 1;
            if choice[i] < cands[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Homomorphisms `h -> Aut(n)`, as lists of automorphisms indexed by
/// elements of `h`.
fn actions(n: &FiniteGroup, h: &FiniteGroup, aut: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let na = aut.len();
    let mut index = std::collections::HashMap::new();
    for (i, a) in aut.iter().enumerate() {
        index.insert(a.clone(), i);
    }
    let compose = |a: usize, b: usize| -> usize {
        // phi(xy) = phi(x) ∘ phi(y)
        let f: Vec<usize> = (0..n.order()).map(|z| aut[a][aut[b][z]]).collect();
        index[&f]
    };
    let aut_table: Vec<Vec<usize>> = (0..na).map(|a| (0..na).map(|b| compose(a, b)).collect()).collect();
    let aut_group = AutTable { table: aut_table };
    let hgens = h.small_generating_set();
    let mut out = Vec::new();
    let cands: Vec<Vec<usize>> = hgens.iter().map(|_| (0..na).collect()).collect();
    for_each_choice(&cands, |imgs| {
        if let Some(f) = aut_group.extend(h, &hgens, imgs) {
            out.push(f);
        }
    });
    out
}

struct AutTable {
    table: Vec<Vec<usize>>,
}

impl AutTable {
    fn identity(&self) -> usize {
        (0..self.table.len()).find(|&a| (0..self.table.len()).all(|b| self.table[a][b] == b)).unwrap()
    }

    fn extend(&self, h: &FiniteGroup, gens: &[usize], imgs: &[usize]) -> Option<Vec<usize>> {
        let mut f = vec![usize::MAX; h.order()];
        f[0] = self.identity();
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&g, &gi) in gens.iter().zip(imgs) {
                let y = h.mul(x, g);
                let fy = self.table[f[x]][gi];
                if f[y] == usize::MAX {
                    f[y] = fy;
                    queue.push_back(y);
                } else if f[y] != fy {
                    return None;
                }
            }
        }
        let ok = (0..h.order()).all(|a| (0..h.order()).all(|b| f[h.mul(a, b)] == self.table[f[a]][f[b]]));
        ok.then_some(f)
    }
}

/// `n ⋊ h` where `h` acts through `phi[y]` (an automorphism of `n`).
pub fn semidirect(n: &FiniteGroup, h: &FiniteGroup, aut: &[Vec<usize>], phi: &[usize]) -> FiniteGroup {
    let (a, b) = (n.order(), h.order());
    let idx = |x: usize, y: usize| y * a + x;
    let mut table = vec![vec![0; a * b]; a * b];
    for y1 in 0..b {
        for x1 in 0..a {
            for y2 in 0..b {
                for x2 in 0..a {
                    let x = n.mul(x1, aut[phi[y1]][x2]);
                    table[idx(x1, y1)][idx(x2, y2)] = idx(x, h.mul(y1, y2));
                }
            }
        }
    }
    regularize(&FiniteGroup::from_table(table, None).expect("semidirect product table is a group"))
}

/// All groups of order `<= max_order` up to isomorphism, ordered by order
/// and then by discovery order, each with its subgroups.
pub fn small_group_catalog(max_order: usize) -> Result<Vec<CatalogGroup>> {
    if max_order > MAX_CATALOG_ORDER {
        return Err(Error::Precondition(format!("catalog covers orders up to {MAX_CATALOG_ORDER}")));
    }
    let mut by_order: Vec<Vec<FiniteGroup>> = vec![Vec::new(); max_order + 1];
    for order in 1..=max_order {
        let mut found: Vec<FiniteGroup> = Vec::new();
        let add = |g: FiniteGroup, found: &mut Vec<FiniteGroup>| {
            if !found.iter().any(|f| f.is_isomorphic(&g)) {
                found.push(g);
            }
        };
        add(cyclic(order), &mut found);
        if order == 8 {
            add(quaternion(2), &mut found);
        }
        if order == 16 {
            add(quaternion(4), &mut found);
        }
        for a in 2..order {
            if order % a != 0 || order / a < 2 {
                continue;
            }
            let b = order / a;
            for n in &by_order[a] {
                let aut = automorphisms(n);
                for h in &by_order[b] {
                    for phi in actions(n, h, &aut) {
                        add(semidirect(n, h, &aut, &phi), &mut found);
                    }
                }
            }
        }
        by_order[order] = found;
    }
    let mut out = Vec::new();
    for (order, groups) in by_order.into_iter().enumerate() {
        for (i, g) in groups.into_iter().enumerate() {
            let subgroups = g.subgroups();
            out.push(CatalogGroup { id: format!("{order}.{}", i + 1), group: g, subgroups });
        }
    }
    Ok(out)
}
