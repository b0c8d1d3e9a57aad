//! Finite groups as Cayley tables, built from permutation generators.
//!
//! Permutations act on the right: `x^(ab) = (x^a)^b`, so the product `ab`
//! applies `a` first. Elements are numbered in breadth-first closure order
//! starting from the identity (index 0), and every subgroup or coset is a
//! sorted list of element indices.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the order of a generated group.
pub const DEFAULT_ORDER_CAP: usize = 200;

/// A permutation of `{0, .., m-1}` stored by images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(m: usize) -> Perm {
        Perm((0..m as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let x = x as usize;
            if x >= images.len() || seen[x] {
                return Err(Error::BadPermutation(format!("images {images:?} are not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// Extends to a larger degree by fixing the new points.
    pub fn padded(&self, m: usize) -> Perm {
        let mut v = self.0.clone();
        v.extend(self.0.len() as u32..m as u32);
        Perm(v)
    }

    /// `self` then `o`.
    pub fn then(&self, o: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| o.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            v[x as usize] = i as u32;
        }
        Perm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Parses cycle notation over the points `1..`, e.g. `(1 2 3)(4 5)`.
    /// Commas are accepted as separators; `()` is the identity.
    pub fn parse(s: &str) -> Result<Perm> {
        let bad = |msg: String| Error::BadPermutation(msg);
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                let tok = rest.split_whitespace().next().unwrap_or(rest);
                return Err(bad(format!("unexpected token '{tok}'")));
            }
            let close = rest.find(')').ok_or_else(|| bad(format!("unclosed cycle in '{rest}'")))?;
            let body = &rest[1..close];
            let mut cyc = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                let x: u32 = tok.parse().map_err(|_| bad(format!("bad point '{tok}'")))?;
                if x == 0 {
                    return Err(bad("points are numbered from 1".into()));
                }
                if cyc.contains(&(x - 1)) {
                    return Err(bad(format!("point {x} repeated in a cycle")));
                }
                cyc.push(x - 1);
            }
            cycles.push(cyc);
            rest = rest[close + 1..].trim_start();
        }
        let m = cycles.iter().flatten().map(|&x| x as usize + 1).max().unwrap_or(0);
        // Cycles are composed left to right, matching the product convention.
        let mut p = Perm::identity(m);
        for c in &cycles {
            let mut q = Perm::identity(m);
            for (i, &x) in c.iter().enumerate() {
                q.0[x as usize] = c[(i + 1) % c.len()];
            }
            p = p.then(&q);
        }
        Ok(p)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
                first = false;
                x = self.0[x] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A finite group stored as a Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    labels: Vec<String>,
    /// Element indices of the generators the group was built from.
    gens: Vec<usize>,
    /// Permutation realization, when built from permutations.
    perms: Vec<Perm>,
}

impl FiniteGroup {
    /// The group generated by `generators`, with elements in breadth-first
    /// order. Generators of different degrees are padded with fixed points.
    pub fn from_permutations(generators: &[Perm], cap: usize) -> Result<FiniteGroup> {
        let m = generators.iter().map(Perm::degree).max().unwrap_or(0);
        let gens: Vec<Perm> = generators.iter().map(|g| g.padded(m)).collect();
        let mut elems = vec![Perm::identity(m)];
        let mut index: HashMap<Perm, usize> = HashMap::new();
        index.insert(elems[0].clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let x = elems[i].then(g);
                if !index.contains_key(&x) {
                    if elems.len() >= cap {
                        return Err(Error::OrderCap(cap));
                    }
                    index.insert(x.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(x);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&elems[a].then(&elems[b])] as u32;
            }
        }
        let inv = elems.iter().map(|p| index[&p.inverse()] as u32).collect();
        let labels = elems.iter().map(|p| p.to_string()).collect();
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        Ok(FiniteGroup { n, table, inv, labels, gens: gen_idx, perms: elems })
    }

    /// A group from a Cayley table, checking the group axioms. Associativity
    /// is checked on every triple up to order 64 and on a deterministic
    /// sample of triples above that.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidAlgebra("Cayley table must be square with entries in range".into()));
        }
        let flat: Vec<u32> = table.iter().flatten().map(|&x| x as u32).collect();
        let m = |a: usize, b: usize| flat[a * n + b] as usize;
        if (0..n).any(|a| m(0, a) != a || m(a, 0) != a) {
            return Err(Error::InvalidAlgebra("element 0 is not the identity".into()));
        }
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let b = (0..n).find(|&b| m(a, b) == 0 && m(b, a) == 0);
            inv[a] = b.ok_or_else(|| Error::InvalidAlgebra(format!("element {a} has no inverse")))? as u32;
        }
        let check = |a: usize, b: usize, c: usize| m(m(a, b), c) == m(a, m(b, c));
        let ok = if n <= 64 {
            (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| check(a, b, c))))
        } else {
            let mut s: u64 = 0x9e3779b97f4a7c15;
            (0..20000).all(|_| {
                let mut next = || {
                    s ^= s << 13;
                    s ^= s >> 7;
                    s ^= s << 17;
                    (s % n as u64) as usize
                };
                let (a, b, c) = (next(), next(), next());
                check(a, b, c)
            })
        };
        if !ok {
            return Err(Error::InvalidAlgebra("Cayley table is not associative".into()));
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| format!("g{i}")).collect());
        Ok(FiniteGroup { n, table: flat, inv, labels, gens: (0..n).collect(), perms: Vec::new() })
    }

    /// The right regular representation as permutations of degree `n`.
    pub fn regular_permutations(&self) -> Vec<Perm> {
        (0..self.n).map(|g| Perm((0..self.n).map(|x| self.mul(x, g) as u32).collect())).collect()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub const fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g a g^-1`.
    pub fn conjugate(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn permutation(&self, a: usize) -> Option<&Perm> {
        self.perms.get(a)
    }

    /// Looks up an element by its permutation.
    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        let m = self.perms.first()?.degree();
        if p.degree() > m && !p.0[m..].iter().enumerate().all(|(i, &x)| x as usize == m + i) {
            return None;
        }
        let mut q = p.padded(m);
        q.0.truncate(m);
        self.perms.iter().position(|x| *x == q)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut out = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let mut mem = vec![false; self.n];
        for &x in set {
            if x >= self.n {
                return false;
            }
            mem[x] = true;
        }
        mem[0] && set.iter().all(|&a| mem[self.inv(a)] && set.iter().all(|&b| mem[self.mul(a, b)]))
    }

    pub fn is_normal(&self, set: &[usize]) -> bool {
        let mut mem = vec![false; self.n];
        for &x in set {
            mem[x] = true;
        }
        set.iter().all(|&a| self.gens_or_all().iter().all(|&g| mem[self.conjugate(a, g)]))
    }

    fn gens_or_all(&self) -> Vec<usize> {
        if self.gens.is_empty() {
            vec![0]
        } else {
            self.gens.clone()
        }
    }

    /// Smallest normal subgroup containing `k`.
    pub fn normal_closure(&self, k: &[usize]) -> Vec<usize> {
        let mut gens: BTreeSet<usize> = k.iter().copied().collect();
        loop {
            let sub = self.generate(&gens.iter().copied().collect::<Vec<_>>());
            let mut grew = false;
            for &a in &sub {
                for g in self.gens_or_all() {
                    let c = self.conjugate(a, g);
                    if sub.binary_search(&c).is_err() && gens.insert(c) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return sub;
            }
        }
    }

    /// The `H`–`K` double cosets `H g K`, each tagged by its least element.
    /// Classes are listed in increasing order of representative.
    pub fn double_cosets(&self, h: &[usize], k: &[usize]) -> Vec<(usize, Vec<usize>)> {
        let mut class = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for g in 0..self.n {
            if class[g] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> =
                h.iter().flat_map(|&x| k.iter().map(move |&y| (x, y))).map(|(x, y)| self.mul(self.mul(x, g), y)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class[m] = out.len();
            }
            out.push((g, members));
        }
        out
    }

    /// Left coset representatives of `k` in `h` (`h = ⊔ x K`), least element
    /// of each coset, in increasing order.
    pub fn left_coset_reps(&self, h: &[usize], k: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut reps = Vec::new();
        for &x in h {
            if seen[x] {
                continue;
            }
            reps.push(x);
            for &y in k {
                seen[self.mul(x, y)] = true;
            }
        }
        reps
    }

    /// All subgroups, sorted by (order, elements). Built from the cyclic
    /// subgroups by closing under joins.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut cyclic: Vec<Vec<usize>> = (0..self.n).map(|g| self.generate(&[g])).collect();
        cyclic.sort();
        cyclic.dedup();
        let mut all: BTreeSet<Vec<usize>> = cyclic.iter().cloned().collect();
        let mut frontier: Vec<Vec<usize>> = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for s in &frontier {
                for c in &cyclic {
                    if c.iter().all(|x| s.binary_search(x).is_ok()) {
                        continue;
                    }
                    let mut gens = s.clone();
                    gens.extend(c);
                    let j = self.generate(&gens);
                    if all.insert(j.clone()) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut v: Vec<Vec<usize>> = all.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    /// `g S g^-1`, sorted.
    pub fn conjugate_set(&self, s: &[usize], g: usize) -> Vec<usize> {
        let mut v: Vec<usize> = s.iter().map(|&a| self.conjugate(a, g)).collect();
        v.sort_unstable();
        v
    }

    /// Isomorphism invariants used to split catalog candidates.
    pub fn fingerprint(&self) -> Fingerprint {
        let mut orders: Vec<usize> = (0..self.n).map(|a| self.element_order(a)).collect();
        orders.sort_unstable();
        let commutators: Vec<usize> = (0..self.n)
            .flat_map(|a| (0..self.n).map(move |b| (a, b)))
            .map(|(a, b)| self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b))))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let derived = self.generate(&commutators);
        Fingerprint { order: self.n, element_orders: orders, center: self.center().len(), abelianization: self.n / derived.len() }
    }

    /// Brute-force isomorphism test: tries every assignment of this group's
    /// generators to elements of `o` with matching orders.
    pub fn is_isomorphic(&self, o: &FiniteGroup) -> bool {
        if self.fingerprint() != o.fingerprint() {
            return false;
        }
        let gens = self.small_generating_set();
        let cands: Vec<Vec<usize>> =
            gens.iter().map(|&g| (0..o.n).filter(|&x| o.element_order(x) == self.element_order(g)).collect()).collect();
        let mut choice = vec![0usize; gens.len()];
        loop {
            let imgs: Vec<usize> = choice.iter().enumerate().map(|(i, &c)| cands[i][c]).collect();
            if self.extend_hom(&gens, &imgs, o).is_some_and(|f| {
                let mut s = f.clone();
                s.sort_unstable();
                s.dedup();
                s.len() == self.n
            }) {
                return true;
            }
            let mut i = 0;
            loop {
                if i == gens.len() {
                    return false;
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

    /// A generating set built greedily from elements of large order.
    pub fn small_generating_set(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = (1..self.n).collect();
        by_order.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut span = vec![0];
        for a in by_order {
            if span.len() == self.n {
                break;
            }
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.generate(&gens);
            }
        }
        gens
    }

    /// Extends `gens[i] -> imgs[i]` to a homomorphism into `o`, if possible.
    /// Returns the full element map.
    pub fn extend_hom(&self, gens: &[usize], imgs: &[usize], o: &FiniteGroup) -> Option<Vec<usize>> {
        let mut f = vec![usize::MAX; self.n];
        f[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&g, &gi) in gens.iter().zip(imgs) {
                let y = self.mul(x, g);
                let fy = o.mul(f[x], gi);
                if f[y] == usize::MAX {
                    f[y] = fy;
                    queue.push_back(y);
                } else if f[y] != fy {
                    return None;
                }
            }
        }
        if f.contains(&usize::MAX) {
            return None;
        }
        let hom = (0..self.n).all(|a| (0..self.n).all(|b| f[self.mul(a, b)] == o.mul(f[a], f[b])));
        hom.then_some(f)
    }

    /// Subgroup given by generator elements, as a sorted set.
    pub fn subgroup_from_perms(&self, gens: &[Perm]) -> Result<Vec<usize>> {
        let idx = gens
            .iter()
            .map(|p| self.index_of(p).ok_or_else(|| Error::ChainViolation(format!("{p} is not in G"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.generate(&idx))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub order: usize,
    pub element_orders: Vec<usize>,
    pub center: usize,
    pub abelianization: usize,
}

/// A chain of subgroups `K <= H <= G`.
#[derive(Clone, Debug)]
pub struct SubgroupChain<'g> {
    pub g: &'g FiniteGroup,
    pub h: Vec<usize>,
    pub k: Vec<usize>,
}

impl<'g> SubgroupChain<'g> {
    pub fn new(g: &'g FiniteGroup, mut h: Vec<usize>, mut k: Vec<usize>) -> Result<Self> {
        h.sort_unstable();
        h.dedup();
        k.sort_unstable();
        k.dedup();
        if !g.is_subgroup(&h) {
            return Err(Error::ChainViolation("H is not a subgroup of G".into()));
        }
        if !g.is_subgroup(&k) {
            return Err(Error::ChainViolation("K is not a subgroup of G".into()));
        }
        if !k.iter().all(|x| h.binary_search(x).is_ok()) {
            return Err(Error::ChainViolation("K is not contained in H".into()));
        }
        Ok(SubgroupChain { g, h, k })
    }

    /// `K^G <= H`.
    pub fn d3_criterion(&self) -> bool {
        d3_group_criterion(self)
    }
}

/// True when the normal closure of `K` in `G` lies inside `H`.
pub fn d3_group_criterion(chain: &SubgroupChain) -> bool {
    chain.g.normal_closure(&chain.k).iter().all(|x| chain.h.binary_search(x).is_ok())
}

/// Parses one permutation per non-empty line; `#` starts a comment.
pub fn parse_generator_lines(text: &str) -> Result<Vec<Perm>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(Perm::parse(line).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perms(s: &[&str]) -> Vec<Perm> {
        s.iter().map(|x| Perm::parse(x).unwrap()).collect()
    }

    pub(crate) fn s3() -> FiniteGroup {
        FiniteGroup::from_permutations(&perms(&["(1 2)", "(1 2 3)"]), 200).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let p = Perm::parse("(1 2 3)(4 5)").unwrap();
        assert_eq!(p.0, vec![1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(Perm::parse("()").unwrap().to_string(), "()");
        assert!(Perm::parse("(1 2").is_err());
        let e = Perm::parse("(1 x)").unwrap_err().to_string();
        assert!(e.contains("'x'"), "{e}");
        // (1 2)(2 3): 1->2->3, 2->1, 3->2.
        assert_eq!(Perm::parse("(1 2)(2 3)").unwrap().to_string(), "(1 3 2)");
    }

    #[test]
    fn closure_orders() {
        assert_eq!(FiniteGroup::from_permutations(&perms(&["(1 2)"]), 200).unwrap().order(), 2);
        assert_eq!(s3().order(), 6);
        assert_eq!(FiniteGroup::from_permutations(&[], 200).unwrap().order(), 1);
        let s5 = perms(&["(1 2)", "(1 2 3 4 5)"]);
        assert_eq!(FiniteGroup::from_permutations(&s5, 200).unwrap().order(), 120);
        assert_eq!(FiniteGroup::from_permutations(&s5, 100), Err(Error::OrderCap(100)));
    }

    #[test]
    fn normal_closure_examples() {
        let g = s3();
        let a3 = g.generate(&[g.index_of(&Perm::parse("(1 2 3)").unwrap()).unwrap()]);
        assert_eq!(g.normal_closure(&a3), a3);
        assert_eq!(g.normal_closure(&[0]), vec![0]);
        let t = g.generate(&[g.index_of(&Perm::parse("(1 2)").unwrap()).unwrap()]);
        assert_eq!(g.normal_closure(&t).len(), 6);
    }

    #[test]
    fn double_coset_examples() {
        let g = s3();
        let all: Vec<usize> = (0..6).collect();
        let d = g.double_cosets(&all, &all);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].0, 0);
        assert_eq!(g.double_cosets(&[0], &[0]).len(), 6);
        let t = g.generate(&[g.index_of(&Perm::parse("(1 2)").unwrap()).unwrap()]);
        let mut sizes: Vec<usize> = g.double_cosets(&t, &t).iter().map(|c| c.1.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 4]);
    }

    #[test]
    fn criterion_examples() {
        let s4 = FiniteGroup::from_permutations(&perms(&["(1 2)", "(1 2 3 4)"]), 200).unwrap();
        let a4 = s4.subgroup_from_perms(&perms(&["(1 2 3)", "(2 3 4)"])).unwrap();
        let v4 = s4.subgroup_from_perms(&perms(&["(1 2)(3 4)", "(1 3)(2 4)"])).unwrap();
        assert_eq!((a4.len(), v4.len()), (12, 4));
        assert!(SubgroupChain::new(&s4, a4.clone(), v4).unwrap().d3_criterion());
        assert!(SubgroupChain::new(&s4, a4, vec![0]).unwrap().d3_criterion());
        let g = s3();
        let t = g.subgroup_from_perms(&perms(&["(1 2)"])).unwrap();
        assert!(!SubgroupChain::new(&g, t.clone(), t.clone()).unwrap().d3_criterion());
        assert!(SubgroupChain::new(&g, vec![0], t).is_err());
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(s3().subgroups().len(), 6);
        let s4 = FiniteGroup::from_permutations(&perms(&["(1 2)", "(1 2 3 4)"]), 200).unwrap();
        assert_eq!(s4.subgroups().len(), 30);
    }

    #[test]
    fn table_roundtrip_and_iso() {
        let g = s3();
        let t: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| g.mul(a, b)).collect()).collect();
        let h = FiniteGroup::from_table(t, None).unwrap();
        assert!(h.is_isomorphic(&g));
        let c6 = FiniteGroup::from_permutations(&perms(&["(1 2 3 4 5 6)"]), 200).unwrap();
        assert!(!c6.is_isomorphic(&g));
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table(bad, None).is_err());
    }
}
