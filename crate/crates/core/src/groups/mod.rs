//! Explicit finite groups given by multiplication tables, their subgroups
//! and homomorphisms, and the Fitting-subgroup reduction used to build
//! solvable groups out of split extensions with nilpotent kernel.
//!
//! Elements are indices `0..order`; index 0 is always the identity.

pub mod catalog;
mod iso;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::prime_divisors;
use crate::par::{self, Execution};

pub use catalog::{catalog, CatalogEntry};
pub use iso::{are_isomorphic, find_isomorphism};

/// Largest group synthesized from permutation generators unless the caller
/// raises the cap.
pub const DEFAULT_ORDER_CAP: usize = 5040;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table must be a nonempty square array")]
    Shape,
    #[error("table entry {0} out of range")]
    OutOfRange(u32),
    #[error("index 0 is not a two-sided identity")]
    Identity,
    #[error("table is not a Latin square")]
    NotLatin,
    #[error("table is not associative: ({0}·{1})·{2} ≠ {0}·({1}·{2})")]
    NotAssociative(u32, u32, u32),
    #[error("generated group exceeds the order cap {0}")]
    TooLarge(usize),
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("map is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(u32, u32),
    #[error("image list has length {got}, domain has order {expected}")]
    MapLength { expected: usize, got: usize },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("group is not solvable")]
    NotSolvable,
    #[error("group is trivial")]
    Trivial,
    #[error("no proper supplement of the Fitting subgroup among subgroups with at most 3 generators")]
    SupplementSearch,
    #[error("internal self-check failed: {0}")]
    SelfCheck(String),
}

/// A finite group as a multiplication table.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    perms: Option<PermPresentation>,
}

/// Permutation generators a group was synthesized from (0-based images).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermPresentation {
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order {})", self.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validate and adopt a multiplication table. Checks the identity, the
    /// Latin property and full associativity.
    pub fn from_table(rows: Vec<Vec<u32>>) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::Shape);
        }
        let table: Vec<u32> = rows.into_iter().flatten().collect();
        if let Some(&bad) = table.iter().find(|&&x| x as usize >= n) {
            return Err(GroupError::OutOfRange(bad));
        }
        Self::from_flat(n, table, true)
    }

    fn from_flat(n: usize, table: Vec<u32>, check_assoc: bool) -> Result<Self, GroupError> {
        for a in 0..n {
            if table[a] as usize != a || table[a * n] as usize != a {
                return Err(GroupError::Identity);
            }
        }
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let x = table[a * n + b] as usize;
                if seen[x] {
                    return Err(GroupError::NotLatin);
                }
                seen[x] = true;
            }
        }
        for b in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for a in 0..n {
                let x = table[a * n + b] as usize;
                if seen[x] {
                    return Err(GroupError::NotLatin);
                }
                seen[x] = true;
            }
        }
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            inverse[a] = (0..n).find(|&b| table[a * n + b] == 0).unwrap() as u32;
        }
        let g = FiniteGroup { order: n, table, inverse, perms: None };
        if check_assoc {
            g.check_associative()?;
        }
        Ok(g)
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order;
        let bad = par::map_range(Execution::default(), 0..n, |a| {
            for b in 0..n {
                let ab = self.mul(a as u32, b as u32);
                for c in 0..n {
                    let c = c as u32;
                    if self.mul(ab, c) != self.mul(a as u32, self.mul(b as u32, c)) {
                        return Some((a as u32, b as u32, c));
                    }
                }
            }
            None
        });
        match bad.into_iter().flatten().next() {
            Some((a, b, c)) => Err(GroupError::NotAssociative(a, b, c)),
            None => Ok(()),
        }
    }

    /// Close a set of permutations of `0..degree` under composition.
    /// Elements are listed in breadth-first order from the identity; the
    /// product `a·b` is the composite "apply `b`, then `a`".
    pub fn from_permutations(
        degree: usize,
        generators: &[Vec<u32>],
        cap: usize,
    ) -> Result<Self, GroupError> {
        for g in generators {
            if g.len() != degree {
                return Err(GroupError::BadPermutation(format!("{g:?} has wrong length")));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x as usize >= degree || std::mem::replace(&mut seen[x as usize], true) {
                    return Err(GroupError::BadPermutation(format!("{g:?} is not a bijection")));
                }
            }
        }
        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<Vec<u32>, u32> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let next = compose(&elems[i], g);
                if !index.contains_key(&next) {
                    if elems.len() == cap {
                        return Err(GroupError::TooLarge(cap));
                    }
                    index.insert(next.clone(), elems.len() as u32);
                    queue.push_back(elems.len());
                    elems.push(next);
                }
            }
        }
        let n = elems.len();
        let rows = par::map_range(Execution::default(), 0..n, |a| {
            (0..n).map(|b| index[&compose(&elems[a], &elems[b])]).collect::<Vec<u32>>()
        });
        let mut g = Self::from_flat(n, rows.into_iter().flatten().collect(), false)?;
        g.perms = Some(PermPresentation { degree, generators: generators.to_vec() });
        Ok(g)
    }

    /// Permutation generators in 1-based cycle notation, e.g.
    /// `[[[1,2,3]], [[1,2]]]` for `S_3`.
    pub fn from_cycles(generators: &[Vec<Vec<u32>>], cap: usize) -> Result<Self, GroupError> {
        let degree = generators
            .iter()
            .flatten()
            .flatten()
            .copied()
            .max()
            .unwrap_or(1) as usize;
        let mut perms = Vec::new();
        for gen in generators {
            let mut img: Vec<u32> = (0..degree as u32).collect();
            for cycle in gen {
                if cycle.contains(&0) {
                    return Err(GroupError::BadPermutation("cycle points are 1-based".into()));
                }
                for (i, &x) in cycle.iter().enumerate() {
                    let y = cycle[(i + 1) % cycle.len()];
                    img[x as usize - 1] = y - 1;
                }
            }
            perms.push(img);
        }
        Self::from_permutations(degree, &perms, cap)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn permutation_presentation(&self) -> Option<&PermPresentation> {
        self.perms.as_ref()
    }

    pub fn table_rows(&self) -> Vec<Vec<u32>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        let mut acc = 0;
        let mut b = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `g·a·g⁻¹`.
    pub fn conj(&self, g: u32, a: u32) -> u32 {
        self.mul(self.mul(g, a), self.inv(g))
    }

    /// `a⁻¹·b⁻¹·a·b`.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as u32).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_elements(self.order, (0..self.order as u32).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_elements(self.order, vec![0])
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: &[u32]) -> Subgroup {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut elems = vec![0u32];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y as usize] {
                    mask[y as usize] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        Subgroup::from_elements(self.order, elems)
    }

    /// Subgroup generated by `elems`, adding generators one at a time only
    /// when they fall outside the current closure.
    pub fn generate_greedy<I: IntoIterator<Item = u32>>(&self, start: &Subgroup, elems: I) -> Subgroup {
        let mut gens = self.generators(start);
        let mut cur = start.clone();
        for x in elems {
            if !cur.contains(x) {
                gens.push(x);
                cur = self.generate(&gens);
            }
        }
        cur
    }

    /// A small generating set, preferring elements of large order.
    pub fn generators(&self, h: &Subgroup) -> Vec<u32> {
        let mut cands: Vec<u32> = h.elements().to_vec();
        cands.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        let mut gens = Vec::new();
        let mut cur = self.trivial();
        for x in cands {
            if cur.len() == h.len() {
                break;
            }
            if !cur.contains(x) {
                gens.push(x);
                cur = self.generate(&gens);
            }
        }
        gens
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.generate_greedy(a, b.elements().iter().copied())
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup::from_elements(
            self.order,
            a.elements().iter().copied().filter(|&x| b.contains(x)).collect(),
        )
    }

    /// `|A·B| = |A||B| / |A ∩ B|`.
    pub fn product_size(&self, a: &Subgroup, b: &Subgroup) -> usize {
        a.len() * b.len() / self.intersection(a, b).len()
    }

    /// Smallest subgroup of `within` containing `elems` and normalized by `within`.
    pub fn normal_closure_in(&self, within: &Subgroup, elems: &[u32]) -> Subgroup {
        let wgens = self.generators(within);
        let mut cur = self.generate(elems);
        loop {
            let gens = self.generators(&cur);
            let conj: Vec<u32> = gens
                .iter()
                .flat_map(|&x| wgens.iter().map(move |&g| (g, x)))
                .map(|(g, x)| self.conj(g, x))
                .collect();
            let next = self.generate_greedy(&cur, conj);
            if next.len() == cur.len() {
                return cur;
            }
            cur = next;
        }
    }

    pub fn normal_closure(&self, elems: &[u32]) -> Subgroup {
        self.normal_closure_in(&self.whole(), elems)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let gens = self.generators(&self.whole());
        let hgens = self.generators(h);
        gens.iter().all(|&g| hgens.iter().all(|&x| h.contains(self.conj(g, x))))
    }

    /// `[A, B]` for subgroups normalized by `within`: the normal closure in
    /// `within` of the commutators of generators.
    fn commutator_subgroup_in(&self, within: &Subgroup, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let ag = self.generators(a);
        let bg = self.generators(b);
        let comms: Vec<u32> =
            ag.iter().flat_map(|&x| bg.iter().map(move |&y| (x, y))).map(|(x, y)| self.commutator(x, y)).collect();
        self.normal_closure_in(within, &comms)
    }

    /// `G = γ_1 ⊇ γ_2 = [G, G] ⊇ γ_3 = [γ_2, G] ⊇ ...` until it stabilizes.
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let g = self.whole();
        let mut series = vec![g.clone()];
        loop {
            let next = self.commutator_subgroup_in(&g, series.last().unwrap(), &g);
            if next.len() == series.last().unwrap().len() {
                return series;
            }
            series.push(next);
        }
    }

    /// `G ⊇ G' ⊇ G'' ⊇ ...` until it stabilizes.
    pub fn derived_series(&self) -> Vec<Subgroup> {
        let mut series = vec![self.whole()];
        loop {
            let last = series.last().unwrap();
            let next = self.commutator_subgroup_in(last, last, last);
            if next.len() == last.len() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().len() == 1
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().len() == 1
    }

    /// Whether the subgroup `h`, viewed as a group in its own right, is nilpotent.
    pub fn is_nilpotent_subgroup(&self, h: &Subgroup) -> bool {
        self.subgroup_as_group(h).0.is_nilpotent()
    }

    /// Conjugacy classes, each sorted, listed by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let gens = self.generators(&self.whole());
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for x in 0..self.order as u32 {
            if seen[x as usize] {
                continue;
            }
            let mut class = vec![x];
            seen[x as usize] = true;
            let mut i = 0;
            while i < class.len() {
                let y = class[i];
                for &g in &gens {
                    let z = self.conj(g, y);
                    if !seen[z as usize] {
                        seen[z as usize] = true;
                        class.push(z);
                    }
                }
                i += 1;
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// `O_p(G)`, the largest normal `p`-subgroup: generated by every element
    /// whose normal closure is a `p`-group.
    pub fn p_core(&self, p: u64) -> Subgroup {
        let is_p_power = |mut n: usize| {
            while n.is_multiple_of(p as usize) {
                n /= p as usize;
            }
            n == 1
        };
        let mut core = self.trivial();
        for class in self.conjugacy_classes() {
            let x = class[0];
            if core.contains(x) || !is_p_power(self.element_order(x)) {
                continue;
            }
            let nc = self.normal_closure(&[x]);
            if is_p_power(nc.len()) {
                core = self.join(&core, &nc);
            }
        }
        core
    }

    /// The Fitting subgroup: the product of the `p`-cores over primes
    /// dividing the order.
    pub fn fitting_subgroup(&self) -> Subgroup {
        prime_divisors(self.order as u64)
            .into_iter()
            .fold(self.trivial(), |acc, p| self.join(&acc, &self.p_core(p)))
    }

    /// Distinct cyclic subgroups, ordered by (size, elements).
    pub fn cyclic_subgroups(&self) -> Vec<Subgroup> {
        let mut set: HashSet<Subgroup> = HashSet::new();
        for x in 0..self.order as u32 {
            set.insert(self.generate(&[x]));
        }
        let mut v: Vec<Subgroup> = set.into_iter().collect();
        v.sort();
        v
    }

    /// Every subgroup, as joins of cyclic subgroups. Exponential in the
    /// worst case; meant for small groups.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let cyclic = self.cyclic_subgroups();
        let mut all: HashSet<Subgroup> = cyclic.iter().cloned().collect();
        let mut frontier = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.elements().iter().all(|&x| h.contains(x)) {
                        continue;
                    }
                    let j = self.join(h, c);
                    if all.insert(j.clone()) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut v: Vec<Subgroup> = all.into_iter().collect();
        v.sort();
        v
    }

    /// Subgroups generated by at most `k` elements (`k <= 3`), deduplicated
    /// and ordered by (size, elements).
    pub fn subgroups_with_generators(&self, k: usize, exec: Execution) -> Vec<Subgroup> {
        let cyclic = self.cyclic_subgroups();
        let mut all: HashSet<Subgroup> = cyclic.iter().cloned().collect();
        let mut layer = cyclic.clone();
        for _ in 1..k.min(3) {
            let joined = par::flat_map(exec, &layer, |h| {
                cyclic.iter().map(|c| self.join(h, c)).collect::<Vec<_>>()
            });
            layer = joined.into_iter().filter(|j| all.insert(j.clone())).collect();
        }
        let mut v: Vec<Subgroup> = all.into_iter().collect();
        v.sort();
        v
    }

    /// The subgroup `h` relabelled as a standalone group, plus the inclusion
    /// map (standalone index -> index in `self`). Elements keep their
    /// relative order, so the identity stays at index 0.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> (FiniteGroup, Vec<u32>) {
        let elems = h.elements().to_vec();
        let pos: HashMap<u32, u32> = elems.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
        let n = elems.len();
        let table: Vec<u32> = (0..n)
            .flat_map(|a| {
                let elems = &elems;
                let pos = &pos;
                (0..n).map(move |b| pos[&self.mul(elems[a], elems[b])])
            })
            .collect();
        let g = Self::from_flat(n, table, false).expect("a subgroup table is a group table");
        (g, elems)
    }

    // --- constructors -----------------------------------------------------

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32)).collect();
        Self::from_flat(n, table, false).unwrap()
    }

    /// `A × B` with `(a, b)` at index `a + |A|·b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let table = (0..n)
            .flat_map(|x| {
                (0..n).map(move |y| {
                    let (xa, xb) = ((x % na) as u32, (x / na) as u32);
                    let (ya, yb) = ((y % na) as u32, (y / na) as u32);
                    a.mul(xa, ya) + na as u32 * b.mul(xb, yb)
                })
            })
            .collect();
        Self::from_flat(n, table, false).unwrap()
    }

    /// Dihedral group of order `2n` (symmetries of an `n`-gon).
    pub fn dihedral(n: usize) -> Self {
        // r^i at index i, s·r^i at index n + i
        let m = 2 * n;
        let table = (0..m)
            .flat_map(|x| {
                (0..m).map(move |y| {
                    let (sx, ix) = (x / n, x % n);
                    let (sy, iy) = (y / n, y % n);
                    // (s^a r^i)(s^b r^j) = s^(a+b) r^((-1)^b i + j)
                    let i = if sy == 1 { (n - ix) % n } else { ix };
                    (((sx + sy) % 2) * n + (i + iy) % n) as u32
                })
            })
            .collect();
        Self::from_flat(m, table, false).unwrap()
    }

    /// Dicyclic group of order `4n`: `⟨a, x | a^(2n), x² = a^n, x a x⁻¹ = a⁻¹⟩`.
    pub fn dicyclic(n: usize) -> Self {
        let m2 = 2 * n;
        let size = 4 * n;
        // a^i at index i, a^i·x at index 2n + i
        let table = (0..size)
            .flat_map(|u| {
                (0..size).map(move |v| {
                    let (xu, iu) = (u / m2, u % m2);
                    let (xv, iv) = (v / m2, v % m2);
                    let r = match (xu, xv) {
                        (0, 0) => (iu + iv) % m2,
                        // a^i · a^j x = a^(i+j) x
                        (0, 1) => m2 + (iu + iv) % m2,
                        // a^i x · a^j = a^(i-j) x
                        (1, 0) => m2 + (iu + m2 - iv) % m2,
                        // a^i x · a^j x = a^(i-j) x² = a^(i-j+n)
                        _ => (iu + m2 - iv + n) % m2,
                    };
                    r as u32
                })
            })
            .collect();
        Self::from_flat(size, table, true).unwrap()
    }

    pub fn symmetric(n: usize) -> Self {
        if n <= 1 {
            return Self::cyclic(1);
        }
        let mut gens = vec![];
        let cycle: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        gens.push(cycle);
        let mut swap: Vec<u32> = (0..n as u32).collect();
        swap.swap(0, 1);
        gens.push(swap);
        Self::from_permutations(n, &gens, usize::MAX).unwrap()
    }

    pub fn alternating(n: usize) -> Self {
        if n <= 2 {
            return Self::cyclic(1);
        }
        // 3-cycles (0 1 i) generate A_n
        let gens: Vec<Vec<u32>> = (2..n as u32)
            .map(|i| {
                let mut p: Vec<u32> = (0..n as u32).collect();
                p[0] = 1;
                p[1] = i;
                p[i as usize] = 0;
                p
            })
            .collect();
        Self::from_permutations(n, &gens, usize::MAX).unwrap()
    }

    /// `N ⋊ C_k` where the generator of `C_k` acts by the automorphism `aut`
    /// of `N` (given as an image list); `aut^k` must be the identity.
    pub fn semidirect_cyclic(n: &FiniteGroup, aut: &[u32], k: usize) -> Result<Self, GroupError> {
        let mut action = vec![(0..n.order as u32).collect::<Vec<u32>>()];
        for j in 1..k {
            let prev = &action[j - 1];
            action.push(prev.iter().map(|&x| aut[x as usize]).collect());
        }
        let (g, _, _) = semidirect_product(n, &FiniteGroup::cyclic(k), &action)?;
        Ok(g)
    }
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&x| a[x as usize]).collect()
}

/// A subgroup as a sorted element list plus membership mask.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    // field order matters for the derived Ord: size first, then elements
    size: usize,
    elems: Vec<u32>,
    mask: Vec<bool>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.elems)
    }
}

impl Subgroup {
    pub fn from_elements(group_order: usize, mut elems: Vec<u32>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        let mut mask = vec![false; group_order];
        for &x in &elems {
            mask[x as usize] = true;
        }
        Subgroup { size: elems.len(), elems, mask }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    pub fn contains(&self, x: u32) -> bool {
        self.mask.get(x as usize).copied().unwrap_or(false)
    }

    pub fn elements(&self) -> &[u32] {
        &self.elems
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elems.iter().all(|&x| other.contains(x))
    }
}

/// A homomorphism given by its full image list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    domain: Arc<FiniteGroup>,
    codomain: Arc<FiniteGroup>,
    map: Vec<u32>,
}

impl GroupHom {
    /// Validate `map` exhaustively: identity to identity and
    /// `map(xy) = map(x)·map(y)` for every pair.
    pub fn new(
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        map: Vec<u32>,
    ) -> Result<Self, GroupError> {
        if map.len() != domain.order() {
            return Err(GroupError::MapLength { expected: domain.order(), got: map.len() });
        }
        if let Some(&bad) = map.iter().find(|&&y| y as usize >= codomain.order()) {
            return Err(GroupError::OutOfRange(bad));
        }
        if map[0] != 0 {
            return Err(GroupError::NotHomomorphism(0, 0));
        }
        let n = domain.order() as u32;
        for x in 0..n {
            for y in 0..n {
                if map[domain.mul(x, y) as usize] != codomain.mul(map[x as usize], map[y as usize]) {
                    return Err(GroupError::NotHomomorphism(x, y));
                }
            }
        }
        Ok(GroupHom { domain, codomain, map })
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.codomain
    }

    pub fn images(&self) -> &[u32] {
        &self.map
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.map[x as usize]
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::from_elements(
            self.domain.order(),
            (0..self.domain.order() as u32).filter(|&x| self.map[x as usize] == 0).collect(),
        )
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::from_elements(self.codomain.order(), self.map.clone())
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.codomain.order()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom, GroupError> {
        if *self.codomain != *other.domain {
            return Err(GroupError::Shape);
        }
        Ok(GroupHom {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            map: self.map.iter().map(|&x| other.apply(x)).collect(),
        })
    }
}

/// Every epimorphism `G → C_r`, as image lists into `Z/r`. Images of a
/// generating set are enumerated and propagated along the Cayley graph.
pub fn epimorphisms_to_cyclic(g: &FiniteGroup, r: usize) -> Vec<Vec<u32>> {
    if r == 0 || !g.order().is_multiple_of(r) {
        return Vec::new();
    }
    let gens = g.generators(&g.whole());
    let total = (r as u64).pow(gens.len() as u32);
    let mut out = Vec::new();
    'assign: for code in 0..total {
        let mut c = code;
        let imgs: Vec<u32> = gens
            .iter()
            .map(|_| {
                let v = (c % r as u64) as u32;
                c /= r as u64;
                v
            })
            .collect();
        let mut map = vec![u32::MAX; g.order()];
        map[0] = 0;
        let mut queue = vec![0u32];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (&s, &t) in gens.iter().zip(&imgs) {
                let y = g.mul(x, s);
                let fy = (map[x as usize] + t) % r as u32;
                if map[y as usize] == u32::MAX {
                    map[y as usize] = fy;
                    queue.push(y);
                } else if map[y as usize] != fy {
                    continue 'assign;
                }
            }
            i += 1;
        }
        let mut hit = vec![false; r];
        map.iter().for_each(|&v| hit[v as usize] = true);
        if hit.iter().all(|&h| h) {
            out.push(map);
        }
    }
    out
}

/// `N ⋊ H` with `(n, h)(n', h') = (n·act_h(n'), h·h')`, elements `(n, h)` at
/// index `n + |N|·h`. `action[h]` is the image list of the automorphism by
/// which `h` acts. Returns the group, the projection onto `H` and the
/// section `h ↦ (1, h)`.
pub fn semidirect_product(
    n: &FiniteGroup,
    h: &FiniteGroup,
    action: &[Vec<u32>],
) -> Result<(FiniteGroup, GroupHom, GroupHom), GroupError> {
    let (nn, nh) = (n.order(), h.order());
    if action.len() != nh {
        return Err(GroupError::InvalidAction(format!("{} automorphisms for |H| = {nh}", action.len())));
    }
    for (hi, aut) in action.iter().enumerate() {
        if aut.len() != nn {
            return Err(GroupError::InvalidAction(format!("action of {hi} has wrong length")));
        }
        let mut seen = vec![false; nn];
        for &x in aut {
            if x as usize >= nn || std::mem::replace(&mut seen[x as usize], true) {
                return Err(GroupError::InvalidAction(format!("action of {hi} is not a bijection")));
            }
        }
        for a in 0..nn as u32 {
            for b in 0..nn as u32 {
                if aut[n.mul(a, b) as usize] != n.mul(aut[a as usize], aut[b as usize]) {
                    return Err(GroupError::InvalidAction(format!("action of {hi} is not multiplicative")));
                }
            }
        }
    }
    for x in 0..nh as u32 {
        for y in 0..nh as u32 {
            let xy = &action[h.mul(x, y) as usize];
            let (ax, ay) = (&action[x as usize], &action[y as usize]);
            if (0..nn).any(|m| xy[m] != ax[ay[m] as usize]) {
                return Err(GroupError::InvalidAction(format!("not a homomorphism at ({x}, {y})")));
            }
        }
    }
    let size = nn * nh;
    let table: Vec<u32> = (0..size)
        .flat_map(|u| {
            (0..size).map(move |v| {
                let (un, uh) = (u % nn, u / nn);
                let (vn, vh) = (v % nn, v / nn);
                let m = n.mul(un as u32, action[uh][vn]);
                m + nn as u32 * h.mul(uh as u32, vh as u32)
            })
        })
        .collect();
    let g = Arc::new(FiniteGroup::from_flat(size, table, false)?);
    let harc = Arc::new(h.clone());
    let pr = GroupHom::new(g.clone(), harc.clone(), (0..size).map(|u| (u / nn) as u32).collect())?;
    let sec = GroupHom::new(harc, g.clone(), (0..nh).map(|x| (x * nn) as u32).collect())?;
    Ok((Arc::try_unwrap(g).unwrap_or_else(|a| (*a).clone()), pr, sec))
}

/// One step of the reduction `φ : N ⋊ G' → G` with `N` the Fitting subgroup.
#[derive(Clone, Debug)]
pub struct ReductionStep {
    /// `N` inside `G`.
    pub fitting: Subgroup,
    /// `G'` inside `G`.
    pub complement: Subgroup,
    pub fitting_group: Arc<FiniteGroup>,
    pub complement_group: Arc<FiniteGroup>,
    /// `action[h]` = conjugation by `h ∈ G'` on `N`, in standalone indices.
    pub action: Vec<Vec<u32>>,
    pub product: Arc<FiniteGroup>,
    pub pr: GroupHom,
    pub phi: GroupHom,
    /// How `G'` was selected, reported because the choice is a convention.
    pub selection: String,
}

impl ReductionStep {
    pub fn kernel_order(&self) -> usize {
        self.phi.kernel().len()
    }
}

/// Reduce a nontrivial solvable `G` to `N ⋊ G' → G`.
///
/// Nilpotent `G` gives `N = G`, `G' = 1`. Otherwise `N` is the Fitting
/// subgroup and `G'` a smallest subgroup with `N·G' = G` among those
/// generated by at most three elements, ties broken by the sorted element
/// list. `G'` acts on `N` by conjugation and `φ(n, g') = n·g'`.
pub fn shafarevich_step(g: &FiniteGroup, exec: Execution) -> Result<ReductionStep, GroupError> {
    if g.order() == 1 {
        return Err(GroupError::Trivial);
    }
    if !g.is_solvable() {
        return Err(GroupError::NotSolvable);
    }
    let (fitting, complement, selection) = if g.is_nilpotent() {
        (g.whole(), g.trivial(), "nilpotent: G' trivial".to_string())
    } else {
        let f = g.fitting_subgroup();
        let cands = g.subgroups_with_generators(3, exec);
        let chosen = cands
            .into_iter()
            .filter(|h| h.len() < g.order() && g.product_size(&f, h) == g.order())
            .min()
            .ok_or(GroupError::SupplementSearch)?;
        (f, chosen, "minimal order, least sorted element list".to_string())
    };
    let (ng, n_incl) = g.subgroup_as_group(&fitting);
    let (hg, h_incl) = g.subgroup_as_group(&complement);
    let n_pos: HashMap<u32, u32> = n_incl.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
    let action: Vec<Vec<u32>> = h_incl
        .iter()
        .map(|&hx| n_incl.iter().map(|&nx| n_pos[&g.conj(hx, nx)]).collect())
        .collect();
    let (prod, pr, _sec) = semidirect_product(&ng, &hg, &action)?;
    let nn = ng.order();
    let prod = Arc::new(prod);
    let phi_map: Vec<u32> = (0..prod.order())
        .map(|u| g.mul(n_incl[u % nn], h_incl[u / nn]))
        .collect();
    let phi = GroupHom::new(prod.clone(), Arc::new(g.clone()), phi_map)?;
    if !phi.is_surjective() {
        return Err(GroupError::SelfCheck("φ is not surjective".into()));
    }
    if !ng.is_nilpotent() || !g.is_normal(&fitting) {
        return Err(GroupError::SelfCheck("N is not a nilpotent normal subgroup".into()));
    }
    let pr = GroupHom { domain: prod.clone(), codomain: Arc::new(hg.clone()), map: pr.map };
    Ok(ReductionStep {
        fitting,
        complement,
        fitting_group: Arc::new(ng),
        complement_group: Arc::new(hg),
        action,
        product: prod,
        pr,
        phi,
        selection,
    })
}

/// Iterate [`shafarevich_step`] on successive `G'` until `G'` is trivial.
pub fn solvable_tower(g: &FiniteGroup, exec: Execution) -> Result<Vec<ReductionStep>, GroupError> {
    if !g.is_solvable() {
        return Err(GroupError::NotSolvable);
    }
    let mut steps = Vec::new();
    let mut cur = g.clone();
    while cur.order() > 1 {
        let step = shafarevich_step(&cur, exec)?;
        cur = (*step.complement_group).clone();
        steps.push(step);
    }
    Ok(steps)
}

/// Wire form of a group: a multiplication table or 1-based permutation
/// generators in cycle notation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupJson {
    Table { order: usize, table: Vec<Vec<u32>> },
    Perms { perm_gens: Vec<Vec<Vec<u32>>> },
}

impl GroupJson {
    pub fn build(&self, cap: usize) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupJson::Table { order, table } => {
                if table.len() != *order {
                    return Err(GroupError::Shape);
                }
                FiniteGroup::from_table(table.clone())
            }
            GroupJson::Perms { perm_gens } => FiniteGroup::from_cycles(perm_gens, cap),
        }
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupJson::Table { order: g.order(), table: g.table_rows() }
    }
}
