//! Finite groups as validated Cayley tables, with subgroups, cosets,
//! double cosets, conjugacy classification of subgroups, and quotients.
//!
//! Elements are indices `0..order` with 0 the identity. Groups built from
//! permutation generators get the canonical element order induced by
//! breadth-first search over generator words (identity first, then words in
//! lexicographic order).

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::Arc;

pub const DEFAULT_MAX_GROUP: usize = 512;

/// Reads the configured group-order bound from `MACKEYKIT_MAX_GROUP`,
/// falling back to 512.
pub fn configured_max_group() -> usize {
    std::env::var("MACKEYKIT_MAX_GROUP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_GROUP)
}

#[derive(Debug, PartialEq, Eq)]
pub struct Group {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl Group {
    /// Validates a full multiplication table. Index 0 must be the identity.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<Arc<Group>> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedInput("empty multiplication table".into()));
        }
        for row in table {
            if row.len() != n {
                return Err(Error::MalformedInput("table is not square".into()));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::MalformedInput(format!(
                        "table entry {v} out of range 0..{n}"
                    )));
                }
            }
        }
        for x in 0..n {
            if table[0][x] != x || table[x][0] != x {
                return Err(Error::NoIdentity { witness: x });
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NonAssociative { a, b, c });
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            let mut found = None;
            for b in 0..n {
                if table[a][b] == 0 && table[b][a] == 0 {
                    found = Some(b);
                    break;
                }
            }
            inv[a] = found.ok_or(Error::InverseMissing { element: a })?;
        }
        let mut mul = Vec::with_capacity(n * n);
        for row in table {
            mul.extend_from_slice(row);
        }
        Ok(Arc::new(Group { order: n, mul, inv }))
    }

    /// Builds the permutation group generated by 0-based image arrays.
    /// Element order follows BFS over generator words.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>], max_order: usize) -> Result<Arc<Group>> {
        if degree == 0 {
            return Err(Error::MalformedInput("degree must be positive".into()));
        }
        for g in gens {
            if g.len() != degree {
                return Err(Error::MalformedInput(format!(
                    "generator length {} does not match degree {degree}",
                    g.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &img in g {
                if img >= degree || seen[img] {
                    return Err(Error::MalformedInput(
                        "generator is not a permutation".into(),
                    ));
                }
                seen[img] = true;
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut head = 0usize;
        while head < elements.len() {
            let cur = elements[head].clone();
            for g in gens {
                // append a generator on the right of the word
                let next: Vec<usize> = (0..degree).map(|x| cur[g[x]]).collect();
                if !index.contains_key(&next) {
                    if elements.len() >= max_order {
                        return Err(Error::GroupTooLarge {
                            order: elements.len() + 1,
                            bound: max_order,
                        });
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
            head += 1;
        }
        let n = elements.len();
        let mut mul = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                let prod: Vec<usize> = (0..degree).map(|x| elements[a][elements[b][x]]).collect();
                mul[a * n + b] = index[&prod];
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b;
                    break;
                }
            }
        }
        Ok(Arc::new(Group { order: n, mul, inv }))
    }

    pub fn cyclic(n: usize) -> Arc<Group> {
        assert!(n > 0);
        let mut mul = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = (a + b) % n;
            }
        }
        let inv = (0..n).map(|a| (n - a) % n).collect();
        Arc::new(Group { order: n, mul, inv })
    }

    /// Symmetric group on n points, generated by a transposition and an n-cycle.
    pub fn symmetric(n: usize) -> Arc<Group> {
        assert!(n >= 1);
        if n == 1 {
            return Group::cyclic(1);
        }
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        let c: Vec<usize> = (1..n).chain(std::iter::once(0)).collect();
        let bound = (1..=n).product::<usize>() + 1;
        Group::from_permutations(n, &[t, c], bound).expect("symmetric group generators")
    }

    /// Dihedral group of order 2n acting on n points.
    pub fn dihedral(n: usize) -> Arc<Group> {
        assert!(n >= 2);
        let r: Vec<usize> = (1..n).chain(std::iter::once(0)).collect();
        let s: Vec<usize> = (0..n).map(|x| (n - x) % n).collect();
        Group::from_permutations(n, &[r, s], 2 * n + 1).expect("dihedral group generators")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// g h g^{-1}
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Closure of a seed set inside the group, sorted.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        let mut stack: Vec<usize> = vec![0];
        for &s in seed {
            if !in_set[s] {
                in_set[s] = true;
                stack.push(s);
            }
        }
        let mut members = stack.clone();
        while let Some(x) = stack.pop() {
            let candidates: Vec<usize> = members.clone();
            for y in candidates {
                for z in [self.mul(x, y), self.mul(y, x), self.inv(x)] {
                    if !in_set[z] {
                        in_set[z] = true;
                        stack.push(z);
                        members.push(z);
                    }
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// Greedy small generating set, deterministic.
    pub fn small_generating_set(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut cl = self.closure(&gens);
        for x in 1..self.order {
            if cl.len() == self.order {
                break;
            }
            if cl.binary_search(&x).is_err() {
                gens.push(x);
                cl = self.closure(&gens);
            }
        }
        gens
    }

    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }
}

/// A subgroup given by its sorted element indices in the parent group.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: Arc<Group>,
    elements: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.group, &other.group) || self.group == other.group)
            && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn new(group: Arc<Group>, mut elements: Vec<usize>) -> Result<Subgroup> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(Error::MalformedInput(
                "subgroup must contain the identity".into(),
            ));
        }
        for &a in &elements {
            if a >= group.order() {
                return Err(Error::MalformedInput(format!(
                    "element {a} out of range"
                )));
            }
            if elements.binary_search(&group.inv(a)).is_err() {
                return Err(Error::MalformedInput(format!(
                    "subgroup not closed under inverse at {a}"
                )));
            }
            for &b in &elements {
                if elements.binary_search(&group.mul(a, b)).is_err() {
                    return Err(Error::MalformedInput(format!(
                        "subgroup not closed under product at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Subgroup { group, elements })
    }

    pub fn trivial(group: Arc<Group>) -> Subgroup {
        Subgroup { group, elements: vec![0] }
    }

    pub fn full(group: Arc<Group>) -> Subgroup {
        let elements = (0..group.order()).collect();
        Subgroup { group, elements }
    }

    pub fn generated(group: Arc<Group>, gens: &[usize]) -> Subgroup {
        let elements = group.closure(gens);
        Subgroup { group, elements }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_in_parent(&self) -> usize {
        self.group.order() / self.order()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Position of an element inside the sorted element list.
    pub fn pos(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    /// The conjugate subgroup {g h g^{-1} : h in H}.
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let mut elements: Vec<usize> = self
            .elements
            .iter()
            .map(|&h| self.group.conj(g, h))
            .collect();
        elements.sort_unstable();
        Subgroup { group: Arc::clone(&self.group), elements }
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let elements: Vec<usize> = self
            .elements
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect();
        Subgroup { group: Arc::clone(&self.group), elements }
    }

    pub fn is_normal_in(&self, ambient: &Subgroup) -> bool {
        ambient
            .elements
            .iter()
            .all(|&g| self.conjugate(g).elements == self.elements)
    }

    /// The subgroup as an abstract group on its own Cayley table, together
    /// with the index translation (new index -> parent element).
    pub fn as_group(&self) -> (Arc<Group>, Vec<usize>) {
        let k = self.order();
        let pos: HashMap<usize, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect();
        let mut mul = vec![0usize; k * k];
        for i in 0..k {
            for j in 0..k {
                mul[i * k + j] = pos[&self.group.mul(self.elements[i], self.elements[j])];
            }
        }
        let inv = (0..k).map(|i| pos[&self.group.inv(self.elements[i])]).collect();
        (
            Arc::new(Group { order: k, mul, inv }),
            self.elements.clone(),
        )
    }

    pub fn key(&self) -> Vec<usize> {
        self.elements.clone()
    }
}

/// Left cosets gH of a subgroup inside an ambient subgroup W.
/// Representatives are the minimal element of each coset, listed ascending.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    pub reps: Vec<usize>,
    /// parent element -> coset index (usize::MAX outside W)
    pub coset_of: Vec<usize>,
}

pub fn left_cosets_in(ambient: &Subgroup, h: &Subgroup) -> CosetSpace {
    let group = ambient.group();
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut reps = Vec::new();
    for &g in ambient.elements() {
        if coset_of[g] == usize::MAX {
            let idx = reps.len();
            reps.push(g);
            for &x in h.elements() {
                coset_of[group.mul(g, x)] = idx;
            }
        }
    }
    CosetSpace { reps, coset_of }
}

pub fn left_cosets(h: &Subgroup) -> CosetSpace {
    left_cosets_in(&Subgroup::full(Arc::clone(h.group())), h)
}

/// Double cosets K\W/H with minimal-element representatives, ascending.
#[derive(Clone, Debug)]
pub struct DoubleCosets {
    pub reps: Vec<usize>,
    /// parent element -> double coset index (usize::MAX outside W)
    pub class_of: Vec<usize>,
}

pub fn double_cosets_in(ambient: &Subgroup, k: &Subgroup, h: &Subgroup) -> DoubleCosets {
    let group = ambient.group();
    let mut class_of = vec![usize::MAX; group.order()];
    let mut reps = Vec::new();
    for &g in ambient.elements() {
        if class_of[g] == usize::MAX {
            let idx = reps.len();
            reps.push(g);
            for &a in k.elements() {
                let ag = group.mul(a, g);
                for &b in h.elements() {
                    class_of[group.mul(ag, b)] = idx;
                }
            }
        }
    }
    DoubleCosets { reps, class_of }
}

pub fn double_cosets(k: &Subgroup, h: &Subgroup) -> DoubleCosets {
    double_cosets_in(&Subgroup::full(Arc::clone(k.group())), k, h)
}

/// All subgroups of an ambient subgroup W, with conjugacy classes under W.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    pub ambient: Subgroup,
    /// sorted by (order, element list)
    pub subgroups: Vec<Subgroup>,
    /// indices into `subgroups` of the class representatives, each the
    /// lexicographically minimal member of its class
    pub class_reps: Vec<usize>,
    /// subgroup index -> class index
    pub class_of: Vec<usize>,
    /// subgroup index -> some w in W with subgroup = w (class rep) w^{-1}
    pub conjugator_from_rep: Vec<usize>,
}

pub fn subgroup_lattice(ambient: &Subgroup, bound: usize) -> Result<SubgroupLattice> {
    let group = ambient.group();
    if ambient.order() > bound {
        return Err(Error::GroupTooLarge { order: ambient.order(), bound });
    }
    use std::collections::BTreeSet;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(vec![0]);
    for &g in ambient.elements() {
        seen.insert(group.closure(&[g]));
    }
    // close under pairwise joins
    loop {
        let snapshot: Vec<Vec<usize>> = seen.iter().cloned().collect();
        let before = seen.len();
        for i in 0..snapshot.len() {
            for j in i + 1..snapshot.len() {
                let mut gens = snapshot[i].clone();
                gens.extend_from_slice(&snapshot[j]);
                let join = group.closure(&gens);
                seen.insert(join);
            }
        }
        if seen.len() == before {
            break;
        }
    }
    let mut subgroups: Vec<Subgroup> = seen
        .into_iter()
        .map(|elements| Subgroup { group: Arc::clone(group), elements })
        .collect();
    subgroups.sort_by(|a, b| {
        (a.order(), a.elements()).cmp(&(b.order(), b.elements()))
    });
    let index_of: HashMap<Vec<usize>, usize> = subgroups
        .iter()
        .enumerate()
        .map(|(i, s)| (s.elements().to_vec(), i))
        .collect();
    let n = subgroups.len();
    let mut class_of = vec![usize::MAX; n];
    let mut conjugator_from_rep = vec![0usize; n];
    let mut class_reps = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        // `i` is minimal in its class: subgroups are sorted and conjugates
        // share the order, so the first unseen member is the (order, lex)
        // minimum, which for fixed order is the lex minimum.
        let class_idx = class_reps.len();
        class_reps.push(i);
        for &w in ambient.elements() {
            let conj = subgroups[i].conjugate(w);
            let j = index_of[&conj.elements().to_vec()];
            if class_of[j] == usize::MAX {
                class_of[j] = class_idx;
                conjugator_from_rep[j] = w;
            }
        }
    }
    Ok(SubgroupLattice {
        ambient: ambient.clone(),
        subgroups,
        class_reps,
        class_of,
        conjugator_from_rep,
    })
}

pub fn all_subgroups(group: &Arc<Group>, bound: usize) -> Result<SubgroupLattice> {
    subgroup_lattice(&Subgroup::full(Arc::clone(group)), bound)
}

impl SubgroupLattice {
    pub fn find(&self, elements: &[usize]) -> Option<usize> {
        self.subgroups
            .iter()
            .position(|s| s.elements() == elements)
    }

    /// Class representative subgroups in canonical order.
    pub fn rep_subgroups(&self) -> Vec<&Subgroup> {
        self.class_reps.iter().map(|&i| &self.subgroups[i]).collect()
    }

    /// For a subgroup of the ambient, its class index and a conjugator w
    /// with subgroup = w (rep) w^{-1}.
    pub fn locate(&self, sub: &Subgroup) -> Option<(usize, usize)> {
        let i = self.find(sub.elements())?;
        Some((self.class_of[i], self.conjugator_from_rep[i]))
    }

    /// Lexicographically minimal member of the W-conjugacy class of `sub`.
    pub fn class_rep_of(&self, sub: &Subgroup) -> Option<&Subgroup> {
        let (c, _) = self.locate(sub)?;
        Some(&self.subgroups[self.class_reps[c]])
    }
}

/// The quotient group G/N for a normal subgroup N, with cosets ordered by
/// minimal element (so the identity coset is index 0), plus the projection.
pub fn quotient_group(n: &Subgroup) -> Result<(Arc<Group>, Vec<usize>)> {
    let group = n.group();
    let full = Subgroup::full(Arc::clone(group));
    if !n.is_normal_in(&full) {
        return Err(Error::NotNormal(format!("{:?}", n.elements())));
    }
    let cosets = left_cosets(n);
    let q = cosets.reps.len();
    let proj: Vec<usize> = (0..group.order()).map(|g| cosets.coset_of[g]).collect();
    let mut mul = vec![0usize; q * q];
    for a in 0..q {
        for b in 0..q {
            mul[a * q + b] = cosets.coset_of[group.mul(cosets.reps[a], cosets.reps[b])];
        }
    }
    let mut inv = vec![usize::MAX; q];
    for a in 0..q {
        for b in 0..q {
            if mul[a * q + b] == 0 {
                inv[a] = b;
                break;
            }
        }
    }
    Ok((Arc::new(Group { order: q, mul, inv }), proj))
}
