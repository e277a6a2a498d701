//! Finite permutation groups with full element enumeration.
//!
//! Products compose right to left: `(p * q)(i) = p(q(i))`, so `q` acts first.
//! Every derived structure (multiplication table, classes, subgroups, cosets)
//! is indexed by position in the canonical element list, identity first.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted by default.
pub const DEFAULT_ORDER_CAP: usize = 1000;

/// A permutation of `{0, …, n−1}` in one-line image notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    pub fn identity(degree: usize) -> Self {
        Perm((0..degree).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, point: usize) -> usize {
        self.0[point]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j] = i;
        }
        Perm(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

/// On-disk group description: `{ "degree": n, "generators": [[images…], …] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

/// A finite permutation group with all elements enumerated.
#[derive(Clone, Debug)]
pub struct Group {
    degree: usize,
    generators: Vec<Perm>,
    /// Indices of `generators` inside `elements`.
    generator_indices: Vec<usize>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    mult: Vec<usize>,
    inv: Vec<usize>,
}

impl Group {
    /// Closure of `generators` under composition, with the default order cap.
    pub fn from_generators(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::with_order_cap(degree, generators, DEFAULT_ORDER_CAP)
    }

    pub fn from_file(file: &GroupFile) -> Result<Self> {
        let mut gens = Vec::with_capacity(file.generators.len());
        for (index, images) in file.generators.iter().enumerate() {
            if images.len() != file.degree {
                return Err(Error::DegreeMismatch {
                    index,
                    expected: file.degree,
                    found: images.len(),
                });
            }
            let p = Perm::new(images.clone()).ok_or(Error::NotAPermutation {
                index,
                degree: file.degree,
            })?;
            gens.push(p);
        }
        Self::from_generators(file.degree, gens)
    }

    /// Elements are listed breadth-first from the identity: layer `k + 1`
    /// holds the new products `s * x` (`s` a generator, `x` in layer `k`),
    /// sorted lexicographically by image array.
    pub fn with_order_cap(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::EmptyDegree);
        }
        for (index, g) in generators.iter().enumerate() {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    index,
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let mut generators: Vec<Perm> = generators
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect();
        generators.sort();

        let identity = Perm::identity(degree);
        let mut index = HashMap::new();
        index.insert(identity.clone(), 0);
        let mut elements = vec![identity];
        let mut layer_start = 0;
        while layer_start < elements.len() {
            let layer_end = elements.len();
            let mut fresh = BTreeSet::new();
            for x in &elements[layer_start..layer_end] {
                for s in &generators {
                    let y = s.compose(x);
                    if !index.contains_key(&y) {
                        fresh.insert(y);
                    }
                }
            }
            for y in fresh {
                if elements.len() >= cap {
                    return Err(Error::OrderCapExceeded { cap });
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
            layer_start = layer_end;
        }

        let n = elements.len();
        let mut mult = vec![0; n * n];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                mult[a * n + b] = index[&pa.compose(pb)];
            }
        }
        let inv = (0..n)
            .map(|a| (0..n).find(|&b| mult[a * n + b] == 0).expect("finite group"))
            .collect();
        let generator_indices = generators.iter().map(|g| index[g]).collect();

        Ok(Group {
            degree,
            generators,
            generator_indices,
            elements,
            index,
            mult,
            inv,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.elements.len() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            degree: self.degree,
            generators: self.generators.iter().map(|g| g.images().to_vec()).collect(),
        }
    }

    /// Smallest subgroup containing the given elements, as a sorted index list.
    pub fn generate(&self, gens: &[usize]) -> Vec<usize> {
        let n = self.order();
        let mut member = vec![false; n];
        member[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for &s in gens {
                let y = self.mul(s, x);
                if !member[y] {
                    member[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..n).filter(|&i| member[i]).collect()
    }
}

/// Conjugacy classes, ordered by least member (identity class first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjClasses {
    pub classes: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
    pub inverse_class: Vec<usize>,
    /// Class index of each element.
    pub class_of: Vec<usize>,
}

impl ConjClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

pub fn conjugacy_classes(group: &Group) -> ConjClasses {
    let n = group.order();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for start in 0..n {
        if class_of[start] != usize::MAX {
            continue;
        }
        let c = classes.len();
        class_of[start] = c;
        let mut members = vec![start];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &s in group.generator_indices() {
                let y = group.mul(group.mul(s, x), group.inv(s));
                if class_of[y] == usize::MAX {
                    class_of[y] = c;
                    members.push(y);
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    let representatives = classes.iter().map(|c| c[0]).collect();
    let inverse_class = classes.iter().map(|c| class_of[group.inv(c[0])]).collect();
    ConjClasses {
        classes,
        representatives,
        inverse_class,
        class_of,
    }
}

/// A subgroup, stored as its sorted element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    /// Validates the subgroup axioms against `group`.
    pub fn new(group: &Group, mut members: Vec<usize>) -> std::result::Result<Self, String> {
        members.sort_unstable();
        members.dedup();
        let sub = Subgroup { members };
        sub.check(group)?;
        Ok(sub)
    }

    pub fn whole(group: &Group) -> Self {
        Subgroup {
            members: (0..group.order()).collect(),
        }
    }

    pub fn trivial() -> Self {
        Subgroup { members: vec![0] }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }

    pub fn check(&self, group: &Group) -> std::result::Result<(), String> {
        if self.members.first() != Some(&0) {
            return Err("does not contain the identity".into());
        }
        if let Some(&bad) = self.members.iter().find(|&&g| g >= group.order()) {
            return Err(format!("element index {bad} out of range"));
        }
        for &a in &self.members {
            if !self.contains(group.inv(a)) {
                return Err(format!("inverse of element {a} missing"));
            }
            for &b in &self.members {
                if !self.contains(group.mul(a, b)) {
                    return Err(format!("product of elements {a} and {b} missing"));
                }
            }
        }
        Ok(())
    }
}

/// All subgroups, sorted by `(order, member set)`.
///
/// Built bottom-up: start from the cyclic subgroups, then repeatedly join a
/// known subgroup with a cyclic subgroup it does not contain.
pub fn enumerate_subgroups(group: &Group) -> Vec<Subgroup> {
    let n = group.order();
    let mut cyclic: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut cyclic_gens = Vec::new();
    for g in 0..n {
        let c = group.generate(&[g]);
        if cyclic.insert(c) {
            cyclic_gens.push(g);
        }
    }

    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut work: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for &g in &cyclic_gens {
        let c = group.generate(&[g]);
        if seen.insert(c.clone()) {
            work.push((c, vec![g]));
        }
    }
    let mut i = 0;
    while i < work.len() {
        let (members, gens) = work[i].clone();
        for &c in &cyclic_gens {
            if members.binary_search(&c).is_ok() {
                continue;
            }
            let mut joined = gens.clone();
            joined.push(c);
            let k = group.generate(&joined);
            if seen.insert(k.clone()) {
                work.push((k, joined));
            }
        }
        i += 1;
    }

    let mut subgroups: Vec<Subgroup> = seen
        .into_iter()
        .map(|members| Subgroup { members })
        .collect();
    subgroups.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    subgroups
}

/// Left cosets `g·H`, each sorted, ordered by least member.
pub fn left_cosets(group: &Group, sub: &Subgroup) -> Vec<Vec<usize>> {
    cosets(group, |g, h| group.mul(g, h), sub)
}

/// Right cosets `H·g`, each sorted, ordered by least member.
pub fn right_cosets(group: &Group, sub: &Subgroup) -> Vec<Vec<usize>> {
    cosets(group, |g, h| group.mul(h, g), sub)
}

fn cosets(group: &Group, act: impl Fn(usize, usize) -> usize, sub: &Subgroup) -> Vec<Vec<usize>> {
    let n = group.order();
    let mut assigned = vec![false; n];
    let mut blocks = Vec::with_capacity(n / sub.order());
    for g in 0..n {
        if assigned[g] {
            continue;
        }
        let mut block: Vec<usize> = sub.members().iter().map(|&h| act(g, h)).collect();
        block.sort_unstable();
        for &x in &block {
            assigned[x] = true;
        }
        blocks.push(block);
    }
    blocks
}
