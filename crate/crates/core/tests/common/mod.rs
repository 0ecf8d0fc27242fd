//! Brute-force reference computations, written without the library's group
//! machinery: elements are plain permutation sets and every operation is a
//! direct enumeration.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use og4_core::families::FamilyId;
use og4_core::group::Subgroup;
use og4_core::perm::Permutation;

pub type ElementSet = BTreeSet<Permutation>;

pub fn elements(gens: &[Permutation]) -> Vec<Permutation> {
    let id = Permutation::identity(gens[0].degree());
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = &x * g;
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Permutation> = seen.into_iter().collect();
    out.sort();
    out
}

pub fn class_of(elems: &[Permutation], x: &Permutation) -> ElementSet {
    elems.iter().map(|g| x.conjugate_by(g)).collect()
}

pub fn conjugacy_classes(elems: &[Permutation]) -> Vec<ElementSet> {
    let mut seen: HashSet<&Permutation> = HashSet::new();
    let mut out = Vec::new();
    for x in elems {
        if seen.contains(x) {
            continue;
        }
        let class = class_of(elems, x);
        for y in elems.iter().filter(|y| class.contains(*y)) {
            seen.insert(y);
        }
        out.push(class);
    }
    out
}

/// Closure of `seed` under products, by repeated multiplication.
pub fn generated(degree: usize, seed: &ElementSet) -> ElementSet {
    let mut set: ElementSet = BTreeSet::from([Permutation::identity(degree)]);
    loop {
        let mut next = set.clone();
        for a in &set {
            for b in seed {
                next.insert(a * b);
            }
        }
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

/// Minimal normal subgroups: `⟨class(y)⟩` for `y ≠ 1` such that every
/// nonidentity member generates the same subgroup with its class.
pub fn minimal_normal_subgroups(gens: &[Permutation]) -> BTreeSet<ElementSet> {
    let elems = elements(gens);
    let degree = gens[0].degree();
    let closure_of = |y: &Permutation| generated(degree, &class_of(&elems, y));
    let mut out = BTreeSet::new();
    for class in conjugacy_classes(&elems) {
        let y = class.iter().next().unwrap();
        if y.is_identity() {
            continue;
        }
        let n = closure_of(y);
        if n.iter().filter(|z| !z.is_identity()).all(|z| closure_of(z) == n) {
            out.insert(n);
        }
    }
    out
}

/// Every normal subgroup, as the unions of conjugacy classes that contain
/// the identity and are closed under products. Only for groups with few
/// classes.
pub fn normal_subgroups(gens: &[Permutation]) -> BTreeSet<ElementSet> {
    let elems = elements(gens);
    let classes: Vec<ElementSet> = conjugacy_classes(&elems)
        .into_iter()
        .filter(|c| !c.iter().next().unwrap().is_identity())
        .collect();
    assert!(classes.len() <= 20, "too many classes for subset enumeration");
    let id = Permutation::identity(gens[0].degree());
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << classes.len()) {
        let mut set: ElementSet = BTreeSet::from([id.clone()]);
        for (k, c) in classes.iter().enumerate() {
            if mask >> k & 1 == 1 {
                set.extend(c.iter().cloned());
            }
        }
        if set.iter().all(|a| set.iter().all(|b| set.contains(&(a * b)))) {
            out.insert(set);
        }
    }
    out
}

pub fn as_set(h: &Subgroup) -> ElementSet {
    h.elements().cloned().collect()
}

pub fn as_sets(hs: &[Subgroup]) -> BTreeSet<ElementSet> {
    hs.iter().map(as_set).collect()
}

/// Every `(family, r, s)` built by a sweep over `3..=max` in each coordinate,
/// with row 3 cells already normalised to odd `r`.
pub fn grid_cells(max_r: u32, max_s: u32) -> Vec<(FamilyId, u32, u32)> {
    let mut out = Vec::new();
    for family in FamilyId::ALL {
        for r in 3..=max_r {
            for s in 3..=max_s {
                if family.check_parameters(r, s).is_ok() {
                    out.push((family, r, s));
                }
            }
        }
    }
    out
}
