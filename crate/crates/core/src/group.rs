//! Permutation groups small enough to hold every element in memory.
//!
//! A [`PermGroup`] materialises its full element list when constructed
//! (breadth-first closure of the generators, bounded by an element cap) and
//! lazily builds a multiplication table on first use. Subgroups are stored as
//! bitsets over the parent's element list; since that list is sorted, the
//! member ids of a [`Subgroup`] enumerate its elements in canonical order.
//!
//! Every element is identified by its images on a *base*: a short list of
//! points whose pointwise stabiliser is trivial. This keeps table
//! construction at `O(|G|² · |base|)` rather than `O(|G|² · degree)`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use crate::partition::{orbits_of, Partition};
use crate::perm::{PermError, Permutation};

/// Default bound on the number of elements a group may have.
pub const DEFAULT_ELEMENT_CAP: usize = 100_000;

/// Closure of `generators` under composition, sorted canonically.
pub fn generate_elements(
    generators: &[Permutation],
    cap: usize,
) -> Result<Vec<Permutation>, PermError> {
    let first = generators.first().ok_or(PermError::NoGenerators)?;
    let degree = first.degree();
    for g in generators {
        if g.degree() != degree {
            return Err(PermError::DomainMismatch {
                left: degree,
                right: g.degree(),
            });
        }
    }
    let identity = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(identity.clone());
    queue.push_back(identity);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = &x * g;
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(PermError::ElementCapExceeded { cap });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort();
    Ok(elements)
}

pub(crate) type ElementId = u32;

struct GroupCore {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    base: Vec<u32>,
    lookup: HashMap<Box<[u32]>, ElementId>,
    identity: ElementId,
    inverse: Vec<ElementId>,
    generator_ids: Vec<ElementId>,
    products: OnceLock<Vec<ElementId>>,
    orders: OnceLock<Vec<u32>>,
}

/// A finitely generated permutation group with its elements materialised.
///
/// Cloning is cheap; clones share the same element table.
#[derive(Clone)]
pub struct PermGroup(Arc<GroupCore>);

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.0.degree)
            .field("order", &self.0.elements.len())
            .field("generators", &self.0.generators)
            .finish()
    }
}

impl PermGroup {
    pub fn new(generators: Vec<Permutation>) -> Result<Self, PermError> {
        Self::with_cap(generators, DEFAULT_ELEMENT_CAP)
    }

    pub fn with_cap(generators: Vec<Permutation>, cap: usize) -> Result<Self, PermError> {
        let elements = generate_elements(&generators, cap)?;
        let degree = elements[0].degree();
        let base = choose_base(&elements);
        let mut lookup = HashMap::with_capacity(elements.len());
        for (id, e) in elements.iter().enumerate() {
            lookup.insert(base_key(&base, e), id as ElementId);
        }
        let identity = lookup[&base_key(&base, &Permutation::identity(degree))];
        let inverse = elements
            .iter()
            .map(|e| lookup[&base_key(&base, &e.inverse())])
            .collect();
        let generator_ids = generators
            .iter()
            .map(|g| lookup[&base_key(&base, g)])
            .collect();
        Ok(PermGroup(Arc::new(GroupCore {
            degree,
            generators,
            elements,
            base,
            lookup,
            identity,
            inverse,
            generator_ids,
            products: OnceLock::new(),
            orders: OnceLock::new(),
        })))
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn order(&self) -> usize {
        self.0.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.0.generators
    }

    /// All elements in canonical (lexicographic) order.
    pub fn elements(&self) -> &[Permutation] {
        &self.0.elements
    }

    pub fn base(&self) -> &[u32] {
        &self.0.base
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.id_of(p).is_some()
    }

    pub(crate) fn same_group(&self, other: &PermGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub(crate) fn id_of(&self, p: &Permutation) -> Option<ElementId> {
        if p.degree() != self.0.degree {
            return None;
        }
        let id = *self.0.lookup.get(&base_key(&self.0.base, p))?;
        (self.0.elements[id as usize] == *p).then_some(id)
    }

    pub(crate) fn element(&self, id: ElementId) -> &Permutation {
        &self.0.elements[id as usize]
    }

    pub(crate) fn identity_id(&self) -> ElementId {
        self.0.identity
    }

    pub(crate) fn generator_ids(&self) -> &[ElementId] {
        &self.0.generator_ids
    }

    pub(crate) fn inv(&self, a: ElementId) -> ElementId {
        self.0.inverse[a as usize]
    }

    fn products(&self) -> &[ElementId] {
        self.0.products.get_or_init(|| {
            let core = &self.0;
            let n = core.elements.len();
            let mut table = Vec::with_capacity(n * n);
            let mut key = vec![0u32; core.base.len()];
            for a in &core.elements {
                for b in &core.elements {
                    for (k, &beta) in core.base.iter().enumerate() {
                        key[k] = b.images()[a.images()[beta as usize] as usize];
                    }
                    table.push(core.lookup[key.as_slice()]);
                }
            }
            table
        })
    }

    #[inline]
    pub(crate) fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        let n = self.order();
        self.products()[a as usize * n + b as usize]
    }

    /// `b⁻¹ a b`
    #[inline]
    pub(crate) fn conj(&self, a: ElementId, b: ElementId) -> ElementId {
        self.mul(self.mul(self.inv(b), a), b)
    }

    pub(crate) fn element_order(&self, a: ElementId) -> usize {
        let orders = self.0.orders.get_or_init(|| {
            self.0.elements.iter().map(|e| e.order() as u32).collect()
        });
        orders[a as usize] as usize
    }

    pub fn orbits(&self) -> Partition {
        orbits_of(self.degree(), self.generators())
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let p = self.orbits();
        p.cells()[p.cell_of(x)].iter().map(|&y| y as usize).collect()
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order());
        members.insert(self.identity_id() as usize);
        Subgroup::from_bits(self.clone(), members)
    }

    pub fn full_subgroup(&self) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order());
        members.insert_range(..);
        Subgroup::from_bits(self.clone(), members)
    }

    /// The subgroup generated by `gens`, which must be elements of `self`.
    pub fn subgroup(&self, gens: &[Permutation]) -> Result<Subgroup, PermError> {
        let ids = self.ids_of(gens)?;
        Ok(Subgroup::from_bits(self.clone(), self.closure(&ids)))
    }

    /// Collects the elements satisfying `pred`; the caller vouches that the
    /// result is a subgroup.
    pub(crate) fn filter_subgroup(&self, pred: impl Fn(&Permutation) -> bool) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order());
        for (id, e) in self.elements().iter().enumerate() {
            if pred(e) {
                members.insert(id);
            }
        }
        Subgroup::from_bits(self.clone(), members)
    }

    fn ids_of(&self, gens: &[Permutation]) -> Result<Vec<ElementId>, PermError> {
        gens.iter()
            .map(|g| self.id_of(g).ok_or(PermError::NotInGroup))
            .collect()
    }

    pub(crate) fn closure(&self, gens: &[ElementId]) -> FixedBitSet {
        let mut members = FixedBitSet::with_capacity(self.order());
        let e = self.identity_id();
        members.insert(e as usize);
        let mut stack = vec![e];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !members.contains(y as usize) {
                    members.insert(y as usize);
                    stack.push(y);
                }
            }
        }
        members
    }

    /// All elements fixing `x`.
    pub fn point_stabilizer(&self, x: usize) -> Subgroup {
        self.filter_subgroup(|g| g.apply(x) == x)
    }

    /// True when `h` is mapped to itself by conjugation with every generator.
    pub fn is_normal(&self, h: &Subgroup) -> bool {
        assert!(h.group.same_group(self), "subgroup of a different group");
        let hgens = h.generator_ids();
        self.generator_ids()
            .iter()
            .all(|&g| hgens.iter().all(|&x| h.contains_id(self.conj(x, g))))
    }

    /// Smallest normal subgroup containing `seed`.
    pub fn normal_closure(&self, seed: &[Permutation]) -> Result<Subgroup, PermError> {
        let ids = self.ids_of(seed)?;
        Ok(self.normal_closure_ids(&ids))
    }

    pub(crate) fn normal_closure_ids(&self, seed: &[ElementId]) -> Subgroup {
        let e = self.identity_id();
        let mut gens: Vec<ElementId> = seed.iter().copied().filter(|&x| x != e).collect();
        gens.sort_unstable();
        gens.dedup();
        let mut members = self.closure(&gens);
        let mut next = 0;
        while next < gens.len() {
            let x = gens[next];
            next += 1;
            for &g in self.generator_ids() {
                let c = self.conj(x, g);
                if !members.contains(c as usize) {
                    gens.push(c);
                    members = self.closure(&gens);
                }
            }
        }
        Subgroup::from_bits(self.clone(), members)
    }

    /// Conjugacy classes as sorted id lists, ordered by least member.
    pub(crate) fn conjugacy_classes(&self) -> Vec<Vec<ElementId>> {
        let n = self.order();
        let mut done = FixedBitSet::with_capacity(n);
        let mut classes = Vec::new();
        for x in 0..n as ElementId {
            if done.contains(x as usize) {
                continue;
            }
            let mut class = vec![x];
            done.insert(x as usize);
            let mut next = 0;
            while next < class.len() {
                let y = class[next];
                next += 1;
                for &g in self.generator_ids() {
                    let c = self.conj(y, g);
                    if !done.contains(c as usize) {
                        done.insert(c as usize);
                        class.push(c);
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// Minimal normal subgroups, as the inclusion-minimal normal closures of
    /// prime-order elements. Sorted canonically.
    pub fn minimal_normal_subgroups(&self) -> Vec<Subgroup> {
        let mut candidates: Vec<Subgroup> = Vec::new();
        for class in self.conjugacy_classes() {
            let x = class[0];
            if !is_prime(self.element_order(x)) {
                continue;
            }
            let n = self.normal_closure_ids(&[x]);
            if !candidates.contains(&n) {
                candidates.push(n);
            }
        }
        let mut minimal: Vec<Subgroup> = candidates
            .iter()
            .filter(|n| {
                !candidates
                    .iter()
                    .any(|m| m.order() < n.order() && m.is_subgroup_of(n))
            })
            .cloned()
            .collect();
        minimal.sort();
        minimal
    }

    /// Every normal subgroup, trivial and full group included, sorted
    /// canonically. Built as the join-closure of the normal closures of
    /// cyclic subgroups.
    pub fn all_normal_subgroups(&self) -> Vec<Subgroup> {
        let mut found: Vec<Subgroup> = vec![self.trivial_subgroup()];
        let mut index: HashSet<FixedBitSet> = HashSet::new();
        index.insert(found[0].members.clone());
        let e = self.identity_id();
        for class in self.conjugacy_classes() {
            if class[0] == e {
                continue;
            }
            let n = self.normal_closure_ids(&[class[0]]);
            if index.insert(n.members.clone()) {
                found.push(n);
            }
        }
        let mut i = 0;
        while i < found.len() {
            let mut j = 0;
            while j < i {
                let (a, b) = (&found[i], &found[j]);
                if !a.is_subgroup_of(b) && !b.is_subgroup_of(a) {
                    let join = a.join(b);
                    if index.insert(join.members.clone()) {
                        found.push(join);
                    }
                }
                j += 1;
            }
            i += 1;
        }
        found.sort();
        found
    }

    pub fn center(&self) -> Subgroup {
        self.centralizer(&self.full_subgroup())
    }

    /// Elements commuting with every element of `h`.
    pub fn centralizer(&self, h: &Subgroup) -> Subgroup {
        assert!(h.group.same_group(self), "subgroup of a different group");
        let hgens = h.generator_ids();
        let mut members = FixedBitSet::with_capacity(self.order());
        for x in 0..self.order() as ElementId {
            if hgens.iter().all(|&y| self.mul(x, y) == self.mul(y, x)) {
                members.insert(x as usize);
            }
        }
        Subgroup::from_bits(self.clone(), members)
    }

    /// All subgroups of index two, found as kernels of homomorphisms onto
    /// `C₂` determined by their values on the generators.
    pub fn index_two_subgroups(&self) -> Vec<Subgroup> {
        let gens = self.generator_ids().to_vec();
        let k = gens.len();
        let n = self.order();
        let mut found: Vec<Subgroup> = Vec::new();
        if k >= usize::BITS as usize {
            return found;
        }
        'assign: for mask in 1usize..(1 << k) {
            let mut parity = vec![u8::MAX; n];
            parity[self.identity_id() as usize] = 0;
            let mut stack = vec![self.identity_id()];
            while let Some(x) = stack.pop() {
                for (bit, &g) in gens.iter().enumerate() {
                    let y = self.mul(x, g) as usize;
                    let p = parity[x as usize] ^ ((mask >> bit) & 1) as u8;
                    if parity[y] == u8::MAX {
                        parity[y] = p;
                        stack.push(y as ElementId);
                    } else if parity[y] != p {
                        continue 'assign;
                    }
                }
            }
            let mut members = FixedBitSet::with_capacity(n);
            for (id, &p) in parity.iter().enumerate() {
                if p == 0 {
                    members.insert(id);
                }
            }
            let h = Subgroup::from_bits(self.clone(), members);
            if !found.contains(&h) {
                found.push(h);
            }
        }
        found.sort();
        found
    }
}

fn base_key(base: &[u32], p: &Permutation) -> Box<[u32]> {
    base.iter().map(|&b| p.images()[b as usize]).collect()
}

/// Greedy base: repeatedly fix a point moved by some surviving element.
fn choose_base(elements: &[Permutation]) -> Vec<u32> {
    let mut survivors: Vec<&Permutation> = elements.iter().filter(|e| !e.is_identity()).collect();
    let mut base = Vec::new();
    while let Some(first) = survivors.first() {
        let point = (0..first.degree())
            .find(|&x| first.apply(x) != x)
            .expect("non-identity element moves a point");
        base.push(point as u32);
        survivors.retain(|e| e.apply(point) == point);
    }
    base
}

pub(crate) fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Isomorphism type of a small subgroup, as far as this crate needs it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", content = "n", rename_all = "kebab-case")]
pub enum GroupShape {
    Trivial,
    /// `C_n`
    Cyclic(usize),
    /// `D_n`, of order `2n`; `D_2` is the Klein four-group.
    Dihedral(usize),
    /// Anything else, tagged with its order.
    Other(usize),
}

/// A subgroup of a [`PermGroup`], stored as an explicit element set.
///
/// Equality is equality of element sets within the same parent group.
/// The ordering sorts by order, then lexicographically by element list.
#[derive(Clone)]
pub struct Subgroup {
    group: PermGroup,
    members: FixedBitSet,
    order: usize,
}

impl Subgroup {
    fn from_bits(group: PermGroup, members: FixedBitSet) -> Self {
        let order = members.count_ones(..);
        Subgroup {
            group,
            members,
            order,
        }
    }

    pub fn parent(&self) -> &PermGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_full(&self) -> bool {
        self.order == self.group.order()
    }

    pub(crate) fn contains_id(&self, id: ElementId) -> bool {
        self.members.contains(id as usize)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.group.id_of(p).is_some_and(|id| self.contains_id(id))
    }

    pub(crate) fn ids(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.members.ones().map(|i| i as ElementId)
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = &Permutation> + '_ {
        self.ids().map(|id| self.group.element(id))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.group.same_group(&other.group) && self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        assert!(self.group.same_group(&other.group), "subgroups of different groups");
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        Subgroup::from_bits(self.group.clone(), members)
    }

    /// Subgroup generated by both.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        assert!(self.group.same_group(&other.group), "subgroups of different groups");
        let mut gens = self.generator_ids();
        gens.extend(other.generator_ids());
        Subgroup::from_bits(self.group.clone(), self.group.closure(&gens))
    }

    /// A deterministic generating set: scan elements in canonical order and
    /// keep each one not already generated by those kept so far.
    pub(crate) fn generator_ids(&self) -> Vec<ElementId> {
        let mut gens = Vec::new();
        let mut span = self.group.closure(&gens);
        for id in self.ids() {
            if span.count_ones(..) == self.order {
                break;
            }
            if !span.contains(id as usize) {
                gens.push(id);
                span = self.group.closure(&gens);
            }
        }
        gens
    }

    pub fn generators(&self) -> Vec<Permutation> {
        self.generator_ids()
            .into_iter()
            .map(|id| self.group.element(id).clone())
            .collect()
    }

    pub fn orbits(&self) -> Partition {
        let gens = self.generators();
        if gens.is_empty() {
            return Partition::singletons(self.group.degree());
        }
        orbits_of(self.group.degree(), &gens)
    }

    /// This subgroup as a standalone group on the same domain.
    pub fn to_group(&self) -> PermGroup {
        let mut gens = self.generators();
        if gens.is_empty() {
            gens.push(Permutation::identity(self.group.degree()));
        }
        PermGroup::new(gens).expect("subgroup order is bounded by its parent")
    }

    pub fn shape(&self) -> GroupShape {
        let n = self.order;
        if n == 1 {
            return GroupShape::Trivial;
        }
        let g = &self.group;
        let orders: Vec<(ElementId, usize)> =
            self.ids().map(|id| (id, g.element_order(id))).collect();
        if orders.iter().any(|&(_, o)| o == n) {
            return GroupShape::Cyclic(n);
        }
        if n % 2 == 0 {
            let m = n / 2;
            // D_m: a cyclic subgroup of index two whose complement is all
            // involutions inverting it.
            for &(rot, o) in &orders {
                if o != m {
                    continue;
                }
                let rotations = g.closure(&[rot]);
                let dihedral = self.ids().filter(|x| !rotations.contains(*x as usize)).all(|x| {
                    g.element_order(x) == 2 && g.conj(rot, x) == g.inv(rot)
                });
                if dihedral {
                    return GroupShape::Dihedral(m);
                }
            }
        }
        GroupShape::Other(n)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_group(&other.group) && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.ids().cmp(other.ids()))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, gens {:?})", self.order, self.generators())
    }
}
