//! Membership in OG(4), normal quotients, and independence of cyclic quotients.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{DegeneracyClass, UGraph};
use crate::group::{PermGroup, Subgroup};
use crate::partition::Partition;
use crate::perm::PermError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum Og4Failure {
    NotConnected,
    Valency { min: usize, max: usize },
    NotVertexTransitive { orbits: usize },
    NotEdgeTransitive { orbits: usize },
    ArcTransitive,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("group degree {group} does not match {graph} vertices")]
    DegreeMismatch { group: usize, graph: usize },
    #[error("generator {0} does not preserve the edge set")]
    NotAnAction(usize),
    #[error("not in OG(4): {0:?}")]
    NotOG4(Og4Failure),
    #[error("partition is not invariant under the group")]
    PartitionNotInvariant,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is trivial")]
    TrivialSubgroup,
    #[error("subgroup belongs to a different group")]
    ForeignSubgroup,
    #[error("quotient is a {cycle_length}-cycle but the induced group has order {induced_order}")]
    OrientationAnomaly {
        cycle_length: usize,
        induced_order: usize,
    },
    #[error("quotient is not a cycle")]
    NotCyclic,
    #[error(transparent)]
    Group(#[from] PermError),
}

/// Orbit counts and stabiliser order recorded while checking membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Og4Facts {
    pub connected: bool,
    pub valency: Option<usize>,
    pub vertex_orbits: usize,
    pub edge_orbits: usize,
    pub arc_orbits: usize,
    pub stabilizer_order: usize,
}

impl Og4Facts {
    fn failure(&self, graph: &UGraph) -> Option<Og4Failure> {
        if self.valency != Some(4) {
            let degrees = (0..graph.vertex_count()).map(|v| graph.degree(v));
            return Some(Og4Failure::Valency {
                min: degrees.clone().min().unwrap_or(0),
                max: degrees.max().unwrap_or(0),
            });
        }
        if !self.connected {
            return Some(Og4Failure::NotConnected);
        }
        if self.vertex_orbits != 1 {
            return Some(Og4Failure::NotVertexTransitive {
                orbits: self.vertex_orbits,
            });
        }
        if self.edge_orbits != 1 {
            return Some(Og4Failure::NotEdgeTransitive {
                orbits: self.edge_orbits,
            });
        }
        if self.arc_orbits != 2 {
            return Some(Og4Failure::ArcTransitive);
        }
        None
    }
}

/// A graph with a group acting half-arc-transitively on it.
#[derive(Debug, Clone)]
pub struct PairOG4 {
    pub graph: UGraph,
    pub group: PermGroup,
    pub facts: Og4Facts,
}

/// Computes the orbit data of `group` on `graph`, checking the action first.
pub fn og4_facts(graph: &UGraph, group: &PermGroup) -> Result<Og4Facts, QuotientError> {
    let n = graph.vertex_count();
    if group.degree() != n {
        return Err(QuotientError::DegreeMismatch {
            group: group.degree(),
            graph: n,
        });
    }
    if let Some(k) = group.generators().iter().position(|g| !graph.is_automorphism(g)) {
        return Err(QuotientError::NotAnAction(k));
    }
    let valency = (n > 0 && graph.is_regular(graph.degree(0))).then(|| graph.degree(0));

    // Arcs are numbered by (tail, position of head in the tail's list).
    let mut offset = Vec::with_capacity(n + 1);
    offset.push(0usize);
    for v in 0..n {
        offset.push(offset[v] + graph.degree(v));
    }
    let arc = |u: usize, v: usize| -> usize {
        let k = graph.neighbors(u).binary_search(&(v as u32)).expect("arc exists");
        offset[u] + k
    };
    let mut arcs = UnionFind::new(offset[n]);
    for g in group.generators() {
        for u in 0..n {
            for &v in graph.neighbors(u) {
                arcs.union(arc(u, v as usize), arc(g.apply(u), g.apply(v as usize)));
            }
        }
    }
    let arc_orbits = arcs.count();
    for u in 0..n {
        for &v in graph.neighbors(u) {
            arcs.union(arc(u, v as usize), arc(v as usize, u));
        }
    }
    let edge_orbits = arcs.count();

    Ok(Og4Facts {
        connected: graph.is_connected(),
        valency,
        vertex_orbits: group.orbits().cell_count(),
        edge_orbits,
        arc_orbits,
        stabilizer_order: if n == 0 {
            group.order()
        } else {
            group.point_stabilizer(0).order()
        },
    })
}

/// Checks that `group` acts on `graph` and that the pair lies in OG(4).
pub fn verify_og4(graph: &UGraph, group: &PermGroup) -> Result<PairOG4, QuotientError> {
    let facts = og4_facts(graph, group)?;
    if let Some(fail) = facts.failure(graph) {
        return Err(QuotientError::NotOG4(fail));
    }
    Ok(PairOG4 {
        graph: graph.clone(),
        group: group.clone(),
        facts,
    })
}

struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            sets: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a] = b;
            self.sets -= 1;
        }
    }

    fn count(&self) -> usize {
        self.sets
    }
}

/// The elements of `group` that fix every cell of `p` setwise.
pub fn kernel_of_partition_action(group: &PermGroup, p: &Partition) -> Result<Subgroup, QuotientError> {
    if p.size() != group.degree() {
        return Err(QuotientError::PartitionNotInvariant);
    }
    if !group.generators().iter().all(|g| p.is_invariant_under(g)) {
        return Err(QuotientError::PartitionNotInvariant);
    }
    // Group elements permute the cells, so fixing each cell's first point's
    // cell is enough.
    Ok(group.filter_subgroup(|g| {
        p.cells()
            .iter()
            .all(|cell| p.cell_of(g.apply(cell[0] as usize)) == p.cell_of(cell[0] as usize))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Oriented,
    Unoriented,
    NotApplicable,
}

#[derive(Debug, Clone)]
pub struct QuotientReport {
    pub normal: Subgroup,
    pub partition: Partition,
    pub quotient: UGraph,
    pub kernel: Subgroup,
    pub degeneracy: DegeneracyClass,
    pub orientation: Orientation,
    /// `|G| / |Ñ|`, the order of the group induced on the quotient.
    pub induced_group_order: usize,
    /// Some edge of the original graph joined two vertices of one orbit.
    pub intra_cell_edges: bool,
    /// For non-degenerate quotients, whether the induced pair is in OG(4).
    pub quotient_in_og4: Option<bool>,
}

/// Quotient of `pair` by the orbits of a nontrivial normal subgroup.
pub fn normal_quotient(pair: &PairOG4, n: &Subgroup) -> Result<QuotientReport, QuotientError> {
    if !n.parent().same_group(&pair.group) {
        return Err(QuotientError::ForeignSubgroup);
    }
    if n.is_trivial() {
        return Err(QuotientError::TrivialSubgroup);
    }
    if !pair.group.is_normal(n) {
        return Err(QuotientError::NotNormal);
    }
    let partition = n.orbits();
    let kernel = kernel_of_partition_action(&pair.group, &partition)?;
    let (quotient, intra_cell_edges) = pair.graph.quotient_with_diagnostics(&partition);
    let degeneracy = quotient.classify_degenerate();
    let induced_group_order = pair.group.order() / kernel.order();
    let orientation = match degeneracy {
        DegeneracyClass::Cycle(r) if induced_group_order == r => Orientation::Oriented,
        DegeneracyClass::Cycle(r) if induced_group_order == 2 * r => Orientation::Unoriented,
        DegeneracyClass::Cycle(r) => {
            return Err(QuotientError::OrientationAnomaly {
                cycle_length: r,
                induced_order: induced_group_order,
            })
        }
        _ => Orientation::NotApplicable,
    };
    let quotient_in_og4 = (degeneracy == DegeneracyClass::NonDegenerate).then(|| {
        let gens = pair
            .group
            .generators()
            .iter()
            .map(|g| partition.induced(g))
            .collect();
        PermGroup::new(gens)
            .ok()
            .is_some_and(|induced| verify_og4(&quotient, &induced).is_ok())
    });
    Ok(QuotientReport {
        normal: n.clone(),
        partition,
        quotient,
        kernel,
        degeneracy,
        orientation,
        induced_group_order,
        intra_cell_edges,
        quotient_in_og4,
    })
}

/// JSON view of a [`QuotientReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientSummary {
    pub subgroup_order: usize,
    pub subgroup_generators: Vec<Vec<u32>>,
    pub cells: Vec<Vec<u32>>,
    pub quotient_vertices: usize,
    pub quotient_edges: usize,
    pub degeneracy: DegeneracyClass,
    pub orientation: Orientation,
    pub kernel_order: usize,
    pub kernel_generators: Vec<Vec<u32>>,
    pub induced_group_order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient_in_og4: Option<bool>,
}

fn image_arrays(h: &Subgroup) -> Vec<Vec<u32>> {
    h.generators().iter().map(|g| g.images().to_vec()).collect()
}

impl QuotientReport {
    pub fn summary(&self) -> QuotientSummary {
        QuotientSummary {
            subgroup_order: self.normal.order(),
            subgroup_generators: image_arrays(&self.normal),
            cells: self.partition.cells().to_vec(),
            quotient_vertices: self.quotient.vertex_count(),
            quotient_edges: self.quotient.edge_count(),
            degeneracy: self.degeneracy,
            orientation: self.orientation,
            kernel_order: self.kernel.order(),
            kernel_generators: image_arrays(&self.kernel),
            induced_group_order: self.induced_group_order,
            quotient_in_og4: self.quotient_in_og4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Independence {
    pub independent: bool,
    /// Order of `K = Ñ ∩ M̃`.
    pub intersection_order: usize,
    /// Shape of the quotient by `K`.
    pub degeneracy: DegeneracyClass,
}

/// Independence test for two cyclic quotients of the same pair.
pub fn independence(
    pair: &PairOG4,
    n: &QuotientReport,
    m: &QuotientReport,
) -> Result<Independence, QuotientError> {
    if n.degeneracy.cycle_length().is_none() || m.degeneracy.cycle_length().is_none() {
        return Err(QuotientError::NotCyclic);
    }
    let k = n.kernel.intersection(&m.kernel);
    let degeneracy = if k.is_trivial() {
        pair.graph.classify_degenerate()
    } else {
        pair.graph.quotient(&k.orbits()).classify_degenerate()
    };
    Ok(Independence {
        independent: degeneracy.cycle_length().is_none(),
        intersection_order: k.order(),
        degeneracy,
    })
}

/// Convenience form of [`independence`] taking the subgroups themselves.
pub fn are_independent(
    pair: &PairOG4,
    n: &Subgroup,
    m: &Subgroup,
) -> Result<Independence, QuotientError> {
    independence(pair, &normal_quotient(pair, n)?, &normal_quotient(pair, m)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StabilizerKernelCheck {
    pub orientation: Orientation,
    pub holds: bool,
    /// A vertex whose stabiliser breaks the expected relation.
    pub failing_vertex: Option<usize>,
}

/// For a cyclic quotient, checks `G_α ≤ Ñ` (oriented) or `G_α ∩ Ñ = 1`
/// (unoriented) at every vertex `α`. Returns `None` for other quotients.
pub fn stabilizer_kernel_relation(
    pair: &PairOG4,
    report: &QuotientReport,
) -> Option<StabilizerKernelCheck> {
    let oriented = match report.orientation {
        Orientation::Oriented => true,
        Orientation::Unoriented => false,
        Orientation::NotApplicable => return None,
    };
    let mut failing_vertex = None;
    for g in pair.group.elements() {
        if g.is_identity() {
            continue;
        }
        let Some(alpha) = (0..g.degree()).find(|&x| g.apply(x) == x) else {
            continue;
        };
        if report.kernel.contains(g) != oriented {
            failing_vertex = Some(alpha);
            break;
        }
    }
    Some(StabilizerKernelCheck {
        orientation: report.orientation,
        holds: failing_vertex.is_none(),
        failing_vertex,
    })
}
