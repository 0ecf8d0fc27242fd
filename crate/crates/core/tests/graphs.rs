use og4_core::families::{gamma, gamma_2, gamma_plus, make_pair, FamilyId};
use og4_core::graph::{DegeneracyClass, GraphError, UGraph};
use og4_core::partition::Partition;
use proptest::prelude::*;

fn cycle(n: usize) -> UGraph {
    let edges: Vec<(usize, usize)> = (0..n).map(|k| (k, (k + 1) % n)).collect();
    UGraph::build(n, &edges).unwrap()
}

#[test]
fn small_graphs() {
    assert_eq!(UGraph::build(1, &[]).unwrap().classify_degenerate(), DegeneracyClass::K1);
    assert_eq!(UGraph::build(2, &[(0, 1)]).unwrap().classify_degenerate(), DegeneracyClass::K2);
    assert_eq!(cycle(4).classify_degenerate(), DegeneracyClass::Cycle(4));
    assert_eq!(cycle(7).classify_degenerate(), DegeneracyClass::Cycle(7));
    assert_eq!(UGraph::empty(2).classify_degenerate(), DegeneracyClass::NonDegenerate);
    assert_eq!(UGraph::build(2, &[(0, 0)]), Err(GraphError::Loop(0)));
    assert!(matches!(UGraph::build(2, &[(0, 2)]), Err(GraphError::VertexOutOfRange { .. })));
    assert!(UGraph::build(1, &[]).unwrap().is_connected());
}

#[test]
fn gamma_is_non_degenerate() {
    assert_eq!(gamma(3, 5).unwrap().graph.classify_degenerate(), DegeneracyClass::NonDegenerate);
}

#[test]
fn quotients() {
    let g = gamma(3, 5).unwrap();
    assert_eq!(g.graph.quotient(&Partition::singletons(15)), g.graph);
    let k2 = UGraph::build(2, &[(0, 1)]).unwrap();
    let (q, internal) = k2.quotient_with_diagnostics(&Partition::whole(2));
    assert_eq!(q.classify_degenerate(), DegeneracyClass::K1);
    assert!(internal);
    let rows: Vec<u32> = g.vertices.labels().iter().map(|l| l.i).collect();
    let b = Partition::from_labels(&rows);
    assert_eq!(g.graph.quotient(&b).classify_degenerate(), DegeneracyClass::Cycle(3));
}

#[test]
fn double_covers() {
    let k2 = UGraph::build(2, &[(0, 1)]).unwrap();
    let d = k2.standard_double_cover();
    assert_eq!((d.vertex_count(), d.edge_count()), (4, 2));
    assert!(!d.is_connected());
    assert_eq!(cycle(3).standard_double_cover().classify_degenerate(), DegeneracyClass::Cycle(6));
    let cover = gamma(3, 3).unwrap().graph.standard_double_cover();
    assert_eq!(cover.vertex_count(), 18);
    assert_eq!(cover, gamma_2(3, 3).unwrap().graph);
}

#[test]
fn induced_subgraphs() {
    let g = gamma(4, 4).unwrap();
    let all: Vec<usize> = (0..16).collect();
    assert_eq!(g.graph.induced(&all).unwrap().0, g.graph);
    assert_eq!(g.graph.induced(&[5]).unwrap().0.classify_degenerate(), DegeneracyClass::K1);
    assert!(!g.graph.is_connected());
    let plus = gamma_plus(4, 4).unwrap().graph;
    assert_eq!(plus.vertex_count(), 8);
    assert!(plus.is_regular(4));
}

#[test]
fn graph6_round_trips_for_family_graphs() {
    for (f, r, s) in [
        (FamilyId::GammaG, 3, 5),
        (FamilyId::GammaPlusGPlus, 4, 6),
        (FamilyId::Gamma2G2, 5, 7),
    ] {
        let g = make_pair(f, r, s).unwrap().graph().clone();
        assert_eq!(UGraph::from_graph6(&g.to_graph6()).unwrap(), g);
    }
    assert!(UGraph::from_graph6("").is_err());
    assert!(UGraph::from_graph6("C").is_err());
    assert!(UGraph::from_graph6("C\u{7f}").is_err());
}

fn arb_graph() -> impl Strategy<Value = UGraph> {
    (1usize..40).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..(2 * n)).prop_map(move |pairs| {
            let edges: Vec<(usize, usize)> = pairs.into_iter().filter(|(u, v)| u != v).collect();
            UGraph::build(n, &edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn graph6_round_trip(g in arb_graph()) {
        prop_assert_eq!(UGraph::from_graph6(&g.to_graph6()).unwrap(), g);
    }

    #[test]
    fn double_cover_is_bipartite_with_twice_the_edges(g in arb_graph()) {
        let d = g.standard_double_cover();
        prop_assert!(d.is_bipartite());
        prop_assert_eq!(d.edge_count(), 2 * g.edge_count());
    }
}
