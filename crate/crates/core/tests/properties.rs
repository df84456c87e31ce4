mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use common::is_cist_family;

use cist_core::constructions::{construct_k2r_cn, construct_k5_cn, construct_tm33};
use cist_core::feasibility::{dihedral_canonical, survivors_with, Rule};
use cist_core::graph::{build_complete, build_cycle, build_path, cartesian_product, Edge, Graph};
use cist_core::io::{
    graph_from_edge_list, graph_from_json, graph_to_edge_list, graph_to_json, tree_set_from_edge_list,
    tree_set_from_json, tree_set_to_edge_list, tree_set_to_json, GraphRef,
};
use cist_core::search::{search_cists, SearchConfig, SearchStatus};
use cist_core::verify::{verify_characterization, verify_direct, TreeSet};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[i] {
                        edges.push((a, b));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, edges, vec![]).unwrap()
        })
    })
}

fn arb_factor() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (3usize..6).prop_map(|m| build_complete(m).unwrap()),
        (3usize..7).prop_map(|n| build_cycle(n).unwrap()),
        (2usize..6).prop_map(|n| build_path(n).unwrap()),
    ]
}

fn arb_construction() -> impl Strategy<Value = TreeSet> {
    prop_oneof![
        (2usize..4, 3usize..6).prop_map(|(r, n)| construct_k2r_cn(r, n).unwrap()),
        (3usize..8).prop_map(|n| construct_k5_cn(n).unwrap()),
        (3usize..6).prop_map(|q| construct_tm33(q).unwrap()),
    ]
}

fn mutated(ts: &TreeSet, i: usize, drop: usize, add: usize) -> Option<TreeSet> {
    let g = ts.host();
    let mut trees = ts.trees().to_vec();
    let i = i % trees.len();
    let len = trees[i].len();
    trees[i].remove(drop % len);
    let edges: Vec<Edge> = g.edges().collect();
    trees[i].push(edges[add % edges.len()]);
    ts.with_trees(trees).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_counts(g in arb_factor(), h in arb_factor()) {
        let p = cartesian_product(&g, &h);
        prop_assert_eq!(p.order(), g.order() * h.order());
        prop_assert_eq!(p.edge_count(), g.edge_count() * h.order() + h.edge_count() * g.order());
        let degree_sum: usize = (0..p.order()).map(|v| p.degree(v)).sum();
        prop_assert_eq!(degree_sum, 2 * p.edge_count());
        prop_assert!(p.audit());
    }

    #[test]
    fn graph_formats_round_trip(g in arb_graph(9)) {
        let j = graph_to_json(&g);
        let back = graph_from_json(&j).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(graph_to_json(&back), j);
        let e = graph_to_edge_list(&g);
        let back = graph_from_edge_list(&e).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(graph_to_edge_list(&back), e);
    }

    #[test]
    fn tree_set_formats_round_trip(ts in arb_construction()) {
        let j = tree_set_to_json(&ts, &GraphRef::Inline);
        let back = tree_set_from_json(&j, None, None).unwrap();
        prop_assert_eq!(back.trees(), ts.trees());
        prop_assert_eq!(tree_set_to_json(&back, &GraphRef::Inline), j);
        let e = tree_set_to_edge_list(&ts);
        let back = tree_set_from_edge_list(&e, Arc::new(ts.host().as_ref().clone())).unwrap();
        prop_assert_eq!(back.trees(), ts.trees());
    }

    #[test]
    fn verifiers_agree_under_mutation(ts in arb_construction(), i in 0usize..8, drop in 0usize..64, add in 0usize..512) {
        if let Some(m) = mutated(&ts, i, drop, add) {
            let g = m.host();
            let a = verify_direct(g, &m).unwrap();
            let b = verify_characterization(g, &m).unwrap();
            prop_assert_eq!(a.valid, b.valid);
            if g.order() <= 30 {
                let pairs: Vec<Vec<(usize, usize)>> =
                    m.trees().iter().map(|t| t.iter().map(|e| (e.u(), e.v())).collect()).collect();
                prop_assert_eq!(a.valid, is_cist_family(g.order(), &pairs));
            }
        }
    }

    #[test]
    fn removing_a_rule_never_shrinks_survivors(r in 2usize..7, n in 3usize..9, drop in 0usize..8) {
        let all: BTreeSet<Rule> = Rule::ALL.into_iter().collect();
        let mut fewer = all.clone();
        fewer.remove(&Rule::ALL[drop]);
        let strict: BTreeSet<[usize; 4]> = survivors_with(r, n, &all).unwrap().into_iter().map(|s| s.profile).collect();
        let loose: BTreeSet<[usize; 4]> = survivors_with(r, n, &fewer).unwrap().into_iter().map(|s| s.profile).collect();
        prop_assert!(strict.is_subset(&loose));
    }

    #[test]
    fn canonical_form_is_dihedral_invariant(v in proptest::collection::vec(0usize..4, 1..10), s in 0usize..10, flip: bool) {
        let n = v.len();
        let mut w: Vec<usize> = (0..n).map(|i| v[(i + s) % n]).collect();
        if flip {
            w.reverse();
        }
        prop_assert_eq!(dihedral_canonical(&v), dihedral_canonical(&w));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_witnesses_verify_and_are_deterministic(g in arb_graph(6)) {
        let cfg = SearchConfig::default();
        let a = search_cists(&g, 2, &cfg).unwrap();
        prop_assert_ne!(a.status, SearchStatus::BudgetExceeded);
        if let Some(w) = &a.witness {
            prop_assert!(verify_direct(&g, w).unwrap().valid);
        }
        let b = search_cists(&g, 2, &cfg).unwrap();
        prop_assert_eq!(a.witness, b.witness);
        prop_assert_eq!(a.nodes_explored, b.nodes_explored);
    }
}
