mod common;

use common::{brute_force_has_cists, is_cist_family, random_graph, SplitMix};

use cist_core::graph::{build_complete, build_cycle, cartesian_product, Graph};
use cist_core::search::{search_cists, PruneRules, SearchConfig, SearchStatus};

fn pairs(ts: &cist_core::TreeSet) -> Vec<Vec<(usize, usize)>> {
    ts.trees().iter().map(|t| t.iter().map(|e| (e.u(), e.v())).collect()).collect()
}

fn status(g: &Graph, k: usize, cfg: &SearchConfig) -> SearchStatus {
    let out = search_cists(g, k, cfg).unwrap();
    if let Some(ts) = &out.witness {
        assert!(is_cist_family(g.order(), &pairs(ts)), "witness fails the definition check");
    }
    out.status
}

fn tiny_suite() -> Vec<(Graph, usize)> {
    let c3 = build_cycle(3).unwrap();
    vec![
        (build_complete(4).unwrap(), 2),
        (cartesian_product(&c3, &c3), 2),
        (build_cycle(5).unwrap(), 2),
        (build_complete(5).unwrap(), 2),
        (build_complete(4).unwrap(), 3),
    ]
}

#[test]
fn search_matches_brute_force_on_random_graphs() {
    let mut rng = SplitMix(7);
    let cfg = SearchConfig::default();
    let mut found = 0;
    let mut none = 0;
    for round in 0..60 {
        let n = 4 + round % 3;
        let g = random_graph(&mut rng, n, 3, 4);
        for k in 2..=3 {
            let expect = if g.is_connected() && k * (n - 1) <= g.edge_count() {
                brute_force_has_cists(&g, k)
            } else {
                false
            };
            let got = status(&g, k, &cfg);
            assert_ne!(got, SearchStatus::BudgetExceeded);
            assert_eq!(got == SearchStatus::Found, expect, "n = {n}, k = {k}, edges {:?}", g.edge_vec());
            if expect {
                found += 1;
            } else {
                none += 1;
            }
        }
    }
    // both outcomes must be exercised for the comparison to mean anything
    assert!(found > 5 && none > 5, "found {found}, none {none}");
}

#[test]
fn each_rule_is_sound_on_tiny_suite() {
    let base = SearchConfig::default();
    for (g, k) in tiny_suite() {
        let reference = status(&g, k, &base);
        for name in PruneRules::NAMES {
            let cfg = SearchConfig {
                rules: PruneRules::all().without(name).unwrap(),
                ..base.clone()
            };
            assert_eq!(status(&g, k, &cfg), reference, "disabling {name} changed the outcome");
        }
    }
}

#[test]
fn each_rule_is_sound_on_random_graphs() {
    let mut rng = SplitMix(99);
    for round in 0..12 {
        let n = 4 + round % 2;
        let g = random_graph(&mut rng, n, 3, 4);
        let reference = status(&g, 2, &SearchConfig::default());
        for name in PruneRules::NAMES {
            let cfg = SearchConfig {
                rules: PruneRules::all().without(name).unwrap(),
                ..SearchConfig::default()
            };
            assert_eq!(status(&g, 2, &cfg), reference, "disabling {name}, edges {:?}", g.edge_vec());
        }
    }
}

#[test]
fn k4_three_trees_agrees_with_brute_force() {
    let g = build_complete(4).unwrap();
    assert!(!brute_force_has_cists(&g, 3));
    assert_eq!(status(&g, 3, &SearchConfig::default()), SearchStatus::ExhaustedNone);
}

#[test]
fn seeded_and_parallel_runs_agree_on_status() {
    for (g, k) in tiny_suite() {
        let reference = status(&g, k, &SearchConfig::default());
        for seed in [1, 2, 3] {
            for workers in [1, 3] {
                let cfg = SearchConfig {
                    seed,
                    workers,
                    ..SearchConfig::default()
                };
                assert_eq!(status(&g, k, &cfg), reference);
            }
        }
    }
}

#[test]
fn tiny_budget_reports_budget_exceeded() {
    // K_8 with k = 4 is too large to settle in one millisecond
    let g = build_complete(8).unwrap();
    let cfg = SearchConfig {
        budget_ms: 1,
        ..SearchConfig::default()
    };
    let out = search_cists(&g, 4, &cfg).unwrap();
    assert!(matches!(out.status, SearchStatus::BudgetExceeded | SearchStatus::Found));
}
