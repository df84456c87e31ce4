//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p cist-core --test acceptance -- --nocapture` to
//! see the lines. Each criterion returns a transcript of everything it
//! computed; criterion 10 reruns 1-9 and compares transcripts byte for byte.

mod common;

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{brute_force_has_cists, is_cist_family, SplitMix};

use cist_core::constructions::{
    construct_fixed, construct_k2r_cn, construct_k2r_pn, construct_k5_cn, construct_tm, construct_tm33,
    mcist_value, mcist_witness, validate_appendix, Applied, FixedFamily,
};
use cist_core::diagnostics::{check_necessary_conditions, diagnostics, CheckStatus, CHECK_NAMES};
use cist_core::feasibility::{evaluate_distribution, screen_survivors, Distribution};
use cist_core::graph::{build_complete, build_cycle, cartesian_product, km_cn, Edge, Graph};
use cist_core::io::{
    graph_from_edge_list, graph_from_json, graph_to_edge_list, graph_to_json, tree_set_from_edge_list,
    tree_set_from_json, tree_set_to_edge_list, tree_set_to_json, GraphRef,
};
use cist_core::search::{precheck, search_cists, SearchConfig, SearchStatus};
use cist_core::verify::{tree_degrees, verify_characterization, verify_direct, Failure, TreeSet};

struct Outcome {
    pass: bool,
    detail: String,
    transcript: String,
}

fn pairs(ts: &TreeSet) -> Vec<Vec<(usize, usize)>> {
    ts.trees().iter().map(|t| t.iter().map(|e| (e.u(), e.v())).collect()).collect()
}

fn both_valid(ts: &TreeSet) -> bool {
    let g = ts.host();
    verify_direct(g, ts).unwrap().valid && verify_characterization(g, ts).unwrap().valid
}

/// Independent closed form for mcist(K_m □ C_n).
fn closed_form(m: usize, n: usize) -> usize {
    let ceiling = m == 3 || m == 5 || (m == 7 && n <= 4) || (m == 9 && (n == 4 || n == 5));
    if ceiling {
        m.div_ceil(2)
    } else {
        m / 2
    }
}

fn record(t: &mut String, label: &str, ts: &TreeSet) {
    let _ = writeln!(t, "{label}: {}", tree_set_to_edge_list(ts).len());
    let _ = writeln!(t, "{}", tree_set_to_edge_list(ts));
}

fn c1_parametric() -> Outcome {
    let mut t = String::new();
    let mut bad = Vec::new();
    let mut count = 0;
    for r in 2..=5 {
        for n in 2..=6 {
            for cycle in [false, true] {
                if cycle && n < 3 {
                    continue;
                }
                let built = if cycle { construct_k2r_cn(r, n) } else { construct_k2r_pn(r, n) };
                let label = format!("K{}{}{n}", 2 * r, if cycle { "C" } else { "P" });
                let ok = match &built {
                    Ok(ts) => {
                        let rep = check_necessary_conditions(ts.host(), ts).unwrap();
                        record(&mut t, &label, ts);
                        ts.k() == r && both_valid(ts) && rep.all_applicable_pass() && !rep.implementation_bug
                    }
                    Err(_) => false,
                };
                count += 1;
                if !ok {
                    bad.push(label);
                }
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!("{count} sets, failing: {bad:?}"),
        transcript: t,
    }
}

fn c2_k5() -> Outcome {
    let mut t = String::new();
    let mut bad = Vec::new();
    for n in [3, 4, 5, 6, 7, 8, 9, 12] {
        let ok = match construct_k5_cn(n) {
            Ok(ts) => {
                record(&mut t, &format!("K5C{n}"), &ts);
                let g = ts.host();
                let lost = diagnostics(g, &ts).lost_edges.len();
                // oracle: lost = |E| - k(|V| - 1)
                let counted = g.edge_count() - ts.k() * (g.order() - 1);
                ts.k() == 3 && both_valid(&ts) && lost == 3 && counted == 3
            }
            Err(_) => false,
        };
        if !ok {
            bad.push(n);
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: format!("8 cycle lengths, failing n: {bad:?}"),
        transcript: t,
    }
}

fn c3_fixed() -> Outcome {
    let report = validate_appendix().unwrap();
    let mut t = format!("{report}");
    let mut notes = Vec::new();
    let mut pass = true;
    for f in FixedFamily::ALL {
        let name = f.dataset();
        let summary = report.families.iter().find(|s| s.family == name).unwrap();
        let built = construct_fixed(f).map(|ts| both_valid(&ts)).unwrap_or(false);
        let _ = writeln!(t, "{name}: built set verifies = {built}");
        if summary.unmodified.valid {
            notes.push(format!("{name} clean"));
            continue;
        }
        let entries: Vec<_> = report.entries_for(name).collect();
        let single_token = entries.iter().all(|e| {
            matches!(
                e.resolution,
                Applied::Replaced {
                    verifying_candidates: 1,
                    multi_token: false,
                    ..
                }
            )
        });
        if single_token && report.uniquely_repaired(name) && built {
            notes.push(format!("{name} {} unique single-token repair(s)", entries.len()));
        } else {
            pass = false;
            let multi = entries
                .iter()
                .filter(|e| matches!(e.resolution, Applied::Replaced { multi_token: true, .. }))
                .count();
            notes.push(format!(
                "{name} has no single-token repair ({multi} tokens changed jointly; repaired set verifies = {built})"
            ));
        }
    }
    Outcome {
        pass,
        detail: notes.join("; "),
        transcript: t,
    }
}

fn c4_torus() -> Outcome {
    let mut t = String::new();
    let mut bad = Vec::new();
    let cases: Vec<(String, cist_core::Result<TreeSet>)> = [(1, 1, 1), (1, 1, 2), (1, 2, 1)]
        .into_iter()
        .map(|(p, pp, q)| (format!("TM({p},{pp},{q})"), construct_tm(p, pp, q)))
        .chain((3..=8).map(|q| (format!("TM33({q})"), construct_tm33(q))))
        .collect();
    for (label, built) in cases {
        match built {
            Ok(ts) if ts.k() == 3 && both_valid(&ts) => record(&mut t, &label, &ts),
            _ => bad.push(label),
        }
    }
    let rejected = construct_tm(3, 3, 3).is_err();
    let _ = writeln!(t, "gcd violation rejected: {rejected}");
    Outcome {
        pass: bad.is_empty() && rejected,
        detail: format!("9 tori, failing: {bad:?}; (3,3,3) rejected: {rejected}"),
        transcript: t,
    }
}

fn c5_table() -> Outcome {
    let mut t = String::new();
    let mut value_bad = Vec::new();
    let mut witness_bad = Vec::new();
    let mut witnesses = 0;
    for m in 3..=12 {
        for n in 3..=12 {
            let v = mcist_value(m, n).unwrap();
            let _ = writeln!(t, "{m} {n} {v}");
            if v != closed_form(m, n) {
                value_bad.push((m, n));
            }
            if m < 4 {
                continue;
            }
            witnesses += 1;
            let ok = match mcist_witness(m, n) {
                Ok(ts) => {
                    let _ = writeln!(t, "  witness edges {}", tree_set_to_edge_list(&ts));
                    ts.k() == v && ts.host().order() == m * n && both_valid(&ts)
                }
                Err(_) => false,
            };
            if !ok {
                witness_bad.push((m, n));
            }
        }
    }
    let lifted = [(7, 5), (9, 6), (11, 3)].iter().all(|p| !witness_bad.contains(p));
    Outcome {
        pass: value_bad.is_empty() && witness_bad.is_empty() && lifted,
        detail: format!(
            "100 values, {witnesses} witnesses; value mismatches {value_bad:?}, witness failures {witness_bad:?}"
        ),
        transcript: t,
    }
}

fn all_constructions() -> Vec<TreeSet> {
    let mut v = Vec::new();
    for r in 2..=5 {
        for n in 2..=6 {
            v.extend(construct_k2r_pn(r, n));
            if n >= 3 {
                v.extend(construct_k2r_cn(r, n));
            }
        }
    }
    for n in [3, 4, 5, 6, 7, 8, 9, 12] {
        v.extend(construct_k5_cn(n));
    }
    for f in FixedFamily::ALL {
        v.extend(construct_fixed(f));
    }
    for (p, pp, q) in [(1, 1, 1), (1, 1, 2), (1, 2, 1)] {
        v.extend(construct_tm(p, pp, q));
    }
    for q in 3..=8 {
        v.extend(construct_tm33(q));
    }
    for (m, n) in [(7, 5), (9, 6), (11, 3)] {
        v.extend(mcist_witness(m, n));
    }
    v
}

/// One random single-edge change: either a tree-preserving swap (drop an
/// edge, reconnect with another host edge across the cut) or a move of an
/// edge into another tree.
fn mutate(ts: &TreeSet, rng: &mut SplitMix) -> Option<TreeSet> {
    let g = ts.host();
    let mut trees: Vec<Vec<Edge>> = ts.trees().to_vec();
    let i = rng.below(trees.len());
    let drop = rng.below(trees[i].len());
    let removed = trees[i].remove(drop);
    if rng.below(2) == 0 {
        // component of removed.u() after the drop
        let n = g.order();
        let mut adj = vec![Vec::new(); n];
        for e in &trees[i] {
            adj[e.u()].push(e.v());
            adj[e.v()].push(e.u());
        }
        let mut side = vec![false; n];
        side[removed.u()] = true;
        let mut stack = vec![removed.u()];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !side[y] {
                    side[y] = true;
                    stack.push(y);
                }
            }
        }
        let cut: Vec<Edge> = g
            .edges()
            .filter(|e| side[e.u()] != side[e.v()] && *e != removed)
            .collect();
        if cut.is_empty() {
            return None;
        }
        trees[i].push(cut[rng.below(cut.len())]);
    } else {
        let j = (i + 1 + rng.below(trees.len() - 1)) % trees.len();
        trees[j].push(removed);
    }
    ts.with_trees(trees).ok()
}

fn c6_oracles() -> Outcome {
    let mut t = String::new();
    let mut disagreements = 0;
    let sets = all_constructions();
    for ts in &sets {
        let g = ts.host();
        let a = verify_direct(g, ts).unwrap().valid;
        let b = verify_characterization(g, ts).unwrap().valid;
        disagreements += usize::from(a != b);
    }
    let mut rng = SplitMix(2024);
    let mut mutated = 0;
    let (mut valid, mut invalid) = (0, 0);
    // small hosts keep the definition-level oracle cheap
    let small: Vec<&TreeSet> = sets.iter().filter(|ts| ts.order() <= 40).collect();
    let mut attempt = 0;
    while mutated < 240 && attempt < 10_000 {
        let base = small[attempt % small.len()];
        attempt += 1;
        let Some(m) = mutate(base, &mut rng) else { continue };
        let g = m.host();
        let a = verify_direct(g, &m).unwrap().valid;
        let b = verify_characterization(g, &m).unwrap().valid;
        let oracle = is_cist_family(g.order(), &pairs(&m));
        if a != b || a != oracle {
            disagreements += 1;
        }
        if a {
            valid += 1;
        } else {
            invalid += 1;
        }
        mutated += 1;
        let _ = writeln!(t, "mutant {mutated}: {a} {b}");
    }
    Outcome {
        pass: disagreements == 0 && mutated >= 200,
        detail: format!(
            "{} constructions + {mutated} mutants ({valid} valid, {invalid} invalid), {disagreements} disagreements",
            sets.len()
        ),
        transcript: t,
    }
}

fn c7_feasibility() -> Outcome {
    let mut t = String::new();
    let s = screen_survivors(5, 3).unwrap();
    let profiles: Vec<[usize; 4]> = s.iter().map(|x| x.profile).collect();
    let single = profiles == vec![[0, 1, 2, 0]];
    let _ = writeln!(t, "survivors(5,3) = {profiles:?}");
    let mut checked = 0;
    let mut bad = Vec::new();
    for ts in all_constructions() {
        let g = ts.host();
        let Some(copies) = g.kcopy_count() else { continue };
        let m = g.order() / copies;
        let r = ts.k();
        if m % 2 == 0 || m != 2 * r - 1 || copies < 3 || !both_valid(&ts) {
            continue;
        }
        let rep = diagnostics(g, &ts);
        let counts = rep.trees[rep.minimal_tree()].kcopy_counts.clone().unwrap();
        let trace = evaluate_distribution(r, copies, &Distribution::new(counts.clone()).unwrap()).unwrap();
        let _ = writeln!(t, "K{m}C{copies}: {counts:?} survives {}", trace.survives);
        checked += 1;
        if !trace.survives {
            bad.push(format!("K{m}C{copies} {counts:?}"));
        }
    }
    Outcome {
        pass: single && bad.is_empty() && checked > 0,
        detail: format!("survivors(5,3) = {profiles:?}; {checked} odd-m sets screened, rejected: {bad:?}"),
        transcript: t,
    }
}

fn c8_search() -> Outcome {
    let mut t = String::new();
    let cfg = SearchConfig::default();
    let c3 = build_cycle(3).unwrap();
    let mut notes = Vec::new();
    let mut pass = true;
    for (label, g) in [("K4", build_complete(4).unwrap()), ("C3xC3", cartesian_product(&c3, &c3))] {
        let start = Instant::now();
        let a = search_cists(&g, 2, &cfg).unwrap();
        let elapsed = start.elapsed();
        let b = search_cists(&g, 2, &cfg).unwrap();
        let ok = a.status == SearchStatus::Found
            && a.witness.as_ref().is_some_and(|w| both_valid(w) && is_cist_family(g.order(), &pairs(w)))
            && a.witness == b.witness
            && a.nodes_explored == b.nodes_explored
            && elapsed < Duration::from_secs(10);
        if let Some(w) = &a.witness {
            record(&mut t, label, w);
        }
        notes.push(format!("{label} found in {} nodes", a.nodes_explored));
        pass &= ok;
    }
    let start = Instant::now();
    let rejects = precheck(&km_cn(4, 3).unwrap(), 3).is_some() && precheck(&build_cycle(5).unwrap(), 2).is_some();
    let instant = start.elapsed() < Duration::from_millis(50);
    let k4 = build_complete(4).unwrap();
    let none = search_cists(&k4, 3, &cfg).unwrap().status == SearchStatus::ExhaustedNone;
    let brute = !brute_force_has_cists(&k4, 3);
    let _ = writeln!(t, "prechecks {rejects}, K4 k=3 none {none}, brute force none {brute}");
    notes.push(format!("prechecks reject: {rejects}; K4 k=3 exhausted: {none}, brute force agrees: {brute}"));
    Outcome {
        pass: pass && rejects && instant && none && brute,
        detail: notes.join("; "),
        transcript: t,
    }
}

/// Moves a leaf `x` of tree `i` onto a vertex `v` that is inner in another
/// tree, along a lost edge, so that `v` becomes inner in two trees.
fn break_by_reattachment(ts: &TreeSet, rng: &mut SplitMix) -> Option<(TreeSet, usize)> {
    let g = ts.host();
    let n = g.order();
    let used: Vec<Edge> = ts.trees().iter().flatten().copied().collect();
    let lost: Vec<Edge> = g.edges().filter(|e| !used.contains(e)).collect();
    if lost.is_empty() {
        return None;
    }
    let degs: Vec<Vec<usize>> = ts.trees().iter().map(|t| tree_degrees(n, t)).collect();
    let start = rng.below(lost.len());
    for off in 0..lost.len() {
        let e = lost[(start + off) % lost.len()];
        for (x, v) in [(e.u(), e.v()), (e.v(), e.u())] {
            for i in 0..ts.k() {
                let inner_elsewhere = (0..ts.k()).any(|j| j != i && degs[j][v] >= 2);
                if degs[i][x] != 1 || degs[i][v] != 1 || !inner_elsewhere {
                    continue;
                }
                let mut trees = ts.trees().to_vec();
                let pos = trees[i].iter().position(|f| f.contains(x))?;
                trees[i].remove(pos);
                trees[i].push(e);
                return ts.with_trees(trees).ok().map(|b| (b, v));
            }
        }
    }
    None
}

fn c9_conditions() -> Outcome {
    let mut t = String::new();
    let mut regime_sets = 0;
    let mut bad = Vec::new();
    let sets = all_constructions();
    for ts in &sets {
        let g = ts.host();
        if !both_valid(ts) || g.half_regular_degree() != Some(ts.k()) {
            continue;
        }
        regime_sets += 1;
        let rep = check_necessary_conditions(g, ts).unwrap();
        let _ = writeln!(t, "{rep}");
        // a check whose premise does not hold (e.g. r does not divide n) is
        // reported n/a and counts as satisfied
        let all = CHECK_NAMES.iter().all(|&c| rep.check(c).unwrap().status != CheckStatus::Fail)
            && rep.check(CHECK_NAMES[0]).unwrap().status == CheckStatus::Pass;
        if !all || rep.regime.is_some() {
            bad.push(format!("{} vertices, k {}", g.order(), ts.k()));
        }
    }
    let mut rng = SplitMix(50);
    let mut broken = 0;
    let mut caught = 0;
    let mut attempt = 0;
    while broken < 50 && attempt < 5000 {
        let base = &sets[attempt % sets.len()];
        attempt += 1;
        let Some((b, _)) = break_by_reattachment(base, &mut rng) else { continue };
        broken += 1;
        let g = b.host();
        let rep = check_necessary_conditions(g, &b).unwrap();
        let first = rep.check(CHECK_NAMES[0]).unwrap();
        let witness_ok = match verify_characterization(g, &b).unwrap().failure {
            Some(Failure::VertexInnerInTwoTrees { vertex, tree_i, tree_j }) => {
                let di = tree_degrees(g.order(), b.tree(tree_i));
                let dj = tree_degrees(g.order(), b.tree(tree_j));
                tree_i != tree_j && di[vertex] >= 2 && dj[vertex] >= 2 && first.detail.contains(&vertex.to_string())
            }
            _ => false,
        };
        let _ = writeln!(t, "broken {broken}: {:?} {}", first.status, first.detail);
        if first.status == CheckStatus::Fail && witness_ok && !verify_direct(g, &b).unwrap().valid {
            caught += 1;
        }
    }
    Outcome {
        pass: bad.is_empty() && regime_sets > 0 && broken == 50 && caught == 50,
        detail: format!(
            "{regime_sets} regime sets, failing {bad:?}; {caught}/{broken} broken sets caught with correct witness"
        ),
        transcript: t,
    }
}

fn round_trip_ok(ts: &TreeSet) -> bool {
    let g: &Graph = ts.host();
    let gj = graph_to_json(g);
    let ge = graph_to_edge_list(g);
    let g_ok = graph_to_json(&graph_from_json(&gj).unwrap()) == gj
        && graph_to_edge_list(&graph_from_edge_list(&ge).unwrap()) == ge;
    let tj = tree_set_to_json(ts, &GraphRef::Inline);
    let te = tree_set_to_edge_list(ts);
    let back_j = tree_set_from_json(&tj, None, None).unwrap();
    let back_e = tree_set_from_edge_list(&te, Arc::new(g.clone())).unwrap();
    g_ok && tree_set_to_json(&back_j, &GraphRef::Inline) == tj
        && tree_set_to_edge_list(&back_e) == te
        && back_j.trees() == ts.trees()
        && back_e.trees() == ts.trees()
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

const CRITERIA: [Criterion; 9] = [
    ("parametric K_2r families", c1_parametric, Duration::from_secs(5)),
    ("K_5 □ C_n family", c2_k5, Duration::from_secs(5)),
    ("fixed families", c3_fixed, Duration::from_secs(5)),
    ("toroidal families", c4_torus, Duration::from_secs(10)),
    ("mcist table and witnesses", c5_table, Duration::from_secs(30)),
    ("verifier equivalence", c6_oracles, Duration::from_secs(30)),
    ("feasibility screen", c7_feasibility, Duration::from_secs(2)),
    ("search", c8_search, Duration::from_secs(30)),
    ("condition-suite soundness", c9_conditions, Duration::from_secs(30)),
];

/// Criteria that cannot hold as stated; see the README.
const KNOWN_UNATTAINABLE: [usize; 1] = [3];

#[test]
fn acceptance() {
    let mut transcripts = Vec::new();
    let mut failed = Vec::new();
    for (i, (name, f, limit)) in CRITERIA.iter().enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        let pass = o.pass && took <= *limit;
        println!(
            "criterion {id:>2} {}: {name} ({:.2}s, limit {}s) - {}",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            o.detail
        );
        if !pass {
            failed.push(id);
        }
        transcripts.push(o.transcript);
    }

    let start = Instant::now();
    let mut rt_bad = 0;
    let sets = all_constructions();
    for ts in &sets {
        rt_bad += usize::from(!round_trip_ok(ts));
    }
    let appendix_stable = format!("{}", validate_appendix().unwrap()) == format!("{}", validate_appendix().unwrap());
    let mut drift = Vec::new();
    for (i, (_, f, _)) in CRITERIA.iter().enumerate() {
        if f().transcript != transcripts[i] {
            drift.push(i + 1);
        }
    }
    let pass = rt_bad == 0 && appendix_stable && drift.is_empty();
    println!(
        "criterion 10 {}: round trips and determinism ({:.2}s) - {} sets, {rt_bad} round-trip failures; appendix report stable: {appendix_stable}; criteria with differing reruns: {drift:?}",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        sets.len()
    );
    if !pass {
        failed.push(10);
    }

    let unexpected: Vec<usize> = failed.iter().copied().filter(|c| !KNOWN_UNATTAINABLE.contains(c)).collect();
    let fixed: Vec<usize> = KNOWN_UNATTAINABLE.iter().copied().filter(|c| !failed.contains(c)).collect();
    assert!(unexpected.is_empty(), "failing criteria: {unexpected:?}");
    assert!(fixed.is_empty(), "criteria {fixed:?} now pass; drop them from KNOWN_UNATTAINABLE");
}
