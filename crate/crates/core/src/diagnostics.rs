//! Inner-vertex, lost-edge and K-copy diagnostics, plus the suite of
//! necessary conditions every `r`-CIST set on a `2r`-regular host satisfies.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::graph::{Edge, Graph};
use crate::verify::{verify_characterization, verify_direct, Failure, TreeSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeReport {
    pub index: usize,
    pub inner_vertices: Vec<usize>,
    pub inner_count: usize,
    pub max_degree: usize,
    /// `|Inn|·r - n + 2`; present only for `r` trees on a `2r`-regular host.
    pub ped: Option<i64>,
    /// Lost edges with both endpoints inner in this tree.
    pub lost_in_tree: Vec<Edge>,
    /// Inner vertices per K-copy, `n_j`.
    pub kcopy_counts: Option<Vec<usize>>,
    /// `tallies[c]` = number of K-copies holding exactly `c` inner vertices.
    pub kcopy_tallies: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CistReport {
    pub order: usize,
    pub k: usize,
    /// Common degree of the host, if regular.
    pub regular_degree: Option<usize>,
    /// `r` when the host is `2r`-regular and `k = r`.
    pub r: Option<usize>,
    pub lost_edges: Vec<Edge>,
    pub trees: Vec<TreeReport>,
}

impl CistReport {
    /// Index of the tree with fewest inner vertices, ties to the lowest index.
    pub fn minimal_tree(&self) -> usize {
        self.trees
            .iter()
            .min_by_key(|t| (t.inner_count, t.index))
            .map(|t| t.index)
            .unwrap_or(0)
    }
}

/// Computes the report. Trees are assumed spanning but need not form a
/// valid CIST set.
pub fn diagnostics(g: &Graph, ts: &TreeSet) -> CistReport {
    let n = g.order();
    let k = ts.k();
    let regular_degree = g.regular_degree();
    let r = g.half_regular_degree().filter(|&r| r == k);

    let all: Vec<Edge> = g.edge_vec();
    let mut used = vec![false; all.len()];
    for t in ts.trees() {
        for e in t {
            if let Ok(pos) = all.binary_search(e) {
                used[pos] = true;
            }
        }
    }
    let lost_edges: Vec<Edge> = all
        .iter()
        .zip(&used)
        .filter(|(_, &u)| !u)
        .map(|(e, _)| *e)
        .collect();

    let layout = g.kcopy_layout();
    let trees = (0..k)
        .map(|i| {
            let deg = ts.degrees(i);
            let inner_vertices: Vec<usize> = (0..n).filter(|&v| deg[v] >= 2).collect();
            let inner_count = inner_vertices.len();
            let lost_in_tree = lost_edges
                .iter()
                .filter(|e| deg[e.u()] >= 2 && deg[e.v()] >= 2)
                .copied()
                .collect();
            let (kcopy_counts, kcopy_tallies) = match layout {
                Some(l) => {
                    let mut counts = vec![0; l.copies];
                    for &v in &inner_vertices {
                        counts[l.copy_of(v)] += 1;
                    }
                    let top = counts.iter().copied().max().unwrap_or(0).max(3);
                    let mut tallies = vec![0; top + 1];
                    for &c in &counts {
                        tallies[c] += 1;
                    }
                    (Some(counts), Some(tallies))
                }
                None => (None, None),
            };
            TreeReport {
                index: i,
                max_degree: deg.iter().copied().max().unwrap_or(0),
                ped: r.map(|r| (inner_count * r) as i64 - n as i64 + 2),
                inner_vertices,
                inner_count,
                lost_in_tree,
                kcopy_counts,
                kcopy_tallies,
            }
        })
        .collect();

    CistReport {
        order: n,
        k,
        regular_degree,
        r,
        lost_edges,
        trees,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    /// Whether the set is accepted by `verify_direct`.
    pub verified: bool,
    /// Why the ten regime conditions were skipped, if they were.
    pub regime: Option<String>,
    pub checks: Vec<ConditionResult>,
    /// A verified set failed an applicable check. Always a bug.
    pub implementation_bug: bool,
}

impl ConditionReport {
    pub fn check(&self, name: &str) -> Option<&ConditionResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionResult> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn all_applicable_pass(&self) -> bool {
        self.failures().next().is_none()
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verified: {}", self.verified)?;
        if let Some(reason) = &self.regime {
            writeln!(f, "regime: {reason}")?;
        }
        for c in &self.checks {
            let s = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::NotApplicable => "n/a",
            };
            writeln!(f, "{:<24} {:<5} {}", c.name, s, c.detail)?;
        }
        if self.implementation_bug {
            writeln!(f, "IMPLEMENTATION BUG: verified set fails a necessary condition")?;
        }
        Ok(())
    }
}

pub const CHECK_NAMES: [&str; 11] = [
    "inner-disjointness",
    "max-degree",
    "min-inner-count",
    "inner-count-window",
    "lost-edge-count",
    "lost-in-tree-sum",
    "ped-nonnegative",
    "minimal-tree-slack",
    "divisible-balance",
    "lost-endpoint-degree",
    "inner-domination",
];

fn div_ceil(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

fn result(name: &'static str, ok: bool, detail: String) -> ConditionResult {
    ConditionResult {
        name,
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail,
    }
}

/// Runs the degree characterization plus ten necessary conditions. The ten
/// are evaluated only for `r` trees on a `2r`-regular host of order >= 3.
pub fn check_necessary_conditions(g: &Graph, ts: &TreeSet) -> Result<ConditionReport> {
    let direct = verify_direct(g, ts)?;
    let charac = verify_characterization(g, ts)?;
    let mut checks = Vec::with_capacity(CHECK_NAMES.len());
    checks.push(match &charac.failure {
        None => result(CHECK_NAMES[0], true, "every vertex inner in at most one tree".into()),
        Some(f) => result(CHECK_NAMES[0], false, f.to_string()),
    });

    let spanning = !matches!(charac.failure, Some(Failure::NotSpanningTree { .. }));
    let r = g.half_regular_degree().filter(|&r| r == ts.k());
    let regime = if !spanning {
        Some("some tree is not a spanning tree".to_string())
    } else if g.order() < 3 {
        Some(format!("order {} below 3", g.order()))
    } else if r.is_none() {
        Some(match g.regular_degree() {
            None => "host is not regular".to_string(),
            Some(d) => format!("host is {d}-regular, k = {} is not half the degree", ts.k()),
        })
    } else {
        None
    };

    if let (None, Some(r)) = (&regime, r) {
        let rep = diagnostics(g, ts);
        conditions(g, ts, &rep, r, &mut checks);
    } else {
        for name in &CHECK_NAMES[1..] {
            checks.push(ConditionResult {
                name,
                status: CheckStatus::NotApplicable,
                detail: String::new(),
            });
        }
    }

    let implementation_bug = direct.valid && checks.iter().any(|c| c.status == CheckStatus::Fail);
    Ok(ConditionReport {
        verified: direct.valid,
        regime,
        checks,
        implementation_bug,
    })
}

fn conditions(g: &Graph, ts: &TreeSet, rep: &CistReport, r: usize, out: &mut Vec<ConditionResult>) {
    let n = g.order() as i64;
    let ri = r as i64;
    let counts: Vec<i64> = rep.trees.iter().map(|t| t.inner_count as i64).collect();

    // max tree degree <= r + 1
    let (worst_tree, worst_deg) = rep
        .trees
        .iter()
        .map(|t| (t.index, t.max_degree))
        .max_by_key(|&(i, d)| (d, std::cmp::Reverse(i)))
        .unwrap();
    out.push(result(
        CHECK_NAMES[1],
        worst_deg <= r + 1,
        format!("max degree {worst_deg} (tree {worst_tree}) vs r+1 = {}", r + 1),
    ));

    // min |Inn| <= floor(n / r)
    let min_t = rep.minimal_tree();
    let min_c = counts[min_t];
    out.push(result(
        CHECK_NAMES[2],
        min_c <= n / ri,
        format!("min |Inn| = {min_c} (tree {min_t}) vs floor(n/r) = {}", n / ri),
    ));

    // ceil((n-2)/r) <= |Inn_i| <= n - ceil((n-2)/r)(r-1)
    let lo = div_ceil(n - 2, ri);
    let hi = n - lo * (ri - 1);
    let bad = counts.iter().position(|&c| c < lo || c > hi);
    out.push(result(
        CHECK_NAMES[3],
        bad.is_none(),
        match bad {
            None => format!("all |Inn| in [{lo}, {hi}]"),
            Some(i) => format!("tree {i}: |Inn| = {} outside [{lo}, {hi}]", counts[i]),
        },
    ));

    // |E^l| = r
    let lost = rep.lost_edges.len();
    out.push(result(
        CHECK_NAMES[4],
        lost == r,
        format!("|E^l| = {lost} vs r = {r}"),
    ));

    // sum |E^l_Ti| <= r
    let sum: usize = rep.trees.iter().map(|t| t.lost_in_tree.len()).sum();
    out.push(result(
        CHECK_NAMES[5],
        sum <= r,
        format!("sum |E^l_T| = {sum} vs r = {r}"),
    ));

    // ped >= 0
    let peds: Vec<i64> = rep.trees.iter().map(|t| t.ped.unwrap()).collect();
    let neg = peds.iter().position(|&p| p < 0);
    out.push(result(
        CHECK_NAMES[6],
        neg.is_none(),
        match neg {
            None => format!("ped = {peds:?}"),
            Some(i) => format!("tree {i}: ped = {} < 0", peds[i]),
        },
    ));

    // minimal tree: ped <= 2 and |E^l_T| <= 1, strict when r does not divide n
    let strict = n % ri != 0;
    let (p, l) = (peds[min_t], rep.trees[min_t].lost_in_tree.len() as i64);
    let ok = if strict { p < 2 && l < 1 } else { p <= 2 && l <= 1 };
    out.push(result(
        CHECK_NAMES[7],
        ok,
        format!(
            "tree {min_t}: ped = {p}, |E^l_T| = {l}, bound {} 2 and {} 1",
            if strict { "<" } else { "<=" },
            if strict { "<" } else { "<=" }
        ),
    ));

    // r >= 3 and r | n: every |Inn| = n/r and ped = 2
    if r >= 3 && n % ri == 0 {
        let bad = (0..counts.len()).find(|&i| counts[i] != n / ri || peds[i] != 2);
        out.push(result(
            CHECK_NAMES[8],
            bad.is_none(),
            match bad {
                None => format!("all |Inn| = {} and ped = 2", n / ri),
                Some(i) => format!("tree {i}: |Inn| = {}, ped = {}", counts[i], peds[i]),
            },
        ));
    } else {
        out.push(ConditionResult {
            name: CHECK_NAMES[8],
            status: CheckStatus::NotApplicable,
            detail: format!("needs r >= 3 and r | n (r = {r}, n = {n})"),
        });
    }

    // endpoints of E^l_Ti have degree <= r in T_i
    let mut witness = None;
    'outer: for (i, t) in rep.trees.iter().enumerate() {
        let deg = ts.degrees(i);
        for e in &t.lost_in_tree {
            for x in [e.u(), e.v()] {
                if deg[x] > r {
                    witness = Some((i, *e, x, deg[x]));
                    break 'outer;
                }
            }
        }
    }
    out.push(result(
        CHECK_NAMES[9],
        witness.is_none(),
        match witness {
            None => "all lost-edge endpoints within degree r".into(),
            Some((i, e, x, d)) => format!("tree {i}: lost edge {e}, vertex {x} has degree {d}"),
        },
    ));

    // every vertex has a host neighbour inner in each tree
    let mut witness = None;
    'dom: for t in &rep.trees {
        let mut inner = vec![false; g.order()];
        for &v in &t.inner_vertices {
            inner[v] = true;
        }
        for v in 0..g.order() {
            if !g.neighbors(v).iter().any(|&w| inner[w]) {
                witness = Some((t.index, v));
                break 'dom;
            }
        }
    }
    out.push(result(
        CHECK_NAMES[10],
        witness.is_none(),
        match witness {
            None => "every vertex adjacent to an inner vertex of every tree".into(),
            Some((i, v)) => format!("vertex {v} has no neighbour inner in tree {i}"),
        },
    ));
}
