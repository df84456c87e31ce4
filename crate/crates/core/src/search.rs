//! Exhaustive backtracking search for `k` CISTs in small graphs.
//!
//! The search has two phases. Phase A gives every vertex a role: the one
//! tree in which it is inner, or leaf-everywhere. Phase B then assigns each
//! edge to a tree or marks it lost, consistently with the roles. Because a
//! vertex can be inner in at most one tree of a CIST family, every family
//! has exactly one role assignment (up to renaming trees), so the search is
//! complete as long as every pruning rule is a necessary condition. Each
//! rule can be switched off for soundness regressions. Any witness is
//! re-verified before it is returned.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CistError, Result};
use crate::graph::{Edge, Graph};
use crate::verify::{verify_characterization, verify_direct, TreeSet};

/// Individually switchable pruning rules. All are on by default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PruneRules {
    /// Trees are interchangeable: a vertex may open tree `t` only after
    /// trees `0..t` are in use.
    pub symmetry: bool,
    /// Inner vertices need host degree `>= k + 1`, leaf-everywhere `>= k`.
    pub role_degree: bool,
    /// A vertex not inner in tree `t` needs a host neighbour inner in `t`.
    pub domination: bool,
    /// Inner sets are non-empty and connected in the host.
    pub inner_connectivity: bool,
    /// At most `|E| - k(|V|-1)` edges are lost.
    pub lost_budget: bool,
    /// Partial trees stay forests.
    pub acyclicity: bool,
    /// Edges only join a tree through one of its inner vertices, and
    /// non-inner vertices take exactly one edge per tree.
    pub role_consistency: bool,
    /// Tree degree of an inner vertex stays within its cap.
    pub degree_cap: bool,
    /// Inner vertices can still reach tree degree 2.
    pub inner_min_degree: bool,
    /// Every tree can still become connected.
    pub reachability: bool,
}

impl Default for PruneRules {
    fn default() -> Self {
        PruneRules::all()
    }
}

impl PruneRules {
    pub const NAMES: [&'static str; 10] = [
        "symmetry",
        "role-degree",
        "domination",
        "inner-connectivity",
        "lost-budget",
        "acyclicity",
        "role-consistency",
        "degree-cap",
        "inner-min-degree",
        "reachability",
    ];

    pub fn all() -> Self {
        PruneRules {
            symmetry: true,
            role_degree: true,
            domination: true,
            inner_connectivity: true,
            lost_budget: true,
            acyclicity: true,
            role_consistency: true,
            degree_cap: true,
            inner_min_degree: true,
            reachability: true,
        }
    }

    pub fn without(mut self, name: &str) -> Result<Self> {
        let slot = match name {
            "symmetry" => &mut self.symmetry,
            "role-degree" => &mut self.role_degree,
            "domination" => &mut self.domination,
            "inner-connectivity" => &mut self.inner_connectivity,
            "lost-budget" => &mut self.lost_budget,
            "acyclicity" => &mut self.acyclicity,
            "role-consistency" => &mut self.role_consistency,
            "degree-cap" => &mut self.degree_cap,
            "inner-min-degree" => &mut self.inner_min_degree,
            "reachability" => &mut self.reachability,
            _ => return Err(CistError::InvalidParameter(format!("unknown pruning rule {name:?}"))),
        };
        *slot = false;
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub budget_ms: u64,
    /// 0 keeps the canonical branch order; anything else shuffles it.
    pub seed: u64,
    pub workers: usize,
    /// Overrides the per-vertex tree-degree cap `deg(v) - (k - 1)`.
    pub max_tree_degree: Option<usize>,
    pub rules: PruneRules,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget_ms: 60_000,
            seed: 0,
            workers: 1,
            max_tree_degree: None,
            rules: PruneRules::all(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Found,
    ExhaustedNone,
    BudgetExceeded,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witness: Option<TreeSet>,
    pub nodes_explored: u64,
    /// Set when the precheck decided the instance.
    pub reason: Option<String>,
}

/// Immediate infeasibility by edge counting or disconnection.
pub fn precheck(g: &Graph, k: usize) -> Option<String> {
    let need = k * (g.order() - 1);
    if need > g.edge_count() {
        return Some(format!(
            "{k} spanning trees need {k}·{} = {need} edges, graph has {}",
            g.order() - 1,
            g.edge_count()
        ));
    }
    if !g.is_connected() {
        return Some("graph is disconnected".into());
    }
    None
}

const UNSET: u8 = u8::MAX;

/// Union-find with union by size and an undo trail.
#[derive(Clone)]
struct TrailDsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    trail: Vec<(usize, usize)>,
}

impl TrailDsu {
    fn new(n: usize) -> Self {
        TrailDsu {
            parent: (0..n).collect(),
            size: vec![1; n],
            trail: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Records a trail entry either way so that `undo` is unconditional.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            self.trail.push((usize::MAX, 0));
            return false;
        }
        if self.size[ra] > self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[ra] = rb;
        self.size[rb] += self.size[ra];
        self.trail.push((ra, rb));
        true
    }

    fn undo(&mut self) {
        if let Some((ra, rb)) = self.trail.pop() {
            if ra != usize::MAX {
                self.parent[ra] = ra;
                self.size[rb] -= self.size[ra];
            }
        }
    }
}

enum Flow {
    Continue,
    Found(Vec<Vec<Edge>>),
    Stop,
}

/// Shared, read-only problem description.
struct Problem<'a> {
    g: &'a Graph,
    host: Arc<Graph>,
    k: usize,
    n: usize,
    /// Vertex branching order and per-vertex role try order.
    order: Vec<usize>,
    role_order: Vec<Vec<u8>>,
    cap: Vec<usize>,
    max_lost: usize,
    rules: PruneRules,
    rng_seed: u64,
    deadline: Instant,
    stop: &'a AtomicBool,
}

struct Worker<'a, 'p> {
    p: &'p Problem<'a>,
    nodes: u64,
    role: Vec<u8>,
    count: Vec<usize>,
    leaf_leaf: usize,
    budget_hit: bool,
}

impl<'a, 'p> Worker<'a, 'p> {
    fn new(p: &'p Problem<'a>) -> Self {
        Worker {
            p,
            nodes: 0,
            role: vec![UNSET; p.n],
            count: vec![0; p.k + 1],
            leaf_leaf: 0,
            budget_hit: false,
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes.is_multiple_of(256) {
            if self.p.stop.load(Ordering::Relaxed) {
                return false;
            }
            if Instant::now() >= self.p.deadline {
                self.budget_hit = true;
                return false;
            }
        }
        true
    }

    fn set_role(&mut self, v: usize, r: u8) {
        let k = self.p.k as u8;
        if r == k {
            self.leaf_leaf += self.p.g.neighbors(v).iter().filter(|&&w| self.role[w] == k).count();
        }
        self.role[v] = r;
        self.count[r as usize] += 1;
    }

    fn clear_role(&mut self, v: usize) {
        let k = self.p.k as u8;
        let r = self.role[v];
        self.role[v] = UNSET;
        self.count[r as usize] -= 1;
        if r == k {
            self.leaf_leaf -= self.p.g.neighbors(v).iter().filter(|&&w| self.role[w] == k).count();
        }
    }

    fn trees_in_use(&self) -> usize {
        self.count[..self.p.k].iter().filter(|&&c| c > 0).count()
    }

    /// Checks after assigning a role to the vertex at `depth`.
    fn roles_feasible(&self, v: usize, depth: usize) -> bool {
        let p = self.p;
        let (g, k) = (p.g, p.k);
        let r = self.role[v] as usize;
        let rules = &p.rules;
        if rules.role_degree {
            let need = if r < k { k + 1 } else { k };
            if g.degree(v) < need {
                return false;
            }
            if r < k && p.cap[v] < 2 {
                return false;
            }
        }
        let unassigned = p.n - depth - 1;
        if rules.inner_connectivity && k - self.trees_in_use() > unassigned {
            return false;
        }
        if rules.lost_budget && self.leaf_leaf > p.max_lost {
            return false;
        }
        if rules.domination {
            let dominated = |x: usize| {
                let rx = self.role[x] as usize;
                (0..k).filter(|&t| t != rx).all(|t| {
                    g.neighbors(x)
                        .iter()
                        .any(|&w| self.role[w] == t as u8 || self.role[w] == UNSET)
                })
            };
            if !dominated(v) {
                return false;
            }
            for &w in g.neighbors(v) {
                if self.role[w] != UNSET && !dominated(w) {
                    return false;
                }
            }
        }
        if rules.inner_connectivity {
            for t in 0..k {
                if self.count[t] > 0 && !self.inner_connectable(t as u8) {
                    return false;
                }
            }
        }
        if rules.lost_budget {
            // edges usable by tree t need an endpoint that is inner in t or open
            for t in 0..k as u8 {
                let open = |x: usize| self.role[x] == t || self.role[x] == UNSET;
                let usable = g.edges().filter(|e| open(e.u()) || open(e.v())).count();
                if usable < p.n - 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Vertices of role `t` lie in one component of the subgraph induced by
    /// role-`t` and unassigned vertices.
    fn inner_connectable(&self, t: u8) -> bool {
        let g = self.p.g;
        let ok = |x: usize| self.role[x] == t || self.role[x] == UNSET;
        let start = match (0..self.p.n).find(|&x| self.role[x] == t) {
            Some(s) => s,
            None => return true,
        };
        let mut seen = vec![false; self.p.n];
        seen[start] = true;
        let mut stack = vec![start];
        let mut reached = 0;
        while let Some(x) = stack.pop() {
            if self.role[x] == t {
                reached += 1;
            }
            for &w in g.neighbors(x) {
                if !seen[w] && ok(w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        reached == self.count[t as usize]
    }

    fn allowed(&self, cand: u8) -> bool {
        let k = self.p.k;
        if (cand as usize) < k && self.p.rules.symmetry {
            // trees 0..used are open; the next unused tree may be opened
            let used = self.trees_in_use();
            return (cand as usize) <= used && (0..cand as usize).all(|t| self.count[t] > 0);
        }
        true
    }

    /// Phase A from `depth`; with `stop_at` set, collects role prefixes
    /// instead of descending into Phase B.
    fn roles(&mut self, depth: usize, stop_at: Option<usize>, out: &mut Vec<Vec<u8>>) -> Flow {
        if !self.tick() {
            return Flow::Stop;
        }
        if Some(depth) == stop_at {
            out.push(self.role.clone());
            return Flow::Continue;
        }
        if depth == self.p.n {
            return self.edges_phase();
        }
        let v = self.p.order[depth];
        for &cand in &self.p.role_order[v] {
            if !self.allowed(cand) {
                continue;
            }
            self.set_role(v, cand);
            if self.roles_feasible(v, depth) {
                match self.roles(depth + 1, stop_at, out) {
                    Flow::Continue => {}
                    other => {
                        self.clear_role(v);
                        return other;
                    }
                }
            }
            self.clear_role(v);
        }
        Flow::Continue
    }

    fn edges_phase(&mut self) -> Flow {
        EdgeSearch::new(self.p, &self.role).run(self)
    }
}

const LOST: u8 = u8::MAX;

struct EdgeSearch<'p, 'a> {
    p: &'p Problem<'a>,
    role: Vec<u8>,
    edges: Vec<(usize, usize)>,
    cands: Vec<Vec<u8>>,
    assign: Vec<u8>,
    dsu: Vec<TrailDsu>,
    deg: Vec<Vec<usize>>,
    avail: Vec<Vec<usize>>,
    lost: usize,
}

impl<'p, 'a> EdgeSearch<'p, 'a> {
    fn new(p: &'p Problem<'a>, role: &[u8]) -> Self {
        let (k, n) = (p.k, p.n);
        let mut pos = vec![0; n];
        for (i, &v) in p.order.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges: Vec<(usize, usize)> = p.g.edges().map(|e| (e.u(), e.v())).collect();
        edges.sort_by_key(|&(a, b)| {
            let (x, y) = if pos[a] < pos[b] { (pos[a], pos[b]) } else { (pos[b], pos[a]) };
            (x, y)
        });
        let mut rng = ChaCha8Rng::seed_from_u64(p.rng_seed ^ 0x9e37_79b9);
        let mut lost = 0;
        let mut kept = Vec::with_capacity(edges.len());
        let mut cands = Vec::with_capacity(edges.len());
        let mut avail = vec![vec![0; n]; k];
        for (a, b) in edges {
            let mut c: Vec<u8> = if p.rules.role_consistency {
                let (ra, rb) = (role[a], role[b]);
                let mut c = Vec::new();
                if (ra as usize) < k {
                    c.push(ra);
                }
                if (rb as usize) < k && rb != ra {
                    c.push(rb);
                }
                c.sort_unstable();
                c
            } else {
                (0..k as u8).collect()
            };
            if c.is_empty() {
                lost += 1;
                continue;
            }
            if p.rng_seed != 0 {
                c.shuffle(&mut rng);
            }
            for &t in &c {
                avail[t as usize][a] += 1;
                avail[t as usize][b] += 1;
            }
            c.push(LOST);
            kept.push((a, b));
            cands.push(c);
        }
        let m = kept.len();
        EdgeSearch {
            p,
            role: role.to_vec(),
            edges: kept,
            cands,
            assign: vec![UNSET; m],
            dsu: vec![TrailDsu::new(n); k],
            deg: vec![vec![0; n]; k],
            avail,
            lost,
        }
    }

    fn run(&mut self, w: &mut Worker) -> Flow {
        let rules = self.p.rules;
        if rules.lost_budget && self.lost > self.p.max_lost {
            return Flow::Continue;
        }
        for t in 0..self.p.k {
            if rules.reachability && !self.connectable(t) {
                return Flow::Continue;
            }
            for v in 0..self.p.n {
                if !self.vertex_ok(t, v) {
                    return Flow::Continue;
                }
            }
        }
        self.step(0, w)
    }

    /// Vertex `v` can still reach its required degree in tree `t`.
    fn vertex_ok(&self, t: usize, v: usize) -> bool {
        let rules = &self.p.rules;
        let (d, a) = (self.deg[t][v], self.avail[t][v]);
        if self.role[v] as usize == t {
            !rules.inner_min_degree || d + a >= 2
        } else {
            !rules.reachability || d + a >= 1
        }
    }

    /// Tree `t` plus every open edge that may still join it is connected.
    fn connectable(&self, t: usize) -> bool {
        let n = self.p.n;
        let mut scratch = TrailDsu::new(n);
        let mut comps = n;
        for v in 0..n {
            let r = self.dsu[t].find(v);
            if r != v && scratch.union(v, r) {
                comps -= 1;
            }
        }
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if self.assign[i] == UNSET && self.cands[i].contains(&(t as u8)) && scratch.union(a, b) {
                comps -= 1;
                if comps == 1 {
                    return true;
                }
            }
        }
        comps == 1
    }

    fn step(&mut self, i: usize, w: &mut Worker) -> Flow {
        if !w.tick() {
            return Flow::Stop;
        }
        if i == self.edges.len() {
            return self.leaf();
        }
        let (a, b) = self.edges[i];
        let cands = self.cands[i].clone();
        let rules = self.p.rules;
        for &c in &cands {
            // take the edge out of every candidate tree's pool
            for &t in cands.iter().filter(|&&t| t != LOST) {
                self.avail[t as usize][a] -= 1;
                self.avail[t as usize][b] -= 1;
            }
            self.assign[i] = c;
            let mut applied = false;
            let ok = if c == LOST {
                self.lost += 1;
                !rules.lost_budget || self.lost <= self.p.max_lost
            } else {
                let t = c as usize;
                let fits = |x: usize| -> bool {
                    if self.role[x] as usize == t {
                        !rules.degree_cap || self.deg[t][x] < self.p.cap[x]
                    } else {
                        !rules.role_consistency || self.deg[t][x] == 0
                    }
                };
                if fits(a) && fits(b) {
                    let joined = self.dsu[t].union(a, b);
                    applied = true;
                    self.deg[t][a] += 1;
                    self.deg[t][b] += 1;
                    joined || !rules.acyclicity
                } else {
                    false
                }
            };
            let feasible = ok
                && cands.iter().filter(|&&t| t != LOST && t != c).all(|&t| {
                    let t = t as usize;
                    self.vertex_ok(t, a) && self.vertex_ok(t, b) && (!rules.reachability || self.connectable(t))
                });
            if feasible {
                match self.step(i + 1, w) {
                    Flow::Continue => {}
                    other => {
                        self.undo(i, c, applied);
                        return other;
                    }
                }
            }
            self.undo(i, c, applied);
        }
        Flow::Continue
    }

    fn undo(&mut self, i: usize, c: u8, applied: bool) {
        let (a, b) = self.edges[i];
        if c == LOST {
            self.lost -= 1;
        } else if applied {
            let t = c as usize;
            self.dsu[t].undo();
            self.deg[t][a] -= 1;
            self.deg[t][b] -= 1;
        }
        for &t in self.cands[i].iter().filter(|&&t| t != LOST) {
            self.avail[t as usize][a] += 1;
            self.avail[t as usize][b] += 1;
        }
        self.assign[i] = UNSET;
    }

    fn leaf(&self) -> Flow {
        let k = self.p.k;
        let mut trees = vec![Vec::new(); k];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if self.assign[i] != LOST {
                trees[self.assign[i] as usize].push(Edge::new(a, b));
            }
        }
        if trees.iter().any(|t| t.len() != self.p.n - 1) {
            return Flow::Continue;
        }
        let Ok(ts) = TreeSet::new(self.p.host.clone(), trees.clone()) else {
            return Flow::Continue;
        };
        let valid = verify_characterization(self.p.g, &ts).map(|v| v.valid).unwrap_or(false)
            && verify_direct(self.p.g, &ts).map(|v| v.valid).unwrap_or(false);
        if valid {
            Flow::Found(trees)
        } else {
            Flow::Continue
        }
    }
}

/// Searches for `k >= 2` CISTs in `g`.
pub fn search_cists(g: &Graph, k: usize, cfg: &SearchConfig) -> Result<SearchOutcome> {
    if k < 2 {
        return Err(CistError::InvalidParameter("search needs k >= 2".into()));
    }
    if k >= UNSET as usize - 1 {
        return Err(CistError::InvalidParameter(format!("k = {k} too large")));
    }
    if cfg.budget_ms == 0 {
        return Err(CistError::InvalidParameter("budget must be positive".into()));
    }
    if let Some(reason) = precheck(g, k) {
        return Ok(SearchOutcome {
            status: SearchStatus::ExhaustedNone,
            witness: None,
            nodes_explored: 0,
            reason: Some(reason),
        });
    }
    let host = Arc::new(g.clone());
    if g.order() == 1 {
        let ts = TreeSet::new(host, vec![Vec::new(); k])?;
        return Ok(SearchOutcome {
            status: SearchStatus::Found,
            witness: Some(ts),
            nodes_explored: 0,
            reason: None,
        });
    }

    let n = g.order();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..n).collect();
    if cfg.seed != 0 {
        order.shuffle(&mut rng);
    }
    // stable: ties keep the (possibly shuffled) base order
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let role_order: Vec<Vec<u8>> = (0..n)
        .map(|_| {
            let mut trees: Vec<u8> = (0..k as u8).collect();
            if cfg.seed != 0 {
                trees.shuffle(&mut rng);
            }
            trees.push(k as u8);
            trees
        })
        .collect();
    let cap = (0..n)
        .map(|v| cfg.max_tree_degree.unwrap_or((g.degree(v) + 1).saturating_sub(k)))
        .collect();
    let stop = AtomicBool::new(false);
    let problem = Problem {
        g,
        host: host.clone(),
        k,
        n,
        order,
        role_order,
        cap,
        max_lost: g.edge_count() - k * (n - 1),
        rules: cfg.rules,
        rng_seed: cfg.seed,
        deadline: Instant::now() + Duration::from_millis(cfg.budget_ms),
        stop: &stop,
    };

    let (flow, nodes) = if cfg.workers <= 1 {
        let mut w = Worker::new(&problem);
        let flow = w.roles(0, None, &mut Vec::new());
        (flow, w.nodes)
    } else {
        run_parallel(&problem, cfg.workers)
    };

    let outcome = |status, witness| SearchOutcome {
        status,
        witness,
        nodes_explored: nodes,
        reason: None,
    };
    Ok(match flow {
        Flow::Found(trees) => outcome(SearchStatus::Found, Some(TreeSet::new(host, trees)?)),
        Flow::Stop => outcome(SearchStatus::BudgetExceeded, None),
        Flow::Continue => outcome(SearchStatus::ExhaustedNone, None),
    })
}

fn run_parallel(p: &Problem, workers: usize) -> (Flow, u64) {
    // split on role prefixes deep enough to feed every worker
    let mut prefixes = Vec::new();
    let mut prefix_nodes = 0;
    let mut depth = 1;
    let mut pre_flow = Flow::Continue;
    while depth <= p.n {
        prefixes.clear();
        let mut w = Worker::new(p);
        pre_flow = w.roles(0, Some(depth), &mut prefixes);
        prefix_nodes += w.nodes;
        if !matches!(pre_flow, Flow::Continue) || prefixes.len() >= 4 * workers || depth == p.n {
            break;
        }
        depth += 1;
    }
    if let Flow::Stop = pre_flow {
        return (Flow::Stop, prefix_nodes);
    }
    let next = AtomicUsize::new(0);
    let found: Mutex<Option<Vec<Vec<Edge>>>> = Mutex::new(None);
    let nodes = AtomicUsize::new(0);
    let budget = AtomicBool::new(false);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| {
                let mut w = Worker::new(p);
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= prefixes.len() || p.stop.load(Ordering::Relaxed) {
                        break;
                    }
                    for (v, &r) in prefixes[i].iter().enumerate() {
                        if r != UNSET {
                            w.set_role(v, r);
                        }
                    }
                    let flow = w.roles(depth, None, &mut Vec::new());
                    for v in 0..p.n {
                        if w.role[v] != UNSET {
                            w.clear_role(v);
                        }
                    }
                    match flow {
                        Flow::Found(t) => {
                            found.lock().unwrap().get_or_insert(t);
                            p.stop.store(true, Ordering::Relaxed);
                            break;
                        }
                        Flow::Stop => break,
                        Flow::Continue => {}
                    }
                }
                if w.budget_hit {
                    budget.store(true, Ordering::Relaxed);
                    p.stop.store(true, Ordering::Relaxed);
                }
                nodes.fetch_add(w.nodes as usize, Ordering::Relaxed);
            });
        }
    });
    let total = prefix_nodes + nodes.load(Ordering::Relaxed) as u64;
    if let Some(t) = found.into_inner().unwrap() {
        return (Flow::Found(t), total);
    }
    if budget.load(Ordering::Relaxed) {
        return (Flow::Stop, total);
    }
    (Flow::Continue, total)
}
