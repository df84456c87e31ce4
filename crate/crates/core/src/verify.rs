//! Tree sets and the two CIST verifiers.
//!
//! `verify_direct` checks the definition literally: spanning, pairwise
//! edge-disjoint, and for every vertex pair the tree paths share nothing but
//! their endpoints. `verify_characterization` replaces the path scan with the
//! degree test "every vertex is inner in at most one tree". The two must
//! always agree; tests lean on that heavily.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{CistError, Result};
use crate::graph::{Edge, Graph};

/// `k` edge sets over the vertex set of one host graph. Tree indices are
/// 0-based throughout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeSet {
    host: Arc<Graph>,
    trees: Vec<Vec<Edge>>,
}

impl TreeSet {
    /// Validates that every edge exists in `host` and no tree repeats an
    /// edge; stores each tree sorted.
    pub fn new(host: Arc<Graph>, trees: Vec<Vec<Edge>>) -> Result<Self> {
        if trees.is_empty() {
            return Err(CistError::EmptyTreeSet);
        }
        let mut trees = trees;
        for t in trees.iter_mut() {
            if let Some(&e) = t.iter().find(|e| !host.contains_edge(**e)) {
                return Err(CistError::EdgeNotInHost(e));
            }
            t.sort_unstable();
            if let Some(w) = t.windows(2).find(|w| w[0] == w[1]) {
                return Err(CistError::DuplicateEdge(w[0]));
            }
        }
        Ok(TreeSet { host, trees })
    }

    /// Same as [`TreeSet::new`] from raw endpoint pairs.
    pub fn from_pairs(host: Arc<Graph>, trees: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        let order = host.order();
        let trees = trees
            .into_iter()
            .map(|t| {
                t.into_iter()
                    .map(|(a, b)| {
                        for x in [a, b] {
                            if x >= order {
                                return Err(CistError::VertexOutOfRange { vertex: x, order });
                            }
                        }
                        Edge::try_new(a, b)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        TreeSet::new(host, trees)
    }

    pub fn host(&self) -> &Arc<Graph> {
        &self.host
    }

    pub fn k(&self) -> usize {
        self.trees.len()
    }

    pub fn order(&self) -> usize {
        self.host.order()
    }

    pub fn trees(&self) -> &[Vec<Edge>] {
        &self.trees
    }

    pub fn tree(&self, i: usize) -> &[Edge] {
        &self.trees[i]
    }

    pub fn degrees(&self, i: usize) -> Vec<usize> {
        tree_degrees(self.order(), &self.trees[i])
    }

    pub fn inner_vertices(&self, i: usize) -> Vec<usize> {
        inner_of(&self.degrees(i))
    }

    /// The same trees with every edge set replaced. Used by mutation tests.
    pub fn with_trees(&self, trees: Vec<Vec<Edge>>) -> Result<Self> {
        TreeSet::new(self.host.clone(), trees)
    }

    /// Per-tree edge count equals `|V| - 1`.
    pub fn check_edge_counts(&self) -> Result<()> {
        let expected = self.order() - 1;
        for (i, t) in self.trees.iter().enumerate() {
            if t.len() != expected {
                return Err(CistError::EdgeCountMismatch {
                    tree: i,
                    found: t.len(),
                    expected,
                });
            }
        }
        Ok(())
    }
}

pub fn tree_degrees(order: usize, edges: &[Edge]) -> Vec<usize> {
    let mut deg = vec![0; order];
    for e in edges {
        deg[e.u()] += 1;
        deg[e.v()] += 1;
    }
    deg
}

fn inner_of(deg: &[usize]) -> Vec<usize> {
    deg.iter()
        .enumerate()
        .filter(|(_, &d)| d >= 2)
        .map(|(v, _)| v)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "defect", rename_all = "kebab-case")]
pub enum SpanningDefect {
    EdgeCount { found: usize, expected: usize },
    Cycle { edge: Edge },
    Disconnected { components: usize },
}

impl fmt::Display for SpanningDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpanningDefect::EdgeCount { found, expected } => {
                write!(f, "{found} edges, expected {expected}")
            }
            SpanningDefect::Cycle { edge } => write!(f, "edge {edge} closes a cycle"),
            SpanningDefect::Disconnected { components } => {
                write!(f, "{components} components")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Failure {
    NotSpanningTree {
        tree: usize,
        defect: SpanningDefect,
    },
    SharedEdge {
        edge: Edge,
        tree_i: usize,
        tree_j: usize,
    },
    SharedInnerVertex {
        vertex: usize,
        pair: (usize, usize),
        tree_i: usize,
        tree_j: usize,
    },
    VertexInnerInTwoTrees {
        vertex: usize,
        tree_i: usize,
        tree_j: usize,
    },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::NotSpanningTree { tree, defect } => {
                write!(f, "tree {tree} is not a spanning tree: {defect}")
            }
            Failure::SharedEdge { edge, tree_i, tree_j } => {
                write!(f, "edge {edge} used by trees {tree_i} and {tree_j}")
            }
            Failure::SharedInnerVertex {
                vertex,
                pair,
                tree_i,
                tree_j,
            } => write!(
                f,
                "paths between {} and {} in trees {tree_i} and {tree_j} share vertex {vertex}",
                pair.0, pair.1
            ),
            Failure::VertexInnerInTwoTrees {
                vertex,
                tree_i,
                tree_j,
            } => write!(f, "vertex {vertex} is inner in trees {tree_i} and {tree_j}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub failure: Option<Failure>,
}

impl Verdict {
    fn ok() -> Self {
        Verdict {
            valid: true,
            failure: None,
        }
    }

    fn fail(f: Failure) -> Self {
        Verdict {
            valid: false,
            failure: Some(f),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "valid"),
            Some(fail) => write!(f, "invalid: {fail}"),
        }
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

fn spanning_defect(order: usize, t: &[Edge]) -> Option<SpanningDefect> {
    let expected = order - 1;
    let mut dsu = Dsu::new(order);
    let mut components = order;
    for &e in t {
        if !dsu.union(e.u(), e.v()) {
            return Some(SpanningDefect::Cycle { edge: e });
        }
        components -= 1;
    }
    if t.len() != expected {
        return Some(if components > 1 && t.len() < expected {
            SpanningDefect::Disconnected { components }
        } else {
            SpanningDefect::EdgeCount {
                found: t.len(),
                expected,
            }
        });
    }
    None
}

/// True iff `t` has `|V| - 1` edges and connects every vertex without a cycle.
pub fn is_spanning_tree(g: &Graph, t: &[Edge]) -> Result<bool> {
    if let Some(&e) = t.iter().find(|e| !g.contains_edge(**e)) {
        return Err(CistError::EdgeNotInHost(e));
    }
    Ok(spanning_defect(g.order(), t).is_none())
}

/// A spanning tree rooted at vertex 0, for path queries.
#[derive(Clone, Debug)]
pub struct RootedTree {
    parent: Vec<usize>,
    depth: Vec<usize>,
}

impl RootedTree {
    /// Fails if `edges` is not a spanning tree on `order` vertices.
    pub fn new(order: usize, edges: &[Edge]) -> Result<Self> {
        if order == 0 || spanning_defect(order, edges).is_some() {
            return Err(CistError::InvalidParameter(
                "edge set is not a spanning tree".into(),
            ));
        }
        let mut adj = vec![Vec::new(); order];
        for e in edges {
            adj[e.u()].push(e.v());
            adj[e.v()].push(e.u());
        }
        let mut parent = vec![usize::MAX; order];
        let mut depth = vec![0; order];
        parent[0] = 0;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    depth[w] = depth[v] + 1;
                    stack.push(w);
                }
            }
        }
        Ok(RootedTree { parent, depth })
    }

    pub fn order(&self) -> usize {
        self.parent.len()
    }

    /// Vertices of the unique `u`-`v` path, endpoints included.
    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        let (mut a, mut b) = (u, v);
        let mut front = Vec::new();
        let mut back = Vec::new();
        while self.depth[a] > self.depth[b] {
            front.push(a);
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            back.push(b);
            b = self.parent[b];
        }
        while a != b {
            front.push(a);
            back.push(b);
            a = self.parent[a];
            b = self.parent[b];
        }
        front.push(a);
        front.extend(back.into_iter().rev());
        front
    }

    /// Calls `f` on each internal vertex of the `u`-`v` path.
    fn for_each_internal(&self, u: usize, v: usize, mut f: impl FnMut(usize)) {
        let (mut a, mut b) = (u, v);
        while self.depth[a] > self.depth[b] {
            if a != u {
                f(a);
            }
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            if b != v {
                f(b);
            }
            b = self.parent[b];
        }
        while a != b {
            if a != u {
                f(a);
            }
            if b != v {
                f(b);
            }
            a = self.parent[a];
            b = self.parent[b];
        }
        if a != u && a != v {
            f(a);
        }
    }
}

/// `P_T(u, v)` in the tree with edge set `t` over `order` vertices.
pub fn tree_path(order: usize, t: &[Edge], u: usize, v: usize) -> Result<Vec<usize>> {
    for x in [u, v] {
        if x >= order {
            return Err(CistError::VertexOutOfRange { vertex: x, order });
        }
    }
    Ok(RootedTree::new(order, t)?.path(u, v))
}

fn check_host(g: &Graph, ts: &TreeSet) -> Result<()> {
    if std::ptr::eq(g, ts.host().as_ref()) || g == ts.host().as_ref() {
        Ok(())
    } else {
        Err(CistError::HostMismatch(format!(
            "tree set is hosted on a graph of order {}, given graph has order {}",
            ts.order(),
            g.order()
        )))
    }
}

/// Spanning check per tree, then pairwise edge-disjointness.
fn structural_failure(ts: &TreeSet) -> Option<Failure> {
    let order = ts.order();
    for (i, t) in ts.trees().iter().enumerate() {
        if let Some(defect) = spanning_defect(order, t) {
            return Some(Failure::NotSpanningTree { tree: i, defect });
        }
    }
    let k = ts.k();
    for i in 0..k {
        for j in i + 1..k {
            if let Some(edge) = first_common(ts.tree(i), ts.tree(j)) {
                return Some(Failure::SharedEdge {
                    edge,
                    tree_i: i,
                    tree_j: j,
                });
            }
        }
    }
    None
}

fn first_common(a: &[Edge], b: &[Edge]) -> Option<Edge> {
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => return Some(a[x]),
        }
    }
    None
}

/// The definition checked literally. The first failure in scan order is
/// reported: trees in index order, tree pairs lexicographically, then vertex
/// pairs lexicographically; a shared vertex witness is the smallest one.
pub fn verify_direct(g: &Graph, ts: &TreeSet) -> Result<Verdict> {
    check_host(g, ts)?;
    if let Some(f) = structural_failure(ts) {
        return Ok(Verdict::fail(f));
    }
    let order = ts.order();
    let rooted: Vec<RootedTree> = ts
        .trees()
        .iter()
        .map(|t| RootedTree::new(order, t))
        .collect::<Result<_>>()?;
    let mut stamp = vec![0usize; order];
    let mut tick = 0usize;
    let k = ts.k();
    for i in 0..k {
        for j in i + 1..k {
            for u in 0..order {
                for v in u + 1..order {
                    tick += 1;
                    rooted[i].for_each_internal(u, v, |x| stamp[x] = tick);
                    let mut shared = usize::MAX;
                    rooted[j].for_each_internal(u, v, |x| {
                        if stamp[x] == tick {
                            shared = shared.min(x);
                        }
                    });
                    if shared != usize::MAX {
                        return Ok(Verdict::fail(Failure::SharedInnerVertex {
                            vertex: shared,
                            pair: (u, v),
                            tree_i: i,
                            tree_j: j,
                        }));
                    }
                }
            }
        }
    }
    Ok(Verdict::ok())
}

/// Degree-based test: spanning, edge-disjoint, and each vertex inner in at
/// most one tree. A failure names the smallest offending vertex with the
/// first two trees in which it is inner.
pub fn verify_characterization(g: &Graph, ts: &TreeSet) -> Result<Verdict> {
    check_host(g, ts)?;
    if let Some(f) = structural_failure(ts) {
        return Ok(Verdict::fail(f));
    }
    let degs: Vec<Vec<usize>> = (0..ts.k()).map(|i| ts.degrees(i)).collect();
    for v in 0..ts.order() {
        let mut inner_in = degs.iter().enumerate().filter(|(_, d)| d[v] > 1).map(|(i, _)| i);
        if let (Some(i), Some(j)) = (inner_in.next(), inner_in.next()) {
            return Ok(Verdict::fail(Failure::VertexInnerInTwoTrees {
                vertex: v,
                tree_i: i,
                tree_j: j,
            }));
        }
    }
    Ok(Verdict::ok())
}
