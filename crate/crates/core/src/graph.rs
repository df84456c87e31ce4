//! Simple undirected graphs with product-coordinate labels.
//!
//! Every graph built here is immutable. Vertices are flat indices; a product
//! graph `G □ H` maps `(x, y)` to `x + |G|·y`, so the first factor varies
//! fastest. For `K_m □ C_n` this is `u_i^j -> i + m·j`, for the toroidal grid
//! `(i, j, k) -> i + n1·j + n1·n2·k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CistError, Result};

/// Undirected edge stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct Edge(usize, usize);

impl Edge {
    /// Canonical edge between `a` and `b`. Panics on a loop.
    pub fn new(a: usize, b: usize) -> Self {
        Self::try_new(a, b).expect("edge endpoints must differ")
    }

    pub fn try_new(a: usize, b: usize) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge(a, b)),
            std::cmp::Ordering::Greater => Ok(Edge(b, a)),
            std::cmp::Ordering::Equal => Err(CistError::SelfLoop(a)),
        }
    }

    #[inline]
    pub fn u(&self) -> usize {
        self.0
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.1
    }

    /// The endpoint opposite `x`, if `x` is an endpoint.
    pub fn other(&self, x: usize) -> Option<usize> {
        if x == self.0 {
            Some(self.1)
        } else if x == self.1 {
            Some(self.0)
        } else {
            None
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0 == x || self.1 == x
    }
}

impl TryFrom<(usize, usize)> for Edge {
    type Error = CistError;
    fn try_from((a, b): (usize, usize)) -> Result<Self> {
        Edge::try_new(a, b)
    }
}

impl From<Edge> for (usize, usize) {
    fn from(e: Edge) -> Self {
        (e.0, e.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorKind {
    Complete,
    Cycle,
    Path,
    /// Factor of unknown family (graphs loaded from files without metadata).
    Other,
}

impl FactorKind {
    pub fn tag(&self) -> &'static str {
        match self {
            FactorKind::Complete => "K",
            FactorKind::Cycle => "C",
            FactorKind::Path => "P",
            FactorKind::Other => "G",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "K" => Ok(FactorKind::Complete),
            "C" => Ok(FactorKind::Cycle),
            "P" => Ok(FactorKind::Path),
            "G" => Ok(FactorKind::Other),
            other => Err(CistError::Parse(format!("unknown factor tag {other:?}"))),
        }
    }
}

/// One factor of a product graph, serialized as `["K", 5]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(String, usize)", into = "(String, usize)")]
pub struct Factor {
    pub kind: FactorKind,
    pub order: usize,
}

impl Factor {
    pub fn new(kind: FactorKind, order: usize) -> Self {
        Factor { kind, order }
    }
}

impl TryFrom<(String, usize)> for Factor {
    type Error = CistError;
    fn try_from((tag, order): (String, usize)) -> Result<Self> {
        Ok(Factor {
            kind: FactorKind::from_tag(&tag)?,
            order,
        })
    }
}

impl From<Factor> for (String, usize) {
    fn from(f: Factor) -> Self {
        (f.kind.tag().to_string(), f.order)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.tag(), self.order)
    }
}

/// Coordinates of a vertex, one per product factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabel {
    pub coords: Vec<usize>,
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Layout of `K_m □ C_n` or `K_m □ P_n`: `n` K-copies of size `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KCopyLayout {
    pub copy_size: usize,
    pub copies: usize,
}

impl KCopyLayout {
    #[inline]
    pub fn copy_of(&self, v: usize) -> usize {
        v / self.copy_size
    }

    #[inline]
    pub fn vertex(&self, subscript: usize, copy: usize) -> usize {
        subscript % self.copy_size + self.copy_size * (copy % self.copies)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    order: usize,
    adjacency: Vec<Vec<usize>>,
    factors: Vec<Factor>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints. `factors` must multiply to `order` when given.
    pub fn from_edges(
        order: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        factors: Vec<Factor>,
    ) -> Result<Self> {
        if order == 0 {
            return Err(CistError::InvalidOrder {
                what: "graph",
                value: 0,
                reason: "graph must have at least one vertex",
            });
        }
        if !factors.is_empty() {
            let prod: usize = factors.iter().map(|f| f.order).product();
            if prod != order {
                return Err(CistError::Parse(format!(
                    "factor orders multiply to {prod}, graph order is {order}"
                )));
            }
        }
        let mut adjacency = vec![Vec::new(); order];
        let mut edge_count = 0;
        for (a, b) in edges {
            for x in [a, b] {
                if x >= order {
                    return Err(CistError::VertexOutOfRange { vertex: x, order });
                }
            }
            let e = Edge::try_new(a, b)?;
            adjacency[e.u()].push(e.v());
            adjacency[e.v()].push(e.u());
            edge_count += 1;
        }
        for (v, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(w) = nbrs.windows(2).find(|w| w[0] == w[1]) {
                return Err(CistError::DuplicateEdge(Edge::new(v, w[0])));
            }
        }
        Ok(Graph {
            order,
            adjacency,
            factors,
            edge_count,
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.order && b < self.order && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.has_edge(e.u(), e.v())
    }

    /// All edges, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .filter(move |&&v| v > u)
                .map(move |&v| Edge(u, v))
        })
    }

    pub fn edge_vec(&self) -> Vec<Edge> {
        self.edges().collect()
    }

    /// The common degree when every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        self.adjacency.iter().all(|n| n.len() == d).then_some(d)
    }

    /// `r` such that the graph is `2r`-regular.
    pub fn half_regular_degree(&self) -> Option<usize> {
        self.regular_degree().filter(|d| d % 2 == 0).map(|d| d / 2)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.order];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.order
    }

    /// K-copy layout when the graph is `K_m □ C_n` or `K_m □ P_n`.
    pub fn kcopy_layout(&self) -> Option<KCopyLayout> {
        match self.factors.as_slice() {
            [k, c] if k.kind == FactorKind::Complete
                && matches!(c.kind, FactorKind::Cycle | FactorKind::Path) =>
            {
                Some(KCopyLayout {
                    copy_size: k.order,
                    copies: c.order,
                })
            }
            _ => None,
        }
    }

    /// Number of K-copies (the `n` of `K_m □ C_n`), if any.
    pub fn kcopy_count(&self) -> Option<usize> {
        self.kcopy_layout().map(|l| l.copies)
    }

    pub fn vertex_label(&self, v: usize) -> VertexLabel {
        if self.factors.is_empty() {
            return VertexLabel { coords: vec![v] };
        }
        let mut rest = v;
        let coords = self
            .factors
            .iter()
            .map(|f| {
                let c = rest % f.order;
                rest /= f.order;
                c
            })
            .collect();
        VertexLabel { coords }
    }

    pub fn index_of(&self, label: &VertexLabel) -> Result<usize> {
        if self.factors.is_empty() {
            return match label.coords.as_slice() {
                [v] if *v < self.order => Ok(*v),
                _ => Err(CistError::InvalidParameter(format!("bad label {label}"))),
            };
        }
        if label.coords.len() != self.factors.len() {
            return Err(CistError::InvalidParameter(format!(
                "label {label} has {} coordinates, graph has {} factors",
                label.coords.len(),
                self.factors.len()
            )));
        }
        let mut idx = 0;
        let mut stride = 1;
        for (c, f) in label.coords.iter().zip(&self.factors) {
            if *c >= f.order {
                return Err(CistError::InvalidParameter(format!(
                    "coordinate {c} out of range for factor {f}"
                )));
            }
            idx += c * stride;
            stride *= f.order;
        }
        Ok(idx)
    }

    /// Symmetric, loop-free, sorted adjacency. Always true for graphs built
    /// through this module; exposed for tests and loaded files.
    pub fn audit(&self) -> bool {
        self.adjacency.iter().enumerate().all(|(v, nbrs)| {
            nbrs.windows(2).all(|w| w[0] < w[1])
                && nbrs
                    .iter()
                    .all(|&w| w != v && w < self.order && self.adjacency[w].binary_search(&v).is_ok())
        })
    }
}

pub fn build_complete(m: usize) -> Result<Graph> {
    if m == 0 {
        return Err(CistError::InvalidOrder {
            what: "complete graph",
            value: m,
            reason: "order must be at least 1",
        });
    }
    let edges = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b)));
    Graph::from_edges(m, edges, vec![Factor::new(FactorKind::Complete, m)])
}

pub fn build_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(CistError::InvalidOrder {
            what: "cycle",
            value: n,
            reason: "a simple cycle needs at least 3 vertices",
        });
    }
    let edges = (0..n).map(|i| (i, (i + 1) % n));
    Graph::from_edges(n, edges, vec![Factor::new(FactorKind::Cycle, n)])
}

pub fn build_path(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(CistError::InvalidOrder {
            what: "path",
            value: n,
            reason: "a path needs at least 2 vertices",
        });
    }
    let edges = (0..n - 1).map(|i| (i, i + 1));
    Graph::from_edges(n, edges, vec![Factor::new(FactorKind::Path, n)])
}

/// `g □ h`, with `(x, y) -> x + |g|·y`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    let (a, b) = (g.order(), h.order());
    let mut edges = Vec::with_capacity(g.edge_count() * b + h.edge_count() * a);
    for y in 0..b {
        for e in g.edges() {
            edges.push((e.u() + a * y, e.v() + a * y));
        }
    }
    for x in 0..a {
        for e in h.edges() {
            edges.push((x + a * e.u(), x + a * e.v()));
        }
    }
    let factors = if g.factors.is_empty() || h.factors.is_empty() {
        Vec::new()
    } else {
        g.factors.iter().chain(&h.factors).copied().collect()
    };
    Graph::from_edges(a * b, edges, factors).expect("product of simple graphs is simple")
}

/// `K_m □ C_n`, `u_i^j -> i + m·j`.
pub fn km_cn(m: usize, n: usize) -> Result<Graph> {
    if m < 3 {
        return Err(CistError::InvalidOrder {
            what: "complete factor",
            value: m,
            reason: "K_m □ C_n needs m >= 3",
        });
    }
    Ok(cartesian_product(&build_complete(m)?, &build_cycle(n)?))
}

/// `K_m □ P_n`, `u_i^j -> i + m·j`.
pub fn km_pn(m: usize, n: usize) -> Result<Graph> {
    if m < 3 {
        return Err(CistError::InvalidOrder {
            what: "complete factor",
            value: m,
            reason: "K_m □ P_n needs m >= 3",
        });
    }
    Ok(cartesian_product(&build_complete(m)?, &build_path(n)?))
}

/// `TM(n1, n2, n3) = C_n1 □ C_n2 □ C_n3`. The orders are sorted so that
/// `n1 <= n2 <= n3`.
pub fn toroidal_grid(n1: usize, n2: usize, n3: usize) -> Result<Graph> {
    let mut ns = [n1, n2, n3];
    ns.sort_unstable();
    if ns[0] < 3 {
        return Err(CistError::InvalidOrder {
            what: "toroidal grid",
            value: ns[0],
            reason: "every cycle factor needs at least 3 vertices",
        });
    }
    let c1 = build_cycle(ns[0])?;
    let c2 = build_cycle(ns[1])?;
    let c3 = build_cycle(ns[2])?;
    Ok(cartesian_product(&cartesian_product(&c1, &c2), &c3))
}

/// Flat index of `(i, j, k)` in `TM(n1, n2, n3)`, coordinates taken modulo
/// the factor orders.
pub fn torus_index(dims: [usize; 3], i: i64, j: i64, k: i64) -> usize {
    let m = |x: i64, n: usize| x.rem_euclid(n as i64) as usize;
    m(i, dims[0]) + dims[0] * m(j, dims[1]) + dims[0] * dims[1] * m(k, dims[2])
}
