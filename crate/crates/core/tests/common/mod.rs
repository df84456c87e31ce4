//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's verifiers.

#![allow(dead_code)]

use std::collections::VecDeque;

use cist_core::graph::Graph;

pub type Pair = (usize, usize);

/// BFS path between `u` and `v` in the tree given by `edges`.
pub fn bfs_path(order: usize, edges: &[Pair], u: usize, v: usize) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); order];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut prev = vec![usize::MAX; order];
    prev[u] = u;
    let mut q = VecDeque::from([u]);
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                q.push_back(y);
            }
        }
    }
    if prev[v] == usize::MAX {
        return None;
    }
    let mut path = vec![v];
    let mut x = v;
    while x != u {
        x = prev[x];
        path.push(x);
    }
    path.reverse();
    Some(path)
}

pub fn is_spanning_tree(order: usize, edges: &[Pair]) -> bool {
    if edges.len() + 1 != order {
        return false;
    }
    (1..order).all(|v| bfs_path(order, edges, 0, v).is_some())
}

/// Pairwise edge-disjoint spanning trees whose u-v paths share no internal
/// vertex, checked straight from the definition.
pub fn is_cist_family(order: usize, trees: &[Vec<Pair>]) -> bool {
    let norm = |&(a, b): &Pair| if a < b { (a, b) } else { (b, a) };
    if !trees.iter().all(|t| is_spanning_tree(order, t)) {
        return false;
    }
    for i in 0..trees.len() {
        for j in i + 1..trees.len() {
            if trees[i].iter().any(|e| trees[j].iter().any(|f| norm(e) == norm(f))) {
                return false;
            }
            for u in 0..order {
                for v in u + 1..order {
                    let p = bfs_path(order, &trees[i], u, v).unwrap();
                    let q = bfs_path(order, &trees[j], u, v).unwrap();
                    let inner_p = &p[1..p.len() - 1];
                    if q[1..q.len() - 1].iter().any(|x| inner_p.contains(x)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// All spanning trees of `g` by subset enumeration.
pub fn spanning_trees(g: &Graph) -> Vec<Vec<Pair>> {
    let edges: Vec<Pair> = g.edges().map(|e| (e.u(), e.v())).collect();
    let n = g.order();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(edges: &[Pair], start: usize, n: usize, cur: &mut Vec<Pair>, out: &mut Vec<Vec<Pair>>) {
        if cur.len() + 1 == n {
            if is_spanning_tree(n, cur) {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..edges.len() {
            cur.push(edges[i]);
            go(edges, i + 1, n, cur, out);
            cur.pop();
        }
    }
    if n >= 1 {
        go(&edges, 0, n, &mut cur, &mut out);
    }
    out
}

/// Whether `g` has `k` CISTs, by enumerating increasing k-tuples of
/// spanning trees.
pub fn brute_force_has_cists(g: &Graph, k: usize) -> bool {
    let trees = spanning_trees(g);
    let n = g.order();
    let mut chosen: Vec<Vec<Pair>> = Vec::new();
    fn go(trees: &[Vec<Pair>], start: usize, k: usize, n: usize, chosen: &mut Vec<Vec<Pair>>) -> bool {
        if chosen.len() == k {
            return true;
        }
        for i in start..trees.len() {
            chosen.push(trees[i].clone());
            if is_cist_family(n, chosen) && go(trees, i + 1, k, n, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    go(&trees, 0, k, n, &mut chosen)
}

/// Small deterministic generator so the oracle tests need no RNG crate.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

/// Random graph on `n` vertices keeping each pair with probability `p_num/p_den`.
pub fn random_graph(rng: &mut SplitMix, n: usize, p_num: usize, p_den: usize) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.below(p_den) < p_num {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges, vec![]).unwrap()
}
