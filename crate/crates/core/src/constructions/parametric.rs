//! Formula- and pattern-based constructions.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::appendix::Dataset;
use crate::error::{CistError, Result};
use crate::graph::{km_cn, km_pn, toroidal_grid, torus_index, Edge, Graph};
use crate::verify::{verify_characterization, TreeSet};

/// Edge-count check, then the degree characterization as a guard.
pub(crate) fn finish(host: Arc<Graph>, trees: Vec<BTreeSet<Edge>>, what: &str) -> Result<TreeSet> {
    let ts = TreeSet::new(host.clone(), trees.into_iter().map(|t| t.into_iter().collect()).collect())?;
    ts.check_edge_counts()?;
    let v = verify_characterization(&host, &ts)?;
    if !v.valid {
        return Err(CistError::ConstructionInvalid(format!("{what}: {v}")));
    }
    Ok(ts)
}

fn k2r_trees(r: usize, n: usize) -> Vec<BTreeSet<Edge>> {
    let m = 2 * r;
    let u = |a: usize, j: usize| a % m + m * j;
    (1..=r)
        .map(|i| {
            let mut t = BTreeSet::new();
            for j in 0..n - 1 {
                t.insert(Edge::new(u(i - 1, j), u(i - 1, j + 1)));
                t.insert(Edge::new(u(r + i - 1, j), u(r + i - 1, j + 1)));
            }
            t.insert(Edge::new(u(i - 1, 0), u(r + i - 1, 0)));
            for k in 0..r - 1 {
                for j in 0..n {
                    t.insert(Edge::new(u(i - 1, j), u(i + k, j)));
                    t.insert(Edge::new(u(r + i - 1, j), u(r + i + k, j)));
                }
            }
            t
        })
        .collect()
}

fn check_r(r: usize) -> Result<()> {
    if r < 2 {
        return Err(CistError::InvalidOrder {
            what: "r",
            value: r,
            reason: "need r >= 2",
        });
    }
    Ok(())
}

/// `r` trees on `K_2r □ P_n`: two spines per tree, one rung in copy 0, and
/// fans of `r - 1` edges from each spine vertex inside every copy.
pub fn construct_k2r_pn(r: usize, n: usize) -> Result<TreeSet> {
    check_r(r)?;
    let host = Arc::new(km_pn(2 * r, n)?);
    finish(host, k2r_trees(r, n), "K2R_PN")
}

/// The same trees re-hosted on `K_2r □ C_n`.
pub fn construct_k2r_cn(r: usize, n: usize) -> Result<TreeSet> {
    check_r(r)?;
    let host = Arc::new(km_cn(2 * r, n)?);
    finish(host, k2r_trees(r, n), "K2R_CN")
}

/// Three-copy pattern for `K_5 □ C_n`: entries are
/// `(copy offset, subscript, copy offset, subscript)`.
const K5_PATTERN: [[(usize, usize, usize, usize); 15]; 3] = [
    [
        (0, 0, 1, 0), (1, 0, 2, 0), (2, 0, 3, 0), (0, 0, 0, 2), (0, 0, 0, 3),
        (0, 3, 0, 1), (0, 3, 0, 4), (0, 3, 1, 3), (1, 0, 1, 1), (1, 0, 1, 4),
        (1, 2, 2, 2), (2, 0, 2, 2), (2, 0, 2, 1), (2, 2, 2, 3), (2, 2, 2, 4),
    ],
    [
        (0, 1, 1, 1), (1, 1, 2, 1), (2, 1, 3, 1), (0, 1, 0, 0), (0, 1, 0, 4),
        (0, 2, 1, 2), (1, 1, 1, 2), (1, 1, 1, 4), (1, 2, 1, 0), (1, 2, 1, 3),
        (2, 1, 2, 3), (2, 1, 2, 2), (2, 3, 2, 0), (2, 3, 2, 4), (2, 3, 3, 3),
    ],
    [
        (0, 4, 1, 4), (1, 4, 2, 4), (2, 4, 3, 4), (0, 2, 0, 4), (0, 2, 0, 1),
        (0, 2, 0, 3), (0, 4, 0, 0), (1, 3, 1, 4), (1, 3, 1, 0), (1, 3, 1, 1),
        (1, 4, 1, 2), (1, 3, 2, 3), (2, 4, 2, 0), (2, 4, 2, 1), (2, 2, 3, 2),
    ],
];

/// Edge dropped from each tree when the pattern closes on itself.
const K5_CLOSING: [(usize, usize); 3] = [(0, 5), (1, 6), (4, 9)];

fn k5_blocks(n: usize, start: usize, blocks: usize) -> Vec<BTreeSet<Edge>> {
    let u = |i: usize, j: usize| i + 5 * (j % n);
    K5_PATTERN
        .iter()
        .map(|pat| {
            let mut t = BTreeSet::new();
            for b in 0..blocks {
                let off = start + 3 * b;
                for &(a, i, c, l) in pat {
                    t.insert(Edge::new(u(i, a + off), u(l, c + off)));
                }
            }
            t
        })
        .collect()
}

/// Three trees on `K_5 □ C_n` for `3 | n`, the pattern repeated `n/3` times.
pub fn construct_k5_c3k(n: usize) -> Result<TreeSet> {
    if n < 3 || !n.is_multiple_of(3) {
        return Err(CistError::InvalidParameter(format!(
            "K5_C3K needs n >= 3 divisible by 3, got {n}"
        )));
    }
    let host = Arc::new(km_cn(5, n)?);
    let mut trees = k5_blocks(n, 0, n / 3);
    for (t, &(a, b)) in trees.iter_mut().zip(&K5_CLOSING) {
        if !t.remove(&Edge::new(a, b)) {
            return Err(CistError::ConstructionInvalid(format!("closing edge {a}-{b} missing")));
        }
    }
    finish(host, trees, "K5_C3K")
}

/// Three trees on `K_5 □ C_n` for every `n >= 3`: the pattern alone when
/// `3 | n`, otherwise the embedded four- or five-copy tail on the lowest
/// copies followed by pattern blocks.
pub fn construct_k5_cn(n: usize) -> Result<TreeSet> {
    if n < 3 {
        return Err(CistError::InvalidOrder {
            what: "cycle",
            value: n,
            reason: "need n >= 3",
        });
    }
    if n.is_multiple_of(3) {
        return construct_k5_c3k(n);
    }
    let (name, tail_len) = if n % 3 == 1 { ("K5_C4", 4) } else { ("K5_C5", 5) };
    let host = Arc::new(km_cn(5, n)?);
    let tail = Dataset::embedded(name)?.repaired()?.resolve(n);
    let pattern = k5_blocks(n, tail_len, (n - tail_len) / 3);
    let trees = tail
        .into_iter()
        .zip(pattern)
        .map(|(a, mut b)| {
            b.extend(a);
            b
        })
        .collect();
    finish(host, trees, "K5_CN")
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

type P3 = [i64; 3];

fn add(a: P3, d: P3) -> P3 {
    [a[0] + d[0], a[1] + d[1], a[2] + d[2]]
}

/// The nine edges contributed by tree `j` at phase `i`.
fn torus_pattern(j: i64, i: i64) -> [(P3, P3); 9] {
    let a = [i + j, j - i, i];
    let b = add(a, [1, 0, 0]);
    let c = add(a, [0, 1, 0]);
    [
        (a, b),
        (a, c),
        (a, add(a, [0, 0, 1])),
        (a, add(a, [0, -1, 0])),
        (b, add(a, [2, 0, 0])),
        (b, add(b, [0, 0, 1])),
        (b, [1 + i + j, j - i - 1, i]),
        (c, add(c, [1, 0, 0])),
        (c, add(c, [0, 0, 1])),
    ]
}

/// Maps pattern coordinates on `TM(d0, d1, d2)` to the sorted-factor host.
struct TorusFrame {
    perm: [usize; 3],
    dims: [usize; 3],
}

impl TorusFrame {
    fn new(raw: [usize; 3]) -> Self {
        let mut perm = [0, 1, 2];
        perm.sort_by_key(|&a| raw[a]);
        TorusFrame {
            perm,
            dims: [raw[perm[0]], raw[perm[1]], raw[perm[2]]],
        }
    }

    fn index(&self, p: P3) -> usize {
        torus_index(self.dims, p[self.perm[0]], p[self.perm[1]], p[self.perm[2]])
    }

    fn edge(&self, a: P3, b: P3) -> Edge {
        Edge::new(self.index(a), self.index(b))
    }
}

/// Three trees on `TM(3p, 3p', 3q)`, `gcd(p, p', q) = 1`.
///
/// Tree `j` is the orbit of nine edges under the phase `i` running over
/// `0..3pp'q`, minus the edge closing the orbit. When the three cycle
/// lengths do not have `lcm = 3pp'q` the orbit revisits edges and the
/// per-tree count check rejects the input.
pub fn construct_tm(p: usize, pp: usize, q: usize) -> Result<TreeSet> {
    if p == 0 || pp == 0 || q == 0 {
        return Err(CistError::InvalidParameter("p, p', q must be >= 1".into()));
    }
    if gcd(gcd(p, pp), q) != 1 {
        return Err(CistError::InvalidParameter(format!(
            "gcd({p}, {pp}, {q}) = {} != 1",
            gcd(gcd(p, pp), q)
        )));
    }
    let frame = TorusFrame::new([3 * p, 3 * pp, 3 * q]);
    let host = Arc::new(toroidal_grid(3 * p, 3 * pp, 3 * q)?);
    let phases = (3 * p * pp * q) as i64;
    let mut trees = Vec::with_capacity(3);
    for j in 0..3 {
        let mut t = BTreeSet::new();
        for i in 0..phases {
            for (a, b) in torus_pattern(j, i) {
                t.insert(frame.edge(a, b));
            }
        }
        let closing = frame.edge([j, j + 1, 0], [j, j + 1, -1]);
        if !t.remove(&closing) {
            return Err(CistError::ConstructionInvalid(format!("closing edge {closing} missing")));
        }
        trees.push(t);
    }
    finish(host, trees, "TM_3P3P3Q")
}

/// Three trees on `TM(3, 3, q)`, `q >= 3`. For `3 ∤ q` the embedded four-
/// or five-level tail occupies the lowest levels and the torus pattern
/// fills the rest, phase 0 at the first pattern level.
pub fn construct_tm33(q: usize) -> Result<TreeSet> {
    if q < 3 {
        return Err(CistError::InvalidOrder {
            what: "toroidal grid",
            value: q,
            reason: "need q >= 3",
        });
    }
    if q.is_multiple_of(3) {
        return construct_tm(1, 1, q / 3);
    }
    let (name, tail_len) = if q % 3 == 1 { ("TM_334", 4) } else { ("TM_335", 5) };
    let frame = TorusFrame::new([3, 3, q]);
    let host = Arc::new(toroidal_grid(3, 3, q)?);
    let tail = Dataset::embedded(name)?.repaired()?.resolve(q);
    let trees = tail
        .into_iter()
        .enumerate()
        .map(|(j, edges)| {
            let mut t: BTreeSet<Edge> = edges.into_iter().collect();
            for level in tail_len..q {
                let i = (level - tail_len) as i64;
                let lift = |p: P3| [p[0], p[1], p[2] - i + level as i64];
                for (a, b) in torus_pattern(j as i64, i) {
                    t.insert(frame.edge(lift(a), lift(b)));
                }
            }
            t
        })
        .collect();
    finish(host, trees, "TM_33Q")
}
