//! JSON and edge-list formats for graphs and tree sets.
//!
//! Graph JSON: `{"order": N, "factors": [["K",5],["C",4]], "edges": [[a,b],...]}`
//! with `a < b` and edges sorted. Graph edge list: `p <order>`, optional
//! `f <tag> <order>` factor lines, then one `a b` pair per line.
//!
//! Tree-set JSON: `{"graph": <graph object or file path>, "trees": [[[a,b],...],...]}`.
//! Tree-set edge list: the graph header lines followed by `t <index>`
//! sections of `a b` pairs; the host itself is supplied separately.
//! Lines starting with `c` or `#` are comments in both edge-list formats.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{CistError, Result};
use crate::graph::{Edge, Factor, FactorKind, Graph};
use crate::verify::TreeSet;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    order: usize,
    #[serde(default)]
    factors: Vec<Factor>,
    edges: Vec<(usize, usize)>,
}

fn factors_json(g: &Graph) -> String {
    let parts: Vec<String> = g
        .factors()
        .iter()
        .map(|f| format!("[\"{}\",{}]", f.kind.tag(), f.order))
        .collect();
    format!("[{}]", parts.join(","))
}

fn edges_json(edges: &[Edge], indent: &str) -> String {
    if edges.is_empty() {
        return "[]".into();
    }
    let mut s = String::from("[\n");
    for (i, e) in edges.iter().enumerate() {
        let sep = if i + 1 < edges.len() { "," } else { "" };
        let _ = writeln!(s, "{indent}  [{},{}]{sep}", e.u(), e.v());
    }
    s.push_str(indent);
    s.push(']');
    s
}

fn graph_object(g: &Graph, indent: &str) -> String {
    format!(
        "{{\n{indent}  \"order\": {},\n{indent}  \"factors\": {},\n{indent}  \"edges\": {}\n{indent}}}",
        g.order(),
        factors_json(g),
        edges_json(&g.edge_vec(), &format!("{indent}  "))
    )
}

/// Canonical JSON text of a graph.
pub fn graph_to_json(g: &Graph) -> String {
    let mut s = graph_object(g, "");
    s.push('\n');
    s
}

fn graph_from_value(v: Value) -> Result<Graph> {
    let gj: GraphJson = serde_json::from_value(v)?;
    Graph::from_edges(gj.order, gj.edges, gj.factors)
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    graph_from_value(serde_json::from_str(text)?)
}

fn header_lines(g: &Graph) -> String {
    let mut s = format!("p {}\n", g.order());
    for f in g.factors() {
        let _ = writeln!(s, "f {} {}", f.kind.tag(), f.order);
    }
    s
}

pub fn graph_to_edge_list(g: &Graph) -> String {
    let mut s = header_lines(g);
    for e in g.edges() {
        let _ = writeln!(s, "{} {}", e.u(), e.v());
    }
    s
}

enum Line {
    Order(usize),
    Factor(Factor),
    Tree(usize),
    Pair(usize, usize),
    Skip,
}

fn parse_lines(text: &str) -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let bad = || CistError::Parse(format!("line {}: {line:?}", no + 1));
        let words: Vec<&str> = line.split_whitespace().collect();
        let num = |i: usize| -> Result<usize> { words.get(i).and_then(|w| w.parse().ok()).ok_or_else(bad) };
        let parsed = match words.first() {
            None => Line::Skip,
            Some(w) if w.starts_with('#') || *w == "c" => Line::Skip,
            Some(&"p") if words.len() == 2 => Line::Order(num(1)?),
            Some(&"f") if words.len() == 3 => Line::Factor(Factor::new(FactorKind::from_tag(words[1])?, num(2)?)),
            Some(&"t") if words.len() == 2 => Line::Tree(num(1)?),
            Some(_) if words.len() == 2 => Line::Pair(num(0)?, num(1)?),
            _ => return Err(bad()),
        };
        out.push(parsed);
    }
    Ok(out)
}

pub fn graph_from_edge_list(text: &str) -> Result<Graph> {
    let mut order = None;
    let mut factors = Vec::new();
    let mut edges = Vec::new();
    for line in parse_lines(text)? {
        match line {
            Line::Order(n) if order.is_none() => order = Some(n),
            Line::Order(_) => return Err(CistError::Parse("repeated p line".into())),
            Line::Factor(f) => factors.push(f),
            Line::Pair(a, b) if order.is_some() => edges.push((a, b)),
            Line::Pair(..) => return Err(CistError::Parse("edge before p line".into())),
            Line::Tree(_) => return Err(CistError::Parse("tree header in a graph file".into())),
            Line::Skip => {}
        }
    }
    let order = order.ok_or_else(|| CistError::Parse("missing p line".into()))?;
    Graph::from_edges(order, edges, factors)
}

/// Graph from text in either format, sniffed by the first character.
pub fn graph_from_str(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        graph_from_json(text)
    } else {
        graph_from_edge_list(text)
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    graph_from_str(&fs::read_to_string(path).map_err(|e| CistError::Io(format!("{}: {e}", path.display())))?)
}

/// How a tree-set file refers to its host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphRef {
    Inline,
    Path(String),
}

pub fn tree_set_to_json(ts: &TreeSet, graph: &GraphRef) -> String {
    let g = match graph {
        GraphRef::Inline => graph_object(ts.host(), "  "),
        GraphRef::Path(p) => serde_json::to_string(p).expect("string serializes"),
    };
    let mut s = format!("{{\n  \"graph\": {g},\n  \"trees\": [");
    for (i, t) in ts.trees().iter().enumerate() {
        s.push_str(if i == 0 { "\n    " } else { ",\n    " });
        s.push_str(&edges_json(t, "    "));
    }
    s.push_str("\n  ]\n}\n");
    s
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeSetJson {
    #[serde(default)]
    graph: Option<Value>,
    trees: Vec<Vec<(usize, usize)>>,
}

/// The host embedded in or referenced by a tree-set JSON document, if any.
/// Relative paths resolve against `base`.
pub fn tree_set_host(text: &str, base: Option<&Path>) -> Result<Option<Graph>> {
    let tj: TreeSetJson = serde_json::from_str(text)?;
    match tj.graph {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(p)) => {
            let mut path = PathBuf::from(&p);
            if path.is_relative() {
                if let Some(b) = base {
                    path = b.join(path);
                }
            }
            read_graph(&path).map(Some)
        }
        Some(v @ Value::Object(_)) => graph_from_value(v).map(Some),
        Some(_) => Err(CistError::Parse("\"graph\" must be an object or a path".into())),
    }
}

/// Tree set from JSON. With `host` given, an embedded or referenced graph
/// must equal it; without, the document must name its graph.
pub fn tree_set_from_json(text: &str, host: Option<Arc<Graph>>, base: Option<&Path>) -> Result<TreeSet> {
    let tj: TreeSetJson = serde_json::from_str(text)?;
    let own = tree_set_host(text, base)?;
    let host = match (host, own) {
        (Some(h), Some(o)) if *h != o => {
            return Err(CistError::HostMismatch(
                "tree set names a different graph than the one given".into(),
            ))
        }
        (Some(h), _) => h,
        (None, Some(o)) => Arc::new(o),
        (None, None) => {
            return Err(CistError::Parse("tree set has no graph and none was given".into()))
        }
    };
    TreeSet::from_pairs(host, tj.trees)
}

pub fn tree_set_to_edge_list(ts: &TreeSet) -> String {
    let mut s = header_lines(ts.host());
    for (i, t) in ts.trees().iter().enumerate() {
        let _ = writeln!(s, "t {i}");
        for e in t {
            let _ = writeln!(s, "{} {}", e.u(), e.v());
        }
    }
    s
}

pub fn tree_set_from_edge_list(text: &str, host: Arc<Graph>) -> Result<TreeSet> {
    let mut trees: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut factors = Vec::new();
    let mut order = None;
    for line in parse_lines(text)? {
        match line {
            Line::Order(n) => order = Some(n),
            Line::Factor(f) => factors.push(f),
            Line::Tree(i) => {
                if i != trees.len() {
                    return Err(CistError::Parse(format!("tree {i} out of sequence")));
                }
                trees.push(Vec::new());
            }
            Line::Pair(a, b) => trees
                .last_mut()
                .ok_or_else(|| CistError::Parse("edge before first t line".into()))?
                .push((a, b)),
            Line::Skip => {}
        }
    }
    if order.is_some_and(|n| n != host.order()) || (!factors.is_empty() && factors != host.factors()) {
        return Err(CistError::HostMismatch("edge-list header does not match the host".into()));
    }
    TreeSet::from_pairs(host, trees)
}

/// Tree set from text in either format.
pub fn tree_set_from_str(text: &str, host: Option<Arc<Graph>>, base: Option<&Path>) -> Result<TreeSet> {
    if text.trim_start().starts_with('{') {
        tree_set_from_json(text, host, base)
    } else {
        let host = host.ok_or_else(|| CistError::Parse("edge-list tree sets need a graph".into()))?;
        tree_set_from_edge_list(text, host)
    }
}

pub fn read_tree_set(path: &Path, host: Option<Arc<Graph>>) -> Result<TreeSet> {
    let text = fs::read_to_string(path).map_err(|e| CistError::Io(format!("{}: {e}", path.display())))?;
    tree_set_from_str(&text, host, path.parent())
}
