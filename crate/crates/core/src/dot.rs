//! Graphviz DOT export. Tree membership is an edge attribute
//! (`class="tree<i>"` or `class="lost"`); colors are left to the renderer.

use std::fmt::Write as _;

use crate::error::{CistError, Result};
use crate::graph::Graph;
use crate::verify::TreeSet;

pub fn export_dot(g: &Graph, ts: Option<&TreeSet>) -> Result<String> {
    if let Some(ts) = ts {
        if ts.host().as_ref() != g {
            return Err(CistError::HostMismatch("tree set is not hosted on this graph".into()));
        }
    }
    let mut s = String::from("graph G {\n");
    for v in 0..g.order() {
        let _ = writeln!(s, "  {v} [label=\"{}\"];", g.vertex_label(v));
    }
    for e in g.edges() {
        let class = ts.map(|ts| {
            ts.trees()
                .iter()
                .position(|t| t.binary_search(&e).is_ok())
                .map(|i| format!("tree{i}"))
                .unwrap_or_else(|| "lost".into())
        });
        match class {
            Some(c) => {
                let _ = writeln!(s, "  {} -- {} [class=\"{c}\"];", e.u(), e.v());
            }
            None => {
                let _ = writeln!(s, "  {} -- {};", e.u(), e.v());
            }
        }
    }
    s.push_str("}\n");
    Ok(s)
}
