//! Lifting an `r`-CIST set from `K_{m-1} □ C_n` to `K_m □ C_n`.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::parametric::finish;
use crate::diagnostics::CistReport;
use crate::error::{CistError, Result};
use crate::graph::{km_cn, Edge, FactorKind};
use crate::verify::TreeSet;

/// Adds the vertex `u_{m-1}^j` to every K-copy `j` and hangs it, in each
/// tree, off the lowest-index inner vertex that tree has in copy `j`.
/// Existing vertices `i + (m-1)j` move to `i + mj`.
pub fn lift_to_odd(ts: &TreeSet, report: &CistReport) -> Result<TreeSet> {
    let src = ts.host();
    let layout = src
        .kcopy_layout()
        .filter(|_| src.factors()[1].kind == FactorKind::Cycle)
        .ok_or_else(|| CistError::InvalidParameter("lift needs a K_m □ C_n host".into()))?;
    let (old_m, n) = (layout.copy_size, layout.copies);
    if old_m % 2 != 0 {
        return Err(CistError::InvalidParameter(format!(
            "lift needs an even complete factor, got K_{old_m}"
        )));
    }
    if report.k != ts.k() || report.order != ts.order() {
        return Err(CistError::HostMismatch("report does not describe this tree set".into()));
    }
    let m = old_m + 1;
    let host = Arc::new(km_cn(m, n)?);
    let remap = |v: usize| v % old_m + m * (v / old_m);

    let mut trees = Vec::with_capacity(ts.k());
    for (i, tree) in ts.trees().iter().enumerate() {
        let mut t: BTreeSet<Edge> = tree.iter().map(|e| Edge::new(remap(e.u()), remap(e.v()))).collect();
        for j in 0..n {
            let anchor = report.trees[i]
                .inner_vertices
                .iter()
                .copied()
                .filter(|&v| layout.copy_of(v) == j)
                .min()
                .ok_or(CistError::LiftImpossible { tree: i, copy: j })?;
            t.insert(Edge::new(remap(anchor), old_m + m * j));
        }
        trees.push(t);
    }
    finish(host, trees, "lift")
}
