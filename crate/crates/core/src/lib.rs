//! Completely independent spanning trees (CISTs) in Cartesian-product graphs.
//!
//! Graph builders, two independent CIST verifiers, diagnostics and a
//! necessary-condition suite, explicit constructions, a distribution-level
//! feasibility screen and a backtracking search for small graphs.

pub mod cli;
pub mod constructions;
pub mod diagnostics;
pub mod dot;
pub mod error;
pub mod feasibility;
pub mod graph;
pub mod io;
pub mod search;
pub mod verify;

pub use diagnostics::{check_necessary_conditions, diagnostics, CistReport, ConditionReport};
pub use error::{CistError, Result};
pub use graph::{
    build_complete, build_cycle, build_path, cartesian_product, km_cn, km_pn, toroidal_grid, Edge, Factor,
    FactorKind, Graph, VertexLabel,
};
pub use search::{search_cists, PruneRules, SearchConfig, SearchOutcome, SearchStatus};
pub use verify::{is_spanning_tree, tree_path, verify_characterization, verify_direct, Failure, TreeSet, Verdict};
