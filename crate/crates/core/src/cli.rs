//! The `cist` command line.
//!
//! Exit codes: 0 success (valid / found), 1 invalid tree set, 2 structural
//! input error, 3 search exhausted with no witness, 4 search budget
//! exceeded, 64 usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::constructions::{mcist_table, mcist_value, render_table, validate_appendix, FamilyId};
use crate::diagnostics::{check_necessary_conditions, diagnostics};
use crate::dot::export_dot;
use crate::error::{CistError, Result};
use crate::feasibility::{arrangements, screen_survivors, Survivor, MAX_ARRANGEMENT_COPIES};
use crate::graph::{build_complete, build_cycle, build_path, km_cn, km_pn, toroidal_grid, Graph};
use crate::io::{graph_to_edge_list, graph_to_json, read_graph, read_tree_set, tree_set_to_edge_list, tree_set_to_json, GraphRef};
use crate::search::{search_cists, PruneRules, SearchConfig, SearchStatus};
use crate::verify::{verify_direct, TreeSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_STRUCTURAL: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FileFormat {
    Json,
    EdgeList,
}

#[derive(Parser, Debug)]
#[command(name = "cist", version, about = "Completely independent spanning trees in product graphs")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct FamilyParams {
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    pp: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a host graph.
    Gen {
        /// complete, cycle, path, km-cn, km-pn or torus.
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Torus dimensions, comma separated.
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        #[arg(long, value_enum, default_value = "json")]
        output_format: FileFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a tree set from an explicit construction.
    Construct {
        #[arg(long)]
        family: String,
        #[command(flatten)]
        params: FamilyParams,
        #[arg(long, value_enum, default_value = "json")]
        output_format: FileFormat,
        /// Refer to this graph file instead of embedding the host.
        #[arg(long)]
        graph_ref: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a tree set: `verify [graph] trees`.
    Verify {
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
    },
    /// Per-tree diagnostics and the necessary-condition suite.
    Diagnose {
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
    },
    /// Maximum number of CISTs in K_m □ C_n.
    Mcist {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Print the table for m, n in 3..=MAX.
        #[arg(long)]
        table: Option<usize>,
    },
    /// Inner-vertex distribution screen for r trees in K_{2r-1} □ C_n.
    Feasibility {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// Also list cyclic arrangements of each surviving profile.
        #[arg(long)]
        arrangements: bool,
    },
    /// Backtracking search for k CISTs.
    Search {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 60_000)]
        budget_ms: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        max_tree_degree: Option<usize>,
        /// Disable a pruning rule (repeatable).
        #[arg(long)]
        disable: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse, check and repair the embedded datasets.
    ValidateAppendix,
    /// Graphviz export: `export-dot graph [trees]`.
    ExportDot {
        graph: PathBuf,
        trees: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `argv` (including the program name), runs the verb and returns
/// the exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CistError::InvalidParameter(_) | CistError::InvalidOrder { .. } | CistError::Unsupported(_) => {
                    EXIT_USAGE
                }
                _ => EXIT_STRUCTURAL,
            }
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CistError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn load_pair(files: &[PathBuf]) -> Result<(Arc<Graph>, TreeSet)> {
    let (host, trees) = match files {
        [g, t] => (Some(Arc::new(read_graph(g)?)), t),
        [t] => (None, t),
        _ => return Err(CistError::InvalidParameter("expected [graph] trees".into())),
    };
    let ts = read_tree_set(trees, host)?;
    Ok((ts.host().clone(), ts))
}

fn gen_graph(family: &str, m: Option<usize>, n: Option<usize>, dims: &[usize]) -> Result<Graph> {
    let need = |x: Option<usize>, name: &str| {
        x.ok_or_else(|| CistError::InvalidParameter(format!("gen --family {family} needs --{name}")))
    };
    match family.to_ascii_lowercase().replace('_', "-").as_str() {
        "complete" | "k" => build_complete(need(m, "m")?),
        "cycle" | "c" => build_cycle(need(n, "n")?),
        "path" | "p" => build_path(need(n, "n")?),
        "km-cn" => km_cn(need(m, "m")?, need(n, "n")?),
        "km-pn" => km_pn(need(m, "m")?, need(n, "n")?),
        "torus" | "tm" => match dims {
            [a, b, c] => toroidal_grid(*a, *b, *c),
            _ => Err(CistError::InvalidParameter("torus needs --dims a,b,c".into())),
        },
        _ => Err(CistError::InvalidParameter(format!("unknown graph family {family:?}"))),
    }
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let fmt = cli.format;
    match &cli.command {
        Command::Gen {
            family,
            m,
            n,
            dims,
            output_format,
            out,
        } => {
            let g = gen_graph(family, *m, *n, dims)?;
            let text = match output_format {
                FileFormat::Json => graph_to_json(&g),
                FileFormat::EdgeList => graph_to_edge_list(&g),
            };
            emit(out.as_deref(), &text)?;
            if out.is_some() {
                eprintln!("graph: {} vertices, {} edges", g.order(), g.edge_count());
            }
            Ok(EXIT_OK)
        }
        Command::Construct {
            family,
            params,
            output_format,
            graph_ref,
            out,
        } => {
            let id = FamilyId::from_tag(family, params.r, params.n, params.m, params.p, params.pp, params.q)?;
            let ts = id.build()?;
            let text = match output_format {
                FileFormat::Json => {
                    let r = graph_ref.clone().map(GraphRef::Path).unwrap_or(GraphRef::Inline);
                    tree_set_to_json(&ts, &r)
                }
                FileFormat::EdgeList => tree_set_to_edge_list(&ts),
            };
            emit(out.as_deref(), &text)?;
            if out.is_some() {
                eprintln!("{id}: {} trees on {} vertices", ts.k(), ts.order());
            }
            Ok(EXIT_OK)
        }
        Command::Verify { files } => {
            let (g, ts) = load_pair(files)?;
            let verdict = verify_direct(&g, &ts)?;
            match fmt {
                Format::Json => print!("{}", to_json(&verdict)),
                Format::Text => println!("{verdict}"),
            }
            Ok(if verdict.valid { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Diagnose { files } => {
            let (g, ts) = load_pair(files)?;
            let report = diagnostics(&g, &ts);
            let conditions = check_necessary_conditions(&g, &ts)?;
            match fmt {
                Format::Json => print!("{}", to_json(&json!({ "report": report, "conditions": conditions }))),
                Format::Text => {
                    println!(
                        "order {}, k {}, lost edges {}, minimal tree {}",
                        report.order,
                        report.k,
                        report.lost_edges.len(),
                        report.minimal_tree()
                    );
                    for t in &report.trees {
                        let ped = t.ped.map(|p| p.to_string()).unwrap_or_else(|| "-".into());
                        println!(
                            "  tree {}: inner {}, max degree {}, ped {}, lost-in-tree {}",
                            t.index, t.inner_count, t.max_degree, ped, t.lost_in_tree.len()
                        );
                    }
                    print!("{conditions}");
                }
            }
            Ok(if conditions.verified { EXIT_OK } else { EXIT_INVALID })
        }
        Command::Mcist { m, n, table } => {
            if let Some(max) = table {
                let rows = mcist_table(3..=*max, 3..=*max)?;
                match fmt {
                    Format::Json => print!("{}", to_json(&rows)),
                    Format::Text => print!("{}", render_table(&rows)),
                }
                return Ok(EXIT_OK);
            }
            let (m, n) = match (m, n) {
                (Some(m), Some(n)) => (*m, *n),
                _ => return Err(CistError::InvalidParameter("mcist needs --m and --n, or --table".into())),
            };
            let v = mcist_value(m, n)?;
            match fmt {
                Format::Json => print!("{}", to_json(&json!({ "m": m, "n": n, "value": v }))),
                Format::Text => println!("{v}"),
            }
            Ok(EXIT_OK)
        }
        Command::Feasibility { r, n, arrangements: arr } => {
            let survivors = screen_survivors(*r, *n)?;
            let with_arr = |s: &Survivor| -> Result<Option<Vec<Vec<usize>>>> {
                if *arr && *n <= MAX_ARRANGEMENT_COPIES {
                    arrangements(s.profile).map(Some)
                } else {
                    Ok(None)
                }
            };
            match fmt {
                Format::Json => {
                    let mut rows = Vec::new();
                    for s in &survivors {
                        rows.push(json!({
                            "profile": s.profile,
                            "representative": s.representative,
                            "trace": s.trace,
                            "arrangements": with_arr(s)?,
                        }));
                    }
                    print!("{}", to_json(&json!({ "r": r, "n": n, "survivors": rows })));
                }
                Format::Text => {
                    println!("r = {r}, n = {n}: {} surviving profile(s)", survivors.len());
                    for s in &survivors {
                        println!("  (a0,a1,a2,a3) = {:?}  n_j = {:?}", s.profile, s.representative);
                        for o in &s.trace.outcomes {
                            println!("    {:<24} {:<14} {}", o.rule.id(), format!("{:?}", o.status), o.witness);
                        }
                        if let Some(a) = with_arr(s)? {
                            println!("    arrangements: {a:?}");
                        }
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Search {
            graph,
            k,
            budget_ms,
            seed,
            workers,
            max_tree_degree,
            disable,
            out,
        } => {
            let g = read_graph(graph)?;
            let mut rules = PruneRules::all();
            for name in disable {
                rules = rules.without(name)?;
            }
            let cfg = SearchConfig {
                budget_ms: *budget_ms,
                seed: *seed,
                workers: *workers,
                max_tree_degree: *max_tree_degree,
                rules,
            };
            let o = search_cists(&g, *k, &cfg)?;
            if let (Some(ts), Some(p)) = (&o.witness, out) {
                emit(Some(p), &tree_set_to_json(ts, &GraphRef::Inline))?;
            }
            match fmt {
                Format::Json => {
                    let witness = o.witness.as_ref().map(|ts| ts.trees().to_vec());
                    print!(
                        "{}",
                        to_json(&json!({
                            "status": o.status,
                            "nodes_explored": o.nodes_explored,
                            "reason": o.reason,
                            "witness": witness,
                        }))
                    );
                }
                Format::Text => {
                    let status = serde_json::to_value(o.status).expect("status serializes");
                    println!("{} ({} nodes)", status.as_str().unwrap_or("?"), o.nodes_explored);
                    if let Some(r) = &o.reason {
                        println!("  {r}");
                    }
                    if let (Some(ts), None) = (&o.witness, out) {
                        print!("{}", tree_set_to_edge_list(ts));
                    }
                }
            }
            Ok(match o.status {
                SearchStatus::Found => EXIT_OK,
                SearchStatus::ExhaustedNone => EXIT_EXHAUSTED,
                SearchStatus::BudgetExceeded => EXIT_BUDGET,
            })
        }
        Command::ValidateAppendix => {
            let report = validate_appendix()?;
            match fmt {
                Format::Json => print!("{}", to_json(&report)),
                Format::Text => print!("{report}"),
            }
            Ok(EXIT_OK)
        }
        Command::ExportDot { graph, trees, out } => {
            let g = Arc::new(read_graph(graph)?);
            let ts = trees.as_ref().map(|t| read_tree_set(t, Some(g.clone()))).transpose()?;
            let text = export_dot(&g, ts.as_ref())?;
            emit(out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
    }
}
