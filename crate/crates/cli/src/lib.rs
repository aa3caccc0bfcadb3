//! Command-line pipelines over the `treepart` library.
//!
//! Artifacts go to standard output or `--out`; diagnostics go to standard
//! error. Exit status is 0 on success, 1 when a verification fails and 2 on
//! parse or configuration errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use treepart::corpus::{fixture_corpus, random_corpus, standard_corpus, CorpusEntry};
use treepart::lowerbound::{gen_complete_tree_with_cap, COMPLETE_TREE_CAP};
use treepart::treedecomp::{exact_td_with_cap, EXACT_TD_CAP};
use treepart::treepartition::{
    exact_tpw_with_cap, to_f64, CaseCounts, Construction, EXACT_TPW_CAP,
};
use treepart::{
    alpha_int, alpha_opt, bound_constants, check_lb_certificate, heuristic_td, normalize_tp,
    parse_alpha, parse_graph_with, parse_td, parse_tp, td_from_tp, tree_partition_with_stats,
    validate_td, validate_tp, write_graph, write_td, write_tp, AlphaParams, CompleteTree, Graph,
    GraphFormat, ParseMode, Rational, TdError, TdStrategy, TpError, TreeDecomposition,
};

/// Environment variable overriding the size caps of the exact solvers and
/// the complete-tree generator.
pub const CAP_ENV: &str = "TREEPART_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "treepart",
    version,
    about = "Bounded-degree tree-partitions of graphs"
)]
pub struct Cli {
    #[command(flatten)]
    pub input: InputOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputOpts {
    /// Graph file format.
    #[arg(long, global = true, default_value = "pace-gr")]
    pub format: GraphFormat,
    /// Reject duplicate edges and edge-count mismatches.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a tree-decomposition (`.td`).
    Decompose {
        graph: PathBuf,
        #[arg(long, default_value = "min-fill")]
        strategy: TdStrategy,
        /// Exact subset DP instead of the heuristic (small graphs only).
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a tree-partition (`.tp`) and report JSON statistics.
    Partition {
        graph: PathBuf,
        /// Use this decomposition instead of the heuristic.
        #[arg(long)]
        td: Option<PathBuf>,
        /// `int`, `opt`, or a rational `p/q` above 2.
        #[arg(long, default_value = "int")]
        alpha: String,
        #[arg(long, default_value = "min-fill")]
        strategy: TdStrategy,
        /// Reduce every node's tree degree to at most max(|B_x|·Δ, 2).
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where the JSON statistics go (default: standard error).
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Check a tree-decomposition against a graph.
    VerifyTd { graph: PathBuf, td: PathBuf },
    /// Check a tree-partition against a graph.
    VerifyTp { graph: PathBuf, tp: PathBuf },
    /// Exact tree-partition-width by exhaustive search.
    Oracle {
        graph: PathBuf,
        /// Write the optimal partition here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn a tree-partition into a tree-decomposition.
    Convert {
        graph: PathBuf,
        tp: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Complete trees X_{Δ,d}.
    Lowerbound {
        #[command(subcommand)]
        action: LowerboundCmd,
    },
    /// CSV of achieved width and tree degree against the bounds.
    Bench {
        #[arg(long, default_value = "spec")]
        corpus: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random graphs added to the fixtures.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum LowerboundCmd {
    /// Write X_{Δ,d} as a graph.
    Gen {
        delta: usize,
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the radius / size / pigeonhole certificate on a partition of X_{Δ,d}.
    Check {
        graph: PathBuf,
        tp: PathBuf,
        /// Exponent whose growth claim is reported alongside.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// JSON statistics of one `partition` run.
#[derive(Debug, Serialize)]
pub struct PartitionStats {
    pub v: u32,
    pub width: usize,
    pub tree_max_degree: usize,
    pub nodes: usize,
    pub k: usize,
    pub d: usize,
    pub alpha: String,
    pub width_bound: String,
    pub width_bound_floor: usize,
    pub degree_bound: String,
    pub degree_bound_floor: usize,
    pub cases_taken: CaseCounts,
}

pub fn run(cli: &Cli) -> Result<()> {
    let mode = if cli.input.strict {
        ParseMode::Strict
    } else {
        ParseMode::Lenient
    };
    let load = |p: &Path| load_graph(p, cli.input.format, mode);
    match &cli.command {
        Command::Decompose {
            graph,
            strategy,
            exact,
            out,
        } => {
            let g = load(graph)?;
            let td = if *exact {
                exact_td_with_cap(&g, cap(EXACT_TD_CAP)?)
                    .map_err(|e| CliError::Config(e.to_string()))?
            } else {
                heuristic_td(&g, *strategy)
            };
            emit(out.as_deref(), &write_td(&td))
        }
        Command::Partition {
            graph,
            td,
            alpha,
            strategy,
            normalize,
            out,
            stats,
        } => {
            let g = load(graph)?;
            let td = match td {
                Some(p) => load_td(p)?,
                None => heuristic_td(&g, *strategy),
            };
            let alpha = parse_alpha(alpha).map_err(|e| CliError::Config(e.to_string()))?;
            let (mut c, mut json) = partition(&g, &td, alpha)?;
            if *normalize {
                c.partition = normalize_tp(&g, &c.partition).map_err(internal)?;
                json.tree_max_degree = c.partition.max_tree_degree();
            }
            emit(out.as_deref(), &write_tp(&c.partition))?;
            let json = serde_json::to_string(&json).expect("plain struct") + "\n";
            match stats {
                Some(p) => write_file(p, &json),
                None => {
                    eprint!("{json}");
                    Ok(())
                }
            }
        }
        Command::VerifyTd { graph, td } => {
            let g = load(graph)?;
            let td = load_td(td)?;
            match validate_td(&g, &td) {
                Ok(width) => {
                    println!(
                        "{}",
                        serde_json::json!({"valid": true, "width": width, "bags": td.bags.len()})
                    );
                    Ok(())
                }
                Err(e) => fail(td_witness(&e)),
            }
        }
        Command::VerifyTp { graph, tp } => {
            let g = load(graph)?;
            let tp = load_tp(tp)?;
            let s = match validate_tp(&g, &tp) {
                Ok(s) => s,
                Err(e) => return fail(tp_witness(&e)),
            };
            println!(
                "{}",
                serde_json::json!({
                    "valid": true,
                    "width": s.width,
                    "tree_max_degree": s.max_tree_degree,
                    "nodes": s.nodes,
                })
            );
            Ok(())
        }
        Command::Oracle { graph, out } => {
            let g = load(graph)?;
            let (tpw, witness) = exact_tpw_with_cap(&g, cap(EXACT_TPW_CAP)?)
                .map_err(|e| CliError::Config(e.to_string()))?;
            if let Some(p) = out {
                write_file(p, &write_tp(&witness))?;
            }
            println!("{}", serde_json::json!({"n": g.n(), "tpw": tpw}));
            Ok(())
        }
        Command::Convert { graph, tp, out } => {
            let g = load(graph)?;
            let tp = load_tp(tp)?;
            let td = td_from_tp(&g, &tp).map_err(|e| CliError::Verification(e.to_string()))?;
            emit(out.as_deref(), &write_td(&td))
        }
        Command::Lowerbound { action } => lowerbound(action, cli.input.format, mode),
        Command::Bench {
            corpus,
            seed,
            count,
            out,
        } => {
            let entries = match (corpus.as_str(), count) {
                ("spec", None) => standard_corpus(*seed),
                ("spec", Some(c)) => {
                    let mut v = fixture_corpus();
                    v.extend(random_corpus(*seed, *c));
                    v
                }
                ("fixtures", _) => fixture_corpus(),
                ("random", c) => random_corpus(*seed, c.unwrap_or(100)),
                (other, _) => {
                    return Err(CliError::Config(format!(
                        "unknown corpus {other:?} (spec, fixtures, random)"
                    )))
                }
            };
            emit(out.as_deref(), &bench_csv(&entries)?)
        }
    }
}

/// Runs the construction with `k` and `d` taken from `td` and `g`.
pub fn partition(
    g: &Graph,
    td: &TreeDecomposition,
    alpha: Rational,
) -> Result<(Construction, PartitionStats)> {
    validate_td(g, td).map_err(|e| CliError::Input(format!("tree-decomposition: {e}")))?;
    let params = AlphaParams::new(alpha, td.max_bag().max(1), g.max_degree().max(1))
        .map_err(|e| CliError::Config(e.to_string()))?;
    let c = tree_partition_with_stats(g, td, &params, None).map_err(internal)?;
    let s = validate_tp(g, &c.partition).map_err(internal)?;
    let b = &c.bounds;
    let stats = PartitionStats {
        v: 1,
        width: s.width,
        tree_max_degree: s.max_tree_degree,
        nodes: s.nodes,
        k: b.k,
        d: b.d,
        alpha: b.alpha.to_string(),
        width_bound: b.width.to_string(),
        width_bound_floor: b.width_floor(),
        degree_bound: b.degree.to_string(),
        degree_bound_floor: b.degree_floor(),
        cases_taken: c.cases,
    };
    Ok((c, stats))
}

fn lowerbound(action: &LowerboundCmd, format: GraphFormat, mode: ParseMode) -> Result<()> {
    let gen_cap = std::env::var(CAP_ENV)
        .ok()
        .map(|v| parse_cap(&v).map(|c| c as u128))
        .transpose()?
        .unwrap_or(COMPLETE_TREE_CAP);
    match action {
        LowerboundCmd::Gen { delta, depth, out } => {
            let x = gen_complete_tree_with_cap(*delta, *depth, gen_cap)
                .map_err(|e| CliError::Config(e.to_string()))?;
            emit(out.as_deref(), &write_graph(&x.graph, format))
        }
        LowerboundCmd::Check { graph, tp, alpha } => {
            let g = load_graph(graph, format, mode)?;
            let tp = load_tp(tp)?;
            let x = recognise_complete_tree(g, gen_cap)?;
            let verdict = check_lb_certificate(&x, &tp, *alpha)
                .map_err(|e| CliError::Verification(e.to_string()))?;
            println!("{}", serde_json::to_string(&verdict).expect("plain struct"));
            if verdict.radius_ok && verdict.tree_size_ok && verdict.pigeonhole_ok {
                Ok(())
            } else {
                Err(CliError::Verification("certificate chain broken".into()))
            }
        }
    }
}

/// Reads Δ and d off the root (vertex 0) and checks the graph is exactly
/// the generated `X_{Δ,d}`.
fn recognise_complete_tree(g: Graph, cap: u128) -> Result<CompleteTree> {
    let not_x = || CliError::Input("graph is not a BFS-numbered X_{Δ,d} rooted at 0".into());
    if g.n() == 0 {
        return Err(not_x());
    }
    let delta = g.degree(0).max(2);
    let mut depth = 0;
    let mut frontier = vec![0];
    let mut seen = vec![false; g.n()];
    seen[0] = true;
    loop {
        let next: Vec<usize> = frontier
            .iter()
            .flat_map(|&u| g.neighbors(u).iter().copied())
            .filter(|&w| !std::mem::replace(&mut seen[w], true))
            .collect();
        if next.is_empty() {
            break;
        }
        depth += 1;
        frontier = next;
    }
    let x = gen_complete_tree_with_cap(delta, depth, cap).map_err(|_| not_x())?;
    if x.graph != g {
        return Err(not_x());
    }
    Ok(x)
}

/// One CSV row per corpus entry and α preset, in corpus order.
pub fn bench_csv(entries: &[CorpusEntry]) -> Result<String> {
    let presets = [("int", alpha_int()), ("opt", alpha_opt())];
    let rows: Vec<Result<String>> = entries
        .par_iter()
        .map(|e| {
            let g = &e.graph;
            let td = heuristic_td(g, TdStrategy::MinFill);
            let mut rows = String::new();
            for (name, alpha) in presets {
                let (c, s) = partition(g, &td, alpha)?;
                let b = bound_constants(
                    &AlphaParams::new(alpha, s.k, s.d)
                        .map_err(|e| CliError::Config(e.to_string()))?,
                );
                let ok = b.width_ok(s.width) && b.degree_ok(s.tree_max_degree);
                let cs = c.cases;
                writeln!(
                    rows,
                    "{},{},{},{},{},{},{},{},{:.4},{},{},{:.4},{},{},{},{},{}",
                    e.name,
                    g.n(),
                    g.m(),
                    s.k,
                    s.d,
                    name,
                    s.width,
                    s.width_bound_floor,
                    s.width as f64 / to_f64(b.width),
                    s.tree_max_degree,
                    s.degree_bound_floor,
                    s.tree_max_degree as f64 / to_f64(b.degree),
                    cs.case1,
                    cs.case2,
                    cs.case3,
                    cs.case4,
                    ok,
                )
                .expect("string write");
            }
            Ok(rows)
        })
        .collect();
    let mut out = String::from(
        "graph,n,m,k,d,alpha,width,width_bound,width_ratio,tree_degree,degree_bound,degree_ratio,case1,case2,case3,case4,within_bounds\n",
    );
    for r in rows {
        out.push_str(&r?);
    }
    Ok(out)
}

fn fail(reason: String) -> Result<()> {
    println!("{}", serde_json::json!({"valid": false, "reason": reason}));
    Err(CliError::Verification(reason))
}

// Witnesses are reported with the 1-based ids of the text formats.
fn tp_witness(e: &TpError) -> String {
    match *e {
        TpError::NonAdjacentParts {
            u,
            v,
            part_u,
            part_v,
        } => format!(
            "edge {} {} joins parts {} and {}, which are not adjacent in the tree",
            u + 1,
            v + 1,
            part_u + 1,
            part_v + 1
        ),
        _ => e.to_string(),
    }
}

fn td_witness(e: &TdError) -> String {
    match *e {
        TdError::UncoveredEdge(u, v) => format!("edge {} {} lies in no bag", u + 1, v + 1),
        TdError::DisconnectedTrace { vertex, .. } => {
            format!("bags containing vertex {} are not connected", vertex + 1)
        }
        _ => e.to_string(),
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Verification(format!("construction: {e}"))
}

fn cap(default: usize) -> Result<usize> {
    match std::env::var(CAP_ENV) {
        Ok(v) => parse_cap(&v),
        Err(_) => Ok(default),
    }
}

fn parse_cap(v: &str) -> Result<usize> {
    v.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{CAP_ENV}={v:?} is not a non-negative integer")))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_graph(path: &Path, format: GraphFormat, mode: ParseMode) -> Result<Graph> {
    let (g, warnings) = parse_graph_with(&read(path)?, format, mode)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(g)
}

fn load_td(path: &Path) -> Result<TreeDecomposition> {
    parse_td(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_tp(path: &Path) -> Result<treepart::TreePartition> {
    parse_tp(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
