//! Tree-partitions of bounded width over trees of bounded degree.
//!
//! For a graph `G` with a tree-decomposition whose bags have at most `k`
//! vertices and maximum degree at most `d`, [`tree_partition`] builds a
//! partition of `V(G)` indexed by the nodes of a tree `T` such that every
//! edge of `G` stays inside a part or joins parts adjacent in `T`, with
//!
//! * width at most `3α(α−1)/(α−2)·kd − α/(α−2)·k`, and
//! * `Δ(T) ≤ 3α/(α−2)·d + (α−4)/(α−2)`,
//!
//! for any rational `α > 2`. At `α = 4` these are `18kd − 2k` and `6d`.
//!
//! ```
//! use treepart::{gen_fixture, heuristic_td, tree_partition, validate_tp};
//! use treepart::{alpha_int, AlphaParams, FixtureKind, TdStrategy};
//!
//! let g = gen_fixture(FixtureKind::Fan, 30).unwrap();
//! let td = heuristic_td(&g, TdStrategy::MinFill);
//! let params = AlphaParams::new(alpha_int(), td.max_bag(), g.max_degree()).unwrap();
//! let tp = tree_partition(&g, &td, &params, None).unwrap();
//! let stats = validate_tp(&g, &tp).unwrap();
//! assert!(stats.width <= 18 * params.k() * params.d());
//! assert!(stats.max_tree_degree <= 6 * params.d());
//! ```
//!
//! The crate also ships the supporting pieces: graph I/O and generators,
//! tree-decomposition heuristics and an exact solver for tiny graphs, the
//! separator step, exhaustive tree-partition-width, and the complete-tree
//! lower-bound family.

pub mod corpus;
pub mod graph;
pub mod lowerbound;
mod marks;
pub mod separator;
pub mod treedecomp;
pub mod treepartition;

pub use graph::{
    gen_fixture, parse_graph, parse_graph_with, write_graph, FixtureKind, Graph, GraphError,
    GraphFormat, ParseError, ParseMode, Vertex, VertexSet,
};
pub use lowerbound::{
    check_lb_certificate, gen_complete_tree, lb_alpha, lb_min_depth, sibling_partition,
    CompleteTree, LbError, LbVerdict,
};
pub use separator::{balanced_separator, SeparatorError, SeparatorResult};
pub use treedecomp::{
    exact_td_small, heuristic_td, parse_td, validate_td, write_td, TdError, TdStrategy,
    TreeDecomposition,
};
pub use treepartition::{
    alpha_int, alpha_opt, bound_constants, exact_tpw, normalize_tp, parse_alpha, parse_tp,
    td_from_tp, tree_partition, tree_partition_with_stats, validate_tp, write_tp, AlphaParams,
    BoundSet, Rational, TpError, TreePartition,
};
