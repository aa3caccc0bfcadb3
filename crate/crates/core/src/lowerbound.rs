//! Complete trees `X_{Δ,d}` and per-instance checks of the lower-bound
//! argument: every tree-partition of `X_{Δ,d}` over a tree of maximum degree
//! below `Δ` has radius at most `d` around the root's part, hence few nodes,
//! hence a large part.

use std::collections::VecDeque;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::treepartition::{validate_tp, TpError, TreePartition};

/// Default vertex cap for [`gen_complete_tree`].
pub const COMPLETE_TREE_CAP: u128 = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum LbError {
    #[error("complete tree needs delta >= 2, got {0}")]
    DeltaTooSmall(usize),
    #[error("X_{{{delta},{depth}}} has more than {cap} vertices")]
    TooLarge {
        delta: usize,
        depth: usize,
        cap: u128,
    },
    #[error("((delta-1)/(delta-2))^d0 must exceed 3; fails for delta = {delta}, d0 = {d0}")]
    DepthTooSmall { delta: usize, d0: u32 },
    #[error("the exponent formula needs delta >= 4, got {0}")]
    ExponentDelta(usize),
    #[error("target exponent must lie in (0, 1), got {0}")]
    ExponentRange(f64),
    #[error("partition is invalid: {0}")]
    InvalidPartition(#[from] TpError),
    #[error("certificate inapplicable: tree degree {tree_degree} is not below delta = {delta}")]
    Inapplicable { tree_degree: usize, delta: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteTree {
    pub graph: Graph,
    pub root: Vertex,
    pub delta: usize,
    pub depth: usize,
}

/// `1 + Δ·Σ_{i<d} (Δ−1)^i`, or `None` on overflow. Defined for every `Δ ≥ 1`.
pub fn complete_tree_size(delta: usize, depth: usize) -> Option<u128> {
    let delta = delta as u128;
    let mut layer: u128 = 1;
    let mut sum: u128 = 0;
    for _ in 0..depth {
        sum = sum.checked_add(layer)?;
        layer = layer.checked_mul(delta.saturating_sub(1))?;
    }
    sum.checked_mul(delta)?.checked_add(1)
}

pub fn gen_complete_tree(delta: usize, depth: usize) -> Result<CompleteTree, LbError> {
    gen_complete_tree_with_cap(delta, depth, COMPLETE_TREE_CAP)
}

/// BFS-numbered `X_{Δ,d}` with root 0: the root gets `Δ` children, every
/// other vertex above depth `d` gets `Δ − 1`.
pub fn gen_complete_tree_with_cap(
    delta: usize,
    depth: usize,
    cap: u128,
) -> Result<CompleteTree, LbError> {
    if delta < 2 {
        return Err(LbError::DeltaTooSmall(delta));
    }
    let size = complete_tree_size(delta, depth)
        .filter(|&s| s <= cap)
        .ok_or(LbError::TooLarge { delta, depth, cap })? as usize;
    let mut graph = Graph::new(size);
    let mut next = 1;
    let mut frontier = vec![0];
    for level in 0..depth {
        let children = if level == 0 { delta } else { delta - 1 };
        let mut upcoming = Vec::with_capacity(frontier.len() * children);
        for &v in &frontier {
            for _ in 0..children {
                graph.add_edge(v, next).expect("fresh vertex");
                upcoming.push(next);
                next += 1;
            }
        }
        frontier = upcoming;
    }
    debug_assert_eq!(next, size);
    Ok(CompleteTree {
        graph,
        root: 0,
        delta,
        depth,
    })
}

/// The exponent `1 − log_{Δ−1}(3^{1/d0}·(Δ−2))` for `Δ ≥ 4`.
///
/// Requires `((Δ−1)/(Δ−2))^{d0} > 3`, checked exactly. The returned value
/// is only used for reporting.
pub fn lb_alpha(delta: usize, d0: u32) -> Result<f64, LbError> {
    if delta < 4 {
        return Err(LbError::ExponentDelta(delta));
    }
    let lhs = BigUint::from(delta - 1).pow(d0);
    let rhs = BigUint::from(3u32) * BigUint::from(delta - 2).pow(d0);
    if lhs <= rhs {
        return Err(LbError::DepthTooSmall { delta, d0 });
    }
    let inner = (3f64).ln() / f64::from(d0) + ((delta - 2) as f64).ln();
    Ok(1.0 - inner / ((delta - 1) as f64).ln())
}

/// For `Δ = 3`: the least `d0 ≥ 1` with `2·d0 + 1 ≤ 2^{(1−α)·d0}`.
pub fn lb_min_depth(alpha: f64) -> Result<u32, LbError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(LbError::ExponentRange(alpha));
    }
    const TOL: f64 = 1e-12;
    (1u32..)
        .find(|&d0| {
            let d = f64::from(d0);
            2.0 * d + 1.0 <= (2f64).powf((1.0 - alpha) * d) * (1.0 + TOL)
        })
        .ok_or(LbError::ExponentRange(alpha))
}

/// Node holding the root of `x` and its eccentricity in the partition tree.
///
/// The eccentricity is at most `x.depth` for every valid partition,
/// whatever the tree degree: a graph path of length `j` from the root can
/// move at most `j` steps in the tree.
pub fn root_eccentricity(x: &CompleteTree, tp: &TreePartition) -> (usize, usize) {
    let z = tp
        .parts
        .iter()
        .position(|p| p.contains(x.root))
        .expect("root lies in some part");
    let ecc = tp.tree_distances(z).into_iter().max().unwrap_or(0);
    (z, ecc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LbVerdict {
    pub delta: usize,
    pub depth: usize,
    pub vertices: usize,
    /// Node containing the root.
    pub root_node: usize,
    pub radius: usize,
    pub radius_ok: bool,
    pub tree_nodes: usize,
    /// `|V(X_{Δ−1,d})|`
    pub tree_node_bound: u128,
    pub tree_size_ok: bool,
    pub tree_degree: usize,
    /// `|V(X_{Δ(T),d})|`, the same bound using the actual tree degree.
    pub degree_node_bound: u128,
    /// `⌈|V(X)| / |V(T)|⌉`
    pub pigeonhole_width: usize,
    /// `⌈|V(X)| / |V(X_{Δ−1,d})|⌉`, valid for every admissible partition.
    pub certified_width: usize,
    /// `⌈|V(X)| / |V(X_{Δ(T),d})|⌉`, valid for every partition whose tree
    /// has maximum degree at most `Δ(T)`.
    pub degree_certified_width: usize,
    pub width: usize,
    pub pigeonhole_ok: bool,
    pub exponent: f64,
    /// `|V(X)|^exponent`
    pub exponent_target: f64,
    pub exponent_claim_holds: bool,
}

/// Runs the radius / size / pigeonhole chain on one concrete partition.
pub fn check_lb_certificate(
    x: &CompleteTree,
    tp: &TreePartition,
    exponent: f64,
) -> Result<LbVerdict, LbError> {
    let stats = validate_tp(&x.graph, tp)?;
    if stats.max_tree_degree >= x.delta {
        return Err(LbError::Inapplicable {
            tree_degree: stats.max_tree_degree,
            delta: x.delta,
        });
    }
    let (root_node, radius) = root_eccentricity(x, tp);
    let vertices = x.graph.n();
    let tree_nodes = stats.nodes;
    let tree_node_bound = complete_tree_size(x.delta - 1, x.depth).expect("smaller than X itself");
    let degree_node_bound =
        complete_tree_size(stats.max_tree_degree, x.depth).expect("smaller than X itself");
    let pigeonhole_width = vertices.div_ceil(tree_nodes);
    let certified_width = (vertices as u128).div_ceil(tree_node_bound) as usize;
    let degree_certified_width = (vertices as u128).div_ceil(degree_node_bound) as usize;
    let exponent_target = (vertices as f64).powf(exponent);
    Ok(LbVerdict {
        delta: x.delta,
        depth: x.depth,
        vertices,
        root_node,
        radius,
        radius_ok: radius <= x.depth,
        tree_nodes,
        tree_node_bound,
        tree_size_ok: tree_nodes as u128 <= tree_node_bound,
        tree_degree: stats.max_tree_degree,
        degree_node_bound,
        pigeonhole_width,
        certified_width,
        degree_certified_width,
        width: stats.width,
        pigeonhole_ok: stats.width >= pigeonhole_width,
        exponent,
        exponent_target,
        exponent_claim_holds: stats.width as f64 >= exponent_target,
    })
}

/// Partition of `X_{Δ,d}` into BFS layers on a path of `d + 1` nodes.
pub fn layer_partition(x: &CompleteTree) -> TreePartition {
    let n = x.graph.n();
    let mut dist = vec![usize::MAX; n];
    dist[x.root] = 0;
    let mut queue = VecDeque::from([x.root]);
    while let Some(u) = queue.pop_front() {
        for &w in x.graph.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    let mut layers = vec![Vec::new(); x.depth + 1];
    for (v, &l) in dist.iter().enumerate() {
        layers[l].push(v);
    }
    TreePartition {
        n,
        parts: layers.into_iter().map(VertexSet::from_unsorted).collect(),
        edges: (1..=x.depth).map(|i| (i - 1, i)).collect(),
        anchor: None,
    }
}

/// Root alone, then each vertex's children grouped in sibling pairs (one
/// singleton when the count is odd); a group hangs off the group holding its
/// parent.
pub fn sibling_partition(x: &CompleteTree) -> TreePartition {
    let n = x.graph.n();
    let mut group = vec![usize::MAX; n];
    let mut parts: Vec<Vec<Vertex>> = vec![vec![x.root]];
    let mut edges = Vec::new();
    group[x.root] = 0;
    let mut queue = VecDeque::from([x.root]);
    while let Some(u) = queue.pop_front() {
        let children: Vec<Vertex> = x
            .graph
            .neighbors(u)
            .iter()
            .copied()
            .filter(|&w| group[w] == usize::MAX)
            .collect();
        for pair in children.chunks(2) {
            let id = parts.len();
            for &c in pair {
                group[c] = id;
                queue.push_back(c);
            }
            parts.push(pair.to_vec());
            edges.push((group[u], id));
        }
    }
    TreePartition {
        n,
        parts: parts.into_iter().map(VertexSet::from_unsorted).collect(),
        edges,
        anchor: None,
    }
}
