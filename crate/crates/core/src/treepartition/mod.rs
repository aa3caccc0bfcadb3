//! Tree-partitions: the partition type, validation, normalisation of the
//! tree degree, conversion to a tree-decomposition, text I/O, and the
//! bounded-degree construction itself.

mod bounds;
mod construct;
mod oracle;

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::treedecomp::{check_tree, TdError, TreeDecomposition};

pub use bounds::{
    alpha_int, alpha_opt, bound_constants, degree_coefficient, parse_alpha, to_f64,
    width_coefficient, AlphaParams, BoundSet, ParamError, Rational,
};
pub use construct::{tree_partition, tree_partition_with_stats, CaseCounts, Construction};
pub use oracle::{exact_tpw, exact_tpw_with_cap, EXACT_TPW_CAP};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TpError {
    #[error("partition is for {tp} vertices but the graph has {graph}")]
    VertexCount { tp: usize, graph: usize },
    #[error("partition of a non-empty graph has no parts")]
    NoParts,
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("part {part} contains vertex {vertex}, which is not in the graph")]
    UnknownVertex { part: usize, vertex: Vertex },
    #[error("vertex {vertex} lies in parts {a} and {b}")]
    Overlap { vertex: Vertex, a: usize, b: usize },
    #[error("vertex {0} lies in no part")]
    Uncovered(Vertex),
    #[error("tree edge {0}-{1} references a missing node")]
    BadTreeEdge(usize, usize),
    #[error("underlying graph is not a tree: {0}")]
    NotATree(String),
    #[error("anchor node {0} does not exist")]
    BadAnchor(usize),
    #[error("edge {u}-{v} joins parts {part_u} and {part_v}, which are not adjacent in the tree")]
    NonAdjacentParts {
        u: Vertex,
        v: Vertex,
        part_u: usize,
        part_v: usize,
    },
    #[error("invalid tree-decomposition: {0}")]
    InvalidTd(#[from] TdError),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("decomposition width {width} exceeds k - 1 = {}", .k - 1)]
    TdTooWide { width: usize, k: usize },
    #[error("maximum degree {degree} exceeds d = {d}")]
    DegreeTooLarge { degree: usize, d: usize },
    #[error("|S| = {size} outside the admissible range {min}..={max}")]
    AnchorSetSize { size: usize, min: usize, max: usize },
    #[error("vertex {0} of S is not in the graph")]
    AnchorSetVertex(Vertex),
    #[error("graph has {n} vertices, oracle cap is {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("construction broke its own guarantee: {0}")]
    BoundViolated(String),
}

/// A `T`-partition: disjoint non-empty parts indexed by the nodes of a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePartition {
    /// Vertex count of the host graph.
    pub n: usize,
    pub parts: Vec<VertexSet>,
    pub edges: Vec<(usize, usize)>,
    /// Node whose part contains the prescribed set `S`, if any.
    pub anchor: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TpStats {
    pub width: usize,
    pub max_tree_degree: usize,
    pub nodes: usize,
}

impl TreePartition {
    pub fn width(&self) -> usize {
        self.parts.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    pub fn tree_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.parts.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn max_tree_degree(&self) -> usize {
        self.tree_degrees().into_iter().max().unwrap_or(0)
    }

    pub fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.parts.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Node index of every vertex. Assumes the parts are disjoint and in range.
    pub fn part_of(&self) -> Vec<usize> {
        let mut owner = vec![usize::MAX; self.n];
        for (i, part) in self.parts.iter().enumerate() {
            for v in part {
                owner[v] = i;
            }
        }
        owner
    }

    /// Tree distances from `from` to every node.
    pub fn tree_distances(&self, from: usize) -> Vec<usize> {
        let adj = self.tree_adjacency();
        let mut dist = vec![usize::MAX; self.parts.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }
}

/// Checks every partition invariant and reports width and tree degree.
pub fn validate_tp(g: &Graph, tp: &TreePartition) -> Result<TpStats, TpError> {
    if tp.n != g.n() {
        return Err(TpError::VertexCount {
            tp: tp.n,
            graph: g.n(),
        });
    }
    if tp.parts.is_empty() {
        if g.n() == 0 && tp.edges.is_empty() && tp.anchor.is_none() {
            return Ok(TpStats {
                width: 0,
                max_tree_degree: 0,
                nodes: 0,
            });
        }
        return Err(TpError::NoParts);
    }
    let mut owner = vec![usize::MAX; g.n()];
    for (i, part) in tp.parts.iter().enumerate() {
        if part.is_empty() {
            return Err(TpError::EmptyPart(i));
        }
        for v in part {
            if v >= g.n() {
                return Err(TpError::UnknownVertex { part: i, vertex: v });
            }
            if owner[v] != usize::MAX {
                return Err(TpError::Overlap {
                    vertex: v,
                    a: owner[v],
                    b: i,
                });
            }
            owner[v] = i;
        }
    }
    if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(TpError::Uncovered(v));
    }
    for &(a, b) in &tp.edges {
        if a >= tp.parts.len() || b >= tp.parts.len() || a == b {
            return Err(TpError::BadTreeEdge(a, b));
        }
    }
    check_tree(tp.parts.len(), &tp.edges).map_err(TpError::NotATree)?;
    if let Some(z) = tp.anchor {
        if z >= tp.parts.len() {
            return Err(TpError::BadAnchor(z));
        }
    }
    let tree_edges: HashSet<(usize, usize)> = tp
        .edges
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    for (u, v) in g.edges() {
        let (a, b) = (owner[u], owner[v]);
        if a != b && !tree_edges.contains(&(a.min(b), a.max(b))) {
            return Err(TpError::NonAdjacentParts {
                u,
                v,
                part_u: a,
                part_v: b,
            });
        }
    }
    Ok(TpStats {
        width: tp.width(),
        max_tree_degree: tp.max_tree_degree(),
        nodes: tp.parts.len(),
    })
}

/// Rewires unused tree edges until `deg_T(x) ≤ max(|B_x|·Δ(G), 2)` for
/// every node.
///
/// While some node `x` exceeds its cap, it has an incident tree edge `xy`
/// that no graph edge crosses (at most `|B_x|·Δ(G)` are used). That edge is
/// deleted and the two subtrees are rejoined between a minimum-degree node
/// of each (smallest id on ties); both of those are leaves or isolated, so
/// they end at degree at most 2. Parts are untouched.
pub fn normalize_tp(g: &Graph, tp: &TreePartition) -> Result<TreePartition, TpError> {
    validate_tp(g, tp)?;
    let owner = tp.part_of();
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    for (u, v) in g.edges() {
        let (a, b) = (owner[u], owner[v]);
        if a != b {
            used.insert((a.min(b), a.max(b)));
        }
    }
    let delta = g.max_degree();
    let cap: Vec<usize> = tp.parts.iter().map(|p| (p.len() * delta).max(2)).collect();
    let count = tp.parts.len();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); count];
    for &(a, b) in &tp.edges {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let mut edges = tp.edges.clone();
    while let Some(x) = (0..count).find(|&x| adj[x].len() > cap[x]) {
        let y = *adj[x]
            .iter()
            .find(|&&y| !used.contains(&(x.min(y), x.max(y))))
            .expect("an overloaded node always has an unused tree edge");
        adj[x].remove(&y);
        adj[y].remove(&x);
        let pos = edges
            .iter()
            .position(|&(a, b)| (a, b) == (x, y) || (a, b) == (y, x))
            .unwrap();
        edges.remove(pos);

        let mut in_x = vec![false; count];
        in_x[x] = true;
        let mut queue = VecDeque::from([x]);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if !in_x[b] {
                    in_x[b] = true;
                    queue.push_back(b);
                }
            }
        }
        let pick = |side: bool| {
            (0..count)
                .filter(|&a| in_x[a] == side)
                .min_by_key(|&a| (adj[a].len(), a))
                .unwrap()
        };
        let (u, v) = (pick(true), pick(false));
        adj[u].insert(v);
        adj[v].insert(u);
        edges.push((u.min(v), u.max(v)));
    }
    Ok(TreePartition {
        n: tp.n,
        parts: tp.parts.clone(),
        edges,
        anchor: tp.anchor,
    })
}

/// Tree-decomposition over the same tree with bag `B_x ∪ B_parent(x)`
/// (rooted at node 0); its width is at most `2·width(tp) − 1`.
pub fn td_from_tp(g: &Graph, tp: &TreePartition) -> Result<TreeDecomposition, TpError> {
    validate_tp(g, tp)?;
    if tp.parts.is_empty() {
        return Ok(TreeDecomposition {
            n: tp.n,
            bags: vec![VertexSet::new()],
            edges: Vec::new(),
        });
    }
    let adj = tp.tree_adjacency();
    let mut parent = vec![usize::MAX; tp.parts.len()];
    let mut seen = vec![false; tp.parts.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    let bags = tp
        .parts
        .iter()
        .enumerate()
        .map(|(x, part)| match parent[x] {
            usize::MAX => part.clone(),
            p => part.union(&tp.parts[p]),
        })
        .collect();
    Ok(TreeDecomposition {
        n: tp.n,
        bags,
        edges: tp.edges.clone(),
    })
}

// ---------------------------------------------------------------------------
// `.tp` text format
// ---------------------------------------------------------------------------

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TpParseError {
    #[error("line {line}: malformed header: {msg}")]
    Header { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("missing `s tp` header")]
    MissingHeader,
    #[error("part {0} declared but never listed")]
    MissingPart(usize),
}

/// `s tp <parts> <n>`, then `p <i> <v...>`, `t <i> <j>` and optionally
/// `z <i>`; all ids 1-based.
pub fn write_tp(tp: &TreePartition) -> String {
    let mut out = format!("s tp {} {}\n", tp.parts.len(), tp.n);
    for (i, part) in tp.parts.iter().enumerate() {
        out.push_str(&format!("p {}", i + 1));
        for v in part {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(a, b) in &tp.edges {
        out.push_str(&format!("t {} {}\n", a + 1, b + 1));
    }
    if let Some(z) = tp.anchor {
        out.push_str(&format!("z {}\n", z + 1));
    }
    out
}

/// Parses the `.tp` format. Structural validity against a graph is left to
/// [`validate_tp`].
pub fn parse_tp(text: &str) -> Result<TreePartition, TpParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut parts: Vec<Option<VertexSet>> = Vec::new();
    let mut edges = Vec::new();
    let mut anchor = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        let err = |msg: String| TpParseError::Line { line, msg };
        let num = |s: &str| -> Result<usize, TpParseError> {
            s.parse().map_err(|_| TpParseError::Line {
                line,
                msg: format!("bad number {s:?}"),
            })
        };
        if toks[0] == "s" {
            if header.is_some() || toks.len() != 4 || toks[1] != "tp" {
                return Err(TpParseError::Header {
                    line,
                    msg: "expected a single `s tp <parts> <n>`".into(),
                });
            }
            let h = (num(toks[2])?, num(toks[3])?);
            parts = vec![None; h.0];
            header = Some(h);
            continue;
        }
        let (count, n) = header.ok_or(TpParseError::MissingHeader)?;
        let node = |s: &str| -> Result<usize, TpParseError> {
            let i = num(s)?;
            if i == 0 || i > count {
                return Err(TpParseError::Line {
                    line,
                    msg: format!("node {i} out of range 1..={count}"),
                });
            }
            Ok(i - 1)
        };
        match toks[0] {
            "p" if toks.len() >= 2 => {
                let i = node(toks[1])?;
                if parts[i].is_some() {
                    return Err(err(format!("part {} listed twice", i + 1)));
                }
                let mut members = Vec::new();
                for tok in &toks[2..] {
                    let v = num(tok)?;
                    if v == 0 || v > n {
                        return Err(err(format!("vertex {v} out of range 1..={n}")));
                    }
                    members.push(v - 1);
                }
                parts[i] = Some(VertexSet::from_unsorted(members));
            }
            "t" if toks.len() == 3 => edges.push((node(toks[1])?, node(toks[2])?)),
            "z" if toks.len() == 2 => {
                if anchor.is_some() {
                    return Err(err("anchor given twice".into()));
                }
                anchor = Some(node(toks[1])?);
            }
            _ => return Err(err(format!("unrecognised line {t:?}"))),
        }
    }
    let (_, n) = header.ok_or(TpParseError::MissingHeader)?;
    let parts = parts
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or(TpParseError::MissingPart(i + 1)))
        .collect::<Result<_, _>>()?;
    Ok(TreePartition {
        n,
        parts,
        edges,
        anchor,
    })
}
