//! Tree-decompositions: validation, elimination-ordering heuristics, an exact
//! subset DP for small graphs, and PACE `.td` I/O.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

/// Size cap used by [`exact_td_small`].
pub const EXACT_TD_CAP: usize = 15;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TdError {
    #[error("decomposition has no bags")]
    NoBags,
    #[error("tree edge {0}-{1} references a missing bag")]
    BadTreeEdge(usize, usize),
    #[error("bag graph is not a tree: {0}")]
    NotATree(String),
    #[error("bag {bag} contains vertex {vertex}, which is not in the graph")]
    UnknownVertex { bag: usize, vertex: Vertex },
    #[error("decomposition is for {td} vertices but the graph has {graph}")]
    VertexCount { td: usize, graph: usize },
    #[error("vertex {0} appears in no bag")]
    Uncovered(Vertex),
    #[error("edge {0}-{1} is not contained in any bag")]
    UncoveredEdge(Vertex, Vertex),
    #[error("bags containing vertex {vertex} are disconnected (bags {a} and {b} lie in different pieces)")]
    DisconnectedTrace { vertex: Vertex, a: usize, b: usize },
    #[error("graph has {n} vertices, exact solver cap is {cap}")]
    TooLarge { n: usize, cap: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TdParseError {
    #[error("line {line}: malformed header: {msg}")]
    Header { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("missing `s td` header")]
    MissingHeader,
    #[error("bag {0} declared but never listed")]
    MissingBag(usize),
    #[error(transparent)]
    Structure(#[from] TdError),
}

/// Tree of bags over a host graph on `n` vertices. Bags are indexed `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub n: usize,
    pub bags: Vec<VertexSet>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size; this is `k` in the construction's bounds (never below 1).
    pub fn max_bag(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Width: largest bag minus one, saturating at zero.
    pub fn width(&self) -> usize {
        self.max_bag().saturating_sub(1)
    }

    pub fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Restricts every bag to the vertices accepted by `keep`, drops bags that
    /// become empty and contracts them into a neighbour so the result stays a
    /// tree. If every bag empties, a single empty bag remains.
    pub fn restrict(&self, keep: impl Fn(Vertex) -> bool) -> TreeDecomposition {
        let bags: Vec<VertexSet> = self
            .bags
            .iter()
            .map(|b| b.iter().filter(|&v| keep(v)).collect())
            .collect();
        let Some(root) = bags.iter().position(|b| !b.is_empty()) else {
            return TreeDecomposition {
                n: self.n,
                bags: vec![VertexSet::new()],
                edges: Vec::new(),
            };
        };
        let adj = self.tree_adjacency();
        let mut new_id = vec![usize::MAX; bags.len()];
        // representative of the nearest kept ancestor (inclusive)
        let mut rep = vec![usize::MAX; bags.len()];
        let mut out_bags = Vec::new();
        let mut out_edges = Vec::new();
        let mut queue = VecDeque::new();
        new_id[root] = 0;
        rep[root] = 0;
        out_bags.push(bags[root].clone());
        let mut visited = vec![false; bags.len()];
        visited[root] = true;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if visited[y] {
                    continue;
                }
                visited[y] = true;
                if bags[y].is_empty() {
                    rep[y] = rep[x];
                } else {
                    let id = out_bags.len();
                    new_id[y] = id;
                    rep[y] = id;
                    out_bags.push(bags[y].clone());
                    out_edges.push((rep[x], id));
                }
                queue.push_back(y);
            }
        }
        TreeDecomposition {
            n: self.n,
            bags: out_bags,
            edges: out_edges,
        }
    }
}

/// Checks that the bag graph is a tree on `count` nodes.
pub(crate) fn check_tree(count: usize, edges: &[(usize, usize)]) -> Result<(), String> {
    if count == 0 {
        return Err("no nodes".into());
    }
    if edges.len() != count - 1 {
        return Err(format!("{} nodes but {} edges", count, edges.len()));
    }
    let mut parent: Vec<usize> = (0..count).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return Err(format!("edge {a}-{b} closes a cycle"));
        }
        parent[ra] = rb;
    }
    Ok(())
}

/// Validates `td` against `g` and returns its width.
pub fn validate_td(g: &Graph, td: &TreeDecomposition) -> Result<usize, TdError> {
    if td.bags.is_empty() {
        return Err(TdError::NoBags);
    }
    if td.n != g.n() {
        return Err(TdError::VertexCount {
            td: td.n,
            graph: g.n(),
        });
    }
    for &(a, b) in &td.edges {
        if a >= td.bags.len() || b >= td.bags.len() || a == b {
            return Err(TdError::BadTreeEdge(a, b));
        }
    }
    check_tree(td.bags.len(), &td.edges).map_err(TdError::NotATree)?;

    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, bag) in td.bags.iter().enumerate() {
        for v in bag {
            if v >= g.n() {
                return Err(TdError::UnknownVertex { bag: i, vertex: v });
            }
            occurrences[v].push(i);
        }
    }
    for (u, v) in g.edges() {
        let (a, b) = (&occurrences[u], &occurrences[v]);
        let shared = if a.len() <= b.len() {
            a.iter().any(|&x| td.bags[x].contains(v))
        } else {
            b.iter().any(|&x| td.bags[x].contains(u))
        };
        if !shared {
            return Err(TdError::UncoveredEdge(u, v));
        }
    }
    // A vertex trace is connected iff it spans (|trace| - 1) tree edges.
    let mut inner_edges = vec![0usize; g.n()];
    for &(a, b) in &td.edges {
        let (small, large) = if td.bags[a].len() <= td.bags[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        for v in &td.bags[small] {
            if td.bags[large].contains(v) {
                inner_edges[v] += 1;
            }
        }
    }
    for v in g.vertices() {
        let occ = &occurrences[v];
        if occ.is_empty() {
            return Err(TdError::Uncovered(v));
        }
        if inner_edges[v] + 1 != occ.len() {
            let (a, b) = disconnected_witness(td, v, occ);
            return Err(TdError::DisconnectedTrace { vertex: v, a, b });
        }
    }
    Ok(td.width())
}

fn disconnected_witness(td: &TreeDecomposition, v: Vertex, occ: &[usize]) -> (usize, usize) {
    let adj = td.tree_adjacency();
    let mut seen = vec![false; td.bags.len()];
    let mut queue = VecDeque::from([occ[0]]);
    seen[occ[0]] = true;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] && td.bags[y].contains(v) {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    let b = occ.iter().copied().find(|&x| !seen[x]).unwrap_or(occ[0]);
    (occ[0], b)
}

// ---------------------------------------------------------------------------
// Construction from elimination orderings
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TdStrategy {
    MinFill,
    MinDegree,
}

impl fmt::Display for TdStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TdStrategy::MinFill => "min-fill",
            TdStrategy::MinDegree => "min-degree",
        })
    }
}

impl FromStr for TdStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min-fill" => Ok(TdStrategy::MinFill),
            "min-degree" => Ok(TdStrategy::MinDegree),
            other => Err(format!("unknown strategy {other:?}")),
        }
    }
}

/// Builds the decomposition induced by eliminating vertices in `order`.
///
/// Bag `i` is the `i`-th eliminated vertex together with its neighbours in
/// the filled graph at elimination time; its parent is the bag of the
/// earliest-eliminated such neighbour. Roots of different components are
/// joined to the first root.
pub fn td_from_elimination_order(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let n = g.n();
    assert_eq!(order.len(), n, "elimination order must list every vertex");
    if n == 0 {
        return TreeDecomposition {
            n,
            bags: vec![VertexSet::new()],
            edges: Vec::new(),
        };
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut adj: Vec<BTreeSet<Vertex>> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<Vertex> = adj[v].iter().copied().collect();
        for (a, &x) in later.iter().enumerate() {
            adj[x].remove(&v);
            for &y in &later[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        parent[i] = later.iter().map(|&x| position[x]).min();
        let mut bag = later;
        bag.push(v);
        bags.push(VertexSet::from_unsorted(bag));
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut first_root = None;
    for (i, p) in parent.iter().enumerate() {
        match (p, first_root) {
            (Some(p), _) => edges.push((i, *p)),
            (None, None) => first_root = Some(i),
            (None, Some(r)) => edges.push((r, i)),
        }
    }
    TreeDecomposition { n, bags, edges }
}

/// Greedy elimination ordering; ties go to the smallest vertex id.
pub fn elimination_order(g: &Graph, strategy: TdStrategy) -> Vec<Vertex> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<Vertex>> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let score = |adj: &[BTreeSet<Vertex>], v: Vertex| -> usize {
        match strategy {
            TdStrategy::MinDegree => adj[v].len(),
            TdStrategy::MinFill => {
                let ns: Vec<Vertex> = adj[v].iter().copied().collect();
                let mut missing = 0;
                for (i, &a) in ns.iter().enumerate() {
                    for &b in &ns[i + 1..] {
                        if !adj[a].contains(&b) {
                            missing += 1;
                        }
                    }
                }
                missing
            }
        }
    };
    let mut current: Vec<usize> = (0..n).map(|v| score(&adj, v)).collect();
    let mut queue: BTreeSet<(usize, Vertex)> = (0..n).map(|v| (current[v], v)).collect();
    let mut eliminated = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while let Some((_, v)) = queue.pop_first() {
        eliminated[v] = true;
        order.push(v);
        let ns: Vec<Vertex> = adj[v].iter().copied().collect();
        for (i, &a) in ns.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &ns[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        // Scores can only change within distance two of v.
        let mut touched: BTreeSet<Vertex> = ns.iter().copied().collect();
        if strategy == TdStrategy::MinFill {
            for &a in &ns {
                touched.extend(adj[a].iter().copied());
            }
        }
        for u in touched {
            if eliminated[u] {
                continue;
            }
            let s = score(&adj, u);
            if s != current[u] {
                queue.remove(&(current[u], u));
                current[u] = s;
                queue.insert((s, u));
            }
        }
    }
    order
}

/// Heuristic decomposition from a greedy elimination ordering.
pub fn heuristic_td(g: &Graph, strategy: TdStrategy) -> TreeDecomposition {
    td_from_elimination_order(g, &elimination_order(g, strategy))
}

/// Minimum-width decomposition by dynamic programming over vertex subsets.
pub fn exact_td_small(g: &Graph) -> Result<TreeDecomposition, TdError> {
    exact_td_with_cap(g, EXACT_TD_CAP)
}

/// [`exact_td_small`] with an explicit size cap (at most 25).
pub fn exact_td_with_cap(g: &Graph, cap: usize) -> Result<TreeDecomposition, TdError> {
    let n = g.n();
    if n > cap.min(25) {
        return Err(TdError::TooLarge { n, cap });
    }
    let order = exact_elimination_order(g);
    Ok(td_from_elimination_order(g, &order))
}

/// Vertices outside `eliminated ∪ {v}` reachable from `v` through `eliminated`.
fn q_set(nbr: &[u32], eliminated: u32, v: usize) -> u32 {
    let mut reach = 1u32 << v;
    let mut frontier = reach;
    let mut out = 0u32;
    while frontier != 0 {
        let u = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let ns = nbr[u] & !reach;
        reach |= ns;
        out |= ns & !eliminated;
        frontier |= ns & eliminated;
    }
    out & !(1u32 << v)
}

/// `best[S]` is the least possible maximum |Q| when the set `S` is
/// eliminated first; the optimal order is recovered by walking back from
/// the full set.
fn exact_elimination_order(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    let nbr: Vec<u32> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut best = vec![u8::MAX; 1usize << n];
    let mut choice = vec![0u8; 1usize << n];
    best[0] = 0;
    for set in 1..=full {
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = set & !(1 << v);
            let cost = best[prev as usize].max(q_set(&nbr, prev, v).count_ones() as u8);
            if cost < best[set as usize] {
                best[set as usize] = cost;
                choice[set as usize] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut set = full;
    while set != 0 {
        let v = choice[set as usize];
        order.push(v as usize);
        set &= !(1 << v);
    }
    order.reverse();
    order
}

// ---------------------------------------------------------------------------
// PACE `.td` I/O
// ---------------------------------------------------------------------------

pub fn write_td(td: &TreeDecomposition) -> String {
    let mut out = format!("s td {} {} {}\n", td.bags.len(), td.max_bag(), td.n);
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

pub fn parse_td(text: &str) -> Result<TreeDecomposition, TdParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<VertexSet>> = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        let line_err = |msg: String| TdParseError::Line { line, msg };
        let num = |s: &str| -> Result<usize, TdParseError> {
            s.parse().map_err(|_| TdParseError::Line {
                line,
                msg: format!("bad number {s:?}"),
            })
        };
        match toks[0] {
            "s" => {
                if header.is_some() {
                    return Err(TdParseError::Header {
                        line,
                        msg: "second header".into(),
                    });
                }
                if toks.len() != 5 || toks[1] != "td" {
                    return Err(TdParseError::Header {
                        line,
                        msg: "expected `s td <bags> <maxbag> <n>`".into(),
                    });
                }
                let h = (num(toks[2])?, num(toks[3])?, num(toks[4])?);
                bags = vec![None; h.0];
                header = Some(h);
            }
            "b" => {
                let (count, _, n) = header.ok_or(TdParseError::MissingHeader)?;
                if toks.len() < 2 {
                    return Err(line_err("bag line without index".into()));
                }
                let i = num(toks[1])?;
                if i == 0 || i > count {
                    return Err(line_err(format!("bag index {i} out of range 1..={count}")));
                }
                if bags[i - 1].is_some() {
                    return Err(line_err(format!("bag {i} listed twice")));
                }
                let mut members = Vec::with_capacity(toks.len() - 2);
                for tok in &toks[2..] {
                    let v = num(tok)?;
                    if v == 0 || v > n {
                        return Err(line_err(format!("vertex {v} out of range 1..={n}")));
                    }
                    members.push(v - 1);
                }
                bags[i - 1] = Some(VertexSet::from_unsorted(members));
            }
            _ => {
                let (count, _, _) = header.ok_or(TdParseError::MissingHeader)?;
                if toks.len() != 2 {
                    return Err(line_err(format!("malformed tree edge {t:?}")));
                }
                let (a, b) = (num(toks[0])?, num(toks[1])?);
                for x in [a, b] {
                    if x == 0 || x > count {
                        return Err(line_err(format!("bag index {x} out of range 1..={count}")));
                    }
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let (count, max_bag, n) = header.ok_or(TdParseError::MissingHeader)?;
    let bags: Vec<VertexSet> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or(TdParseError::MissingBag(i + 1)))
        .collect::<Result<_, _>>()?;
    let td = TreeDecomposition { n, bags, edges };
    if count == 0 {
        return Err(TdError::NoBags.into());
    }
    if td.max_bag() != max_bag {
        return Err(TdParseError::Header {
            line: 1,
            msg: format!("declared max bag size {max_bag}, found {}", td.max_bag()),
        });
    }
    check_tree(count, &td.edges).map_err(TdError::NotATree)?;
    Ok(td)
}
