//! Simple undirected graphs with dense `0..n` vertex ids, the PACE `.gr` and
//! plain edge-list text formats, and the fixture generators used throughout
//! the crate.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("{kind} requires at least {min} vertices, got {n}")]
    TooSmall {
        kind: FixtureKind,
        min: usize,
        n: usize,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed header: {msg}")]
    Header { line: usize, msg: String },
    #[error("line {line}: malformed edge line {text:?}")]
    Edge { line: usize, text: String },
    #[error("line {line}: vertex id {id} out of range 1..={n}")]
    OutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: self-loop on vertex {id}")]
    SelfLoop { line: usize, id: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("header declares {declared} edges but {found} distinct edges were read")]
    EdgeCount { declared: usize, found: usize },
    #[error("missing header line")]
    MissingHeader,
}

/// Simple undirected graph. Adjacency lists are kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge iterator, merging repeated edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Inserts `uv`. Returns `Ok(false)` if the edge was already present.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool, GraphError> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.m += 1;
                Ok(true)
            }
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            out.push(VertexSet::from_unsorted(comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn from_unsorted(mut v: Vec<Vertex>) -> Self {
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> std::iter::Copied<std::slice::Iter<'_, Vertex>> {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        VertexSet(out)
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.iter().filter(|&v| other.contains(v)).count()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet::from_unsorted(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = Vertex;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Vertex>>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    /// PACE 2017 `.gr`: `p tw n m` header, 1-based `u v` lines, `c` comments.
    PaceGr,
    /// `u v` per line, 0-based ids, `n` inferred from the largest id.
    EdgeList,
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pace-gr" | "gr" => Ok(GraphFormat::PaceGr),
            "edge-list" | "edges" => Ok(GraphFormat::EdgeList),
            other => Err(format!("unknown graph format {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ParseMode {
    /// Duplicate edges are merged and an edge-count mismatch is only a warning.
    #[default]
    Lenient,
    /// Duplicate edges and edge-count mismatches are errors.
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseWarning {
    DuplicateEdge { line: usize, u: usize, v: usize },
    EdgeCount { declared: usize, found: usize },
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseWarning::DuplicateEdge { line, u, v } => {
                write!(f, "line {line}: duplicate edge {u} {v} merged")
            }
            ParseWarning::EdgeCount { declared, found } => write!(
                f,
                "header declares {declared} edges but {found} distinct edges were read"
            ),
        }
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph, ParseError> {
    parse_graph_with(text, format, ParseMode::Lenient).map(|(g, _)| g)
}

/// Parses `text`, returning the graph together with any lenient-mode warnings.
pub fn parse_graph_with(
    text: &str,
    format: GraphFormat,
    mode: ParseMode,
) -> Result<(Graph, Vec<ParseWarning>), ParseError> {
    match format {
        GraphFormat::PaceGr => parse_pace_gr(text, mode),
        GraphFormat::EdgeList => parse_edge_list(text, mode),
    }
}

fn parse_pair(line: usize, raw: &str) -> Result<(usize, usize), ParseError> {
    let bad = || ParseError::Edge {
        line,
        text: raw.to_string(),
    };
    let mut it = raw.split_whitespace();
    let u = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    let v = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((u, v))
}

fn insert_parsed(
    g: &mut Graph,
    line: usize,
    (u, v): (usize, usize),
    shown: (usize, usize),
    mode: ParseMode,
    warnings: &mut Vec<ParseWarning>,
) -> Result<(), ParseError> {
    if u == v {
        return Err(ParseError::SelfLoop { line, id: shown.0 });
    }
    let fresh = g.add_edge(u, v).expect("ids were range-checked");
    if !fresh {
        match mode {
            ParseMode::Strict => {
                return Err(ParseError::DuplicateEdge {
                    line,
                    u: shown.0,
                    v: shown.1,
                })
            }
            ParseMode::Lenient => warnings.push(ParseWarning::DuplicateEdge {
                line,
                u: shown.0,
                v: shown.1,
            }),
        }
    }
    Ok(())
}

fn parse_pace_gr(text: &str, mode: ParseMode) -> Result<(Graph, Vec<ParseWarning>), ParseError> {
    let mut warnings = Vec::new();
    let mut graph: Option<(Graph, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if graph.is_some() {
                return Err(ParseError::Header {
                    line,
                    msg: "second header line".into(),
                });
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            let header_err = |msg: &str| ParseError::Header {
                line,
                msg: msg.to_string(),
            };
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "tw" {
                return Err(header_err("expected `p tw <n> <m>`"));
            }
            let n: usize = toks[2]
                .parse()
                .map_err(|_| header_err("bad vertex count"))?;
            let m: usize = toks[3].parse().map_err(|_| header_err("bad edge count"))?;
            graph = Some((Graph::new(n), m));
            continue;
        }
        let (g, _) = graph.as_mut().ok_or(ParseError::MissingHeader)?;
        let (a, b) = parse_pair(line, trimmed)?;
        let n = g.n();
        for id in [a, b] {
            if id == 0 || id > n {
                return Err(ParseError::OutOfRange { line, id, n });
            }
        }
        insert_parsed(g, line, (a - 1, b - 1), (a, b), mode, &mut warnings)?;
    }
    let (g, declared) = graph.ok_or(ParseError::MissingHeader)?;
    if declared != g.m() {
        match mode {
            ParseMode::Strict => {
                return Err(ParseError::EdgeCount {
                    declared,
                    found: g.m(),
                })
            }
            ParseMode::Lenient => warnings.push(ParseWarning::EdgeCount {
                declared,
                found: g.m(),
            }),
        }
    }
    Ok((g, warnings))
}

fn parse_edge_list(text: &str, mode: ParseMode) -> Result<(Graph, Vec<ParseWarning>), ParseError> {
    let mut pairs = Vec::new();
    let mut n = 0;
    for (idx, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (u, v) = parse_pair(idx + 1, trimmed)?;
        n = n.max(u + 1).max(v + 1);
        pairs.push((idx + 1, u, v));
    }
    let mut g = Graph::new(n);
    let mut warnings = Vec::new();
    for (line, u, v) in pairs {
        insert_parsed(&mut g, line, (u, v), (u, v), mode, &mut warnings)?;
    }
    Ok((g, warnings))
}

/// Serializes `g`; edges are emitted in lexicographic order.
pub fn write_graph(g: &Graph, format: GraphFormat) -> String {
    let mut out = String::new();
    match format {
        GraphFormat::PaceGr => {
            out.push_str(&format!("p tw {} {}\n", g.n(), g.m()));
            for (u, v) in g.edges() {
                out.push_str(&format!("{} {}\n", u + 1, v + 1));
            }
        }
        GraphFormat::EdgeList => {
            for (u, v) in g.edges() {
                out.push_str(&format!("{u} {v}\n"));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixtureKind {
    Path,
    Cycle,
    Complete,
    Star,
    Fan,
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FixtureKind::Path => "path",
            FixtureKind::Cycle => "cycle",
            FixtureKind::Complete => "complete",
            FixtureKind::Star => "star",
            FixtureKind::Fan => "fan",
        };
        f.write_str(s)
    }
}

impl FromStr for FixtureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "path" => Ok(FixtureKind::Path),
            "cycle" => Ok(FixtureKind::Cycle),
            "complete" => Ok(FixtureKind::Complete),
            "star" => Ok(FixtureKind::Star),
            "fan" => Ok(FixtureKind::Fan),
            other => Err(format!("unknown fixture kind {other:?}")),
        }
    }
}

/// Named fixture on `n` vertices.
///
/// The star centre is vertex 0; the fan is the path `0..n-1` plus the apex
/// `n-1` adjacent to every path vertex.
pub fn gen_fixture(kind: FixtureKind, n: usize) -> Result<Graph, GraphError> {
    let min = if kind == FixtureKind::Cycle { 3 } else { 1 };
    if n < min {
        return Err(GraphError::TooSmall { kind, min, n });
    }
    let edges: Vec<(Vertex, Vertex)> = match kind {
        FixtureKind::Path => (1..n).map(|v| (v - 1, v)).collect(),
        FixtureKind::Cycle => (0..n).map(|v| (v, (v + 1) % n)).collect(),
        FixtureKind::Complete => (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect(),
        FixtureKind::Star => (1..n).map(|v| (0, v)).collect(),
        FixtureKind::Fan => {
            let apex = n - 1;
            (1..apex)
                .map(|v| (v - 1, v))
                .chain((0..apex).map(|v| (v, apex)))
                .collect()
        }
    };
    Graph::from_edges(n, edges)
}

/// `rows x cols` grid graph, row-major numbering.
pub fn gen_grid(rows: usize, cols: usize) -> Graph {
    let mut g = Graph::new(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                g.add_edge(v, v + 1).unwrap();
            }
            if r + 1 < rows {
                g.add_edge(v, v + cols).unwrap();
            }
        }
    }
    g
}

/// Uniformly attached random tree whose degrees never exceed `max_degree`
/// (`max_degree >= 2`, or `n <= 2`).
pub fn gen_random_tree<R: Rng + ?Sized>(n: usize, max_degree: usize, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    let mut open: Vec<Vertex> = Vec::new();
    for v in 0..n {
        if v > 0 {
            let i = rng.random_range(0..open.len());
            let parent = open[i];
            g.add_edge(parent, v).unwrap();
            if g.degree(parent) >= max_degree {
                open.swap_remove(i);
            }
        }
        if max_degree > g.degree(v) {
            open.push(v);
        }
    }
    g
}

/// Random partial `width`-tree: vertices attach to a random `width`-clique of
/// earlier vertices and keep each attachment edge with probability `keep`;
/// edges that would exceed `max_degree` are skipped. Treewidth is at most
/// `width`.
pub fn gen_random_partial_ktree<R: Rng + ?Sized>(
    n: usize,
    width: usize,
    max_degree: usize,
    keep: f64,
    rng: &mut R,
) -> Graph {
    let mut g = Graph::new(n);
    let mut cliques: Vec<Vec<Vertex>> = Vec::new();
    let base = (width + 1).min(n);
    let first: Vec<Vertex> = (0..base).collect();
    for i in 0..base {
        for j in i + 1..base {
            if rng.random_bool(keep) && g.degree(i) < max_degree && g.degree(j) < max_degree {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    if base > width {
        for skip in 0..base {
            cliques.push(
                first
                    .iter()
                    .copied()
                    .filter(|&v| v != first[skip])
                    .collect(),
            );
        }
    } else {
        cliques.push(first);
    }
    for v in base..n {
        let clique = cliques[rng.random_range(0..cliques.len())].clone();
        for &u in &clique {
            if rng.random_bool(keep) && g.degree(u) < max_degree && g.degree(v) < max_degree {
                g.add_edge(u, v).unwrap();
            }
        }
        for skip in 0..clique.len() {
            let mut c: Vec<Vertex> = clique
                .iter()
                .copied()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, u)| u)
                .collect();
            c.push(v);
            cliques.push(c);
        }
    }
    g
}

/// Random graph with `edges` attempted uniform edge insertions, rejecting
/// self-loops, repeats and any edge exceeding `max_degree`.
pub fn gen_random_bounded_degree<R: Rng + ?Sized>(
    n: usize,
    edges: usize,
    max_degree: usize,
    rng: &mut R,
) -> Graph {
    let mut g = Graph::new(n);
    if n < 2 {
        return g;
    }
    for _ in 0..edges {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v && g.degree(u) < max_degree && g.degree(v) < max_degree {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}
