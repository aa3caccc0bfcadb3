//! Balanced separators from a tree-decomposition.
//!
//! A median bag `X` is found by descending the rooted bag tree towards any
//! subtree that owns more than half of `S`; afterwards every component of
//! `G - X` carries at most `⌊|S|/2⌋` vertices of `S`. The components are then
//! packed greedily (heaviest first, into the lighter side) into two sides.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::marks::Marks;
use crate::treedecomp::{validate_td, TdError, TreeDecomposition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeparatorError {
    #[error("invalid tree-decomposition: {0}")]
    InvalidTd(#[from] TdError),
    #[error("the weight set S is empty")]
    EmptyWeightSet,
    #[error("vertex {0} of S is not in the graph")]
    UnknownVertex(Vertex),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorResult {
    /// The chosen bag; the overlap of the two induced subgraphs.
    pub separator: VertexSet,
    pub side1: VertexSet,
    pub side2: VertexSet,
    /// `(S ∩ (side1 ∪ X)) ∪ X`
    pub s1: VertexSet,
    /// `(S ∩ (side2 ∪ X)) ∪ X`
    pub s2: VertexSet,
    /// Largest number of `S`-vertices in a single component of `G - X`.
    pub max_component_weight: usize,
}

impl SeparatorResult {
    /// Vertex set of `G_i`, i.e. `side_i ∪ X`.
    pub fn subgraph(&self, side: usize) -> VertexSet {
        match side {
            1 => self.side1.union(&self.separator),
            2 => self.side2.union(&self.separator),
            _ => panic!("side must be 1 or 2"),
        }
    }
}

/// Splits `g` along a bag of `td` so that each side holds a bounded share of `s`.
pub fn balanced_separator(
    g: &Graph,
    td: &TreeDecomposition,
    s: &VertexSet,
) -> Result<SeparatorResult, SeparatorError> {
    validate_td(g, td)?;
    if s.is_empty() {
        return Err(SeparatorError::EmptyWeightSet);
    }
    if let Some(v) = s.iter().find(|&v| v >= g.n()) {
        return Err(SeparatorError::UnknownVertex(v));
    }
    let mut member = Marks::new(g.n());
    for v in g.vertices() {
        member.set(v);
    }
    let verts: Vec<Vertex> = g.vertices().collect();
    let mut seen = Marks::new(g.n());
    Ok(separate(g, &member, &verts, td, s, &mut seen))
}

/// Core routine on the induced subgraph `g[verts]` (membership in `member`).
/// `td` must be a valid decomposition of that subgraph.
pub(crate) fn separate(
    g: &Graph,
    member: &Marks,
    verts: &[Vertex],
    td: &TreeDecomposition,
    s: &VertexSet,
    seen: &mut Marks,
) -> SeparatorResult {
    let bag = median_bag(td, s);
    let x = td.bags[bag].clone();

    seen.clear();
    for v in &x {
        seen.set(v);
    }
    let mut comps: Vec<(Vec<Vertex>, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    for &start in verts {
        if seen.get(start) {
            continue;
        }
        seen.set(start);
        queue.push_back(start);
        let mut comp = Vec::new();
        while let Some(u) = queue.pop_front() {
            comp.push(u);
            for &w in g.neighbors(u) {
                if member.get(w) && !seen.get(w) {
                    seen.set(w);
                    queue.push_back(w);
                }
            }
        }
        let weight = comp.iter().filter(|&&v| s.contains(v)).count();
        comps.push((comp, weight));
    }
    let max_component_weight = comps.iter().map(|c| c.1).max().unwrap_or(0);

    // Heaviest first; equal weights keep component order (smallest id first).
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by(|&a, &b| comps[b].1.cmp(&comps[a].1).then(a.cmp(&b)));
    let (mut side1, mut side2) = (Vec::new(), Vec::new());
    let (mut w1, mut w2) = (0usize, 0usize);
    for i in order {
        let (comp, weight) = &comps[i];
        if w1 <= w2 {
            side1.extend_from_slice(comp);
            w1 += weight;
        } else {
            side2.extend_from_slice(comp);
            w2 += weight;
        }
    }
    let side1 = VertexSet::from_unsorted(side1);
    let side2 = VertexSet::from_unsorted(side2);
    let s1 = side1
        .iter()
        .filter(|&v| s.contains(v))
        .collect::<VertexSet>()
        .union(&x);
    let s2 = side2
        .iter()
        .filter(|&v| s.contains(v))
        .collect::<VertexSet>()
        .union(&x);
    SeparatorResult {
        separator: x,
        side1,
        side2,
        s1,
        s2,
        max_component_weight,
    }
}

/// Bag whose removal leaves no component with more than half of `s`.
///
/// Rooting the bag tree at bag 0, a vertex of `s` is owned by the subtree of
/// the shallowest bag containing it. Walking down into a child whose subtree
/// owns more than `|s|/2` never needs to turn back, and the walk stops at a
/// bag where every direction owns at most half.
fn median_bag(td: &TreeDecomposition, s: &VertexSet) -> usize {
    let adj = td.tree_adjacency();
    let count = td.bags.len();
    let mut parent = vec![usize::MAX; count];
    let mut order = Vec::with_capacity(count);
    let mut visited = vec![false; count];
    visited[0] = true;
    order.push(0);
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for &y in &adj[x] {
            if !visited[y] {
                visited[y] = true;
                parent[y] = x;
                order.push(y);
            }
        }
    }
    let mut owned_by = vec![false; s.len()];
    let mut owned = vec![0usize; count];
    for &x in &order {
        for v in &td.bags[x] {
            if let Ok(i) = s.as_slice().binary_search(&v) {
                if !owned_by[i] {
                    owned_by[i] = true;
                    owned[x] += 1;
                }
            }
        }
    }
    for &x in order.iter().rev() {
        if parent[x] != usize::MAX {
            owned[parent[x]] += owned[x];
        }
    }
    let total = s.len();
    let mut t = 0;
    loop {
        let next = adj[t]
            .iter()
            .copied()
            .find(|&c| c != parent[t] && 2 * owned[c] > total);
        match next {
            Some(c) => t = c,
            None => return t,
        }
    }
}
