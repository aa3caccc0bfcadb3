//! Exhaustive tree-partition-width for tiny graphs.
//!
//! A partition of `V(G)` is the vertex set of some `T`-partition exactly when
//! its quotient graph (parts as nodes, crossing edges as edges) is a forest;
//! any spanning tree through that forest then serves as `T`. Set partitions
//! are enumerated as restricted growth strings.

use crate::graph::{Graph, VertexSet};

use super::{TpError, TreePartition};

pub const EXACT_TPW_CAP: usize = 9;

/// Minimum width over all tree-partitions of `g`, with a witness.
pub fn exact_tpw(g: &Graph) -> Result<(usize, TreePartition), TpError> {
    exact_tpw_with_cap(g, EXACT_TPW_CAP)
}

pub fn exact_tpw_with_cap(g: &Graph, cap: usize) -> Result<(usize, TreePartition), TpError> {
    let n = g.n();
    if n > cap {
        return Err(TpError::TooLarge { n, cap });
    }
    if n == 0 {
        return Ok((
            0,
            TreePartition {
                n: 0,
                parts: Vec::new(),
                edges: Vec::new(),
                anchor: None,
            },
        ));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut search = Search {
        n,
        edges: &edges,
        label: vec![0; n],
        sizes: Vec::new(),
        best: n + 1,
        best_label: Vec::new(),
    };
    search.extend(0);
    let width = search.best;
    let labels = search.best_label;
    let count = labels.iter().max().map_or(0, |&m| m + 1);
    let mut parts = vec![Vec::new(); count];
    for (v, &l) in labels.iter().enumerate() {
        parts[l].push(v);
    }
    let tree = spanning_tree(count, &quotient_edges(&labels, &edges))
        .expect("best labelling has a forest quotient");
    Ok((
        width,
        TreePartition {
            n,
            parts: parts.into_iter().map(VertexSet::from_unsorted).collect(),
            edges: tree,
            anchor: None,
        },
    ))
}

struct Search<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    label: Vec<usize>,
    sizes: Vec<usize>,
    best: usize,
    best_label: Vec<usize>,
}

impl Search<'_> {
    fn extend(&mut self, v: usize) {
        if v == self.n {
            let width = self.sizes.iter().copied().max().unwrap_or(0);
            if width < self.best
                && spanning_tree(self.sizes.len(), &quotient_edges(&self.label, self.edges))
                    .is_some()
            {
                self.best = width;
                self.best_label = self.label.clone();
            }
            return;
        }
        for part in 0..=self.sizes.len() {
            let fresh = part == self.sizes.len();
            if fresh {
                self.sizes.push(0);
            }
            // parts of size `best - 1` cannot grow without losing to the incumbent
            if self.sizes[part] + 1 < self.best {
                self.sizes[part] += 1;
                self.label[v] = part;
                self.extend(v + 1);
                self.sizes[part] -= 1;
            }
            if fresh {
                self.sizes.pop();
            }
        }
    }
}

fn quotient_edges(label: &[usize], edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut q: Vec<(usize, usize)> = edges
        .iter()
        .filter(|&&(u, v)| label[u] != label[v])
        .map(|&(u, v)| (label[u].min(label[v]), label[u].max(label[v])))
        .collect();
    q.sort_unstable();
    q.dedup();
    q
}

/// Extends a forest on `count` nodes to a spanning tree by joining the
/// smallest node of each later component to node 0's component; `None` if
/// `forest` has a cycle.
fn spanning_tree(count: usize, forest: &[(usize, usize)]) -> Option<Vec<(usize, usize)>> {
    let mut parent: Vec<usize> = (0..count).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut tree = Vec::with_capacity(count.saturating_sub(1));
    for &(a, b) in forest {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return None;
        }
        parent[ra] = rb;
        tree.push((a, b));
    }
    for x in 1..count {
        let (r0, rx) = (find(&mut parent, 0), find(&mut parent, x));
        if r0 != rx {
            parent[rx] = r0;
            tree.push((0, x));
        }
    }
    Some(tree)
}
