//! The bounded-degree tree-partition construction.
//!
//! Given a decomposition with bags of size at most `k`, maximum degree at
//! most `d` and a rational `α > 2`, the construction recurses on vertex
//! subsets while maintaining an anchor set `S` with `⌈αk⌉ ≤ |S| ≤ ⌊3αkd⌋`:
//!
//! 1. `|V(G)| < αk` (no `S`): one node holding everything.
//! 2. `|V(G−S)|` within the width bound: two nodes, `S` and the rest.
//! 3. `|S| ≤ 3αk`: recurse on `G−S` anchored at the neighbourhood of `S`
//!    (padded to `⌈αk⌉`), then hang a new leaf `z` with part `S` off the
//!    child's anchor.
//! 4. otherwise: split along a median bag `X`, recurse on both sides with
//!    `S_i = (S ∩ V(G_i)) ∪ X`, and merge the two anchors.
//!
//! The recursion runs on an explicit stack. Every recursive call gets the
//! parent decomposition restricted to its vertex set.

use serde::Serialize;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::marks::Marks;
use crate::separator::separate;
use crate::treedecomp::{validate_td, TreeDecomposition};

use super::bounds::{bound_constants, AlphaParams, BoundSet, Rational};
use super::{validate_tp, TpError, TreePartition};

/// How often each case fired.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CaseCounts {
    pub case1: usize,
    pub case2: usize,
    pub case3: usize,
    pub case4: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub partition: TreePartition,
    pub bounds: BoundSet,
    pub cases: CaseCounts,
}

/// Builds a tree-partition of `g` with width at most `bounds.width` and tree
/// degree at most `bounds.degree`. When `s` is given the result is anchored
/// at a node containing `s`.
pub fn tree_partition(
    g: &Graph,
    td: &TreeDecomposition,
    params: &AlphaParams,
    s: Option<&VertexSet>,
) -> Result<TreePartition, TpError> {
    tree_partition_with_stats(g, td, params, s).map(|c| c.partition)
}

pub fn tree_partition_with_stats(
    g: &Graph,
    td: &TreeDecomposition,
    params: &AlphaParams,
    s: Option<&VertexSet>,
) -> Result<Construction, TpError> {
    let width = validate_td(g, td)?;
    let bounds = bound_constants(params);
    if width + 1 > params.k() {
        return Err(TpError::TdTooWide {
            width,
            k: params.k(),
        });
    }
    if g.max_degree() > params.d() {
        return Err(TpError::DegreeTooLarge {
            degree: g.max_degree(),
            d: params.d(),
        });
    }
    if let Some(s) = s {
        if let Some(v) = s.iter().find(|&v| v >= g.n()) {
            return Err(TpError::AnchorSetVertex(v));
        }
        let (min, max) = (bounds.s_min_count(), bounds.s_max_count());
        if s.len() < min || s.len() > max {
            return Err(TpError::AnchorSetSize {
                size: s.len(),
                min,
                max,
            });
        }
    }
    if g.n() == 0 {
        return Ok(Construction {
            partition: TreePartition {
                n: 0,
                parts: Vec::new(),
                edges: Vec::new(),
                anchor: None,
            },
            bounds,
            cases: CaseCounts::default(),
        });
    }

    let mut builder = Builder::new(g, &bounds);
    let root = builder.run(
        g.vertices().collect(),
        td.clone(),
        s.map(|s| s.as_slice().to_vec()),
    )?;
    let partition = TreePartition {
        n: g.n(),
        parts: root
            .parts
            .into_iter()
            .map(VertexSet::from_unsorted)
            .collect(),
        edges: root.edges,
        anchor: s.map(|_| root.anchor),
    };

    let stats = validate_tp(g, &partition)
        .map_err(|e| TpError::BoundViolated(format!("output is not a tree-partition: {e}")))?;
    if !bounds.width_ok(stats.width) {
        return Err(TpError::BoundViolated(format!(
            "width {} > {}",
            stats.width, bounds.width
        )));
    }
    if !bounds.degree_ok(stats.max_tree_degree) {
        return Err(TpError::BoundViolated(format!(
            "tree degree {} > {}",
            stats.max_tree_degree, bounds.degree
        )));
    }
    if let Some(s) = s {
        let z = root.anchor;
        let part = &partition.parts[z];
        if !s.is_subset(part) {
            return Err(TpError::BoundViolated(
                "S is not inside the anchor part".into(),
            ));
        }
        check_anchor(&bounds, s.len(), part.len(), root.degree[z])?;
    }
    let cases = builder.cases;
    Ok(Construction {
        partition,
        bounds,
        cases,
    })
}

fn int(x: usize) -> Rational {
    Rational::from_integer(x as i128)
}

fn check_anchor(b: &BoundSet, s_len: usize, part: usize, degree: usize) -> Result<(), TpError> {
    if int(part) > b.anchor_part(s_len) {
        return Err(TpError::BoundViolated(format!(
            "anchor part has {part} vertices, bound for |S| = {s_len} is {}",
            b.anchor_part(s_len)
        )));
    }
    if int(degree) > b.anchor_degree(s_len) {
        return Err(TpError::BoundViolated(format!(
            "anchor degree {degree}, bound for |S| = {s_len} is {}",
            b.anchor_degree(s_len)
        )));
    }
    Ok(())
}

/// Partial result: a tree-partition of some subgraph with its anchor node.
struct Sub {
    parts: Vec<Vec<Vertex>>,
    edges: Vec<(usize, usize)>,
    degree: Vec<usize>,
    anchor: usize,
}

enum Step {
    Solve {
        verts: Vec<Vertex>,
        td: TreeDecomposition,
        s: Option<Vec<Vertex>>,
    },
    /// Case 3 continuation: add leaf with part `s` next to the child's anchor.
    Attach { s: Vec<Vertex> },
    /// Case 4 continuation: merge the anchors of the two most recent results.
    Merge { s_len: usize },
}

struct Builder<'a> {
    g: &'a Graph,
    bounds: &'a BoundSet,
    member: Marks,
    scratch: Marks,
    cases: CaseCounts,
}

impl<'a> Builder<'a> {
    fn new(g: &'a Graph, bounds: &'a BoundSet) -> Self {
        Builder {
            g,
            bounds,
            member: Marks::new(g.n()),
            scratch: Marks::new(g.n()),
            cases: CaseCounts::default(),
        }
    }

    fn run(
        &mut self,
        verts: Vec<Vertex>,
        td: TreeDecomposition,
        s: Option<Vec<Vertex>>,
    ) -> Result<Sub, TpError> {
        let mut work = vec![Step::Solve { verts, td, s }];
        let mut results: Vec<Sub> = Vec::new();
        while let Some(step) = work.pop() {
            match step {
                Step::Solve { verts, td, s } => {
                    self.solve(verts, td, s, &mut work, &mut results)?
                }
                Step::Attach { s } => {
                    let mut sub = results.pop().expect("child result");
                    let z = sub.parts.len();
                    let child = sub.anchor;
                    sub.parts.push(s);
                    sub.degree.push(1);
                    sub.degree[child] += 1;
                    sub.edges.push((child, z));
                    if !self.bounds.degree_ok(sub.degree[child]) {
                        return Err(TpError::BoundViolated(format!(
                            "node degree {} after attaching a leaf",
                            sub.degree[child]
                        )));
                    }
                    sub.anchor = z;
                    results.push(sub);
                }
                Step::Merge { s_len } => {
                    let second = results.pop().expect("second child");
                    let mut first = results.pop().expect("first child");
                    merge(&mut first, second);
                    let z = first.anchor;
                    check_anchor(self.bounds, s_len, first.parts[z].len(), first.degree[z])?;
                    results.push(first);
                }
            }
        }
        debug_assert_eq!(results.len(), 1);
        Ok(results.pop().expect("root result"))
    }

    fn solve(
        &mut self,
        verts: Vec<Vertex>,
        td: TreeDecomposition,
        s: Option<Vec<Vertex>>,
        work: &mut Vec<Step>,
        results: &mut Vec<Sub>,
    ) -> Result<(), TpError> {
        let b = self.bounds;
        let s = match s {
            Some(s) => s,
            None if int(verts.len()) < b.s_min => {
                self.cases.case1 += 1;
                results.push(Sub {
                    parts: vec![verts],
                    edges: Vec::new(),
                    degree: vec![0],
                    anchor: 0,
                });
                return Ok(());
            }
            None => verts[..b.s_min_count()].to_vec(),
        };

        self.scratch.clear();
        for &v in &s {
            self.scratch.set(v);
        }
        let rest: Vec<Vertex> = verts
            .iter()
            .copied()
            .filter(|&v| !self.scratch.get(v))
            .collect();

        if int(rest.len()) <= b.width {
            self.cases.case2 += 1;
            let sub = if rest.is_empty() {
                Sub {
                    parts: vec![s],
                    edges: Vec::new(),
                    degree: vec![0],
                    anchor: 0,
                }
            } else {
                Sub {
                    parts: vec![s, rest],
                    edges: vec![(0, 1)],
                    degree: vec![1, 1],
                    anchor: 0,
                }
            };
            results.push(sub);
            return Ok(());
        }

        self.member.clear();
        for &v in &verts {
            self.member.set(v);
        }

        if int(s.len()) <= b.s_max / int(b.d) {
            // |S| ≤ 3αk
            self.cases.case3 += 1;
            // scratch marks S; extend it with the neighbourhood of S
            let mut next = Vec::new();
            for &v in &s {
                for &w in self.g.neighbors(v) {
                    if self.member.get(w) && !self.scratch.get(w) {
                        self.scratch.set(w);
                        next.push(w);
                    }
                }
            }
            let want = b.s_min_count();
            if next.len() < want {
                let missing = want - next.len();
                let pad: Vec<Vertex> = rest
                    .iter()
                    .copied()
                    .filter(|&v| !self.scratch.get(v))
                    .take(missing)
                    .collect();
                debug_assert_eq!(pad.len(), missing);
                next.extend(pad);
            }
            next.sort_unstable();
            self.member.clear();
            for &v in &rest {
                self.member.set(v);
            }
            let member = &self.member;
            let child_td = td.restrict(|v| member.get(v));
            work.push(Step::Attach { s });
            work.push(Step::Solve {
                verts: rest,
                td: child_td,
                s: Some(next),
            });
            return Ok(());
        }

        self.cases.case4 += 1;
        let s_set = VertexSet::from_unsorted(s);
        let sep = separate(self.g, &self.member, &verts, &td, &s_set, &mut self.scratch);
        let (min, max) = (b.s_min_count(), b.s_max_count());
        for (side, s_i) in [(&sep.side1, &sep.s1), (&sep.side2, &sep.s2)] {
            if side.is_empty() || s_i.len() < min || s_i.len() > max {
                return Err(TpError::BoundViolated(format!(
                    "separator split |S| = {} into a side with {} vertices and |S_i| = {} (allowed {}..={})",
                    s_set.len(),
                    side.len(),
                    s_i.len(),
                    min,
                    max
                )));
            }
        }
        let g1 = sep.subgraph(1).into_vec();
        let g2 = sep.subgraph(2).into_vec();
        debug_assert!(g1.len() < verts.len() && g2.len() < verts.len());
        let td_for = |members: &[Vertex], marks: &mut Marks| {
            marks.clear();
            for &v in members {
                marks.set(v);
            }
            td.restrict(|v| marks.get(v))
        };
        let td1 = td_for(&g1, &mut self.scratch);
        let td2 = td_for(&g2, &mut self.scratch);
        work.push(Step::Merge { s_len: s_set.len() });
        work.push(Step::Solve {
            verts: g2,
            td: td2,
            s: Some(sep.s2.into_vec()),
        });
        work.push(Step::Solve {
            verts: g1,
            td: td1,
            s: Some(sep.s1.into_vec()),
        });
        Ok(())
    }
}

/// Glues `second` onto `first`, identifying the two anchors. The merged node
/// keeps `first`'s id; `second`'s other nodes are appended in order.
fn merge(first: &mut Sub, second: Sub) {
    let z1 = first.anchor;
    let z2 = second.anchor;
    let offset = first.parts.len();
    let remap = |j: usize| -> usize {
        use std::cmp::Ordering::*;
        match j.cmp(&z2) {
            Equal => z1,
            Less => offset + j,
            Greater => offset + j - 1,
        }
    };
    for &(a, b) in &second.edges {
        first.edges.push((remap(a), remap(b)));
    }
    first.degree[z1] += second.degree[z2];
    for (j, (part, deg)) in second.parts.into_iter().zip(second.degree).enumerate() {
        if j == z2 {
            let merged = VertexSet::from_unsorted(part).union(&VertexSet::from_unsorted(
                std::mem::take(&mut first.parts[z1]),
            ));
            first.parts[z1] = merged.into_vec();
        } else {
            first.parts.push(part);
            first.degree.push(deg);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_fixture, gen_random_tree, FixtureKind};
    use crate::treedecomp::{exact_td_small, heuristic_td, TdStrategy};
    use crate::treepartition::bounds::alpha_int;
    use rand::SeedableRng;

    fn params(g: &Graph, td: &TreeDecomposition) -> AlphaParams {
        AlphaParams::new(alpha_int(), td.max_bag().max(1), g.max_degree().max(1)).unwrap()
    }

    #[test]
    fn single_vertex_is_case_one() {
        let g = Graph::new(1);
        let td = heuristic_td(&g, TdStrategy::MinFill);
        let c = tree_partition_with_stats(&g, &td, &params(&g, &td), None).unwrap();
        assert_eq!(c.partition.parts, vec![VertexSet::from_unsorted(vec![0])]);
        assert!(c.partition.edges.is_empty());
        assert_eq!(c.cases.case1, 1);
    }

    #[test]
    fn empty_graph() {
        let g = Graph::new(0);
        let td = heuristic_td(&g, TdStrategy::MinFill);
        let tp = tree_partition(&g, &td, &params(&g, &td), None).unwrap();
        assert!(tp.parts.is_empty());
    }

    #[test]
    fn cycle_eight_with_exact_td() {
        let g = gen_fixture(FixtureKind::Cycle, 8).unwrap();
        let td = exact_td_small(&g).unwrap();
        let p = params(&g, &td);
        assert_eq!((p.k(), p.d()), (3, 2));
        let tp = tree_partition(&g, &td, &p, None).unwrap();
        let stats = validate_tp(&g, &tp).unwrap();
        assert!(stats.width <= 102);
    }

    #[test]
    fn random_trees_hit_every_recursive_case() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let mut total = CaseCounts::default();
        for _ in 0..20 {
            let g = gen_random_tree(600, 5, &mut rng);
            let td = heuristic_td(&g, TdStrategy::MinDegree);
            let p = params(&g, &td);
            let c = tree_partition_with_stats(&g, &td, &p, None).unwrap();
            let stats = validate_tp(&g, &c.partition).unwrap();
            let d = p.d();
            assert!(stats.width <= 36 * d - 4);
            assert!(stats.max_tree_degree <= 6 * d);
            total.case2 += c.cases.case2;
            total.case3 += c.cases.case3;
            total.case4 += c.cases.case4;
        }
        assert!(
            total.case2 > 0 && total.case3 > 0 && total.case4 > 0,
            "{total:?}"
        );
    }

    #[test]
    fn precondition_errors() {
        let g = gen_fixture(FixtureKind::Star, 6).unwrap();
        let td = heuristic_td(&g, TdStrategy::MinDegree);
        let narrow = AlphaParams::new(alpha_int(), 1, 5).unwrap();
        assert!(matches!(
            tree_partition(&g, &td, &narrow, None),
            Err(TpError::TdTooWide { width: 1, k: 1 })
        ));
        let low_d = AlphaParams::new(alpha_int(), 2, 2).unwrap();
        assert!(matches!(
            tree_partition(&g, &td, &low_d, None),
            Err(TpError::DegreeTooLarge { degree: 5, d: 2 })
        ));
        let p = params(&g, &td);
        let small: VertexSet = (0..3).collect();
        assert!(matches!(
            tree_partition(&g, &td, &p, Some(&small)),
            Err(TpError::AnchorSetSize {
                size: 3,
                min: 8,
                max: 120
            })
        ));
    }

    #[test]
    fn anchored_output_contains_s() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let g = gen_random_tree(150, 4, &mut rng);
        let td = heuristic_td(&g, TdStrategy::MinFill);
        let p = params(&g, &td);
        let s: VertexSet = (20..60).collect();
        let tp = tree_partition(&g, &td, &p, Some(&s)).unwrap();
        let z = tp.anchor.unwrap();
        assert!(s.is_subset(&tp.parts[z]));
    }
}
