//! Reproducible graph corpora for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{
    gen_fixture, gen_grid, gen_random_bounded_degree, gen_random_partial_ktree, gen_random_tree,
    FixtureKind, Graph,
};
use crate::lowerbound::gen_complete_tree;

pub const DEFAULT_RANDOM_COUNT: usize = 120;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub graph: Graph,
}

/// Named fixtures: every fixture kind at a few sizes, grids and complete trees.
pub fn fixture_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let kinds = [
        (FixtureKind::Path, &[1usize, 2, 3, 9, 40][..]),
        (FixtureKind::Cycle, &[3, 4, 8, 31]),
        (FixtureKind::Complete, &[1, 2, 4, 7]),
        (FixtureKind::Star, &[2, 5, 9]),
        (FixtureKind::Fan, &[3, 6, 9, 30, 120]),
    ];
    for (kind, sizes) in kinds {
        for &n in sizes {
            out.push(CorpusEntry {
                name: format!("{kind}-{n}"),
                graph: gen_fixture(kind, n).expect("sizes above the minimum"),
            });
        }
    }
    for (r, c) in [(3, 3), (4, 10), (8, 8), (3, 60)] {
        out.push(CorpusEntry {
            name: format!("grid-{r}x{c}"),
            graph: gen_grid(r, c),
        });
    }
    for (delta, depth) in [(3, 2), (3, 5), (4, 3), (5, 3)] {
        out.push(CorpusEntry {
            name: format!("xtree-{delta}-{depth}"),
            graph: gen_complete_tree(delta, depth).expect("small").graph,
        });
    }
    out
}

/// `count` random graphs on at most 200 vertices with maximum degree at most
/// 8, cycling through random trees, partial k-trees and sparse random graphs.
pub fn random_corpus(seed: u64, count: usize) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.random_range(1..=200usize);
            let max_degree = rng.random_range(2..=8usize);
            let (name, graph) = match i % 3 {
                0 => ("tree", gen_random_tree(n, max_degree, &mut rng)),
                1 => {
                    let width = rng.random_range(1..=4usize);
                    let g = gen_random_partial_ktree(n, width, max_degree, 0.75, &mut rng);
                    ("ktree", g)
                }
                _ => {
                    let edges = n * max_degree / 3;
                    let g = gen_random_bounded_degree(n, edges, max_degree, &mut rng);
                    ("sparse", g)
                }
            };
            CorpusEntry {
                name: format!("{name}-{i:04}-n{n}-d{max_degree}"),
                graph,
            }
        })
        .collect()
}

/// Fixtures followed by [`DEFAULT_RANDOM_COUNT`] random graphs.
pub fn standard_corpus(seed: u64) -> Vec<CorpusEntry> {
    let mut out = fixture_corpus();
    out.extend(random_corpus(seed, DEFAULT_RANDOM_COUNT));
    out
}
