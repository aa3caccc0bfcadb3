use proptest::prelude::*;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treepart::corpus::{fixture_corpus, random_corpus, CorpusEntry};
use treepart::graph::gen_random_partial_ktree;
use treepart::treepartition::{exact_tpw, Rational};
use treepart::{
    alpha_int, alpha_opt, bound_constants, gen_fixture, heuristic_td, normalize_tp, parse_tp,
    td_from_tp, tree_partition, tree_partition_with_stats, validate_td, validate_tp, write_tp,
    AlphaParams, FixtureKind, Graph, TdStrategy, VertexSet,
};

fn params(g: &Graph, td_bag: usize, alpha: Rational) -> AlphaParams {
    AlphaParams::new(alpha, td_bag.max(1), g.max_degree().max(1)).unwrap()
}

fn corpus() -> Vec<CorpusEntry> {
    let mut c = fixture_corpus();
    c.extend(random_corpus(21, 90));
    c
}

#[test]
fn soundness_both_presets() {
    for e in corpus() {
        let g = &e.graph;
        let td = heuristic_td(g, TdStrategy::MinFill);
        for alpha in [alpha_int(), alpha_opt()] {
            let p = params(g, td.max_bag(), alpha);
            let b = bound_constants(&p);
            let c = tree_partition_with_stats(g, &td, &p, None)
                .unwrap_or_else(|err| panic!("{}: {err}", e.name));
            let stats = validate_tp(g, &c.partition).unwrap();
            assert!(stats.width <= b.width_floor(), "{}", e.name);
            assert!(stats.max_tree_degree <= b.degree_floor(), "{}", e.name);
            if alpha == alpha_int() {
                let (k, d) = (p.k(), p.d());
                assert!(stats.width <= 18 * k * d - 2 * k);
                assert!(stats.max_tree_degree <= 6 * d);
            }
        }
    }
}

#[test]
fn anchor_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    while checked < 60 {
        let n = rng.random_range(20..=200usize);
        let width = rng.random_range(1..=3usize);
        let g = gen_random_partial_ktree(n, width, rng.random_range(2..=6), 0.8, &mut rng);
        let td = heuristic_td(&g, TdStrategy::MinDegree);
        for alpha in [alpha_int(), alpha_opt()] {
            let p = params(&g, td.max_bag(), alpha);
            let b = bound_constants(&p);
            let (lo, hi) = (b.s_min_count(), b.s_max_count().min(n));
            if lo > hi {
                continue;
            }
            let size = rng.random_range(lo..=hi);
            let s: VertexSet = sample(&mut rng, n, size).into_iter().collect();
            let tp = tree_partition(&g, &td, &p, Some(&s)).unwrap();
            let z = tp.anchor.expect("anchored");
            assert!(s.is_subset(&tp.parts[z]));
            assert!(Rational::from_integer(tp.parts[z].len() as i128) <= b.anchor_part(size));
            let deg = tp.tree_degrees()[z];
            assert!(Rational::from_integer(deg as i128) <= b.anchor_degree(size));
            checked += 1;
        }
    }
}

#[test]
fn every_case_fires_on_larger_sparse_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut total = [0usize; 4];
    for _ in 0..10 {
        let g = gen_random_partial_ktree(700, 1, 5, 1.0, &mut rng);
        let td = heuristic_td(&g, TdStrategy::MinDegree);
        let c = tree_partition_with_stats(&g, &td, &params(&g, td.max_bag(), alpha_int()), None)
            .unwrap();
        total[0] += c.cases.case1;
        total[1] += c.cases.case2;
        total[2] += c.cases.case3;
        total[3] += c.cases.case4;
    }
    assert!(total.iter().skip(1).all(|&c| c > 0), "{total:?}");
}

#[test]
fn deterministic_output() {
    for e in random_corpus(8, 20) {
        let td = heuristic_td(&e.graph, TdStrategy::MinFill);
        let p = params(&e.graph, td.max_bag(), alpha_opt());
        let a = write_tp(&tree_partition(&e.graph, &td, &p, None).unwrap());
        let b = write_tp(&tree_partition(&e.graph, &td, &p, None).unwrap());
        assert_eq!(a, b);
        assert_eq!(write_tp(&parse_tp(&a).unwrap()), a);
    }
}

#[test]
fn fan_tpw_grows_monotonically() {
    // brute-force values computed independently
    let expected = [(4, 2), (5, 2), (6, 2), (7, 3), (8, 3), (9, 3)];
    let mut last = 0;
    for (n, w) in expected {
        let g = gen_fixture(FixtureKind::Fan, n).unwrap();
        let (tpw, tp) = exact_tpw(&g).unwrap();
        assert_eq!(tpw, w, "fan-{n}");
        assert_eq!(validate_tp(&g, &tp).unwrap().width, w);
        assert!(tpw >= last);
        last = tpw;
    }
}

#[test]
fn small_known_tpw() {
    for n in 1..=7 {
        let g = gen_fixture(FixtureKind::Complete, n).unwrap();
        assert_eq!(exact_tpw(&g).unwrap().0, n.div_ceil(2).max(1), "K{n}");
    }
    for n in 3..=9 {
        assert_eq!(
            exact_tpw(&gen_fixture(FixtureKind::Cycle, n).unwrap())
                .unwrap()
                .0,
            2
        );
    }
}

fn connected_small() -> impl Strategy<Value = Graph> {
    (2usize..=8).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<prop::sample::Index>(), n - 1),
            prop::collection::vec((0..n, 0..n), 0..n + 2),
        )
            .prop_map(move |(parents, extra)| {
                let mut g = Graph::new(n);
                for (v, p) in parents.iter().enumerate() {
                    g.add_edge(p.index(v + 1), v + 1).unwrap();
                }
                for (u, v) in extra {
                    if u != v {
                        g.add_edge(u, v).unwrap();
                    }
                }
                g
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn oracle_sandwich(g in connected_small()) {
        let (tpw, witness) = exact_tpw(&g).unwrap();
        prop_assert_eq!(validate_tp(&g, &witness).unwrap().width, tpw);
        let td = heuristic_td(&g, TdStrategy::MinFill);
        let tp = tree_partition(&g, &td, &params(&g, td.max_bag(), alpha_int()), None).unwrap();
        prop_assert!(tpw <= validate_tp(&g, &tp).unwrap().width);
        let tw = validate_td(&g, &td_from_tp(&g, &witness).unwrap()).unwrap();
        prop_assert!(tw < 2 * tpw);
    }

    #[test]
    fn td_from_algorithm_output(g in connected_small()) {
        let td = heuristic_td(&g, TdStrategy::MinDegree);
        let tp = tree_partition(&g, &td, &params(&g, td.max_bag(), alpha_opt()), None).unwrap();
        let w = validate_tp(&g, &tp).unwrap().width;
        let back = td_from_tp(&g, &tp).unwrap();
        prop_assert!(validate_td(&g, &back).unwrap() < 2 * w);
    }
}

#[test]
fn normalize_respects_caps() {
    for e in corpus() {
        let g = &e.graph;
        let delta = g.max_degree();
        let td = heuristic_td(g, TdStrategy::MinFill);
        let tp = tree_partition(g, &td, &params(g, td.max_bag(), alpha_int()), None).unwrap();
        let witness = if g.n() <= 9 {
            Some(exact_tpw(g).unwrap().1)
        } else {
            None
        };
        for tp in std::iter::once(tp).chain(witness) {
            let norm = normalize_tp(g, &tp).unwrap();
            validate_tp(g, &norm).unwrap();
            assert_eq!(norm.parts, tp.parts);
            for (x, deg) in norm.tree_degrees().into_iter().enumerate() {
                assert!(deg <= (norm.parts[x].len() * delta).max(2), "{}", e.name);
            }
        }
    }
}

#[test]
fn normalize_star_of_singletons() {
    // an edgeless graph whose partition tree is a star: the hub must shed edges
    let g = Graph::new(6);
    let tp = treepart::TreePartition {
        n: 6,
        parts: (0..6).map(|v| VertexSet::from_unsorted(vec![v])).collect(),
        edges: (1..6).map(|x| (0, x)).collect(),
        anchor: None,
    };
    let norm = normalize_tp(&g, &tp).unwrap();
    assert!(norm.tree_degrees().into_iter().all(|d| d <= 2));
    validate_tp(&g, &norm).unwrap();
}
