//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use treepart::corpus::{fixture_corpus, random_corpus, CorpusEntry};
use treepart::graph::{gen_random_partial_ktree, gen_random_tree};
use treepart::lowerbound::{complete_tree_size, layer_partition, root_eccentricity};
use treepart::treepartition::{degree_coefficient, exact_tpw, width_coefficient};
use treepart::{
    alpha_int, alpha_opt, bound_constants, gen_complete_tree, heuristic_td, normalize_tp,
    sibling_partition, td_from_tp, tree_partition, validate_td, validate_tp, write_graph,
    AlphaParams, Graph, GraphFormat, Rational, TdStrategy, TreePartition, VertexSet,
};

const SEED: u64 = 0;
const RANDOM_GRAPHS: usize = 500;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(g: &Graph, k: usize, alpha: Rational) -> AlphaParams {
    AlphaParams::new(alpha, k.max(1), g.max_degree().max(1)).expect("alpha > 2, k, d >= 1")
}

fn random_graphs() -> Vec<CorpusEntry> {
    random_corpus(SEED, RANDOM_GRAPHS)
}

/// Runs α = 4 on the random corpus and checks `check(width, Δ(T), k, d)`.
fn integer_bounds(check: impl Fn(usize, usize, usize, usize) -> bool, limit: Duration) -> Outcome {
    let start = Instant::now();
    let corpus = random_graphs();
    let mut violations = Vec::new();
    let mut cases = [0usize; 4];
    for e in &corpus {
        let g = &e.graph;
        let td = heuristic_td(g, TdStrategy::MinFill);
        let p = params(g, td.max_bag(), alpha_int());
        let c = match treepart::tree_partition_with_stats(g, &td, &p, None) {
            Ok(c) => c,
            Err(err) => {
                violations.push(format!("{}: {err}", e.name));
                continue;
            }
        };
        for (i, n) in [c.cases.case1, c.cases.case2, c.cases.case3, c.cases.case4]
            .into_iter()
            .enumerate()
        {
            cases[i] += n;
        }
        match validate_tp(g, &c.partition) {
            Ok(s) if check(s.width, s.max_tree_degree, p.k(), p.d()) => {}
            Ok(s) => violations.push(format!(
                "{}: width {} degree {} (k={}, d={})",
                e.name,
                s.width,
                s.max_tree_degree,
                p.k(),
                p.d()
            )),
            Err(err) => violations.push(format!("{}: invalid: {err}", e.name)),
        }
    }
    let elapsed = start.elapsed();
    if !violations.is_empty() {
        return Err(format!(
            "{} violations, first: {}",
            violations.len(),
            violations[0]
        ));
    }
    if elapsed > limit {
        return Err(format!("took {elapsed:.1?}, limit {limit:?}"));
    }
    Ok(format!(
        "{} graphs, 0 violations, cases {cases:?}, {elapsed:.1?}",
        corpus.len()
    ))
}

fn integer_preset_bounds() -> Outcome {
    integer_bounds(
        |w, deg, k, d| w <= 18 * k * d && deg <= 6 * d,
        Duration::from_secs(60),
    )
}

fn tightened_width() -> Outcome {
    integer_bounds(
        |w, _, k, d| w <= 18 * k * d - 2 * k,
        Duration::from_secs(60),
    )
}

fn opt_constants() -> Outcome {
    let a = alpha_opt();
    let wc = width_coefficient(a);
    let dc = degree_coefficient(a);
    let r = |p: i128, q: i128| Rational::new(p, q);
    if wc > r(1752, 100) || dc > r(728, 100) {
        return Err(format!("width {wc}, degree {dc}"));
    }
    // 1.4142135 < √2 < 1.4142136
    let (lo, hi) = (r(14_142_135, 10_000_000), r(14_142_136, 10_000_000));
    let w_opt = (r(9, 1) + r(6, 1) * lo, r(9, 1) + r(6, 1) * hi);
    let d_opt = (r(3, 1) + r(3, 1) * lo, r(3, 1) + r(3, 1) * hi);
    let eps = r(5, 100);
    let near = |x: Rational, (a, b): (Rational, Rational)| x - a <= eps && b - x <= eps;
    if !near(wc, w_opt) || !near(dc, d_opt) {
        return Err(format!("{wc} / {dc} not within 0.05 of 9+6√2 / 3+3√2"));
    }
    // the exact coefficients must also beat the integer preset
    if wc >= width_coefficient(alpha_int()) {
        return Err("opt width coefficient not below 18".into());
    }
    Ok(format!("width {wc} ≤ 17.52, degree {dc} ≤ 7.28"))
}

fn anchor_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut pairs = 0;
    let mut attempts = 0;
    while pairs < 240 {
        attempts += 1;
        if attempts > 10_000 {
            return Err(format!("only {pairs} admissible pairs generated"));
        }
        let n = rng.random_range(10..=200usize);
        let max_degree = rng.random_range(2..=8usize);
        let g = if rng.random_bool(0.5) {
            gen_random_tree(n, max_degree, &mut rng)
        } else {
            gen_random_partial_ktree(n, rng.random_range(1..=3), max_degree, 0.8, &mut rng)
        };
        let td = heuristic_td(&g, TdStrategy::MinDegree);
        let alpha = if pairs % 2 == 0 {
            alpha_int()
        } else {
            alpha_opt()
        };
        let p = params(&g, td.max_bag(), alpha);
        let b = bound_constants(&p);
        let (lo, hi) = (b.s_min_count(), b.s_max_count().min(n));
        if lo > hi {
            continue;
        }
        let size = rng.random_range(lo..=hi);
        let s: VertexSet = sample(&mut rng, n, size).into_iter().collect();
        let tp = tree_partition(&g, &td, &p, Some(&s)).map_err(|e| format!("pair {pairs}: {e}"))?;
        validate_tp(&g, &tp).map_err(|e| format!("pair {pairs}: {e}"))?;
        let z = tp.anchor.ok_or("no anchor reported")?;
        let part = &tp.parts[z];
        let deg = tp.tree_degrees()[z];
        let int = |x: usize| Rational::from_integer(x as i128);
        if !s.is_subset(part) {
            return Err(format!("pair {pairs}: S not inside the anchor part"));
        }
        if int(part.len()) > b.anchor_part(size) {
            return Err(format!(
                "pair {pairs}: |B_z| = {} > {}",
                part.len(),
                b.anchor_part(size)
            ));
        }
        if int(deg) > b.anchor_degree(size) {
            return Err(format!(
                "pair {pairs}: deg(z) = {deg} > {}",
                b.anchor_degree(size)
            ));
        }
        pairs += 1;
    }
    Ok(format!("{pairs} pairs, 0 violations"))
}

fn random_connected(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new(n);
    for v in 1..n {
        let u = rng.random_range(0..v);
        g.add_edge(u, v).unwrap();
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut graphs: Vec<Graph> = Vec::new();
    // every labelled graph on up to 6 vertices, keeping the connected ones
    for n in 1..=6usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            let g = Graph::from_edges(n, edges).unwrap();
            if g.is_connected() {
                graphs.push(g);
            }
        }
    }
    let exhaustive = graphs.len();
    for i in 0..1500 {
        let n = 7;
        let p = [0.0, 0.15, 0.35, 0.6][i % 4];
        graphs.push(random_connected(n, p, &mut rng));
    }
    let mut trees = 0;
    for g in &graphs {
        let (tpw, witness) = exact_tpw(g).map_err(|e| e.to_string())?;
        let wstats = validate_tp(g, &witness).map_err(|e| format!("witness: {e}"))?;
        if wstats.width != tpw {
            return Err(format!("witness width {} ≠ {tpw}", wstats.width));
        }
        let td = heuristic_td(g, TdStrategy::MinFill);
        let tp = tree_partition(g, &td, &params(g, td.max_bag(), alpha_int()), None)
            .map_err(|e| e.to_string())?;
        let algo = validate_tp(g, &tp).map_err(|e| e.to_string())?.width;
        if tpw > algo {
            return Err(format!(
                "oracle {tpw} > algorithm {algo} on {:?}",
                g.edges().collect::<Vec<_>>()
            ));
        }
        if g.m() + 1 == g.n() {
            trees += 1;
            if tpw != 1 {
                return Err(format!("tree with tpw {tpw}"));
            }
        }
        let tw = validate_td(g, &td_from_tp(g, &witness).map_err(|e| e.to_string())?)
            .map_err(|e| format!("converted td: {e}"))?;
        if tw + 1 > 2 * tpw {
            return Err(format!("tw {tw} > 2·{tpw} − 1"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(600) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!(
        "{} graphs ({exhaustive} exhaustive n ≤ 6, {} random n = 7, {trees} trees), {elapsed:.1?}",
        graphs.len(),
        graphs.len() - exhaustive
    ))
}

fn generator_sizes() -> Outcome {
    for delta in 2..=6usize {
        for d in 0..=8usize {
            let x = gen_complete_tree(delta, d).map_err(|e| e.to_string())?;
            let n = x.graph.n();
            let closed = 1 + delta * (0..d).map(|i| (delta - 1).pow(i as u32)).sum::<usize>();
            if n != closed || complete_tree_size(delta, d) != Some(n as u128) {
                return Err(format!(
                    "X_{{{delta},{d}}} has {n} vertices, expected {closed}"
                ));
            }
            if x.graph.m() + 1 != n || !x.graph.is_connected() || x.graph.max_degree() > delta {
                return Err(format!(
                    "X_{{{delta},{d}}} is not a tree of degree ≤ {delta}"
                ));
            }
            let low = (delta - 1).pow(d as u32);
            if delta >= 3 && !(low <= n && n <= 3 * low) {
                return Err(format!("X_{{{delta},{d}}}: sandwich fails for {n}"));
            }
        }
    }
    let n = gen_complete_tree(3, 2).unwrap().graph.n();
    if n != 10 {
        return Err(format!("X_{{3,2}} has {n} vertices"));
    }
    Ok("Δ ∈ 2..6, d ∈ 0..8, X_{3,2} = 10".into())
}

fn radius_step() -> Outcome {
    let mut checked = 0;
    for delta in 3..=6 {
        for d in 1..=5 {
            let x = gen_complete_tree(delta, d).unwrap();
            let g = &x.graph;
            let td = heuristic_td(g, TdStrategy::MinDegree);
            let mut candidates: Vec<(&str, TreePartition)> = vec![
                ("sibling", sibling_partition(&x)),
                ("layer", layer_partition(&x)),
            ];
            for alpha in [alpha_int(), alpha_opt()] {
                let tp = tree_partition(g, &td, &params(g, td.max_bag(), alpha), None)
                    .map_err(|e| e.to_string())?;
                candidates.push((
                    "normalized",
                    normalize_tp(g, &tp).map_err(|e| e.to_string())?,
                ));
                candidates.push(("algorithm", tp));
            }
            if g.n() <= 9 {
                candidates.push(("oracle", exact_tpw(g).map_err(|e| e.to_string())?.1));
            }
            for (name, tp) in &candidates {
                let s = validate_tp(g, tp).map_err(|e| format!("{name} X_{{{delta},{d}}}: {e}"))?;
                let (_, ecc) = root_eccentricity(&x, tp);
                if ecc > d {
                    return Err(format!(
                        "{name} X_{{{delta},{d}}}: eccentricity {ecc} > {d}"
                    ));
                }
                if s.width < g.n().div_ceil(s.nodes) {
                    return Err(format!(
                        "{name} X_{{{delta},{d}}}: width below ⌈|V|/|V(T)|⌉"
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} partitions"))
}

fn normalization() -> Outcome {
    let mut corpus = fixture_corpus();
    corpus.extend(random_graphs());
    let mut checked = 0;
    for e in &corpus {
        let g = &e.graph;
        let delta = g.max_degree();
        let td = heuristic_td(g, TdStrategy::MinFill);
        let mut inputs = Vec::new();
        for alpha in [alpha_int(), alpha_opt()] {
            inputs.push(
                tree_partition(g, &td, &params(g, td.max_bag(), alpha), None)
                    .map_err(|err| format!("{}: {err}", e.name))?,
            );
        }
        if g.n() <= 9 {
            inputs.push(exact_tpw(g).map_err(|err| err.to_string())?.1);
        }
        for tp in inputs {
            let norm = normalize_tp(g, &tp).map_err(|err| format!("{}: {err}", e.name))?;
            validate_tp(g, &norm).map_err(|err| format!("{}: {err}", e.name))?;
            if norm.parts != tp.parts {
                return Err(format!("{}: parts changed", e.name));
            }
            for (x, deg) in norm.tree_degrees().into_iter().enumerate() {
                let cap = (norm.parts[x].len() * delta).max(2);
                if deg > cap {
                    return Err(format!("{}: node {x} degree {deg} > {cap}", e.name));
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} partitions on {} graphs", corpus.len()))
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_treepart");
    let mut corpus = fixture_corpus();
    corpus.extend(random_corpus(SEED + 3, 12));
    for e in &corpus {
        let gr = dir.path().join(format!("{}.gr", e.name));
        std::fs::write(&gr, write_graph(&e.graph, GraphFormat::PaceGr))
            .map_err(|e| e.to_string())?;
        for alpha in ["int", "opt"] {
            let mut outputs = Vec::new();
            for run in 0..2 {
                let tp = dir.path().join(format!("{}-{alpha}-{run}.tp", e.name));
                let js = dir.path().join(format!("{}-{alpha}-{run}.json", e.name));
                let status = Command::new(bin)
                    .arg("partition")
                    .arg(&gr)
                    .args(["--alpha", alpha, "--out"])
                    .arg(&tp)
                    .arg("--stats")
                    .arg(&js)
                    .status()
                    .map_err(|e| e.to_string())?;
                if !status.success() {
                    return Err(format!("{}: partition exited with {status}", e.name));
                }
                outputs.push((std::fs::read(&tp).unwrap(), std::fs::read(&js).unwrap()));
            }
            if outputs[0] != outputs[1] {
                return Err(format!("{} ({alpha}): runs differ", e.name));
            }
        }
    }
    Ok(format!(
        "{} graphs × 2 presets, byte-identical .tp and JSON",
        corpus.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("integer preset: width ≤ 18kd, Δ(T) ≤ 6d", integer_preset_bounds),
        ("tightened width ≤ 18kd − 2k", tightened_width),
        ("opt preset constants", opt_constants),
        ("anchor part and degree bounds", anchor_bounds),
        ("oracle equivalence n ≤ 7", oracle_equivalence),
        ("complete-tree generator sizes", generator_sizes),
        ("radius step and pigeonhole", radius_step),
        ("normalization degree caps", normalization),
        ("partition determinism (CLI)", cli_determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
