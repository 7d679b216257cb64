//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use mceprune::althea::{althea_run, chebyshev_mass, ExactSolver};
use mceprune::classifier::{train, TrainConfig};
use mceprune::features::{chi_square, vertex_features, FeatureProfile, GraphKernels};
use mceprune::graph::greedy_coloring_with_order;
use mceprune::mce::{enumerate_maximum_cliques, omega_oracle_prune};
use mceprune::sparsify::prune_once;
use mceprune::strategy::{Registry, StrategyParams};
use mceprune::synth::{build_planted_corpus, gen_gnp, instance_seeds, planted_instance};
use mceprune::Graph;
use mceprune_cli::args::TimingStat;
use mceprune_cli::bench::{aggregate, bench_instance, BenchInstance, BenchSettings};
use num::rational::Ratio;
use serde_json::Value;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn subset_oracle(g: &Graph) -> (usize, Vec<Vec<usize>>) {
    let n = g.num_vertices();
    let mut best = 0;
    let mut found = vec![Vec::new()];
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size < best {
            continue;
        }
        let set: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        if !g.is_clique(&set) {
            continue;
        }
        if size > best {
            best = size;
            found.clear();
        }
        found.push(set);
    }
    found.sort();
    (best, found)
}

fn solver_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut total = 0;
    for seed in 0..500u64 {
        let n = 1 + (seed as usize % 12);
        let p = 0.2 + 0.1 * (seed % 8) as f64;
        let g = gen_gnp(n, p, seed).unwrap();
        let r = enumerate_maximum_cliques(&g, None).unwrap();
        let (omega, cliques) = subset_oracle(&g);
        total += 1;
        if r.omega != omega || r.cliques != cliques {
            mismatches += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        mismatches == 0 && secs < 60.0,
        format!("{total} graphs, {mismatches} mismatches, {secs:.1}s (limit 60s)"),
    )
}

fn oracle_prune_exactness() -> Outcome {
    let start = Instant::now();
    let mut failures = 0;
    for seed in 0..200u64 {
        let n = 10 + (seed as usize % 51);
        let p = [0.1, 0.2, 0.3, 0.5][seed as usize % 4];
        let g = gen_gnp(n, p, 10_000 + seed).unwrap();
        let full = enumerate_maximum_cliques(&g, None).unwrap();
        let core = omega_oracle_prune(&g, full.omega.max(1)).unwrap();
        let reduced = enumerate_maximum_cliques(&core, None).unwrap();
        if reduced.omega != full.omega || reduced.labelled_cliques(&core) != full.labelled_cliques(&g) {
            failures += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures == 0 && secs < 120.0,
        format!("200 graphs, {failures} differ, {secs:.1}s (limit 120s)"),
    )
}

fn planted_replication() -> Outcome {
    let start = Instant::now();
    let corpus = build_planted_corpus(64, 0.5, 10, 2000, 1).unwrap();
    let model = train(std::slice::from_ref(&corpus.set), &TrainConfig::default()).unwrap();
    let params = StrategyParams {
        models: vec![model],
        q: Some(0.55),
        stages: Some(1),
        ..Default::default()
    };
    let pre = Registry::with_builtins().create("cc", &params).unwrap();
    let settings = BenchSettings {
        runs: 1,
        timing: TimingStat::Median,
        time_limit: None,
    };
    let rows: Vec<_> = instance_seeds(2, 200)
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let inst = BenchInstance {
                name: format!("fresh-{i}"),
                graph: planted_instance(64, 0.5, 13, s).unwrap().graph,
            };
            bench_instance(&inst, pre.as_ref(), &settings).unwrap()
        })
        .collect();
    let agg = aggregate(&rows);
    let accuracy = agg.clique_accuracy.unwrap_or(0.0);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        (0.45..=0.65).contains(&agg.mean_vertex_ratio) && accuracy >= 0.90 && secs < 600.0,
        format!(
            "{} training rows, 200 instances k=13 q=0.55: mean vertex ratio {:.3} (band [0.45, 0.65]), clique accuracy {:.3} (min 0.90), {secs:.1}s",
            corpus.set.len(),
            agg.mean_vertex_ratio,
            accuracy
        ),
    )
}

fn chebyshev_and_chi_square_values() -> Outcome {
    let masses = chebyshev_mass(1) == Ratio::new(3, 4) && chebyshev_mass(2) == Ratio::new(5, 36);
    let chi = chi_square(&[8.0, 2.0], &[5.0, 5.0]).unwrap() == 3.6;
    let mut sum = Ratio::from_integer(0u128);
    let mut sums = true;
    for tau in 1..=60u64 {
        sum += chebyshev_mass(tau);
        let t = u128::from(tau) + 1;
        sums &= sum == Ratio::from_integer(1) - Ratio::new(1, t * t);
    }
    outcome(
        masses && chi && sums,
        format!("masses {masses}, chi_square 3.6 {chi}, partial sums for tau 1..=60 {sums}"),
    )
}

fn figure_two_density() -> Outcome {
    let g = Graph::from_edges(7, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (6, 0), (6, 3)])
        .unwrap();
    let k = GraphKernels::compute(&g).unwrap();
    let coloring = greedy_coloring_with_order(&g, &[0, 1, 2, 3, 4, 5, 6]).unwrap();
    let f = vertex_features(&g, &coloring, &k.eig, FeatureProfile::RealGraph).unwrap();
    let estimate = f.rows[6][9];

    let mut truth = None;
    'colors: for colors in 1..=7usize {
        let mut best: Option<usize> = None;
        for code in 0..colors.pow(7) {
            let mut c = [0usize; 7];
            let mut x = code;
            for slot in c.iter_mut() {
                *slot = x % colors;
                x /= colors;
            }
            if g.edges().any(|(a, b)| c[a] == c[b]) {
                continue;
            }
            let seen = if c[0] == c[3] { 1 } else { 2 };
            best = Some(best.map_or(seen, |b: usize| b.min(seen)));
        }
        if let Some(b) = best {
            truth = Some(Ratio::new(b, colors));
            break 'colors;
        }
    }
    let truth = truth.unwrap();
    outcome(
        (estimate - 1.0 / 3.0).abs() < 1e-15 && truth == Ratio::new(1, 3),
        format!("greedy estimate {estimate:.6}, exhaustive value {truth}"),
    )
}

fn althea_relaxed_accuracy() -> Outcome {
    let start = Instant::now();
    let mut hits = 0;
    for seed in 0..50u64 {
        let g = gen_gnp(64, 0.75, 20_000 + seed).unwrap();
        let omega = enumerate_maximum_cliques(&g, None).unwrap().omega;
        let out = althea_run(&g, &ExactSolver::default()).unwrap();
        if out.clique.len() + 1 >= omega {
            hits += 1;
        }
    }
    let rate = hits as f64 / 50.0;
    let secs = start.elapsed().as_secs_f64();
    outcome(
        rate >= 0.60 && secs < 300.0,
        format!("{hits}/50 within one of omega ({rate:.2}, min 0.60), {secs:.1}s (limit 300s)"),
    )
}

fn monotone_thresholds() -> Outcome {
    let corpus = build_planted_corpus(64, 0.5, 10, 2000, 1).unwrap();
    let model = train(std::slice::from_ref(&corpus.set), &TrainConfig::default()).unwrap();
    let mut violations = 0;
    for s in instance_seeds(3, 50) {
        let g = planted_instance(64, 0.5, 12, s).unwrap().graph;
        let removed: Vec<Vec<usize>> = [0.55, 0.75, 0.95]
            .iter()
            .map(|&q| prune_once(&g, &model, q).unwrap().1)
            .collect();
        for w in removed.windows(2) {
            if !w[1].iter().all(|v| w[0].contains(v)) {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("50 graphs, {violations} nesting violations"))
}

/// JSON with every timing field removed.
fn strip_timings(mut v: Value) -> Value {
    fn walk(v: &mut Value) {
        match v {
            Value::Object(map) => {
                map.retain(|k, _| k != "timings" && !k.ends_with("_secs"));
                map.values_mut().for_each(walk);
            }
            Value::Array(items) => items.iter_mut().for_each(walk),
            _ => {}
        }
    }
    walk(&mut v);
    v
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_mceprune"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))
    }
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn read_json(path: &Path) -> Value {
    strip_timings(serde_json::from_slice(&read(path)).unwrap())
}

/// Runs the pipeline into `dir` and returns every non-timing output.
fn pipeline(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let d = |p: &str| p.to_string();
    run_cli(dir, &["gen", "--n", "64", "--p", "0.5", "--k", "10", "--rows", "400", "--seed", "5", "--write-graphs", "--output-dir", &d("corpus")])?;
    run_cli(dir, &["train", "--manifest", &d("corpus/manifest.json"), "--q", "0.55", "--stages", "2", "--seed", "8", "--output-dir", &d("models")])?;
    let graph = d("corpus/instances/planted-0003.dimacs");
    run_cli(dir, &["prune", "-i", &graph, "--method", "cc", "--q", "0.55", "--stages", "2", "--models", &d("models/model-stage1.json"), &d("models/model-stage2.json"), "--evaluate", "--report", &d("prune.json"), "-o", &d("reduced.dimacs")])?;
    run_cli(dir, &["althea", "-i", &graph, "-o", &d("althea.json")])?;

    let mut outputs = Vec::new();
    for f in ["corpus/manifest.json", "corpus/training.csv", "corpus/instances/planted-0003.dimacs", "models/model-stage1.json", "models/model-stage2.json", "reduced.dimacs"] {
        outputs.push((f.to_string(), read(&dir.join(f))));
    }
    for f in ["models/train-summary.json", "prune.json", "althea.json"] {
        outputs.push((f.to_string(), serde_json::to_vec(&read_json(&dir.join(f))).unwrap()));
    }
    Ok(outputs)
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (first, second) = match (pipeline(a.path()), pipeline(b.path())) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return outcome(false, format!("command failed: {e}")),
    };
    let differing: Vec<&str> = first
        .iter()
        .zip(&second)
        .filter(|(x, y)| x.1 != y.1)
        .map(|(x, _)| x.0.as_str())
        .collect();
    outcome(
        differing.is_empty(),
        format!("gen/train/prune/althea re-run: {} outputs compared, differing: {differing:?}", first.len()),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("solver matches subset enumeration", solver_oracle_equivalence),
        ("omega-core reduction is lossless", oracle_prune_exactness),
        ("planted-clique pruning ratio and accuracy", planted_replication),
        ("Chebyshev masses and chi-square values", chebyshev_and_chi_square_values),
        ("local chromatic density of the two-triangle graph", figure_two_density),
        ("significance heuristic relaxed accuracy", althea_relaxed_accuracy),
        ("pruned sets nest across thresholds", monotone_thresholds),
        ("commands are deterministic", determinism),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        failed += usize::from(!result.pass);
        println!(
            "criterion {}: {} {name}: {}",
            i + 1,
            if result.pass { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!(
        "acceptance: {} of {} passed in {:.1?}",
        criteria.len() - failed,
        criteria.len(),
        Duration::from_secs_f64(total.elapsed().as_secs_f64())
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
