//! Per-instance timing of solve, reduce, and solve-after-reduce.

use std::io::Write;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use mceprune::error::Error;
use mceprune::mce::{enumerate_maximum_cliques, evaluate, MceResult};
use mceprune::strategy::Preprocessor;
use mceprune::synth::{instance_seeds, planted_instance};
use mceprune::Graph;

use crate::args::{BenchArgs, TimingStat};
use crate::commands::{read_graph, resolve_reduction, seconds, write_json};
use crate::config::{thread_count, Config};

pub const BENCH_FORMAT_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 16] = [
    "name",
    "vertices",
    "edges",
    "vertex_ratio",
    "edge_ratio",
    "omega_before",
    "omega_after",
    "count_before",
    "count_after",
    "clique_accuracy",
    "prune_secs",
    "solve_original_secs",
    "solve_pruned_secs",
    "speedup",
    "speedup_with_pruning",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    /// The original instance hit the time limit.
    OriginalTimeout,
    /// The reduced instance hit the time limit.
    PrunedTimeout,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub name: String,
    pub vertices: usize,
    pub edges: usize,
    pub vertex_ratio: f64,
    pub edge_ratio: f64,
    pub omega_before: Option<usize>,
    pub omega_after: Option<usize>,
    pub omega_preserved: Option<bool>,
    pub count_before: Option<usize>,
    pub count_after: Option<usize>,
    /// Strict clique accuracy (ω and maximum-clique count preserved).
    pub clique_accuracy: Option<bool>,
    pub relaxed_accuracy: Option<bool>,
    pub status: Status,
    pub prune_secs: f64,
    pub solve_original_secs: f64,
    pub solve_pruned_secs: Option<f64>,
    /// `solve_original / solve_pruned`
    pub speedup: Option<f64>,
    /// `solve_original / (prune + solve_pruned)`
    pub speedup_with_pruning: Option<f64>,
    /// Set when the original solve timed out, so speedups are lower bounds.
    pub speedup_is_lower_bound: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Aggregate {
    pub instances: usize,
    pub original_timeouts: usize,
    pub pruned_timeouts: usize,
    pub mean_vertex_ratio: f64,
    pub mean_edge_ratio: f64,
    /// Fraction of evaluated instances with strict clique accuracy.
    pub clique_accuracy: Option<f64>,
    pub relaxed_accuracy: Option<f64>,
    pub mean_prune_secs: f64,
    pub mean_solve_original_secs: f64,
    pub mean_solve_pruned_secs: Option<f64>,
    /// Ratio of summed solve times over instances where both solves finished.
    pub speedup: Option<f64>,
    pub speedup_with_pruning: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchSummary {
    pub format_version: u32,
    pub csv_columns: Vec<&'static str>,
    pub method: String,
    pub runs: usize,
    pub timing: &'static str,
    pub time_limit_secs: Option<f64>,
    pub rows: Vec<BenchRow>,
    pub aggregate: Aggregate,
}

pub struct BenchInstance {
    pub name: String,
    pub graph: Graph,
}

pub struct BenchSettings {
    pub runs: usize,
    pub timing: TimingStat,
    pub time_limit: Option<Duration>,
}

fn summarize(times: &mut [f64], stat: TimingStat) -> f64 {
    match stat {
        TimingStat::Mean => times.iter().sum::<f64>() / times.len() as f64,
        TimingStat::Median => {
            times.sort_by(f64::total_cmp);
            let m = times.len() / 2;
            if times.len() % 2 == 1 {
                times[m]
            } else {
                (times[m - 1] + times[m]) / 2.0
            }
        }
    }
}

/// Solves `runs` times. `None` on timeout.
fn timed_solve(g: &Graph, s: &BenchSettings) -> Result<(Option<MceResult>, f64)> {
    let mut times = Vec::with_capacity(s.runs);
    let mut result = None;
    for _ in 0..s.runs {
        let t = Instant::now();
        match enumerate_maximum_cliques(g, s.time_limit) {
            Ok(r) => {
                times.push(t.elapsed().as_secs_f64());
                result = Some(r);
            }
            Err(Error::Timeout { .. }) => {
                let limit = s.time_limit.map_or(0.0, |d| d.as_secs_f64());
                return Ok((None, limit));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((result, summarize(&mut times, s.timing)))
}

pub fn bench_instance(inst: &BenchInstance, pre: &dyn Preprocessor, s: &BenchSettings) -> Result<BenchRow> {
    let g = &inst.graph;
    let mut prune_times = Vec::with_capacity(s.runs);
    let mut report = None;
    for _ in 0..s.runs {
        let t = Instant::now();
        let r = pre.reduce(g).with_context(|| format!("reducing {}", inst.name))?;
        prune_times.push(t.elapsed().as_secs_f64());
        report.get_or_insert(r);
    }
    let report = report.expect("at least one run");
    let prune_secs = summarize(&mut prune_times, s.timing);

    let (original, solve_original_secs) = timed_solve(g, s)?;
    let (pruned, pruned_secs) = timed_solve(&report.final_graph, s)?;
    let solve_pruned_secs = pruned.as_ref().map(|_| pruned_secs);
    let status = match (&original, &pruned) {
        (None, _) => Status::OriginalTimeout,
        (Some(_), None) => Status::PrunedTimeout,
        _ => Status::Ok,
    };
    let eval = match (&original, &pruned) {
        (Some(a), Some(b)) => Some(evaluate(g, a, &report.final_graph, b)),
        _ => None,
    };
    let speed = |denominator: f64| {
        solve_pruned_secs.map(|_| solve_original_secs / denominator.max(f64::MIN_POSITIVE))
    };
    Ok(BenchRow {
        name: inst.name.clone(),
        vertices: g.num_vertices(),
        edges: g.num_edges(),
        vertex_ratio: report.vertex_ratio,
        edge_ratio: report.edge_ratio,
        omega_before: original.as_ref().map(|r| r.omega),
        omega_after: pruned.as_ref().map(|r| r.omega),
        omega_preserved: eval.as_ref().map(|e| e.omega_before == e.omega_after),
        count_before: original.as_ref().map(MceResult::count),
        count_after: pruned.as_ref().map(MceResult::count),
        clique_accuracy: eval.as_ref().map(|e| e.accuracy.strict),
        relaxed_accuracy: eval.as_ref().map(|e| e.accuracy.relaxed),
        status,
        prune_secs,
        solve_original_secs,
        solve_pruned_secs,
        speedup: speed(pruned_secs),
        speedup_with_pruning: speed(prune_secs + pruned_secs),
        speedup_is_lower_bound: original.is_none(),
    })
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

pub fn aggregate(rows: &[BenchRow]) -> Aggregate {
    let both: Vec<&BenchRow> = rows.iter().filter(|r| r.status == Status::Ok).collect();
    let frac = |f: &dyn Fn(&BenchRow) -> Option<bool>| {
        mean(rows.iter().filter_map(f).map(|b| f64::from(u8::from(b))))
    };
    let orig: f64 = both.iter().map(|r| r.solve_original_secs).sum();
    let pruned: f64 = both.iter().filter_map(|r| r.solve_pruned_secs).sum();
    let prune: f64 = both.iter().map(|r| r.prune_secs).sum();
    Aggregate {
        instances: rows.len(),
        original_timeouts: rows.iter().filter(|r| r.status == Status::OriginalTimeout).count(),
        pruned_timeouts: rows.iter().filter(|r| r.status == Status::PrunedTimeout).count(),
        mean_vertex_ratio: mean(rows.iter().map(|r| r.vertex_ratio)).unwrap_or(0.0),
        mean_edge_ratio: mean(rows.iter().map(|r| r.edge_ratio)).unwrap_or(0.0),
        clique_accuracy: frac(&|r| r.clique_accuracy),
        relaxed_accuracy: frac(&|r| r.relaxed_accuracy),
        mean_prune_secs: mean(rows.iter().map(|r| r.prune_secs)).unwrap_or(0.0),
        mean_solve_original_secs: mean(rows.iter().map(|r| r.solve_original_secs)).unwrap_or(0.0),
        mean_solve_pruned_secs: mean(rows.iter().filter_map(|r| r.solve_pruned_secs)),
        speedup: (!both.is_empty()).then(|| orig / pruned.max(f64::MIN_POSITIVE)),
        speedup_with_pruning: (!both.is_empty()).then(|| orig / (prune + pruned).max(f64::MIN_POSITIVE)),
    }
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn secs(x: f64) -> String {
    format!("{x:.6}")
}

fn speed_cell(v: Option<f64>, lower_bound: bool) -> String {
    match v {
        None => String::new(),
        Some(x) if lower_bound => format!(">={x:.3}"),
        Some(x) => format!("{x:.3}"),
    }
}

/// CSV table: one row per instance, then an `ALL` row.
pub fn write_csv<W: Write + ?Sized>(rows: &[BenchRow], agg: &Aggregate, w: &mut W) -> Result<()> {
    writeln!(w, "{}", CSV_COLUMNS.join(","))?;
    for r in rows {
        let omega_after = match (r.omega_after, r.omega_preserved) {
            (Some(o), Some(true)) => format!("{o}*"),
            (o, _) => opt(o),
        };
        let status = match r.status {
            Status::Ok => "ok",
            Status::OriginalTimeout => "t/o",
            Status::PrunedTimeout => "pruned-t/o",
        };
        writeln!(
            w,
            "{},{},{},{:.6},{:.6},{},{},{},{},{},{},{},{},{},{},{}",
            r.name,
            r.vertices,
            r.edges,
            r.vertex_ratio,
            r.edge_ratio,
            opt(r.omega_before),
            omega_after,
            opt(r.count_before),
            opt(r.count_after),
            opt(r.clique_accuracy.map(u8::from)),
            secs(r.prune_secs),
            if r.status == Status::OriginalTimeout { "t/o".to_string() } else { secs(r.solve_original_secs) },
            r.solve_pruned_secs.map_or_else(|| "t/o".to_string(), secs),
            speed_cell(r.speedup, r.speedup_is_lower_bound),
            speed_cell(r.speedup_with_pruning, r.speedup_is_lower_bound),
            status,
        )?;
    }
    writeln!(
        w,
        "ALL,,,{:.6},{:.6},,,,,{},{},{},{},{},{},n={} t/o={}",
        agg.mean_vertex_ratio,
        agg.mean_edge_ratio,
        agg.clique_accuracy.map_or_else(String::new, |a| format!("{a:.4}")),
        secs(agg.mean_prune_secs),
        secs(agg.mean_solve_original_secs),
        agg.mean_solve_pruned_secs.map_or_else(String::new, secs),
        speed_cell(agg.speedup, false),
        speed_cell(agg.speedup_with_pruning, false),
        agg.instances,
        agg.original_timeouts,
    )?;
    Ok(())
}

pub fn gather_instances(a: &BenchArgs, cfg: &Config) -> Result<Vec<BenchInstance>> {
    let mut out = Vec::new();
    let inputs: Vec<std::path::PathBuf> = if a.inputs.is_empty() {
        cfg.list("inputs").into_iter().map(Into::into).collect()
    } else {
        a.inputs.clone()
    };
    for path in &inputs {
        out.push(BenchInstance {
            name: path
                .file_stem()
                .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned()),
            graph: read_graph(path, a.format)?,
        });
    }
    if let Some(count) = cfg.or(a.count, "count")? {
        let n = cfg.or_default(a.n, "n", 64)?;
        let p = cfg.or_default(a.p, "p", 0.5)?;
        let k = cfg.or_default(a.k, "k", 10)?;
        let seed = cfg.or_default(a.seed, "seed", 0)?;
        for (i, s) in instance_seeds(seed, count).into_iter().enumerate() {
            out.push(BenchInstance {
                name: format!("planted-n{n}-k{k}-{i:04}"),
                graph: planted_instance(n, p, k, s)?.graph,
            });
        }
    }
    if out.is_empty() {
        bail!("no bench instances: give --inputs or --count");
    }
    Ok(out)
}

pub fn run_bench(a: &BenchArgs, cfg: &Config) -> Result<BenchSummary> {
    let limit = seconds(cfg.or(a.time_limit, "time-limit")?)?;
    let settings = BenchSettings {
        runs: cfg.or_default(a.runs, "runs", 3)?.max(1),
        timing: match cfg.or(a.timing.map(|t| format!("{t:?}").to_lowercase()), "timing")?.as_deref() {
            None | Some("median") => TimingStat::Median,
            Some("mean") => TimingStat::Mean,
            Some(other) => bail!("unknown timing statistic '{other}'"),
        },
        time_limit: limit,
    };
    let (method, params) = resolve_reduction(&a.reduction, cfg, limit)?;
    let pre = mceprune::strategy::Registry::with_builtins().create(&method, &params)?;
    let instances = gather_instances(a, cfg)?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_count(cfg.or(a.threads, "threads")?)? {
        builder = builder.num_threads(t);
    }
    let pool = builder.build()?;
    let rows: Vec<BenchRow> = pool.install(|| {
        instances
            .par_iter()
            .map(|inst| bench_instance(inst, pre.as_ref(), &settings))
            .collect::<Result<Vec<_>>>()
    })?;
    let aggregate = aggregate(&rows);
    Ok(BenchSummary {
        format_version: BENCH_FORMAT_VERSION,
        csv_columns: CSV_COLUMNS.to_vec(),
        method: pre.name().to_string(),
        runs: settings.runs,
        timing: match settings.timing {
            TimingStat::Median => "median",
            TimingStat::Mean => "mean",
        },
        time_limit_secs: limit.map(|d| d.as_secs_f64()),
        rows,
        aggregate,
    })
}

pub fn bench(a: &BenchArgs, cfg: &Config) -> Result<()> {
    let summary = run_bench(a, cfg)?;
    match &a.output {
        Some(path) => {
            let mut w = std::io::BufWriter::new(
                std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
            );
            write_csv(&summary.rows, &summary.aggregate, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            write_csv(&summary.rows, &summary.aggregate, &mut stdout.lock())?;
        }
    }
    if let Some(path) = &a.summary {
        write_json(&summary, Some(path))?;
    }
    Ok(())
}
