use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use mceprune::althea::{althea_run, ExactSolver};
use mceprune::classifier::{train, LabeledSet, LinearModel, TrainConfig};
use mceprune::features::{compute_edge_features, compute_vertex_features, FeatureProfile};
use mceprune::graph::{load_edge_list, write_dimacs, write_edge_list, InputFormat};
use mceprune::mce::{enumerate_maximum_cliques, evaluate, Evaluation, MceResult};
use mceprune::sparsify::{
    fit_multistage, PruneConfig, PruneReportJson, StageLabels, Strategy, TrainingInstance,
};
use mceprune::strategy::{Registry, StrategyParams};
use mceprune::synth::{build_planted_corpus, regenerate_corpus, CorpusManifest};
use mceprune::Graph;

use crate::args::*;
use crate::config::Config;

pub const OUTPUT_FORMAT_VERSION: u32 = 1;

pub fn guess_format(path: &Path, flag: Option<GraphFormat>) -> InputFormat {
    match flag {
        Some(GraphFormat::Dimacs) => InputFormat::Dimacs,
        Some(GraphFormat::Edgelist) => InputFormat::EdgeList,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some("dimacs" | "clq" | "col") => InputFormat::Dimacs,
            _ => InputFormat::EdgeList,
        },
    }
}

pub fn read_graph(path: &Path, format: Option<GraphFormat>) -> Result<Graph> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    load_edge_list(BufReader::new(file), guess_format(path, format))
        .with_context(|| format!("reading {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

/// Runs `f` on the file at `path`, or on stdout.
fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

pub fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    with_output(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

pub fn seconds(secs: Option<f64>) -> Result<Option<Duration>> {
    match secs {
        None => Ok(None),
        Some(s) if s.is_finite() && s >= 0.0 => Ok(Some(Duration::from_secs_f64(s))),
        Some(s) => bail!("time limit {s} is not a non-negative number of seconds"),
    }
}

fn ensure_distinct(input: &Path, outputs: &[Option<&Path>]) -> Result<()> {
    for out in outputs.iter().flatten() {
        if *out == input {
            bail!("output {} would overwrite the input", out.display());
        }
    }
    Ok(())
}

fn resolve_profile(cfg: &Config, name: Option<String>, p: Option<f64>) -> Result<FeatureProfile> {
    let name = cfg.or_default(name, "profile", "real-graph".to_string())?;
    let p = cfg.or(p, "p")?;
    Ok(FeatureProfile::parse(&name, p)?)
}

pub fn convert(a: &ConvertArgs) -> Result<()> {
    ensure_distinct(&a.graph.input, &[Some(&a.output)])?;
    let g = read_graph(&a.graph.input, a.graph.format)?;
    with_output(Some(&a.output), |w| {
        match a.to {
            GraphFormat::Dimacs => write_dimacs(&g, w)?,
            GraphFormat::Edgelist => write_edge_list(&g, w)?,
        }
        Ok(())
    })
}

pub fn solve(a: &SolveArgs, cfg: &Config) -> Result<()> {
    let g = read_graph(&a.graph.input, a.graph.format)?;
    let limit = seconds(cfg.or(a.time_limit, "time-limit")?)?;
    let r = enumerate_maximum_cliques(&g, limit)?;
    write_json(&r.summary(&g), a.output.as_deref())
}

pub fn features(a: &FeaturesArgs, cfg: &Config) -> Result<()> {
    let g = read_graph(&a.graph.input, a.graph.format)?;
    let m = match a.kind {
        Kind::Vertex => compute_vertex_features(&g, resolve_profile(cfg, a.profile.clone(), a.p)?)?,
        Kind::Edge => compute_edge_features(&g)?,
    };
    with_output(a.output.as_deref(), |w| Ok(m.write_csv(&g, w)?))
}

/// Pruning schedule from flags and config; CC with one stage at q = 0.95 by default.
pub fn resolve_schedule(s: &StageArgs, cfg: &Config) -> Result<PruneConfig> {
    let strategy = cfg.or_default(s.strategy.clone(), "strategy", "cc".to_string())?;
    let q = cfg.or_default(s.q, "q", 0.95)?;
    let stages = cfg.or(s.stages, "stages")?;
    let pc = match strategy.as_str() {
        "cc" => PruneConfig::cc(q, stages.unwrap_or(1)),
        "ic" => {
            let d = cfg.or_default(s.d, "d", 0.05)?;
            match stages {
                Some(l) => PruneConfig::ic(q, d, l),
                None => PruneConfig::ic_ending_at(q, d, 0.95)?,
            }
        }
        other => bail!("unknown pruning strategy '{other}' (expected cc or ic)"),
    };
    pc.thresholds()?;
    Ok(pc)
}

#[derive(Debug, Serialize)]
struct ModelSummary {
    file: String,
    threshold: f64,
    training_rows: usize,
    bias: f64,
    ranking: Vec<(&'static str, f64)>,
    corpus_digest: String,
}

#[derive(Debug, Serialize)]
struct TrainSummary {
    format_version: u32,
    source: String,
    profile: FeatureProfile,
    strategy: Strategy,
    thresholds: Vec<f64>,
    stage_labels: StageLabels,
    train_config: TrainConfig,
    stage_rows: Vec<usize>,
    models: Vec<ModelSummary>,
}

pub fn train_models(a: &TrainArgs, cfg: &Config) -> Result<()> {
    let schedule = resolve_schedule(&a.stage, cfg)?;
    let thresholds = schedule.thresholds()?;
    let defaults = TrainConfig::default();
    let tc = TrainConfig {
        epochs: cfg.or_default(a.epochs, "epochs", defaults.epochs)?,
        l2: cfg.or_default(a.l2, "l2", defaults.l2)?,
        learning_rate: cfg.or_default(a.learning_rate, "learning-rate", defaults.learning_rate)?,
        seed: cfg.or_default(a.seed, "seed", defaults.seed)?,
    };
    let labels = match cfg
        .or_default(a.stage_labels.clone(), "stage-labels", "original".to_string())?
        .as_str()
    {
        "original" => StageLabels::Original,
        "resolve" => StageLabels::Resolve,
        other => bail!("unknown stage-labels '{other}' (expected original or resolve)"),
    };
    let manifest: Option<PathBuf> = cfg.or(a.manifest.clone(), "manifest")?;
    let rows: Option<PathBuf> = cfg.or(a.rows.clone(), "rows")?;
    let graphs: Vec<PathBuf> = if a.graphs.is_empty() {
        cfg.list("graphs").into_iter().map(PathBuf::from).collect()
    } else {
        a.graphs.clone()
    };

    let (source, profile, models, stage_rows) = if let Some(path) = manifest {
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let manifest: CorpusManifest = serde_json::from_str(&text)?;
        let corpus = regenerate_corpus(&manifest)?;
        let profile = corpus.set.profile;
        if schedule.stages == 1 {
            let model = train(std::slice::from_ref(&corpus.set), &tc)?;
            (format!("manifest:{}", path.display()), profile, vec![model], vec![corpus.set.len()])
        } else {
            let instances: Vec<TrainingInstance> = corpus
                .instances
                .into_iter()
                .map(|inst| TrainingInstance {
                    name: format!("planted-s{}", inst.seed),
                    mce: MceResult {
                        omega: inst.k,
                        cliques: vec![inst.planted],
                        nodes_explored: 0,
                        elapsed: Duration::ZERO,
                    },
                    graph: inst.graph,
                })
                .collect();
            let fit = fit_multistage(&instances, &schedule, &tc, profile, StageLabels::Original)?;
            (format!("manifest:{}", path.display()), profile, fit.models, fit.stage_rows)
        }
    } else if let Some(path) = rows {
        if schedule.stages != 1 {
            bail!("a rows file supports a single stage only; use --graphs or --manifest");
        }
        let profile = resolve_profile(cfg, a.profile.clone(), a.p)?;
        let file = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
        let set = LabeledSet::read_csv(BufReader::new(file), profile)?;
        let model = train(std::slice::from_ref(&set), &tc)?;
        (format!("rows:{}", path.display()), profile, vec![model], vec![set.len()])
    } else if !graphs.is_empty() {
        let profile = resolve_profile(cfg, a.profile.clone(), a.p)?;
        let mut instances = Vec::with_capacity(graphs.len());
        for path in &graphs {
            let graph = read_graph(path, a.format)?;
            let mce = enumerate_maximum_cliques(&graph, None)?;
            instances.push(TrainingInstance {
                name: path.display().to_string(),
                graph,
                mce,
            });
        }
        let fit = fit_multistage(&instances, &schedule, &tc, profile, labels)?;
        (format!("graphs:{}", graphs.len()), profile, fit.models, fit.stage_rows)
    } else {
        bail!("no training input: give --manifest, --rows, or --graphs");
    };

    fs::create_dir_all(&a.output_dir)
        .with_context(|| format!("creating {}", a.output_dir.display()))?;
    let mut summaries = Vec::with_capacity(models.len());
    for (i, (model, &q)) in models.iter().zip(&thresholds).enumerate() {
        let file = format!("model-stage{}.json", i + 1);
        let path = a.output_dir.join(&file);
        with_output(Some(&path), |w| {
            w.write_all(model.to_json()?.as_bytes())?;
            writeln!(w)?;
            Ok(())
        })?;
        summaries.push(ModelSummary {
            file,
            threshold: q,
            training_rows: model.training_rows,
            bias: model.bias,
            ranking: model.coefficient_ranking(),
            corpus_digest: model.corpus_digest.clone(),
        });
    }
    let summary = TrainSummary {
        format_version: OUTPUT_FORMAT_VERSION,
        source,
        profile,
        strategy: schedule.strategy,
        thresholds,
        stage_labels: labels,
        train_config: tc,
        stage_rows,
        models: summaries,
    };
    write_json(&summary, Some(&a.output_dir.join("train-summary.json")))
}

pub fn load_models(paths: &[PathBuf]) -> Result<Vec<LinearModel>> {
    paths
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).with_context(|| format!("reading model {}", p.display()))?;
            LinearModel::from_json(&text).with_context(|| format!("loading model {}", p.display()))
        })
        .collect()
}

/// Strategy name and parameters from flags and config.
pub fn resolve_reduction(
    r: &ReductionArgs,
    cfg: &Config,
    time_limit: Option<Duration>,
) -> Result<(String, StrategyParams)> {
    let method = match (&r.preset, &r.method) {
        (Some(p), _) => p.clone(),
        (None, Some(m)) => m.clone(),
        (None, None) => match cfg.get::<String>("preset")? {
            Some(p) => p,
            None => cfg.or_default(None, "method", "cc".to_string())?,
        },
    };
    let model_paths: Vec<PathBuf> = if r.models.is_empty() {
        cfg.list("models").into_iter().map(PathBuf::from).collect()
    } else {
        r.models.clone()
    };
    let params = StrategyParams {
        models: load_models(&model_paths)?,
        q: cfg.or(r.q, "q")?,
        d: cfg.or(r.d, "d")?,
        stages: cfg.or(r.stages, "stages")?,
        time_limit,
    };
    Ok((method, params))
}

#[derive(Debug, Serialize)]
pub struct PruneOutput {
    #[serde(flatten)]
    pub report: PruneReportJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<Evaluation>,
}

pub fn prune(a: &PruneArgs, cfg: &Config) -> Result<()> {
    ensure_distinct(&a.graph.input, &[a.report.as_deref(), a.output.as_deref()])?;
    let g = read_graph(&a.graph.input, a.graph.format)?;
    let limit = seconds(cfg.or(a.time_limit, "time-limit")?)?;
    let (method, params) = resolve_reduction(&a.reduction, cfg, limit)?;
    let pre = Registry::with_builtins().create(&method, &params)?;
    let report = pre.reduce(&g)?;
    let evaluation = if a.evaluate {
        let before = enumerate_maximum_cliques(&g, limit)?;
        let after = enumerate_maximum_cliques(&report.final_graph, limit)?;
        Some(evaluate(&g, &before, &report.final_graph, &after))
    } else {
        None
    };
    if let Some(out) = &a.output {
        with_output(Some(out), |w| Ok(write_dimacs(&report.final_graph, w)?))?;
    }
    let output = PruneOutput {
        report: report.to_json(&g, pre.name()),
        evaluation,
    };
    write_json(&output, a.report.as_deref())
}

#[derive(Debug, Serialize)]
pub struct AltheaTimings {
    pub scoring_secs: f64,
    pub solve_secs: f64,
}

#[derive(Debug, Serialize)]
pub struct AltheaOutput {
    pub format_version: u32,
    pub candidate: u64,
    pub score: f64,
    pub clique_size: usize,
    pub clique: Vec<u64>,
    pub kept_vertices: usize,
    pub vertex_ratio: f64,
    pub edge_ratio: f64,
    pub timings: AltheaTimings,
}

pub fn althea(a: &AltheaArgs, cfg: &Config) -> Result<()> {
    let g = read_graph(&a.graph.input, a.graph.format)?;
    let solver = ExactSolver {
        time_limit: seconds(cfg.or(a.time_limit, "time-limit")?)?,
    };
    let out = althea_run(&g, &solver)?;
    let mut clique: Vec<u64> = out.clique.iter().map(|&v| g.label(v)).collect();
    clique.sort_unstable();
    write_json(
        &AltheaOutput {
            format_version: OUTPUT_FORMAT_VERSION,
            candidate: g.label(out.candidate),
            score: out.score,
            clique_size: clique.len(),
            clique,
            kept_vertices: out.kept.len(),
            vertex_ratio: out.vertex_ratio,
            edge_ratio: out.edge_ratio,
            timings: AltheaTimings {
                scoring_secs: out.scoring_secs,
                solve_secs: out.solve_secs,
            },
        },
        a.output.as_deref(),
    )
}

pub fn generate(a: &GenArgs, cfg: &Config) -> Result<()> {
    let n = cfg.or_default(a.n, "n", 64)?;
    let p = cfg.or_default(a.p, "p", 0.5)?;
    let k = cfg.or_default(a.k, "k", 10)?;
    let rows = cfg.or_default(a.rows, "rows", 2000)?;
    let seed = cfg.or_default(a.seed, "seed", 0)?;
    let corpus = build_planted_corpus(n, p, k, rows, seed)?;
    fs::create_dir_all(&a.output_dir)
        .with_context(|| format!("creating {}", a.output_dir.display()))?;
    write_json(&corpus.manifest, Some(&a.output_dir.join("manifest.json")))?;
    with_output(Some(&a.output_dir.join("training.csv")), |w| Ok(corpus.set.write_csv(w)?))?;
    if a.write_graphs || cfg.get::<bool>("write-graphs")?.unwrap_or(false) {
        for (entry, inst) in corpus.manifest.instances.iter().zip(&corpus.instances) {
            let path = a
                .output_dir
                .join("instances")
                .join(format!("planted-{:04}.dimacs", entry.index));
            with_output(Some(&path), |w| Ok(write_dimacs(&inst.graph, w)?))?;
        }
    }
    Ok(())
}

pub fn list_strategies() -> Result<()> {
    let registry = Registry::with_builtins();
    let stdout = io::stdout();
    let mut w = stdout.lock();
    for (name, description) in registry.describe() {
        writeln!(w, "{name:<14} {description}")?;
    }
    Ok(())
}
