//! Single- and multi-stage probabilistic vertex pruning.

use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::{train, LabeledSet, LinearModel, TrainConfig};
use crate::error::{Error, Result};
use crate::features::{compute_vertex_features, FeatureKind, FeatureMatrix, FeatureProfile};
use crate::graph::Graph;
use crate::mce::{enumerate_maximum_cliques, MceResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Strategy {
    /// Constant confidence: every stage uses `q0`.
    Cc,
    /// Increasing confidence: stage `s` uses `q0 + (s - 1) d`.
    Ic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PruneConfig {
    pub strategy: Strategy,
    pub q0: f64,
    pub d: f64,
    pub stages: usize,
}

impl PruneConfig {
    pub fn cc(q0: f64, stages: usize) -> Self {
        Self {
            strategy: Strategy::Cc,
            q0,
            d: 0.0,
            stages,
        }
    }

    pub fn ic(q0: f64, d: f64, stages: usize) -> Self {
        Self {
            strategy: Strategy::Ic,
            q0,
            d,
            stages,
        }
    }

    /// IC schedule whose last stage lands on `last`.
    pub fn ic_ending_at(q0: f64, d: f64, last: f64) -> Result<Self> {
        if d.is_nan() || d <= 0.0 || last < q0 {
            return Err(Error::Config(format!("cannot step from {q0} to {last} by {d}")));
        }
        let stages = ((last - q0) / d).round() as usize + 1;
        Ok(Self::ic(q0, d, stages))
    }

    /// Named operating points: `dense-1stage` (q = 0.98, one stage) and
    /// `sparse-5stage` (CC, q = 0.95, five stages).
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "dense-1stage" => Ok(Self::cc(0.98, 1)),
            "sparse-5stage" => Ok(Self::cc(0.95, 5)),
            other => Err(Error::Config(format!("unknown preset '{other}'"))),
        }
    }

    /// Per-stage thresholds. Values within 1e-9 above 1 are rounded to 1.
    pub fn thresholds(&self) -> Result<Vec<f64>> {
        if self.stages == 0 {
            return Err(Error::Config("at least one stage required".into()));
        }
        if !(0.0..=1.0).contains(&self.q0) {
            return Err(Error::Config(format!("q0 = {} outside [0,1]", self.q0)));
        }
        (0..self.stages)
            .map(|s| {
                let q = match self.strategy {
                    Strategy::Cc => self.q0,
                    Strategy::Ic => self.q0 + s as f64 * self.d,
                };
                if !(0.0..=1.0 + 1e-9).contains(&q) {
                    Err(Error::Config(format!("stage {} threshold {q} outside [0,1]", s + 1)))
                } else {
                    Ok(q.min(1.0))
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub features_secs: f64,
    pub predict_secs: f64,
    pub total_secs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneReport {
    /// Vertices of the original graph removed at each stage, ascending.
    pub stage_removed: Vec<Vec<usize>>,
    pub thresholds: Vec<f64>,
    /// Original ids of the surviving vertices, ascending.
    pub kept: Vec<usize>,
    pub final_graph: Graph,
    pub vertex_ratio: f64,
    pub edge_ratio: f64,
    /// Cumulative ratios after each stage.
    pub stage_vertex_ratios: Vec<f64>,
    pub stage_edge_ratios: Vec<f64>,
    pub timings: Timings,
}

/// Serialized form of a [`PruneReport`], ids written as graph labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruneReportJson {
    pub format_version: u32,
    pub method: String,
    pub vertices: usize,
    pub edges: usize,
    pub thresholds: Vec<f64>,
    pub stage_removed: Vec<Vec<u64>>,
    pub stage_vertex_ratios: Vec<f64>,
    pub stage_edge_ratios: Vec<f64>,
    pub vertex_ratio: f64,
    pub edge_ratio: f64,
    pub remaining_vertices: usize,
    pub remaining_edges: usize,
    pub timings: Timings,
}

pub const REPORT_FORMAT_VERSION: u32 = 1;

fn ratio(removed: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        removed as f64 / total as f64
    }
}

impl PruneReport {
    /// Report for a reduction that keeps exactly `kept`.
    pub fn from_kept(original: &Graph, mut kept: Vec<usize>, timings: Timings) -> Result<Self> {
        kept.sort_unstable();
        kept.dedup();
        let final_graph = original.induced_subgraph(&kept)?;
        let mut is_kept = vec![false; original.num_vertices()];
        for &v in &kept {
            is_kept[v] = true;
        }
        let removed: Vec<usize> = (0..original.num_vertices()).filter(|&v| !is_kept[v]).collect();
        let vr = ratio(removed.len(), original.num_vertices());
        let er = ratio(original.num_edges() - final_graph.num_edges(), original.num_edges());
        Ok(Self {
            stage_removed: vec![removed],
            thresholds: Vec::new(),
            kept,
            final_graph,
            vertex_ratio: vr,
            edge_ratio: er,
            stage_vertex_ratios: vec![vr],
            stage_edge_ratios: vec![er],
            timings,
        })
    }

    pub fn to_json(&self, original: &Graph, method: &str) -> PruneReportJson {
        PruneReportJson {
            format_version: REPORT_FORMAT_VERSION,
            method: method.to_string(),
            vertices: original.num_vertices(),
            edges: original.num_edges(),
            thresholds: self.thresholds.clone(),
            stage_removed: self
                .stage_removed
                .iter()
                .map(|s| {
                    let mut ids: Vec<u64> = s.iter().map(|&v| original.label(v)).collect();
                    ids.sort_unstable();
                    ids
                })
                .collect(),
            stage_vertex_ratios: self.stage_vertex_ratios.clone(),
            stage_edge_ratios: self.stage_edge_ratios.clone(),
            vertex_ratio: self.vertex_ratio,
            edge_ratio: self.edge_ratio,
            remaining_vertices: self.final_graph.num_vertices(),
            remaining_edges: self.final_graph.num_edges(),
            timings: self.timings.clone(),
        }
    }

    /// Everything except timings.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.stage_removed == other.stage_removed
            && self.thresholds == other.thresholds
            && self.kept == other.kept
            && self.final_graph == other.final_graph
            && self.vertex_ratio.to_bits() == other.vertex_ratio.to_bits()
            && self.edge_ratio.to_bits() == other.edge_ratio.to_bits()
    }
}

/// `P(u = 0)` for every vertex of `g`.
pub fn removal_probabilities(g: &Graph, model: &LinearModel) -> Result<Vec<f64>> {
    let feats = compute_vertex_features(g, model.profile)?;
    feats.rows.iter().map(|r| model.predict_p0(r)).collect()
}

fn check_vertex_model(model: &LinearModel) -> Result<()> {
    if model.kind != FeatureKind::Vertex {
        return Err(Error::Argument("pruning needs a vertex-feature model".into()));
    }
    Ok(())
}

/// Removes every vertex with `P(u = 0) ≥ q`. Returns the induced subgraph on
/// the survivors and the removed vertex ids of `g`.
pub fn prune_once(g: &Graph, model: &LinearModel, q: f64) -> Result<(Graph, Vec<usize>)> {
    check_vertex_model(model)?;
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Config(format!("threshold {q} outside [0,1]")));
    }
    let p0 = removal_probabilities(g, model)?;
    let (removed, kept): (Vec<usize>, Vec<usize>) =
        (0..g.num_vertices()).partition(|&v| p0[v] >= q);
    Ok((g.induced_subgraph(&kept)?, removed))
}

/// Applies the per-stage models with the configured thresholds, recomputing
/// features on the surviving subgraph at each stage. A single model is
/// reused for every stage. Once the survivors have no edges the remaining
/// stages remove nothing, since the χ² features are undefined there.
pub fn run_strategy(g: &Graph, models: &[LinearModel], cfg: &PruneConfig) -> Result<PruneReport> {
    let thresholds = cfg.thresholds()?;
    if models.len() != cfg.stages && models.len() != 1 {
        return Err(Error::Config(format!(
            "{} models for {} stages",
            models.len(),
            cfg.stages
        )));
    }
    for m in models {
        check_vertex_model(m)?;
    }
    let start = Instant::now();
    let mut timings = Timings::default();
    let mut ids: Vec<usize> = (0..g.num_vertices()).collect();
    let mut current = g.clone();
    let mut stage_removed = Vec::with_capacity(cfg.stages);
    let mut stage_vertex_ratios = Vec::with_capacity(cfg.stages);
    let mut stage_edge_ratios = Vec::with_capacity(cfg.stages);
    let mut removed_total = 0;

    for (s, &q) in thresholds.iter().enumerate() {
        let model = &models[s.min(models.len() - 1)];
        let mut removed = Vec::new();
        if current.num_edges() > 0 {
            let t = Instant::now();
            let feats = compute_vertex_features(&current, model.profile)?;
            timings.features_secs += t.elapsed().as_secs_f64();
            let t = Instant::now();
            let mut kept = Vec::with_capacity(current.num_vertices());
            for (v, row) in feats.rows.iter().enumerate() {
                if model.predict_p0(row)? >= q {
                    removed.push(ids[v]);
                } else {
                    kept.push(v);
                }
            }
            timings.predict_secs += t.elapsed().as_secs_f64();
            if !removed.is_empty() {
                current = current.induced_subgraph(&kept)?;
                ids = kept.iter().map(|&v| ids[v]).collect();
            }
        }
        removed_total += removed.len();
        stage_removed.push(removed);
        stage_vertex_ratios.push(ratio(removed_total, g.num_vertices()));
        stage_edge_ratios.push(ratio(g.num_edges() - current.num_edges(), g.num_edges()));
    }
    timings.total_secs = start.elapsed().as_secs_f64();
    Ok(PruneReport {
        stage_removed,
        thresholds,
        kept: ids,
        vertex_ratio: *stage_vertex_ratios.last().unwrap(),
        edge_ratio: *stage_edge_ratios.last().unwrap(),
        final_graph: current,
        stage_vertex_ratios,
        stage_edge_ratios,
        timings,
    })
}

/// How positives are defined at later training stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageLabels {
    /// Members of a maximum clique of the original instance that survived.
    #[default]
    Original,
    /// Re-solve each surviving subgraph and use its maximum cliques.
    Resolve,
}

/// A solved training instance.
#[derive(Debug, Clone)]
pub struct TrainingInstance {
    pub name: String,
    pub graph: Graph,
    pub mce: MceResult,
}

#[derive(Debug, Clone)]
pub struct MultiStageFit {
    pub models: Vec<LinearModel>,
    /// Balanced rows used at each stage.
    pub stage_rows: Vec<usize>,
}

/// Balanced rows from a positive mask, under-sampling the larger class.
pub fn balanced_rows(
    feats: &FeatureMatrix,
    positive: &[bool],
    profile: FeatureProfile,
    seed: u64,
    source: &str,
) -> Result<LabeledSet> {
    let mce_like = MceResult {
        omega: 0,
        cliques: vec![(0..positive.len()).filter(|&v| positive[v]).collect()],
        nodes_explored: 0,
        elapsed: Default::default(),
    };
    crate::classifier::build_training_set(&mce_like, feats, profile, seed, source)
}

/// Trains one model per stage. Stage `s` fits on the balanced union of the
/// surviving vertices of every instance, then prunes each instance with its
/// threshold before stage `s + 1`.
pub fn fit_multistage(
    corpus: &[TrainingInstance],
    cfg: &PruneConfig,
    train_cfg: &TrainConfig,
    profile: FeatureProfile,
    labels: StageLabels,
) -> Result<MultiStageFit> {
    let thresholds = cfg.thresholds()?;
    let mut rng = ChaCha8Rng::seed_from_u64(train_cfg.seed);
    let mut current: Vec<(Graph, Vec<usize>)> = corpus
        .iter()
        .map(|inst| (inst.graph.clone(), (0..inst.graph.num_vertices()).collect()))
        .collect();
    let masks: Vec<Vec<bool>> = corpus
        .iter()
        .map(|inst| inst.mce.clique_vertices(inst.graph.num_vertices()))
        .collect();
    let mut models = Vec::with_capacity(cfg.stages);
    let mut stage_rows = Vec::with_capacity(cfg.stages);

    for (s, &q) in thresholds.iter().enumerate() {
        let stage = s + 1;
        let mut sets = Vec::new();
        let mut stage_feats = Vec::with_capacity(corpus.len());
        for (i, (g, ids)) in current.iter().enumerate() {
            let seed = rng.next_u64();
            if g.num_edges() == 0 {
                stage_feats.push(None);
                continue;
            }
            let feats = compute_vertex_features(g, profile)?;
            let positive: Vec<bool> = match labels {
                StageLabels::Original => ids.iter().map(|&v| masks[i][v]).collect(),
                StageLabels::Resolve => {
                    enumerate_maximum_cliques(g, None)?.clique_vertices(g.num_vertices())
                }
            };
            match balanced_rows(&feats, &positive, profile, seed, &corpus[i].name) {
                Ok(set) => sets.push(set),
                Err(Error::DegenerateLabels(_)) => {}
                Err(e) => return Err(e),
            }
            stage_feats.push(Some(feats));
        }
        let rows: usize = sets.iter().map(LabeledSet::len).sum();
        if rows == 0 {
            return Err(Error::Fit {
                stage,
                msg: "every instance has a single label class".into(),
            });
        }
        let stage_cfg = TrainConfig {
            seed: train_cfg.seed.wrapping_add(s as u64),
            ..*train_cfg
        };
        let model = train(&sets, &stage_cfg)?;

        if stage < cfg.stages {
            for ((g, ids), feats) in current.iter_mut().zip(stage_feats) {
                let Some(feats) = feats else { continue };
                let mut kept = Vec::new();
                for (v, row) in feats.rows.iter().enumerate() {
                    if model.predict_p0(row)? < q {
                        kept.push(v);
                    }
                }
                if kept.len() < g.num_vertices() {
                    *g = g.induced_subgraph(&kept)?;
                    *ids = kept.iter().map(|&v| ids[v]).collect();
                }
            }
        }
        stage_rows.push(rows);
        models.push(model);
    }
    Ok(MultiStageFit { models, stage_rows })
}
