//! Balanced training sets and an L2-regularized logistic model fitted by SGD.

use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::features::{FeatureKind, FeatureMatrix, FeatureProfile};
use crate::mce::MceResult;

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Labelled feature rows; label 1 marks a vertex of some maximum clique.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSet {
    pub kind: FeatureKind,
    pub profile: FeatureProfile,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
    pub balanced: bool,
    /// Instance name per row.
    pub sources: Vec<String>,
}

impl LabeledSet {
    pub fn new(kind: FeatureKind, profile: FeatureProfile) -> Self {
        Self {
            kind,
            profile,
            rows: Vec::new(),
            labels: Vec::new(),
            balanced: true,
            sources: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    pub fn push(&mut self, row: Vec<f64>, label: u8, source: &str) {
        self.rows.push(row);
        self.labels.push(label);
        self.sources.push(source.to_string());
    }

    /// Appends `other`; the result stays balanced only if both parts were.
    pub fn extend(&mut self, other: LabeledSet) -> Result<()> {
        if other.kind != self.kind || other.profile != self.profile {
            return Err(Error::Argument("cannot merge sets of different feature kinds".into()));
        }
        self.balanced &= other.balanced;
        self.rows.extend(other.rows);
        self.labels.extend(other.labels);
        self.sources.extend(other.sources);
        Ok(())
    }

    /// CSV with the feature columns, `label`, and `source`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{},label,source", self.kind.columns().join(","))?;
        for ((row, label), source) in self.rows.iter().zip(&self.labels).zip(&self.sources) {
            for x in row {
                write!(out, "{x},")?;
            }
            writeln!(out, "{label},{source}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(reader: R, profile: FeatureProfile) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let header = match lines.next() {
            Some((_, line)) => line?,
            None => return Err(Error::Format("empty training set".into())),
        };
        let width = header.split(',').count().saturating_sub(2);
        let kind = match width {
            10 => FeatureKind::Vertex,
            9 => FeatureKind::Edge,
            w => return Err(Error::Format(format!("unexpected feature width {w}"))),
        };
        let mut set = LabeledSet::new(kind, profile);
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != width + 2 {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected {} columns", width + 2),
                });
            }
            let row = cols[..width]
                .iter()
                .map(|c| c.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })?;
            let label = match cols[width] {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("label '{other}' is not 0/1"),
                    })
                }
            };
            set.push(row, label, cols[width + 1]);
        }
        let pos = set.positives();
        set.balanced = 2 * pos == set.len();
        Ok(set)
    }
}

/// Labels each vertex by membership in `V(M)` and under-samples the larger
/// class uniformly to the size of the smaller one.
pub fn build_training_set(
    mce: &MceResult,
    feats: &FeatureMatrix,
    profile: FeatureProfile,
    seed: u64,
    source: &str,
) -> Result<LabeledSet> {
    if feats.kind != FeatureKind::Vertex {
        return Err(Error::Argument("vertex features required".into()));
    }
    let positive = mce.clique_vertices(feats.len());
    let label_of = |i: usize| u8::from(positive[i]);
    let pos: Vec<usize> = (0..feats.len()).filter(|&i| positive[i]).collect();
    let neg: Vec<usize> = (0..feats.len()).filter(|&i| !positive[i]).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::DegenerateLabels(format!(
            "{source}: {} positive and {} negative vertices",
            pos.len(),
            neg.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (small, large) = if pos.len() <= neg.len() {
        (pos, neg)
    } else {
        (neg, pos)
    };
    let mut chosen: Vec<usize> = rand::seq::index::sample(&mut rng, large.len(), small.len())
        .into_iter()
        .map(|i| large[i])
        .chain(small.iter().copied())
        .collect();
    chosen.sort_unstable();
    let mut set = LabeledSet::new(FeatureKind::Vertex, profile);
    for i in chosen {
        set.push(feats.rows[i].clone(), label_of(i), source);
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub l2: f64,
    /// Base rate; epoch `e` (from 1) uses `learning_rate / sqrt(e)`.
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 400,
            l2: 1e-4,
            learning_rate: 0.01,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub means: Vec<f64>,
    pub stdevs: Vec<f64>,
}

impl Scaling {
    fn fit(rows: &[&[f64]], width: usize) -> Self {
        let n = rows.len() as f64;
        let mut means = vec![0.0; width];
        let mut stdevs = vec![1.0; width];
        for j in 0..width {
            let (lo, hi) = rows
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                    (lo.min(r[j]), hi.max(r[j]))
                });
            let mean = rows.iter().map(|r| r[j]).sum::<f64>() / n;
            means[j] = mean;
            if hi > lo {
                let var = rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
                stdevs[j] = var.sqrt();
            }
        }
        Self { means, stdevs }
    }

    fn apply(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.means.iter().zip(&self.stdevs))
            .map(|(x, (m, s))| (x - m) / s)
            .collect()
    }
}

/// Logistic model `P(u = 1) = σ(w · scale(x) + b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub format_version: u32,
    pub kind: FeatureKind,
    pub profile: FeatureProfile,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub scaling: Scaling,
    pub hyperparams: TrainConfig,
    pub schedule: String,
    pub training_rows: usize,
    pub corpus_digest: String,
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn digest(sets: &[&LabeledSet]) -> String {
    let mut h = Sha256::new();
    for set in sets {
        for (row, label) in set.rows.iter().zip(&set.labels) {
            for x in row {
                h.update(x.to_le_bytes());
            }
            h.update([*label]);
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Fits a logistic model by SGD over the union of `sets`.
///
/// Columns are standardized first; each epoch visits the rows in a fresh
/// seeded shuffle. The result is a pure function of the inputs and config.
pub fn train(sets: &[LabeledSet], cfg: &TrainConfig) -> Result<LinearModel> {
    let first = sets
        .iter()
        .find(|s| !s.is_empty())
        .ok_or_else(|| Error::Argument("no training rows".into()))?;
    let (kind, profile) = (first.kind, first.profile);
    let width = kind.width();
    let mut rows: Vec<&[f64]> = Vec::new();
    let mut labels: Vec<f64> = Vec::new();
    for set in sets {
        if set.kind != kind || set.profile != profile {
            return Err(Error::Argument("training sets mix feature kinds".into()));
        }
        for (row, &label) in set.rows.iter().zip(&set.labels) {
            if row.len() != width {
                return Err(Error::Argument(format!(
                    "row width {} != {width}",
                    row.len()
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::Data("non-finite feature value".into()));
            }
            rows.push(row);
            labels.push(f64::from(label));
        }
    }
    let scaling = Scaling::fit(&rows, width);
    let scaled: Vec<Vec<f64>> = rows.iter().map(|r| scaling.apply(r)).collect();

    let mut w = vec![0.0; width];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..scaled.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for epoch in 1..=cfg.epochs {
        let lr = cfg.learning_rate / (epoch as f64).sqrt();
        order.shuffle(&mut rng);
        for &i in &order {
            let x = &scaled[i];
            let z: f64 = b + w.iter().zip(x).map(|(wi, xi)| wi * xi).sum::<f64>();
            let g = sigmoid(z) - labels[i];
            for (wi, xi) in w.iter_mut().zip(x) {
                *wi -= lr * (g * xi + cfg.l2 * *wi);
            }
            b -= lr * g;
        }
    }
    let refs: Vec<&LabeledSet> = sets.iter().collect();
    Ok(LinearModel {
        format_version: MODEL_FORMAT_VERSION,
        kind,
        profile,
        weights: w,
        bias: b,
        scaling,
        hyperparams: *cfg,
        schedule: "inverse-sqrt-epoch".into(),
        training_rows: rows.len(),
        corpus_digest: digest(&refs),
    })
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u32,
}

impl LinearModel {
    /// A model that assigns the same probability to every row.
    pub fn constant(kind: FeatureKind, profile: FeatureProfile, bias: f64) -> Self {
        let width = kind.width();
        Self {
            format_version: MODEL_FORMAT_VERSION,
            kind,
            profile,
            weights: vec![0.0; width],
            bias,
            scaling: Scaling {
                means: vec![0.0; width],
                stdevs: vec![1.0; width],
            },
            hyperparams: TrainConfig::default(),
            schedule: "none".into(),
            training_rows: 0,
            corpus_digest: String::new(),
        }
    }

    fn margin(&self, row: &[f64]) -> Result<f64> {
        if row.len() != self.weights.len() {
            return Err(Error::Argument(format!(
                "row width {} != model width {}",
                row.len(),
                self.weights.len()
            )));
        }
        Ok(self.bias
            + self
                .scaling
                .apply(row)
                .iter()
                .zip(&self.weights)
                .map(|(x, w)| x * w)
                .sum::<f64>())
    }

    /// Probability that the entity belongs to a solution.
    pub fn predict_p1(&self, row: &[f64]) -> Result<f64> {
        Ok(sigmoid(self.margin(row)?))
    }

    /// Probability that the entity is not in any solution.
    pub fn predict_p0(&self, row: &[f64]) -> Result<f64> {
        Ok(1.0 - self.predict_p1(row)?)
    }

    /// Mean log-loss over the given sets.
    pub fn log_loss(&self, sets: &[LabeledSet]) -> Result<f64> {
        let mut total = 0.0;
        let mut count = 0usize;
        for set in sets {
            for (row, &label) in set.rows.iter().zip(&set.labels) {
                let p = self.predict_p1(row)?.clamp(1e-15, 1.0 - 1e-15);
                total -= if label == 1 { p.ln() } else { (1.0 - p).ln() };
                count += 1;
            }
        }
        Ok(total / count.max(1) as f64)
    }

    /// Fraction of rows classified correctly at the 0.5 cut.
    pub fn accuracy(&self, sets: &[LabeledSet]) -> Result<f64> {
        let mut hits = 0usize;
        let mut count = 0usize;
        for set in sets {
            for (row, &label) in set.rows.iter().zip(&set.labels) {
                let predicted = u8::from(self.predict_p1(row)? >= 0.5);
                hits += usize::from(predicted == label);
                count += 1;
            }
        }
        Ok(hits as f64 / count.max(1) as f64)
    }

    /// Features ranked by absolute standardized weight, largest first.
    pub fn coefficient_ranking(&self) -> Vec<(&'static str, f64)> {
        let mut ranked: Vec<(&'static str, f64)> = self
            .kind
            .columns()
            .iter()
            .zip(&self.weights)
            .map(|(&name, w)| (name, w.abs()))
            .collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
        ranked
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let probe: VersionProbe = serde_json::from_str(text)?;
        if probe.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Version(probe.format_version));
        }
        Ok(serde_json::from_str(text)?)
    }
}
