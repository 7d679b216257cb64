//! Named graph-reduction strategies selectable at runtime.
//!
//! Every reduction (learned multi-stage pruning, the ω-oracle core baseline,
//! the significance heuristic, or nothing at all) implements [`Preprocessor`]
//! and is built from [`StrategyParams`] by a factory registered under a name.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::althea::select_candidate;
use crate::classifier::LinearModel;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mce::enumerate_maximum_cliques;
use crate::graph::kernels::k_core_vertices;
use crate::sparsify::{run_strategy, PruneConfig, PruneReport, Timings};

/// Reduces a graph before exact search.
pub trait Preprocessor: Send + Sync {
    fn name(&self) -> &str;
    fn reduce(&self, g: &Graph) -> Result<PruneReport>;
}

/// Inputs a factory may draw on. Unused fields are ignored.
#[derive(Debug, Clone, Default)]
pub struct StrategyParams {
    pub models: Vec<LinearModel>,
    pub q: Option<f64>,
    pub d: Option<f64>,
    pub stages: Option<usize>,
    pub time_limit: Option<Duration>,
}

type Factory = Box<dyn Fn(&StrategyParams) -> Result<Box<dyn Preprocessor>> + Send + Sync>;

struct Entry {
    description: &'static str,
    factory: Factory,
}

pub struct Registry {
    entries: BTreeMap<String, Entry>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register("none", "no reduction", |_| Ok(Box::new(Identity)));
        r.register("cc", "constant-confidence multi-stage pruning (q, stages)", |p| {
            let cfg = PruneConfig::cc(p.q.unwrap_or(0.95), p.stages.unwrap_or(p.models.len().max(1)));
            learned("cc", p, cfg)
        });
        r.register("ic", "increasing-confidence multi-stage pruning (q, d, stages)", |p| {
            let q = p.q.unwrap_or(0.55);
            let d = p.d.unwrap_or(0.05);
            let cfg = match p.stages {
                Some(stages) => PruneConfig::ic(q, d, stages),
                None => PruneConfig::ic_ending_at(q, d, 0.95)?,
            };
            learned("ic", p, cfg)
        });
        r.register("dense-1stage", "single stage at q = 0.98", |p| {
            learned("dense-1stage", p, PruneConfig::preset("dense-1stage")?)
        });
        r.register("sparse-5stage", "five CC stages at q = 0.95", |p| {
            learned("sparse-5stage", p, PruneConfig::preset("sparse-5stage")?)
        });
        r.register("omega-oracle", "(omega - 1)-core given the true clique number", |p| {
            Ok(Box::new(OmegaOracle {
                time_limit: p.time_limit,
            }))
        });
        r.register("althea", "closed neighborhood of the most significant vertex", |_| {
            Ok(Box::new(AltheaReduction))
        });
        r
    }

    pub fn register<F>(&mut self, name: &str, description: &'static str, factory: F)
    where
        F: Fn(&StrategyParams) -> Result<Box<dyn Preprocessor>> + Send + Sync + 'static,
    {
        self.entries.insert(
            name.to_string(),
            Entry {
                description,
                factory: Box::new(factory),
            },
        );
    }

    pub fn create(&self, name: &str, params: &StrategyParams) -> Result<Box<dyn Preprocessor>> {
        let entry = self.entries.get(name).ok_or_else(|| {
            Error::Config(format!(
                "unknown strategy '{name}' (known: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })?;
        (entry.factory)(params)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn describe(&self) -> impl Iterator<Item = (&str, &'static str)> {
        self.entries.iter().map(|(k, e)| (k.as_str(), e.description))
    }
}

fn learned(name: &'static str, p: &StrategyParams, cfg: PruneConfig) -> Result<Box<dyn Preprocessor>> {
    if p.models.is_empty() {
        return Err(Error::Config(format!("strategy '{name}' needs at least one model")));
    }
    cfg.thresholds()?;
    if p.models.len() != 1 && p.models.len() != cfg.stages {
        return Err(Error::Config(format!(
            "strategy '{name}' has {} stages but {} models",
            cfg.stages,
            p.models.len()
        )));
    }
    Ok(Box::new(Learned {
        name,
        models: p.models.clone(),
        cfg,
    }))
}

struct Identity;

impl Preprocessor for Identity {
    fn name(&self) -> &str {
        "none"
    }

    fn reduce(&self, g: &Graph) -> Result<PruneReport> {
        PruneReport::from_kept(g, (0..g.num_vertices()).collect(), Timings::default())
    }
}

pub struct Learned {
    name: &'static str,
    models: Vec<LinearModel>,
    cfg: PruneConfig,
}

impl Learned {
    pub fn config(&self) -> &PruneConfig {
        &self.cfg
    }
}

impl Preprocessor for Learned {
    fn name(&self) -> &str {
        self.name
    }

    fn reduce(&self, g: &Graph) -> Result<PruneReport> {
        run_strategy(g, &self.models, &self.cfg)
    }
}

/// Solves the instance for ω, then keeps the `(ω - 1)`-core.
struct OmegaOracle {
    time_limit: Option<Duration>,
}

impl Preprocessor for OmegaOracle {
    fn name(&self) -> &str {
        "omega-oracle"
    }

    fn reduce(&self, g: &Graph) -> Result<PruneReport> {
        let t = Instant::now();
        let omega = enumerate_maximum_cliques(g, self.time_limit)?.omega;
        let kept = if omega == 0 {
            Vec::new()
        } else {
            k_core_vertices(g, omega - 1)
        };
        let total = t.elapsed().as_secs_f64();
        PruneReport::from_kept(
            g,
            kept,
            Timings {
                total_secs: total,
                ..Default::default()
            },
        )
    }
}

struct AltheaReduction;

impl Preprocessor for AltheaReduction {
    fn name(&self) -> &str {
        "althea"
    }

    fn reduce(&self, g: &Graph) -> Result<PruneReport> {
        let t = Instant::now();
        let (candidate, _) = select_candidate(g)?;
        let mut kept = g.neighbors(candidate).to_vec();
        kept.push(candidate);
        let total = t.elapsed().as_secs_f64();
        PruneReport::from_kept(
            g,
            kept,
            Timings {
                total_secs: total,
                ..Default::default()
            },
        )
    }
}
