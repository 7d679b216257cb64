//! Erdős–Rényi graphs, planted cliques, and planted-clique training corpora.
//!
//! All randomness goes through ChaCha8 seeded from a `u64`, so a corpus is
//! fully described by its manifest.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::LabeledSet;
use crate::error::{Error, Result};
use crate::features::{compute_vertex_features, FeatureKind, FeatureProfile};
use crate::graph::Graph;

pub const GENERATOR_NAME: &str = "chacha8-rand0.8";
pub const MANIFEST_VERSION: u32 = 1;

const PLANT_STREAM: u64 = 0x9E37_79B9_7F4A_7C15;
const SAMPLE_STREAM: u64 = 0xD1B5_4A32_D192_ED03;

/// `G(n, p)`: each of the `C(n, 2)` pairs is an edge independently with
/// probability `p`, pairs visited in lexicographic order.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Argument(format!("edge probability {p} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    pub graph: Graph,
    /// Sorted vertices of the planted clique.
    pub planted: Vec<usize>,
    pub n: usize,
    pub p: f64,
    pub k: usize,
    pub seed: u64,
}

/// Adds a clique on a uniformly random `k`-subset. The input is untouched.
pub fn plant_clique(g: &Graph, k: usize, seed: u64) -> Result<(Graph, Vec<usize>)> {
    let n = g.num_vertices();
    if k > n {
        return Err(Error::Argument(format!("clique size {k} exceeds {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut planted = rand::seq::index::sample(&mut rng, n, k).into_vec();
    planted.sort_unstable();
    Ok((g.with_clique(&planted)?, planted))
}

/// `G(n, p)` with a planted `k`-clique, both drawn from `seed`.
pub fn planted_instance(n: usize, p: f64, k: usize, seed: u64) -> Result<PlantedInstance> {
    let h = gen_gnp(n, p, seed)?;
    let (graph, planted) = plant_clique(&h, k, seed ^ PLANT_STREAM)?;
    Ok(PlantedInstance {
        graph,
        planted,
        n,
        p,
        k,
        seed,
    })
}

/// Greatest `w` with `C(n, w) · p^C(w,2) ≥ ln n`, evaluated in log space.
pub fn expected_clique_number(n: usize, p: f64) -> Result<usize> {
    if n < 2 || !(p > 0.0 && p < 1.0) {
        return Err(Error::Argument(format!("need n >= 2 and 0 < p < 1, got n={n}, p={p}")));
    }
    let target = (n as f64).ln().ln();
    let ln_p = p.ln();
    let mut ln_choose = 0.0;
    let mut best = 0;
    for w in 1..=n {
        ln_choose += ((n - w + 1) as f64 / w as f64).ln();
        let pairs = (w * (w - 1) / 2) as f64;
        if ln_choose + pairs * ln_p >= target {
            best = w;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub index: usize,
    pub seed: u64,
}

/// Everything needed to regenerate a planted corpus bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub format_version: u32,
    pub generator: String,
    pub n: usize,
    pub p: f64,
    pub k: usize,
    pub min_rows: usize,
    pub seed: u64,
    pub instances: Vec<ManifestEntry>,
}

#[derive(Debug, Clone)]
pub struct PlantedCorpus {
    pub manifest: CorpusManifest,
    pub instances: Vec<PlantedInstance>,
    pub set: LabeledSet,
}

/// Balanced rows for one instance: every planted vertex as a positive and
/// `k` uniformly sampled non-clique vertices as negatives.
pub fn planted_rows(inst: &PlantedInstance, profile: FeatureProfile) -> Result<LabeledSet> {
    let feats = compute_vertex_features(&inst.graph, profile)?;
    let outside: Vec<usize> = (0..inst.n)
        .filter(|v| inst.planted.binary_search(v).is_err())
        .collect();
    let take = inst.k.min(outside.len());
    let mut rng = ChaCha8Rng::seed_from_u64(inst.seed ^ SAMPLE_STREAM);
    let mut negatives: Vec<usize> = rand::seq::index::sample(&mut rng, outside.len(), take)
        .into_iter()
        .map(|i| outside[i])
        .collect();
    negatives.sort_unstable();
    let name = format!("planted-n{}-k{}-s{}", inst.n, inst.k, inst.seed);
    let mut set = LabeledSet::new(FeatureKind::Vertex, profile);
    for &v in &inst.planted {
        set.push(feats.rows[v].clone(), 1, &name);
    }
    for &v in &negatives {
        set.push(feats.rows[v].clone(), 0, &name);
    }
    set.balanced = take == inst.k;
    Ok(set)
}

/// Per-instance seeds drawn from a master ChaCha8 stream.
pub fn instance_seeds(master: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..count).map(|_| rng.next_u64()).collect()
}

/// Generates planted instances until at least `min_rows` labelled rows exist.
pub fn build_planted_corpus(
    n: usize,
    p: f64,
    k: usize,
    min_rows: usize,
    seed: u64,
) -> Result<PlantedCorpus> {
    if k > n {
        return Err(Error::Argument(format!("clique size {k} exceeds {n} vertices")));
    }
    if k == 0 {
        return Err(Error::Argument("clique size must be positive".into()));
    }
    let per_instance = 2 * k.min(n - k).max(1);
    let count = min_rows.div_ceil(per_instance).max(1);
    let manifest = CorpusManifest {
        format_version: MANIFEST_VERSION,
        generator: GENERATOR_NAME.into(),
        n,
        p,
        k,
        min_rows,
        seed,
        instances: instance_seeds(seed, count)
            .into_iter()
            .enumerate()
            .map(|(index, seed)| ManifestEntry { index, seed })
            .collect(),
    };
    regenerate_corpus(&manifest)
}

/// Rebuilds the corpus listed in `manifest`.
pub fn regenerate_corpus(manifest: &CorpusManifest) -> Result<PlantedCorpus> {
    if manifest.format_version != MANIFEST_VERSION {
        return Err(Error::Version(manifest.format_version));
    }
    let profile = FeatureProfile::Planted { p: manifest.p };
    let mut set = LabeledSet::new(FeatureKind::Vertex, profile);
    let mut instances = Vec::with_capacity(manifest.instances.len());
    for entry in &manifest.instances {
        let inst = planted_instance(manifest.n, manifest.p, manifest.k, entry.seed)?;
        set.extend(planted_rows(&inst, profile)?)?;
        instances.push(inst);
    }
    Ok(PlantedCorpus {
        manifest: manifest.clone(),
        instances,
        set,
    })
}
