//! Per-vertex and per-edge feature rows.
//!
//! Vertex rows hold, in order: vertex count, edge count, degree, local
//! clustering, eigencentrality, χ² of the degree, mean neighbor χ² of the
//! degree, χ² of the clustering value, mean neighbor χ² of the clustering
//! value, and the local chromatic density estimate. Each χ² is a single-cell
//! Pearson score `(o - e)² / e` against the expectation supplied by the
//! [`FeatureProfile`].

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::kernels::sorted_intersection;
use crate::graph::{
    eigencentrality, greedy_coloring, local_clustering, Coloring, Graph, DEFAULT_EIG_MAX_ITERS,
    DEFAULT_EIG_TOL,
};

pub const VERTEX_FEATURES: usize = 10;
pub const EDGE_FEATURES: usize = 9;

pub const VERTEX_COLUMNS: [&str; VERTEX_FEATURES] =
    ["F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9", "F10"];
pub const EDGE_COLUMNS: [&str; EDGE_FEATURES] =
    ["E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "E9"];

/// Floor applied to an expected clustering value of zero.
pub const EXPECTED_FLOOR: f64 = 1e-9;

/// Order of the clique-density feature used by the planted profile.
pub const PLANTED_LCC_ORDER: usize = 4;

/// Pearson's χ² statistic `Σ (O - E)² / E`.
pub fn chi_square(observed: &[f64], expected: &[f64]) -> Result<f64> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(Error::Argument(format!(
            "need equal non-empty lengths, got {} and {}",
            observed.len(),
            expected.len()
        )));
    }
    if let Some(e) = expected.iter().find(|&&e| e.is_nan() || e <= 0.0) {
        return Err(Error::Domain(format!("expected count {e} is not positive")));
    }
    Ok(observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum())
}

#[inline]
fn chi_cell(observed: f64, expected: f64) -> f64 {
    let d = observed - expected;
    d * d / expected
}

/// How expected values and the tenth vertex column are derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum FeatureProfile {
    /// Expected degree and clustering are the empirical graph means; the
    /// tenth column is the greedy local chromatic density.
    RealGraph,
    /// `G(n, p)` instances: expected degree `n·p`, the order-4 clustering
    /// replaces both the plain clustering in the χ² columns and the
    /// chromatic density, with its expectation taken from the random model.
    Planted { p: f64 },
}

impl FeatureProfile {
    pub fn parse(name: &str, p: Option<f64>) -> Result<Self> {
        match name {
            "real" | "real-graph" => Ok(Self::RealGraph),
            "planted" => {
                let p = p.ok_or_else(|| Error::Config("planted profile needs p".into()))?;
                if !(p > 0.0 && p < 1.0) {
                    return Err(Error::Config(format!("planted p={p} outside (0,1)")));
                }
                Ok(Self::Planted { p })
            }
            other => Err(Error::Config(format!("unknown feature profile '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::RealGraph => "real-graph",
            Self::Planted { .. } => "planted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Vertex,
    Edge,
}

impl FeatureKind {
    pub fn width(self) -> usize {
        match self {
            Self::Vertex => VERTEX_FEATURES,
            Self::Edge => EDGE_FEATURES,
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Self::Vertex => &VERTEX_COLUMNS,
            Self::Edge => &EDGE_COLUMNS,
        }
    }
}

/// Which graph entity a feature row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Entity {
    Vertex(usize),
    Edge(usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub kind: FeatureKind,
    pub rows: Vec<Vec<f64>>,
    pub entities: Vec<Entity>,
    /// Per-column `(mean, stdev)` when the rows have been standardized.
    pub scaling: Option<Vec<(f64, f64)>>,
}

impl FeatureMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Writes a header row (`id` plus the feature names) then one line per
    /// entity. Edge ids are written as `u-v` using graph labels.
    pub fn write_csv<W: Write>(&self, g: &Graph, mut out: W) -> Result<()> {
        write!(out, "id")?;
        for c in self.kind.columns() {
            write!(out, ",{c}")?;
        }
        writeln!(out)?;
        for (row, entity) in self.rows.iter().zip(&self.entities) {
            match *entity {
                Entity::Vertex(v) => write!(out, "{}", g.label(v))?,
                Entity::Edge(u, v) => write!(out, "{}-{}", g.label(u), g.label(v))?,
            }
            for x in row {
                write!(out, ",{x}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn ln_binomial(n: f64, k: usize) -> f64 {
    (0..k).map(|i| ((n - i as f64) / (i + 1) as f64).ln()).sum()
}

/// Number of `size`-cliques inside `candidates` (ascending ids).
fn count_cliques(g: &Graph, candidates: &[usize], size: usize) -> u64 {
    if size == 0 {
        return 1;
    }
    if size == 1 {
        return candidates.len() as u64;
    }
    if size == 2 {
        return candidates
            .iter()
            .enumerate()
            .map(|(i, &u)| {
                crate::graph::kernels::sorted_intersection_len(&candidates[i + 1..], g.neighbors(u))
                    as u64
            })
            .sum();
    }
    let mut total = 0;
    for (i, &u) in candidates.iter().enumerate() {
        let rest = sorted_intersection(&candidates[i + 1..], g.neighbors(u));
        if rest.len() + 1 >= size {
            total += count_cliques(g, &rest, size - 1);
        }
    }
    total
}

/// Order-`k` clustering of `v`: fraction of `(k-1)`-subsets of `N(v)` that
/// form a clique, so that together with `v` they induce `K_k`. Zero when
/// `deg(v) < k - 1`.
pub fn order_k_lcc(g: &Graph, v: usize, k: usize) -> Result<f64> {
    if k < 3 {
        return Err(Error::Argument(format!("order {k} is below 3")));
    }
    let d = g.degree(v);
    if d < k - 1 {
        return Ok(0.0);
    }
    let cliques = count_cliques(g, g.neighbors(v), k - 1);
    Ok(cliques as f64 / binomial(d, k - 1))
}

/// Expected order-`k` clustering in `G(n, p)`:
/// `C(n-1, k-1) · p^C(k,2) / C(⌈np⌉, k-1)`.
///
/// Falls back to `p^C(k-1,2)`, the limit of that ratio, when either binomial
/// would be empty.
pub fn expected_order_k_lcc(n: usize, p: f64, k: usize) -> f64 {
    let rounded = (n as f64 * p).ceil();
    if n < k || rounded < (k - 1) as f64 {
        return p.powi(((k - 1) * (k - 2) / 2) as i32);
    }
    let pairs = (k * (k - 1) / 2) as f64;
    let top = ln_binomial(n.saturating_sub(1) as f64, k - 1) + pairs * p.ln();
    let bottom = ln_binomial(rounded, k - 1);
    (top - bottom).exp()
}

/// Kernels shared by vertex and edge features.
#[derive(Debug, Clone)]
pub struct GraphKernels {
    pub lcc: Vec<f64>,
    pub eig: Vec<f64>,
    pub coloring: Coloring,
}

impl GraphKernels {
    pub fn compute(g: &Graph) -> Result<Self> {
        let eig = eigencentrality(g, DEFAULT_EIG_TOL, DEFAULT_EIG_MAX_ITERS)?;
        Ok(Self {
            lcc: local_clustering(g),
            eig: eig.scores,
            coloring: greedy_coloring(g),
        })
    }
}

fn neighbor_mean(g: &Graph, v: usize, values: &[f64]) -> f64 {
    let nv = g.neighbors(v);
    if nv.is_empty() {
        0.0
    } else {
        nv.iter().map(|&u| values[u]).sum::<f64>() / nv.len() as f64
    }
}

/// Vertex feature rows for every vertex of `g`.
pub fn vertex_features(
    g: &Graph,
    coloring: &Coloring,
    eig: &[f64],
    profile: FeatureProfile,
) -> Result<FeatureMatrix> {
    let n = g.num_vertices();
    if g.num_edges() == 0 {
        return Err(Error::Degenerate(
            "mean degree is zero; χ² features undefined".into(),
        ));
    }
    if coloring.colors.len() != n || eig.len() != n {
        return Err(Error::Argument("kernels were not computed on this graph".into()));
    }
    let degrees: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
    let lcc = local_clustering(g);

    let (expected_degree, density, expected_density) = match profile {
        FeatureProfile::RealGraph => {
            let mean_lcc = lcc.iter().sum::<f64>() / n as f64;
            (
                2.0 * g.num_edges() as f64 / n as f64,
                lcc.clone(),
                mean_lcc.max(EXPECTED_FLOOR),
            )
        }
        FeatureProfile::Planted { p } => {
            let lcc4 = (0..n)
                .map(|v| order_k_lcc(g, v, PLANTED_LCC_ORDER))
                .collect::<Result<Vec<_>>>()?;
            let expected = expected_order_k_lcc(n, p, PLANTED_LCC_ORDER).max(EXPECTED_FLOOR);
            (n as f64 * p, lcc4, expected)
        }
    };

    let degree_chi: Vec<f64> = degrees.iter().map(|&d| chi_cell(d, expected_degree)).collect();
    let density_chi: Vec<f64> = density
        .iter()
        .map(|&c| chi_cell(c, expected_density))
        .collect();

    let rows = (0..n)
        .map(|v| {
            let tenth = match profile {
                FeatureProfile::RealGraph => {
                    coloring.distinct_colors(g.neighbors(v)) as f64 / coloring.num_colors as f64
                }
                FeatureProfile::Planted { .. } => density[v],
            };
            vec![
                n as f64,
                g.num_edges() as f64,
                degrees[v],
                lcc[v],
                eig[v],
                degree_chi[v],
                neighbor_mean(g, v, &degree_chi),
                density_chi[v],
                neighbor_mean(g, v, &density_chi),
                tenth,
            ]
        })
        .collect();
    Ok(FeatureMatrix {
        kind: FeatureKind::Vertex,
        rows,
        entities: (0..n).map(Entity::Vertex).collect(),
        scaling: None,
    })
}

/// Computes the kernels and then the vertex features.
pub fn compute_vertex_features(g: &Graph, profile: FeatureProfile) -> Result<FeatureMatrix> {
    let kernels = GraphKernels::compute(g)?;
    vertex_features(g, &kernels.coloring, &kernels.eig, profile)
}

/// Edge feature rows, one per edge `(u, v)` with `u < v`.
pub fn edge_features(
    g: &Graph,
    coloring: &Coloring,
    lcc: &[f64],
    eig: &[f64],
) -> Result<FeatureMatrix> {
    let n = g.num_vertices();
    if coloring.colors.len() != n || lcc.len() != n || eig.len() != n {
        return Err(Error::Argument("kernels were not computed on this graph".into()));
    }
    let mut rows = Vec::with_capacity(g.num_edges());
    let mut entities = Vec::with_capacity(g.num_edges());
    for (u, v) in g.edges() {
        let (du, dv) = (g.degree(u) as f64, g.degree(v) as f64);
        let common = sorted_intersection(g.neighbors(u), g.neighbors(v));
        let c = common.len() as f64;
        // u and v are each other's neighbors, so the union is never empty
        let union = du + dv - c;
        let inverse_log: f64 = common
            .iter()
            .map(|&x| {
                let dx = g.degree(x);
                debug_assert!(dx >= 2, "a common neighbor is adjacent to both endpoints");
                1.0 / (dx as f64).ln()
            })
            .sum();
        rows.push(vec![
            c / union,
            2.0 * c / (du + dv),
            inverse_log,
            c / (du * dv).sqrt(),
            (lcc[u] + lcc[v]) / 2.0,
            (du + dv) / 2.0,
            (eig[u] + eig[v]) / 2.0,
            c,
            coloring.distinct_colors(&common) as f64 / coloring.num_colors as f64,
        ]);
        entities.push(Entity::Edge(u, v));
    }
    Ok(FeatureMatrix {
        kind: FeatureKind::Edge,
        rows,
        entities,
        scaling: None,
    })
}

pub fn compute_edge_features(g: &Graph) -> Result<FeatureMatrix> {
    let kernels = GraphKernels::compute(g)?;
    edge_features(g, &kernels.coloring, &kernels.lcc, &kernels.eig)
}

/// Edges whose common neighbors see fewer than `k - 2` colors. Such an edge
/// cannot lie in a `k`-clique, since the other `k - 2` clique members are
/// common neighbors needing distinct colors.
pub fn edges_removable_by_color_rule(g: &Graph, coloring: &Coloring, k: usize) -> Vec<(usize, usize)> {
    g.edges()
        .filter(|&(u, v)| {
            let common = sorted_intersection(g.neighbors(u), g.neighbors(v));
            coloring.distinct_colors(&common) + 2 < k
        })
        .collect()
}
