//! Degree-deviation significance heuristic for large cliques.
//!
//! Vertex degrees are bucketed by how many standard deviations they sit
//! above the mean. Bucket `i` has the Chebyshev mass `1/i² - 1/(i+1)²`. Each
//! vertex scores the χ² deviation of the bucket counts over its closed
//! neighborhood from those masses. The closed neighborhood of the top
//! scorer is then handed to a clique solver.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mce::enumerate_maximum_cliques;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub max: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor `|V| - 1`).
    pub stdev: f64,
}

pub fn degree_stats(g: &Graph) -> Result<DegreeStats> {
    let n = g.num_vertices();
    if n < 2 {
        return Err(Error::Degenerate(format!("degree statistics need 2 vertices, got {n}")));
    }
    let degrees = g.degrees();
    let mean = degrees.iter().sum::<usize>() as f64 / n as f64;
    let var = degrees
        .iter()
        .map(|&d| (d as f64 - mean).powi(2))
        .sum::<f64>()
        / (n - 1) as f64;
    Ok(DegreeStats {
        max: degrees.into_iter().max().unwrap_or(0),
        mean,
        stdev: var.sqrt(),
    })
}

/// Exact Chebyshev mass of bucket `i ≥ 1`: `(2i + 1) / (i² (i + 1)²)`.
pub fn chebyshev_mass(i: u64) -> Ratio<u128> {
    let i = u128::from(i);
    Ratio::new(2 * i + 1, i * i * (i + 1) * (i + 1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolModel {
    pub tau: usize,
    /// `probs[i - 1]` is the mass of bucket `i`.
    pub probs: Vec<f64>,
    /// Bucket of each vertex, in `1..=tau`.
    pub category: Vec<usize>,
}

/// Buckets every vertex. Vertices below the mean fall into bucket 1; a
/// regular graph (zero deviation) has a single bucket.
pub fn categorize(g: &Graph, stats: &DegreeStats) -> SymbolModel {
    let n = g.num_vertices();
    if stats.stdev == 0.0 {
        return SymbolModel {
            tau: 1,
            probs: vec![mass_f64(1)],
            category: vec![1; n],
        };
    }
    let tau = ((stats.max as f64 - stats.mean) / stats.stdev).ceil() as usize + 1;
    let category = (0..n)
        .map(|v| {
            let x = (g.degree(v) as f64 - stats.mean) / stats.stdev + 1.0;
            if x < 1.0 {
                1
            } else {
                (x.floor() as usize).clamp(1, tau)
            }
        })
        .collect();
    SymbolModel {
        tau,
        probs: (1..=tau as u64).map(mass_f64).collect(),
        category,
    }
}

fn mass_f64(i: u64) -> f64 {
    let m = chebyshev_mass(i);
    *m.numer() as f64 / *m.denom() as f64
}

/// χ² significance of each vertex over its closed neighborhood, including
/// buckets with no observations.
pub fn significance(g: &Graph, sym: &SymbolModel) -> Vec<f64> {
    let mut counts = vec![0usize; sym.tau];
    (0..g.num_vertices())
        .map(|v| {
            counts.iter_mut().for_each(|c| *c = 0);
            counts[sym.category[v] - 1] += 1;
            for &u in g.neighbors(v) {
                counts[sym.category[u] - 1] += 1;
            }
            let size = (g.degree(v) + 1) as f64;
            counts
                .iter()
                .zip(&sym.probs)
                .map(|(&o, &p)| {
                    let e = p * size;
                    (o as f64 - e).powi(2) / e
                })
                .sum()
        })
        .collect()
}

/// A solver returning one largest clique it can find.
pub trait CliqueSolver {
    fn name(&self) -> &str;
    fn find_clique(&self, g: &Graph) -> Result<Vec<usize>>;
}

/// Exact enumeration; returns the lexicographically first maximum clique.
#[derive(Debug, Clone, Default)]
pub struct ExactSolver {
    pub time_limit: Option<Duration>,
}

impl CliqueSolver for ExactSolver {
    fn name(&self) -> &str {
        "exact"
    }

    fn find_clique(&self, g: &Graph) -> Result<Vec<usize>> {
        let r = enumerate_maximum_cliques(g, self.time_limit)?;
        Ok(r.cliques.into_iter().next().unwrap_or_default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AltheaOutcome {
    pub candidate: usize,
    pub score: f64,
    /// Clique found, as vertex ids of the input graph.
    pub clique: Vec<usize>,
    /// Vertices of the input graph kept for the solver (`N[candidate]`).
    pub kept: Vec<usize>,
    pub vertex_ratio: f64,
    pub edge_ratio: f64,
    pub scoring_secs: f64,
    pub solve_secs: f64,
}

/// Top-scoring vertex (lowest id among ties) and its score.
pub fn select_candidate(g: &Graph) -> Result<(usize, f64)> {
    let stats = degree_stats(g)?;
    let sym = categorize(g, &stats);
    let scores = significance(g, &sym);
    let mut best = 0;
    for (v, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = v;
        }
    }
    Ok((best, scores[best]))
}

/// Scores the vertices, keeps the closed neighborhood of the winner, and
/// runs `solver` on it.
pub fn althea_run(g: &Graph, solver: &dyn CliqueSolver) -> Result<AltheaOutcome> {
    let t0 = Instant::now();
    let (candidate, score) = select_candidate(g)?;
    let mut kept = g.neighbors(candidate).to_vec();
    kept.push(candidate);
    kept.sort_unstable();
    let scoring_secs = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let sub = g.induced_subgraph(&kept)?;
    let local = solver.find_clique(&sub)?;
    let clique: Vec<usize> = local.iter().map(|&i| kept[i]).collect();
    let solve_secs = t1.elapsed().as_secs_f64();

    let n = g.num_vertices() as f64;
    let m = g.num_edges();
    Ok(AltheaOutcome {
        candidate,
        score,
        clique,
        vertex_ratio: (n - kept.len() as f64) / n,
        edge_ratio: if m == 0 {
            0.0
        } else {
            (m - sub.num_edges()) as f64 / m as f64
        },
        kept,
        scoring_secs,
        solve_secs,
    })
}
