//! Exact enumeration of all maximum cliques.
//!
//! Branch and bound over bitset candidate sets. Candidates are greedily
//! colored at every node and branched in descending color order; a branch
//! is cut once `|C| + color < best`, which keeps ties alive so every
//! optimum-size clique is collected. A greedy clique seeds the bound and a
//! `(lb - 1)`-core reduction shrinks the search graph before bitsets are
//! built.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::kernels::k_core_vertices;
use crate::graph::{k_core_prune, Graph};

/// All maximum cliques of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MceResult {
    pub omega: usize,
    /// Each clique sorted ascending; the list sorted lexicographically.
    pub cliques: Vec<Vec<usize>>,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

impl MceResult {
    pub fn count(&self) -> usize {
        self.cliques.len()
    }

    /// Membership mask of `V(M)`, the union of all maximum cliques.
    pub fn clique_vertices(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for c in &self.cliques {
            for &v in c {
                mask[v] = true;
            }
        }
        mask
    }

    /// Cliques written with the graph's external labels.
    pub fn labelled_cliques(&self, g: &Graph) -> Vec<Vec<u64>> {
        self.cliques
            .iter()
            .map(|c| c.iter().map(|&v| g.label(v)).collect())
            .collect()
    }

    /// JSON-facing summary.
    pub fn summary(&self, g: &Graph) -> MceSummary {
        MceSummary {
            omega: self.omega,
            count: self.count(),
            cliques: self.labelled_cliques(g),
            nodes_explored: self.nodes_explored,
            elapsed_secs: self.elapsed.as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MceSummary {
    pub omega: usize,
    pub count: usize,
    pub cliques: Vec<Vec<u64>>,
    pub nodes_explored: u64,
    pub elapsed_secs: f64,
}

#[derive(Clone)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(64)],
        }
    }

    #[inline]
    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn and_not(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }
}

struct Search<'a> {
    adj: Vec<BitSet>,
    /// search index -> vertex id in the input graph
    original: &'a [usize],
    best: usize,
    found: Vec<Vec<usize>>,
    clique: Vec<usize>,
    nodes: u64,
    start: Instant,
    deadline: Option<Duration>,
    timed_out: bool,
}

impl Search<'_> {
    fn color_sort(&self, p: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut uncolored = p.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                uncolored.remove(v);
                q.and_not(&self.adj[v]);
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }

    fn record(&mut self) {
        let size = self.clique.len();
        if size > self.best {
            self.best = size;
            self.found.clear();
        }
        if size == self.best {
            let mut c: Vec<usize> = self.clique.iter().map(|&i| self.original[i]).collect();
            c.sort_unstable();
            self.found.push(c);
        }
    }

    fn expand(&mut self, mut p: BitSet) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(limit) = self.deadline {
                if self.start.elapsed() > limit {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return;
        }
        let (order, colors) = self.color_sort(&p);
        for i in (0..order.len()).rev() {
            if self.clique.len() + colors[i] < self.best {
                return;
            }
            let v = order[i];
            self.clique.push(v);
            let next = p.intersection(&self.adj[v]);
            if next.is_empty() {
                self.record();
            } else {
                self.expand(next);
            }
            self.clique.pop();
            p.remove(v);
            if self.timed_out {
                return;
            }
        }
    }
}

/// Greedy clique: start from high-degree vertices and repeatedly add the
/// highest-degree common neighbor.
fn greedy_clique_size(g: &Graph) -> usize {
    let n = g.num_vertices();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut best = usize::from(n > 0);
    for &start in by_degree.iter().take(16) {
        let mut cand: Vec<usize> = g.neighbors(start).to_vec();
        let mut size = 1;
        while !cand.is_empty() {
            let &next = cand
                .iter()
                .max_by_key(|&&v| (g.degree(v), std::cmp::Reverse(v)))
                .unwrap();
            size += 1;
            cand = crate::graph::kernels::sorted_intersection(&cand, g.neighbors(next));
        }
        best = best.max(size);
    }
    best
}

/// Lists every maximum clique of `g`.
///
/// The empty graph yields `omega = 0` with a single empty clique. On timeout
/// the error carries the largest clique size seen so far.
pub fn enumerate_maximum_cliques(g: &Graph, time_limit: Option<Duration>) -> Result<MceResult> {
    let start = Instant::now();
    let n = g.num_vertices();
    if n == 0 {
        return Ok(MceResult {
            omega: 0,
            cliques: vec![Vec::new()],
            nodes_explored: 0,
            elapsed: start.elapsed(),
        });
    }
    let lower = greedy_clique_size(g);
    let mut keep = k_core_vertices(g, lower - 1);
    // highest degree first
    keep.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut index = vec![usize::MAX; n];
    for (i, &v) in keep.iter().enumerate() {
        index[v] = i;
    }
    let m = keep.len();
    let mut adj = vec![BitSet::new(m); m];
    for (i, &v) in keep.iter().enumerate() {
        for &u in g.neighbors(v) {
            if index[u] != usize::MAX {
                adj[i].insert(index[u]);
            }
        }
    }
    let mut search = Search {
        adj,
        original: &keep,
        best: lower,
        found: Vec::new(),
        clique: Vec::new(),
        nodes: 0,
        start,
        deadline: time_limit,
        timed_out: false,
    };
    let mut all = BitSet::new(m);
    for i in 0..m {
        all.insert(i);
    }
    search.expand(all);
    if search.timed_out {
        return Err(Error::Timeout {
            lower_bound: search.best,
            elapsed: start.elapsed(),
        });
    }
    let mut cliques = search.found;
    cliques.sort();
    debug_assert!(!cliques.is_empty());
    Ok(MceResult {
        omega: search.best,
        cliques,
        nodes_explored: search.nodes,
        elapsed: start.elapsed(),
    })
}

/// k-core reduction at `omega - 1` given the true clique number. Every
/// vertex of a `K_omega` keeps `omega - 1` neighbors inside it, so no
/// maximum clique is lost.
pub fn omega_oracle_prune(g: &Graph, omega: usize) -> Result<Graph> {
    if omega < 1 {
        return Err(Error::Argument("omega must be at least 1".into()));
    }
    Ok(k_core_prune(g, omega - 1))
}

/// Clique accuracy of a reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accuracy {
    /// Both omega and the number of maximum cliques preserved.
    pub strict: bool,
    /// Returned clique at most one smaller than the optimum.
    pub relaxed: bool,
    /// `omega_before - omega_after`
    pub omega_loss: usize,
}

pub fn clique_accuracy(original: &MceResult, reduced: &MceResult) -> Accuracy {
    Accuracy {
        strict: original.omega == reduced.omega && original.count() == reduced.count(),
        relaxed: reduced.omega + 1 >= original.omega,
        omega_loss: original.omega.saturating_sub(reduced.omega),
    }
}

/// One evaluation row comparing an instance with its reduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub vertices: usize,
    pub edges: usize,
    pub vertex_ratio: f64,
    pub edge_ratio: f64,
    pub omega_before: usize,
    pub omega_after: usize,
    pub count_before: usize,
    pub count_after: usize,
    pub accuracy: Accuracy,
}

pub fn evaluate(
    original: &Graph,
    original_mce: &MceResult,
    reduced: &Graph,
    reduced_mce: &MceResult,
) -> Evaluation {
    let ratio = |after: usize, before: usize| {
        if before == 0 {
            0.0
        } else {
            (before - after) as f64 / before as f64
        }
    };
    Evaluation {
        vertices: original.num_vertices(),
        edges: original.num_edges(),
        vertex_ratio: ratio(reduced.num_vertices(), original.num_vertices()),
        edge_ratio: ratio(reduced.num_edges(), original.num_edges()),
        omega_before: original_mce.omega,
        omega_after: reduced_mce.omega,
        count_before: original_mce.count(),
        count_after: reduced_mce.count(),
        accuracy: clique_accuracy(original_mce, reduced_mce),
    }
}
