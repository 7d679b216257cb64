//! Immutable simple undirected graphs and the classical kernels built on them.

mod io;
pub(crate) mod kernels;

pub use io::{load_edge_list, write_dimacs, write_edge_list, InputFormat};
pub use kernels::{
    eigencentrality, greedy_coloring, greedy_coloring_with_order, k_core_prune, local_clustering,
    Coloring, Eigencentrality, DEFAULT_EIG_MAX_ITERS, DEFAULT_EIG_TOL,
};

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n` with ascending adjacency lists.
///
/// Vertices may carry external labels (the ids they had in the input file,
/// or in the parent graph for induced subgraphs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    num_edges: usize,
    labels: Option<Vec<u64>>,
}

impl Graph {
    /// Builds a graph from an edge iterator. Self-loops are dropped and
    /// duplicate or reversed edges merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Argument(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Ok(Self::from_raw_adjacency(adjacency, None))
    }

    /// Normalizes raw (possibly unsorted, duplicated) symmetric adjacency.
    fn from_raw_adjacency(mut adjacency: Vec<Vec<usize>>, labels: Option<Vec<u64>>) -> Self {
        let mut degree_sum = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        Self {
            adjacency,
            num_edges: degree_sum / 2,
            labels,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            num_edges: 0,
            labels: None,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n)
            .map(|u| (0..n).filter(|&v| v != u).collect())
            .collect();
        Self {
            adjacency,
            num_edges: n * n.saturating_sub(1) / 2,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<u64>) -> Result<Self> {
        if labels.len() != self.num_vertices() {
            return Err(Error::Argument(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.num_vertices()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let start = list.partition_point(|&v| v <= u);
            list[start..].iter().map(move |&v| (u, v))
        })
    }

    pub fn labels(&self) -> Option<&[u64]> {
        self.labels.as_deref()
    }

    /// External label of `v`, falling back to the internal id.
    pub fn label(&self, v: usize) -> u64 {
        self.labels.as_ref().map_or(v as u64, |l| l[v])
    }

    pub fn density(&self) -> f64 {
        let n = self.num_vertices();
        if n < 2 {
            return 0.0;
        }
        2.0 * self.num_edges as f64 / (n as f64 * (n - 1) as f64)
    }

    /// Subgraph induced on `keep`, re-indexed in ascending order of the kept
    /// ids. Labels of the kept vertices are preserved.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<Graph> {
        let n = self.num_vertices();
        let mut index = vec![usize::MAX; n];
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        for (new, &old) in kept.iter().enumerate() {
            if old >= n {
                return Err(Error::Argument(format!(
                    "vertex {old} out of range for {n} vertices"
                )));
            }
            index[old] = new;
        }
        let adjacency: Vec<Vec<usize>> = kept
            .iter()
            .map(|&old| {
                self.adjacency[old]
                    .iter()
                    .filter_map(|&w| (index[w] != usize::MAX).then_some(index[w]))
                    .collect()
            })
            .collect();
        let num_edges = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        let labels = kept.iter().map(|&old| self.label(old)).collect();
        Ok(Graph {
            adjacency,
            num_edges,
            labels: Some(labels),
        })
    }

    /// Adds every missing edge among `vertices`, returning a new graph.
    pub fn with_clique(&self, vertices: &[usize]) -> Result<Graph> {
        let n = self.num_vertices();
        if let Some(&bad) = vertices.iter().find(|&&v| v >= n) {
            return Err(Error::Argument(format!(
                "vertex {bad} out of range for {n} vertices"
            )));
        }
        let mut adjacency = self.adjacency.clone();
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &vertices[i + 1..] {
                if u != v {
                    adjacency[u].push(v);
                    adjacency[v].push(u);
                }
            }
        }
        Ok(Self::from_raw_adjacency(adjacency, self.labels.clone()))
    }

    /// Relabels vertex `v` as `perm[v]`. Used to check equivariance.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Argument("not a permutation".into()));
        }
        Graph::from_edges(n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Checks every structural invariant. Intended for tests and debug asserts.
    pub fn check_invariants(&self) -> bool {
        let mut sum = 0;
        for (u, list) in self.adjacency.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            if list.iter().any(|&v| v == u || v >= self.num_vertices()) {
                return false;
            }
            if list.iter().any(|&v| self.adjacency[v].binary_search(&u).is_err()) {
                return false;
            }
            sum += list.len();
        }
        sum == 2 * self.num_edges
    }

    /// True when every pair in `vertices` is adjacent.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}

/// Two triangles `{a,b,c}` and `{x,y,z}` joined by the edge `{a,x}`, with
/// ids a=0, b=1, c=2, x=3, y=4, z=5.
pub fn bridged_triangles() -> Graph {
    Graph::from_edges(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (0, 3)])
        .expect("static edge list")
}
