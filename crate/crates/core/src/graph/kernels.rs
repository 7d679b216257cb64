use super::Graph;
use crate::error::{Error, Result};

pub const DEFAULT_EIG_TOL: f64 = 1e-10;
pub const DEFAULT_EIG_MAX_ITERS: usize = 10_000;

/// Number of edges among the neighbors of every vertex.
pub(crate) fn neighbor_edge_counts(g: &Graph) -> Vec<usize> {
    (0..g.num_vertices())
        .map(|v| {
            let nv = g.neighbors(v);
            nv.iter()
                .map(|&u| {
                    // count w in N(u) ∩ N(v) with w > u, so each edge is seen once
                    let nu = g.neighbors(u);
                    let a = &nu[nu.partition_point(|&w| w <= u)..];
                    let b = &nv[nv.partition_point(|&w| w <= u)..];
                    sorted_intersection_len(a, b)
                })
                .sum()
        })
        .collect()
}

pub(crate) fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

pub(crate) fn sorted_intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Local clustering coefficient: edges among `N(v)` over `C(deg v, 2)`,
/// zero for vertices of degree below two.
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    neighbor_edge_counts(g)
        .into_iter()
        .enumerate()
        .map(|(v, links)| {
            let d = g.degree(v);
            if d < 2 {
                0.0
            } else {
                links as f64 / (d * (d - 1) / 2) as f64
            }
        })
        .collect()
}

/// Dominant adjacency eigenvector, scaled to a maximum entry of one.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigencentrality {
    pub scores: Vec<f64>,
    pub eigenvalue: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration on `A + I` from the all-ones vector.
///
/// The unit shift keeps bipartite graphs from oscillating between the two
/// extreme eigenvectors; it does not change the eigenvectors themselves.
/// Convergence is declared once `‖Av − λv‖∞ ≤ tol` with `λ` the Rayleigh
/// quotient. On disconnected graphs the component with the largest spectral
/// radius dominates and weaker components decay towards zero.
pub fn eigencentrality(g: &Graph, tol: f64, max_iters: usize) -> Result<Eigencentrality> {
    if g.num_edges() == 0 {
        return Err(Error::Degenerate(
            "eigencentrality needs at least one edge".into(),
        ));
    }
    let n = g.num_vertices();
    let mut x = vec![1.0; n];
    let mut ax = vec![0.0; n];
    let mut iterations = 0;
    let mut eigenvalue;
    let mut residual;
    loop {
        for (v, slot) in ax.iter_mut().enumerate() {
            *slot = g.neighbors(v).iter().map(|&u| x[u]).sum();
        }
        let num: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        let den: f64 = x.iter().map(|a| a * a).sum();
        eigenvalue = num / den;
        residual = x
            .iter()
            .zip(&ax)
            .map(|(xi, yi)| (yi - eigenvalue * xi).abs())
            .fold(0.0, f64::max);
        if residual <= tol || iterations >= max_iters {
            break;
        }
        let mut max = 0.0f64;
        for v in 0..n {
            x[v] += ax[v];
            max = max.max(x[v]);
        }
        for xi in &mut x {
            *xi /= max;
        }
        iterations += 1;
    }
    for (v, xi) in x.iter_mut().enumerate() {
        if g.degree(v) == 0 {
            *xi = 0.0;
        }
    }
    Ok(Eigencentrality {
        scores: x,
        eigenvalue,
        residual,
        iterations,
        converged: residual <= tol,
    })
}

/// A proper vertex coloring with colors numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub colors: Vec<usize>,
    pub num_colors: usize,
}

impl Coloring {
    pub fn is_proper(&self, g: &Graph) -> bool {
        g.edges().all(|(u, v)| self.colors[u] != self.colors[v])
    }

    /// Distinct colors among `vertices`.
    pub fn distinct_colors<'a, I: IntoIterator<Item = &'a usize>>(&self, vertices: I) -> usize {
        let mut seen = vec![false; self.num_colors + 1];
        let mut count = 0;
        for &v in vertices {
            let c = self.colors[v];
            if !seen[c] {
                seen[c] = true;
                count += 1;
            }
        }
        count
    }
}

/// Greedy coloring in ascending vertex order.
pub fn greedy_coloring(g: &Graph) -> Coloring {
    let order: Vec<usize> = (0..g.num_vertices()).collect();
    greedy_coloring_with_order(g, &order).expect("identity order is a permutation")
}

/// Greedy coloring visiting vertices in `order`; each vertex takes the
/// smallest color absent from its already-colored neighbors.
pub fn greedy_coloring_with_order(g: &Graph, order: &[usize]) -> Result<Coloring> {
    let n = g.num_vertices();
    if order.len() != n {
        return Err(Error::Argument("order must list every vertex once".into()));
    }
    let mut colors = vec![0usize; n];
    // mark[c] == stamp means color c is taken by a neighbor of the current vertex
    let mut mark = vec![usize::MAX; n + 2];
    let mut num_colors = 0;
    for (stamp, &v) in order.iter().enumerate() {
        if v >= n || colors[v] != 0 {
            return Err(Error::Argument("order must list every vertex once".into()));
        }
        for &u in g.neighbors(v) {
            mark[colors[u]] = stamp;
        }
        let c = (1..).find(|&c| mark[c] != stamp).unwrap();
        colors[v] = c;
        num_colors = num_colors.max(c);
    }
    Ok(Coloring { colors, num_colors })
}

/// Maximal induced subgraph with minimum degree at least `k`.
pub fn k_core_prune(g: &Graph, k: usize) -> Graph {
    g.induced_subgraph(&k_core_vertices(g, k))
        .expect("kept ids are in range")
}

/// Vertices of the `k`-core, ascending.
pub(crate) fn k_core_vertices(g: &Graph, k: usize) -> Vec<usize> {
    let n = g.num_vertices();
    let mut degree = g.degrees();
    let mut removed = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] < k).collect();
    for &v in &stack {
        removed[v] = true;
    }
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            if !removed[u] {
                degree[u] -= 1;
                if degree[u] < k {
                    removed[u] = true;
                    stack.push(u);
                }
            }
        }
    }
    (0..n).filter(|&v| !removed[v]).collect()
}
