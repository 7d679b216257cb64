#![allow(dead_code)]

use mceprune::Graph;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every maximum clique by subset enumeration. Only for `n <= 16`.
pub fn brute_force_cliques(g: &Graph) -> (usize, Vec<Vec<usize>>) {
    let n = g.num_vertices();
    assert!(n <= 16);
    let mut best = 0;
    let mut found: Vec<Vec<usize>> = vec![Vec::new()];
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size < best {
            continue;
        }
        let set: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        if !g.is_clique(&set) {
            continue;
        }
        if size > best {
            best = size;
            found.clear();
        }
        found.push(set);
    }
    found.sort();
    (best, found)
}

pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Graphs on up to `max_n` vertices with arbitrary edge sets.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

/// A graph together with a permutation of its vertices.
pub fn arb_graph_and_perm(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    arb_graph(max_n).prop_flat_map(|g| {
        let n = g.num_vertices();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}
