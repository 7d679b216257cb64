mod common;

use common::{arb_graph, arb_graph_and_perm};
use mceprune::althea::{categorize, chebyshev_mass, degree_stats, significance};
use mceprune::features::{
    chi_square, edge_features, edges_removable_by_color_rule, order_k_lcc, vertex_features,
    FeatureProfile, GraphKernels,
};
use mceprune::graph::{bridged_triangles, greedy_coloring, greedy_coloring_with_order, Coloring};
use mceprune::Graph;
use num_rational::Ratio;
use proptest::prelude::*;

fn transport(c: &Coloring, perm: &[usize]) -> Coloring {
    let mut colors = vec![0; c.colors.len()];
    for (v, &col) in c.colors.iter().enumerate() {
        colors[perm[v]] = col;
    }
    Coloring {
        colors,
        num_colors: c.num_colors,
    }
}

/// Center 6 joined to vertex 0 of triangle {0,1,2} and vertex 3 of {3,4,5}.
fn figure_two() -> Graph {
    Graph::from_edges(7, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (6, 0), (6, 3)]).unwrap()
}

/// Minimum over all proper colorings with the fewest colors of the fraction
/// of colors seen in `N(v)`, together with that chromatic number.
fn exhaustive_local_chromatic_density(g: &Graph, v: usize) -> (Ratio<usize>, usize) {
    let n = g.num_vertices();
    for k in 1..=n {
        let mut best: Option<usize> = None;
        let mut colors = vec![0usize; n];
        let total = k.pow(n as u32);
        for code in 0..total {
            let mut x = code;
            for c in colors.iter_mut() {
                *c = x % k;
                x /= k;
            }
            if g.edges().any(|(a, b)| colors[a] == colors[b]) {
                continue;
            }
            let mut seen: Vec<usize> = g.neighbors(v).iter().map(|&u| colors[u]).collect();
            seen.sort_unstable();
            seen.dedup();
            best = Some(best.map_or(seen.len(), |b: usize| b.min(seen.len())));
        }
        if let Some(b) = best {
            return (Ratio::new(b, k), k);
        }
    }
    unreachable!()
}

#[test]
fn figure_two_local_chromatic_density() {
    let g = figure_two();
    let (truth, chromatic) = exhaustive_local_chromatic_density(&g, 6);
    assert_eq!(chromatic, 3);
    assert_eq!(truth, Ratio::new(1, 3));

    let coloring = greedy_coloring(&g);
    assert_eq!(coloring.num_colors, 3);
    assert_eq!(coloring.colors[0], coloring.colors[3]);
    let k = GraphKernels::compute(&g).unwrap();
    let f = vertex_features(&g, &coloring, &k.eig, FeatureProfile::RealGraph).unwrap();
    assert!((f.rows[6][9] - 1.0 / 3.0).abs() < 1e-15);

    // a worse order gives the two neighbors different colors
    let other = greedy_coloring_with_order(&g, &[0, 1, 2, 4, 5, 3, 6]).unwrap();
    let f = vertex_features(&g, &other, &k.eig, FeatureProfile::RealGraph).unwrap();
    assert!(f.rows[6][9] > 1.0 / 3.0);
}

#[test]
fn bridge_graph_examples() {
    let g = bridged_triangles();
    let k = GraphKernels::compute(&g).unwrap();
    let f = vertex_features(&g, &k.coloring, &k.eig, FeatureProfile::RealGraph).unwrap();
    let a = &f.rows[0];
    assert_eq!(a[0], 6.0);
    assert_eq!(a[1], 7.0);
    assert_eq!(a[2], 3.0);
    assert!((a[3] - 1.0 / 3.0).abs() < 1e-12);
    let mean = 14.0 / 6.0;
    assert!((a[5] - (3.0f64 - mean).powi(2) / mean).abs() < 1e-12);
    assert!((a[5] - 0.1905).abs() < 1e-4);
    assert!((a[9] - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(order_k_lcc(&g, 0, 3).unwrap(), a[3]);

    let e = edge_features(&g, &k.coloring, &k.lcc, &k.eig).unwrap();
    let ax = e.entities.iter().position(|&x| x == mceprune::features::Entity::Edge(0, 3)).unwrap();
    for j in [0, 1, 2, 3, 7, 8] {
        assert_eq!(e.rows[ax][j], 0.0);
    }
    let ab = e.entities.iter().position(|&x| x == mceprune::features::Entity::Edge(0, 1)).unwrap();
    assert!((e.rows[ab][0] - 0.25).abs() < 1e-12);
    assert!((e.rows[ab][1] - 0.4).abs() < 1e-12);
    assert_eq!(e.rows[ab][7], 1.0);

    assert_eq!(edges_removable_by_color_rule(&g, &k.coloring, 3), vec![(0, 3)]);
}

#[test]
fn complete_graph_chromatic_densities() {
    for n in 3..9 {
        let g = Graph::complete(n);
        let k = GraphKernels::compute(&g).unwrap();
        let f = vertex_features(&g, &k.coloring, &k.eig, FeatureProfile::RealGraph).unwrap();
        assert!(f.rows.iter().all(|r| (r[9] - (n - 1) as f64 / n as f64).abs() < 1e-15));
        let e = edge_features(&g, &k.coloring, &k.lcc, &k.eig).unwrap();
        assert!(e.rows.iter().all(|r| (r[8] - (n - 2) as f64 / n as f64).abs() < 1e-15));
    }
    let k3 = Graph::complete(3);
    let k = GraphKernels::compute(&k3).unwrap();
    let e = edge_features(&k3, &k.coloring, &k.lcc, &k.eig).unwrap();
    assert!((e.rows[0][0] - 1.0 / 3.0).abs() < 1e-15);
    assert!((e.rows[0][3] - 0.5).abs() < 1e-15);
}

#[test]
fn chi_square_examples() {
    assert_eq!(chi_square(&[8.0, 2.0], &[5.0, 5.0]).unwrap(), 3.6);
    assert_eq!(chi_square(&[5.0, 5.0], &[5.0, 5.0]).unwrap(), 0.0);
    assert!(chi_square(&[1.0], &[0.0]).is_err());
    assert!(chi_square(&[1.0, 2.0], &[1.0]).is_err());
}

#[test]
fn chebyshev_masses_sum_exactly() {
    assert_eq!(chebyshev_mass(1), Ratio::new(3, 4));
    assert_eq!(chebyshev_mass(2), Ratio::new(5, 36));
    let mut sum = Ratio::from_integer(0u128);
    for tau in 1..=60u64 {
        sum += chebyshev_mass(tau);
        let t = u128::from(tau) + 1;
        assert_eq!(sum, Ratio::from_integer(1) - Ratio::new(1, t * t), "tau {tau}");
    }
}

proptest! {
    #[test]
    fn vertex_features_are_equivariant((g, perm) in arb_graph_and_perm(11)) {
        prop_assume!(g.num_edges() > 0);
        let h = g.permuted(&perm).unwrap();
        let kg = GraphKernels::compute(&g).unwrap();
        let kh = GraphKernels::compute(&h).unwrap();
        let ch = transport(&kg.coloring, &perm);
        for profile in [FeatureProfile::RealGraph, FeatureProfile::Planted { p: 0.5 }] {
            let fg = vertex_features(&g, &kg.coloring, &kg.eig, profile).unwrap();
            let fh = vertex_features(&h, &ch, &kh.eig, profile).unwrap();
            for v in 0..g.num_vertices() {
                for (j, (a, b)) in fg.rows[v].iter().zip(&fh.rows[perm[v]]).enumerate() {
                    prop_assert!(a.is_finite());
                    prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()), "v={} F{} {} vs {}", v, j + 1, a, b);
                }
                prop_assert!((0.0..=1.0).contains(&fg.rows[v][3]));
                prop_assert!((0.0..=1.0).contains(&fg.rows[v][9]));
            }
        }
        let eg = edge_features(&g, &kg.coloring, &kg.lcc, &kg.eig).unwrap();
        let eh = edge_features(&h, &ch, &kh.lcc, &kh.eig).unwrap();
        for (row, ent) in eg.rows.iter().zip(&eg.entities) {
            let mceprune::features::Entity::Edge(u, v) = *ent else { unreachable!() };
            let key = mceprune::features::Entity::Edge(perm[u].min(perm[v]), perm[u].max(perm[v]));
            let i = eh.entities.iter().position(|&x| x == key).unwrap();
            for (a, b) in row.iter().zip(&eh.rows[i]) {
                prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
            }
            for j in [0, 1, 3, 4, 8] {
                prop_assert!((0.0..=1.0).contains(&row[j]));
            }
        }
    }

    #[test]
    fn chi_square_ignores_cell_order(
        cells in proptest::collection::vec((0.0f64..100.0, 0.1f64..100.0), 1..12),
        rotate in 0usize..12,
    ) {
        let (o, e): (Vec<f64>, Vec<f64>) = cells.iter().cloned().unzip();
        let r = rotate % o.len();
        let mut o2 = o.clone();
        let mut e2 = e.clone();
        o2.rotate_left(r);
        e2.rotate_left(r);
        o2.reverse();
        e2.reverse();
        let a = chi_square(&o, &e).unwrap();
        let b = chi_square(&o2, &e2).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
        prop_assert_eq!(chi_square(&e, &e).unwrap(), 0.0);
    }

    #[test]
    fn significance_is_isomorphism_invariant((g, perm) in arb_graph_and_perm(14)) {
        prop_assume!(g.num_vertices() >= 2);
        let h = g.permuted(&perm).unwrap();
        let sg = degree_stats(&g).unwrap();
        let sh = degree_stats(&h).unwrap();
        let symg = categorize(&g, &sg);
        let symh = categorize(&h, &sh);
        prop_assert_eq!(symg.tau, symh.tau);
        let a = significance(&g, &symg);
        let b = significance(&h, &symh);
        for v in 0..g.num_vertices() {
            prop_assert_eq!(symg.category[v], symh.category[perm[v]]);
            prop_assert!((a[v] - b[perm[v]]).abs() <= 1e-9 * (1.0 + a[v]));
        }
    }

    #[test]
    fn coloring_rule_never_removes_a_maximum_clique_edge(g in arb_graph(12)) {
        let r = mceprune::mce::enumerate_maximum_cliques(&g, None).unwrap();
        let c = greedy_coloring(&g);
        let removable = edges_removable_by_color_rule(&g, &c, r.omega);
        for clique in &r.cliques {
            for (i, &u) in clique.iter().enumerate() {
                for &v in &clique[i + 1..] {
                    prop_assert!(!removable.contains(&(u, v)));
                }
            }
        }
    }
}

#[test]
fn edgeless_input_is_rejected() {
    let g = Graph::empty(5);
    assert!(GraphKernels::compute(&g).is_err());
}
