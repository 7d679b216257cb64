mod common;

use common::random_graph;
use mceprune::classifier::{build_training_set, train, LabeledSet, LinearModel, TrainConfig};
use mceprune::error::Error;
use mceprune::features::{compute_vertex_features, FeatureKind, FeatureProfile};
use mceprune::mce::enumerate_maximum_cliques;
use mceprune::sparsify::{
    fit_multistage, prune_once, run_strategy, PruneConfig, StageLabels, TrainingInstance,
};
use mceprune::synth::{build_planted_corpus, planted_instance};
use mceprune::Graph;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn planted_profile() -> FeatureProfile {
    FeatureProfile::Planted { p: 0.5 }
}

fn small_model() -> (LabeledSet, LinearModel) {
    let c = build_planted_corpus(64, 0.5, 10, 400, 3).unwrap();
    let m = train(std::slice::from_ref(&c.set), &TrainConfig::default()).unwrap();
    (c.set, m)
}

fn solved(name: &str, g: Graph) -> TrainingInstance {
    let mce = enumerate_maximum_cliques(&g, None).unwrap();
    TrainingInstance {
        name: name.into(),
        graph: g,
        mce,
    }
}

#[test]
fn training_lowers_the_loss() {
    let (set, m) = small_model();
    let zero = LinearModel::constant(FeatureKind::Vertex, planted_profile(), 0.0);
    let sets = std::slice::from_ref(&set);
    assert!((zero.log_loss(sets).unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
    assert!(m.log_loss(sets).unwrap() < zero.log_loss(sets).unwrap());
    let short = train(sets, &TrainConfig { epochs: 5, ..Default::default() }).unwrap();
    assert!(m.log_loss(sets).unwrap() < short.log_loss(sets).unwrap());
}

#[test]
fn predictions_are_complementary() {
    let (set, m) = small_model();
    for row in &set.rows {
        let p0 = m.predict_p0(row).unwrap();
        let p1 = m.predict_p1(row).unwrap();
        assert_eq!(p0 + p1, 1.0);
        assert!(p0 > 0.0 && p0 < 1.0);
    }
}

#[test]
fn affine_rescaling_leaves_predictions_unchanged() {
    let (set, m) = small_model();
    let scale: Vec<(f64, f64)> = (0..10)
        .map(|j| {
            let a = [3.0, 0.5, -2.0, 10.0, 0.1, -0.25, 7.0, 1.5, -4.0, 0.2][j];
            (a, j as f64 * 13.0 - 40.0)
        })
        .collect();
    let rescale = |r: &Vec<f64>| -> Vec<f64> {
        r.iter().zip(&scale).map(|(x, (a, b))| a * x + b).collect()
    };
    let mut moved = set.clone();
    moved.rows = set.rows.iter().map(rescale).collect();
    let m2 = train(std::slice::from_ref(&moved), &TrainConfig::default()).unwrap();
    for row in &set.rows {
        let a = m.predict_p0(row).unwrap();
        let b = m2.predict_p0(&rescale(row)).unwrap();
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn pruning_is_monotone_in_the_threshold() {
    let (_, m) = small_model();
    for seed in 0..10u64 {
        let g = planted_instance(64, 0.5, 12, 500 + seed).unwrap().graph;
        let mut previous: Option<Vec<usize>> = None;
        for q in [0.3, 0.55, 0.75, 0.95, 1.0] {
            let (_, removed) = prune_once(&g, &m, q).unwrap();
            if let Some(prev) = &previous {
                assert!(removed.iter().all(|v| prev.contains(v)), "seed {seed} q {q}");
            }
            previous = Some(removed);
        }
    }
}

#[test]
fn forced_removal_and_boundary() {
    let g = random_graph(30, 0.3, 2);
    let always = LinearModel::constant(FeatureKind::Vertex, FeatureProfile::RealGraph, -5.0);
    let (h, removed) = prune_once(&g, &always, 0.5).unwrap();
    assert_eq!(h.num_vertices(), 0);
    assert_eq!(removed.len(), 30);
    let (h, removed) = prune_once(&g, &always, 1.0).unwrap();
    assert!(removed.is_empty());
    assert_eq!(h.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
}

#[test]
fn single_stage_strategy_matches_prune_once() {
    let (_, m) = small_model();
    let g = planted_instance(64, 0.5, 12, 77).unwrap().graph;
    let report = run_strategy(&g, std::slice::from_ref(&m), &PruneConfig::cc(0.55, 1)).unwrap();
    let (h, removed) = prune_once(&g, &m, 0.55).unwrap();
    assert_eq!(report.stage_removed, vec![removed]);
    assert_eq!(report.final_graph.edges().collect::<Vec<_>>(), h.edges().collect::<Vec<_>>());
}

#[test]
fn multi_stage_reports_are_consistent_and_deterministic() {
    let (_, m) = small_model();
    let cfg = PruneConfig::ic_ending_at(0.55, 0.05, 0.95).unwrap();
    assert_eq!(cfg.stages, 9);
    for seed in 0..5u64 {
        let g = planted_instance(64, 0.5, 13, 900 + seed).unwrap().graph;
        let a = run_strategy(&g, std::slice::from_ref(&m), &cfg).unwrap();
        let b = run_strategy(&g, std::slice::from_ref(&m), &cfg).unwrap();
        assert!(a.same_outcome(&b));
        let mut all: Vec<usize> = a.stage_removed.concat();
        let total = all.len();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), total, "stage sets overlap");
        assert_eq!(a.vertex_ratio, total as f64 / 64.0);
        assert!(a.stage_vertex_ratios.windows(2).all(|w| w[0] <= w[1]));
        assert!(a.stage_edge_ratios.windows(2).all(|w| w[0] <= w[1]));
        assert!((0.0..=1.0).contains(&a.edge_ratio));
        assert_eq!(a.kept.len() + total, 64);
    }
}

#[test]
fn thresholds_above_one_are_rejected() {
    let cfg = PruneConfig::ic(0.9, 0.1, 3);
    let m = LinearModel::constant(FeatureKind::Vertex, FeatureProfile::RealGraph, 0.0);
    let g = random_graph(10, 0.5, 1);
    assert!(matches!(run_strategy(&g, &[m], &cfg), Err(Error::Config(_))));
}

fn planted_training_corpus(count: u64) -> Vec<TrainingInstance> {
    (0..count)
        .map(|s| {
            let inst = planted_instance(64, 0.5, 10, 10_000 + s).unwrap();
            solved(&format!("p{s}"), inst.graph)
        })
        .collect()
}

#[test]
fn two_stage_fit_shrinks_the_second_training_set() {
    let corpus = planted_training_corpus(50);
    let fit = fit_multistage(
        &corpus,
        &PruneConfig::cc(0.55, 2),
        &TrainConfig::default(),
        planted_profile(),
        StageLabels::Original,
    )
    .unwrap();
    assert_eq!(fit.models.len(), 2);
    assert!(fit.stage_rows[1] < fit.stage_rows[0], "{:?}", fit.stage_rows);
}

#[test]
fn one_stage_fit_equals_direct_training() {
    let corpus = planted_training_corpus(8);
    let cfg = TrainConfig { seed: 21, ..Default::default() };
    let fit = fit_multistage(&corpus, &PruneConfig::cc(0.55, 1), &cfg, planted_profile(), StageLabels::Original)
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sets: Vec<LabeledSet> = corpus
        .iter()
        .map(|inst| {
            let f = compute_vertex_features(&inst.graph, planted_profile()).unwrap();
            build_training_set(&inst.mce, &f, planted_profile(), rng.next_u64(), &inst.name).unwrap()
        })
        .collect();
    let direct = train(&sets, &cfg).unwrap();
    assert_eq!(fit.models[0], direct);
}

#[test]
fn resolved_labels_also_fit() {
    let corpus = planted_training_corpus(10);
    let fit = fit_multistage(
        &corpus,
        &PruneConfig::cc(0.55, 2),
        &TrainConfig::default(),
        planted_profile(),
        StageLabels::Resolve,
    )
    .unwrap();
    assert_eq!(fit.models.len(), 2);
}

#[test]
fn all_positive_stage_is_a_fit_error() {
    let corpus: Vec<TrainingInstance> =
        (4..8).map(|n| solved(&format!("k{n}"), Graph::complete(n))).collect();
    let err = fit_multistage(
        &corpus,
        &PruneConfig::cc(0.9, 1),
        &TrainConfig::default(),
        FeatureProfile::RealGraph,
        StageLabels::Original,
    )
    .unwrap_err();
    assert!(matches!(err, Error::Fit { stage: 1, .. }), "{err:?}");
}

#[test]
fn planted_model_ranks_a_statistical_feature_above_graph_size() {
    let c = build_planted_corpus(64, 0.5, 10, 10_000, 1).unwrap();
    let m = train(std::slice::from_ref(&c.set), &TrainConfig::default()).unwrap();
    let ranking = m.coefficient_ranking();
    let weight = |name: &str| ranking.iter().find(|(n, _)| *n == name).unwrap().1;
    let best_statistical = ["F6", "F7", "F8", "F9"].map(weight).into_iter().fold(0.0, f64::max);
    assert!(best_statistical > weight("F1"));
    assert!(best_statistical > weight("F2"));
}

#[test]
fn planted_model_beats_chance_on_held_out_vertices() {
    let c = build_planted_corpus(64, 0.5, 10, 2000, 1).unwrap();
    let held = build_planted_corpus(64, 0.5, 10, 2000, 999).unwrap();
    let m = train(std::slice::from_ref(&c.set), &TrainConfig::default()).unwrap();
    let acc = m.accuracy(std::slice::from_ref(&held.set)).unwrap();
    assert!(acc >= 0.8, "held-out accuracy {acc}");
}
