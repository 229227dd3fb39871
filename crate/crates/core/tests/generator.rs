use std::collections::BTreeMap;

use hisgen::distributions::{connectivity_edge_count, DegreeModel};
use hisgen::hsg::{
    generate_observed, parse_stage, EntryList, Generation, GeneratorConfig, Observer, Phase, ProbabilityList,
};
use hisgen::rng::seeded;
use hisgen::{generate, Error};

#[derive(Default)]
struct Audit {
    lists: usize,
    worst_sum_error: f64,
    masking_violations: usize,
    densify_lists: usize,
}

impl Observer for Audit {
    fn list_built(&mut self, phase: Phase, list: &ProbabilityList, entries: &EntryList) {
        self.lists += 1;
        let sum: f64 = list.weights().iter().sum();
        self.worst_sum_error = self.worst_sum_error.max((sum - 1.0).abs());
        if phase == Phase::Densify {
            self.densify_lists += 1;
            for i in 0..entries.substructure_count() {
                if entries.has_active_non_anchor(i) && list.weights()[entries.anchor(i)] != 0.0 {
                    self.masking_violations += 1;
                }
            }
        }
    }
}

fn run(cfg: &GeneratorConfig) -> (Generation, Audit) {
    let mut audit = Audit::default();
    let generation = generate_observed(cfg, &mut audit).unwrap();
    (generation, audit)
}

#[test]
fn budgets_cap_masking_and_normalization() {
    for (n, m, d_max) in [(30, 40, 4), (60, 200, 10), (100, 300, 10), (100, 247, 5), (50, 49, 3)] {
        for seed in 0..10 {
            let cfg = GeneratorConfig::new(n, m, d_max).with_seed(seed);
            let (generation, audit) = run(&cfg);
            let g = &generation.graph;
            assert_eq!(g.node_count(), n);
            assert_eq!(g.edge_count(), m);
            assert!(g.max_degree() <= d_max, "({n}, {m}, {d_max}) seed {seed}");
            assert!(audit.worst_sum_error < 1e-9);
            assert_eq!(audit.masking_violations, 0);
        }
    }
}

#[test]
fn tree_example() {
    let g = generate(&GeneratorConfig::new(6, 5, 5).with_seed(7)).unwrap();
    assert_eq!((g.node_count(), g.edge_count()), (6, 5));
    assert!(g.is_connected());
}

#[test]
fn mean_degree_is_forced() {
    for seed in 0..100 {
        let g = generate(&GeneratorConfig::new(100, 300, 10).with_seed(seed)).unwrap();
        let mean = g.degrees().iter().sum::<usize>() as f64 / 100.0;
        assert_eq!(mean, 6.0);
    }
}

#[test]
fn degree_histogram_close_to_truncated_poisson() {
    let mut hist = [0.0f64; 11];
    for seed in 0..100 {
        let g = generate(&GeneratorConfig::new(100, 300, 10).with_seed(seed)).unwrap();
        for d in g.degrees() {
            hist[d] += 1.0;
        }
    }
    let total: f64 = hist.iter().sum();
    let model = DegreeModel::Poisson { lambda: 6.0 };
    let mass: Vec<f64> = (0..=10).map(|d| model.mass(d)).collect();
    let z: f64 = mass.iter().sum();
    let tv = 0.5 * hist.iter().zip(&mass).map(|(h, p)| (h / total - p / z).abs()).sum::<f64>();
    assert!(tv < 0.15, "tv = {tv}");
}

#[test]
fn identical_seeds_give_identical_edges() {
    let cfg = GeneratorConfig::new(200, 900, 20).with_seed(42);
    assert_eq!(generate(&cfg).unwrap().edges(), generate(&cfg).unwrap().edges());
    let other = generate(&cfg.clone().with_seed(43)).unwrap();
    assert_ne!(generate(&cfg).unwrap().edges(), other.edges());
}

#[test]
fn limits_off_may_exceed_dmax() {
    let exceeded = (0..20).any(|seed| {
        let cfg = GeneratorConfig::new(100, 400, 5).with_limits(false, false).with_seed(seed);
        generate(&cfg).unwrap().max_degree() > 5
    });
    assert!(exceeded);
}

#[test]
fn connected_above_threshold() {
    let n = 100;
    let m = connectivity_edge_count(n, 1.0);
    let connected = (0..200)
        .filter(|&seed| generate(&GeneratorConfig::new(n, m, 30).with_seed(seed)).unwrap().is_connected())
        .count();
    assert!(connected >= 190, "{connected} of 200");
}

#[test]
fn reference_mode_without_halving() {
    let cfg = GeneratorConfig::new(60, 150, 8).with_batch_halving(false).with_seed(5);
    let (generation, _) = run(&cfg);
    assert_eq!(generation.graph.edge_count(), 150);
    let added_in_densify = 150 - generation.substructures.node_count() + generation.substructures.len()
        - generation.bridge_edges.len();
    assert!(generation.scans >= added_in_densify);
}

#[test]
fn non_anchor_degree_tracks_average() {
    let cfg = GeneratorConfig::new(1000, 2000, 10);
    let mut sum = 0.0;
    let mut count = 0usize;
    for seed in 0..100 {
        let generation = generate_observed(&cfg.clone().with_seed(seed), &mut ()).unwrap();
        let anchors = generation.substructures.anchors();
        let degrees = generation.graph.degrees();
        let mut is_anchor = vec![false; 1000];
        anchors.iter().for_each(|&a| is_anchor[a] = true);
        for (v, &d) in degrees.iter().enumerate() {
            if !is_anchor[v] {
                sum += d as f64;
                count += 1;
            }
        }
    }
    let mean = sum / count as f64;
    assert!((mean - 4.0).abs() / 4.0 < 0.10, "mean non-anchor degree {mean}");
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = [
        GeneratorConfig::new(10, 5, 3),
        GeneratorConfig::new(10, 46, 9),
        GeneratorConfig::new(10, 30, 3),
        GeneratorConfig::new(10, 20, 0),
    ];
    for cfg in bad {
        assert!(matches!(generate(&cfg), Err(Error::InvalidConfig(_))), "{cfg:?}");
    }
}

#[test]
fn other_models_run() {
    let base = GeneratorConfig::new(120, 360, 12);
    for model in [
        DegreeModel::Normal { mean: 6.0, std_dev: 1.0 },
        DegreeModel::Uniform { a: 0.0, b: 12.0 },
        DegreeModel::Exponential { rate: 1.0 / 6.0 },
        DegreeModel::Gamma { alpha: 6.0, beta: 1.0 },
        DegreeModel::Pareto { k: 6.0, x_min: 1.0 },
    ] {
        let g = generate(&base.clone().with_model(model.clone()).with_seed(1)).unwrap();
        assert_eq!(g.edge_count(), 360, "{model:?}");
        assert!(g.max_degree() <= 12);
    }
}

#[test]
fn anchor_degree_frequencies() {
    let cfg = GeneratorConfig::new(2000, 6000, 12);
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let subs = parse_stage(&cfg, &mut seeded(9)).unwrap();
    for &d in &subs.anchor_degrees[1..subs.len() - 1] {
        *counts.entry(d).or_default() += 1;
    }
    assert!(counts.keys().all(|&d| d <= cfg.anchor_cap()));
    let mode = counts.iter().max_by_key(|(_, &c)| c).map(|(&d, _)| d).unwrap();
    assert!((5..=6).contains(&mode), "mode {mode}");
}
