use qaoalab::dynamics::{iterate_to_fixed_point, Order};
use qaoalab::experiments::{moments_mc, separation_scan, walk_experiment, ExperimentConfig};
use qaoalab::graph::generate;
use qaoalab::stats::spearman;

#[test]
fn cycle4_mean_matches_fixed_point() {
    let g = generate("cycle:4").unwrap();
    let fp = iterate_to_fixed_point(&g, Order::First, 1e-10, 10_000).unwrap();
    assert!(fp.converged);
    assert!((fp.moment - 2.0).abs() < 1e-6);
    let mc = moments_mc(&ExperimentConfig::default(), &g, 20, 20_000, 3).unwrap();
    assert!((mc.mu1.mean - fp.moment).abs() <= 4.0 * mc.mu1.stderr);
}

#[test]
fn walk_gap_grows_with_distance() {
    let g = generate("cl:4").unwrap();
    let rows = walk_experiment(&ExperimentConfig::default(), &g, 20, 4, 200, 5).unwrap();
    let ks: Vec<f64> = rows.iter().map(|r| r.step as f64).collect();
    let gaps: Vec<f64> = rows.iter().map(|r| r.gap.mean).collect();
    assert_eq!(gaps[0], 0.0);
    assert!(spearman(&ks, &gaps) > 0.0);
}

#[test]
fn triangle_free_ladders_agree_at_level_one() {
    let graphs = vec![
        ("cl:8".to_string(), generate("cl:8").unwrap()),
        ("ml:8".to_string(), generate("ml:8").unwrap()),
    ];
    let rows = separation_scan(&ExperimentConfig::default(), &graphs, 1, 10, 2, 1e-9).unwrap();
    assert_eq!(rows[0].level, None);
    assert!(rows[0].max_gap < 1e-9);
}
